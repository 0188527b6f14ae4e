//! Property tests for the algebraic invariants of each module.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use rslab_core::characters::{char_group, gauss_beta, DirichletCharacter};
use rslab_core::coeffs::{lambda_double, lambda_rs, lambda_rs_series, lambda_std_series, rscauchy_coeff, twist_values};
use rslab_core::eulerlib::poly_mul;
use rslab_core::langlands::{
    epsilon_global, isobaric_sum, rs_naive_local, twist_unramified, GlobalRep, LocalData, RootNumber,
};
use rslab_core::matid::{clgp_reduce, content, verify_supp_decomposition, CosetContext, RatMat};
use rslab_core::random::{self, RepShape};
use rslab_core::scalar::{q_frac, q_int, RootOfUnity};
use rslab_core::symfunc::{rank, schur3, two_row_evaluation_matrix, Partition3};
use rslab_core::twists::{gl31_twist, ArchChar};
use rslab_core::Q;

fn small_q() -> impl Strategy<Value = Q> {
    (-7i64..=7, 1i64..=5).prop_map(|(n, d)| q_frac(n, d))
}

fn nonzero_q() -> impl Strategy<Value = Q> {
    small_q().prop_filter("nonzero", |x| !x.is_zero())
}

fn partition() -> impl Strategy<Value = Partition3> {
    (0u32..=7, 0u32..=7, 0u32..=7).prop_map(|(a, b, c)| {
        let mut v = [a, b, c];
        v.sort_unstable_by(|x, y| y.cmp(x));
        Partition3::new(v[0] as i64, v[1] as i64, v[2] as i64).unwrap()
    })
}

fn point() -> impl Strategy<Value = [Q; 3]> {
    (small_q(), small_q(), small_q()).prop_map(|(a, b, c)| [a, b, c])
}

fn exact_rep(seed: u64, degree: usize, p_max: u64, ramified: usize) -> GlobalRep<Q> {
    random::random_rep_exact(&mut random::stream(seed, "prop", degree as u64), RepShape { degree, p_max, ramified })
        .unwrap()
}

/// Unramified representation, for operations that reject ramified data.
fn unramified_rep(seed: u64, degree: usize, p_max: u64) -> GlobalRep<Q> {
    exact_rep(seed, degree, p_max, 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schur_is_symmetric(lam in partition(), x in point()) {
        let v = schur3(lam, &x);
        let [a, b, c] = x;
        for perm in [[&a, &c, &b], [&b, &a, &c], [&b, &c, &a], [&c, &a, &b], [&c, &b, &a]] {
            let y = [perm[0].clone(), perm[1].clone(), perm[2].clone()];
            prop_assert_eq!(&schur3(lam, &y), &v);
        }
    }

    #[test]
    fn schur_factors_off_full_columns(lam in partition(), x in point()) {
        let [l1, l2, l3] = lam.parts();
        let shifted = Partition3::new(l1 as i64 + 1, l2 as i64 + 1, l3 as i64 + 1).unwrap();
        let prod = &x[0] * &x[1] * &x[2];
        prop_assert_eq!(schur3(shifted, &x), prod * schur3(lam, &x));
    }

    #[test]
    fn two_row_schur_polynomials_are_independent(pts in prop::collection::vec((small_q(), small_q()), 40)) {
        let shapes: Vec<(u32, u32)> = (0..4u32).flat_map(|k1| (0..3u32).map(move |k2| (k1, k2))).collect();
        let m = two_row_evaluation_matrix(&shapes, &pts);
        // a degenerate draw (many repeated points) can lose rank; 40 points
        // against 12 shapes makes that practically impossible
        prop_assert_eq!(rank(m), shapes.len());
    }

    #[test]
    fn rs_factor_is_bi_additive(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let a = exact_rep(seed, 2, 7, 1);
        let a2 = exact_rep(seed ^ 1, 1, 7, 1);
        let b = exact_rep(seed ^ 2, 2, 7, 1);
        let sum = isobaric_sum(&a, &a2).unwrap();
        let lhs = rs_naive_local(sum.local(p).unwrap(), b.local(p).unwrap()).unwrap();
        let rhs = poly_mul(
            &rs_naive_local(a.local(p).unwrap(), b.local(p).unwrap()).unwrap(),
            &rs_naive_local(a2.local(p).unwrap(), b.local(p).unwrap()).unwrap(),
        );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn epsilon_global_is_multiplicative(k1 in 0i64..12, k2 in 0i64..12, e1 in 1u32..4, e2 in 1u32..4) {
        let base = GlobalRep::unramified(1, 11, |_| vec![q_int(1)]).unwrap();
        let a = base.clone().with_local(LocalData::ramified(3, vec![q_int(0)], e1, RootNumber::Exact(RootOfUnity::new(k1, 12)))).unwrap();
        let b = base.with_local(LocalData::ramified(7, vec![q_int(0)], e2, RootNumber::Exact(RootOfUnity::new(k2, 12)))).unwrap();
        let (ea, ca) = epsilon_global(&a);
        let (eb, cb) = epsilon_global(&b);
        let (es, cs) = epsilon_global(&isobaric_sum(&a, &b).unwrap());
        prop_assert_eq!(es, ea.mul(&eb));
        prop_assert_eq!(cs, ca * cb);
    }

    #[test]
    fn lambda_double_is_jointly_multiplicative(seed in any::<u64>(), m1 in 1u64..12, m2 in 1u64..12, n1 in 1u64..12, n2 in 1u64..12) {
        prop_assume!((m1 * m2).gcd(&(n1 * n2)) == 1);
        let pi = exact_rep(seed, 3, 11, 1);
        let joint = lambda_double(&pi, m1 * n1, m2 * n2).unwrap();
        prop_assert_eq!(joint, lambda_double(&pi, m1, m2).unwrap() * lambda_double(&pi, n1, n2).unwrap());
    }

    #[test]
    fn rscauchy_matches_rankin_selberg(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5]), k in 0u32..=12) {
        let pi = exact_rep(seed, 3, 5, 1);
        let tau = exact_rep(seed ^ 7, 2, 5, 1);
        prop_assert_eq!(rscauchy_coeff(&pi, &tau, p, k).unwrap(), lambda_rs(&pi, &tau, p.pow(k)).unwrap());
    }

    #[test]
    fn rankin_selberg_twist_equivariance(seed in any::<u64>(), w in prop::collection::vec(nonzero_q(), 5)) {
        let pi = exact_rep(seed, 3, 11, 1);
        let tau = unramified_rep(seed ^ 3, 2, 11);
        let primes = [2u64, 3, 5, 7, 11];
        let omega = |p: u64| w[primes.iter().position(|&x| x == p).unwrap()].clone();
        let twisted = lambda_rs_series(&pi, &twist_unramified(&tau, omega).unwrap(), 12).unwrap();
        let base = lambda_rs_series(&pi, &tau, 12).unwrap();
        let ov = twist_values(omega, 12);
        for n in 1..=12 {
            prop_assert_eq!(twisted.coeff(n), &(base.coeff(n).clone() * ov.coeff(n).clone()));
        }
    }

    #[test]
    fn zero_additive_twist_is_untwisted(seed in any::<u64>()) {
        let pi = exact_rep(seed, 3, 50, 1);
        let tw = gl31_twist(&pi, &Q::zero(), 7, ArchChar::new(0, 0.0).unwrap(), 50).unwrap();
        let std = lambda_std_series(&pi, 50).unwrap();
        for n in 1..=50 {
            prop_assert!((tw.coeff(n) - rslab_core::Field::to_c64(std.coeff(n))).norm() < 1e-12);
        }
    }

    #[test]
    fn gauss_substitution_symmetry(q in 3u64..40, idx in any::<prop::sample::Index>(), r in 0i64..40, d in 1i64..40) {
        prop_assume!((d as u64).gcd(&q) == 1);
        let group = char_group(q);
        let chi: &DirichletCharacter = idx.get(&group);
        let beta = q_frac(r, q as i64);
        let lhs = gauss_beta(chi, &(beta.clone() * q_int(d)));
        let rhs = chi.value_c64(d).conj() * gauss_beta(chi, &beta);
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn supp_decomposition_holds(u in nonzero_q(), w in nonzero_q()) {
        prop_assert!(verify_supp_decomposition(&u, &w).unwrap());
    }

    #[test]
    fn coset_reduction_is_double_coset_invariant(seed in any::<u64>(), ctx_idx in 0usize..4) {
        let mut rng = random::stream(seed, "prop.clgp", 0);
        let (p, qp, pp) = rslab_core::verify::CLGP_CONTEXTS[ctx_idx];
        let ctx = CosetContext::new(p, qp, pp).unwrap();
        let m = random::rational_matrix(&mut rng);
        let base = clgp_reduce(&m, &ctx).unwrap();
        prop_assert!(base.verify(&m));
        let (u, g) = (random::unipotent(&mut rng), random::gl2z(&mut rng, 8));
        let moved = u.mul(&m).mul(&g);
        let c = clgp_reduce(&moved, &ctx).unwrap();
        prop_assert_eq!(&c.gamma1, &base.gamma1);
        prop_assert_eq!(&c.gamma2, &base.gamma2);
        prop_assert_eq!(content(moved.get(1, 0), moved.get(1, 1)), content(m.get(1, 0), m.get(1, 1)));
        prop_assert!(g.det().abs().is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn assembled_series_is_multiplicative(seed in any::<u64>()) {
        use rand::Rng;
        let pi = exact_rep(seed, 3, 2000, 2);
        let s = lambda_std_series(&pi, 2000).unwrap();
        let mut rng = random::stream(seed, "prop.pairs", 0);
        let mut pairs = 0;
        while pairs < 1000 {
            let (m, n) = (rng.gen_range(1..=200u64), rng.gen_range(1..=200u64));
            if m.gcd(&n) != 1 || m * n > 2000 {
                continue;
            }
            prop_assert_eq!(s.coeff(m * n), &(s.coeff(m).clone() * s.coeff(n).clone()), "m = {}, n = {}", m, n);
            pairs += 1;
        }
    }
}

#[test]
fn canonical_matrix_is_a_fixed_point() {
    let ctx = CosetContext::new(5, 6, 7).unwrap();
    let m = RatMat::from_i64(2, &[0, -1, 1, 0]).unwrap();
    let rep = clgp_reduce(&m, &ctx).unwrap().representative();
    let again = clgp_reduce(&rep, &ctx).unwrap();
    assert_eq!(again.representative(), rep);
    assert_eq!(again.gamma1, q_int(5));
    assert_eq!(again.alpha, q_frac(42, 5));
}
