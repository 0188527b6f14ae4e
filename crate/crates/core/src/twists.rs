//! Additive twists for `GL(3) x GL(1)` and finite-part bookkeeping for the
//! `GL(3) x GL(2)` twisted-sum identity and its root number.
//!
//! The additive character is `e(x) = exp(2 pi i x)` throughout.
//! Archimedean integrals are not modelled; every identity here is stated on
//! Dirichlet coefficients.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::factor;
use crate::characters::{
    additive_coefficients, gauss_beta, in_nonvanishing_window, DirichletCharacter, NONVANISHING_THRESHOLD,
};
use crate::coeffs::{c_pi_tau_series, lambda_std, lambda_std_series, CheckReport, Mismatch};
use crate::error::Error;
use crate::eulerlib::DirichletSeries;
use crate::langlands::GlobalRep;
use crate::scalar::{expi_rational, Field, C64, Q};

/// Relative tolerance, scaled by `max(|lambda(n)|, 1)`, for float twist
/// identities.
pub const TWIST_TOL: f64 = 1e-10;

/// Archimedean character `sign(x)^parity |x|^{i t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchChar {
    pub parity: u32,
    pub t: f64,
}

impl ArchChar {
    pub fn new(parity: u32, t: f64) -> Result<Self, Error> {
        if parity > 1 {
            return Err(Error::InvalidInput(format!("parity must be 0 or 1, got {parity}")));
        }
        Ok(ArchChar { parity, t })
    }

    /// `omega(x)^{-1}` for `x != 0`.
    fn inverse_at(&self, x: &Q) -> C64 {
        let sign = if x.is_negative() && self.parity == 1 { -1.0 } else { 1.0 };
        if self.t == 0.0 {
            return C64::new(sign, 0.0);
        }
        let log_abs = x.abs().to_f64().unwrap_or(1.0).ln();
        C64::from_polar(sign, -self.t * log_abs)
    }
}

/// Average of `e(eta x) omega(eta x)^{-1}` over `eta` in the units `{±1}`
/// modulo those congruent to 1 mod `q`.
pub fn eq_unit_average(x: &Q, q: u64, omega: ArchChar) -> C64 {
    if x.is_zero() {
        // both orbit terms are e(0); the sign factors cancel for odd parity
        return if omega.parity == 0 || q <= 2 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    let plus = expi_rational(x) * omega.inverse_at(x);
    if q <= 2 {
        return plus;
    }
    let neg = -x.clone();
    let minus = expi_rational(&neg) * omega.inverse_at(&neg);
    (plus + minus) * 0.5
}

/// Finite part of the additive twist of `L(s, pi)` at `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveTwistSeries {
    pub beta: Q,
    pub modulus: u64,
    pub omega: ArchChar,
    pub coeffs: Vec<C64>,
}

impl AdditiveTwistSeries {
    pub fn coeff(&self, n: u64) -> C64 {
        self.coeffs[(n - 1) as usize]
    }

    fn from_lambda(lambda: &[C64], beta: &Q, modulus: u64, omega: ArchChar) -> Self {
        let coeffs = lambda
            .iter()
            .enumerate()
            .map(|(i, l)| l * eq_unit_average(&(beta * Q::from_integer((i as i64 + 1).into())), modulus, omega))
            .collect();
        AdditiveTwistSeries { beta: beta.clone(), modulus, omega, coeffs }
    }
}

/// `coeff(n) = lambda_pi(n) * eq_unit_average(n beta, modulus, omega)`.
pub fn gl31_twist<F: Field>(
    pi: &GlobalRep<F>,
    beta: &Q,
    modulus: u64,
    omega: ArchChar,
    n_max: u64,
) -> Result<AdditiveTwistSeries, Error> {
    let lambda: Vec<C64> = lambda_std_series(pi, n_max)?.values().iter().map(Field::to_c64).collect();
    Ok(AdditiveTwistSeries::from_lambda(&lambda, beta, modulus, omega))
}

fn compare_scaled(lhs: &[C64], rhs: &[C64], scale: &[C64]) -> CheckReport<C64> {
    let first_failure = lhs.iter().zip(rhs).zip(scale).enumerate().find_map(|(i, ((a, b), s))| {
        ((a - b).norm() > TWIST_TOL * s.norm().max(1.0)).then(|| Mismatch { n: i as u64 + 1, lhs: *a, rhs: *b })
    });
    CheckReport { checked: lhs.len() as u64, first_failure }
}

/// `lambda_pi(n) chi(n) = sum_{r mod q} c_r twist_{r/q}(n)` for `n <= n_max`,
/// with `c_r` from the additive-to-multiplicative identity and the twist
/// parity set by `chi(-1)`.
pub fn gl31_decomposition_check<F: Field>(
    pi: &GlobalRep<F>,
    chi: &DirichletCharacter,
    n_max: u64,
) -> Result<CheckReport<C64>, Error> {
    let c = additive_coefficients(chi)?;
    let q = chi.modulus();
    let omega = ArchChar::new(chi.parity(), 0.0)?;
    let lambda: Vec<C64> = lambda_std_series(pi, n_max)?.values().iter().map(Field::to_c64).collect();
    let lhs: Vec<C64> = lambda.iter().enumerate().map(|(i, l)| l * chi.value_c64(i as i64 + 1)).collect();
    let mut rhs = vec![C64::new(0.0, 0.0); n_max as usize];
    for (r, cr) in c.iter().enumerate() {
        let beta = Q::new((r as i64).into(), (q as i64).into());
        let tw = AdditiveTwistSeries::from_lambda(&lambda, &beta, q, omega);
        for (slot, v) in rhs.iter_mut().zip(&tw.coeffs) {
            *slot += cr * v;
        }
    }
    Ok(compare_scaled(&lhs, &rhs, &lambda))
}

/// `ζ` in the twisted-sum identity: `1`, or `q^2` when `chi` is primitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zeta {
    One,
    QSquared,
}

/// Right side of the twisted-sum identity: `prefactor * sum c(n) n^{-s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Main1Rhs<F> {
    pub prefactor: C64,
    pub series: DirichletSeries<F>,
}

/// Parameters of the twisted-sum identity over the rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedSumLevels {
    pub q1: u64,
    pub q2: u64,
    pub beta2: Q,
    pub zeta: Zeta,
}

impl TwistedSumLevels {
    /// Checks `q1`, `q2`, `beta2` and `zeta` against `chi` mod `q`.
    pub fn validate(&self, chi: &DirichletCharacter) -> Result<(), Error> {
        let q = chi.modulus();
        if !in_nonvanishing_window(chi, self.q2) {
            return Err(Error::WindowViolation(format!(
                "q2 = {} must satisfy c | q2 | lcm(c, rad q) and q2 | q (c = {}, q = {q})",
                self.q2,
                chi.conductor()
            )));
        }
        let outer: u64 =
            factor(q).into_iter().filter(|&(p, _)| (q / self.q2).is_multiple_of(p)).map(|(p, e)| p.pow(e)).product();
        if self.q1 == 0 || !q.is_multiple_of(self.q1) || !self.q1.is_multiple_of(outer) {
            return Err(Error::WindowViolation(format!("q1 = {} must satisfy {outer} | q1 | {q}", self.q1)));
        }
        let den = self.beta2.denom().to_u64();
        if den != Some(self.q2) {
            return Err(Error::WindowViolation(format!(
                "beta2 = {} must have exact denominator {}",
                self.beta2, self.q2
            )));
        }
        if self.zeta == Zeta::QSquared && chi.conductor() != q {
            return Err(Error::WindowViolation("zeta = q^2 requires a primitive character".into()));
        }
        Ok(())
    }
}

/// `q sqrt(zeta) / lcm(q1 zeta, q2) * tau_q(chi, beta2) * lambda_tau(zeta)`
/// together with the coefficients `c_{pi,tau}(n)`, `n <= n_max`.
pub fn main1_rhs<F: Field>(
    pi: &GlobalRep<F>,
    tau: &GlobalRep<F>,
    chi: &DirichletCharacter,
    levels: &TwistedSumLevels,
    n_max: u64,
) -> Result<Main1Rhs<F>, Error> {
    levels.validate(chi)?;
    let q = chi.modulus();
    let zeta = match levels.zeta {
        Zeta::One => 1,
        Zeta::QSquared => q * q,
    };
    let norm_ratio = (q as f64) * (zeta as f64).sqrt() / ((levels.q1 * zeta).lcm(&levels.q2) as f64);
    let lambda_zeta = lambda_std(tau, zeta)?.to_c64();
    let prefactor = gauss_beta(chi, &levels.beta2) * lambda_zeta * norm_ratio;
    Ok(Main1Rhs { prefactor, series: c_pi_tau_series(pi, tau, n_max)? })
}

/// Inputs to the assembled root number, as complex values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Main2Inputs {
    pub n: u64,
    pub q: u64,
    pub eps_pi: C64,
    pub eps_tau: C64,
    /// `chi_{omega_pi}(q)`.
    pub central_pi_at_q: C64,
    /// `omega_{tau,f}(n q^2)`.
    pub central_tau_at_nq2: C64,
    /// `lambda` of the dual of `tau` at `q^2`.
    pub lambda_tau_dual_q2: C64,
    pub gauss_beta2: C64,
    pub gauss_beta2_prime: C64,
}

/// `eps_pi^2 eps_tau chi_{omega_pi}(q) omega_tau(n q^2) lambda(q^2)
/// conj(tau_q(chi, beta2')) / tau_q(chi, beta2)`.
pub fn main2_epsilon(inp: &Main2Inputs) -> Result<C64, Error> {
    if inp.n.gcd(&inp.q) != 1 {
        return Err(Error::InvalidInput(format!("n = {} and q = {} must be coprime", inp.n, inp.q)));
    }
    if inp.gauss_beta2.norm() < NONVANISHING_THRESHOLD {
        return Err(Error::ZeroGaussSum);
    }
    Ok(inp.eps_pi
        * inp.eps_pi
        * inp.eps_tau
        * inp.central_pi_at_q
        * inp.central_tau_at_nq2
        * inp.lambda_tau_dual_q2
        * inp.gauss_beta2_prime.conj()
        / inp.gauss_beta2)
}

/// Conductor of the isobaric product of two families of Dirichlet
/// characters: `prod_{i,j} cond(chi_i psi_j)`.
pub fn composed_conductor(pi: &[DirichletCharacter], tau: &[DirichletCharacter]) -> u64 {
    pi.iter().flat_map(|a| tau.iter().map(move |b| a.mul(b).conductor())).product()
}

/// Composed conductor against `n^2 q^3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConductorCheck {
    pub composed: u64,
    pub expected: u64,
}

impl ConductorCheck {
    pub fn passed(&self) -> bool {
        self.composed == self.expected
    }
}

/// Compares `prod_p p^{e_p}` of declared local exponents against `n^2 q^3`.
pub fn conductor_exponent_check(n: u64, q: u64, local_exps: &BTreeMap<u64, u32>) -> Result<ConductorCheck, Error> {
    if n.gcd(&q) != 1 {
        return Err(Error::InvalidInput(format!("n = {n} and q = {q} must be coprime")));
    }
    let composed = local_exps.iter().map(|(&p, &e)| p.pow(e)).product();
    Ok(ConductorCheck { composed, expected: n * n * q * q * q })
}

/// Local exponents of a composed conductor.
pub fn conductor_exponents(conductor: u64) -> BTreeMap<u64, u32> {
    factor(conductor).into_iter().collect()
}

/// `lambda(p^2) = h_2(gamma, 0) = gamma^2` for a principal series with one
/// ramified parameter; the unramified parameter is `gamma`.
pub fn lambda_q2_one_ramified<F: Field>(gamma: &F) -> F {
    gamma.clone() * gamma.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{char_group, gauss_classical};
    use crate::coeffs::lambda_rs_series;
    use crate::langlands::{LocalData, RootNumber};
    use crate::scalar::{q_frac, q_int, RootOfUnity};

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn even() -> ArchChar {
        ArchChar::new(0, 0.0).unwrap()
    }

    fn triple_zeta(p_max: u64) -> GlobalRep<Q> {
        GlobalRep::unramified(3, p_max, |_| vec![q_int(1); 3]).unwrap()
    }

    fn divisor_count3(n: u64) -> u64 {
        (1..=n).filter(|a| n.is_multiple_of(*a)).map(|a| (1..=n / a).filter(|b| (n / a).is_multiple_of(*b)).count() as u64).sum()
    }

    #[test]
    fn eq_average_examples() {
        assert!(close(eq_unit_average(&Q::zero(), 5, even()), C64::new(1.0, 0.0)));
        let x = q_frac(1, 3);
        assert!(close(eq_unit_average(&x, 1, even()), expi_rational(&x)));
        assert!(close(eq_unit_average(&q_frac(1, 4), 7, even()), C64::new(0.0, 0.0)));
        let odd = ArchChar::new(1, 0.0).unwrap();
        assert!(close(eq_unit_average(&q_frac(1, 4), 7, odd), C64::new(0.0, 1.0)));
        assert!(ArchChar::new(2, 0.0).is_err());
    }

    #[test]
    fn twist_examples() {
        let pi = triple_zeta(60);
        let tw = gl31_twist(&pi, &Q::zero(), 1, even(), 60).unwrap();
        let lam = lambda_std_series(&pi, 60).unwrap();
        for n in 1..=60 {
            assert!(close(tw.coeff(n), lam.coeff(n).to_c64()));
        }
        let tw = gl31_twist(&pi, &q_frac(1, 3), 3, even(), 60).unwrap();
        for n in 1..=60u64 {
            let d3 = divisor_count3(n) as f64;
            let want = d3 * eq_unit_average(&q_frac(n as i64, 3), 3, even());
            assert!(close(tw.coeff(n), want), "n = {n}");
            if n % 3 == 0 {
                assert!(close(tw.coeff(n), C64::new(d3, 0.0)));
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let pi = triple_zeta(200);
        let chi = &char_group(3)[1];
        assert!(gl31_decomposition_check(&pi, chi, 200).unwrap().passed());
        assert!(gl31_decomposition_check(&pi, &DirichletCharacter::trivial(1), 50).unwrap().passed());
        let pi2 = GlobalRep::unramified(3, 100, |p| vec![q_frac(1, p as i64), q_int(2), q_frac(-3, 5)]).unwrap();
        for q in [4u64, 5, 7, 8] {
            for chi in char_group(q).into_iter().filter(DirichletCharacter::is_primitive) {
                assert!(gl31_decomposition_check(&pi2, &chi, 100).unwrap().passed());
            }
        }
    }

    #[test]
    fn main1_unramified_reduces_to_rankin_selberg() {
        let pi = GlobalRep::unramified(3, 50, |_| vec![q_int(1), q_int(2), q_int(3)]).unwrap();
        let tau = GlobalRep::unramified(2, 50, |_| vec![q_int(1), q_int(2)]).unwrap();
        let levels = TwistedSumLevels { q1: 1, q2: 1, beta2: Q::zero(), zeta: Zeta::One };
        let rhs = main1_rhs(&pi, &tau, &DirichletCharacter::trivial(1), &levels, 50).unwrap();
        assert!(close(rhs.prefactor, C64::new(1.0, 0.0)));
        assert_eq!(rhs.series, lambda_rs_series(&pi, &tau, 50).unwrap());
    }

    fn ramified_tau(p: u64, gamma: Q, cv: Q) -> GlobalRep<Q> {
        let base = GlobalRep::unramified(2, 30, |_| vec![q_int(1), q_int(-1)]).unwrap();
        base.with_local(LocalData::ramified(p, vec![gamma, Q::zero()], 1, RootNumber::ONE).with_central_value(cv))
            .unwrap()
    }

    #[test]
    fn main1_prefactors() {
        let pi = triple_zeta(30);
        let chi = char_group(5)[1].clone();
        let tau = ramified_tau(5, q_int(1), q_int(1));
        let levels = TwistedSumLevels { q1: 5, q2: 5, beta2: q_frac(2, 5), zeta: Zeta::One };
        let rhs = main1_rhs(&pi, &tau, &chi, &levels, 30).unwrap();
        assert!(close(rhs.prefactor, gauss_beta(&chi, &q_frac(2, 5))));

        let gamma = q_frac(1, 2);
        let tau = ramified_tau(5, gamma.clone(), q_int(1));
        let levels = TwistedSumLevels { zeta: Zeta::QSquared, ..levels };
        let rhs = main1_rhs(&pi, &tau, &chi, &levels, 30).unwrap();
        // q sqrt(q^2) / lcm(q^3, q) = 1/q
        let want = gauss_beta(&chi, &q_frac(2, 5)) * gamma.to_c64() * gamma.to_c64() / 5.0;
        assert!(close(rhs.prefactor, want));
    }

    #[test]
    fn main1_window_violations() {
        let pi = triple_zeta(30);
        let tau = ramified_tau(3, q_int(1), q_int(1));
        let chi = char_group(3)[1].induced(9).unwrap();
        let bad_q2 = TwistedSumLevels { q1: 9, q2: 9, beta2: q_frac(1, 9), zeta: Zeta::One };
        assert!(matches!(main1_rhs(&pi, &tau, &chi, &bad_q2, 10), Err(Error::WindowViolation(_))));
        let ok = TwistedSumLevels { q1: 9, q2: 3, beta2: q_frac(1, 3), zeta: Zeta::One };
        assert!(main1_rhs(&pi, &tau, &chi, &ok, 10).is_ok());
        let bad_q1 = TwistedSumLevels { q1: 3, ..ok.clone() };
        assert!(matches!(main1_rhs(&pi, &tau, &chi, &bad_q1, 10), Err(Error::WindowViolation(_))));
        let bad_zeta = TwistedSumLevels { zeta: Zeta::QSquared, ..ok.clone() };
        assert!(matches!(main1_rhs(&pi, &tau, &chi, &bad_zeta, 10), Err(Error::WindowViolation(_))));
        let bad_beta = TwistedSumLevels { beta2: q_frac(1, 9), ..ok };
        assert!(matches!(main1_rhs(&pi, &tau, &chi, &bad_beta, 10), Err(Error::WindowViolation(_))));
    }

    #[test]
    fn main2_examples() {
        let one = C64::new(1.0, 0.0);
        let trivial = Main2Inputs {
            n: 1,
            q: 1,
            eps_pi: one,
            eps_tau: one,
            central_pi_at_q: one,
            central_tau_at_nq2: one,
            lambda_tau_dual_q2: one,
            gauss_beta2: one,
            gauss_beta2_prime: one,
        };
        assert!(close(main2_epsilon(&trivial).unwrap(), one));
        let chi = &char_group(3)[1];
        let unit = |k, n| RootOfUnity::new(k, n).to_c64();
        let inp = Main2Inputs {
            n: 2,
            q: 3,
            eps_pi: unit(1, 5),
            eps_tau: unit(2, 7),
            central_pi_at_q: unit(1, 3),
            central_tau_at_nq2: unit(3, 4),
            lambda_tau_dual_q2: lambda_q2_one_ramified(&unit(1, 6)),
            gauss_beta2: gauss_beta(chi, &q_frac(1, 3)),
            gauss_beta2_prime: gauss_beta(chi, &q_frac(2, 3)),
        };
        assert!((main2_epsilon(&inp).unwrap().norm() - 1.0).abs() < 1e-12);
        let zero = Main2Inputs { gauss_beta2: C64::new(0.0, 0.0), ..inp };
        assert_eq!(main2_epsilon(&zero), Err(Error::ZeroGaussSum));
        assert!(main2_epsilon(&Main2Inputs { n: 3, ..inp }).is_err());
        assert!(close(gauss_beta(chi, &q_frac(1, 3)), gauss_classical(chi)));
    }

    #[test]
    fn one_ramified_lambda_matches_expansion() {
        let gamma = q_frac(-2, 7);
        let tau = ramified_tau(3, gamma.clone(), q_int(1));
        assert_eq!(lambda_std(&tau, 9).unwrap(), lambda_q2_one_ramified(&gamma));
    }

    #[test]
    fn conductor_bookkeeping() {
        let chi = char_group(3)[1].clone();
        let one = DirichletCharacter::trivial(1);
        let pi = vec![one.clone(), one.clone(), one.clone()];
        let composed = composed_conductor(&pi, &[chi, one.clone()]);
        assert_eq!(composed, 27);
        let check = conductor_exponent_check(1, 3, &conductor_exponents(composed)).unwrap();
        assert!(check.passed());
        assert!(conductor_exponent_check(1, 1, &conductor_exponents(composed_conductor(&pi, &[one.clone(), one])))
            .unwrap()
            .passed());
        let declared: BTreeMap<u64, u32> = [(2, 2), (3, 3)].into_iter().collect();
        assert!(conductor_exponent_check(2, 3, &declared).unwrap().passed());
        assert!(!conductor_exponent_check(2, 3, &[(3, 3)].into_iter().collect()).unwrap().passed());
    }
}
