//! Seeded generators for randomized identity checks.
//!
//! Every stream is a ChaCha8 generator keyed by `(seed, label, index)`, so
//! a single check can be replayed without rerunning its suite.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::primes_up_to;
use crate::characters::{char_group, DirichletCharacter};
use crate::error::Error;
use crate::langlands::{GlobalRep, LocalData, RootNumber};
use crate::matid::{Main2Instance, RatMat};
use crate::scalar::{q_frac, q_int, Field, C64, Q};

pub type LabRng = ChaCha8Rng;

/// FNV-1a, used only to turn a label into a stream id.
fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn stream(seed: u64, label: &str, index: u64) -> LabRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(label_hash(label).wrapping_add(index));
    rng
}

/// `a / b` with `|a| <= num` and `1 <= b <= den`.
pub fn rational(rng: &mut LabRng, num: i64, den: i64) -> Q {
    q_frac(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn nonzero_rational(rng: &mut LabRng, num: i64, den: i64) -> Q {
    loop {
        let x = rational(rng, num, den);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn unit_complex(rng: &mut LabRng) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

/// Shape of a random global representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepShape {
    pub degree: usize,
    pub p_max: u64,
    /// Number of ramified primes, drawn from those below 50.
    pub ramified: usize,
}

/// Random parameters at every prime up to `p_max`. At ramified primes some
/// parameters are zero, the conductor exponent is 1 or 2 and the central
/// value is the product of parameters.
pub fn random_rep<F: Field>(
    rng: &mut LabRng,
    shape: RepShape,
    draw: impl Fn(&mut LabRng) -> F,
) -> Result<GlobalRep<F>, Error> {
    let primes = primes_up_to(shape.p_max);
    let small: Vec<u64> = primes.iter().copied().filter(|&p| p < 50).collect();
    let ramified: Vec<u64> = small.choose_multiple(rng, shape.ramified.min(small.len())).copied().collect();
    let mut locals = BTreeMap::new();
    for p in primes {
        let mut params: Vec<F> = (0..shape.degree).map(|_| draw(rng)).collect();
        let d = if ramified.contains(&p) {
            let zeros = rng.gen_range(1..=shape.degree);
            for slot in params.iter_mut().skip(shape.degree - zeros) {
                *slot = F::zero();
            }
            let central = params.iter().fold(F::one(), |acc, x| acc * x.clone());
            LocalData::ramified(p, params, rng.gen_range(1..=2), RootNumber::ONE).with_central_value(central)
        } else {
            LocalData::unramified(p, params)
        };
        locals.insert(p, d);
    }
    GlobalRep::new(shape.degree, shape.p_max, locals)
}

pub fn random_rep_exact(rng: &mut LabRng, shape: RepShape) -> Result<GlobalRep<Q>, Error> {
    random_rep(rng, shape, |r| nonzero_rational(r, 3, 3))
}

pub fn random_rep_float(rng: &mut LabRng, shape: RepShape) -> Result<GlobalRep<C64>, Error> {
    random_rep(rng, shape, |r| C64::from_polar(r.gen_range(0.5..1.5), r.gen_range(0.0..TAU)))
}

/// Integer matrix with entries in `[-bound, bound]` and nonzero determinant.
pub fn int_matrix(rng: &mut LabRng, bound: i64) -> RatMat {
    loop {
        let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-bound..=bound)).collect();
        if e[0] * e[3] != e[1] * e[2] {
            return RatMat::from_i64(2, &e).expect("2x2");
        }
    }
}

/// Rational matrix with nonzero determinant.
pub fn rational_matrix(rng: &mut LabRng) -> RatMat {
    loop {
        let m = RatMat::m2(rational(rng, 9, 6), rational(rng, 9, 6), rational(rng, 9, 6), rational(rng, 9, 6));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// `(1, x; 0, 1)` with rational `x`.
pub fn unipotent(rng: &mut LabRng) -> RatMat {
    RatMat::m2(Q::one(), rational(rng, 20, 7), Q::zero(), Q::one())
}

/// Product of elementary and sign matrices in `GL_2(Z)`.
pub fn gl2z(rng: &mut LabRng, steps: usize) -> RatMat {
    let mut g = RatMat::identity(2);
    for _ in 0..steps {
        let k = q_int(rng.gen_range(-3..=3));
        let e = match rng.gen_range(0..3) {
            0 => RatMat::m2(Q::one(), k, Q::zero(), Q::one()),
            1 => RatMat::m2(Q::one(), Q::zero(), k, Q::one()),
            _ => RatMat::m2(Q::zero(), Q::one(), Q::one(), Q::zero()),
        };
        g = g.mul(&e);
    }
    g
}

/// Consistent instance of the dual-unfolding factorization: `n`, `q` and
/// `r` pairwise compatible so that `n r` is a unit mod `q`.
pub fn main2_instance(rng: &mut LabRng) -> Main2Instance {
    loop {
        let q = rng.gen_range(1..=40u64);
        let n = rng.gen_range(1..=30u64);
        let r = rng.gen_range(0..q.max(2) as i64);
        if n.gcd(&q) != 1 || (q > 1 && (r as u64).gcd(&q) != 1) {
            continue;
        }
        let a_j = q_frac(rng.gen_range(1..=12), rng.gen_range(1..=12));
        let a_k = q_frac(rng.gen_range(1..=12), rng.gen_range(1..=12));
        let u = rng.gen_range(-20..=20);
        if let Ok(inst) = Main2Instance::solve(a_j, a_k, n, q, if q == 1 { 0 } else { r }, u) {
            return inst;
        }
    }
}

/// Uniform primitive character with modulus in `moduli`.
pub fn primitive_character(rng: &mut LabRng, moduli: &[u64]) -> DirichletCharacter {
    loop {
        let q = *moduli.choose(rng).expect("nonempty");
        let prim: Vec<DirichletCharacter> =
            char_group(q).into_iter().filter(DirichletCharacter::is_primitive).collect();
        if let Some(chi) = prim.choose(rng) {
            return chi.clone();
        }
    }
}
