//! Dirichlet L-functions and their completions, for numerical
//! functional-equation checks.
//!
//! Hurwitz zeta uses Euler-Maclaurin summation with a fixed shift of
//! [`EM_SHIFT`] terms and [`EM_TERMS`] Bernoulli corrections.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{factor, primes_up_to};
use crate::characters::{gauss_classical, DirichletCharacter};
use crate::error::Error;
use crate::langlands::{GlobalRep, LocalData, RootNumber};
use crate::scalar::{C64, Q};

pub const EM_SHIFT: usize = 30;
pub const EM_TERMS: usize = 20;

/// Distance to a pole below which a point counts as on it.
pub const POLE_EPS: f64 = 1e-9;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `B_0, B_1, ..., B_n` with `B_1 = -1/2`.
pub fn bernoulli_exact(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(n + 1);
    // binomial row for m + 1, rebuilt each step
    for m in 0..=n {
        if m == 0 {
            b.push(Q::one());
            continue;
        }
        let mut binom = BigInt::one();
        let mut acc = Q::zero();
        for (k, bk) in b.iter().enumerate().take(m) {
            acc += Q::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / Q::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `B_{2j} / (2j)!` for `j = 1..=EM_TERMS`.
fn em_coeffs() -> &'static [f64] {
    static CELL: OnceLock<Vec<f64>> = OnceLock::new();
    CELL.get_or_init(|| {
        let b = bernoulli_exact(2 * EM_TERMS);
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(EM_TERMS);
        for k in 1..=2 * EM_TERMS {
            fact *= BigInt::from(k);
            if k % 2 == 0 {
                out.push((b[k].clone() / Q::from_integer(fact.clone())).to_f64().unwrap_or(0.0));
            }
        }
        out
    })
}

/// `B_{2j} / (2j (2j - 1))` for the Stirling series.
fn stirling_coeffs() -> &'static [f64] {
    static CELL: OnceLock<Vec<f64>> = OnceLock::new();
    CELL.get_or_init(|| {
        let b = bernoulli_exact(2 * EM_TERMS);
        (1..=EM_TERMS)
            .map(|j| {
                let k = 2 * j;
                (b[k].clone() / Q::from_integer(BigInt::from(k * (k - 1)))).to_f64().unwrap_or(0.0)
            })
            .collect()
    })
}

/// `zeta(s, a) = sum_{k >= 0} (k + a)^{-s}` for `0 < a <= 1`.
pub fn hurwitz_zeta(s: C64, a: f64) -> Result<C64, Error> {
    if (s - c(1.0, 0.0)).norm() < POLE_EPS {
        return Err(Error::Pole);
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidInput(format!("Hurwitz parameter {a} outside (0, 1]")));
    }
    let n = EM_SHIFT as f64;
    let head: C64 = (0..EM_SHIFT).map(|k| (c(k as f64 + a, 0.0)).powc(-s)).sum();
    let x = n + a;
    let x_pow = c(x, 0.0).powc(-s);
    let mut tail = c(x, 0.0) * x_pow / (s - 1.0) + x_pow * 0.5;
    // rising factorial s (s+1) ... (s + 2j - 2) times x^{-s-2j+1}
    let mut rising = s;
    let mut power = x_pow / x;
    for (j, coeff) in em_coeffs().iter().enumerate() {
        tail += rising * power * *coeff;
        let k = 2.0 * j as f64;
        rising = rising * (s + k + 1.0) * (s + k + 2.0);
        power /= x * x;
    }
    Ok(head + tail)
}

/// Principal-branch-free `ln Gamma(z)`: the real part is exact, the
/// imaginary part is correct modulo `2 pi`.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        return c(PI.ln(), 0.0) - (z * PI).sin().ln() - ln_gamma(c(1.0, 0.0) - z);
    }
    let mut shift = c(0.0, 0.0);
    let mut w = z;
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut series = c(0.0, 0.0);
    let mut wp = w;
    let w2 = w * w;
    for coeff in stirling_coeffs() {
        series += *coeff / wp;
        wp *= w2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

pub fn gamma(z: C64) -> C64 {
    ln_gamma(z).exp()
}

/// `psi(x)` for real `x > 0`.
pub fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 15.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = x * x;
    let mut series = x.ln() - 0.5 / x;
    let mut xp = x2;
    for (j, b) in bernoulli_exact(2 * 10).iter().enumerate().skip(2).step_by(2) {
        series -= b.to_f64().unwrap_or(0.0) / (j as f64 * xp);
        xp *= x2;
    }
    acc + series
}

/// `L(s, chi) = q^{-s} sum_{a mod q} chi(a) zeta(s, a/q)`.
pub fn dirichlet_l(s: C64, chi: &DirichletCharacter) -> Result<C64, Error> {
    let q = chi.modulus();
    if (s - c(1.0, 0.0)).norm() < POLE_EPS {
        if chi.is_trivial() {
            return Err(Error::Pole);
        }
        // L(1, chi) = -(1/q) sum chi(a) psi(a/q)
        let sum: C64 = (1..=q).map(|a| chi.value_c64(a as i64) * digamma(a as f64 / q as f64)).sum();
        return Ok(-sum / q as f64);
    }
    let mut acc = c(0.0, 0.0);
    for a in 1..=q {
        let v = chi.value_c64(a as i64);
        if v.norm() > 0.0 {
            acc += v * hurwitz_zeta(s, a as f64 / q as f64)?;
        }
    }
    Ok(acc * c(q as f64, 0.0).powc(-s))
}

/// `Lambda(s, chi) = (q/pi)^{(s+a)/2} Gamma((s+a)/2) L(s, chi)`, `a` the
/// parity of `chi`.
pub fn completed_dirichlet(s: C64, chi: &DirichletCharacter) -> Result<C64, Error> {
    let a = chi.parity() as f64;
    let half = (s + a) * 0.5;
    if chi.is_trivial() && (half.norm() < POLE_EPS) {
        return Err(Error::Pole);
    }
    let q = chi.modulus() as f64;
    Ok(c(q / PI, 0.0).powc(half) * gamma(half) * dirichlet_l(s, chi)?)
}

/// `eps(chi) = tau(chi) / (i^a sqrt q)`.
pub fn dirichlet_root_number(chi: &DirichletCharacter) -> C64 {
    let i_a = if chi.parity() == 1 { c(0.0, 1.0) } else { c(1.0, 0.0) };
    gauss_classical(chi) / (i_a * (chi.modulus() as f64).sqrt())
}

/// `|Lambda(s, chi) - eps Lambda(1 - s, conj chi)|`, relative to the
/// larger side.
pub fn dirichlet_fe_residual(s: C64, chi: &DirichletCharacter) -> Result<f64, Error> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() });
    }
    let lhs = completed_dirichlet(s, chi)?;
    let rhs = dirichlet_root_number(chi) * completed_dirichlet(c(1.0, 0.0) - s, &chi.conj())?;
    Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE))
}

/// Local root numbers `chi_p(q / p^e) tau(chi_p) / sqrt(p^e)` at `p | q`;
/// their product is `tau(chi) / sqrt q`.
pub fn local_root_numbers(chi: &DirichletCharacter) -> Vec<(u64, u32, C64)> {
    let q = chi.modulus();
    chi.prime_powers()
        .into_iter()
        .map(|(p, e)| {
            let local = chi.local_component(p).expect("p divides q");
            let pe = p.pow(e);
            let eps = local.value_c64((q / pe) as i64) * gauss_classical(&local) / (pe as f64).sqrt();
            (p, e, eps)
        })
        .collect()
}

/// Degree-one data for a primitive character: `chi(p)` at unramified
/// primes, local root numbers at ramified ones.
pub fn dirichlet_global_rep(chi: &DirichletCharacter, p_max: u64) -> Result<GlobalRep<C64>, Error> {
    let q = chi.modulus();
    let ramified: Vec<(u64, u32, C64)> = local_root_numbers(chi);
    let mut locals = std::collections::BTreeMap::new();
    for p in primes_up_to(p_max.max(q)) {
        let d = match ramified.iter().find(|r| r.0 == p) {
            Some(&(_, e, eps)) => LocalData::ramified(p, vec![c(0.0, 0.0)], e, RootNumber::Approx(eps)),
            None => LocalData::unramified(p, vec![chi.value_c64(p as i64)]),
        };
        locals.insert(p, d);
    }
    GlobalRep::new(1, p_max.max(q), locals)
}

/// Archimedean factor `Gamma_R(s) = pi^{-s/2} Gamma(s/2)` or
/// `Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GammaFactor {
    pub entries: Vec<(GammaKind, C64)>,
}

impl GammaFactor {
    pub fn degree(&self) -> usize {
        self.entries.iter().map(|(k, _)| if *k == GammaKind::Real { 1 } else { 2 }).sum()
    }

    pub fn eval(&self, s: C64) -> C64 {
        self.entries
            .iter()
            .map(|&(kind, mu)| {
                let z = s + mu;
                match kind {
                    GammaKind::Real => c(PI, 0.0).powc(-z * 0.5) * gamma(z * 0.5),
                    GammaKind::Complex => 2.0 * c(2.0 * PI, 0.0).powc(-z) * gamma(z),
                }
            })
            .product()
    }
}

/// `pi^{-(s+a)/2} Gamma((s+a)/2) L(s, chi)`: the completion without the
/// conductor power.
fn bare_completion(s: C64, chi: &DirichletCharacter) -> Result<C64, Error> {
    let g = GammaFactor { entries: vec![(GammaKind::Real, c(chi.parity() as f64, 0.0))] };
    Ok(g.eval(s) * dirichlet_l(s, chi)?)
}

/// Residuals of the product functional equation for
/// `pi = |.|^{i t_1} + |.|^{i t_2} + |.|^{i t_3}` and `tau = chi |.|^{i u} + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticFeReport {
    pub epsilon: C64,
    pub conductor: u64,
    pub residuals: Vec<(C64, f64)>,
    pub skipped: Vec<C64>,
}

impl SyntheticFeReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

fn near_trivial_pole(z: C64) -> bool {
    z.norm() < POLE_EPS || (z - c(1.0, 0.0)).norm() < POLE_EPS
}

/// Compares `Lambda(s)` with `eps N^{1/2 - s} Lambda~(1 - s)`, where
/// `Lambda(s) = prod_i Lambda0(s + i t_i + i u, chi) Lambda0(s + i t_i, 1)`
/// and the dual has negated shifts and `conj chi`.
pub fn synthetic_rs_fe_check(
    t: [f64; 3],
    chi: &DirichletCharacter,
    u: f64,
    points: &[C64],
) -> Result<SyntheticFeReport, Error> {
    let q = chi.modulus();
    if q <= 1 || !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: q, conductor: chi.conductor() });
    }
    let one = DirichletCharacter::trivial(1);
    let conductor =
        crate::twists::composed_conductor(&[one.clone(), one.clone(), one.clone()], &[chi.clone(), one.clone()]);
    let eps_chi = dirichlet_root_number(chi);
    let qf = q as f64;
    let epsilon = t.iter().fold(c(1.0, 0.0), |acc, ti| acc * eps_chi * c(qf, 0.0).powc(c(0.0, -(ti + u))));
    let dual = chi.conj();

    let lambda = |s: C64| -> Result<C64, Error> {
        let mut acc = c(1.0, 0.0);
        for ti in t {
            acc *= bare_completion(s + c(0.0, ti + u), chi)? * bare_completion(s + c(0.0, ti), &one)?;
        }
        Ok(acc)
    };
    let lambda_dual = |s: C64| -> Result<C64, Error> {
        let mut acc = c(1.0, 0.0);
        for ti in t {
            acc *= bare_completion(s - c(0.0, ti + u), &dual)? * bare_completion(s - c(0.0, ti), &one)?;
        }
        Ok(acc)
    };

    let outcomes: Vec<Result<(C64, Option<f64>), Error>> = points
        .par_iter()
        .map(|&s| {
            let on_pole = t
                .iter()
                .any(|&ti| near_trivial_pole(s + c(0.0, ti)) || near_trivial_pole(c(1.0, 0.0) - s - c(0.0, ti)));
            if on_pole {
                return Ok((s, None));
            }
            let lhs = lambda(s)?;
            let rhs = epsilon * c(conductor as f64, 0.0).powc(c(0.5, 0.0) - s) * lambda_dual(c(1.0, 0.0) - s)?;
            Ok((s, Some((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE))))
        })
        .collect();
    let mut residuals = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o? {
            (s, Some(r)) => residuals.push((s, r)),
            (s, None) => skipped.push(s),
        }
    }
    Ok(SyntheticFeReport { epsilon, conductor, residuals, skipped })
}

/// Euler product `prod_{p <= bound} (1 - chi(p) p^{-s})^{-1}`.
pub fn truncated_euler_product(s: C64, chi: &DirichletCharacter, bound: u64) -> C64 {
    primes_up_to(bound)
        .into_iter()
        .map(|p| c(1.0, 0.0) / (c(1.0, 0.0) - chi.value_c64(p as i64) * c(p as f64, 0.0).powc(-s)))
        .product()
}

/// Whether `q` has a primitive character.
pub fn has_primitive(q: u64) -> bool {
    factor(q).iter().all(|&(p, e)| !(p == 2 && e == 1))
}
