//! Polynomials in `X = p^{-s}`, their power-series inverses, and global
//! Dirichlet series assembled prime by prime.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::Sieve;
use crate::error::Error;
use crate::scalar::{Field, Scalar, C64, Q};

/// Relative tolerance for float-mode exact division.
pub const FLOAT_DIVISION_TOL: f64 = 1e-10;
/// Default truncation bound for Dirichlet series.
pub const DEFAULT_TRUNCATION: u64 = 10_000;

/// A polynomial in `X`, constant term first. Trailing zeros are trimmed, so
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerFactorPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> EulerFactorPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        EulerFactorPoly { coeffs }
    }

    pub fn one() -> Self {
        EulerFactorPoly { coeffs: vec![F::one()] }
    }

    /// `1 - a X`.
    pub fn linear(a: F) -> Self {
        Self::new(vec![F::one(), -a])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &Self) -> Self {
        poly_mul(self, other)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> EulerFactorPoly<G> {
        EulerFactorPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Numerical agreement (exact equality in exact mode).
    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| self.coeff(k).close_to(&other.coeff(k), tol))
    }
}

impl<F: Field> fmt::Display for EulerFactorPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})X"),
                _ => format!("({c})X^{k}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Coefficient convolution.
pub fn poly_mul<F: Field>(a: &EulerFactorPoly<F>, b: &EulerFactorPoly<F>) -> EulerFactorPoly<F> {
    if a.is_zero() || b.is_zero() {
        return EulerFactorPoly { coeffs: Vec::new() };
    }
    let mut out = vec![F::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    EulerFactorPoly::new(out)
}

/// First `kmax + 1` coefficients of `1 / p(X)`; requires `p(0) = 1`.
pub fn expand_inverse<F: Field>(p: &EulerFactorPoly<F>, kmax: usize) -> Result<Vec<F>, Error> {
    let c0 = p.coeff(0);
    if !c0.is_one() {
        return Err(Error::ConstantTermNotOne(c0.to_string()));
    }
    let mut out: Vec<F> = Vec::with_capacity(kmax + 1);
    out.push(F::one());
    for k in 1..=kmax {
        let mut acc = F::zero();
        for j in 1..=k.min(p.coeffs.len().saturating_sub(1)) {
            let pj = &p.coeffs[j];
            if !pj.is_zero() {
                acc = acc - pj.clone() * out[k - j].clone();
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Long division that left a nonzero remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct NotDivisible<F> {
    pub quotient: EulerFactorPoly<F>,
    pub remainder: EulerFactorPoly<F>,
}

impl<F: Field> fmt::Display for NotDivisible<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not divisible, remainder {}", self.remainder)
    }
}

impl<F: Field> std::error::Error for NotDivisible<F> {}

/// Returns `q` with `num = q * den`. In float mode the remainder is accepted
/// when every coefficient is below [`FLOAT_DIVISION_TOL`] times the largest
/// coefficient magnitude of `num`.
///
/// Panics if `den` is the zero polynomial.
pub fn poly_divide_exact<F: Field>(
    num: &EulerFactorPoly<F>,
    den: &EulerFactorPoly<F>,
) -> Result<EulerFactorPoly<F>, NotDivisible<F>> {
    let dd = den.degree().expect("division by the zero polynomial");
    let lead = den.coeffs[dd].clone();
    let mut rem = num.coeffs.clone();
    let nq = rem.len().saturating_sub(dd);
    let mut quot = vec![F::zero(); nq];
    for i in (0..nq).rev() {
        let c = rem[i + dd].clone() / lead.clone();
        if !c.is_zero() {
            for (j, d) in den.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * d.clone();
            }
        }
        // force the cancelled coefficient to zero in float mode
        rem[i + dd] = F::zero();
        quot[i] = c;
    }
    rem.truncate(dd.min(rem.len()));
    let quotient = EulerFactorPoly::new(quot);
    let remainder = EulerFactorPoly::new(rem);
    let ok = match F::MODE {
        crate::scalar::ScalarMode::Exact => remainder.is_zero(),
        crate::scalar::ScalarMode::Float => {
            let scale = num.max_magnitude().max(f64::MIN_POSITIVE);
            remainder.max_magnitude() <= FLOAT_DIVISION_TOL * scale
        }
    };
    if ok {
        Ok(quotient)
    } else {
        Err(NotDivisible { quotient, remainder })
    }
}

/// A polynomial whose field is only known at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum DynPoly {
    Exact(EulerFactorPoly<Q>),
    Float(EulerFactorPoly<C64>),
}

impl DynPoly {
    /// Builds from tagged scalars; all must share one mode.
    pub fn from_scalars(coeffs: Vec<Scalar>) -> Result<Self, Error> {
        let Some(first) = coeffs.first() else {
            return Ok(DynPoly::Exact(EulerFactorPoly::new(Vec::new())));
        };
        match first {
            Scalar::Exact(_) => coeffs
                .into_iter()
                .map(Scalar::into_exact)
                .collect::<Result<Vec<_>, _>>()
                .map(|v| DynPoly::Exact(EulerFactorPoly::new(v))),
            Scalar::Float(_) => coeffs
                .into_iter()
                .map(Scalar::into_float)
                .collect::<Result<Vec<_>, _>>()
                .map(|v| DynPoly::Float(EulerFactorPoly::new(v))),
        }
    }

    pub fn mul(&self, other: &DynPoly) -> Result<DynPoly, Error> {
        match (self, other) {
            (DynPoly::Exact(a), DynPoly::Exact(b)) => Ok(DynPoly::Exact(poly_mul(a, b))),
            (DynPoly::Float(a), DynPoly::Float(b)) => Ok(DynPoly::Float(poly_mul(a, b))),
            _ => Err(Error::MixedMode),
        }
    }
}

/// Truncated Dirichlet series `sum_{n <= N} a(n) n^{-s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSeries<F> {
    // index 0 unused
    coeffs: Vec<F>,
}

impl<F: Field> DirichletSeries<F> {
    pub fn from_vec(mut values: Vec<F>) -> Self {
        values.insert(0, F::zero());
        DirichletSeries { coeffs: values }
    }

    pub fn bound(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    /// `a(n)` for `1 <= n <= N`.
    pub fn coeff(&self, n: u64) -> &F {
        assert!(n >= 1 && n <= self.bound(), "coefficient index {n} out of range");
        &self.coeffs[n as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &F)> {
        self.coeffs.iter().enumerate().skip(1).map(|(n, c)| (n as u64, c))
    }

    pub fn values(&self) -> &[F] {
        &self.coeffs[1..]
    }
}

/// `a(n) = prod_{p^k || n} a_p(k)`, from local coefficient lists `a_p(0..)`.
/// Every prime up to `n_max` must be present; a local list shorter than
/// needed is treated as zero-padded.
pub fn assemble_global<F: Field>(local: &BTreeMap<u64, Vec<F>>, n_max: u64) -> Result<DirichletSeries<F>, Error> {
    let sieve = Sieve::new(n_max);
    if let Some(&p) = sieve.primes().iter().find(|p| !local.contains_key(p)) {
        return Err(Error::MissingPrime(p));
    }
    let mut out: Vec<F> = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let v = sieve
            .factor(n)
            .iter()
            .fold(F::one(), |acc, &(p, k)| acc * local[&p].get(k as usize).cloned().unwrap_or_else(F::zero));
        out.push(v);
    }
    Ok(DirichletSeries::from_vec(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_int;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn qp(v: &[i64]) -> EulerFactorPoly<Q> {
        EulerFactorPoly::new(v.iter().map(|&x| q_int(x)).collect())
    }

    #[test]
    fn poly_mul_examples() {
        assert_eq!(poly_mul(&qp(&[1]), &qp(&[1, -2])), qp(&[1, -2]));
        assert_eq!(poly_mul(&qp(&[1, -1]), &qp(&[1, 1])), qp(&[1, 0, -1]));
        assert_eq!(poly_mul(&qp(&[1, -1]), &qp(&[1, -2])), qp(&[1, -3, 2]));
    }

    #[test]
    fn expand_inverse_examples() {
        assert_eq!(expand_inverse(&qp(&[1]), 3).unwrap(), vec![q_int(1), q_int(0), q_int(0), q_int(0)]);
        assert_eq!(expand_inverse(&qp(&[1, -2]), 3).unwrap(), vec![q_int(1), q_int(2), q_int(4), q_int(8)]);
        // h_k(1, 2) = 2^{k+1} - 1
        assert_eq!(expand_inverse(&qp(&[1, -3, 2]), 2).unwrap(), vec![q_int(1), q_int(3), q_int(7)]);
        assert!(matches!(expand_inverse(&qp(&[2, 1]), 2), Err(Error::ConstantTermNotOne(_))));
    }

    #[test]
    fn divide_examples() {
        assert_eq!(poly_divide_exact(&qp(&[1, 0, -1]), &qp(&[1, -1])).unwrap(), qp(&[1, 1]));
        assert_eq!(poly_divide_exact(&qp(&[1, -3, 2]), &qp(&[1, -2])).unwrap(), qp(&[1, -1]));
        let err = poly_divide_exact(&qp(&[1, -1]), &qp(&[1, -2])).unwrap_err();
        assert!(!err.remainder.is_zero());
    }

    #[test]
    fn float_division_tolerates_rounding() {
        let a = EulerFactorPoly::new(vec![C64::new(1.0, 0.0), C64::new(0.1, 0.3)]);
        let b = EulerFactorPoly::new(vec![C64::new(1.0, 0.0), C64::new(-1.0 / 3.0, 0.7)]);
        let q = poly_divide_exact(&poly_mul(&a, &b), &b).unwrap();
        assert!(q.close_to(&a, 1e-12));
    }

    #[test]
    fn dyn_poly_rejects_mixed_modes() {
        let a = DynPoly::from_scalars(vec![Scalar::Exact(q_int(1))]).unwrap();
        let b = DynPoly::from_scalars(vec![Scalar::Float(C64::new(1.0, 0.0))]).unwrap();
        assert!(matches!(a.mul(&b), Err(Error::MixedMode)));
        assert!(DynPoly::from_scalars(vec![Scalar::Exact(q_int(1)), Scalar::Float(C64::new(1.0, 0.0))]).is_err());
    }

    #[test]
    fn assemble_examples() {
        let primes = crate::arith::primes_up_to(50);
        let zeta: BTreeMap<u64, Vec<Q>> =
            primes.iter().map(|&p| (p, expand_inverse(&qp(&[1, -1]), 6).unwrap())).collect();
        let s = assemble_global(&zeta, 50).unwrap();
        assert!(s.iter().all(|(_, v)| v.is_one()));

        let only2: BTreeMap<u64, Vec<Q>> = primes
            .iter()
            .map(|&p| {
                let poly = if p == 2 { qp(&[1, -1]) } else { qp(&[1]) };
                (p, expand_inverse(&poly, 6).unwrap())
            })
            .collect();
        let s = assemble_global(&only2, 50).unwrap();
        for (n, v) in s.iter() {
            let expect = if n.is_power_of_two() { 1 } else { 0 };
            assert_eq!(v, &q_int(expect), "n = {n}");
        }

        let mut missing = zeta.clone();
        missing.remove(&7);
        assert_eq!(assemble_global(&missing, 50).unwrap_err(), Error::MissingPrime(7));
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-6i64..=6, 1i64..=5).prop_map(|(n, d)| crate::scalar::q_frac(n, d))
    }

    fn unit_poly() -> impl Strategy<Value = EulerFactorPoly<Q>> {
        prop::collection::vec(small_q(), 0..=8).prop_map(|mut v| {
            v.insert(0, q_int(1));
            EulerFactorPoly::new(v)
        })
    }

    proptest! {
        #[test]
        fn divide_undoes_multiply(a in unit_poly(), b in unit_poly()) {
            prop_assert_eq!(poly_divide_exact(&poly_mul(&a, &b), &b).unwrap(), a);
        }

        #[test]
        fn inverse_times_poly_is_one(p in unit_poly(), k in 0usize..12) {
            let inv = EulerFactorPoly::new(expand_inverse(&p, k).unwrap());
            let prod = poly_mul(&inv, &p);
            prop_assert!(prod.coeff(0).is_one());
            for j in 1..=k {
                prop_assert!(prod.coeff(j).is_zero());
            }
        }

        #[test]
        fn float_inverse_times_poly_is_one(re in prop::collection::vec(-0.9f64..0.9, 1..6), im in prop::collection::vec(-0.9f64..0.9, 6)) {
            let mut c = vec![C64::new(1.0, 0.0)];
            c.extend(re.iter().zip(&im).map(|(&r, &i)| C64::new(r, i)));
            let p = EulerFactorPoly::new(c);
            let inv = EulerFactorPoly::new(expand_inverse(&p, 10).unwrap());
            let prod = poly_mul(&inv, &p);
            prop_assert!((prod.coeff(0) - C64::new(1.0, 0.0)).norm() < 1e-12);
            for j in 1..=10 {
                prop_assert!(prod.coeff(j).norm() < 1e-12 * inv.max_magnitude().max(1.0));
            }
        }
    }
}
