//! Representations as finite Langlands-parameter data.
//!
//! A [`GlobalRep`] stores, for every prime up to a bound, the multiset of
//! local parameters (zeros allowed), the conductor exponent and the local
//! root number. Local L-factors, isobaric sums, unramified twists and the
//! Rankin-Selberg factors are computed from that data alone.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::error::Error;
use crate::eulerlib::{poly_divide_exact, poly_mul, EulerFactorPoly};
use crate::scalar::{q_inv_pow, Field, RootOfUnity, C64};

pub mod repfile;

/// Local root number: an exact root of unity when known exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RootNumber {
    Exact(RootOfUnity),
    Approx(C64),
}

impl RootNumber {
    pub const ONE: RootNumber = RootNumber::Exact(RootOfUnity::ONE);

    pub fn mul(&self, other: &RootNumber) -> RootNumber {
        match (self, other) {
            (RootNumber::Exact(a), RootNumber::Exact(b)) => RootNumber::Exact(a.mul(b)),
            _ => RootNumber::Approx(self.to_c64() * other.to_c64()),
        }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            RootNumber::Exact(r) => r.to_c64(),
            RootNumber::Approx(c) => *c,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RootNumber::Exact(r) => r.is_one(),
            RootNumber::Approx(c) => *c == C64::new(1.0, 0.0),
        }
    }

    /// Multiplies by a field value, staying exact when the value is `±1`.
    pub fn scaled_by<F: Field>(&self, v: &F) -> RootNumber {
        if v.is_one() {
            return *self;
        }
        if *v == -F::one() {
            return self.mul(&RootNumber::Exact(RootOfUnity::new(1, 2)));
        }
        RootNumber::Approx(self.to_c64() * v.to_c64())
    }
}

impl fmt::Display for RootNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootNumber::Exact(r) => write!(f, "{r}"),
            RootNumber::Approx(c) => write!(f, "{},{}", c.re, c.im),
        }
    }
}

/// Local data at one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalData<F> {
    pub prime: u64,
    pub params: Vec<F>,
    pub conductor_exp: u32,
    pub root_number: RootNumber,
    /// Central-character value at a ramified prime, when the caller knows it.
    pub central_value: Option<F>,
}

impl<F: Field> LocalData<F> {
    /// Unramified data: conductor exponent 0, root number 1.
    pub fn unramified(prime: u64, params: Vec<F>) -> Self {
        LocalData { prime, params, conductor_exp: 0, root_number: RootNumber::ONE, central_value: None }
    }

    pub fn ramified(prime: u64, params: Vec<F>, conductor_exp: u32, root_number: RootNumber) -> Self {
        LocalData { prime, params, conductor_exp, root_number, central_value: None }
    }

    pub fn with_central_value(mut self, v: F) -> Self {
        self.central_value = Some(v);
        self
    }

    pub fn degree(&self) -> usize {
        self.params.len()
    }

    pub fn is_unramified(&self) -> bool {
        self.conductor_exp == 0
    }

    /// Central-character value at this prime: the product of the parameters
    /// when unramified, the supplied value otherwise.
    pub fn central_value(&self) -> Option<F> {
        if self.is_unramified() {
            Some(self.params.iter().cloned().fold(F::one(), |a, b| a * b))
        } else {
            self.central_value.clone()
        }
    }

    fn check_invariants(&self) -> Result<(), Error> {
        if self.is_unramified() {
            if self.params.iter().any(|a| a.is_zero()) {
                return Err(Error::InvalidInput(format!(
                    "prime {}: unramified data with a zero parameter",
                    self.prime
                )));
            }
            if !self.root_number.is_one() {
                return Err(Error::InvalidInput(format!(
                    "prime {}: unramified data with root number {}",
                    self.prime, self.root_number
                )));
            }
        }
        Ok(())
    }
}

/// `prod_i (1 - alpha_i X)`, the inverse of the local standard L-factor.
pub fn local_l_inverse<F: Field>(d: &LocalData<F>) -> EulerFactorPoly<F> {
    d.params
        .iter()
        .filter(|a| !a.is_zero())
        .fold(EulerFactorPoly::one(), |acc, a| poly_mul(&acc, &EulerFactorPoly::linear(a.clone())))
}

/// `prod_{i,j} (1 - alpha_i beta_j X)`, the inverse of the Rankin-Selberg
/// factor built from parameter pairs.
pub fn rs_naive_local<F: Field>(a: &LocalData<F>, b: &LocalData<F>) -> Result<EulerFactorPoly<F>, Error> {
    if a.prime != b.prime {
        return Err(Error::PrimeMismatch(a.prime, b.prime));
    }
    let mut out = EulerFactorPoly::one();
    for x in a.params.iter().filter(|x| !x.is_zero()) {
        for y in b.params.iter().filter(|y| !y.is_zero()) {
            out = poly_mul(&out, &EulerFactorPoly::linear(x.clone() * y.clone()));
        }
    }
    Ok(out)
}

/// Finite data for a global representation: local data at every prime up
/// to `p_max`, each with exactly `degree` parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalRep<F> {
    degree: usize,
    p_max: u64,
    locals: BTreeMap<u64, LocalData<F>>,
}

impl<F: Field> GlobalRep<F> {
    pub fn new(degree: usize, p_max: u64, locals: BTreeMap<u64, LocalData<F>>) -> Result<Self, Error> {
        for p in primes_up_to(p_max) {
            if !locals.contains_key(&p) {
                return Err(Error::MissingPrime(p));
            }
        }
        for d in locals.values() {
            if d.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, got: d.degree() });
            }
            d.check_invariants()?;
        }
        let locals = locals.into_iter().filter(|(p, _)| *p <= p_max).collect();
        Ok(GlobalRep { degree, p_max, locals })
    }

    /// Everywhere-unramified data from a parameter function.
    pub fn unramified(degree: usize, p_max: u64, params: impl Fn(u64) -> Vec<F>) -> Result<Self, Error> {
        let locals = primes_up_to(p_max).into_iter().map(|p| (p, LocalData::unramified(p, params(p)))).collect();
        Self::new(degree, p_max, locals)
    }

    /// The degree-0 representation, neutral for [`isobaric_sum`].
    pub fn empty(p_max: u64) -> Self {
        let locals = primes_up_to(p_max).into_iter().map(|p| (p, LocalData::unramified(p, Vec::new()))).collect();
        GlobalRep { degree: 0, p_max, locals }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn p_max(&self) -> u64 {
        self.p_max
    }

    pub fn local(&self, p: u64) -> Result<&LocalData<F>, Error> {
        self.locals.get(&p).ok_or(Error::MissingPrime(p))
    }

    pub fn locals(&self) -> impl Iterator<Item = &LocalData<F>> {
        self.locals.values()
    }

    /// Replaces the local data at one prime.
    pub fn with_local(mut self, d: LocalData<F>) -> Result<Self, Error> {
        if d.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: d.degree() });
        }
        d.check_invariants()?;
        self.locals.insert(d.prime, d);
        Ok(self)
    }

    /// `prod p^{m_p}`.
    pub fn conductor(&self) -> BigUint {
        self.locals.values().fold(BigUint::one(), |acc, d| acc * BigUint::from(d.prime).pow(d.conductor_exp))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> GlobalRep<G> {
        let locals = self
            .locals
            .iter()
            .map(|(&p, d)| {
                let nd = LocalData {
                    prime: p,
                    params: d.params.iter().map(&f).collect(),
                    conductor_exp: d.conductor_exp,
                    root_number: d.root_number,
                    central_value: d.central_value.as_ref().map(&f),
                };
                (p, nd)
            })
            .collect();
        GlobalRep { degree: self.degree, p_max: self.p_max, locals }
    }
}

/// Parameter-level isobaric sum: parameters concatenate, conductor exponents
/// add, root numbers multiply.
pub fn isobaric_sum<F: Field>(a: &GlobalRep<F>, b: &GlobalRep<F>) -> Result<GlobalRep<F>, Error> {
    if a.p_max != b.p_max {
        return Err(Error::PmaxMismatch(a.p_max, b.p_max));
    }
    let locals = a
        .locals
        .iter()
        .map(|(&p, x)| {
            let y = &b.locals[&p];
            let mut params = x.params.clone();
            params.extend(y.params.iter().cloned());
            let central_value = match (x.central_value(), y.central_value()) {
                (Some(u), Some(v)) => Some(u * v),
                _ => None,
            };
            let d = LocalData {
                prime: p,
                params,
                conductor_exp: x.conductor_exp + y.conductor_exp,
                root_number: x.root_number.mul(&y.root_number),
                central_value,
            };
            (p, d)
        })
        .collect();
    Ok(GlobalRep { degree: a.degree + b.degree, p_max: a.p_max, locals })
}

/// Global root number `prod_p eps_p` and conductor `prod_p p^{m_p}`.
pub fn epsilon_global<F: Field>(rep: &GlobalRep<F>) -> (RootNumber, BigUint) {
    let eps = rep.locals.values().fold(RootNumber::ONE, |acc, d| acc.mul(&d.root_number));
    (eps, rep.conductor())
}

/// Twist by an unramified character with values `chi(p)`: every parameter
/// at `p` is multiplied by `chi(p)`, supplied central values by `chi(p)^n`
/// and root numbers by `chi(p)^{m_p}`.
pub fn twist_unramified<F: Field>(rep: &GlobalRep<F>, chi: impl Fn(u64) -> F) -> Result<GlobalRep<F>, Error> {
    let mut locals = BTreeMap::new();
    for (&p, d) in &rep.locals {
        let t = chi(p);
        if t.is_zero() {
            return Err(Error::ZeroTwist(p));
        }
        let nd = LocalData {
            prime: p,
            params: d.params.iter().map(|a| a.clone() * t.clone()).collect(),
            conductor_exp: d.conductor_exp,
            root_number: d.root_number.scaled_by(&t.pow(d.conductor_exp)),
            central_value: d.central_value.as_ref().map(|c| c.clone() * t.pow(rep.degree as u32)),
        };
        locals.insert(p, nd);
    }
    Ok(GlobalRep { degree: rep.degree, p_max: rep.p_max, locals })
}

/// Dual of an everywhere-unramified representation: parameters inverted.
/// Ramified data must be dualized by the caller.
pub fn contragredient_unramified<F: Field>(rep: &GlobalRep<F>) -> Result<GlobalRep<F>, Error> {
    let mut locals = BTreeMap::new();
    for (&p, d) in &rep.locals {
        if !d.is_unramified() || d.params.iter().any(|a| a.is_zero()) {
            return Err(Error::RamifiedContragredient(p));
        }
        let params = d.params.iter().map(|a| F::one() / a.clone()).collect();
        locals.insert(p, LocalData::unramified(p, params));
    }
    Ok(GlobalRep { degree: rep.degree, p_max: rep.p_max, locals })
}

/// A character of `GL(1)` over a local field.
#[derive(Debug, Clone, PartialEq)]
pub enum Gl1Char<F> {
    /// Unramified, given by its value on a uniformizer.
    Unramified(F),
    Ramified {
        conductor_exp: u32,
    },
}

/// Essentially square-integrable `sigma_b(eta) (x) chi` with `eta` a
/// character of `GL(1)` (supercuspidal degree `a = 1`) and `chi`
/// unramified with uniformizer value `twist`.
#[derive(Debug, Clone, PartialEq)]
pub struct EssSqIntSpec<F> {
    pub b: u32,
    /// Degree `a` of the supercuspidal; only `a = 1` is supported.
    pub cusp_degree: u32,
    pub eta: Gl1Char<F>,
    pub twist: F,
}

impl<F: Field> EssSqIntSpec<F> {
    pub fn new(b: u32, eta: Gl1Char<F>) -> Self {
        EssSqIntSpec { b, cusp_degree: 1, eta, twist: F::one() }
    }

    /// The Steinberg representation `sigma_b(1)`.
    pub fn steinberg(b: u32) -> Self {
        Self::new(b, Gl1Char::Unramified(F::one()))
    }

    pub fn with_twist(mut self, twist: F) -> Self {
        self.twist = twist;
        self
    }

    /// Degree `n = a b`.
    pub fn degree(&self) -> u32 {
        self.cusp_degree * self.b
    }

    /// `eta (x) chi`.
    pub fn character(&self) -> Gl1Char<F> {
        match &self.eta {
            Gl1Char::Unramified(u) => Gl1Char::Unramified(u.clone() * self.twist.clone()),
            r @ Gl1Char::Ramified { .. } => r.clone(),
        }
    }

    fn check_shape(&self) -> Result<(), Error> {
        if self.cusp_degree != 1 {
            return Err(Error::UnsupportedShape(format!("supercuspidal degree a = {}", self.cusp_degree)));
        }
        if self.b == 0 {
            return Err(Error::UnsupportedShape("b = 0".into()));
        }
        Ok(())
    }

    /// Langlands parameters at `p`: `L(s, sigma_b(eta)) = L(s + b - 1, eta)`,
    /// so one parameter `eta(p) p^{1-b}` padded with zeros to length `b`.
    pub fn to_local(&self, p: u64) -> Result<LocalData<F>, Error> {
        self.check_shape()?;
        let mut params = vec![F::zero(); self.b as usize];
        let (conductor_exp, central) = match self.character() {
            Gl1Char::Unramified(c) => {
                params[0] = c.clone() * F::from_rational(&q_inv_pow(p, self.b - 1));
                (self.b - 1, None)
            }
            Gl1Char::Ramified { conductor_exp } => (self.b * conductor_exp, Some(F::zero())),
        };
        let mut d = LocalData::ramified(p, params, conductor_exp, RootNumber::ONE);
        if conductor_exp == 0 {
            d = LocalData::unramified(p, d.params);
        } else if let Some(c) = central {
            d.central_value = Some(c);
        }
        Ok(d)
    }
}

/// Inverse of the JPSS factor `L(s, pi (x) tau)` for `pi = sigma_b(eta)`
/// and `tau = sigma_m(chi)` at `p`. A shift `L(s + c, .)` multiplies the
/// parameter by `p^{-c}`.
pub fn jpss_local<F: Field>(pi: &EssSqIntSpec<F>, tau: &EssSqIntSpec<F>, p: u64) -> Result<EulerFactorPoly<F>, Error> {
    pi.check_shape()?;
    tau.check_shape()?;
    let (n, b, m) = (pi.degree(), pi.b, tau.b);
    let c = match (pi.character(), tau.character()) {
        (Gl1Char::Unramified(x), Gl1Char::Unramified(y)) => x * y,
        (Gl1Char::Ramified { .. }, Gl1Char::Ramified { .. }) => {
            return Err(Error::UnsupportedShape(
                "both characters ramified: the product's ramification is not determined".into(),
            ))
        }
        // eta (x) chi ramified: every factor is 1
        _ => return Ok(EulerFactorPoly::one()),
    };
    let shifts: Vec<u32> =
        if m <= n { (0..m).map(|j| j + b - 1).collect() } else { (0..b).map(|i| m - 1 + i).collect() };
    Ok(shifts.into_iter().fold(EulerFactorPoly::one(), |acc, k| {
        poly_mul(&acc, &EulerFactorPoly::linear(c.clone() * F::from_rational(&q_inv_pow(p, k))))
    }))
}

/// JPSS factor of isobaric sums, by bi-additivity.
pub fn jpss_isobaric<F: Field>(
    pis: &[EssSqIntSpec<F>],
    taus: &[EssSqIntSpec<F>],
    p: u64,
) -> Result<EulerFactorPoly<F>, Error> {
    let mut out = EulerFactorPoly::one();
    for pi in pis {
        for tau in taus {
            out = poly_mul(&out, &jpss_local(pi, tau, p)?);
        }
    }
    Ok(out)
}

/// Local data of an isobaric sum of essentially square-integrable pieces.
pub fn isobaric_local<F: Field>(pieces: &[EssSqIntSpec<F>], p: u64) -> Result<LocalData<F>, Error> {
    let mut out = LocalData::unramified(p, Vec::new());
    for piece in pieces {
        let d = piece.to_local(p)?;
        out.params.extend(d.params);
        out.conductor_exp += d.conductor_exp;
    }
    if out.conductor_exp > 0 {
        out.central_value = None;
    }
    Ok(out)
}

/// The polynomial `P` with `L(s, pi x tau) = P(p^{-s}) L(s, pi (x) tau)`.
/// Since the inverse factors satisfy `inv(pi (x) tau) = P inv(pi x tau)`, `P`
/// is an exact division; a nonzero remainder is reported as an error.
pub fn aux_quotient<F: Field>(
    pi_local: &LocalData<F>,
    tau_local: &LocalData<F>,
    jpss_inverse: &EulerFactorPoly<F>,
) -> Result<EulerFactorPoly<F>, Error> {
    let naive = rs_naive_local(pi_local, tau_local)?;
    poly_divide_exact(jpss_inverse, &naive).map_err(|e| Error::NotDivisible(e.remainder.to_string()))
}

/// If the JPSS factor is trivial then one of the standard factors is.
pub fn degenerate_check<F: Field>(
    pi_local: &LocalData<F>,
    tau_local: &LocalData<F>,
    jpss_inverse: &EulerFactorPoly<F>,
) -> bool {
    !jpss_inverse.is_one() || local_l_inverse(pi_local).is_one() || local_l_inverse(tau_local).is_one()
}
