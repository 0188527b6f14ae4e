//! Coefficient fields.
//!
//! Every computation runs over one field, fixed at the type level through
//! [`Field`]: exact rationals ([`Q`]) for identity checks, binary64 complex
//! numbers ([`C64`]) for analytic work. [`Scalar`] is the runtime-tagged
//! form used at I/O boundaries, where mixing the two modes is an error.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Exact rational scalar. `BigRational` keeps lowest terms with a positive
/// denominator after every operation.
pub type Q = BigRational;
/// Complex binary64 scalar.
pub type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

/// Arithmetic needed by the polynomial, Schur and coefficient code.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Q) -> Self;
    /// Absolute value as a float, for residual reporting.
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> C64;

    /// `true` when `self` and `other` agree: exactly in exact mode, to within
    /// `tol` relative to the larger magnitude (floored at 1) in float mode.
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        match Self::MODE {
            ScalarMode::Exact => self == other,
            ScalarMode::Float => {
                let scale = self.magnitude().max(other.magnitude()).max(1.0);
                (self.clone() - other.clone()).magnitude() <= tol * scale
            }
        }
    }

    fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Field for Q {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &Q) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        let m = self.abs().to_f64().unwrap_or(f64::INFINITY);
        if m == 0.0 && !self.is_zero() {
            f64::MIN_POSITIVE
        } else {
            m
        }
    }

    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Field for C64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn from_rational(q: &Q) -> Self {
        C64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_c64(&self) -> C64 {
        *self
    }
}

/// Shorthand for an integer-valued rational.
pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Shorthand for `num/den` in lowest terms.
pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// `p^(-c)` as an exact rational.
pub fn q_inv_pow(p: u64, c: u32) -> Q {
    Q::new(BigInt::one(), BigInt::from(p).pow(c))
}

/// Runtime-tagged scalar, used when the field is only known after parsing.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Q),
    Float(C64),
}

impl Scalar {
    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Exact(_) => ScalarMode::Exact,
            Scalar::Float(_) => ScalarMode::Float,
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, Error> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(Error::MixedMode),
        }
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, Error> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(Error::MixedMode),
        }
    }

    /// Parses `a/b` or an integer as exact, `re,im` (or a bare decimal) as float.
    pub fn parse(token: &str) -> Result<Scalar, Error> {
        let t = token.trim();
        if let Some((re, im)) = t.split_once(',') {
            let re: f64 = re.trim().parse().map_err(|_| Error::parse(t))?;
            let im: f64 = im.trim().parse().map_err(|_| Error::parse(t))?;
            return Ok(Scalar::Float(C64::new(re, im)));
        }
        if let Ok(q) = parse_rational(t) {
            return Ok(Scalar::Exact(q));
        }
        let re: f64 = t.parse().map_err(|_| Error::parse(t))?;
        Ok(Scalar::Float(C64::new(re, 0.0)))
    }

    pub fn into_exact(self) -> Result<Q, Error> {
        match self {
            Scalar::Exact(q) => Ok(q),
            Scalar::Float(_) => Err(Error::MixedMode),
        }
    }

    pub fn into_float(self) -> Result<C64, Error> {
        match self {
            Scalar::Float(c) => Ok(c),
            Scalar::Exact(_) => Err(Error::MixedMode),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(c) => write!(f, "{},{}", c.re, c.im),
        }
    }
}

/// Parses `a/b` or `a` into a rational; rejects zero denominators.
pub fn parse_rational(token: &str) -> Result<Q, Error> {
    let t = token.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| Error::parse(t))?;
    let den: BigInt = den.parse().map_err(|_| Error::parse(t))?;
    if den.is_zero() {
        return Err(Error::parse(t));
    }
    Ok(Q::new(num, den))
}

/// Root of unity `e^{2 pi i k/n}`, kept as a reduced fraction `k/n` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    pub fn new(k: i64, n: u64) -> Self {
        assert!(n > 0, "root of unity with zero order");
        let k = k.rem_euclid(n as i64) as u64;
        let g = k.gcd(&n);
        RootOfUnity { num: k / g, den: n / g }
    }

    /// `(k, n)` with `gcd(k, n) = 1`, `0 <= k < n`.
    pub fn exponent(&self) -> (u64, u64) {
        (self.num, self.den)
    }

    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let n = self.den.lcm(&other.den);
        let k = self.num * (n / self.den) + other.num * (n / other.den);
        RootOfUnity::new((k % n) as i64, n)
    }

    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity::new(-(self.num as i64), self.den)
    }

    pub fn pow(&self, e: u64) -> RootOfUnity {
        let k = ((self.num as u128 * e as u128) % self.den as u128) as i64;
        RootOfUnity::new(k, self.den)
    }

    /// Returns `Some(±1)` when the root is rational.
    pub fn to_rational(&self) -> Option<Q> {
        match self.den {
            1 => Some(q_int(1)),
            2 => Some(q_int(-1)),
            _ => None,
        }
    }

    pub fn to_c64(&self) -> C64 {
        expi_frac(self.num as i64, self.den)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.num, self.den)
    }
}

/// `e^{2 pi i k/n}` with the argument reduced to `[-1/2, 1/2]` first, and
/// exact values on the axes.
pub fn expi_frac(k: i64, n: u64) -> C64 {
    let n_i = n as i64;
    let mut r = k.rem_euclid(n_i);
    if 4 * r == 0 {
        return C64::new(1.0, 0.0);
    }
    if 4 * r == n_i {
        return C64::new(0.0, 1.0);
    }
    if 2 * r == n_i {
        return C64::new(-1.0, 0.0);
    }
    if 4 * r == 3 * n_i {
        return C64::new(0.0, -1.0);
    }
    if 2 * r > n_i {
        r -= n_i;
    }
    let theta = std::f64::consts::TAU * (r as f64) / (n as f64);
    C64::new(theta.cos(), theta.sin())
}

/// `e^{2 pi i x}` for a rational `x`.
pub fn expi_rational(x: &Q) -> C64 {
    let den = x.denom();
    let num = x.numer().mod_floor(den);
    match (num.to_i64(), den.to_u64()) {
        (Some(k), Some(n)) => expi_frac(k, n),
        _ => {
            let theta = std::f64::consts::TAU * x.to_f64().unwrap_or(0.0).fract();
            C64::new(theta.cos(), theta.sin())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_mode_rejected() {
        let a = Scalar::Exact(q_frac(1, 2));
        let b = Scalar::Float(C64::new(0.5, 0.0));
        assert!(matches!(a.try_add(&b), Err(Error::MixedMode)));
        assert!(matches!(b.try_mul(&a), Err(Error::MixedMode)));
        assert_eq!(a.try_mul(&a).unwrap(), Scalar::Exact(q_frac(1, 4)));
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = parse_rational("6/-4").unwrap();
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn scalar_parse_modes() {
        assert_eq!(Scalar::parse("3/4").unwrap().mode(), ScalarMode::Exact);
        assert_eq!(Scalar::parse("0.5,-1").unwrap().mode(), ScalarMode::Float);
        assert_eq!(Scalar::parse("0.25").unwrap().mode(), ScalarMode::Float);
        assert!(Scalar::parse("x").is_err());
    }

    #[test]
    fn roots_of_unity_multiply_exactly() {
        let a = RootOfUnity::new(1, 4);
        let b = RootOfUnity::new(1, 6);
        assert_eq!(a.mul(&b), RootOfUnity::new(5, 12));
        assert_eq!(a.pow(4), RootOfUnity::ONE);
        assert_eq!(a.mul(&a.inv()), RootOfUnity::ONE);
        assert_eq!(RootOfUnity::new(3, 6).to_rational(), Some(q_int(-1)));
        assert_eq!(expi_frac(1, 4), C64::new(0.0, 1.0));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = q_frac(-2, 3);
        assert_eq!(x.pow(5), q_frac(-32, 243));
        assert_eq!(x.pow(0), q_int(1));
    }
}
