//! Exact rational matrices and the coset and factorization identities used
//! to unfold the twisted Rankin-Selberg integral over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factor, inv_mod, is_prime};
use crate::error::Error;
use crate::scalar::{parse_rational, q_int, Q};

/// Square rational matrix of size 2 or 3, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMat {
    dim: usize,
    e: Vec<Q>,
}

impl RatMat {
    pub fn new(dim: usize, entries: Vec<Q>) -> Result<Self, Error> {
        if !(dim == 2 || dim == 3) || entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!("need a 2x2 or 3x3 matrix, got {} entries", entries.len())));
        }
        Ok(RatMat { dim, e: entries })
    }

    pub fn from_i64(dim: usize, entries: &[i64]) -> Result<Self, Error> {
        Self::new(dim, entries.iter().map(|&x| q_int(x)).collect())
    }

    pub fn m2(a: Q, b: Q, c: Q, d: Q) -> Self {
        RatMat { dim: 2, e: vec![a, b, c, d] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![Q::one(); dim])
    }

    pub fn diag(d: &[Q]) -> Self {
        let n = d.len();
        let mut e = vec![Q::zero(); n * n];
        for (i, x) in d.iter().enumerate() {
            e[i * n + i] = x.clone();
        }
        RatMat { dim: n, e }
    }

    /// Block matrix `diag(m, 1)` of size `dim + 1`.
    pub fn extend(&self) -> Self {
        let n = self.dim + 1;
        let mut e = vec![Q::zero(); n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                e[i * n + j] = self.get(i, j).clone();
            }
        }
        e[n * n - 1] = Q::one();
        RatMat { dim: n, e }
    }

    /// Parses `"a,b;c,d"` (rows separated by `;`).
    pub fn parse(text: &str) -> Result<Self, Error> {
        let rows: Vec<Vec<Q>> = text
            .split(';')
            .map(|r| r.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(text.to_string()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.e[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Q] {
        &self.e
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let e = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (0..n).fold(Q::zero(), |acc, l| acc + self.get(i, l) * other.get(l, j))
            })
            .collect();
        RatMat { dim: n, e }
    }

    pub fn scale(&self, c: &Q) -> RatMat {
        RatMat { dim: self.dim, e: self.e.iter().map(|x| x * c).collect() }
    }

    pub fn det(&self) -> Q {
        let g = |i, j| self.get(i, j).clone();
        match self.dim {
            2 => g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0),
            _ => {
                g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                    + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
            }
        }
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMat, Error> {
        let n = self.dim;
        let mut a: Vec<Vec<Q>> = (0..n).map(|i| self.e[i * n..(i + 1) * n].to_vec()).collect();
        let mut inv: Vec<Vec<Q>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::Singular)?;
            a.swap(c, piv);
            inv.swap(c, piv);
            let pv = a[c][c].clone();
            for j in 0..n {
                a[c][j] = &a[c][j] / &pv;
                inv[c][j] = &inv[c][j] / &pv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..n {
                        a[r][j] = &a[r][j] - &f * &a[c][j];
                        inv[r][j] = &inv[r][j] - &f * &inv[c][j];
                    }
                }
            }
        }
        Ok(RatMat { dim: n, e: inv.into_iter().flatten().collect() })
    }

    pub fn is_integral(&self) -> bool {
        self.e.iter().all(Q::is_integer)
    }

    /// Whether every entry has non-negative valuation at `p`.
    pub fn is_integral_at(&self, p: u64) -> bool {
        self.e.iter().all(|x| x.is_zero() || val_p(x, p) >= 0)
    }
}

impl fmt::Display for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// `p`-adic valuation of a nonzero rational.
pub fn val_p(x: &Q, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut k = 0i64;
        while (&n % &pb).is_zero() {
            n /= &pb;
            k += 1;
        }
        k
    };
    count(x.numer().abs()) - count(x.denom().clone())
}

/// Positive generator of the fractional ideal `a Z + b Z`.
pub fn content(a: &Q, b: &Q) -> Q {
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Q::new(num, a.denom() * b.denom())
}

/// `(1, 0; u/w, 1) = (1, w/u; 0, 1) (w, 0; 0, 1/w) (0, -1/u; u, w)`.
pub fn verify_supp_decomposition(u: &Q, w: &Q) -> Result<bool, Error> {
    if u.is_zero() || w.is_zero() {
        return Err(Error::InvalidInput("u and w must be nonzero".into()));
    }
    let (one, zero) = (Q::one(), Q::zero());
    let lhs = RatMat::m2(one.clone(), zero.clone(), u / w, one.clone());
    let rhs = RatMat::m2(one.clone(), w / u, zero.clone(), one.clone())
        .mul(&RatMat::m2(w.clone(), zero.clone(), zero.clone(), w.recip()))
        .mul(&RatMat::m2(zero, -u.recip(), u.clone(), w.clone()));
    Ok(lhs == rhs)
}

/// Designated primes `p`, `p'` and modulus `q'` fixing `alpha = q' p' / p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetContext {
    pub p: u64,
    pub q_prime: u64,
    pub p_prime: u64,
}

impl CosetContext {
    pub fn new(p: u64, q_prime: u64, p_prime: u64) -> Result<Self, Error> {
        if !is_prime(p) || !is_prime(p_prime) || p == p_prime {
            return Err(Error::InvalidInput(format!("p = {p}, p' = {p_prime} must be distinct primes")));
        }
        if q_prime == 0 || (q_prime * p_prime).gcd(&p) != 1 {
            return Err(Error::InvalidInput(format!("p = {p} must be coprime to q' p' = {}", q_prime * p_prime)));
        }
        Ok(CosetContext { p, q_prime, p_prime })
    }

    pub fn alpha(&self) -> Q {
        Q::new(((self.q_prime * self.p_prime) as i64).into(), (self.p as i64).into())
    }
}

/// `gamma1` in `p` and `gamma2` in `p^{-2}`: the support of the local
/// Whittaker value after the decomposition above.
pub fn supp_support(gamma1: &Q, gamma2: &Q, ctx: &CosetContext) -> bool {
    if gamma1.is_zero() || gamma2.is_zero() {
        return false;
    }
    let g1_ok = gamma1.is_integer() && val_p(gamma1, ctx.p) >= 1;
    let g2_ok = val_p(gamma2, ctx.p) >= -2
        && factor(gamma2.denom().try_into().unwrap_or(u64::MAX)).iter().all(|&(l, _)| l == ctx.p);
    g1_ok && g2_ok
}

/// Canonical representative `diag(g1 g2, g1) (1, 0; alpha, 1)` of
/// `U_2(Q) M GL_2(Z)`, with `u M g` equal to it.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalCoset {
    pub gamma1: Q,
    pub gamma2: Q,
    pub alpha: Q,
    pub u: RatMat,
    pub g: RatMat,
}

impl CanonicalCoset {
    pub fn representative(&self) -> RatMat {
        let (one, zero) = (Q::one(), Q::zero());
        RatMat::diag(&[&self.gamma1 * &self.gamma2, self.gamma1.clone()]).mul(&RatMat::m2(
            one.clone(),
            zero,
            self.alpha.clone(),
            one,
        ))
    }

    /// `u` upper unipotent, `g` integral with unit determinant,
    /// `u M g` canonical, both gammas positive and
    /// `gamma2 = |det M| / gamma1^2`.
    pub fn verify(&self, m: &RatMat) -> bool {
        let u_ok = self.u.get(0, 0).is_one() && self.u.get(1, 1).is_one() && self.u.get(1, 0).is_zero();
        let g_ok = self.g.is_integral() && self.g.det().abs().is_one();
        let eq = self.u.mul(m).mul(&self.g) == self.representative();
        let pos = self.gamma1.is_positive() && self.gamma2.is_positive();
        let det_ok = self.gamma2 == m.det().abs() / (&self.gamma1 * &self.gamma1);
        u_ok && g_ok && eq && pos && det_ok
    }
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let e = a.extended_gcd(b);
    debug_assert!(e.gcd.is_one());
    (e.x, e.y)
}

/// Constructive reduction of `M` to its canonical coset representative.
pub fn clgp_reduce(m: &RatMat, ctx: &CosetContext) -> Result<CanonicalCoset, Error> {
    if m.dim != 2 {
        return Err(Error::InvalidInput("expected a 2x2 matrix".into()));
    }
    let det = m.det();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let (c, d) = (m.get(1, 0), m.get(1, 1));
    let p = Q::from_integer(ctx.p.into());
    let gamma1 = &p * content(c, d);
    // primitive integer row with c'' Z + d'' Z = Z
    let scale = &p / &gamma1;
    let (c2, d2) = ((c * &scale).to_integer(), (d * &scale).to_integer());
    let (x, y) = ext_gcd(&c2, &d2);
    let big_p = BigInt::from(ctx.p);
    let qp = BigInt::from(ctx.q_prime * ctx.p_prime);
    let eps = if det.is_positive() { BigInt::one() } else { -BigInt::one() };
    let (sp, tq) = ext_gcd(&big_p, &qp);
    let (s, t) = (&sp * &eps, &tq * &eps);
    let a_ = &qp * &x + &s * &d2;
    let c_ = &qp * &y - &s * &c2;
    let b_ = &big_p * &x - &t * &d2;
    let d_ = &big_p * &y + &t * &c2;
    let g = RatMat::m2(Q::from_integer(a_), Q::from_integer(b_), Q::from_integer(c_), Q::from_integer(d_));
    let scaled = m.mul(&g).scale(&gamma1.recip());
    let b_top = scaled.get(0, 1).clone();
    let u = RatMat::m2(Q::one(), -b_top, Q::zero(), Q::one());
    let gamma2 = det.abs() / (&gamma1 * &gamma1);
    Ok(CanonicalCoset { gamma1, gamma2, alpha: ctx.alpha(), u, g })
}

/// Data for the 3x3 factorization in the dual unfolding: `a_j`, `a_k`
/// positive rationals, `n` and `q` coprime, `beta2 = r/q`, and integers
/// `u`, `v` with `q | n r v + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Main2Instance {
    pub a_j: Q,
    pub a_k: Q,
    pub n: u64,
    pub q: u64,
    pub beta2: Q,
    pub u: i64,
    pub v: i64,
}

impl Main2Instance {
    /// Fills in `v` from `n r v = -1 mod q`.
    pub fn solve(a_j: Q, a_k: Q, n: u64, q: u64, r: i64, u: i64) -> Result<Self, Error> {
        let nr = (n as i64).checked_mul(r).ok_or_else(|| Error::InvalidInput("overflow".into()))?;
        let v = if q == 1 {
            0
        } else {
            let inv =
                inv_mod(nr, q).ok_or_else(|| Error::InvalidInput(format!("n r = {nr} is not invertible mod {q}")))?;
            (q - inv) as i64
        };
        Ok(Main2Instance { a_j, a_k, n, q, beta2: Q::new(r.into(), (q as i64).into()), u, v })
    }
}

/// Outcome of the 3x3 factorization check.
#[derive(Debug, Clone, PartialEq)]
pub struct Main2Report {
    pub identity_holds: bool,
    pub beta1_prime: Q,
    pub beta2_prime: Q,
    pub det_gamma: Q,
    pub det_gamma_expected: Q,
    pub det_sides_agree: bool,
    pub inclusion_identity_holds: bool,
    pub kappa: RatMat,
    /// Primes dividing `q` at which `kappa` fails to be integral.
    pub kappa_nonintegral_at: Vec<u64>,
}

impl Main2Report {
    pub fn passed(&self) -> bool {
        self.identity_holds
            && self.beta1_prime.is_zero()
            && self.det_gamma == self.det_gamma_expected
            && self.det_sides_agree
            && self.inclusion_identity_holds
    }
}

/// Unimodular `kappa` whose first row is proportional to `(v, -q u)`, so
/// that `beta1' = 0`.
fn solve_kappa(inst: &Main2Instance) -> RatMat {
    let (v, qu) = (BigInt::from(inst.v), BigInt::from(inst.q as i64 * inst.u));
    if v.is_zero() && qu.is_zero() {
        return RatMat::identity(2);
    }
    let g = v.gcd(&qu);
    let (k11, k12) = (&v / &g, -(&qu / &g));
    // k11 k22 - k12 k21 = 1
    let e = k11.extended_gcd(&k12);
    let (k22, k21) = (e.x, -e.y);
    RatMat::m2(Q::from_integer(k11), Q::from_integer(k12), Q::from_integer(k21), Q::from_integer(k22))
}

pub fn main2_identity_check(inst: &Main2Instance) -> Result<Main2Report, Error> {
    let (n, q) = (Q::from_integer(inst.n.into()), Q::from_integer(inst.q.into()));
    if inst.n == 0 || inst.q == 0 || inst.n.gcd(&inst.q) != 1 {
        return Err(Error::InvalidInput(format!(
            "inconsistent instance: n = {}, q = {} must be coprime",
            inst.n, inst.q
        )));
    }
    if !inst.a_j.is_positive() || !inst.a_k.is_positive() {
        return Err(Error::InvalidInput("inconsistent instance: a_j, a_k must be positive".into()));
    }
    let r = &inst.beta2 * &q;
    if !r.is_integer() {
        return Err(Error::InvalidInput(format!("inconsistent instance: q beta2 = {r} is not integral")));
    }
    let (u, v) = (q_int(inst.u), q_int(inst.v));
    let mid = (&n * &r * &v + Q::one()) / &q;
    if !mid.is_integer() {
        return Err(Error::InvalidInput("inconsistent instance: q does not divide n r v + 1".into()));
    }

    let kappa = solve_kappa(inst);
    let ak = RatMat::diag(&[inst.a_k.clone(), Q::one()]);
    let big_d = RatMat::diag(&[&n * &q / &inst.a_j, &n * &q * &q]);
    let gamma = big_d.mul(&kappa.inverse()?).mul(&ak.inverse()?);
    let e_mat = ak.mul(&kappa);
    let beta_p = [e_mat.get(0, 0) * &u + e_mat.get(0, 1) * &v / &q, e_mat.get(1, 0) * &u + e_mat.get(1, 1) * &v / &q];

    let (one, zero) = (Q::one(), Q::zero());
    let lower = RatMat::new(
        3,
        vec![
            one.clone(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            one.clone(),
            zero.clone(),
            zero.clone(),
            inst.beta2.clone(),
            one.clone(),
        ],
    )?;
    let lhs = gamma.inverse()?.extend().mul(&lower).mul(&RatMat::diag(&[&n / &inst.a_j, n.clone(), one.clone()]));
    let upper = RatMat::new(
        3,
        vec![
            one.clone(),
            zero.clone(),
            -beta_p[0].clone(),
            zero.clone(),
            one.clone(),
            -beta_p[1].clone(),
            zero.clone(),
            zero.clone(),
            one.clone(),
        ],
    )?;
    let t = RatMat::new(
        3,
        vec![one.clone(), &n * &r * &u, &q * &u, zero.clone(), mid, v.clone(), zero.clone(), &n * &r, q.clone()],
    )?;
    let rhs = upper
        .mul(&RatMat::diag(&[inst.a_k.clone(), one.clone(), one.clone()]))
        .mul(&kappa.extend())
        .mul(&t)
        .scale(&q.recip());

    let det_gamma = gamma.det();
    let det_gamma_expected = &n * &n * &q * &q * &q / (&inst.a_j * &inst.a_k);

    let q2 = &q * &q;
    let incl_lhs = gamma.inverse()?.mul(&RatMat::diag(&[&q / &inst.a_j, one.clone()]));
    let incl_rhs = RatMat::diag(&[&inst.a_k * &q2, one.clone()])
        .mul(&RatMat::diag(&[q2.recip(), one.clone()]))
        .mul(&kappa)
        .mul(&RatMat::diag(&[q2.clone(), one.clone()]))
        .scale(&(&n * &q2).recip());

    let kappa_nonintegral_at =
        factor(inst.q).into_iter().map(|(p, _)| p).filter(|&p| !kappa.is_integral_at(p)).collect();
    Ok(Main2Report {
        identity_holds: lhs == rhs,
        beta1_prime: beta_p[0].clone(),
        beta2_prime: beta_p[1].clone(),
        det_gamma,
        det_gamma_expected,
        det_sides_agree: lhs.det() == rhs.det(),
        inclusion_identity_holds: incl_lhs == incl_rhs,
        kappa,
        kappa_nonintegral_at,
    })
}
