//! Multiplicative coefficient tables for `GL(3) x GL(2)`.
//!
//! `lambda_pi(m1, m2)` is realized by the Schur formula at prime powers.
//! `lambda_rs` expands the pairwise Euler product and never touches Schur
//! functions, so [`doublesum_check`] compares two independent code paths.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::arith::Sieve;
use crate::error::Error;
use crate::eulerlib::{assemble_global, expand_inverse, DirichletSeries, EulerFactorPoly};
use crate::langlands::{local_l_inverse, rs_naive_local, twist_unramified, GlobalRep, LocalData};
use crate::scalar::Field;
use crate::symfunc::{schur3, two_row_coeff, Partition3};

/// Relative tolerance for float-mode coefficient comparisons.
pub const FLOAT_COEFF_TOL: f64 = 1e-9;

/// First index at which two sides of an identity disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch<F> {
    pub n: u64,
    pub lhs: F,
    pub rhs: F,
}

/// Outcome of a coefficientwise identity check over `1..=checked`.
#[derive(Debug, Clone, PartialEq)]
#[must_use]
pub struct CheckReport<F> {
    pub checked: u64,
    pub first_failure: Option<Mismatch<F>>,
}

impl<F: Field> CheckReport<F> {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    /// Compares `lhs(n)` and `rhs(n)` for `n = 1..=n_max`.
    pub fn compare(lhs: &DirichletSeries<F>, rhs: &DirichletSeries<F>, n_max: u64) -> Self {
        let first_failure = (1..=n_max).find_map(|n| {
            let (a, b) = (lhs.coeff(n), rhs.coeff(n));
            (!a.close_to(b, FLOAT_COEFF_TOL)).then(|| Mismatch { n, lhs: a.clone(), rhs: b.clone() })
        });
        CheckReport { checked: n_max, first_failure }
    }
}

fn require_degree<F: Field>(rep: &GlobalRep<F>, degree: usize) -> Result<(), Error> {
    if rep.degree() != degree {
        return Err(Error::DegreeMismatch { expected: degree, got: rep.degree() });
    }
    Ok(())
}

fn params3<F: Field>(d: &LocalData<F>) -> [F; 3] {
    [d.params[0].clone(), d.params[1].clone(), d.params[2].clone()]
}

fn params_gl2_padded<F: Field>(d: &LocalData<F>) -> [F; 3] {
    [d.params[0].clone(), d.params[1].clone(), F::zero()]
}

/// `p^k <= n` for the largest such `k`.
fn max_exponent(p: u64, n: u64) -> u32 {
    let (mut k, mut pk) = (0, 1u64);
    while pk.saturating_mul(p) <= n {
        pk *= p;
        k += 1;
    }
    k
}

/// Local Schur values `s_{k1+k2,k1,0}(alpha_p)` for `p^{2 k1 + k2} <= n_max`.
#[derive(Debug, Clone)]
pub struct DoubleCoeffTable<F> {
    n_max: u64,
    sieve: Sieve,
    local: BTreeMap<u64, HashMap<(u32, u32), F>>,
}

impl<F: Field> DoubleCoeffTable<F> {
    pub fn new(pi: &GlobalRep<F>, n_max: u64) -> Result<Self, Error> {
        require_degree(pi, 3)?;
        let sieve = Sieve::new(n_max);
        let local = sieve
            .primes()
            .par_iter()
            .map(|&p| {
                let alpha = params3(pi.local(p)?);
                let top = max_exponent(p, n_max);
                let mut vals = HashMap::new();
                for k1 in 0..=top / 2 {
                    for k2 in 0..=top - 2 * k1 {
                        vals.insert((k1, k2), schur3(Partition3::two_row(k1, k2), &alpha));
                    }
                }
                Ok((p, vals))
            })
            .collect::<Result<BTreeMap<_, _>, Error>>()?;
        Ok(DoubleCoeffTable { n_max, sieve, local })
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// `lambda_pi(m1, m2)` for `m1^2 m2 <= n_max`.
    pub fn get(&self, m1: u64, m2: u64) -> Result<F, Error> {
        if m1 == 0 || m2 == 0 || m1.saturating_mul(m1).saturating_mul(m2) > self.n_max {
            return Err(Error::InvalidInput(format!("({m1}, {m2}) outside table bound {}", self.n_max)));
        }
        let mut exps: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
        for (p, e) in self.sieve.factor(m1) {
            exps.entry(p).or_default().0 = e;
        }
        for (p, e) in self.sieve.factor(m2) {
            exps.entry(p).or_default().1 = e;
        }
        Ok(exps.iter().fold(F::one(), |acc, (p, k)| acc * self.local[p][k].clone()))
    }
}

/// `lambda_pi(m1, m2)` as a product of Schur values over primes.
pub fn lambda_double<F: Field>(pi: &GlobalRep<F>, m1: u64, m2: u64) -> Result<F, Error> {
    require_degree(pi, 3)?;
    if m1 == 0 || m2 == 0 {
        return Err(Error::InvalidInput("arguments must be positive".into()));
    }
    let mut exps: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    for (p, e) in crate::arith::factor(m1) {
        exps.entry(p).or_default().0 = e;
    }
    for (p, e) in crate::arith::factor(m2) {
        exps.entry(p).or_default().1 = e;
    }
    let mut acc = F::one();
    for (p, (k1, k2)) in exps {
        acc = acc * schur3(Partition3::two_row(k1, k2), &params3(pi.local(p)?));
    }
    Ok(acc)
}

/// Dirichlet coefficients `1..=n_max` of an Euler product whose local
/// factor at `p` is `1 / local(p)`.
pub fn series_from_local<F: Field>(
    rep_p_max: u64,
    n_max: u64,
    local: impl Fn(u64) -> Result<EulerFactorPoly<F>, Error> + Sync,
) -> Result<DirichletSeries<F>, Error> {
    let sieve = Sieve::new(n_max);
    if let Some(&p) = sieve.primes().iter().find(|&&p| p > rep_p_max) {
        return Err(Error::MissingPrime(p));
    }
    let tables = sieve
        .primes()
        .par_iter()
        .map(|&p| Ok((p, expand_inverse(&local(p)?, max_exponent(p, n_max) as usize)?)))
        .collect::<Result<BTreeMap<_, _>, Error>>()?;
    assemble_global(&tables, n_max)
}

/// Coefficients of `L(s, rho)`; at prime powers these are `h_k(params)`.
pub fn lambda_std_series<F: Field>(rho: &GlobalRep<F>, n_max: u64) -> Result<DirichletSeries<F>, Error> {
    series_from_local(rho.p_max(), n_max, |p| Ok(local_l_inverse(rho.local(p)?)))
}

pub fn lambda_std<F: Field>(rho: &GlobalRep<F>, n: u64) -> Result<F, Error> {
    let mut acc = F::one();
    for (p, k) in crate::arith::factor(n) {
        acc = acc * expand_inverse(&local_l_inverse(rho.local(p)?), k as usize)?[k as usize].clone();
    }
    Ok(acc)
}

/// Values of the central character of `tau`: `(g1 g2)^k` at unramified
/// primes, the supplied value to the `k` at ramified ones.
pub fn central_char<F: Field>(tau: &GlobalRep<F>, m: u64) -> Result<F, Error> {
    let mut acc = F::one();
    for (p, k) in crate::arith::factor(m) {
        let v = tau.local(p)?.central_value().ok_or(Error::MissingCentralValue(p))?;
        acc = acc * v.pow(k);
    }
    Ok(acc)
}

pub fn central_char_series<F: Field>(tau: &GlobalRep<F>, n_max: u64) -> Result<DirichletSeries<F>, Error> {
    let sieve = Sieve::new(n_max);
    let mut local = BTreeMap::new();
    for &p in sieve.primes() {
        let v = tau.local(p)?.central_value().ok_or(Error::MissingCentralValue(p))?;
        let k = max_exponent(p, n_max);
        local.insert(p, (0..=k).map(|j| v.pow(j)).collect::<Vec<F>>());
    }
    assemble_global(&local, n_max)
}

/// `c(n) = sum_{m1^2 m2 = n} lambda_pi(m1, m2) lambda_tau(m2) chi_omega(m1)`
/// for `n = 1..=n_max`, by direct summation over divisor pairs.
pub fn c_pi_tau_series<F: Field>(
    pi: &GlobalRep<F>,
    tau: &GlobalRep<F>,
    n_max: u64,
) -> Result<DirichletSeries<F>, Error> {
    require_degree(tau, 2)?;
    let table = DoubleCoeffTable::new(pi, n_max)?;
    let lam_tau = lambda_std_series(tau, n_max)?;
    let omega = central_char_series(tau, n_max)?;
    let mut out = vec![F::zero(); n_max as usize];
    let mut m1 = 1u64;
    while m1 * m1 <= n_max {
        let sq = m1 * m1;
        for m2 in 1..=n_max / sq {
            let term = table.get(m1, m2)? * lam_tau.coeff(m2).clone() * omega.coeff(m1).clone();
            let slot = &mut out[(sq * m2 - 1) as usize];
            *slot = slot.clone() + term;
        }
        m1 += 1;
    }
    Ok(DirichletSeries::from_vec(out))
}

pub fn c_pi_tau<F: Field>(pi: &GlobalRep<F>, tau: &GlobalRep<F>, n: u64) -> Result<F, Error> {
    require_degree(tau, 2)?;
    let mut acc = F::zero();
    let mut m1 = 1u64;
    while m1 * m1 <= n {
        if n.is_multiple_of(m1 * m1) {
            let m2 = n / (m1 * m1);
            acc = acc + lambda_double(pi, m1, m2)? * lambda_std(tau, m2)? * central_char(tau, m1)?;
        }
        m1 += 1;
    }
    Ok(acc)
}

/// Coefficients of `prod_p prod_{i,j} (1 - alpha_i gamma_j p^{-s})^{-1}`.
pub fn lambda_rs_series<F: Field>(
    pi: &GlobalRep<F>,
    tau: &GlobalRep<F>,
    n_max: u64,
) -> Result<DirichletSeries<F>, Error> {
    let p_max = pi.p_max().min(tau.p_max());
    series_from_local(p_max, n_max, |p| rs_naive_local(pi.local(p)?, tau.local(p)?))
}

pub fn lambda_rs<F: Field>(pi: &GlobalRep<F>, tau: &GlobalRep<F>, n: u64) -> Result<F, Error> {
    let mut acc = F::one();
    for (p, k) in crate::arith::factor(n) {
        let poly = rs_naive_local(pi.local(p)?, tau.local(p)?)?;
        acc = acc * expand_inverse(&poly, k as usize)?[k as usize].clone();
    }
    Ok(acc)
}

/// `c_{pi,tau}(n) = lambda_{pi x tau}(n)` for all `n <= n_max`.
pub fn doublesum_check<F: Field>(pi: &GlobalRep<F>, tau: &GlobalRep<F>, n_max: u64) -> Result<CheckReport<F>, Error> {
    let lhs = c_pi_tau_series(pi, tau, n_max)?;
    let rhs = lambda_rs_series(pi, tau, n_max)?;
    Ok(CheckReport::compare(&lhs, &rhs, n_max))
}

/// `lambda_pi(1, n) = lambda_pi(n)` for all `n <= n_max`.
pub fn standardcoeff_check<F: Field>(pi: &GlobalRep<F>, n_max: u64) -> Result<CheckReport<F>, Error> {
    let table = DoubleCoeffTable::new(pi, n_max)?;
    let lhs = DirichletSeries::from_vec((1..=n_max).map(|n| table.get(1, n)).collect::<Result<_, _>>()?);
    let rhs = lambda_std_series(pi, n_max)?;
    Ok(CheckReport::compare(&lhs, &rhs, n_max))
}

/// Multiplicative extension of prime values `omega(p)`.
pub fn twist_values<F: Field>(omega: impl Fn(u64) -> F, n_max: u64) -> DirichletSeries<F> {
    let sieve = Sieve::new(n_max);
    let vals =
        (1..=n_max).map(|n| sieve.factor(n).iter().fold(F::one(), |acc, &(p, k)| acc * omega(p).pow(k))).collect();
    DirichletSeries::from_vec(vals)
}

/// `c_{pi, tau x omega}(n) = c_{pi,tau}(n) omega(n)` for an unramified
/// twist with prime values `omega(p)`.
pub fn ctwist_check<F: Field>(
    pi: &GlobalRep<F>,
    tau: &GlobalRep<F>,
    omega: impl Fn(u64) -> F + Copy,
    n_max: u64,
) -> Result<CheckReport<F>, Error> {
    let twisted = twist_unramified(tau, omega)?;
    let lhs = c_pi_tau_series(pi, &twisted, n_max)?;
    let base = c_pi_tau_series(pi, tau, n_max)?;
    let w = twist_values(omega, n_max);
    let rhs =
        DirichletSeries::from_vec(base.values().iter().zip(w.values()).map(|(c, o)| c.clone() * o.clone()).collect());
    Ok(CheckReport::compare(&lhs, &rhs, n_max))
}

/// `sum_{2 k1 + k2 = k} s_{k1+k2,k1,0}(alpha_p) s_{k1+k2,k1,0}(g1, g2, 0)`.
pub fn rscauchy_coeff<F: Field>(pi: &GlobalRep<F>, tau: &GlobalRep<F>, p: u64, k: u32) -> Result<F, Error> {
    require_degree(pi, 3)?;
    require_degree(tau, 2)?;
    let alpha = params3(pi.local(p)?);
    let [g1, g2, _] = params_gl2_padded(tau.local(p)?);
    Ok(two_row_coeff(&alpha, &g1, &g2, k))
}

/// `n,value` lines with a header.
pub fn write_csv<F: Field>(series: &DirichletSeries<F>) -> String {
    let mut out = String::from("n,value\n");
    for (n, v) in series.iter() {
        let _ = writeln!(out, "{n},{v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_frac, q_int, Q};

    fn running_pair(p_max: u64) -> (GlobalRep<Q>, GlobalRep<Q>) {
        let pi = GlobalRep::unramified(3, p_max, |_| vec![q_int(1), q_int(2), q_int(3)]).unwrap();
        let tau = GlobalRep::unramified(2, p_max, |_| vec![q_int(1), q_int(2)]).unwrap();
        (pi, tau)
    }

    #[test]
    fn lambda_double_examples() {
        let (pi, _) = running_pair(7);
        assert_eq!(lambda_double(&pi, 1, 1).unwrap(), q_int(1));
        assert_eq!(lambda_double(&pi, 5, 1).unwrap(), q_int(11));
        assert_eq!(lambda_double(&pi, 1, 25).unwrap(), q_int(25));
        assert_eq!(lambda_double(&pi, 11, 1), Err(Error::MissingPrime(11)));
        let table = DoubleCoeffTable::new(&pi, 7).unwrap();
        assert_eq!(table.get(2, 1).unwrap(), q_int(11));
        assert_eq!(table.get(1, 6).unwrap(), q_int(36));
    }

    #[test]
    fn lambda_std_examples() {
        let (pi, _) = running_pair(5);
        assert_eq!(lambda_std(&pi, 1).unwrap(), q_int(1));
        assert_eq!(lambda_std(&pi, 3).unwrap(), q_int(6));
        let ones = GlobalRep::unramified(3, 5, |_| vec![q_int(1); 3]).unwrap();
        assert_eq!(lambda_std(&ones, 5).unwrap(), q_int(3));
    }

    #[test]
    fn central_char_examples() {
        let (_, tau) = running_pair(5);
        assert_eq!(central_char(&tau, 1).unwrap(), q_int(1));
        assert_eq!(central_char(&tau, 3).unwrap(), q_int(2));
        assert_eq!(central_char(&tau, 27).unwrap(), q_int(8));
        let ram = tau
            .clone()
            .with_local(LocalData::ramified(
                3,
                vec![q_int(1), Q::from_integer(0.into())],
                1,
                crate::langlands::RootNumber::ONE,
            ))
            .unwrap();
        assert_eq!(central_char(&ram, 3), Err(Error::MissingCentralValue(3)));
    }

    #[test]
    fn running_data_anchors() {
        let (pi, tau) = running_pair(13);
        assert_eq!(c_pi_tau(&pi, &tau, 1).unwrap(), q_int(1));
        assert_eq!(c_pi_tau(&pi, &tau, 7).unwrap(), q_int(18));
        assert_eq!(c_pi_tau(&pi, &tau, 49).unwrap(), q_int(197));
        assert_eq!(lambda_rs(&pi, &tau, 1).unwrap(), q_int(1));
        assert_eq!(lambda_rs(&pi, &tau, 7).unwrap(), q_int(18));
        assert_eq!(lambda_rs(&pi, &tau, 49).unwrap(), q_int(197));
        assert_eq!(rscauchy_coeff(&pi, &tau, 7, 0).unwrap(), q_int(1));
        assert_eq!(rscauchy_coeff(&pi, &tau, 7, 1).unwrap(), q_int(18));
        assert_eq!(rscauchy_coeff(&pi, &tau, 7, 2).unwrap(), q_int(197));
    }

    #[test]
    fn doublesum_running_data() {
        let (pi, tau) = running_pair(100);
        assert!(doublesum_check(&pi, &tau, 1).unwrap().passed());
        assert!(doublesum_check(&pi, &tau, 100).unwrap().passed());
        let series = c_pi_tau_series(&pi, &tau, 49).unwrap();
        assert_eq!(*series.coeff(49), q_int(197));
    }

    #[test]
    fn standardcoeff_examples() {
        let (pi, _) = running_pair(50);
        assert!(standardcoeff_check(&pi, 1).unwrap().passed());
        assert!(standardcoeff_check(&pi, 50).unwrap().passed());
    }

    #[test]
    fn ctwist_examples() {
        let (pi, tau) = running_pair(30);
        assert!(ctwist_check(&pi, &tau, |_| q_int(1), 30).unwrap().passed());
        let two = |_| q_int(2);
        let twisted = twist_unramified(&tau, two).unwrap();
        assert_eq!(c_pi_tau(&pi, &twisted, 5).unwrap(), q_int(2) * c_pi_tau(&pi, &tau, 5).unwrap());
        assert!(ctwist_check(&pi, &tau, |p| q_frac(1, p as i64), 30).unwrap().passed());
    }

    #[test]
    fn mismatch_is_reported() {
        let (pi, tau) = running_pair(20);
        let lhs = c_pi_tau_series(&pi, &tau, 20).unwrap();
        let mut bad = lhs.values().to_vec();
        bad[11] = bad[11].clone() + q_int(1);
        let report = CheckReport::compare(&lhs, &DirichletSeries::from_vec(bad), 20);
        assert_eq!(report.first_failure.map(|m| m.n), Some(12));
    }

    #[test]
    fn csv_dump() {
        let (pi, tau) = running_pair(5);
        let csv = write_csv(&lambda_rs_series(&pi, &tau, 3).unwrap());
        assert_eq!(csv, "n,value\n1,1\n2,18\n3,18\n");
    }
}
