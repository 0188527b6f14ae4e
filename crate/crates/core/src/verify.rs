//! Randomized verification suites.
//!
//! Each suite returns one [`Check`] per identity instance. A check carries
//! the tag of the identity it exercises from [`ANCHORS`], a textual
//! description of its inputs, and the expected and observed outcomes.
//! Reports depend only on the seed and the [`SuiteConfig`].

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::characters::{
    addtomult_check, char_group, gauss_beta, gauss_classical, in_nonvanishing_window, nonvanishing_window_check,
    DirichletCharacter,
};
use crate::coeffs::{
    c_pi_tau, c_pi_tau_series, lambda_rs, lambda_rs_series, rscauchy_coeff, standardcoeff_check, CheckReport,
};
use crate::error::Error;
use crate::eulerlib::{DirichletSeries, EulerFactorPoly};
use crate::funceq::{dirichlet_fe_residual, dirichlet_global_rep, dirichlet_root_number, synthetic_rs_fe_check};
use crate::langlands::{aux_quotient, degenerate_check, epsilon_global, jpss_local, EssSqIntSpec, Gl1Char, GlobalRep};
use crate::matid::{
    clgp_reduce, content, main2_identity_check, verify_supp_decomposition, CosetContext, Main2Instance, RatMat,
};
use crate::random::{self, LabRng, RepShape};
use crate::scalar::{q_frac, q_int, Field, ScalarMode, C64, Q};
use crate::symfunc::{cauchy_check, cauchy_two_row, schur3, schur_tableau, Partition3};
use crate::twists::{gl31_decomposition_check, lambda_q2_one_ramified, main2_epsilon, Main2Inputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cauchy,
    Doublesum,
    Aux,
    Gauss,
    Addtomult,
    Clgp,
    Matid,
    Funceq,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Cauchy,
        Suite::Doublesum,
        Suite::Aux,
        Suite::Gauss,
        Suite::Addtomult,
        Suite::Clgp,
        Suite::Matid,
        Suite::Funceq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cauchy => "cauchy",
            Suite::Doublesum => "doublesum",
            Suite::Aux => "aux",
            Suite::Gauss => "gauss",
            Suite::Addtomult => "addtomult",
            Suite::Clgp => "clgp",
            Suite::Matid => "matid",
            Suite::Funceq => "funceq",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::parse(s))
    }
}

/// Check id to the tag of the identity it exercises.
pub const ANCHORS: &[(&str, &str)] = &[
    ("cauchy.exact", "schur:cauchy-identity"),
    ("cauchy.float", "schur:cauchy-identity"),
    ("schur.oracle", "schur:bialternant"),
    ("doublesum.anchor", "rs:double-sum"),
    ("doublesum.identity", "rs:double-sum"),
    ("doublesum.rscauchy", "rs:two-row-cauchy"),
    ("standardcoeff.identity", "gl3:standard-coefficient"),
    ("aux.anchor", "local:jpss-quotient"),
    ("aux.quotient", "local:jpss-quotient"),
    ("aux.degenerate", "local:jpss-degenerate"),
    ("gauss.modulus", "gauss:modulus"),
    ("gauss.window", "gauss:nonvanishing-window"),
    ("addtomult.identity", "twist:additive-to-multiplicative"),
    ("twist.decomposition", "twist:gl3xgl1-decomposition"),
    ("clgp.anchor", "coset:reduction"),
    ("clgp.reduce", "coset:reduction"),
    ("clgp.invariance", "coset:double-coset-invariance"),
    ("matid.supp", "matrix:unipotent-decomposition"),
    ("matid.main2", "matrix:dual-unfolding"),
    ("funceq.dirichlet", "fe:dirichlet"),
    ("funceq.synthetic", "fe:gl3xgl2-product"),
    ("funceq.epsilon", "fe:local-root-numbers"),
    ("funceq.root_number", "fe:root-number-modulus"),
];

pub fn anchor(check: &str) -> &'static str {
    ANCHORS.iter().find(|(id, _)| *id == check).map_or("untagged", |(_, tag)| tag)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub check: &'static str,
    pub anchor: &'static str,
    pub inputs: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl Check {
    fn new(
        suite: Suite,
        check: &'static str,
        inputs: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        passed: bool,
    ) -> Self {
        Check {
            suite,
            check,
            anchor: anchor(check),
            inputs: inputs.into(),
            expected: expected.into(),
            actual: actual.into(),
            passed,
        }
    }

    fn errored(
        suite: Suite,
        check: &'static str,
        inputs: impl Into<String>,
        expected: impl Into<String>,
        e: &Error,
    ) -> Self {
        Check::new(suite, check, inputs, expected, format!("error: {e}"), false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    /// Checks with the given id.
    pub fn of(&self, check: &str) -> impl Iterator<Item = &Check> + '_ {
        let check = check.to_string();
        self.checks.iter().filter(move |c| c.check == check)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Field for the coefficient identities in `doublesum`.
    pub mode: ScalarMode,
    /// Truncation for the double-sum identity.
    pub doublesum_n: u64,
    /// Truncation for the standard-coefficient identity.
    pub standard_n: u64,
    /// Adds 1 to `c(n)` of the first double-sum set.
    pub fault_at: Option<u64>,
}

pub const DEFAULT_SEED: u64 = 20_240_917;

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED, mode: ScalarMode::Exact, doublesum_n: 5000, standard_n: 2000, fault_at: None }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let checks = match suite {
        Suite::Cauchy => cauchy_suite(cfg),
        Suite::Doublesum => doublesum_suite(cfg),
        Suite::Aux => aux_suite(cfg),
        Suite::Gauss => gauss_suite(),
        Suite::Addtomult => addtomult_suite(cfg),
        Suite::Clgp => clgp_suite(cfg),
        Suite::Matid => matid_suite(cfg),
        Suite::Funceq => funceq_suite(cfg),
    };
    SuiteReport { suite, seed: cfg.seed, checks, elapsed: start.elapsed() }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteReport> {
    Suite::ALL.into_iter().map(|s| run_suite(s, cfg)).collect()
}

fn fmt3<F: fmt::Display>(x: &[F]) -> String {
    let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn rng(cfg: &SuiteConfig, label: &str, index: u64) -> LabRng {
    random::stream(cfg.seed, label, index)
}

fn seed_tag(cfg: &SuiteConfig, label: &str, index: u64) -> String {
    format!("seed={} stream={label}#{index}", cfg.seed)
}

// ---------------------------------------------------------------- cauchy

pub const CAUCHY_DEGREE: u32 = 12;
pub const CAUCHY_FLOAT_TOL: f64 = 1e-9;
pub const SCHUR_ORACLE_MAX_PART: u32 = 6;
pub const SCHUR_ORACLE_POINTS: usize = 50;

/// Every point whose index is `0 mod 5` repeats a coordinate, every
/// `0 mod 10` repeats all three.
fn schur_point(rng: &mut LabRng, i: usize) -> [Q; 3] {
    let mut x = [random::rational(rng, 5, 4), random::rational(rng, 5, 4), random::rational(rng, 5, 4)];
    if i.is_multiple_of(10) {
        x = [x[0].clone(), x[0].clone(), x[0].clone()];
    } else if i.is_multiple_of(5) {
        x[2] = x[rng.gen_range(0..2)].clone();
    }
    x
}

fn cauchy_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Cauchy;
    let mut out = Vec::new();
    for i in 0..10 {
        let r = &mut rng(cfg, "cauchy.exact", i);
        let alpha: [Q; 3] = std::array::from_fn(|_| random::rational(r, 4, 4));
        let gamma: [Q; 3] = std::array::from_fn(|_| random::rational(r, 4, 4));
        let full = cauchy_check(&alpha, &gamma, CAUCHY_DEGREE);
        let two = cauchy_two_row(&alpha, &gamma[0], &gamma[1], CAUCHY_DEGREE);
        out.push(Check::new(
            s,
            "cauchy.exact",
            format!(
                "{} alpha={} gamma={} degree<={CAUCHY_DEGREE}",
                seed_tag(cfg, "cauchy.exact", i),
                fmt3(&alpha),
                fmt3(&gamma)
            ),
            "residual 0, two-row residual 0",
            format!("residual {full:e}, two-row residual {two:e}"),
            full == 0.0 && two == 0.0,
        ));
    }
    for i in 0..10 {
        let r = &mut rng(cfg, "cauchy.float", i);
        let draw = |r: &mut LabRng| C64::from_polar(r.gen_range(0.0..1.0), r.gen_range(0.0..std::f64::consts::TAU));
        let alpha: [C64; 3] = std::array::from_fn(|_| draw(r));
        let gamma: [C64; 3] = std::array::from_fn(|_| draw(r));
        let full = cauchy_check(&alpha, &gamma, CAUCHY_DEGREE);
        let two = cauchy_two_row(&alpha, &gamma[0], &gamma[1], CAUCHY_DEGREE);
        out.push(Check::new(
            s,
            "cauchy.float",
            format!("{} degree<={CAUCHY_DEGREE}", seed_tag(cfg, "cauchy.float", i)),
            format!("residual < {CAUCHY_FLOAT_TOL:e}"),
            format!("residual {:e}", full.max(two)),
            full.max(two) < CAUCHY_FLOAT_TOL,
        ));
    }
    for l1 in 0..=SCHUR_ORACLE_MAX_PART {
        for l2 in 0..=l1 {
            for l3 in 0..=l2 {
                let lam = Partition3::new(l1 as i64, l2 as i64, l3 as i64).expect("ordered");
                let index = (l1 * 100 + l2 * 10 + l3) as u64;
                let r = &mut rng(cfg, "schur.oracle", index);
                let mut bad = None;
                for i in 0..SCHUR_ORACLE_POINTS {
                    let x = schur_point(r, i);
                    match schur_tableau(lam, &x) {
                        Ok(t) if t == schur3(lam, &x) => {}
                        Ok(t) => bad = bad.or(Some(format!("at {}: {} vs tableaux {t}", fmt3(&x), schur3(lam, &x)))),
                        Err(e) => bad = bad.or(Some(e.to_string())),
                    }
                }
                out.push(Check::new(
                    s,
                    "schur.oracle",
                    format!(
                        "{} lambda=({l1},{l2},{l3}) points={SCHUR_ORACLE_POINTS}",
                        seed_tag(cfg, "schur.oracle", index)
                    ),
                    "bialternant equals tableau sum",
                    bad.clone().unwrap_or_else(|| "equal at all points".into()),
                    bad.is_none(),
                ));
            }
        }
    }
    out
}

// ------------------------------------------------------------- doublesum

pub const DOUBLESUM_SETS: u64 = 20;
pub const STANDARD_SETS: u64 = 10;

fn describe_failure<F: Field>(r: &CheckReport<F>) -> String {
    match &r.first_failure {
        None => format!("equal for all n <= {}", r.checked),
        Some(m) => format!("first mismatch at n = {}: {} vs {}", m.n, m.lhs, m.rhs),
    }
}

fn doublesum_set<F: Field>(
    pi: &GlobalRep<F>,
    tau: &GlobalRep<F>,
    n_max: u64,
    fault_at: Option<u64>,
) -> Result<(CheckReport<F>, Option<u32>), Error> {
    let mut lhs = c_pi_tau_series(pi, tau, n_max)?;
    if let Some(n) = fault_at.filter(|&n| n >= 1 && n <= n_max) {
        let mut v = lhs.values().to_vec();
        v[(n - 1) as usize] = v[(n - 1) as usize].clone() + F::one();
        lhs = DirichletSeries::from_vec(v);
    }
    let rhs = lambda_rs_series(pi, tau, n_max)?;
    let report = CheckReport::compare(&lhs, &rhs, n_max);
    let mut rs_bad = None;
    for k in 0..=CAUCHY_DEGREE {
        if !rscauchy_coeff(pi, tau, 2, k)?.close_to(&lambda_rs(pi, tau, 1 << k)?, crate::coeffs::FLOAT_COEFF_TOL) {
            rs_bad = rs_bad.or(Some(k));
        }
    }
    Ok((report, rs_bad))
}

fn doublesum_sets<F: Field>(
    cfg: &SuiteConfig,
    draw: impl Fn(&mut LabRng, RepShape) -> Result<GlobalRep<F>, Error>,
) -> Vec<Check> {
    let s = Suite::Doublesum;
    let n = cfg.doublesum_n;
    let mut out = Vec::new();
    for i in 0..DOUBLESUM_SETS {
        let tag = format!("{} mode={} N={n}", seed_tag(cfg, "doublesum", i), F::MODE);
        let r = &mut rng(cfg, "doublesum", i);
        let reps = draw(r, RepShape { degree: 3, p_max: n, ramified: 2 })
            .and_then(|pi| Ok((pi, draw(r, RepShape { degree: 2, p_max: n, ramified: 1 })?)));
        let fault = if i == 0 { cfg.fault_at } else { None };
        match reps.and_then(|(pi, tau)| doublesum_set(&pi, &tau, n, fault)) {
            Ok((report, rs_bad)) => {
                out.push(Check::new(
                    s,
                    "doublesum.identity",
                    tag.clone(),
                    format!("c(n) = lambda(n) for n <= {n}"),
                    describe_failure(&report),
                    report.passed(),
                ));
                out.push(Check::new(
                    s,
                    "doublesum.rscauchy",
                    tag,
                    "two-row Cauchy sum = lambda(2^k) for k <= 12",
                    rs_bad.map_or("equal".into(), |k| format!("differs at k = {k}")),
                    rs_bad.is_none(),
                ));
            }
            Err(e) => out.push(Check::errored(s, "doublesum.identity", tag, "identity", &e)),
        }
    }
    let m = cfg.standard_n;
    for i in 0..STANDARD_SETS {
        let tag = format!("{} mode={} N={m}", seed_tag(cfg, "standardcoeff", i), F::MODE);
        let r = &mut rng(cfg, "standardcoeff", i);
        match draw(r, RepShape { degree: 3, p_max: m, ramified: 2 }).and_then(|pi| standardcoeff_check(&pi, m)) {
            Ok(report) => out.push(Check::new(
                s,
                "standardcoeff.identity",
                tag,
                format!("lambda(1, n) = lambda(n) for n <= {m}"),
                describe_failure(&report),
                report.passed(),
            )),
            Err(e) => out.push(Check::errored(s, "standardcoeff.identity", tag, "identity", &e)),
        }
    }
    out
}

/// `c(p^2)` for `alpha = (1, 2, 3)` and `gamma = (1, 2)` at every prime.
pub fn doublesum_anchor() -> Result<Q, Error> {
    let pi = GlobalRep::unramified(3, 4, |_| vec![q_int(1), q_int(2), q_int(3)])?;
    let tau = GlobalRep::unramified(2, 4, |_| vec![q_int(1), q_int(2)])?;
    c_pi_tau(&pi, &tau, 4)
}

fn doublesum_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let inputs = "alpha=(1, 2, 3) gamma=(1, 2) n=4";
    out.push(match doublesum_anchor() {
        Ok(v) => Check::new(Suite::Doublesum, "doublesum.anchor", inputs, "197", v.to_string(), v == q_int(197)),
        Err(e) => Check::errored(Suite::Doublesum, "doublesum.anchor", inputs, "197", &e),
    });
    out.extend(match cfg.mode {
        ScalarMode::Exact => doublesum_sets(cfg, random::random_rep_exact),
        ScalarMode::Float => doublesum_sets(cfg, random::random_rep_float),
    });
    out
}

// ------------------------------------------------------------------- aux

pub const AUX_PRIMES: [u64; 3] = [2, 3, 5];
pub const AUX_MAX_SEGMENT: u32 = 4;

fn aux_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Aux;
    let mut out = Vec::new();
    for p in AUX_PRIMES {
        let (pi, tau) = (EssSqIntSpec::<Q>::steinberg(3), EssSqIntSpec::<Q>::steinberg(2));
        let want = EulerFactorPoly::new(vec![Q::one(), -q_frac(1, (p * p) as i64)]);
        let got = jpss_local(&pi, &tau, p).and_then(|j| aux_quotient(&pi.to_local(p)?, &tau.to_local(p)?, &j));
        let inputs = format!("St(3) x St(2) at p={p}");
        out.push(match got {
            Ok(q) => Check::new(s, "aux.anchor", inputs, want.to_string(), q.to_string(), q == want),
            Err(e) => Check::errored(s, "aux.anchor", inputs, want.to_string(), &e),
        });
    }
    for (pi_idx, p) in AUX_PRIMES.into_iter().enumerate() {
        let r = &mut rng(cfg, "aux", pi_idx as u64);
        for b in 1..=AUX_MAX_SEGMENT {
            for m in 1..=AUX_MAX_SEGMENT {
                let u = random::nonzero_rational(r, 4, 4);
                let chi = random::nonzero_rational(r, 4, 4);
                for eta in [Gl1Char::Unramified(u.clone()), Gl1Char::Ramified { conductor_exp: 1 }] {
                    let eta_s = match &eta {
                        Gl1Char::Unramified(v) => format!("unramified({v})"),
                        Gl1Char::Ramified { .. } => "ramified".to_string(),
                    };
                    let inputs = format!(
                        "{} p={p} b={b} m={m} eta={eta_s} chi=unramified({chi})",
                        seed_tag(cfg, "aux", pi_idx as u64)
                    );
                    let pi = EssSqIntSpec::new(b, eta);
                    let tau = EssSqIntSpec::new(m, Gl1Char::Unramified(chi.clone()));
                    let res = (|| {
                        let (pl, tl) = (pi.to_local(p)?, tau.to_local(p)?);
                        let j = jpss_local(&pi, &tau, p)?;
                        let quo = aux_quotient(&pl, &tl, &j);
                        Ok::<_, Error>((quo, degenerate_check(&pl, &tl, &j)))
                    })();
                    match res {
                        Ok((quo, degen)) => {
                            out.push(match quo {
                                Ok(q) => Check::new(
                                    s,
                                    "aux.quotient",
                                    inputs.clone(),
                                    "exact division",
                                    format!("P = {q}"),
                                    true,
                                ),
                                Err(e) => Check::errored(s, "aux.quotient", inputs.clone(), "exact division", &e),
                            });
                            out.push(Check::new(
                                s,
                                "aux.degenerate",
                                inputs,
                                "JPSS factor nontrivial or a standard factor trivial",
                                degen.to_string(),
                                degen,
                            ));
                        }
                        Err(e) => out.push(Check::errored(s, "aux.quotient", inputs, "exact division", &e)),
                    }
                }
            }
        }
    }
    out
}

// ----------------------------------------------------------------- gauss

pub const GAUSS_MODULUS_MAX: u64 = 100;
pub const GAUSS_MODULUS_TOL: f64 = 1e-9;
pub const WINDOW_MODULUS_MAX: u64 = 60;

fn primitive_characters(q: u64) -> Vec<DirichletCharacter> {
    char_group(q).into_iter().filter(DirichletCharacter::is_primitive).collect()
}

fn gauss_suite() -> Vec<Check> {
    let s = Suite::Gauss;
    let mut out = Vec::new();
    for q in 1..=GAUSS_MODULUS_MAX {
        let chars = primitive_characters(q);
        if chars.is_empty() {
            continue;
        }
        let dev = chars.iter().map(|c| (gauss_classical(c).norm_sqr() - q as f64).abs()).fold(0.0, f64::max);
        out.push(Check::new(
            s,
            "gauss.modulus",
            format!("q={q} primitive characters={}", chars.len()),
            format!("|tau|^2 = {q} within {GAUSS_MODULUS_TOL:e}"),
            format!("max deviation {dev:e}"),
            dev <= GAUSS_MODULUS_TOL,
        ));
    }
    for q in 1..=WINDOW_MODULUS_MAX {
        let mut windows = 0usize;
        let mut min_abs = f64::INFINITY;
        let mut failure = None;
        for (idx, chi) in char_group(q).iter().enumerate() {
            for q2 in (1..=q).filter(|d| q % d == 0) {
                if !in_nonvanishing_window(chi, q2) {
                    continue;
                }
                windows += 1;
                match nonvanishing_window_check(chi, q2) {
                    Ok(w) => {
                        min_abs = min_abs.min(w.min_abs);
                        if !w.passed() {
                            failure = failure.or(Some(format!("chi #{idx} q2={q2} vanishes at r={:?}", w.zero_at)));
                        }
                    }
                    Err(e) => failure = failure.or(Some(e.to_string())),
                }
            }
        }
        out.push(Check::new(
            s,
            "gauss.window",
            format!("q={q} windows={windows}"),
            "tau_q(chi, r/q2) != 0 in the window",
            failure.clone().unwrap_or_else(|| format!("min |tau| = {min_abs:.6}")),
            failure.is_none(),
        ));
    }
    out
}

// ------------------------------------------------------------- addtomult

pub const ADDTOMULT_MODULUS_MAX: u64 = 40;
pub const ADDTOMULT_N_MAX: i64 = 200;
pub const DECOMPOSITION_MODULUS_MAX: u64 = 20;
pub const DECOMPOSITION_N_MAX: u64 = 1000;

fn addtomult_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Addtomult;
    let mut out = Vec::new();
    for q in 1..=ADDTOMULT_MODULUS_MAX {
        let chars = primitive_characters(q);
        if chars.is_empty() {
            continue;
        }
        let mut failure = None;
        for (idx, chi) in chars.iter().enumerate() {
            for n in 1..=ADDTOMULT_N_MAX {
                match addtomult_check(chi, n) {
                    Ok(r) if r.passed() => {}
                    Ok(r) => failure = failure.or(Some(format!("chi #{idx} n={n}: {} vs {}", r.lhs, r.rhs))),
                    Err(e) => failure = failure.or(Some(e.to_string())),
                }
            }
        }
        out.push(Check::new(
            s,
            "addtomult.identity",
            format!("q={q} primitive characters={} n<={ADDTOMULT_N_MAX}", chars.len()),
            "additive average equals chi(n)",
            failure.clone().unwrap_or_else(|| "equal".into()),
            failure.is_none(),
        ));
    }
    for q in 1..=DECOMPOSITION_MODULUS_MAX {
        let chars = primitive_characters(q);
        if chars.is_empty() {
            continue;
        }
        let tag = format!("{} q={q} N={DECOMPOSITION_N_MAX}", seed_tag(cfg, "decomposition", q));
        let r = &mut rng(cfg, "decomposition", q);
        let pi = match random::random_rep_exact(r, RepShape { degree: 3, p_max: DECOMPOSITION_N_MAX, ramified: 1 }) {
            Ok(pi) => pi,
            Err(e) => {
                out.push(Check::errored(s, "twist.decomposition", tag, "identity", &e));
                continue;
            }
        };
        let mut failure = None;
        for (idx, chi) in chars.iter().enumerate() {
            match gl31_decomposition_check(&pi, chi, DECOMPOSITION_N_MAX) {
                Ok(r) if r.passed() => {}
                Ok(r) => failure = failure.or(Some(format!("chi #{idx}: {}", describe_failure(&r)))),
                Err(e) => failure = failure.or(Some(e.to_string())),
            }
        }
        out.push(Check::new(
            s,
            "twist.decomposition",
            format!("{tag} characters={}", chars.len()),
            "lambda(n) chi(n) = sum_r c_r twist_{r/q}(n)",
            failure.clone().unwrap_or_else(|| "equal".into()),
            failure.is_none(),
        ));
    }
    out
}

// ------------------------------------------------------------------ clgp

pub const CLGP_MATRICES: u64 = 500;
pub const CLGP_ENTRY_BOUND: i64 = 50;
pub const CLGP_PERTURBATIONS: usize = 5;
pub const CLGP_CONTEXTS: [(u64, u64, u64); 4] = [(5, 6, 7), (3, 2, 5), (7, 10, 3), (2, 3, 5)];

fn bottom_row(m: &RatMat) -> (Q, Q) {
    (m.get(1, 0).clone(), m.get(1, 1).clone())
}

/// `gamma1 = p gcd(c, d)` and `gamma2 = |det| / gamma1^2` for an integer
/// matrix, via integer gcd rather than rational content.
fn clgp_oracle(m: &RatMat, p: u64) -> (Q, Q) {
    let (c, d) = bottom_row(m);
    let g = c.to_integer().gcd(&d.to_integer());
    let gamma1 = Q::from_integer(g * p);
    let gamma2 = m.det().abs() / (&gamma1 * &gamma1);
    (gamma1, gamma2)
}

fn clgp_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Clgp;
    let mut out = Vec::new();
    let ctx = CosetContext::new(5, 6, 7).expect("valid context");
    let m = RatMat::from_i64(2, &[0, -1, 1, 0]).expect("2x2");
    let inputs = "M=(0,-1;1,0) ctx=(5,6,7)";
    let expected = "gamma1=5 gamma2=1/25";
    out.push(match clgp_reduce(&m, &ctx) {
        Ok(c) => {
            let ok = c.verify(&m) && c.gamma1 == q_int(5) && c.gamma2 == q_frac(1, 25);
            Check::new(s, "clgp.anchor", inputs, expected, format!("gamma1={} gamma2={}", c.gamma1, c.gamma2), ok)
        }
        Err(e) => Check::errored(s, "clgp.anchor", inputs, expected, &e),
    });
    for i in 0..CLGP_MATRICES {
        let r = &mut rng(cfg, "clgp", i);
        let (p, qp, pp) = CLGP_CONTEXTS[r.gen_range(0..CLGP_CONTEXTS.len())];
        let ctx = CosetContext::new(p, qp, pp).expect("valid context");
        let m = random::int_matrix(r, CLGP_ENTRY_BOUND);
        let inputs = format!("{} M={m} ctx=({p},{qp},{pp})", seed_tag(cfg, "clgp", i));
        let base = match clgp_reduce(&m, &ctx) {
            Ok(c) => c,
            Err(e) => {
                out.push(Check::errored(s, "clgp.reduce", inputs, "canonical form", &e));
                continue;
            }
        };
        let (g1, g2) = clgp_oracle(&m, p);
        let ok = base.verify(&m) && base.gamma1 == g1 && base.gamma2 == g2;
        out.push(Check::new(
            s,
            "clgp.reduce",
            inputs.clone(),
            format!("u M g canonical, gamma1={g1} gamma2={g2}"),
            format!("verified={} gamma1={} gamma2={}", base.verify(&m), base.gamma1, base.gamma2),
            ok,
        ));
        let row_content = content(m.get(1, 0), m.get(1, 1));
        let mut failure = None;
        for k in 0..CLGP_PERTURBATIONS {
            let (u, g) = (random::unipotent(r), random::gl2z(r, 6));
            let moved = u.mul(&m).mul(&g);
            match clgp_reduce(&moved, &ctx) {
                Ok(c) => {
                    let same = c.gamma1 == base.gamma1 && c.gamma2 == base.gamma2 && c.verify(&moved);
                    let content_ok = content(moved.get(1, 0), moved.get(1, 1)) == row_content;
                    if !(same && content_ok) {
                        failure = failure.or(Some(format!(
                            "perturbation {k}: u={u} g={g} gives gamma1={} gamma2={}",
                            c.gamma1, c.gamma2
                        )));
                    }
                }
                Err(e) => failure = failure.or(Some(e.to_string())),
            }
        }
        out.push(Check::new(
            s,
            "clgp.invariance",
            inputs,
            format!("same gammas and content under {CLGP_PERTURBATIONS} (u, g)"),
            failure.clone().unwrap_or_else(|| "invariant".into()),
            failure.is_none(),
        ));
    }
    out
}

// ----------------------------------------------------------------- matid

pub const SUPP_INSTANCES: u64 = 100;
pub const MAIN2_INSTANCES: u64 = 100;

fn main2_check(s: Suite, inst: &Main2Instance, inputs: String, expect: Option<(Q, Q)>) -> Check {
    let expected = match &expect {
        Some((b, d)) => format!("identity exact, beta1'=0, beta2'={b}, det gamma={d}"),
        None => "identity exact, beta1'=0, det gamma = n^2 q^3/(a_j a_k)".to_string(),
    };
    match main2_identity_check(inst) {
        Ok(r) => {
            let pinned = expect.as_ref().is_none_or(|(b, d)| &r.beta2_prime == b && &r.det_gamma == d);
            Check::new(
                s,
                "matid.main2",
                inputs,
                expected,
                format!(
                    "identity={} beta1'={} beta2'={} det gamma={} (expected {}) kappa={} kappa non-integral at {:?}",
                    r.identity_holds,
                    r.beta1_prime,
                    r.beta2_prime,
                    r.det_gamma,
                    r.det_gamma_expected,
                    r.kappa,
                    r.kappa_nonintegral_at
                ),
                r.passed() && pinned,
            )
        }
        Err(e) => Check::errored(s, "matid.main2", inputs, expected, &e),
    }
}

fn matid_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Matid;
    let mut out = Vec::new();
    for i in 0..SUPP_INSTANCES {
        let r = &mut rng(cfg, "supp", i);
        let (u, w) = (random::nonzero_rational(r, 30, 30), random::nonzero_rational(r, 30, 30));
        let inputs = format!("{} u={u} w={w}", seed_tag(cfg, "supp", i));
        out.push(match verify_supp_decomposition(&u, &w) {
            Ok(ok) => Check::new(s, "matid.supp", inputs, "exact equality", ok.to_string(), ok),
            Err(e) => Check::errored(s, "matid.supp", inputs, "exact equality", &e),
        });
    }
    let trivial = Main2Instance { a_j: q_int(1), a_k: q_int(1), n: 1, q: 1, beta2: Q::zero(), u: 0, v: 0 };
    out.push(main2_check(s, &trivial, "n=1 q=1 beta2=0 u=v=0".into(), Some((Q::zero(), q_int(1)))));
    match Main2Instance::solve(q_int(1), q_int(1), 1, 3, 1, 0) {
        Ok(inst) => {
            out.push(main2_check(s, &inst, "n=1 q=3 beta2=1/3 a_j=a_k=1 u=0".into(), Some((q_frac(2, 3), q_int(27)))))
        }
        Err(e) => out.push(Check::errored(s, "matid.main2", "q=3 anchor", "solvable", &e)),
    }
    for i in 0..MAIN2_INSTANCES {
        let r = &mut rng(cfg, "main2", i);
        let inst = random::main2_instance(r);
        let inputs = format!(
            "{} a_j={} a_k={} n={} q={} beta2={} u={} v={}",
            seed_tag(cfg, "main2", i),
            inst.a_j,
            inst.a_k,
            inst.n,
            inst.q,
            inst.beta2,
            inst.u,
            inst.v
        );
        out.push(main2_check(s, &inst, inputs, None));
    }
    out
}

// ---------------------------------------------------------------- funceq

pub const FE_MODULI: [u64; 4] = [3, 4, 5, 7];
pub const FE_TOL: f64 = 1e-8;
pub const EPSILON_TOL: f64 = 1e-10;
pub const ROOT_NUMBER_TOL: f64 = 1e-9;
pub const ROOT_NUMBER_INSTANCES: u64 = 100;
pub const SYNTHETIC_RANDOM: u64 = 8;

fn critical_points() -> Vec<C64> {
    (0..=2).map(|t| C64::new(0.5, t as f64)).collect()
}

fn synthetic_check(s: Suite, chi: &DirichletCharacter, t: [f64; 3], u: f64, inputs: String) -> Check {
    let q = chi.modulus();
    let expected = format!("residual < {FE_TOL:e}, conductor {}, |eps| = 1", q.pow(3));
    match synthetic_rs_fe_check(t, chi, u, &critical_points()) {
        Ok(r) => {
            let ok = r.max_residual() < FE_TOL
                && r.conductor == q.pow(3)
                && (r.epsilon.norm() - 1.0).abs() < ROOT_NUMBER_TOL
                && r.residuals.len() + r.skipped.len() == critical_points().len();
            Check::new(
                s,
                "funceq.synthetic",
                inputs,
                expected,
                format!(
                    "residual {:e}, conductor {}, eps {:.12}, skipped {}",
                    r.max_residual(),
                    r.conductor,
                    r.epsilon,
                    r.skipped.len()
                ),
                ok,
            )
        }
        Err(e) => Check::errored(s, "funceq.synthetic", inputs, expected, &e),
    }
}

/// Root number from unit-modulus local data and the matrix identity's
/// `beta2'`.
fn random_root_number(r: &mut LabRng) -> Result<(String, C64), Error> {
    loop {
        let inst = random::main2_instance(r);
        let chars = primitive_characters(inst.q);
        if inst.q < 3 || chars.is_empty() {
            continue;
        }
        let chi = &chars[r.gen_range(0..chars.len())];
        let report = main2_identity_check(&inst)?;
        let inputs = Main2Inputs {
            n: inst.n,
            q: inst.q,
            eps_pi: random::unit_complex(r),
            eps_tau: random::unit_complex(r),
            central_pi_at_q: random::unit_complex(r),
            central_tau_at_nq2: random::unit_complex(r),
            lambda_tau_dual_q2: lambda_q2_one_ramified(&random::unit_complex(r)),
            gauss_beta2: gauss_beta(chi, &inst.beta2),
            gauss_beta2_prime: gauss_beta(chi, &report.beta2_prime),
        };
        let desc = format!("n={} q={} beta2={} beta2'={}", inst.n, inst.q, inst.beta2, report.beta2_prime);
        return Ok((desc, main2_epsilon(&inputs)?));
    }
}

fn funceq_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let s = Suite::Funceq;
    let mut out = Vec::new();
    for q in std::iter::once(1).chain(FE_MODULI) {
        for (idx, chi) in primitive_characters(q).iter().enumerate() {
            for pt in critical_points() {
                let inputs = format!("q={q} chi #{idx} s={pt}");
                let expected = format!("residual < {FE_TOL:e}");
                // Lambda(s) for the Riemann zeta has no pole on the critical line
                out.push(match dirichlet_fe_residual(pt, chi) {
                    Ok(res) => {
                        Check::new(s, "funceq.dirichlet", inputs, expected, format!("residual {res:e}"), res < FE_TOL)
                    }
                    Err(e) => Check::errored(s, "funceq.dirichlet", inputs, expected, &e),
                });
            }
        }
    }
    if let Some(chi) = primitive_characters(3).first() {
        out.push(synthetic_check(s, chi, [0.0; 3], 0.0, "q=3 t=(0, 0, 0) u=0".into()));
    }
    if let Some(chi) = primitive_characters(4).first() {
        out.push(synthetic_check(s, chi, [0.5, -0.5, 0.0], 0.0, "q=4 t=(0.5, -0.5, 0) u=0".into()));
    }
    for i in 0..SYNTHETIC_RANDOM {
        let r = &mut rng(cfg, "synthetic", i);
        let chi = random::primitive_character(r, &FE_MODULI);
        let t: [f64; 3] = std::array::from_fn(|_| r.gen_range(-2.0..2.0));
        let u = r.gen_range(-1.0..1.0);
        let inputs = format!(
            "{} q={} t=({:.4}, {:.4}, {:.4}) u={u:.4}",
            seed_tag(cfg, "synthetic", i),
            chi.modulus(),
            t[0],
            t[1],
            t[2]
        );
        out.push(synthetic_check(s, &chi, t, u, inputs));
    }
    for q in [3u64, 4, 5, 7, 8, 12, 15] {
        for (idx, chi) in primitive_characters(q).iter().enumerate() {
            let inputs = format!("q={q} chi #{idx}");
            let expected = format!("product of local root numbers matches within {EPSILON_TOL:e}");
            out.push(match dirichlet_global_rep(chi, 30) {
                Ok(rep) => {
                    let (eps, cond) = epsilon_global(&rep);
                    let i_a = if chi.parity() == 1 { C64::new(0.0, 1.0) } else { C64::new(1.0, 0.0) };
                    let diff = (eps.to_c64() / i_a - dirichlet_root_number(chi)).norm();
                    let ok = diff < EPSILON_TOL && cond == q.into();
                    Check::new(
                        s,
                        "funceq.epsilon",
                        inputs,
                        expected,
                        format!("deviation {diff:e}, conductor {cond}"),
                        ok,
                    )
                }
                Err(e) => Check::errored(s, "funceq.epsilon", inputs, expected, &e),
            });
        }
    }
    for i in 0..ROOT_NUMBER_INSTANCES {
        let r = &mut rng(cfg, "root_number", i);
        let tag = seed_tag(cfg, "root_number", i);
        let expected = format!("|eps| = 1 within {ROOT_NUMBER_TOL:e}");
        out.push(match random_root_number(r) {
            Ok((desc, eps)) => {
                let dev = (eps.norm() - 1.0).abs();
                Check::new(
                    s,
                    "funceq.root_number",
                    format!("{tag} {desc}"),
                    expected,
                    format!("|eps| - 1 = {dev:e}"),
                    dev < ROOT_NUMBER_TOL,
                )
            }
            Err(e) => Check::errored(s, "funceq.root_number", tag, expected, &e),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn every_check_id_is_registered() {
        let cfg = SuiteConfig { doublesum_n: 60, standard_n: 60, ..SuiteConfig::default() };
        for s in [Suite::Aux, Suite::Matid, Suite::Doublesum] {
            let r = run_suite(s, &cfg);
            assert!(r.checks.iter().all(|c| c.anchor != "untagged"), "{s}");
            assert!(r.passed(), "{:?}", r.first_failure());
        }
    }

    #[test]
    fn fault_injection_names_n() {
        let cfg = SuiteConfig { doublesum_n: 80, standard_n: 10, fault_at: Some(37), ..SuiteConfig::default() };
        let r = run_suite(Suite::Doublesum, &cfg);
        let bad = r.first_failure().unwrap();
        assert_eq!(bad.check, "doublesum.identity");
        assert!(bad.actual.contains("n = 37"), "{}", bad.actual);
        assert_eq!(r.checks.iter().filter(|c| !c.passed).count(), 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig { seed: 99, ..SuiteConfig::default() };
        let a = run_suite(Suite::Clgp, &cfg);
        let b = run_suite(Suite::Clgp, &cfg);
        assert_eq!(a.checks, b.checks);
    }
}
