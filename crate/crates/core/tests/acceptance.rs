//! Acceptance gate: runs every suite once at its full size and prints one
//! pass/fail line per criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rslab_core::verify::{self, Suite, SuiteConfig, SuiteReport};

const DOUBLESUM_BUDGET: Duration = Duration::from_secs(60);
const TOTAL_BUDGET: Duration = Duration::from_secs(300);

struct Criterion {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn report(reports: &[SuiteReport], suite: Suite) -> &SuiteReport {
    reports.iter().find(|r| r.suite == suite).expect("suite ran")
}

/// All checks with the given ids pass, and each id occurs at least `min`
/// times.
fn ids_pass(r: &SuiteReport, ids: &[(&str, usize)]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(id, min) in ids {
        let total = r.of(id).count();
        let failed: Vec<_> = r.of(id).filter(|c| !c.passed).collect();
        ok &= total >= min && failed.is_empty();
        parts.push(format!("{id} {}/{total}", total - failed.len()));
        if total < min {
            parts.push(format!("(expected at least {min})"));
        }
        if let Some(c) = failed.first() {
            parts.push(format!("[first failure: {} -> {}]", c.inputs, c.actual));
        }
    }
    (ok, parts.join(", "))
}

fn criterion(id: u32, title: &'static str, (passed, detail): (bool, String)) -> Criterion {
    Criterion { id, title, passed, detail }
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let reports = verify::run_all(&cfg);
    let total = start.elapsed();

    let ds = report(&reports, Suite::Doublesum);
    let mut crit = Vec::new();

    let (ok, detail) = ids_pass(ds, &[("doublesum.anchor", 1), ("doublesum.identity", 20), ("doublesum.rscauchy", 20)]);
    let in_budget = ds.elapsed <= DOUBLESUM_BUDGET;
    crit.push(criterion(
        1,
        "double-sum identity, exact, 20 sets, n <= 5000",
        (ok && in_budget, format!("{detail}, suite time {:.1?} (budget {DOUBLESUM_BUDGET:?})", ds.elapsed)),
    ));
    crit.push(criterion(
        2,
        "Cauchy identity and two-row specialization to degree 12",
        ids_pass(report(&reports, Suite::Cauchy), &[("cauchy.exact", 10), ("cauchy.float", 10)]),
    ));
    crit.push(criterion(
        3,
        "bialternant = tableau enumeration, lambda1 <= 6",
        ids_pass(report(&reports, Suite::Cauchy), &[("schur.oracle", 84)]),
    ));
    crit.push(criterion(
        4,
        "JPSS quotient and degenerate check on the b, m <= 4 grid",
        ids_pass(report(&reports, Suite::Aux), &[("aux.anchor", 1), ("aux.quotient", 96), ("aux.degenerate", 96)]),
    ));
    let (g_ok, g_detail) = ids_pass(report(&reports, Suite::Gauss), &[("gauss.modulus", 70), ("gauss.window", 60)]);
    let (a_ok, a_detail) = ids_pass(report(&reports, Suite::Addtomult), &[("addtomult.identity", 28)]);
    crit.push(criterion(
        5,
        "Gauss sum modulus, window nonvanishing, additive-to-multiplicative",
        (g_ok && a_ok, format!("{g_detail}, {a_detail}")),
    ));
    crit.push(criterion(
        6,
        "lambda(1, n) = lambda(n), 10 sets, n <= 2000",
        ids_pass(ds, &[("standardcoeff.identity", 10)]),
    ));
    crit.push(criterion(
        7,
        "coset reduction of 500 matrices and double-coset invariance",
        ids_pass(report(&reports, Suite::Clgp), &[("clgp.anchor", 1), ("clgp.reduce", 500), ("clgp.invariance", 500)]),
    ));
    crit.push(criterion(
        8,
        "unipotent decomposition and 3x3 dual-unfolding identity",
        ids_pass(report(&reports, Suite::Matid), &[("matid.supp", 100), ("matid.main2", 102)]),
    ));
    crit.push(criterion(
        9,
        "GL(3) x GL(1) decomposition, q <= 20, n <= 1000",
        ids_pass(report(&reports, Suite::Addtomult), &[("twist.decomposition", 15)]),
    ));
    crit.push(criterion(
        10,
        "Dirichlet and synthetic product functional equations, root number modulus",
        ids_pass(
            report(&reports, Suite::Funceq),
            &[("funceq.dirichlet", 15), ("funceq.synthetic", 10), ("funceq.epsilon", 1), ("funceq.root_number", 100)],
        ),
    ));

    let again = verify::run_all(&cfg);
    let deterministic = reports.iter().zip(&again).all(|(a, b)| a.checks == b.checks);
    let all_green = reports.iter().all(SuiteReport::passed);
    crit.push(criterion(
        11,
        "verify all within 5 minutes, deterministic under a fixed seed",
        (
            total <= TOTAL_BUDGET && deterministic && all_green,
            format!("total {total:.1?} (budget {TOTAL_BUDGET:?}), rerun identical: {deterministic}, all suites green: {all_green}"),
        ),
    ));

    println!("acceptance (seed {})", cfg.seed);
    for c in &crit {
        println!("[{}] criterion {:>2}: {} -- {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title, c.detail);
    }
    let failed = crit.iter().filter(|c| !c.passed).count();
    println!("{} of {} criteria passed", crit.len() - failed, crit.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
