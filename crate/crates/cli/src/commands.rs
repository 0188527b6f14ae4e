use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use rslab_core::characters::{char_group, gauss_beta};
use rslab_core::coeffs::{lambda_rs_series, lambda_std_series, write_csv};
use rslab_core::funceq::{dirichlet_fe_residual, dirichlet_root_number, synthetic_rs_fe_check};
use rslab_core::langlands::repfile::{parse_rep, AnyRep};
use rslab_core::langlands::GlobalRep;
use rslab_core::matid::{clgp_reduce, supp_support, CosetContext, RatMat};
use rslab_core::random::{self, RepShape};
use rslab_core::scalar::parse_rational;
use rslab_core::twists::{gl31_twist, ArchChar};
use rslab_core::verify::{run_suite, Suite, SuiteConfig};
use rslab_core::{Error, Field, ScalarMode, C64, Q};

use crate::config::RunConfig;
use crate::{table, CliError, FuncEqArgs, GaussArgs, TwistArgs};

use rslab_core::verify::FE_TOL;

/// Writes to `--out` when given, else to standard output.
fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_lines(values: &[Value]) -> String {
    values.iter().map(|v| v.to_string() + "\n").collect()
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::BadInput(msg.into())
}

// ---------------------------------------------------------------- verify

pub fn verify(cfg: &RunConfig, suite: &str, fault_at: Option<u64>) -> Result<(), CliError> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        vec![suite
            .parse()
            .map_err(|_| bad(format!("unknown suite `{suite}`; expected one of {}, all", names.join(", "))))?]
    };
    let scfg = SuiteConfig {
        seed: cfg.seed,
        mode: cfg.mode,
        doublesum_n: cfg.n_or(5000),
        standard_n: cfg.n.map_or(2000, |n| n.min(2000)),
        fault_at,
    };
    let mut sink = match &cfg.out {
        Some(path) => Some(fs::File::create(path)?),
        None => None,
    };
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut total = 0usize;
    for s in suites {
        let report = run_suite(s, &scfg);
        if let Some(f) = sink.as_mut() {
            for c in &report.checks {
                let mut v = serde_json::to_value(c).expect("serializable");
                v["seed"] = json!(scfg.seed);
                v["mode"] = json!(scfg.mode.to_string());
                writeln!(f, "{v}")?;
            }
        }
        let mut ids: Vec<&str> = report.checks.iter().map(|c| c.check).collect();
        ids.dedup();
        for id in ids {
            let (n, ok) = report.of(id).fold((0, 0), |(n, ok), c| (n + 1, ok + c.passed as usize));
            rows.push(vec![
                s.name().to_string(),
                id.to_string(),
                rslab_core::verify::anchor(id).to_string(),
                format!("{ok}/{n}"),
                if ok == n { "pass" } else { "FAIL" }.to_string(),
            ]);
        }
        total += report.checks.len();
        if let Some(c) = report.first_failure() {
            print!("{}", table::render(&["suite", "check", "anchor", "passed", "status"], &rows));
            eprintln!("FAIL {} [{}]", c.check, c.anchor);
            eprintln!("  inputs:    {}", c.inputs);
            eprintln!("  expected:  {}", c.expected);
            eprintln!("  actual:    {}", c.actual);
            let fault = fault_at.map_or(String::new(), |n| format!(" --fault-at {n}"));
            eprintln!(
                "  reproduce: rslab verify {} --seed {} --mode {} --N {}{fault}",
                s.name(),
                scfg.seed,
                scfg.mode,
                scfg.doublesum_n
            );
            return Err(CliError::Failed(format!("suite {} failed", s.name())));
        }
    }
    print!("{}", table::render(&["suite", "check", "anchor", "passed", "status"], &rows));
    println!("{total} checks passed in {:.1?} (seed {})", start.elapsed(), scfg.seed);
    Ok(())
}

// ------------------------------------------------------------------ dump

fn load_rep(path: &Path) -> Result<AnyRep, CliError> {
    Ok(parse_rep(&fs::read_to_string(path)?)?)
}

fn random_rep(cfg: &RunConfig, degree: usize, index: u64, p_max: u64) -> Result<AnyRep, CliError> {
    let rng = &mut random::stream(cfg.seed, "cli.rep", index);
    let shape = RepShape { degree, p_max, ramified: 1 };
    Ok(match cfg.mode {
        ScalarMode::Exact => AnyRep::Exact(random::random_rep_exact(rng, shape)?),
        ScalarMode::Float => AnyRep::Float(random::random_rep_float(rng, shape)?),
    })
}

fn rs_or_std<F: Field>(pi: &GlobalRep<F>, tau: Option<&GlobalRep<F>>, n: u64) -> Result<String, Error> {
    Ok(write_csv(&match tau {
        Some(t) => lambda_rs_series(pi, t, n)?,
        None => lambda_std_series(pi, n)?,
    }))
}

pub fn dump_coeffs(cfg: &RunConfig, pi_file: Option<&Path>, tau_file: Option<&Path>) -> Result<(), CliError> {
    let n = cfg.n_or(100);
    let p_max = cfg.p_max.unwrap_or(n);
    let (pi, tau) = match (pi_file, tau_file) {
        (Some(p), t) => (load_rep(p)?, t.map(load_rep).transpose()?),
        (None, Some(t)) => (random_rep(cfg, 3, 0, p_max)?, Some(load_rep(t)?)),
        (None, None) => (random_rep(cfg, 3, 0, p_max)?, Some(random_rep(cfg, 2, 1, p_max)?)),
    };
    let csv = match (&pi, &tau) {
        (AnyRep::Exact(p), None) => rs_or_std(p, None, n)?,
        (AnyRep::Float(p), None) => rs_or_std(p, None, n)?,
        (AnyRep::Exact(p), Some(AnyRep::Exact(t))) => rs_or_std(p, Some(t), n)?,
        (AnyRep::Float(p), Some(AnyRep::Float(t))) => rs_or_std(p, Some(t), n)?,
        _ => return Err(Error::MixedMode.into()),
    };
    emit(cfg, &csv)
}

// ----------------------------------------------------------------- gauss

pub fn gauss(cfg: &RunConfig, a: &GaussArgs) -> Result<(), CliError> {
    if a.q == 0 {
        return Err(bad("q must be positive"));
    }
    let group = char_group(a.q);
    let indices: Vec<usize> = match a.chi_index {
        Some(i) if i < group.len() => vec![i],
        Some(i) => return Err(bad(format!("character index {i} out of range (group has {} elements)", group.len()))),
        None => (0..group.len()).collect(),
    };
    let betas: Vec<Q> = match &a.beta {
        Some(b) => vec![parse_rational(b)?],
        None => (0..a.q).map(|r| Q::new((r as i64).into(), (a.q as i64).into())).collect(),
    };
    let mut lines = Vec::new();
    for &i in &indices {
        for beta in &betas {
            let v = gauss_beta(&group[i], beta);
            lines.push(json!({
                "q": a.q,
                "character": i,
                "beta2": beta.to_string(),
                "re": v.re,
                "im": v.im,
                "abs2": v.norm_sqr(),
            }));
        }
    }
    emit(cfg, &json_lines(&lines))
}

// ----------------------------------------------------------------- twist

fn twist_lines<F: Field>(
    pi: &GlobalRep<F>,
    beta: &Q,
    modulus: u64,
    omega: ArchChar,
    n: u64,
) -> Result<Vec<Value>, Error> {
    let series = gl31_twist(pi, beta, modulus, omega, n)?;
    Ok((1..=n)
        .map(|k| {
            let c: C64 = series.coeff(k);
            json!({ "n": k, "re": c.re, "im": c.im })
        })
        .collect())
}

pub fn twist(cfg: &RunConfig, a: &TwistArgs) -> Result<(), CliError> {
    let beta = parse_rational(&a.beta)?;
    let modulus = match a.q {
        Some(q) => q,
        None => beta.denom().try_into().map_err(|_| bad("denominator of beta too large"))?,
    };
    let omega = ArchChar::new(a.parity, 0.0)?;
    let n = cfg.n_or(100);
    let pi = match &a.pi_file {
        Some(p) => load_rep(p)?,
        None => random_rep(cfg, 3, 0, cfg.p_max.unwrap_or(n))?,
    };
    let lines = match &pi {
        AnyRep::Exact(p) => twist_lines(p, &beta, modulus, omega, n)?,
        AnyRep::Float(p) => twist_lines(p, &beta, modulus, omega, n)?,
    };
    emit(cfg, &json_lines(&lines))
}

// ---------------------------------------------------------------- reduce

fn parse_ctx(text: &str) -> Result<CosetContext, CliError> {
    let parts: Vec<u64> = text
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| bad(format!("context `{text}`: expected p,q',p'"))))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [p, qp, pp] => Ok(CosetContext::new(p, qp, pp)?),
        _ => Err(bad(format!("context `{text}`: expected three integers"))),
    }
}

pub fn reduce(cfg: &RunConfig, matrix: &str, ctx: &str) -> Result<(), CliError> {
    let m = RatMat::parse(matrix)?;
    if m.dim() != 2 {
        return Err(bad("expected a 2x2 matrix"));
    }
    let ctx = parse_ctx(ctx)?;
    let c = clgp_reduce(&m, &ctx)?;
    let verified = c.verify(&m);
    let v = json!({
        "matrix": m.to_string(),
        "gamma1": c.gamma1.to_string(),
        "gamma2": c.gamma2.to_string(),
        "alpha": c.alpha.to_string(),
        "u": c.u.to_string(),
        "g": c.g.to_string(),
        "representative": c.representative().to_string(),
        "in_support": supp_support(&c.gamma1, &c.gamma2, &ctx),
        "verified": verified,
    });
    emit(cfg, &(v.to_string() + "\n"))?;
    if verified {
        Ok(())
    } else {
        Err(CliError::Failed("u M g differs from the canonical representative".into()))
    }
}

// ---------------------------------------------------------------- funceq

fn parse_points(text: &str) -> Result<Vec<C64>, CliError> {
    text.split(';')
        .map(|pt| {
            let (re, im) = pt.split_once(',').ok_or_else(|| bad(format!("point `{pt}`: expected re,im")))?;
            let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| bad(format!("point `{pt}`: not a number")));
            Ok(C64::new(parse(re)?, parse(im)?))
        })
        .collect()
}

fn parse_shifts(text: &str) -> Result<[f64; 3], CliError> {
    let v: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| bad(format!("shifts `{text}`: expected t1,t2,t3"))))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| bad(format!("shifts `{text}`: expected three values")))
}

fn cjson(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn funceq(cfg: &RunConfig, a: &FuncEqArgs) -> Result<(), CliError> {
    if a.q == 0 {
        return Err(bad("q must be positive"));
    }
    let group = char_group(a.q);
    let chi = group.get(a.chi_index).ok_or_else(|| {
        bad(format!("character index {} out of range (group has {} elements)", a.chi_index, group.len()))
    })?;
    let points = match &a.points {
        Some(p) => parse_points(p)?,
        None => (0..=2).map(|t| C64::new(0.5, t as f64)).collect(),
    };
    let mut rows = Vec::new();
    let mut max_res = 0.0f64;
    for &s in &points {
        let r = dirichlet_fe_residual(s, chi)?;
        max_res = max_res.max(r);
        rows.push(json!({ "s": cjson(s), "residual": r }));
    }
    let mut passed = max_res < FE_TOL;
    let mut report = json!({
        "q": a.q,
        "chi_index": a.chi_index,
        "parity": chi.parity(),
        "epsilon": cjson(dirichlet_root_number(chi)),
        "residuals": rows,
        "max_residual": max_res,
        "tolerance": FE_TOL,
    });
    if let Some(shifts) = &a.shifts {
        let t = parse_shifts(shifts)?;
        let syn = synthetic_rs_fe_check(t, chi, a.u1, &points)?;
        let ok = syn.max_residual() < FE_TOL && syn.conductor == a.q.pow(3);
        passed &= ok;
        report["synthetic"] = json!({
            "shifts": t,
            "u1": a.u1,
            "epsilon": cjson(syn.epsilon),
            "conductor": syn.conductor,
            "residuals": syn.residuals.iter().map(|(s, r)| json!({ "s": cjson(*s), "residual": r })).collect::<Vec<_>>(),
            "skipped": syn.skipped.iter().map(|s| cjson(*s)).collect::<Vec<_>>(),
            "max_residual": syn.max_residual(),
        });
    }
    report["passed"] = json!(passed);
    emit(cfg, &(report.to_string() + "\n"))?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("functional-equation residual exceeds {FE_TOL:e}")))
    }
}
