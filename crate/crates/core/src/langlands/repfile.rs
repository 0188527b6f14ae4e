//! Text description of a [`GlobalRep`].
//!
//! One record per line, whitespace separated:
//!
//! ```text
//! # comment
//! pmax 50                      # optional; defaults to the largest listed prime
//! * 0 1 1 1 1                  # optional default record for unlisted primes
//! 2 0 1 1/2 3 -1               # p m root_number a_1 a_2 ...
//! 3 1 e(1/4) 2 0 0 cv=0        # cv= gives the central value at a ramified prime
//! ```
//!
//! Parameters are rationals `a/b` (exact mode) or `re,im` (float mode); one
//! file uses one mode. Root numbers are `1`, `-1`, `e(k/N)` or `re,im`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::arith::primes_up_to;
use crate::error::Error;
use crate::langlands::{GlobalRep, LocalData, RootNumber};
use crate::scalar::{Field, RootOfUnity, Scalar, ScalarMode, C64, Q};

/// A representation whose scalar mode was fixed by the file contents.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyRep {
    Exact(GlobalRep<Q>),
    Float(GlobalRep<C64>),
}

impl AnyRep {
    pub fn mode(&self) -> ScalarMode {
        match self {
            AnyRep::Exact(_) => ScalarMode::Exact,
            AnyRep::Float(_) => ScalarMode::Float,
        }
    }
}

struct Record {
    m: u32,
    root: RootNumber,
    params: Vec<Scalar>,
    central: Option<Scalar>,
}

fn parse_root(token: &str) -> Result<RootNumber, Error> {
    let t = token.trim();
    match t {
        "1" => return Ok(RootNumber::ONE),
        "-1" => return Ok(RootNumber::Exact(RootOfUnity::new(1, 2))),
        _ => {}
    }
    if let Some(inner) = t.strip_prefix("e(").and_then(|r| r.strip_suffix(')')) {
        let (k, n) = inner.split_once('/').ok_or_else(|| Error::parse(t))?;
        let k: i64 = k.trim().parse().map_err(|_| Error::parse(t))?;
        let n: u64 = n.trim().parse().map_err(|_| Error::parse(t))?;
        if n == 0 {
            return Err(Error::parse(t));
        }
        return Ok(RootNumber::Exact(RootOfUnity::new(k, n)));
    }
    match Scalar::parse(t)? {
        Scalar::Float(c) => Ok(RootNumber::Approx(c)),
        Scalar::Exact(_) => Err(Error::parse(t)),
    }
}

fn parse_record(fields: &[&str], line: usize) -> Result<Record, Error> {
    if fields.len() < 2 {
        return Err(Error::Parse(format!("line {line}: expected `p m root_number params...`")));
    }
    let m: u32 = fields[0].parse().map_err(|_| Error::Parse(format!("line {line}: conductor exponent")))?;
    let root = parse_root(fields[1])?;
    let mut params = Vec::new();
    let mut central = None;
    for f in &fields[2..] {
        if let Some(v) = f.strip_prefix("cv=") {
            central = Some(Scalar::parse(v)?);
        } else {
            params.push(Scalar::parse(f)?);
        }
    }
    Ok(Record { m, root, params, central })
}

fn build<F: Field>(
    records: &BTreeMap<u64, Record>,
    default: Option<&Record>,
    p_max: u64,
    conv: impl Fn(&Scalar) -> Result<F, Error>,
) -> Result<GlobalRep<F>, Error> {
    let mut locals = BTreeMap::new();
    let mut degree = None;
    for p in primes_up_to(p_max) {
        let rec = records.get(&p).or(default).ok_or(Error::MissingPrime(p))?;
        let params = rec.params.iter().map(&conv).collect::<Result<Vec<F>, _>>()?;
        degree.get_or_insert(params.len());
        let mut d = LocalData::ramified(p, params, rec.m, rec.root);
        if let Some(c) = &rec.central {
            d.central_value = Some(conv(c)?);
        }
        locals.insert(p, d);
    }
    GlobalRep::new(degree.unwrap_or(0), p_max, locals)
}

/// Parses a representation description.
pub fn parse_rep(text: &str) -> Result<AnyRep, Error> {
    let mut records = BTreeMap::new();
    let mut default = None;
    let mut p_max = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "pmax" => {
                let v = fields.get(1).and_then(|v| v.parse().ok());
                p_max = Some(v.ok_or_else(|| Error::Parse(format!("line {}: pmax", i + 1)))?);
            }
            "*" => default = Some(parse_record(&fields[1..], i + 1)?),
            p => {
                let p: u64 = p.parse().map_err(|_| Error::Parse(format!("line {}: prime `{p}`", i + 1)))?;
                if !crate::arith::is_prime(p) {
                    return Err(Error::InvalidInput(format!("line {}: {p} is not prime", i + 1)));
                }
                records.insert(p, parse_record(&fields[1..], i + 1)?);
            }
        }
    }
    let p_max = p_max.or_else(|| records.keys().next_back().copied()).unwrap_or(1);

    let mut mode = None;
    for rec in records.values().chain(default.iter()) {
        for s in rec.params.iter().chain(rec.central.iter()) {
            match mode {
                None => mode = Some(s.mode()),
                Some(m) if m != s.mode() => return Err(Error::MixedMode),
                _ => {}
            }
        }
    }
    match mode.unwrap_or(ScalarMode::Exact) {
        ScalarMode::Exact => build(&records, default.as_ref(), p_max, |s| s.clone().into_exact()).map(AnyRep::Exact),
        ScalarMode::Float => build(&records, default.as_ref(), p_max, |s| s.clone().into_float()).map(AnyRep::Float),
    }
}

/// Writes one record per prime, in exact `a/b` or float `re,im` form.
pub fn write_rep<F: Field>(rep: &GlobalRep<F>) -> String {
    let fmt_scalar = |v: &F| match F::MODE {
        ScalarMode::Exact => v.to_string(),
        ScalarMode::Float => {
            let c = v.to_c64();
            format!("{:e},{:e}", c.re, c.im)
        }
    };
    let mut out = format!("pmax {}\n", rep.p_max());
    for d in rep.locals() {
        let root = match d.root_number {
            RootNumber::Exact(r) => {
                let (k, n) = r.exponent();
                format!("e({k}/{n})")
            }
            RootNumber::Approx(c) => format!("{:e},{:e}", c.re, c.im),
        };
        let _ = write!(out, "{} {} {}", d.prime, d.conductor_exp, root);
        for a in &d.params {
            let _ = write!(out, " {}", fmt_scalar(a));
        }
        if let (false, Some(c)) = (d.is_unramified(), &d.central_value) {
            let _ = write!(out, " cv={}", fmt_scalar(c));
        }
        out.push('\n');
    }
    out
}
