//! `rslab`: batch front end for the verification suites and coefficient
//! tables.
//!
//! Exit codes: 0 on success, 2 when a checked identity fails, 3 on bad input.

mod commands;
mod config;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_mode, RunConfig, SEED_ENV};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error(transparent)]
    Core(#[from] rslab_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    /// A checked identity failed; the report has already been printed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rslab",
    version,
    about = "Coefficient identities, Gauss sums and functional equations for GL(3) x GL(2)"
)]
struct Cli {
    /// Flat `key = value` config file (keys: mode, N, pmax, seed, out).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Scalar field: exact or float.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Truncation N.
    #[arg(long = "N", global = true)]
    n: Option<u64>,
    /// Largest prime with local data for generated representations.
    #[arg(long, global = true)]
    pmax: Option<u64>,
    /// Seed for randomized inputs; overrides RS_LAB_SEED and the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; JSON lines for `verify`, the table itself for `dump`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite, or `all`.
    Verify {
        suite: String,
        /// Corrupt c(n) of the first double-sum set, to exercise failure reporting.
        #[arg(long)]
        fault_at: Option<u64>,
    },
    /// Write a coefficient, twist or Gauss-sum table.
    Dump {
        #[command(subcommand)]
        kind: DumpKind,
    },
    /// Gauss sums tau_q(chi, beta2) as JSON lines.
    Gauss(GaussArgs),
    /// Additive twist coefficients of a degree-3 representation as JSON lines.
    Twist(TwistArgs),
    /// Canonical coset representative of a 2x2 rational matrix.
    Reduce {
        /// Matrix as `a,b;c,d`.
        #[arg(long)]
        matrix: String,
        /// Context `p,q',p'`.
        #[arg(long)]
        ctx: String,
    },
    /// Functional-equation residuals for a Dirichlet character.
    Funceq(FuncEqArgs),
}

#[derive(Debug, Subcommand)]
enum DumpKind {
    /// CSV `n,value` of lambda_{pi x tau}(n), or lambda_pi(n) without a tau file.
    Coeffs {
        #[arg(long)]
        pi_file: Option<PathBuf>,
        #[arg(long)]
        tau_file: Option<PathBuf>,
    },
    Twist(TwistArgs),
    Gauss(GaussArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GaussArgs {
    #[arg(long)]
    pub q: u64,
    /// Index into the character group; all characters when omitted.
    #[arg(long)]
    pub chi_index: Option<usize>,
    /// Single `r/s`; the grid r/q for r mod q when omitted.
    #[arg(long)]
    pub beta: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct TwistArgs {
    /// Degree-3 representation file; a seeded random one when omitted.
    #[arg(long)]
    pub pi_file: Option<PathBuf>,
    #[arg(long)]
    pub beta: String,
    #[arg(long, default_value_t = 0)]
    pub parity: u32,
    /// Averaging modulus; the denominator of beta when omitted.
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct FuncEqArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 0)]
    pub chi_index: usize,
    /// Points `re,im;re,im;...`; 1/2 + i{0,1,2} when omitted.
    #[arg(long)]
    pub points: Option<String>,
    /// Shifts `t1,t2,t3` for the synthetic GL(3) x GL(2) product.
    #[arg(long)]
    pub shifts: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub u1: f64,
}

fn run_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg = cfg.apply_file(&std::fs::read_to_string(path)?)?;
    }
    cfg = cfg.apply_env(std::env::var(SEED_ENV).ok().as_deref())?;
    if let Some(m) = &cli.mode {
        cfg.mode = parse_mode(m)?;
    }
    cfg.n = cli.n.or(cfg.n);
    cfg.p_max = cli.pmax.or(cfg.p_max);
    cfg.seed = cli.seed.unwrap_or(cfg.seed);
    cfg.out = cli.out.clone().or(cfg.out);
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = run_config(&cli)?;
    match cli.command {
        Command::Verify { suite, fault_at } => commands::verify(&cfg, &suite, fault_at),
        Command::Dump { kind } => match kind {
            DumpKind::Coeffs { pi_file, tau_file } => {
                commands::dump_coeffs(&cfg, pi_file.as_deref(), tau_file.as_deref())
            }
            DumpKind::Twist(a) => commands::twist(&cfg, &a),
            DumpKind::Gauss(a) => commands::gauss(&cfg, &a),
        },
        Command::Gauss(a) => commands::gauss(&cfg, &a),
        Command::Twist(a) => commands::twist(&cfg, &a),
        Command::Reduce { matrix, ctx } => commands::reduce(&cfg, &matrix, &ctx),
        Command::Funceq(a) => commands::funceq(&cfg, &a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rslab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
