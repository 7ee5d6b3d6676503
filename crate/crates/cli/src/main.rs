//! `fibthue`: run, reduce, solve and check certificates from the shell.
//!
//! Exit codes: 0 when the requested result is certified, 1 when a
//! certification step or a certificate check fails, 2 on bad input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fibthue::pipeline::{run_all, solve_n, verify_certificate, Certificate, Config};
use fibthue::reduction::{convergent_sweep, phase1, phase2, phase3_after, C4Rule};
use fibthue::sequences::ThueInstance;
use fibthue::solver::solve;
use fibthue::{par, Error};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fibthue", version, about = "Certified solutions of (X - F_n Y)(X - L_n Y) X - Y^3 = ±1")]
struct Cli {
    /// Minimum working precision of lattice steps, in bits.
    #[arg(long, global = true, default_value_t = 0)]
    precision_bits: u64,
    /// LLL parameter, as p/q or a decimal in (1/4, 1).
    #[arg(long, global = true, default_value = "3/4")]
    lll_delta: String,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Only solve 1..=max-n directly and skip the reduction.
    #[arg(long, global = true)]
    max_n: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the whole pipeline and emit a certificate.
    Prove,
    /// Solve one equation.
    Solve {
        #[arg(long)]
        n: u64,
        /// Enumerate this exponent box instead of the certified one.
        #[arg(long = "box")]
        bound: Option<u64>,
    },
    /// Run one reduction phase.
    Reduce {
        #[arg(long)]
        phase: u8,
        #[arg(long, default_value_t = 49)]
        n_min: u64,
        /// Upper end of the sweep; defaults to what the previous phase leaves.
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long, value_enum, default_value_t = Rule::Enumerated)]
        c4_rule: Rule,
    },
    /// Check a certificate file.
    VerifyCert { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Enumerated,
    ColumnSum,
}

enum Failure {
    Uncertified(String),
    BadInput(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match root(&e) {
            Error::InvalidInput(_) | Error::Json(_) => Failure::BadInput(e.to_string()),
            _ => Failure::Uncertified(e.to_string()),
        }
    }
}

fn root(e: &Error) -> &Error {
    match e {
        Error::Phase { source, .. } => root(source),
        other => other,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs;
    match par::with_jobs(jobs, move || run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Uncertified(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::BadInput(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut config = Config { precision_bits: cli.precision_bits, lll_delta: cli.lll_delta.clone(), max_n: cli.max_n, ..Config::default() };
    match cli.cmd {
        Cmd::Prove => {
            let cert = run_all(&config)?;
            emit(&cli.out, cert.to_json()?)?;
            eprintln!("certified: every solution for n <= {}; exceptional n: {:?}", cert.covered_up_to(), cert.exceptional());
        }
        Cmd::Solve { n, bound } => {
            if n == 0 {
                return Err(Failure::BadInput("n must be at least 1".into()));
            }
            let out = match bound {
                Some(b) => {
                    let set = solve(&ThueInstance::new(n), b);
                    json!({ "n": n.to_string(), "box_bound": b.to_string(), "certified": false, "solutions": set })
                }
                None => {
                    let (solved, _) = solve_n(n, &config.reduce_config()?)?;
                    json!({ "n": n.to_string(), "certified": true, "solved": solved })
                }
            };
            emit(&cli.out, pretty(&out)?)?;
        }
        Cmd::Reduce { phase, n_min, n_max, c4_rule } => {
            config.c4_rule = match c4_rule {
                Rule::Enumerated => C4Rule::Enumerated,
                Rule::ColumnSum => C4Rule::RowLatticeColumnSum,
            };
            let cfg = config.reduce_config()?;
            let out = match phase {
                1 => serde_json::to_value(phase1(&cfg)?).map_err(Error::from)?,
                2 | 3 => {
                    let hi = match n_max {
                        Some(h) => h,
                        None if phase == 2 => phase1(&cfg)?.fixpoint,
                        None => phase2(n_min, phase1(&cfg)?.fixpoint, &cfg)?.threshold,
                    };
                    if n_min < 10 || hi < n_min {
                        return Err(Failure::BadInput(format!("need 10 <= n-min <= n-max, got {n_min}..{hi}")));
                    }
                    let sweep = if phase == 2 {
                        phase2(n_min, hi, &cfg)?
                    } else {
                        phase3_after(n_min, hi, &convergent_sweep(n_min, hi)?, &cfg)?
                    };
                    eprintln!("phase {phase}: {n_min}..={hi}, survivors {:?}, threshold {}", sweep.survivors(), sweep.threshold);
                    serde_json::to_value(sweep).map_err(Error::from)?
                }
                p => return Err(Failure::BadInput(format!("phase must be 1, 2 or 3, got {p}"))),
            };
            emit(&cli.out, pretty(&out)?)?;
        }
        Cmd::VerifyCert { file } => {
            let text = fs::read_to_string(&file).map_err(|e| Failure::BadInput(format!("{}: {e}", file.display())))?;
            let cert = Certificate::from_json(&text)?;
            let rep = verify_certificate(&cert)?;
            let out = json!({
                "valid": true,
                "partial": cert.partial,
                "steps_rechecked": rep.steps_rechecked.to_string(),
                "solutions_checked": rep.solutions_checked.to_string(),
                "covered_up_to": rep.covered_up_to.to_string(),
                "exceptional": rep.exceptional.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
            });
            emit(&cli.out, pretty(&out)?)?;
        }
    }
    Ok(())
}

fn pretty(v: &Value) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(v).map_err(Error::from)? + "\n")
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::BadInput(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
