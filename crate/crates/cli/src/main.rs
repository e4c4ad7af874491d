//! `steerkit` -- steering certificates for rank-2 two-qubit states.
//!
//! Subcommands: `concurrence`, `steer`, `scan`, `verify`, `schmidt`.
//! All angles are radians. Exit codes: 0 success, 1 verification failure,
//! 2 usage error.

mod output;
mod scan;

use clap::{Args, Parser, Subcommand};
use output::{cmat, document, Json};
use std::path::PathBuf;
use std::process::ExitCode;
use steerkit_core::entangle::concurrence_report;
use steerkit_core::states::{schmidt_decompose, PureState2Q, Rank2Params};
use steerkit_core::steer::steer_certificate;
use steerkit_core::verify::{run_all, VerifyConfig, DEFAULT_SEED};
use steerkit_core::C64;

#[derive(Parser)]
#[command(
    name = "steerkit",
    version,
    about = "Steering certificates for rank-2 two-qubit states",
    after_help = "All angles are accepted in radians only. JSON goes to stdout; \
                  diagnostics go to stderr."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

/// The five family parameters. Ranges: theta, phi, alpha in [0, pi/2];
/// beta in [0, 2 pi); nu1 in [0, 1].
#[derive(Args)]
struct ParamArgs {
    /// Schmidt angle of |psi1>, radians in [0, pi/2]
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Mixing angle of |psi2>, radians in [0, pi/2]
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Partition angle of |psi2>, radians in [0, pi/2]
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Relative phase of |psi2>, radians in [0, 2 pi)
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// Weight of |psi1> in the mixture, in [0, 1]
    #[arg(long, default_value_t = 1.0)]
    nu1: f64,
}

impl ParamArgs {
    fn parse(&self) -> Result<Rank2Params, String> {
        Rank2Params::new(self.theta, self.phi, self.alpha, self.beta, self.nu1).map_err(|e| {
            let flag = match &e {
                steerkit_core::states::StateError::AngleOutOfRange { name, .. } => {
                    format!("--{name}")
                }
                steerkit_core::states::StateError::WeightOutOfRange { .. } => "--nu1".to_string(),
                steerkit_core::states::StateError::NotNormalized { .. } => String::new(),
            };
            format!("invalid value for {flag}: {e}")
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Concurrence of one parameter point by both routes
    Concurrence(ParamArgs),
    /// Steering certificate for one parameter point
    Steer {
        #[command(flatten)]
        params: ParamArgs,
        /// Emit JSON (the default)
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit one CSV row (with header) instead of JSON
        #[arg(long)]
        csv: bool,
    },
    /// Sweep a parameter grid and emit one CSV row per point
    Scan {
        /// Grid spec, e.g. "theta=0:1.5708:25,nu1=1" -- each entry is
        /// name=start:stop:count (inclusive linear grid) or name=value;
        /// omitted parameters default to 0 (nu1 to 1)
        #[arg(long)]
        grid: String,
        /// Write atomically to this path instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = library default); output order is
        /// independent of this
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run the acceptance criteria and report pass/fail per criterion
    Verify {
        /// Base seed (overrides STEERKIT_SEED)
        #[arg(long)]
        seed: Option<u64>,
        /// Nominal sample count for the large criteria (default 10000)
        #[arg(long)]
        n: Option<usize>,
        /// Run at one tenth of the nominal sample counts
        #[arg(long)]
        quick: bool,
    },
    /// Schmidt decomposition of an explicit amplitude vector
    Schmidt {
        /// Amplitudes "re,im;re,im;re,im;re,im" in the order
        /// |00>, |01>, |10>, |11>
        #[arg(long)]
        amps: String,
        /// Renormalize inputs whose norm is off by more than 1e-6
        #[arg(long)]
        renorm: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Command::Concurrence(args) => {
            let p = args.parse()?;
            let report = concurrence_report(&p).map_err(|e| e.to_string())?;
            let doc = document(vec![
                ("s1", Json::Num(report.s1)),
                ("s2", Json::Num(report.s2)),
                ("c_closed", Json::Num(report.c_closed)),
                ("c_wootters", Json::Num(report.c_wootters)),
                ("defect", Json::Num(report.defect)),
            ]);
            println!("{doc}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Steer {
            params,
            json: _,
            csv,
        } => {
            let p = params.parse()?;
            let cert = steer_certificate(&p);
            if csv {
                println!("{}", scan::STEER_CSV_HEADER);
                println!("{}", scan::steer_csv_row(&p, &cert));
            } else {
                let doc = document(vec![
                    (
                        "params",
                        Json::Obj(vec![
                            ("theta", Json::Num(p.theta)),
                            ("phi", Json::Num(p.phi)),
                            ("alpha", Json::Num(p.alpha)),
                            ("beta", Json::Num(p.beta)),
                            ("nu1", Json::Num(p.nu1)),
                        ]),
                    ),
                    ("concurrence", Json::Num(cert.concurrence)),
                    ("c_lhs", Json::Num(cert.c_lhs)),
                    ("w1_max", Json::Num(cert.w1_max)),
                    ("w2_max", Json::Num(cert.w2_max)),
                    ("best_w", Json::Num(cert.best_w)),
                    ("margin", Json::Num(cert.margin)),
                    ("violated", Json::Bool(cert.violated)),
                    ("verdict", Json::Str(cert.verdict.to_string())),
                    ("tau_used", Json::Num(cert.vectors.tau_used)),
                    ("delta_sign", Json::Num(cert.delta_sign)),
                    (
                        "bob_direction",
                        Json::Obj(vec![
                            ("theta_b", Json::Num(cert.bob_direction.0)),
                            ("phi_b", Json::Num(cert.bob_direction.1)),
                        ]),
                    ),
                    (
                        "degenerate_direction",
                        Json::Bool(cert.degenerate_direction),
                    ),
                    (
                        "vectors",
                        Json::Obj(vec![
                            ("f", output::vec3(cert.vectors.f)),
                            ("h", output::vec3(cert.vectors.h)),
                            ("h0", Json::Num(cert.vectors.h0)),
                        ]),
                    ),
                ]);
                println!("{doc}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { grid, out, jobs } => scan::run_scan(&grid, out.as_deref(), jobs),
        Command::Verify { seed, n, quick } => {
            let seed = seed
                .or_else(|| {
                    std::env::var("STEERKIT_SEED")
                        .ok()
                        .and_then(|s| s.parse().ok())
                })
                .unwrap_or(DEFAULT_SEED);
            let mut scale = n.map(|n| n as f64 / 10_000.0).unwrap_or(1.0);
            if quick {
                scale *= 0.1;
            }
            let cfg = VerifyConfig { seed, scale };
            eprintln!(
                "verification seed {seed}, scale {scale} (rng: {})",
                steerkit_core::oracle::RNG_ALGORITHM
            );
            let results = run_all(&cfg);
            let mut all_pass = true;
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                println!("{:4} {:4}  {} -- {}", r.id, status, r.description, r.detail);
                all_pass &= r.pass;
            }
            if all_pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Schmidt { amps, renorm } => {
            let mut parsed = parse_amps(&amps)?;
            let norm: f64 = parsed.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-6 {
                if renorm {
                    if norm == 0.0 {
                        return Err("--amps must not be the zero vector".into());
                    }
                    for a in parsed.iter_mut() {
                        *a /= norm;
                    }
                } else {
                    return Err(format!(
                        "--amps has norm {norm:.9}, not 1 (tolerance 1e-6); pass --renorm to rescale"
                    ));
                }
            } else if norm != 1.0 {
                // Inside tolerance: rescale silently so downstream checks
                // see an exactly normalized state.
                for a in parsed.iter_mut() {
                    *a /= norm;
                }
            }
            let psi = PureState2Q::new(parsed).map_err(|e| e.to_string())?;
            let s = schmidt_decompose(&psi).map_err(|e| e.to_string())?;
            let doc = document(vec![
                ("kappa1", Json::Num(s.kappa1)),
                ("kappa2", Json::Num(s.kappa2)),
                ("u_a", cmat(&s.u_a)),
                ("u_b", cmat(&s.u_b)),
                ("residual", Json::Num(s.residual(&psi))),
            ]);
            println!("{doc}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_amps(s: &str) -> Result<[C64; 4], String> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 4 {
        return Err(format!(
            "--amps needs 4 ';'-separated entries, got {}",
            parts.len()
        ));
    }
    let mut amps = [C64::new(0.0, 0.0); 4];
    for (i, part) in parts.iter().enumerate() {
        let nums: Vec<&str> = part.split(',').collect();
        if nums.len() != 2 {
            return Err(format!(
                "--amps entry {} must be \"re,im\", got {part:?}",
                i + 1
            ));
        }
        let re: f64 = nums[0]
            .trim()
            .parse()
            .map_err(|_| format!("--amps entry {}: bad real part {:?}", i + 1, nums[0]))?;
        let im: f64 = nums[1]
            .trim()
            .parse()
            .map_err(|_| format!("--amps entry {}: bad imaginary part {:?}", i + 1, nums[1]))?;
        amps[i] = C64::new(re, im);
    }
    Ok(amps)
}
