//! Grid sweeps. Rows are produced in lexicographic grid order over
//! (theta, phi, alpha, beta, nu1) regardless of worker count, and file
//! output is atomic (temp file + rename).

use crate::output::num;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use steerkit_core::cmat::{pauli_x, CMat};
use steerkit_core::par;
use steerkit_core::states::{rank2_density, Rank2Params};
use steerkit_core::steer::{
    linear_i3_value, steer_certificate, LinearSteeringSettings, SteeringCertificate,
};

/// Frozen column order of scan output.
pub const SCAN_CSV_HEADER: &str =
    "theta,phi,alpha,beta,nu1,concurrence,c_lhs,w_max,margin,i3,verdict";

/// Frozen column order of `steer --csv`.
pub const STEER_CSV_HEADER: &str =
    "theta,phi,alpha,beta,nu1,concurrence,c_lhs,w1_max,w2_max,best_w,margin,violated";

pub fn steer_csv_row(p: &Rank2Params, cert: &SteeringCertificate) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        num(p.theta),
        num(p.phi),
        num(p.alpha),
        num(p.beta),
        num(p.nu1),
        num(cert.concurrence),
        num(cert.c_lhs),
        num(cert.w1_max),
        num(cert.w2_max),
        num(cert.best_w),
        num(cert.margin),
        cert.violated,
    )
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    start: f64,
    stop: f64,
    count: usize,
}

impl Axis {
    fn fixed(v: f64) -> Axis {
        Axis {
            start: v,
            stop: v,
            count: 1,
        }
    }

    fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }
}

fn parse_grid(spec: &str) -> Result<[Axis; 5], String> {
    // Defaults: single point at 0, except nu1 = 1 (pure |psi1>).
    let mut axes = [
        Axis::fixed(0.0),
        Axis::fixed(0.0),
        Axis::fixed(0.0),
        Axis::fixed(0.0),
        Axis::fixed(1.0),
    ];
    let names = ["theta", "phi", "alpha", "beta", "nu1"];
    for entry in spec.split(',').filter(|e| !e.is_empty()) {
        let (name, rest) = entry.split_once('=').ok_or_else(|| {
            format!("grid entry {entry:?} is not name=value or name=start:stop:count")
        })?;
        let idx = names
            .iter()
            .position(|n| *n == name.trim())
            .ok_or_else(|| {
                format!("unknown grid parameter {name:?} (expected one of {names:?})")
            })?;
        let parts: Vec<&str> = rest.split(':').collect();
        axes[idx] = match parts.as_slice() {
            [v] => Axis::fixed(
                v.trim()
                    .parse()
                    .map_err(|_| format!("bad number {v:?} in grid entry {entry:?}"))?,
            ),
            [start, stop, count] => {
                let start: f64 = start
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad start {start:?} in {entry:?}"))?;
                let stop: f64 = stop
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad stop {stop:?} in {entry:?}"))?;
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad count {count:?} in {entry:?}"))?;
                if count == 0 {
                    return Err(format!("grid entry {entry:?} has zero points"));
                }
                Axis { start, stop, count }
            }
            _ => {
                return Err(format!(
                    "grid entry {entry:?} is not name=value or name=start:stop:count"
                ))
            }
        };
        // Range check both ends against the parameter domain. Endpoints
        // within 1e-3 (a hand-rounded pi/2 or 2 pi) clamp silently.
        let (lo, hi) = match idx {
            4 => (0.0, 1.0),
            3 => (0.0, TAU),
            _ => (0.0, FRAC_PI_2),
        };
        let snap = |v: f64| -> Result<f64, String> {
            if (lo..=hi).contains(&v) {
                Ok(v)
            } else if v > lo - 1e-3 && v < hi + 1e-3 {
                Ok(v.clamp(lo, hi))
            } else {
                Err(format!(
                    "grid entry {entry:?} leaves the domain [{lo}, {hi}] of {name}"
                ))
            }
        };
        axes[idx].start = snap(axes[idx].start)?;
        axes[idx].stop = snap(axes[idx].stop)?;
    }
    Ok(axes)
}

/// I3 of this state at the fixed angle family, with theta3 matched
/// to the state's xx correlation: theta3 = arctan(sqrt(2) Txx).
fn i3_at_sm_family(rho: &CMat) -> f64 {
    let xx = CMat::tensor(&pauli_x(), &pauli_x()).expect("2x2");
    let txx = xx.mul(rho).trace().re;
    let settings = LinearSteeringSettings::sm_family((2f64.sqrt() * txx).atan());
    linear_i3_value(rho, &settings).expect("derived triad is orthonormal")
}

fn scan_row(p: &Rank2Params) -> String {
    let cert = steer_certificate(p);
    let i3 = i3_at_sm_family(&rank2_density(p));
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        num(p.theta),
        num(p.phi),
        num(p.alpha),
        num(p.beta),
        num(p.nu1),
        num(cert.concurrence),
        num(cert.c_lhs),
        num(cert.best_w),
        num(cert.margin),
        num(i3),
        cert.verdict,
    )
}

pub fn run_scan(spec: &str, out: Option<&Path>, jobs: usize) -> Result<ExitCode, String> {
    let axes = parse_grid(spec)?;
    if jobs > 0 {
        // Ignore failure to resize an already-started pool: ordering and
        // content do not depend on worker count.
        let _ = par::configure_threads(jobs);
    }

    let counts: Vec<usize> = axes.iter().map(|a| a.count).collect();
    let total: usize = counts.iter().product();
    let points: Vec<Rank2Params> = (0..total)
        .map(|flat| {
            let mut rem = flat;
            let mut idx = [0usize; 5];
            for k in (0..5).rev() {
                idx[k] = rem % counts[k];
                rem /= counts[k];
            }
            // Interior points can overshoot the domain edge by one ulp.
            Rank2Params {
                theta: axes[0].value(idx[0]).clamp(0.0, FRAC_PI_2),
                phi: axes[1].value(idx[1]).clamp(0.0, FRAC_PI_2),
                alpha: axes[2].value(idx[2]).clamp(0.0, FRAC_PI_2),
                beta: axes[3].value(idx[3]).clamp(0.0, TAU),
                nu1: axes[4].value(idx[4]).clamp(0.0, 1.0),
            }
        })
        .collect();

    let rows = par::map_slice(&points, scan_row);

    match out {
        None => {
            println!("{SCAN_CSV_HEADER}");
            for row in rows {
                println!("{row}");
            }
        }
        Some(path) => {
            let tmp = path.with_extension("tmp");
            let write_all = || -> std::io::Result<()> {
                let mut f = fs::File::create(&tmp)?;
                writeln!(f, "{SCAN_CSV_HEADER}")?;
                for row in &rows {
                    writeln!(f, "{row}")?;
                }
                f.sync_all()?;
                fs::rename(&tmp, path)
            };
            if let Err(e) = write_all() {
                let _ = fs::remove_file(&tmp);
                return Err(format!("writing {}: {e}", path.display()));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
