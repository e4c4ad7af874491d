//! Brute-force verifiers and seeded samplers backing the property tests
//! and the `verify` command. Nothing here trusts the closed forms it is
//! used to check.

use crate::cmat::{pauli_y, CMat, CMatError, C64};
use crate::decomp::MeasurementFrame;
use crate::par;
use crate::states::{PureState2Q, Rank2Params};
use crate::steer::generic_w_expectation;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

/// Counter-free splitmix64: the seed fully determines the stream, and
/// jumping to an arbitrary element is a single mix. Recorded as the
/// generator name in report metadata.
pub const RNG_ALGORITHM: &str = "splitmix64";

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for the k-th item of a batch; used to keep
    /// parallel sampling deterministic and order-free.
    pub fn for_index(seed: u64, index: u64) -> Self {
        let mut rng = SplitMix64::new(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        rng.u64();
        rng
    }

    pub fn u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn f64(&mut self) -> f64 {
        (self.u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = loop {
            let u = self.f64();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.f64();
        (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    UniformParams,
    HaarPure,
    BoundaryBiased,
}

#[derive(Debug, Clone, Copy)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: usize,
    pub distribution: Distribution,
}

/// One uniform draw: angles uniform in their ranges, nu1 uniform in the unit interval.
pub fn uniform_params(rng: &mut SplitMix64) -> Rank2Params {
    Rank2Params {
        theta: rng.f64() * FRAC_PI_2,
        phi: rng.f64() * FRAC_PI_2,
        alpha: rng.f64() * FRAC_PI_2,
        beta: rng.f64() * TAU,
        nu1: rng.f64(),
    }
}

/// One draw oversampling the structural boundaries: phi in {0, pi/2},
/// alpha in {0, pi/4, pi/2} and nu1 in {0, 1/2, 1} are hit exactly and in
/// small neighborhoods.
pub fn boundary_biased_params(rng: &mut SplitMix64) -> Rank2Params {
    let mut p = uniform_params(rng);
    let snap = |rng: &mut SplitMix64, value: f64, anchors: &[f64], hi: f64| -> f64 {
        match rng.u64() % 4 {
            0 => value,
            1 => anchors[(rng.u64() as usize) % anchors.len()],
            _ => {
                let a = anchors[(rng.u64() as usize) % anchors.len()];
                (a + (rng.f64() - 0.5) * 2e-3).clamp(0.0, hi)
            }
        }
    };
    p.phi = snap(rng, p.phi, &[0.0, FRAC_PI_2], FRAC_PI_2);
    p.alpha = snap(rng, p.alpha, &[0.0, PI / 4.0, FRAC_PI_2], FRAC_PI_2);
    p.nu1 = snap(rng, p.nu1, &[0.0, 0.5, 1.0], 1.0);
    p
}

/// Haar-random pure state: four independent complex Gaussians, normalized.
pub fn haar_pure(rng: &mut SplitMix64) -> PureState2Q {
    let mut amps = [C64::new(0.0, 0.0); 4];
    loop {
        for a in amps.iter_mut() {
            *a = C64::new(rng.gaussian(), rng.gaussian());
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for a in amps.iter_mut() {
                *a /= norm;
            }
            return PureState2Q { amps };
        }
    }
}

/// Haar-random 2x2 unitary from a Gaussian matrix via Gram-Schmidt.
pub fn haar_unitary2(rng: &mut SplitMix64) -> CMat {
    loop {
        let g = |rng: &mut SplitMix64| C64::new(rng.gaussian(), rng.gaussian());
        let c0 = [g(rng), g(rng)];
        let mut c1 = [g(rng), g(rng)];
        let n0 = (c0[0].norm_sqr() + c0[1].norm_sqr()).sqrt();
        if n0 < 1e-6 {
            continue;
        }
        let q0 = [c0[0] / n0, c0[1] / n0];
        let proj = q0[0].conj() * c1[0] + q0[1].conj() * c1[1];
        c1[0] -= proj * q0[0];
        c1[1] -= proj * q0[1];
        let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
        if n1 < 1e-6 {
            continue;
        }
        return CMat::from_rows(&[&[q0[0], c1[0] / n1], &[q0[1], c1[1] / n1]]);
    }
}

/// Deterministic stream of parameter draws.
pub struct ParamSampler {
    rng: SplitMix64,
    remaining: usize,
    distribution: Distribution,
}

/// Stream of Rank2Params; `HaarPure` is not a parameter distribution and
/// is rejected here (use [`sample_haar_pure`]).
pub fn sample_params(cfg: &SamplerConfig) -> ParamSampler {
    assert!(cfg.count >= 1, "count must be >= 1");
    assert!(
        cfg.distribution != Distribution::HaarPure,
        "HaarPure draws states, not parameters"
    );
    ParamSampler {
        rng: SplitMix64::new(cfg.seed),
        remaining: cfg.count,
        distribution: cfg.distribution,
    }
}

impl Iterator for ParamSampler {
    type Item = Rank2Params;

    fn next(&mut self) -> Option<Rank2Params> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(match self.distribution {
            Distribution::UniformParams => uniform_params(&mut self.rng),
            Distribution::BoundaryBiased => boundary_biased_params(&mut self.rng),
            Distribution::HaarPure => unreachable!(),
        })
    }
}

pub struct HaarSampler {
    rng: SplitMix64,
    remaining: usize,
}

pub fn sample_haar_pure(cfg: &SamplerConfig) -> HaarSampler {
    assert!(cfg.count >= 1, "count must be >= 1");
    HaarSampler {
        rng: SplitMix64::new(cfg.seed),
        remaining: cfg.count,
    }
}

impl Iterator for HaarSampler {
    type Item = PureState2Q;

    fn next(&mut self) -> Option<PureState2Q> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(haar_pure(&mut self.rng))
    }
}

/// Sphere-grid resolution and refinement depth for [`maximize_over_bob`].
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub refine_iters: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        // 96 x 192 keeps the coarse spherical-cap error under 1e-3;
        // refinement closes the rest to 1e-6.
        GridSpec {
            n_theta: 96,
            n_phi: 192,
            refine_iters: 40,
        }
    }
}

/// Golden-section maximization of f on [lo, hi], fixed evaluation budget.
fn golden_max(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    (f(mid), mid)
}

type BobOptimum = (f64, f64, f64);

fn better(a: BobOptimum, b: BobOptimum) -> BobOptimum {
    // Max with lexicographic tie-break on (theta_B, phi_B).
    if a.0 > b.0 || (a.0 == b.0 && (a.1, a.2) <= (b.1, b.2)) {
        a
    } else {
        b
    }
}

fn unit_from_angles(tb: f64, pb: f64) -> [f64; 3] {
    [tb.sin() * pb.cos(), tb.sin() * pb.sin(), tb.cos()]
}

fn angles_from_unit(n: [f64; 3]) -> (f64, f64) {
    let tb = n[2].clamp(-1.0, 1.0).acos();
    let pb = if n[0] == 0.0 && n[1] == 0.0 {
        0.0
    } else {
        f64::atan2(n[1], n[0]).rem_euclid(TAU)
    };
    (tb, pb)
}

/// Orthonormal tangent pair at a unit vector.
fn tangents(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pole = if n[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let e1 = cross(pole, n);
    let norm = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    let e1 = [e1[0] / norm, e1[1] / norm, e1[2] / norm];
    (e1, cross(n, e1))
}

fn maximize_impl<R>(rho: &CMat, frame: &MeasurementFrame, grid: &GridSpec, rows: R) -> BobOptimum
where
    R: Fn(usize, &(dyn Fn(usize) -> BobOptimum + Sync)) -> Vec<BobOptimum>,
{
    assert!(
        grid.n_theta >= 8 && grid.n_phi >= 8,
        "grid counts must be >= 8"
    );
    let eval = |tb: f64, pb: f64| generic_w_expectation(rho, frame, tb, pb);

    // Coarse scan, row-parallel, reduced in row order.
    let scan_row = |i: usize| -> BobOptimum {
        let tb = PI * i as f64 / grid.n_theta as f64;
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for j in 0..grid.n_phi {
            let pb = TAU * j as f64 / grid.n_phi as f64;
            best = better(best, (eval(tb, pb), tb, pb));
        }
        best
    };
    let row_best = rows(grid.n_theta + 1, &scan_row);
    let incumbent = row_best
        .into_iter()
        .fold((f64::NEG_INFINITY, 0.0, 0.0), better);

    // Refinement alternates golden-section line searches along the two
    // great circles tangent to the incumbent direction. Working on the
    // sphere itself avoids the degenerate azimuth at the coordinate
    // poles; the incumbent never decreases.
    let mut best_val = incumbent.0;
    let mut n = unit_from_angles(incumbent.1, incumbent.2);
    let mut half_width = 2.0 * (PI / grid.n_theta as f64).max(TAU / grid.n_phi as f64);
    for it in 0..grid.refine_iters {
        let (e1, e2) = tangents(n);
        let e = if it % 2 == 0 { e1 } else { e2 };
        let f = |s: f64| {
            let (sc, cc) = s.sin_cos();
            let cand = [
                cc * n[0] + sc * e[0],
                cc * n[1] + sc * e[1],
                cc * n[2] + sc * e[2],
            ];
            let (tb, pb) = angles_from_unit(cand);
            eval(tb, pb)
        };
        let (v, s) = golden_max(&f, -half_width, half_width);
        if v > best_val {
            best_val = v;
            let (sc, cc) = s.sin_cos();
            let cand = [
                cc * n[0] + sc * e[0],
                cc * n[1] + sc * e[1],
                cc * n[2] + sc * e[2],
            ];
            let norm = (cand[0] * cand[0] + cand[1] * cand[1] + cand[2] * cand[2]).sqrt();
            n = [cand[0] / norm, cand[1] / norm, cand[2] / norm];
        }
        half_width = (half_width * 0.7).max(1e-9);
    }
    let (tb, pb) = angles_from_unit(n);
    better(incumbent, (best_val, tb, pb))
}

/// Maximum of Tr[(|+><+| x |n_B><n_B|) rho] over Bob's direction:
/// coarse sphere grid followed by coordinate-wise golden-section
/// refinement. Returns (value, theta_B, phi_B).
pub fn maximize_over_bob(rho: &CMat, frame: &MeasurementFrame, grid: &GridSpec) -> BobOptimum {
    maximize_impl(rho, frame, grid, |n, f| par::map_range(n, f))
}

/// Sequential twin of [`maximize_over_bob`] for benchmarking the fallback.
pub fn maximize_over_bob_seq(rho: &CMat, frame: &MeasurementFrame, grid: &GridSpec) -> BobOptimum {
    maximize_impl(rho, frame, grid, |n, f| par::map_range_seq(n, f))
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    RankTooHigh { third_eigenvalue: f64 },
    Linalg(CMatError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::RankTooHigh { third_eigenvalue } => {
                write!(
                    f,
                    "input has rank > 2 (third eigenvalue {third_eigenvalue:.3e})"
                )
            }
            OracleError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for OracleError {}

impl From<CMatError> for OracleError {
    fn from(e: CMatError) -> Self {
        OracleError::Linalg(e)
    }
}

/// Numerically extracted (s2, s1): the quadratic coefficients of the
/// nonzero factor of det(vI - rho_tilde rho), computed from the general
/// eigenvalues with no reference to the closed forms.
pub fn char_poly_oracle(rho: &CMat) -> Result<(f64, f64), OracleError> {
    let yy = CMat::tensor(&pauli_y(), &pauli_y())?;
    let rho_tilde = yy.mul(&rho.conj_entries()).mul(&yy);
    let mut vals = rho_tilde.mul(rho).eigvals_general()?;
    vals.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
    if vals[2].norm() > 1e-8 {
        return Err(OracleError::RankTooHigh {
            third_eigenvalue: vals[2].norm(),
        });
    }
    let (v1, v2) = (vals[0], vals[1]);
    let s2 = -(v1 + v2);
    let s1 = v1 * v2;
    Ok((s2.re, s1.re))
}
