//! Decomposition of rho in Alice's measurement frame and the M = M-dagger
//! separability criterion.
//!
//! For a direction n = (sin xi cos tau, sin xi sin tau, cos xi) the state
//! splits into Bob-side blocks
//!
//!   rho = P0 x rho0 + P1 x rho1 + |+n><-n| x M + |-n><+n| x M-dagger,
//!
//! and for rank-2 states M is Hermitian at the canonical tau exactly when
//! the state is separable.

use crate::cmat::{CMat, C64};
use crate::entangle;
use crate::states::{rank2_density, Rank2Params};
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

/// Alice's measurement frame: polar xi, azimuth tau, and the delta phase
/// used by the steering projector |+> = (|+n> + e^{i delta} |-n>)/sqrt(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementFrame {
    pub xi: f64,
    pub tau: f64,
    pub delta: f64,
}

impl MeasurementFrame {
    pub fn new(xi: f64, tau: f64, delta: f64) -> Result<Self, FrameError> {
        if !(0.0..=std::f64::consts::PI).contains(&xi) {
            return Err(FrameError::OutOfRange {
                name: "xi",
                value: xi,
            });
        }
        if !(0.0..TAU).contains(&tau) && tau != 0.0 {
            return Err(FrameError::OutOfRange {
                name: "tau",
                value: tau,
            });
        }
        if !(0.0..TAU).contains(&delta) && delta != 0.0 {
            return Err(FrameError::OutOfRange {
                name: "delta",
                value: delta,
            });
        }
        Ok(MeasurementFrame { xi, tau, delta })
    }

    pub fn direction(&self) -> [f64; 3] {
        [
            self.xi.sin() * self.tau.cos(),
            self.xi.sin() * self.tau.sin(),
            self.xi.cos(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameError {
    OutOfRange { name: &'static str, value: f64 },
}

impl fmt::Display for FrameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameError::OutOfRange { name, value } => write!(f, "{name} = {value} out of range"),
        }
    }
}

impl std::error::Error for FrameError {}

/// Bob's conditional blocks for a given frame.
#[derive(Debug, Clone)]
pub struct ConditionalDecomposition {
    pub rho0: CMat,
    pub rho1: CMat,
    pub m: CMat,
}

/// The three hermiticity residuals of M in closed form:
/// r1 = m1 - m1*, r2 = m4 - m4*, r3 = m2 - m3*.
#[derive(Debug, Clone, Copy)]
pub struct ResidualTriple {
    pub r1: C64,
    pub r2: C64,
    pub r3: C64,
}

/// Measurement basis kets and projectors along n:
/// |+n> = cos(xi/2)|0> + sin(xi/2) e^{i tau} |1>,
/// |-n> = sin(xi/2)|0> - cos(xi/2) e^{i tau} |1>.
pub fn alice_basis(frame: &MeasurementFrame) -> ([C64; 2], [C64; 2], CMat, CMat) {
    let (s, c) = (frame.xi / 2.0).sin_cos();
    let phase = C64::from_polar(1.0, frame.tau);
    let ket_plus = [C64::new(c, 0.0), phase * s];
    let ket_minus = [C64::new(s, 0.0), -phase * c];
    let p0 = CMat::outer(&ket_plus, &ket_plus);
    let p1 = CMat::outer(&ket_minus, &ket_minus);
    (ket_plus, ket_minus, p0, p1)
}

/// Bob-side 2x2 block (<u| x I) rho (|v> x I).
fn sandwich(rho: &CMat, bra: &[C64; 2], ket: &[C64; 2]) -> CMat {
    let mut out = CMat::zeros(2, 2);
    for m in 0..2 {
        for n in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..2 {
                for k in 0..2 {
                    acc += bra[j].conj() * ket[k] * rho.at(2 * j + m, 2 * k + n);
                }
            }
            out.set(m, n, acc);
        }
    }
    out
}

/// Split rho into (rho0, rho1, M) for the frame's direction.
pub fn conditional_decompose(rho: &CMat, frame: &MeasurementFrame) -> ConditionalDecomposition {
    let (plus, minus, _, _) = alice_basis(frame);
    ConditionalDecomposition {
        rho0: sandwich(rho, &plus, &plus),
        rho1: sandwich(rho, &minus, &minus),
        m: sandwich(rho, &plus, &minus),
    }
}

impl ConditionalDecomposition {
    /// Reassemble P0 x rho0 + P1 x rho1 + |+n><-n| x M + h.c.
    pub fn reconstruct(&self, frame: &MeasurementFrame) -> CMat {
        let (plus, minus, p0, p1) = alice_basis(frame);
        let pm = CMat::outer(&plus, &minus);
        let mp = CMat::outer(&minus, &plus);
        CMat::tensor(&p0, &self.rho0)
            .unwrap()
            .add(&CMat::tensor(&p1, &self.rho1).unwrap())
            .add(&CMat::tensor(&pm, &self.m).unwrap())
            .add(&CMat::tensor(&mp, &self.m.adjoint()).unwrap())
    }

    /// Bob's reduced state rho0 + rho1 (frame-independent).
    pub fn bob_reduced(&self) -> CMat {
        self.rho0.add(&self.rho1)
    }
}

/// Frobenius norm of M - M-dagger.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    m.hermiticity_defect()
}

/// The azimuths at which separable states exhibit M = M-dagger:
/// {beta, -beta} when sin(2 phi) != 0, else {0}. xi stays free.
pub fn canonical_taus(p: &Rank2Params) -> Vec<f64> {
    if (2.0 * p.phi).sin().abs() <= 1e-12 {
        return vec![0.0];
    }
    let t1 = p.beta.rem_euclid(TAU);
    let t2 = (-p.beta).rem_euclid(TAU);
    if (t1 - t2).abs() < 1e-12 {
        vec![t1]
    } else {
        vec![t1.min(t2), t1.max(t2)]
    }
}

/// Closed-form hermiticity residuals of M (independent of xi):
/// r1 = -i nu2 sin(alpha) sin(theta) sin(beta+tau) sin(2 phi)
/// r2 = -i nu2 cos(alpha) cos(theta) sin(beta-tau) sin(2 phi)
/// r3 = e^{-i tau}/2 [nu2 cos^2(phi) sin(2 alpha)
///                    - e^{2 i tau}(nu1 - nu2 sin^2(phi)) sin(2 theta)]
pub fn residuals(p: &Rank2Params, frame: &MeasurementFrame) -> ResidualTriple {
    let n2 = p.nu2();
    let s2p = (2.0 * p.phi).sin();
    let tau = frame.tau;
    let i = C64::new(0.0, 1.0);
    let r1 = -i * (n2 * p.alpha.sin() * p.theta.sin() * (p.beta + tau).sin() * s2p);
    let r2 = -i * (n2 * p.alpha.cos() * p.theta.cos() * (p.beta - tau).sin() * s2p);
    let r3 = C64::from_polar(0.5, -tau)
        * (C64::new(n2 * p.phi.cos().powi(2) * (2.0 * p.alpha).sin(), 0.0)
            - C64::from_polar(1.0, 2.0 * tau)
                * ((p.nu1 - n2 * p.phi.sin().powi(2)) * (2.0 * p.theta).sin()));
    ResidualTriple { r1, r2, r3 }
}

/// NS separability test: true iff some canonical tau yields
/// ||M - M-dagger||_F < tol at xi = pi/2.
pub fn ns_separability_check(p: &Rank2Params, tol: f64) -> bool {
    min_hermiticity_defect(p) < tol
}

/// Smallest hermiticity defect over the canonical taus (xi = pi/2).
pub fn min_hermiticity_defect(p: &Rank2Params) -> f64 {
    let rho = rank2_density(p);
    canonical_taus(p)
        .into_iter()
        .map(|tau| {
            let frame = MeasurementFrame {
                xi: FRAC_PI_2,
                tau,
                delta: 0.0,
            };
            hermiticity_defect(&conditional_decompose(&rho, &frame).m)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Three-way verdict respecting the boundary policy: concurrences inside
/// (0, 1e-7) are too close to the separability boundary for either route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparabilityVerdict {
    Separable,
    Entangled,
    Indeterminate,
}

pub const BOUNDARY_LO: f64 = 1e-12;
pub const BOUNDARY_HI: f64 = 1e-7;

pub fn separability_verdict(p: &Rank2Params) -> SeparabilityVerdict {
    let c = entangle::concurrence_closed_form(p);
    if c < BOUNDARY_LO {
        SeparabilityVerdict::Separable
    } else if c < BOUNDARY_HI {
        SeparabilityVerdict::Indeterminate
    } else {
        SeparabilityVerdict::Entangled
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::{dot_sigma, pauli_z};
    use crate::oracle::SplitMix64;
    use crate::states::make_psi1;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_special_frames() {
        // xi = 0: |+n> = |0> and P0 = diag(1, 0).
        let f = MeasurementFrame {
            xi: 0.0,
            tau: 0.7,
            delta: 0.0,
        };
        let (plus, minus, p0, _) = alice_basis(&f);
        assert!((plus[0] - c(1.0, 0.0)).norm() < 1e-15 && plus[1].norm() < 1e-15);
        assert!((minus[1].norm() - 1.0).abs() < 1e-15);
        assert!((p0.at(0, 0) - c(1.0, 0.0)).norm() < 1e-15 && p0.at(1, 1).norm() < 1e-15);

        // xi = pi/2, tau = 0: (|0> +/- |1>)/sqrt(2).
        let f = MeasurementFrame {
            xi: FRAC_PI_2,
            tau: 0.0,
            delta: 0.0,
        };
        let (plus, minus, _, _) = alice_basis(&f);
        let r = 1.0 / 2f64.sqrt();
        assert!((plus[0].re - r).abs() < 1e-15 && (plus[1].re - r).abs() < 1e-15);
        assert!((minus[0].re - r).abs() < 1e-15 && (minus[1].re + r).abs() < 1e-15);
    }

    #[test]
    fn basis_orthonormal_and_complete() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let f = MeasurementFrame {
                xi: rng.f64() * PI,
                tau: rng.f64() * TAU,
                delta: 0.0,
            };
            let (plus, minus, p0, p1) = alice_basis(&f);
            let ip: C64 = plus.iter().zip(&minus).map(|(a, b)| a.conj() * b).sum();
            assert!(ip.norm() < 1e-15);
            assert!(p0.add(&p1).sub(&CMat::identity(2)).max_abs() < 1e-15);
            // P_k = (I +/- sigma.n)/2
            let proj = CMat::identity(2)
                .add(&dot_sigma(f.direction()))
                .scale(c(0.5, 0.0));
            assert!(p0.sub(&proj).max_abs() < 1e-14);
        }
    }

    #[test]
    fn block_purity_for_aligned_product() {
        // rho = P0 x sigma with the same direction gives (sigma, 0, 0).
        let f = MeasurementFrame {
            xi: 1.1,
            tau: 2.3,
            delta: 0.0,
        };
        let (_, _, p0, _) = alice_basis(&f);
        let sigma = CMat::identity(2).add(&pauli_z()).scale(c(0.5, 0.0));
        let rho = CMat::tensor(&p0, &sigma).unwrap();
        let d = conditional_decompose(&rho, &f);
        assert!(d.rho0.sub(&sigma).max_abs() < 1e-14);
        assert!(d.rho1.max_abs() < 1e-14);
        assert!(d.m.max_abs() < 1e-14);
    }

    #[test]
    fn reconstruction_and_reduced_state() {
        let mut rng = SplitMix64::new(6);
        for _ in 0..50 {
            let p = crate::oracle::uniform_params(&mut rng);
            let rho = rank2_density(&p);
            let f = MeasurementFrame {
                xi: rng.f64() * PI,
                tau: rng.f64() * TAU,
                delta: 0.0,
            };
            let d = conditional_decompose(&rho, &f);
            assert!(d.reconstruct(&f).sub(&rho).max_abs() < 1e-12);
            assert!((d.rho0.trace() + d.rho1.trace() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn reduced_state_frame_independent() {
        let mut rng = SplitMix64::new(8);
        let p = crate::oracle::uniform_params(&mut rng);
        let rho = rank2_density(&p);
        let reference = conditional_decompose(
            &rho,
            &MeasurementFrame {
                xi: 0.0,
                tau: 0.0,
                delta: 0.0,
            },
        )
        .bob_reduced();
        for _ in 0..20 {
            let f = MeasurementFrame {
                xi: rng.f64() * PI,
                tau: rng.f64() * TAU,
                delta: 0.0,
            };
            let rb = conditional_decompose(&rho, &f).bob_reduced();
            assert!(rb.sub(&reference).max_abs() < 1e-12);
        }
    }

    #[test]
    fn entangled_bell_state_fails_hermiticity() {
        let rho = make_psi1(FRAC_PI_4).unwrap().projector();
        for tau in [0.0, 0.9, 2.5, 4.4] {
            let f = MeasurementFrame {
                xi: FRAC_PI_2,
                tau,
                delta: 0.0,
            };
            let d = conditional_decompose(&rho, &f);
            assert!(hermiticity_defect(&d.m) > 0.1);
        }
    }

    #[test]
    fn hermiticity_defect_values() {
        assert!(hermiticity_defect(&pauli_z()) < 1e-15);
        let m = CMat::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!((hermiticity_defect(&m) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn canonical_tau_branches() {
        let p = Rank2Params::new(0.4, 0.0, 0.3, 1.0, 0.5).unwrap();
        assert_eq!(canonical_taus(&p), vec![0.0]);

        let p = Rank2Params::new(0.4, FRAC_PI_4, 0.3, PI / 3.0, 0.5).unwrap();
        let taus = canonical_taus(&p);
        assert!((taus[0] - PI / 3.0).abs() < 1e-15);
        assert!((taus[1] - 5.0 * PI / 3.0).abs() < 1e-12);

        let p = Rank2Params::new(0.4, FRAC_PI_2, 0.3, 1.0, 0.5).unwrap();
        assert_eq!(canonical_taus(&p), vec![0.0]);
    }

    #[test]
    fn residual_closed_forms_match_m_blocks() {
        let mut rng = SplitMix64::new(12);
        for _ in 0..300 {
            let p = crate::oracle::uniform_params(&mut rng);
            let f = MeasurementFrame {
                xi: rng.f64() * PI,
                tau: rng.f64() * TAU,
                delta: 0.0,
            };
            let r = residuals(&p, &f);
            let m = conditional_decompose(&rank2_density(&p), &f).m;
            assert!((m.at(0, 0) - m.at(0, 0).conj() - r.r1).norm() < 1e-12);
            assert!((m.at(1, 1) - m.at(1, 1).conj() - r.r2).norm() < 1e-12);
            assert!((m.at(0, 1) - m.at(1, 0).conj() - r.r3).norm() < 1e-12);
            // r1, r2 purely imaginary by construction.
            assert!(r.r1.re.abs() < 1e-14 && r.r2.re.abs() < 1e-14);
        }
    }

    #[test]
    fn residuals_pure_psi1() {
        // nu2 = 0, entangled psi1: r3 = -e^{i tau} sin(2 theta)/2 != 0.
        let p = Rank2Params::new(0.5, 0.3, 0.2, 0.4, 1.0).unwrap();
        let f = MeasurementFrame {
            xi: FRAC_PI_2,
            tau: 1.3,
            delta: 0.0,
        };
        let r = residuals(&p, &f);
        let expected = -C64::from_polar(0.5 * (1.0f64).sin(), 1.3);
        assert!((r.r3 - expected).norm() < 1e-14);
        assert!(r.r1.norm() < 1e-15 && r.r2.norm() < 1e-15);
    }

    #[test]
    fn separable_states_pass_ns_check() {
        // phi = 0 with nu2 sin 2 alpha = nu1 sin 2 theta.
        let p = Rank2Params::new(0.7, 0.0, 0.7, 0.0, 0.5).unwrap();
        assert!(ns_separability_check(&p, 1e-9));

        // phi = pi/2 with equal weights.
        let p = Rank2Params::new(0.9, FRAC_PI_2, 0.1, 0.0, 0.5).unwrap();
        assert!(ns_separability_check(&p, 1e-9));

        // Separable instance at tau = 0 has all three residuals tiny.
        let p = Rank2Params::new(0.7, 0.0, 0.7, 0.0, 0.5).unwrap();
        let f = MeasurementFrame {
            xi: 0.8,
            tau: 0.0,
            delta: 0.0,
        };
        let r = residuals(&p, &f);
        assert!(r.r1.norm() < 1e-12 && r.r2.norm() < 1e-12 && r.r3.norm() < 1e-12);
    }

    #[test]
    fn entangled_states_fail_ns_check() {
        let p = Rank2Params::new(FRAC_PI_4, 0.0, 0.0, 0.0, 1.0).unwrap();
        assert!(!ns_separability_check(&p, 1e-9));

        // AVN-style state with unequal weights (phi = 0, alpha = pi/2 - theta).
        let theta = PI / 3.0;
        let p = Rank2Params::new(theta, 0.0, FRAC_PI_2 - theta, 0.0, 0.7).unwrap();
        assert!(!ns_separability_check(&p, 1e-9));
        assert!(!entangle::is_separable(&p, 1e-9));
    }

    #[test]
    fn defect_xi_invariant_on_separable_states() {
        // On separable states the canonical-tau defect vanishes for every xi.
        let p = Rank2Params::new(0.7, 0.0, 0.7, 0.0, 0.5).unwrap();
        let rho = rank2_density(&p);
        for k in 0..5 {
            let xi = PI * (k as f64 + 0.5) / 5.0;
            let f = MeasurementFrame {
                xi,
                tau: 0.0,
                delta: 0.0,
            };
            let d = conditional_decompose(&rho, &f);
            assert!(hermiticity_defect(&d.m) < 1e-12);
        }
    }

    #[test]
    fn separable_family_beta_pi_half() {
        // 0 < phi < pi/2 separable family: beta = pi/2, alpha = 0 and
        // nu1 = nu2 sin^2 phi kills the concurrence; the canonical taus
        // {beta, -beta} then make M Hermitian.
        let phi = 0.8f64;
        let nu1 = phi.sin().powi(2) / (1.0 + phi.sin().powi(2));
        let p = Rank2Params::new(0.6, phi, 0.0, FRAC_PI_2, nu1).unwrap();
        assert!(entangle::concurrence_closed_form(&p) < 1e-9);
        assert!(ns_separability_check(&p, 1e-9));
    }
}
