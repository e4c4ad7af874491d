//! The state-dependent steering inequality: classical bound, quantum
//! maxima, and the certificate combining them. Also the 3-setting linear
//! inequality with its 1/sqrt(3) bound and the CHSH value 2 sqrt(1+C^2).

use crate::cmat::{dot_sigma, CMat, C64};
use crate::decomp::{canonical_taus, MeasurementFrame, BOUNDARY_HI, BOUNDARY_LO};
use crate::entangle::concurrence_closed_form;
use crate::states::{make_psi1, PureState2Q, Rank2Params};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

/// Tolerance on the raw margin before a state is flagged as violating.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Classical bound of the 3-setting linear steering inequality.
pub const LINEAR_I3_BOUND: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)

/// The H0 scalar and H vector of the quantum maxima, at a given tau.
#[derive(Debug, Clone, Copy)]
pub struct SteeringVectors {
    pub f: [f64; 3],
    pub h: [f64; 3],
    pub h0: f64,
    pub tau_used: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Separable,
    Steerable,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Separable => write!(f, "separable"),
            Verdict::Steerable => write!(f, "steerable"),
            Verdict::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

/// Everything needed to certify (or refute) violation of the
/// state-dependent inequality for one state.
#[derive(Debug, Clone)]
pub struct SteeringCertificate {
    pub c_lhs: f64,
    pub w1_max: f64,
    pub w2_max: f64,
    pub best_w: f64,
    pub violated: bool,
    pub margin: f64,
    /// Optimal Bob direction as (theta_B, phi_B).
    pub bob_direction: (f64, f64),
    /// Set when |F +/- H| vanishes and the optimum is direction-free.
    pub degenerate_direction: bool,
    pub vectors: SteeringVectors,
    /// Sign of the winning delta branch: +1 for delta = +pi/2.
    pub delta_sign: f64,
    pub concurrence: f64,
    pub verdict: Verdict,
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn add3(a: [f64; 3], b: [f64; 3], sign: f64) -> [f64; 3] {
    [a[0] + sign * b[0], a[1] + sign * b[1], a[2] + sign * b[2]]
}

/// Bloch vector of Bob's reduced state:
/// F1 = -nu2 cos(beta) sin(alpha-theta) sin(2 phi)
/// F2 = -nu2 sin(beta) sin(alpha+theta) sin(2 phi)
/// F3 = -nu2 cos(2 alpha) cos^2(phi) + cos(2 theta)(nu1 - nu2 sin^2(phi))
pub fn bloch_f(p: &Rank2Params) -> [f64; 3] {
    let n2 = p.nu2();
    let s2p = (2.0 * p.phi).sin();
    [
        -n2 * p.beta.cos() * (p.alpha - p.theta).sin() * s2p,
        -n2 * p.beta.sin() * (p.alpha + p.theta).sin() * s2p,
        -n2 * (2.0 * p.alpha).cos() * p.phi.cos().powi(2)
            + (2.0 * p.theta).cos() * (p.nu1 - n2 * p.phi.sin().powi(2)),
    ]
}

/// C_LHS = 1/4 + |F|/4 = lambda_max(rho_B)/2.
pub fn classical_bound(p: &Rank2Params) -> f64 {
    0.25 + 0.25 * norm3(bloch_f(p))
}

/// H0 and H at a given Alice azimuth tau.
pub fn steering_vectors(p: &Rank2Params, tau: f64) -> SteeringVectors {
    let n2 = p.nu2();
    let s2p = (2.0 * p.phi).sin();
    let (st, ct) = tau.sin_cos();
    let (sb, cb) = p.beta.sin_cos();
    let across = (p.alpha - p.theta).cos();
    let cplus = (p.alpha + p.theta).cos();
    let radial = n2 * p.phi.cos().powi(2) * (2.0 * p.alpha).sin();
    let axial = (2.0 * p.theta).sin() * (p.nu1 - n2 * p.phi.sin().powi(2));
    SteeringVectors {
        f: bloch_f(p),
        h: [
            st * (radial + axial),
            ct * (-radial + axial),
            n2 * (-sb * cplus * ct + cb * across * st) * s2p,
        ],
        h0: n2 * (across * ct * sb - cb * cplus * st) * s2p,
        tau_used: tau,
    }
}

/// The closed-form quantum maxima at azimuth tau:
/// `<W>_1^max = 1/4 + H0/4 + |F+H|/4` (delta = +pi/2),
/// `<W>_2^max = 1/4 - H0/4 + |F-H|/4` (delta = -pi/2).
pub fn w_max_pair(p: &Rank2Params, tau: f64) -> (f64, f64) {
    let v = steering_vectors(p, tau);
    let w1 = 0.25 + 0.25 * v.h0 + 0.25 * norm3(add3(v.f, v.h, 1.0));
    let w2 = 0.25 - 0.25 * v.h0 + 0.25 * norm3(add3(v.f, v.h, -1.0));
    (w1, w2)
}

/// Bob projector |n_B><n_B| for the direction (theta_B, phi_B).
pub fn bob_projector(theta_b: f64, phi_b: f64) -> CMat {
    let n = [
        theta_b.sin() * phi_b.cos(),
        theta_b.sin() * phi_b.sin(),
        theta_b.cos(),
    ];
    CMat::identity(2)
        .add(&dot_sigma(n))
        .scale(C64::new(0.5, 0.0))
}

/// Alice projector |+><+| for a frame with arbitrary delta:
/// (1/2) . [[1 + sin(xi) cos(delta), e^{-i tau}(-cos(delta) cos(xi) + i sin(delta))],
///          [h.c., 1 - sin(xi) cos(delta)]]
pub fn alice_plus_projector(frame: &MeasurementFrame) -> CMat {
    let (sx, cx) = frame.xi.sin_cos();
    let (sd, cd) = frame.delta.sin_cos();
    let off = C64::from_polar(1.0, -frame.tau) * C64::new(-cd * cx, sd);
    CMat::from_rows(&[
        &[C64::new(1.0 + sx * cd, 0.0), off],
        &[off.conj(), C64::new(1.0 - sx * cd, 0.0)],
    ])
    .scale(C64::new(0.5, 0.0))
}

/// Tr(W rho) for W = |+><+| x |n_B><n_B|, real up to rounding.
pub fn generic_w_expectation(
    rho: &CMat,
    frame: &MeasurementFrame,
    theta_b: f64,
    phi_b: f64,
) -> f64 {
    let w = CMat::tensor(&alice_plus_projector(frame), &bob_projector(theta_b, phi_b))
        .expect("2x2 factors");
    w.mul(rho).trace().re
}

/// Direction angles (theta_B, phi_B) of a nonzero 3-vector.
fn vector_angles(v: [f64; 3]) -> (f64, f64) {
    let r = norm3(v);
    let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
    let phi = f64::atan2(v[1], v[0]).rem_euclid(2.0 * PI);
    (theta, phi)
}

/// Certificate for the state-dependent inequality.
///
/// All canonical taus and both delta branches are evaluated through the
/// closed forms; ties break toward the smaller tau and then toward
/// delta = +pi/2 so the result is deterministic.
pub fn steer_certificate(p: &Rank2Params) -> SteeringCertificate {
    let c_lhs = classical_bound(p);
    let concurrence = concurrence_closed_form(p);

    let mut best: Option<(f64, f64, f64, SteeringVectors, f64, f64)> = None;
    for tau in canonical_taus(p) {
        let v = steering_vectors(p, tau);
        let (w1, w2) = w_max_pair(p, tau);
        for (w, sign) in [(w1, 1.0), (w2, -1.0)] {
            let improves = match &best {
                None => true,
                Some((bw, ..)) => w > *bw,
            };
            if improves {
                best = Some((w, sign, tau, v, w1, w2));
            }
        }
    }
    let (best_w, delta_sign, _tau, vectors, w1_max, w2_max) = best.expect("at least one tau");

    let dir = add3(vectors.f, vectors.h, delta_sign);
    let (bob_direction, degenerate_direction) = if norm3(dir) < 1e-12 {
        ((0.0, 0.0), true)
    } else {
        (vector_angles(dir), false)
    };

    let margin = best_w - c_lhs;
    let verdict = if concurrence < BOUNDARY_LO {
        Verdict::Separable
    } else if concurrence < BOUNDARY_HI {
        Verdict::Indeterminate
    } else {
        Verdict::Steerable
    };
    SteeringCertificate {
        c_lhs,
        w1_max,
        w2_max,
        best_w,
        violated: margin > VIOLATION_TOL,
        margin,
        bob_direction,
        degenerate_direction,
        vectors,
        delta_sign,
        concurrence,
        verdict,
    }
}

/// Settings of the 3-setting linear inequality: Bob's orthogonal triad is
/// derived from (eta, tau); Alice's three directions are free.
#[derive(Debug, Clone, Copy)]
pub struct LinearSteeringSettings {
    pub eta: f64,
    pub tau: f64,
    /// (theta1, phi1, theta2, phi2, theta3, phi3)
    pub alice_angles: (f64, f64, f64, f64, f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriadError {
    pub defect: f64,
}

impl fmt::Display for TriadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bob triad not orthonormal (defect {:.3e})", self.defect)
    }
}

impl std::error::Error for TriadError {}

impl LinearSteeringSettings {
    /// Bob triad obtained by rotating the coordinate axes:
    /// b1 = (cos^2 eta - cos 2tau sin^2 eta, -sin^2 eta sin 2tau, -sin 2eta cos tau)
    /// b2 = (-sin^2 eta sin 2tau, cos^2 eta + cos 2tau sin^2 eta, -sin 2eta sin tau)
    /// b3 = (cos tau sin 2eta, sin tau sin 2eta, cos 2eta)
    pub fn bob_triad(&self) -> [[f64; 3]; 3] {
        let (se, ce) = (self.eta.sin(), self.eta.cos());
        let s2e = (2.0 * self.eta).sin();
        let c2e = (2.0 * self.eta).cos();
        let (st, ct) = self.tau.sin_cos();
        let (s2t, c2t) = (2.0 * self.tau).sin_cos();
        [
            [ce * ce - c2t * se * se, -se * se * s2t, -s2e * ct],
            [-se * se * s2t, ce * ce + c2t * se * se, -s2e * st],
            [ct * s2e, st * s2e, c2e],
        ]
    }

    pub fn alice_triad(&self) -> [[f64; 3]; 3] {
        let (t1, p1, t2, p2, t3, p3) = self.alice_angles;
        let dir = |t: f64, p: f64| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
        [dir(t1, p1), dir(t2, p2), dir(t3, p3)]
    }

    /// The fixed angle family that is optimal for the Schmidt-form
    /// families: tau = pi/4, theta1 = theta2 = pi, phi3 = -pi/4,
    /// eta = arctan(sqrt(2))/2, with theta3 free.
    pub fn sm_family(theta3: f64) -> Self {
        LinearSteeringSettings {
            eta: 0.5 * 2f64.sqrt().atan(),
            tau: FRAC_PI_4,
            alice_angles: (PI, 0.0, PI, 0.0, theta3, -FRAC_PI_4),
        }
    }
}

/// Quantum expectation of the 3-setting linear witness,
/// Tr{rho [ (1/3) sum_j (a_j . sigma) x (b_j . sigma) ]}.
///
/// Errors if the derived Bob triad is not orthonormal to 1e-12.
pub fn linear_i3_value(rho: &CMat, settings: &LinearSteeringSettings) -> Result<f64, TriadError> {
    let b = settings.bob_triad();
    let mut defect = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let dot = b[i][0] * b[j][0] + b[i][1] * b[j][1] + b[i][2] * b[j][2];
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((dot - target).abs());
        }
    }
    if defect > 1e-12 {
        return Err(TriadError { defect });
    }
    let a = settings.alice_triad();
    let mut witness = CMat::zeros(4, 4);
    for j in 0..3 {
        witness = witness.add(&CMat::tensor(&dot_sigma(a[j]), &dot_sigma(b[j])).expect("2x2"));
    }
    Ok(witness.mul(rho).trace().re / 3.0)
}

/// Closed-form maximum of the CHSH expectation, 2 sqrt(1 + C^2).
pub fn chsh_max(c: f64) -> f64 {
    assert!((0.0..=1.0).contains(&c), "concurrence must lie in [0, 1]");
    2.0 * (1.0 + c * c).sqrt()
}

/// The all-versus-nothing state
/// rho = nu1 |psi1><psi1| + nu2 |psi2><psi2| with
/// psi2 = cos(theta)|10> + sin(theta)|01>; concurrence |nu1-nu2| sin(2 theta).
pub fn avn_state(theta: f64, nu1: f64) -> CMat {
    let psi1 = make_psi1(theta).expect("theta in [0, pi/2]");
    let z = C64::new(0.0, 0.0);
    let psi2 = PureState2Q {
        amps: [z, C64::new(theta.sin(), 0.0), C64::new(theta.cos(), 0.0), z],
    };
    psi1.projector()
        .scale(C64::new(nu1, 0.0))
        .add(&psi2.projector().scale(C64::new(1.0 - nu1, 0.0)))
}

/// Canonical parameters of the AVN state: phi = 0, alpha = pi/2 - theta.
pub fn avn_params(theta: f64, nu1: f64) -> Rank2Params {
    Rank2Params::new(theta, 0.0, FRAC_PI_2 - theta, 0.0, nu1).expect("valid AVN parameters")
}

/// The special mixture rho_s of |psi1> with sin(theta)|00> - cos(theta)|11>
/// (the phi = pi/2, beta = 0 member of the family).
pub fn rho_s_params(theta: f64, nu1: f64) -> Rank2Params {
    Rank2Params::new(theta, FRAC_PI_2, 0.0, 0.0, nu1).expect("valid rho_s parameters")
}
