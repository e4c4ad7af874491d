//! The canonical rank-2 two-qubit family, Schmidt decomposition, and the
//! theta = pi/4 swap unitary.

use crate::cmat::{pauli_x, CMat, C64};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum StateError {
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    WeightOutOfRange {
        value: f64,
    },
    NotNormalized {
        norm: f64,
    },
}

impl fmt::Display for StateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateError::AngleOutOfRange {
                name,
                value,
                lo,
                hi,
            } => {
                write!(f, "{name} = {value} outside [{lo}, {hi}]")
            }
            StateError::WeightOutOfRange { value } => write!(f, "nu1 = {value} outside [0, 1]"),
            StateError::NotNormalized { norm } => write!(f, "state norm {norm} != 1"),
        }
    }
}

impl std::error::Error for StateError {}

/// Five angles and one weight parameterizing the canonical rank-2 family:
/// rho = nu1 |psi1><psi1| + nu2 |psi2><psi2| with nu2 = 1 - nu1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank2Params {
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub nu1: f64,
}

impl Rank2Params {
    pub fn new(theta: f64, phi: f64, alpha: f64, beta: f64, nu1: f64) -> Result<Self, StateError> {
        let check = |name: &'static str, v: f64, lo: f64, hi: f64| -> Result<(), StateError> {
            if !(v >= lo && v <= hi) || !v.is_finite() {
                Err(StateError::AngleOutOfRange {
                    name,
                    value: v,
                    lo,
                    hi,
                })
            } else {
                Ok(())
            }
        };
        check("theta", theta, 0.0, FRAC_PI_2)?;
        check("phi", phi, 0.0, FRAC_PI_2)?;
        check("alpha", alpha, 0.0, FRAC_PI_2)?;
        check("beta", beta, 0.0, TAU)?;
        if !(0.0..=1.0).contains(&nu1) || !nu1.is_finite() {
            return Err(StateError::WeightOutOfRange { value: nu1 });
        }
        Ok(Rank2Params {
            theta,
            phi,
            alpha,
            beta,
            nu1,
        })
    }

    #[inline]
    pub fn nu2(&self) -> f64 {
        1.0 - self.nu1
    }
}

/// Two-qubit pure state in the amplitude ordering (|00>, |01>, |10>, |11>).
#[derive(Debug, Clone, PartialEq)]
pub struct PureState2Q {
    pub amps: [C64; 4],
}

impl PureState2Q {
    /// Unit norm enforced to 1e-10.
    pub fn new(amps: [C64; 4]) -> Result<Self, StateError> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(StateError::NotNormalized { norm });
        }
        Ok(PureState2Q { amps })
    }

    pub fn inner(&self, other: &PureState2Q) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> CMat {
        CMat::outer(&self.amps, &self.amps)
    }
}

/// |psi1> = cos(theta)|00> + sin(theta)|11>.
pub fn make_psi1(theta: f64) -> Result<PureState2Q, StateError> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(StateError::AngleOutOfRange {
            name: "theta",
            value: theta,
            lo: 0.0,
            hi: FRAC_PI_2,
        });
    }
    let z = C64::new(0.0, 0.0);
    PureState2Q::new([C64::new(theta.cos(), 0.0), z, z, C64::new(theta.sin(), 0.0)])
}

/// |psi2> = cos(phi)(cos(alpha)|01> + sin(alpha)|10>)
///        + e^{i beta} sin(phi)(sin(theta)|00> - cos(theta)|11>),
/// orthogonal to |psi1> at the same theta by construction.
pub fn make_psi2(p: &Rank2Params) -> PureState2Q {
    let phase = C64::from_polar(1.0, p.beta);
    let (sp, cp) = (p.phi.sin(), p.phi.cos());
    PureState2Q {
        amps: [
            phase * sp * p.theta.sin(),
            C64::new(cp * p.alpha.cos(), 0.0),
            C64::new(cp * p.alpha.sin(), 0.0),
            -phase * sp * p.theta.cos(),
        ],
    }
}

/// rho = nu1 |psi1><psi1| + nu2 |psi2><psi2| as a 4x4 density matrix.
pub fn rank2_density(p: &Rank2Params) -> CMat {
    let rho1 = make_psi1(p.theta).expect("validated params").projector();
    let rho2 = make_psi2(p).projector();
    rho1.scale(C64::new(p.nu1, 0.0))
        .add(&rho2.scale(C64::new(p.nu2(), 0.0)))
}

/// Concurrence of a pure two-qubit state, 2|ab - cd| for
/// |psi> = a|01> + b|10> + c|00> + d|11>.
pub fn pure_concurrence(psi: &PureState2Q) -> f64 {
    let [c, a, b, d] = psi.amps;
    2.0 * (a * b - c * d).norm()
}

/// Result of a Schmidt decomposition: local unitaries uA, uB such that
/// (uA tensor uB)|psi> = kappa1 |00> + kappa2 |11> with real
/// kappa1 >= kappa2 >= 0.
#[derive(Debug, Clone)]
pub struct SchmidtResult {
    pub kappa1: f64,
    pub kappa2: f64,
    pub u_a: CMat,
    pub u_b: CMat,
}

impl SchmidtResult {
    /// Amplitudes of (uA tensor uB)|psi>.
    pub fn apply(&self, psi: &PureState2Q) -> [C64; 4] {
        let u = CMat::tensor(&self.u_a, &self.u_b).expect("2x2 factors");
        let v = u.mul_vec(&psi.amps);
        [v[0], v[1], v[2], v[3]]
    }

    /// || (uA tensor uB)|psi> - (kappa1, 0, 0, kappa2) ||.
    pub fn residual(&self, psi: &PureState2Q) -> f64 {
        let v = self.apply(psi);
        let target = [
            C64::new(self.kappa1, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(self.kappa2, 0.0),
        ];
        v.iter()
            .zip(&target)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// One-qubit rotation |0> -> A|0> + B|1>, |1> -> -B*|0> + A*|1>
/// from the ratio x = B*/A; `None` encodes the x -> infinity branch.
fn rotation_from_ratio(x: Option<C64>) -> (C64, C64) {
    match x {
        Some(x) => {
            let norm = (1.0 + x.norm_sqr()).sqrt();
            (C64::new(1.0 / norm, 0.0), x.conj() / norm)
        }
        None => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
    }
}

fn unitary_from_ab(a: C64, b: C64) -> CMat {
    CMat::from_rows(&[&[a, -b.conj()], &[b, a.conj()]])
}

/// Schmidt decomposition of an arbitrary two-qubit pure state by solving
/// the quadratic mu1 x^2 + mu2 x - mu1* = 0 for Bob's rotation ratio.
pub fn schmidt_decompose(psi: &PureState2Q) -> Result<SchmidtResult, StateError> {
    let norm = psi.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(StateError::NotNormalized { norm });
    }
    let [c, a, b, d] = psi.amps;

    let mu1 = a * c.conj() + b.conj() * d;
    let mu2 = 2.0 * (a.norm_sqr() + d.norm_sqr()) - 1.0;

    // Ratio x1 = B1*/A1 for Bob. The two roots have reciprocal magnitudes;
    // pick the sign that avoids cancellation in -mu2 +/- sqrt(mu2^2+4|mu1|^2).
    let x1: Option<C64> = if mu1.norm() > 1e-15 {
        let disc = (mu2 * mu2 + 4.0 * mu1.norm_sqr()).sqrt();
        let num = if mu2 >= 0.0 { -mu2 - disc } else { -mu2 + disc };
        Some(C64::new(num, 0.0) / (2.0 * mu1))
    } else if mu2 > 0.0 {
        Some(C64::new(0.0, 0.0))
    } else if mu2 < 0.0 {
        None // x1 -> infinity: swap Bob's basis columns
    } else {
        // mu1 = mu2 = 0: every x solves the quadratic; x = 1 keeps the
        // downstream formulas well conditioned.
        Some(C64::new(1.0, 0.0))
    };
    let (a1, b1) = rotation_from_ratio(x1);

    // Alice's ratio x2 = B0*/A0 from whichever zero condition is better
    // conditioned (eta_01 = 0 or eta_10 = 0).
    let n1 = b1 * c + a1.conj() * a;
    let d1 = b1 * b + a1.conj() * d;
    let n2 = -a1 * b + b1.conj() * d;
    let d2 = a1 * c - b1.conj() * a;
    let x2: Option<C64> = if d1.norm() >= d2.norm() {
        if d1.norm() > 1e-15 {
            Some(n1 / d1)
        } else if n1.norm() > 1e-15 {
            None
        } else {
            Some(C64::new(0.0, 0.0))
        }
    } else if d2.norm() > 1e-15 {
        Some((n2 / d2).conj())
    } else if n2.norm() > 1e-15 {
        None
    } else {
        Some(C64::new(0.0, 0.0))
    };
    let (a0, b0) = rotation_from_ratio(x2);

    // Diagonal amplitudes after the rotations.
    let eta00 = a0 * a1 * c - a0 * b1.conj() * a - a1 * b0.conj() * b + b0.conj() * b1.conj() * d;
    let eta11 = b0 * b1 * c + b0 * a1.conj() * a + a0.conj() * b1 * b + a0.conj() * a1.conj() * d;

    // Phase gates absorb the phases of eta00 and eta11.
    let tau1 = if eta00.norm() > 1e-15 {
        eta00.arg()
    } else {
        0.0
    };
    let tau2 = if eta11.norm() > 1e-15 {
        eta11.arg()
    } else {
        0.0
    };
    let gate = |t1: f64, t2: f64| -> CMat {
        CMat::from_rows(&[
            &[C64::from_polar(1.0, -t1 / 2.0), C64::new(0.0, 0.0)],
            &[C64::new(0.0, 0.0), C64::from_polar(1.0, -t2 / 2.0)],
        ])
    };
    let mut u_a = gate(tau1, tau2).mul(&unitary_from_ab(a0, b0));
    let mut u_b = gate(tau1, tau2).mul(&unitary_from_ab(a1, b1));

    let mut kappa1 = eta00.norm();
    let mut kappa2 = eta11.norm();
    if kappa1 < kappa2 {
        // sigma_x tensor sigma_x exchanges |00> and |11>.
        u_a = pauli_x().mul(&u_a);
        u_b = pauli_x().mul(&u_b);
        std::mem::swap(&mut kappa1, &mut kappa2);
    }
    Ok(SchmidtResult {
        kappa1,
        kappa2,
        u_a,
        u_b,
    })
}

/// Local unitary pair that exchanges the roles of |psi1> and |psi2> when
/// theta = pi/4, sending |psi1> to (|01>+|10>)/sqrt(2) and |psi2> to
/// e^{i zeta}(cos(theta')|00> + sin(theta')|11>).
#[derive(Debug, Clone)]
pub struct SwapUnitary {
    pub v_a: CMat,
    pub v_b: CMat,
    pub theta_prime: f64,
    pub zeta: f64,
    /// Set when |psi2> is itself maximally entangled, in which case
    /// theta' = pi/4 and the swapped state stays in the special family.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SwapError {
    ThetaNotQuarterPi { theta: f64 },
    ResidualTooLarge { residual: f64 },
}

impl fmt::Display for SwapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwapError::ThetaNotQuarterPi { theta } => {
                write!(f, "swap requires theta = pi/4, got {theta}")
            }
            SwapError::ResidualTooLarge { residual } => {
                write!(f, "swap unitary residual {residual:.3e}")
            }
        }
    }
}

impl std::error::Error for SwapError {}

fn phase_gate(top: f64, bottom: f64) -> CMat {
    CMat::from_rows(&[
        &[C64::from_polar(1.0, top), C64::new(0.0, 0.0)],
        &[C64::new(0.0, 0.0), C64::from_polar(1.0, bottom)],
    ])
}

fn su2(theta: f64, phi: f64) -> CMat {
    let (s, c) = theta.sin_cos();
    CMat::from_rows(&[
        &[C64::new(c, 0.0), -C64::from_polar(s, -phi)],
        &[C64::from_polar(s, phi), C64::new(c, 0.0)],
    ])
}

/// Swap transformation for the theta = pi/4 family.
///
/// Returns the unitary pair together with the parameters of the swapped
/// state: theta' from the transformed |psi2>, psi2' = (|01>+|10>)/sqrt(2)
/// (phi' = 0, alpha' = pi/4), and weights exchanged.
pub fn swap_theta_quarter(p: &Rank2Params) -> Result<(SwapUnitary, Rank2Params), SwapError> {
    if (p.theta - FRAC_PI_4).abs() > 1e-12 {
        return Err(SwapError::ThetaNotQuarterPi { theta: p.theta });
    }
    let psi2 = make_psi2(p);
    let c2 = pure_concurrence(&psi2);
    let degenerate = c2 >= 1.0 - 1e-9;

    let (mut v_a, mut v_b) = if degenerate {
        let inv_sqrt2 = C64::new(1.0 / 2f64.sqrt(), 0.0);
        if p.phi <= 1e-12 {
            // psi2 is already (|01>+|10>)/sqrt(2): a bit flip on Alice's
            // side exchanges it with |psi1>.
            (pauli_x(), CMat::identity(2))
        } else if p.phi >= FRAC_PI_2 - 1e-12 {
            // psi2 = e^{i beta}(|00>-|11>)/sqrt(2): this rotation pair sends
            // |psi1> to (|01>+|10>)/sqrt(2) and psi2 to e^{i beta} |psi1>.
            let va = CMat::from_rows(&[&[inv_sqrt2, -inv_sqrt2], &[inv_sqrt2, inv_sqrt2]]);
            let vb = CMat::from_rows(&[&[inv_sqrt2, inv_sqrt2], &[inv_sqrt2, -inv_sqrt2]]);
            (va, vb)
        } else {
            // C(psi2) = 1 with phi in (0, pi/2) forces alpha = pi/4 and
            // beta in {0, pi}; the explicit rotation pair handles both
            // signs of e^{i beta}.
            let sign = if p.beta.cos() >= 0.0 { 1.0 } else { -1.0 };
            let h = sign * p.phi / 2.0;
            let (sh, ch) = h.sin_cos();
            let va = CMat::from_rows(&[
                &[C64::new(ch, 0.0), C64::new(-sh, 0.0)],
                &[C64::new(sh, 0.0), C64::new(ch, 0.0)],
            ]);
            let vb = CMat::from_rows(&[
                &[C64::new(sh, 0.0), C64::new(ch, 0.0)],
                &[C64::new(ch, 0.0), C64::new(-sh, 0.0)],
            ]);
            (va, vb)
        }
    } else {
        // Generic branch: the tan(phi0) and tan(2 vartheta) closed
        // forms, evaluated with two-argument arctangents. With this
        // phi0, cos(alpha) e^{i phi0} + sin(alpha) e^{-i phi0} equals
        // (cos 2alpha / h) e^{i beta}, so the signed cos(2 alpha) fixes
        // the quadrant of 2 vartheta (second quadrant past alpha = pi/4).
        let (sa, ca) = p.alpha.sin_cos();
        let (sb, cb) = p.beta.sin_cos();
        let phi0 = f64::atan2(sb * (ca + sa), cb * (ca - sa));
        let h = (1.0 - (2.0 * p.beta).cos() * (2.0 * p.alpha).sin())
            .max(0.0)
            .sqrt();
        let two_vartheta = f64::atan2(
            2f64.sqrt() * p.phi.sin() * h,
            p.phi.cos() * (2.0 * p.alpha).cos(),
        );
        let vt = two_vartheta / 2.0;
        let (svt, cvt) = vt.sin_cos();
        let (s2p0, c2p0) = (2.0 * phi0).sin_cos();
        let omega0 =
            0.5 * f64::atan2(
                svt * svt * sa * s2p0,
                cvt * cvt * ca + svt * svt * sa * c2p0,
            ) + 0.5
                * f64::atan2(
                    svt * svt * ca * s2p0,
                    svt * svt * ca * c2p0 + cvt * cvt * sa,
                );
        let omega1 = 0.0;
        let omega2 = -omega1 - phi0;
        let omega3 = PI - omega0 + phi0;
        let va = phase_gate(omega0, omega1).mul(&su2(vt, phi0));
        let vb = phase_gate(omega2, omega3).mul(&su2(vt - FRAC_PI_2, -phi0));
        (va, vb)
    };

    // Fix residual phase so the image of |psi2> is e^{i zeta} times a
    // Schmidt form with nonnegative coefficients: the phase-gate pair
    // diag(e^{i chi}, 1) x diag(1, e^{-i chi}) leaves |01> and |10>
    // untouched while rotating |00> and |11> oppositely.
    let full = CMat::tensor(&v_a, &v_b).expect("2x2 factors");
    let img2 = full.mul_vec(&psi2.amps);
    let (g00, g11) = (img2[0], img2[3]);
    if g00.norm() > 1e-12 && g11.norm() > 1e-12 {
        let chi = (g11.arg() - g00.arg()) / 2.0;
        v_a = phase_gate(chi, 0.0).mul(&v_a);
        v_b = phase_gate(0.0, -chi).mul(&v_b);
    }

    let full = CMat::tensor(&v_a, &v_b).expect("2x2 factors");
    let img2 = full.mul_vec(&psi2.amps);
    let theta_prime = f64::atan2(img2[3].norm(), img2[0].norm());
    let zeta = if img2[0].norm() > 1e-12 {
        img2[0].arg()
    } else {
        img2[3].arg()
    };

    let off = (img2[1].norm_sqr() + img2[2].norm_sqr()).sqrt();
    let img1 = full.mul_vec(&make_psi1(p.theta).expect("theta in range").amps);
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    let res1 = ((img1[1] - C64::new(inv_sqrt2, 0.0)).norm_sqr()
        + (img1[2] - C64::new(inv_sqrt2, 0.0)).norm_sqr()
        + img1[0].norm_sqr()
        + img1[3].norm_sqr())
    .sqrt();
    let residual = off.max(res1);
    if residual > 1e-8 {
        return Err(SwapError::ResidualTooLarge { residual });
    }

    let swapped = Rank2Params {
        theta: theta_prime,
        phi: 0.0,
        alpha: FRAC_PI_4,
        beta: 0.0,
        nu1: p.nu2(),
    };
    Ok((
        SwapUnitary {
            v_a,
            v_b,
            theta_prime,
            zeta,
            degenerate,
        },
        swapped,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::SplitMix64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn psi1_special_angles() {
        let s = make_psi1(0.0).unwrap();
        assert!((s.amps[0] - c(1.0, 0.0)).norm() < 1e-15);

        let bell = make_psi1(FRAC_PI_4).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((bell.amps[0].re - r).abs() < 1e-15 && (bell.amps[3].re - r).abs() < 1e-15);

        let s = make_psi1(PI / 6.0).unwrap();
        assert!((s.amps[0].re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((s.amps[3].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn psi1_rejects_out_of_range() {
        assert!(make_psi1(-0.1).is_err());
        assert!(make_psi1(2.0).is_err());
    }

    #[test]
    fn psi2_special_cases() {
        // phi = 0, alpha = pi/4: the |01>+|10> Bell state.
        let p = Rank2Params::new(0.3, 0.0, FRAC_PI_4, 0.0, 0.5).unwrap();
        let s = make_psi2(&p);
        let r = 1.0 / 2f64.sqrt();
        assert!((s.amps[1].re - r).abs() < 1e-15 && (s.amps[2].re - r).abs() < 1e-15);

        // phi = pi/2, beta = 0, theta = pi/4: the |00>-|11> Bell state.
        let p = Rank2Params::new(FRAC_PI_4, FRAC_PI_2, 0.1, 0.0, 0.5).unwrap();
        let s = make_psi2(&p);
        assert!((s.amps[0].re - r).abs() < 1e-15 && (s.amps[3].re + r).abs() < 1e-15);
    }

    #[test]
    fn psi1_psi2_orthogonal_everywhere() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..200 {
            let p = crate::oracle::uniform_params(&mut rng);
            let s1 = make_psi1(p.theta).unwrap();
            let s2 = make_psi2(&p);
            assert!(s1.inner(&s2).norm() < 1e-12);
            assert!((s2.inner(&s2).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_matches_explicit_matrix() {
        // Entrywise against the explicit 4x4 table for the family.
        let mut rng = SplitMix64::new(17);
        for _ in 0..100 {
            let p = crate::oracle::uniform_params(&mut rng);
            let rho = rank2_density(&p);
            let (n1, n2) = (p.nu1, p.nu2());
            let (st, ct) = p.theta.sin_cos();
            let (sp, cp) = p.phi.sin_cos();
            let (sa, ca) = p.alpha.sin_cos();
            let e = C64::from_polar(1.0, p.beta);
            let z = c(0.0, 0.0);
            let row0 = [
                c(n1 * ct * ct + n2 * st * st * sp * sp, 0.0),
                e * (n2 * ca * st * sp * cp),
                e * (n2 * sa * st * sp * cp),
                c(st * ct * (n1 - n2 * sp * sp), 0.0),
            ];
            let row1 = [
                e.conj() * (n2 * ca * st * sp * cp),
                c(n2 * ca * ca * cp * cp, 0.0),
                c(n2 * sa * ca * cp * cp, 0.0),
                -e.conj() * (n2 * ca * ct * sp * cp),
            ];
            let row2 = [
                e.conj() * (n2 * sa * st * sp * cp),
                c(n2 * sa * ca * cp * cp, 0.0),
                c(n2 * sa * sa * cp * cp, 0.0),
                -e.conj() * (n2 * sa * ct * sp * cp),
            ];
            let row3 = [
                c(st * ct * (n1 - n2 * sp * sp), 0.0),
                -e * (n2 * ca * ct * sp * cp),
                -e * (n2 * sa * ct * sp * cp),
                c(n1 * st * st + n2 * ct * ct * sp * sp, 0.0),
            ];
            let expected = CMat::from_rows(&[&row0, &row1, &row2, &row3]);
            assert!(rho.sub(&expected).max_abs() < 1e-12);
            let _ = z;
        }
    }

    #[test]
    fn density_eigenvalues_are_weights() {
        let mut rng = SplitMix64::new(29);
        for _ in 0..50 {
            let p = crate::oracle::uniform_params(&mut rng);
            let rho = rank2_density(&p);
            let (vals, _) = rho.eigh().unwrap();
            let mut expected = [0.0, 0.0, p.nu1.min(p.nu2()), p.nu1.max(p.nu2())];
            expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (v, e) in vals.iter().zip(&expected) {
                assert!((v - e).abs() < 1e-10);
            }
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            assert!(rho.hermiticity_defect() < 1e-14);
        }
    }

    #[test]
    fn pure_projector_at_unit_weight() {
        let p = Rank2Params::new(0.7, 0.4, 0.2, 1.0, 1.0).unwrap();
        let rho = rank2_density(&p);
        let proj = make_psi1(0.7).unwrap().projector();
        assert!(rho.sub(&proj).max_abs() < 1e-15);
    }

    #[test]
    fn schmidt_trivial_cases() {
        let z = c(0.0, 0.0);
        let s = schmidt_decompose(&PureState2Q::new([c(1.0, 0.0), z, z, z]).unwrap()).unwrap();
        assert!((s.kappa1 - 1.0).abs() < 1e-12 && s.kappa2.abs() < 1e-12);

        let r = 1.0 / 2f64.sqrt();
        let psi_plus = PureState2Q::new([z, c(r, 0.0), c(r, 0.0), z]).unwrap();
        let s = schmidt_decompose(&psi_plus).unwrap();
        assert!((s.kappa1 - r).abs() < 1e-12 && (s.kappa2 - r).abs() < 1e-12);
        assert!(s.residual(&psi_plus) < 1e-12);
    }

    #[test]
    fn schmidt_rejects_unnormalized() {
        let z = c(0.0, 0.0);
        let bad = PureState2Q {
            amps: [c(2.0, 0.0), z, z, z],
        };
        assert!(schmidt_decompose(&bad).is_err());
    }

    #[test]
    fn schmidt_reconstructs_random_states() {
        let mut rng = SplitMix64::new(41);
        for _ in 0..300 {
            let psi = crate::oracle::haar_pure(&mut rng);
            let s = schmidt_decompose(&psi).unwrap();
            assert!(s.residual(&psi) < 1e-10, "residual {}", s.residual(&psi));
            assert!(s.kappa1 >= s.kappa2 && s.kappa2 >= -1e-15);
            assert!((s.kappa1 * s.kappa1 + s.kappa2 * s.kappa2 - 1.0).abs() < 1e-10);
            // Unitarity of the factors.
            let ga = s.u_a.adjoint().mul(&s.u_a);
            let gb = s.u_b.adjoint().mul(&s.u_b);
            assert!(ga.sub(&CMat::identity(2)).max_abs() < 1e-12);
            assert!(gb.sub(&CMat::identity(2)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_product_states() {
        // Product corners exercise the degenerate quadratic branches.
        let z = c(0.0, 0.0);
        for amps in [
            [c(1.0, 0.0), z, z, z],
            [z, c(1.0, 0.0), z, z],
            [z, z, c(1.0, 0.0), z],
            [z, z, z, c(1.0, 0.0)],
        ] {
            let psi = PureState2Q::new(amps).unwrap();
            let s = schmidt_decompose(&psi).unwrap();
            assert!((s.kappa1 - 1.0).abs() < 1e-12 && s.kappa2.abs() < 1e-12);
            assert!(s.residual(&psi) < 1e-10);
        }
    }

    #[test]
    fn pure_concurrence_examples() {
        let z = c(0.0, 0.0);
        assert!(pure_concurrence(&PureState2Q::new([c(1.0, 0.0), z, z, z]).unwrap()) < 1e-15);
        assert!((pure_concurrence(&make_psi1(FRAC_PI_4).unwrap()) - 1.0).abs() < 1e-14);

        // C(psi2) at theta = pi/4 equals |e^{2i beta} sin^2 phi + cos^2 phi sin 2 alpha|.
        let mut rng = SplitMix64::new(53);
        for _ in 0..100 {
            let mut p = crate::oracle::uniform_params(&mut rng);
            p.theta = FRAC_PI_4;
            let got = pure_concurrence(&make_psi2(&p));
            let (sp, cp) = (p.phi.sin(), p.phi.cos());
            let expected = (C64::from_polar(1.0, 2.0 * p.beta) * sp * sp
                + C64::new(cp * cp * (2.0 * p.alpha).sin(), 0.0))
            .norm();
            assert!((got - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn swap_generic_preserves_concurrence() {
        let mut rng = SplitMix64::new(61);
        for _ in 0..200 {
            let mut p = crate::oracle::uniform_params(&mut rng);
            p.theta = FRAC_PI_4;
            let (swap, q) = swap_theta_quarter(&p).unwrap();
            if !swap.degenerate {
                assert!(
                    (q.theta - FRAC_PI_4).abs() > 1e-9,
                    "non-degenerate swap must move theta"
                );
            }
            // Unitary equivalence: transformed rho equals the density of
            // the swapped parameters entrywise.
            let full = CMat::tensor(&swap.v_a, &swap.v_b).unwrap();
            let rho_t = full.mul(&rank2_density(&p)).mul(&full.adjoint());
            let rho_q = rank2_density(&q);
            assert!(rho_t.sub(&rho_q).max_abs() < 1e-8);
            let c_in = crate::entangle::concurrence_wootters(&rank2_density(&p))
                .unwrap()
                .0;
            let c_out = crate::entangle::concurrence_wootters(&rho_q).unwrap().0;
            assert!((c_in - c_out).abs() < 1e-8);
        }
    }

    #[test]
    fn swap_fully_degenerate_rotation() {
        // phi in (0, pi/2), alpha = pi/4, beta in {0, pi}: the fully
        // degenerate rotation pair.
        for beta in [0.0, PI] {
            let p = Rank2Params::new(FRAC_PI_4, 0.9, FRAC_PI_4, beta, 0.3).unwrap();
            let (swap, q) = swap_theta_quarter(&p).unwrap();
            assert!(swap.degenerate);
            assert!((swap.theta_prime - FRAC_PI_4).abs() < 1e-9);
            assert!((q.nu1 - p.nu2()).abs() < 1e-15);
        }
    }

    #[test]
    fn swap_passthrough_cases() {
        // phi = 0 with alpha = pi/4: both halves maximally entangled, a
        // bit flip on Alice's side performs the exchange.
        let p = Rank2Params::new(FRAC_PI_4, 0.0, FRAC_PI_4, 0.0, 0.4).unwrap();
        let (swap, q) = swap_theta_quarter(&p).unwrap();
        assert!(swap.degenerate);
        assert!(swap.v_a.sub(&pauli_x()).max_abs() < 1e-15);
        assert!((q.nu1 - 0.6).abs() < 1e-15);

        // phi = pi/2: psi2 = e^{i beta}(|00>-|11>)/sqrt(2).
        let p = Rank2Params::new(FRAC_PI_4, FRAC_PI_2, 0.3, 1.2, 0.4).unwrap();
        let (swap, q) = swap_theta_quarter(&p).unwrap();
        assert!(swap.degenerate);
        assert!((swap.zeta - 1.2).abs() < 1e-12);
        let full = CMat::tensor(&swap.v_a, &swap.v_b).unwrap();
        let rho_t = full.mul(&rank2_density(&p)).mul(&full.adjoint());
        assert!(rho_t.sub(&rank2_density(&q)).max_abs() < 1e-12);
    }

    #[test]
    fn swap_rejects_wrong_theta() {
        let p = Rank2Params::new(0.3, 0.1, 0.2, 0.0, 0.5).unwrap();
        assert!(matches!(
            swap_theta_quarter(&p),
            Err(SwapError::ThetaNotQuarterPi { .. })
        ));
    }
}
