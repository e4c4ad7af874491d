//! Concurrence of rank-2 states by two independent routes, and the
//! separability predicate.
//!
//! The closed form C = sqrt(-s2 - 2 sqrt(s1)) evaluates the two
//! characteristic-polynomial coefficients of rho-tilde * rho directly from
//! the family parameters; the Wootters route diagonalizes the Hermitian
//! sqrt(rho) rho-tilde sqrt(rho). The two must agree to 1e-8 on the whole
//! family, which the acceptance suite checks at scale.

use crate::cmat::{pauli_y, CMat, CMatError, HERM_CLAMP};
use crate::states::Rank2Params;

/// Default tolerance deciding separability from a concurrence value.
pub const SEPARABILITY_TOL: f64 = 1e-9;

/// Both concurrence routes side by side.
#[derive(Debug, Clone)]
pub struct ConcurrenceReport {
    pub s1: f64,
    pub s2: f64,
    pub c_closed: f64,
    /// Wootters spectrum, descending.
    pub wootters_lambdas: [f64; 4],
    pub c_wootters: f64,
    /// |c_closed - c_wootters|
    pub defect: f64,
}

/// The coefficients (s2, s1) of v^2 (v^2 + s2 v + s1) = 0, the
/// characteristic polynomial of rho-tilde * rho for the rank-2 family.
pub fn s_coefficients(p: &Rank2Params) -> (f64, f64) {
    let (n1, n2) = (p.nu1, p.nu2());
    let s2t = (2.0 * p.theta).sin();
    let s2a = (2.0 * p.alpha).sin();
    let s2p = (2.0 * p.phi).sin();
    let c2b = (2.0 * p.beta).cos();
    let c4t = (4.0 * p.theta).cos();
    let sp2 = p.phi.sin().powi(2);
    let cp4 = p.phi.cos().powi(4);

    let s2 = -0.5 * n2 * n2 * s2a * s2t * s2p * s2p * c2b
        - n2 * n2 * s2a * s2a * cp4
        - s2t * s2t * (n1 * n1 - n1 * n2 * sp2 + n2 * n2 * sp2 * sp2)
        - 0.5 * n1 * n2 * (c4t + 3.0) * sp2;
    let s1 = 0.5
        * n1
        * n1
        * n2
        * n2
        * (s2a * s2t * s2p * s2p * c2b + 2.0 * s2a * s2a * s2t * s2t * cp4 + 2.0 * sp2 * sp2);
    (s1, s2)
}

/// Closed-form concurrence C = sqrt(-s2 - 2 sqrt(s1)).
///
/// Radicands in [-1e-10, 0) are rounding noise at the separability
/// boundary and clamp to zero; anything lower is a bug.
pub fn concurrence_closed_form(p: &Rank2Params) -> f64 {
    let (s1, s2) = s_coefficients(p);
    let s1 = clamp_radicand(s1, "s1");
    let radicand = clamp_radicand(-s2 - 2.0 * s1.sqrt(), "-s2 - 2 sqrt(s1)");
    radicand.sqrt()
}

fn clamp_radicand(x: f64, what: &str) -> f64 {
    if x < 0.0 {
        assert!(x >= -1e-10, "{what} = {x:e} below the clamping window");
        0.0
    } else {
        x
    }
}

/// Wootters concurrence of an arbitrary two-qubit density matrix.
///
/// Computes the spectrum of the Hermitian sqrt(rho) rho-tilde sqrt(rho)
/// with rho-tilde = (sigma_y x sigma_y) rho* (sigma_y x sigma_y), takes
/// square roots in descending order and returns
/// max(0, l1 - l2 - l3 - l4) together with the lambdas.
pub fn concurrence_wootters(rho: &CMat) -> Result<(f64, [f64; 4]), CMatError> {
    let yy = CMat::tensor(&pauli_y(), &pauli_y())?;
    let rho_tilde = yy.mul(&rho.conj_entries()).mul(&yy);
    let sqrt_rho = rho.sqrt_psd()?;
    let r2 = sqrt_rho.mul(&rho_tilde).mul(&sqrt_rho);
    let (vals, _) = r2.eigh()?;
    let top = vals.iter().cloned().fold(0.0f64, f64::max);
    let noise_floor = 1e-14 * top.max(1.0);
    let mut lambdas = [0.0f64; 4];
    for (slot, &v) in lambdas.iter_mut().zip(vals.iter().rev()) {
        if v < -HERM_CLAMP {
            return Err(CMatError::NegativeEigenvalue { value: v });
        }
        // Eigenvalues at the rounding floor would inflate to sqrt-scale
        // noise; they are exact zeros for rank <= 2 input.
        *slot = if v <= noise_floor { 0.0 } else { v.sqrt() };
    }
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok((c, lambdas))
}

/// Both routes on the same parameters.
pub fn concurrence_report(p: &Rank2Params) -> Result<ConcurrenceReport, CMatError> {
    let (s1, s2) = s_coefficients(p);
    let c_closed = concurrence_closed_form(p);
    let (c_wootters, wootters_lambdas) = concurrence_wootters(&crate::states::rank2_density(p))?;
    Ok(ConcurrenceReport {
        s1,
        s2,
        c_closed,
        wootters_lambdas,
        c_wootters,
        defect: (c_closed - c_wootters).abs(),
    })
}

/// True iff the closed-form concurrence is below `tol`.
pub fn is_separable(p: &Rank2Params, tol: f64) -> bool {
    concurrence_closed_form(p) < tol
}
