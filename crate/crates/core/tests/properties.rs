//! Property-based invariants over randomly generated inputs.

use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use steerkit_core::cmat::{CMat, C64};
use steerkit_core::decomp::{
    canonical_taus, conditional_decompose, min_hermiticity_defect, MeasurementFrame,
};
use steerkit_core::entangle::{concurrence_closed_form, concurrence_wootters};
use steerkit_core::oracle::{haar_unitary2, SplitMix64};
use steerkit_core::states::{make_psi1, make_psi2, rank2_density, schmidt_decompose, Rank2Params};
use steerkit_core::steer::{classical_bound, w_max_pair};

fn params_strategy() -> impl Strategy<Value = Rank2Params> {
    (
        0.0..FRAC_PI_2,
        0.0..FRAC_PI_2,
        0.0..FRAC_PI_2,
        0.0..TAU,
        0.0..1.0f64,
    )
        .prop_map(|(theta, phi, alpha, beta, nu1)| {
            Rank2Params::new(theta, phi, alpha, beta, nu1).unwrap()
        })
}

proptest! {
    #[test]
    fn density_is_valid_rank2(p in params_strategy()) {
        let rho = rank2_density(&p);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.hermiticity_defect() < 1e-13);
        let (vals, _) = rho.eigh().unwrap();
        for v in &vals {
            prop_assert!(*v > -1e-10 && *v < 1.0 + 1e-10);
        }
        // Rank <= 2: the two lowest eigenvalues vanish.
        prop_assert!(vals[0] < 1e-10 && vals[1] < 1e-10);
    }

    #[test]
    fn psi_pair_is_orthonormal(p in params_strategy()) {
        let s1 = make_psi1(p.theta).unwrap();
        let s2 = make_psi2(&p);
        prop_assert!(s1.inner(&s2).norm() < 1e-12);
        prop_assert!((s1.inner(&s1).re - 1.0).abs() < 1e-12);
        prop_assert!((s2.inner(&s2).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_routes_agree(p in params_strategy()) {
        let c_closed = concurrence_closed_form(&p);
        let (c_wootters, lambdas) = concurrence_wootters(&rank2_density(&p)).unwrap();
        prop_assert!((c_closed - c_wootters).abs() < 1e-8);
        // Rank-2 inputs: lambda3 + lambda4 vanish, so C = lambda1 - lambda2.
        prop_assert!(lambdas[2] + lambdas[3] < 1e-8);
        prop_assert!((c_wootters - (lambdas[0] - lambdas[1]).max(0.0)).abs() < 1e-12);
    }

    #[test]
    fn schmidt_invariant_under_local_unitaries(p in params_strategy(), seed in any::<u64>()) {
        let psi = make_psi2(&p);
        let s0 = schmidt_decompose(&psi).unwrap();
        let mut rng = SplitMix64::new(seed);
        let u = CMat::tensor(&haar_unitary2(&mut rng), &haar_unitary2(&mut rng)).unwrap();
        let rotated_amps = u.mul_vec(&psi.amps);
        let rotated = steerkit_core::states::PureState2Q {
            amps: [rotated_amps[0], rotated_amps[1], rotated_amps[2], rotated_amps[3]],
        };
        let s1 = schmidt_decompose(&rotated).unwrap();
        prop_assert!((s0.kappa1 - s1.kappa1).abs() < 1e-9);
        prop_assert!((s0.kappa2 - s1.kappa2).abs() < 1e-9);
    }

    #[test]
    fn reconstruction_identity_exact(p in params_strategy(), xi in 0.0..PI, tau in 0.0..TAU) {
        let rho = rank2_density(&p);
        let frame = MeasurementFrame { xi, tau, delta: 0.0 };
        let d = conditional_decompose(&rho, &frame);
        prop_assert!(d.reconstruct(&frame).sub(&rho).max_abs() < 1e-12);
    }

    #[test]
    fn theorem_inequality(p in params_strategy()) {
        for tau in canonical_taus(&p) {
            let (w1, w2) = w_max_pair(&p, tau);
            prop_assert!(w1 + w2 >= 2.0 * classical_bound(&p) - 1e-12);
            prop_assert!((0.0..=1.0).contains(&w1) && (0.0..=1.0).contains(&w2));
        }
        let b = classical_bound(&p);
        prop_assert!((0.25..=0.5 + 1e-15).contains(&b));
    }

    #[test]
    fn ns_check_matches_concurrence_verdict(p in params_strategy()) {
        // Away from the boundary band both routes must agree.
        let c = concurrence_closed_form(&p);
        if c > 1e-7 {
            prop_assert!(min_hermiticity_defect(&p) > 1e-9);
        }
    }

    #[test]
    fn wootters_local_unitary_invariance(p in params_strategy(), seed in any::<u64>()) {
        let rho = rank2_density(&p);
        let mut rng = SplitMix64::new(seed);
        let u = CMat::tensor(&haar_unitary2(&mut rng), &haar_unitary2(&mut rng)).unwrap();
        let rotated = u.mul(&rho).mul(&u.adjoint());
        let (c0, _) = concurrence_wootters(&rho).unwrap();
        let (c1, _) = concurrence_wootters(&rotated).unwrap();
        prop_assert!((c0 - c1).abs() < 1e-8);
    }

    #[test]
    fn eigvals_ab_ba_agree(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let mut rand_mat = || {
            let mut m = CMat::zeros(4, 4);
            for r in 0..4 {
                for c in 0..4 {
                    m.set(r, c, C64::new(rng.f64() * 2.0 - 1.0, rng.f64() * 2.0 - 1.0));
                }
            }
            m
        };
        let a = rand_mat();
        let b = rand_mat();
        let mut va = a.mul(&b).eigvals_general().unwrap();
        let mut vb = b.mul(&a).eigvals_general().unwrap();
        let key = |z: &C64| (z.re, z.im);
        va.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        vb.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (x, y) in va.iter().zip(&vb) {
            prop_assert!((x - y).norm() < 1e-8);
        }
    }
}
