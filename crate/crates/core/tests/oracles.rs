//! Fast paths against the brute-force references at the figure parameters.

use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64;

use memflip::oracles::{
    fock_cutoff_hint, fock_fidelity_oracle, propagate_full_scene, MultimodeGaussianScene,
};
use memflip::{
    apply_triad, apply_triad_to_half, build_channel_coefficients, coherent_state, effective_triad,
    gaussian_fidelity, lift_to_quadratures, ppt_least_eigenvalue, single_use_triad, thermal_state,
    tmsv_state, ChannelParams, ChannelTriad, GaussianState, MemoryChannelSpec,
};

/// Overlap of a pure single-mode input with an arbitrary Gaussian output,
/// computed from the two states directly.
fn state_overlap(input: &GaussianState, output: &GaussianState) -> f64 {
    let sum: Matrix2<f64> = input.block(0, 0) + output.block(0, 0);
    let delta: Vector2<f64> = output.mode_mean(0) - input.mode_mean(0);
    let exponent = -0.5 * (delta.transpose() * sum.try_inverse().unwrap() * delta)[(0, 0)];
    exponent.exp() / sum.determinant().sqrt()
}

fn scene_fidelity(params: &ChannelParams, alpha2: f64) -> f64 {
    let input = coherent_state(alpha2.sqrt(), 0.0);
    let scene = MultimodeGaussianScene::independent(params, &input).unwrap();
    state_overlap(&input, &propagate_full_scene(params, &scene).unwrap())
}

fn fock_fidelity(triad: &ChannelTriad, alpha2: f64) -> f64 {
    let alpha = alpha2.sqrt();
    fock_fidelity_oracle(
        Complex64::new(alpha, 0.0),
        triad,
        fock_cutoff_hint(alpha, triad),
    )
    .unwrap()
}

#[test]
fn fidelity_anchors_three_ways() {
    let cases = [
        (0.6, 0.3, true, 0.5987),
        (0.6, 0.3, false, 0.2965),
        (0.6, 0.0, true, 0.3779),
        (0.6, 0.0, false, 0.3779),
    ];
    for (eta, eps, flips, expect) in cases {
        let params = ChannelParams::new(2, eta, eps, 3.0, flips).unwrap();
        let triad = effective_triad(&params).unwrap();
        let fast = gaussian_fidelity(&coherent_state(8f64.sqrt(), 0.0), &triad)
            .unwrap()
            .value;
        assert_abs_diff_eq!(fast, expect, epsilon = 5e-4);
        assert_abs_diff_eq!(fast, scene_fidelity(&params, 8.0), epsilon = 1e-12);
        assert_abs_diff_eq!(fast, fock_fidelity(&triad, 8.0), epsilon = 1e-6);
    }
    let bare = single_use_triad(0.6, 0.3, 3.0).unwrap();
    let fast = gaussian_fidelity(&coherent_state(8f64.sqrt(), 0.0), &bare)
        .unwrap()
        .value;
    assert_abs_diff_eq!(fast, 0.4358, epsilon = 5e-4);
    assert_abs_diff_eq!(fast, fock_fidelity(&bare, 8.0), epsilon = 1e-6);
}

#[test]
fn dephasing_regime_fidelity_confirmed_in_fock_space() {
    // no flips, eta → 0: the signal re-emerges one use later with a π phase
    for n in [2, 4] {
        for eps in [0.0, 0.95] {
            let params = ChannelParams::new(n, 0.05, eps, 3.0, false).unwrap();
            let triad = effective_triad(&params).unwrap();
            let fast = gaussian_fidelity(&coherent_state(8f64.sqrt(), 0.0), &triad)
                .unwrap()
                .value;
            assert_abs_diff_eq!(fast, fock_fidelity(&triad, 8.0), epsilon = 1e-6);
            assert_abs_diff_eq!(fast, scene_fidelity(&params, 8.0), epsilon = 1e-12);
        }
        let zeta = effective_triad(&ChannelParams::new(n, 0.05, 0.95, 3.0, false).unwrap())
            .unwrap()
            .x()[(0, 0)];
        assert!(zeta < 0.0);
    }
}

#[test]
fn triad_noise_matches_full_propagation() {
    for (flips, expect) in [(true, 0.668365), (false, 1.550835)] {
        let params = ChannelParams::new(2, 0.6, 0.3, 3.0, flips).unwrap();
        let scene =
            MultimodeGaussianScene::independent(&params, &GaussianState::vacuum(1)).unwrap();
        let out = propagate_full_scene(&params, &scene).unwrap();
        let triad = effective_triad(&params).unwrap();
        let zeta = triad.x()[(0, 0)];
        let noise = out.cov()[(0, 0)] - 0.5 * zeta * zeta;
        assert_abs_diff_eq!(noise, triad.y()[(0, 0)], epsilon = 1e-12);
        assert_abs_diff_eq!(noise, expect, epsilon = 1e-6);
    }
}

#[test]
fn single_use_triad_matches_one_use_dilation() {
    for (eta, eps, t) in [
        (0.6, 0.3, 3.0),
        (1.0, 0.5, 2.0),
        (0.0, 0.0, 3.0),
        (0.2, 0.9, 0.7),
    ] {
        let map = build_channel_coefficients(&MemoryChannelSpec::new(1, eta, eps).unwrap());
        let lifted = lift_to_quadratures(&map);
        let signal = coherent_state(1.0, 0.5);
        let joint = signal
            .tensor(&thermal_state(t, 1).unwrap())
            .tensor(&GaussianState::vacuum(1));
        let cov: DMatrix<f64> = &lifted * joint.cov() * lifted.transpose();
        let mean: DVector<f64> = &lifted * joint.mean();
        let triad = single_use_triad(eta, eps, t).unwrap();
        let fast = apply_triad(&signal, &triad).unwrap();
        assert!((fast.cov() - cov).amax() < 1e-12);
        assert!((fast.mean() - mean).amax() < 1e-12);
    }
    let t = single_use_triad(0.6, 0.3, 3.0).unwrap();
    assert_abs_diff_eq!(t.y()[(0, 0)], 1.04, epsilon = 1e-12);
}

#[test]
fn half_transmission_matches_two_mode_dilation() {
    for n in [2, 4, 6] {
        for flips in [true, false] {
            for (eta, eps, mu) in [
                (0.6, 0.3, 0.6),
                (0.1, 0.9, 0.3),
                (0.95, 0.5, 0.8),
                (0.0, 1.0, 0.6),
            ] {
                let params = ChannelParams::new(n, eta, eps, 1.0, flips).unwrap();
                let pair = tmsv_state(mu).unwrap();
                let fast = apply_triad_to_half(&pair, &effective_triad(&params).unwrap()).unwrap();
                let scene = MultimodeGaussianScene::with_idler(&params, &pair).unwrap();
                let slow = propagate_full_scene(&params, &scene).unwrap();
                assert!((fast.cov() - slow.cov()).amax() < 1e-10);
                let a = ppt_least_eigenvalue(&fast).unwrap();
                let b = ppt_least_eigenvalue(&slow).unwrap();
                assert_abs_diff_eq!(a.d_minus, b.d_minus, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn entanglement_anchor_from_blocks() {
    let params = ChannelParams::new(2, 0.6, 0.3, 1.0, true).unwrap();
    let triad = effective_triad(&params).unwrap();
    assert_abs_diff_eq!(triad.y()[(0, 0)], 0.295553, epsilon = 1e-6);
    let out = apply_triad_to_half(&tmsv_state(0.6).unwrap(), &triad).unwrap();
    assert_abs_diff_eq!(out.block(0, 0)[(0, 0)], 1.126117, epsilon = 1e-5);
    assert_abs_diff_eq!(out.block(0, 1)[(0, 0)], 0.828883, epsilon = 1e-5);
    let r = ppt_least_eigenvalue(&out).unwrap();
    assert_abs_diff_eq!(r.d_minus, 0.2648, epsilon = 5e-4);
    assert!(!r.separable);
}

#[test]
fn identity_channel_entanglement_is_analytic() {
    for mu in [0.1, 0.3, 0.6, 0.9] {
        let r = ppt_least_eigenvalue(&tmsv_state(mu).unwrap()).unwrap();
        assert_abs_diff_eq!(r.d_minus, 0.5 * (1.0 - mu) / (1.0 + mu), epsilon = 1e-12);
    }
}
