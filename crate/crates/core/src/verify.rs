//! Self-check suite behind the `verify` command: normalization, dilation
//! orthonormality, oracle equivalences, limit cases and the two routes to
//! the partially transposed symplectic spectrum.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::channel::MemoryChannelSpec;
use crate::gaussian::{apply_triad, coherent_state, tmsv_state, GaussianState};
use crate::metrics::{gaussian_fidelity, ppt_least_eigenvalue};
use crate::oracles::{
    fock_cutoff_hint, fock_fidelity_oracle, propagate_full_scene_with, MultimodeGaussianScene,
};
use crate::scheme::{triad_from_coefficients, ChannelParams, Pipeline};

pub const DEFAULT_SEED: u64 = 0x5e_ed0f_f11b;

pub const NORMALIZATION_TOL: f64 = 1e-12;
pub const ORTHONORMALITY_TOL: f64 = 1e-12;
pub const TRIAD_ORACLE_TOL: f64 = 1e-12;
pub const FOCK_ORACLE_TOL: f64 = 1e-6;
pub const CROSS_BLOCK_TOL: f64 = 1e-12;
pub const SPECTRUM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{tag}] {:<24} {} ({:.3}s)\n",
                c.name, c.detail, c.seconds
            ));
        }
        out
    }
}

fn grid(step_count: usize) -> Vec<f64> {
    (0..=step_count)
        .map(|i| i as f64 / step_count as f64)
        .collect()
}

fn timed(name: &'static str, f: impl FnOnce() -> (bool, String)) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = f();
    CheckResult {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// `|Σζ² − 1|` over `N ∈ {2,4,6}`, `η, ε ∈ {0, 0.1, …, 1}`, both flip settings.
pub fn check_normalization(pipeline: &Pipeline) -> CheckResult {
    timed("normalization", || {
        let mut worst = 0.0f64;
        for n in [2, 4, 6] {
            for eta in grid(10) {
                for eps in grid(10) {
                    for flips in [false, true] {
                        let p = ChannelParams::new(n, eta, eps, 0.0, flips).expect("grid params");
                        let dev = match pipeline.reduce(&p) {
                            Ok(c) => (c.norm_sq() - 1.0).abs(),
                            Err(_) => f64::INFINITY,
                        };
                        worst = worst.max(dev);
                    }
                }
            }
        }
        (
            worst < NORMALIZATION_TOL,
            format!("max |sum zeta^2 - 1| = {worst:.3e}"),
        )
    })
}

/// `M·Mᵀ = I` for every channel dilation and end-to-end composition.
pub fn check_orthonormality(pipeline: &Pipeline) -> CheckResult {
    timed("orthonormality", || {
        let mut worst = 0.0f64;
        for n in [2, 4, 6] {
            for eta in grid(10) {
                for eps in grid(10) {
                    let chan = MemoryChannelSpec::new(n, eta, eps).expect("grid params");
                    worst = worst.max((pipeline.channel)(&chan).orthonormality_defect());
                    for flips in [false, true] {
                        let p = ChannelParams::new(n, eta, eps, 0.0, flips).expect("grid params");
                        let defect = pipeline
                            .compose(&p)
                            .map_or(f64::INFINITY, |m| m.orthonormality_defect());
                        worst = worst.max(defect);
                    }
                }
            }
        }
        (
            worst < ORTHONORMALITY_TOL,
            format!("max |MM^T - I| = {worst:.3e}"),
        )
    })
}

fn random_params(rng: &mut StdRng, t_max: f64) -> ChannelParams {
    let n = [2, 4, 6][rng.random_range(0..3)];
    ChannelParams::new(
        n,
        rng.random::<f64>(),
        rng.random::<f64>(),
        rng.random::<f64>() * t_max,
        rng.random_bool(0.5),
    )
    .expect("random params in range")
}

fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// Random single-mode Gaussian state: displaced, rotated, squeezed thermal.
pub fn random_single_mode_state(rng: &mut StdRng) -> GaussianState {
    let nu = 0.5 + rng.random::<f64>() * 2.0;
    let r: f64 = rng.random_range(-1.0..1.0);
    let squeeze = Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp());
    let s = rotation(rng.random::<f64>() * PI) * squeeze;
    let cov = s * s.transpose() * nu;
    let mean = DVector::from_vec(vec![
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
    ]);
    GaussianState::new(mean, DMatrix::from_column_slice(2, 2, cov.as_slice()))
        .expect("physical by construction")
}

/// Random physical two-mode state `S (ν₁I ⊕ ν₂I) Sᵀ` with `S` a product of
/// local rotations, local squeezers and a beam splitter.
pub fn random_two_mode_state(rng: &mut StdRng) -> GaussianState {
    let local = |rng: &mut StdRng| {
        let mut m = DMatrix::zeros(4, 4);
        for mode in 0..2 {
            let r: f64 = rng.random_range(-1.2..1.2);
            let block = rotation(rng.random::<f64>() * 2.0 * PI)
                * Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp())
                * rotation(rng.random::<f64>() * 2.0 * PI);
            m.fixed_view_mut::<2, 2>(2 * mode, 2 * mode)
                .copy_from(&block);
        }
        m
    };
    let theta: f64 = rng.random::<f64>() * PI;
    let (s, c) = theta.sin_cos();
    let mut mixer = DMatrix::<f64>::identity(4, 4) * c;
    for k in 0..2 {
        mixer[(k, 2 + k)] = s;
        mixer[(2 + k, k)] = -s;
    }
    let sym = local(rng) * mixer * local(rng);
    let nu1 = 0.5 + rng.random::<f64>() * 2.0;
    let nu2 = 0.5 + rng.random::<f64>() * 2.0;
    let williamson = DMatrix::from_diagonal(&DVector::from_vec(vec![nu1, nu1, nu2, nu2]));
    let cov = &sym * williamson * sym.transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    GaussianState::new(DVector::zeros(4), cov).expect("physical by construction")
}

/// Effective triad against full multimode propagation, `draws` random points.
pub fn check_triad_oracle(pipeline: &Pipeline, draws: usize, seed: u64) -> CheckResult {
    timed("triad_vs_full_scene", || {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..draws {
            let params = random_params(&mut rng, 5.0);
            let signal = random_single_mode_state(&mut rng);
            let dev = (|| -> crate::Result<f64> {
                let triad = triad_from_coefficients(&pipeline.reduce(&params)?, params.t)?;
                let fast = apply_triad(&signal, &triad)?;
                let scene = MultimodeGaussianScene::independent(&params, &signal)?;
                let slow = propagate_full_scene_with(pipeline, &params, &scene)?;
                Ok((fast.cov() - slow.cov())
                    .amax()
                    .max((fast.mean() - slow.mean()).amax()))
            })()
            .unwrap_or(f64::INFINITY);
            worst = worst.max(dev);
        }
        (
            worst < TRIAD_ORACLE_TOL,
            format!("{draws} draws, max deviation {worst:.3e}"),
        )
    })
}

/// Gaussian fidelity formula against the Fock-space density-matrix oracle.
pub fn check_fock_oracle(pipeline: &Pipeline, draws: usize, seed: u64) -> CheckResult {
    timed("fidelity_vs_fock", || {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..draws {
            let params = random_params(&mut rng, 3.0);
            let mag = (rng.random::<f64>() * 8.0).sqrt();
            let alpha = Complex64::from_polar(mag, rng.random::<f64>() * 2.0 * PI);
            let dev = (|| -> crate::Result<f64> {
                let triad = triad_from_coefficients(&pipeline.reduce(&params)?, params.t)?;
                let fast = gaussian_fidelity(&coherent_state(alpha.re, alpha.im), &triad)?.value;
                let slow = fock_fidelity_oracle(alpha, &triad, fock_cutoff_hint(mag, &triad))?;
                Ok((fast - slow).abs())
            })()
            .unwrap_or(f64::INFINITY);
            worst = worst.max(dev);
        }
        (
            worst < FOCK_ORACLE_TOL,
            format!("{draws} draws, max |dF| = {worst:.3e}"),
        )
    })
}

/// Signal–idler correlations after half-transmission scale by `ζ_in`.
pub fn check_cross_block(pipeline: &Pipeline, draws: usize, seed: u64) -> CheckResult {
    timed("half_transmission_cross", || {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..draws {
            let params = random_params(&mut rng, 5.0);
            let mu = rng.random::<f64>() * 0.95;
            let dev = (|| -> crate::Result<f64> {
                let pair = tmsv_state(mu)?;
                let zeta = pipeline.reduce(&params)?.zeta_in;
                let scene = MultimodeGaussianScene::with_idler(&params, &pair)?;
                let out = propagate_full_scene_with(pipeline, &params, &scene)?;
                Ok((out.block(0, 1) - pair.block(0, 1) * zeta).amax())
            })()
            .unwrap_or(f64::INFINITY);
            worst = worst.max(dev);
        }
        (
            worst < CROSS_BLOCK_TOL,
            format!("{draws} draws, max |C' - zeta C| = {worst:.3e}"),
        )
    })
}

/// Closed-form `d̃_−` against the `iJṼ` spectrum on random physical states.
pub fn check_spectrum_routes(draws: usize, seed: u64) -> CheckResult {
    timed("ppt_routes", || {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..draws {
            let state = random_two_mode_state(&mut rng);
            let dev = match ppt_least_eigenvalue(&state) {
                Ok(r) => (r.d_minus - r.d_minus_closed_form).abs(),
                Err(_) => f64::INFINITY,
            };
            worst = worst.max(dev);
        }
        (
            worst < SPECTRUM_TOL,
            format!("{draws} states, max deviation {worst:.3e}"),
        )
    })
}

/// Lossless identity and flip-invariance of the memoryless channel.
pub fn check_limits(pipeline: &Pipeline) -> CheckResult {
    timed("limit_cases", || {
        let mut worst = 0.0f64;
        for n in [2, 4, 6] {
            for x in grid(10) {
                for flips in [false, true] {
                    let dev = (|| -> crate::Result<f64> {
                        let lossless =
                            pipeline.reduce(&ChannelParams::new(n, 1.0, x, 0.0, flips)?)?;
                        let mut d = (lossless.zeta_in - 1.0).abs();
                        let mut mem = ChannelParams::new(n, x, 0.0, 0.0, flips)?;
                        let c = pipeline.reduce(&mem)?;
                        mem.flips = !flips;
                        d = d.max(c.max_weight_diff(&pipeline.reduce(&mem)?));
                        d = d.max((c.zeta_in - x.sqrt()).abs());
                        Ok(d)
                    })()
                    .unwrap_or(f64::INFINITY);
                    worst = worst.max(dev);
                }
            }
        }
        (worst < 1e-12, format!("max deviation {worst:.3e}"))
    })
}

/// Flipped scheme beats both the unflipped scheme and a single bare use in
/// signal weight, and carries less memory noise.
pub fn check_flip_advantage(pipeline: &Pipeline) -> CheckResult {
    timed("flip_advantage", || {
        let mut failures = 0usize;
        let mut total = 0usize;
        for n in [2, 4] {
            for eta in (1..10).map(|i| i as f64 / 10.0) {
                for eps in (1..=10).map(|i| i as f64 / 10.0) {
                    total += 1;
                    let ok = (|| -> crate::Result<bool> {
                        let on = pipeline.reduce(&ChannelParams::new(n, eta, eps, 0.0, true)?)?;
                        let off = pipeline.reduce(&ChannelParams::new(n, eta, eps, 0.0, false)?)?;
                        Ok(on.signal_weight() > off.signal_weight()
                            && on.signal_weight() > eta
                            && on.memory_weight() < off.memory_weight())
                    })()
                    .unwrap_or(false);
                    failures += usize::from(!ok);
                }
            }
        }
        (
            failures == 0,
            format!("{failures}/{total} grid points violate"),
        )
    })
}

/// Runs the full suite against `pipeline`.
pub fn run_checks(pipeline: &Pipeline, seed: u64) -> VerifyReport {
    VerifyReport {
        checks: vec![
            check_normalization(pipeline),
            check_orthonormality(pipeline),
            check_triad_oracle(pipeline, 200, seed),
            check_fock_oracle(pipeline, 10, seed.wrapping_add(1)),
            check_cross_block(pipeline, 100, seed.wrapping_add(2)),
            check_spectrum_routes(1000, seed.wrapping_add(3)),
            check_limits(pipeline),
            check_flip_advantage(pipeline),
        ],
    }
}

pub fn run_default() -> VerifyReport {
    run_checks(&Pipeline::default(), DEFAULT_SEED)
}
