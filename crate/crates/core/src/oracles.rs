//! Brute-force reference computations used to check the fast paths.
//!
//! Nothing here is on the hot path: scenes carry the full joint covariance
//! of every mode the scheme touches, and the Fock-space fidelity builds the
//! output density matrix explicitly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{thermal_state, GaussianState};
use crate::mode_algebra::{lift_to_quadratures, ModeLinearMap};
use crate::scheme::{ChannelParams, ChannelTriad, Pipeline};

/// Tail mass tolerated outside the photon-number cutoff.
pub const FOCK_TAIL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeRole {
    Signal,
    Aux(usize),
    Env(usize),
    Memory,
    Idler,
}

/// Joint Gaussian state of every input mode of the scheme, ordered
/// `(signal, aux₁…aux_{N−1}, env₁…env_N, memory[, idler])`.
#[derive(Clone, Debug)]
pub struct MultimodeGaussianScene {
    roles: Vec<ModeRole>,
    state: GaussianState,
}

impl MultimodeGaussianScene {
    fn roles_for(n: usize, idler: bool) -> Vec<ModeRole> {
        let mut roles = vec![ModeRole::Signal];
        roles.extend((1..n).map(ModeRole::Aux));
        roles.extend((1..=n).map(ModeRole::Env));
        roles.push(ModeRole::Memory);
        if idler {
            roles.push(ModeRole::Idler);
        }
        roles
    }

    /// Arbitrary joint state over the scheme's modes (correlations allowed).
    pub fn new(n: usize, idler: bool, state: GaussianState) -> Result<Self> {
        let roles = Self::roles_for(n, idler);
        if state.modes() != roles.len() {
            return Err(Error::dims(format!("{} modes", roles.len()), state.modes()));
        }
        Ok(Self { roles, state })
    }

    /// Signal state with vacuum auxiliaries and memory, thermal environments.
    pub fn independent(params: &ChannelParams, signal: &GaussianState) -> Result<Self> {
        if signal.modes() != 1 {
            return Err(Error::dims("1-mode signal", signal.modes()));
        }
        let joint = signal.tensor(&Self::ancillas(params)?);
        Self::new(params.n, false, joint)
    }

    /// Two-mode state whose first mode enters the scheme and whose second
    /// mode (the idler) stays behind.
    pub fn with_idler(params: &ChannelParams, pair: &GaussianState) -> Result<Self> {
        if pair.modes() != 2 {
            return Err(Error::dims("2-mode state", pair.modes()));
        }
        let signal = pair.reduce(&[0])?;
        let joint = signal
            .tensor(&Self::ancillas(params)?)
            .tensor(&pair.reduce(&[1])?);
        // restore the signal–idler correlations
        let mut cov = joint.cov().clone();
        let last = 2 * (2 * params.n + 1);
        let cross = pair.block(0, 1);
        cov.fixed_view_mut::<2, 2>(0, last).copy_from(&cross);
        cov.fixed_view_mut::<2, 2>(last, 0)
            .copy_from(&cross.transpose());
        let state = GaussianState::new(joint.mean().clone(), cov)?;
        Self::new(params.n, true, state)
    }

    fn ancillas(params: &ChannelParams) -> Result<GaussianState> {
        let aux = GaussianState::vacuum(params.n - 1);
        let env = thermal_state(params.t, params.n)?;
        Ok(aux.tensor(&env).tensor(&GaussianState::vacuum(1)))
    }

    pub fn roles(&self) -> &[ModeRole] {
        &self.roles
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }

    pub fn has_idler(&self) -> bool {
        self.roles.last() == Some(&ModeRole::Idler)
    }
}

/// Propagates the whole scene through the lifted end-to-end dilation and
/// keeps the output signal (and the idler, when present).
pub fn propagate_full_scene(
    params: &ChannelParams,
    scene: &MultimodeGaussianScene,
) -> Result<GaussianState> {
    propagate_full_scene_with(&Pipeline::default(), params, scene)
}

pub fn propagate_full_scene_with(
    pipeline: &Pipeline,
    params: &ChannelParams,
    scene: &MultimodeGaussianScene,
) -> Result<GaussianState> {
    let expected = 2 * params.n + 1 + usize::from(scene.has_idler());
    if scene.roles.len() != expected {
        return Err(Error::dims(
            format!("{expected} scene modes"),
            scene.roles.len(),
        ));
    }
    let mut map = pipeline.compose(params)?;
    if scene.has_idler() {
        map = map.direct_sum(&ModeLinearMap::identity(1));
    }
    let lifted = lift_to_quadratures(&map);
    let mean: DVector<f64> = &lifted * scene.state.mean();
    let cov: DMatrix<f64> = &lifted * scene.state.cov() * lifted.transpose();
    let out = GaussianState::new(mean, cov)?;
    let mut keep = vec![0];
    if scene.has_idler() {
        keep.push(params.n);
    }
    out.reduce(&keep)
}

/// Photon-number cutoff from the coherent-amplitude heuristic
/// `|α|² + 10|α| + 20`, widened for the thermal spread added by `triad`.
pub fn fock_cutoff_hint(alpha_abs: f64, triad: &ChannelTriad) -> usize {
    let base = alpha_abs * alpha_abs + 10.0 * alpha_abs + 20.0;
    let zeta = triad.x()[(0, 0)];
    let occupation = (0.5 * zeta * zeta + triad.y()[(0, 0)] - 0.5).max(0.0);
    let thermal = if occupation > 0.0 {
        let ratio = occupation / (occupation + 1.0);
        (1e-12f64).ln() / ratio.ln()
    } else {
        0.0
    };
    (base + thermal).ceil() as usize
}

/// `Tr[ρ_in ρ_out]` for a coherent input, with `ρ_out` built in a truncated
/// number basis.
///
/// The triad must be `(0, ζ·I, y·I)` with `|ζ| ≤ 1`. It is split into a
/// pure-loss channel of transmissivity `ζ²` followed by classical Gaussian
/// noise of variance `σ² = y − (1−ζ²)/2`; the noise is realised as loss
/// `1/G` followed by a quantum-limited amplifier of gain `G = 1 + σ²`, both
/// applied through their Kraus operators. A negative `ζ` adds a π phase
/// rotation.
pub fn fock_fidelity_oracle(alpha: Complex64, triad: &ChannelTriad, cutoff: usize) -> Result<f64> {
    let zeta = triad.scalar_transfer().ok_or(Error::NonScalarTransfer)?;
    if triad.d().amax() != 0.0 {
        return Err(Error::NonDecomposable("nonzero displacement"));
    }
    let y = triad.y();
    if (y[(0, 0)] - y[(1, 1)]).abs() > 1e-14 || y[(0, 1)].abs() > 1e-14 {
        return Err(Error::NonDecomposable("anisotropic noise"));
    }
    if zeta.abs() > 1.0 {
        return Err(Error::NonDecomposable("transfer exceeds unity"));
    }
    let sigma2 = y[(0, 0)] - 0.5 * (1.0 - zeta * zeta);
    if sigma2 < -1e-12 {
        return Err(Error::NonDecomposable("noise below the loss floor"));
    }
    let gain = 1.0 + sigma2.max(0.0);

    let dim = cutoff + 1;
    let lnf = ln_factorials(dim + 1);
    let ket = coherent_ket(alpha, dim, &lnf);
    let input_mass: f64 = ket.iter().map(|c| c.norm_sqr()).sum();
    if 1.0 - input_mass >= FOCK_TAIL_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            tail: 1.0 - input_mass,
        });
    }

    let mut rho = DMatrix::from_fn(dim, dim, |m, n| ket[m] * ket[n].conj());
    if zeta < 0.0 {
        for m in 0..dim {
            for n in 0..dim {
                if (m + n) % 2 == 1 {
                    rho[(m, n)] = -rho[(m, n)];
                }
            }
        }
    }
    rho = apply_loss(&rho, zeta * zeta / gain, &lnf);
    rho = apply_amplifier(&rho, gain, &lnf);

    let trace: f64 = (0..dim).map(|i| rho[(i, i)].re).sum();
    let tail = input_mass - trace;
    if tail >= FOCK_TAIL_TOL {
        return Err(Error::CutoffTooSmall { cutoff, tail });
    }

    let mut overlap = Complex64::new(0.0, 0.0);
    for m in 0..dim {
        for n in 0..dim {
            overlap += ket[m].conj() * rho[(m, n)] * ket[n];
        }
    }
    Ok(overlap.re)
}

fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len + 1];
    for k in 1..=len {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

fn ln_binomial(lnf: &[f64], n: usize, k: usize) -> f64 {
    lnf[n] - lnf[k] - lnf[n - k]
}

fn coherent_ket(alpha: Complex64, dim: usize, lnf: &[f64]) -> Vec<Complex64> {
    let norm = (-0.5 * alpha.norm_sqr()).exp();
    (0..dim)
        .map(|n| {
            let mag = if n == 0 {
                1.0
            } else if alpha.norm() == 0.0 {
                0.0
            } else {
                (n as f64 * alpha.norm().ln() - 0.5 * lnf[n]).exp()
            };
            Complex64::from_polar(norm * mag, n as f64 * alpha.arg())
        })
        .collect()
}

/// `Σ_k A_k ρ A_k†` with `⟨n−k|A_k|n⟩ = √C(n,k) τ^{(n−k)/2} (1−τ)^{k/2}`.
fn apply_loss(rho: &DMatrix<Complex64>, tau: f64, lnf: &[f64]) -> DMatrix<Complex64> {
    let dim = rho.nrows();
    let (keep, lose) = (tau.sqrt(), (1.0 - tau).max(0.0).sqrt());
    let kraus = |n: usize, k: usize| {
        (0.5 * ln_binomial(lnf, n, k)).exp() * keep.powi((n - k) as i32) * lose.powi(k as i32)
    };
    let mut out = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        for m in 0..dim - k {
            let a = kraus(m + k, k);
            if a == 0.0 {
                continue;
            }
            for mp in 0..dim - k {
                out[(m, mp)] += rho[(m + k, mp + k)] * (a * kraus(mp + k, k));
            }
        }
    }
    out
}

/// `Σ_k B_k ρ B_k†` with
/// `⟨n+k|B_k|n⟩ = √C(n+k,k) G^{−(n+1)/2} ((G−1)/G)^{k/2}`, truncated to the
/// working dimension.
fn apply_amplifier(rho: &DMatrix<Complex64>, gain: f64, lnf: &[f64]) -> DMatrix<Complex64> {
    let dim = rho.nrows();
    let (inv, excite) = (gain.recip().sqrt(), ((gain - 1.0) / gain).sqrt());
    let kraus = |n: usize, k: usize| {
        (0.5 * ln_binomial(lnf, n + k, k)).exp() * inv.powi(n as i32 + 1) * excite.powi(k as i32)
    };
    let mut out = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        for n in 0..dim - k {
            let b = kraus(n, k);
            if b == 0.0 {
                continue;
            }
            for np in 0..dim - k {
                out[(n + k, np + k)] += rho[(n, np)] * (b * kraus(np, k));
            }
        }
    }
    out
}
