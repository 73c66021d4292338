//! Figures of merit: coherent-state transmission fidelity and the
//! partial-transposition entanglement test for two-mode states.

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::gaussian::{
    apply_triad, apply_triad_to_half, coherent_state, symplectic_eigenvalues, tmsv_state,
    GaussianState, PHYSICALITY_TOL,
};
use crate::scheme::{effective_triad, ChannelParams, ChannelTriad};

/// Purity tolerance for fidelity inputs.
pub const PURITY_TOL: f64 = 1e-9;

/// Agreement required between the two routes to `d̃_−`.
pub const ROUTE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct FidelityResult {
    pub value: f64,
    pub params: Option<ChannelParams>,
    /// Coherent amplitude `(Re α, Im α)` when the input was a coherent state.
    pub alpha: Option<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementResult {
    /// Least symplectic eigenvalue of the partially transposed covariance.
    pub d_minus: f64,
    /// Same quantity from the determinant closed form.
    pub d_minus_closed_form: f64,
    pub separable: bool,
}

/// Overlap `Tr[ρ_in ρ_out]` between a pure single-mode Gaussian input and its
/// image under `triad`:
///
/// `F = det(V_in + V_out)^{−1/2} exp(−½ δᵀ (V_in + V_out)⁻¹ δ)`,
/// `δ = (X_C − I) d_in + d_C`.
pub fn gaussian_fidelity(input: &GaussianState, triad: &ChannelTriad) -> Result<FidelityResult> {
    if input.modes() != 1 {
        return Err(Error::dims(
            "1-mode state",
            format!("{}-mode state", input.modes()),
        ));
    }
    let nu = input.least_symplectic_eigenvalue();
    if (nu - 0.5).abs() > PURITY_TOL {
        return Err(Error::NotPure(nu));
    }
    let output = apply_triad(input, triad)?;
    let sum = input.block(0, 0) + output.block(0, 0);
    let inv = sum.try_inverse().ok_or(Error::Singular)?;
    let det = sum.determinant();
    if !(det > 0.0) {
        return Err(Error::Singular);
    }
    let delta = (triad.x() - Matrix2::identity()) * input.mode_mean(0) + triad.d();
    let exponent = -0.5 * (delta.transpose() * inv * delta)[(0, 0)];
    Ok(FidelityResult {
        value: exponent.exp() / det.sqrt(),
        params: None,
        alpha: None,
    })
}

/// Fidelity of a real coherent state with `|α|² = alpha2` sent through the
/// full scheme.
pub fn coherent_fidelity(params: &ChannelParams, alpha2: f64) -> Result<FidelityResult> {
    if !(alpha2.is_finite() && alpha2 >= 0.0) {
        return Err(Error::param("alpha2", alpha2, "must be nonnegative"));
    }
    let alpha = alpha2.sqrt();
    let triad = effective_triad(params)?;
    let mut result = gaussian_fidelity(&coherent_state(alpha, 0.0), &triad)?;
    result.params = Some(*params);
    result.alpha = Some((alpha, 0.0));
    Ok(result)
}

/// Partial transposition of the second mode: `p_B ↦ −p_B`.
pub fn partial_transpose(cov: &DMatrix<f64>) -> DMatrix<f64> {
    let reflect = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, 1.0, -1.0]));
    &reflect * cov * &reflect
}

/// Least symplectic eigenvalue of the partially transposed covariance and
/// the resulting separability verdict (`d̃_− > 1/2`).
///
/// Computed twice: from the spectrum of `iJṼ`, and from
/// `d̃_−² = (Δ̃ − √(Δ̃² − 4 det V)) / 2` with `Δ̃ = det A + det B − 2 det C`.
pub fn ppt_least_eigenvalue(state: &GaussianState) -> Result<EntanglementResult> {
    if state.modes() != 2 {
        return Err(Error::dims(
            "2-mode state",
            format!("{}-mode state", state.modes()),
        ));
    }
    let nu = state.least_symplectic_eigenvalue();
    if nu < 0.5 - PHYSICALITY_TOL {
        return Err(Error::Unphysical(nu));
    }
    let spectral = symplectic_eigenvalues(&partial_transpose(state.cov()))[0];

    let tilde_delta = state.block(0, 0).determinant() + state.block(1, 1).determinant()
        - 2.0 * state.block(0, 1).determinant();
    let disc = (tilde_delta * tilde_delta - 4.0 * state.cov().determinant()).max(0.0);
    let closed_form = (0.5 * (tilde_delta - disc.sqrt())).max(0.0).sqrt();

    if (spectral - closed_form).abs() > ROUTE_TOL * spectral.max(1.0) {
        return Err(Error::RouteMismatch {
            spectral,
            closed_form,
        });
    }
    Ok(EntanglementResult {
        d_minus: spectral,
        d_minus_closed_form: closed_form,
        separable: spectral > 0.5,
    })
}

/// Sends one half of a two-mode squeezed vacuum through the scheme and
/// tests what is left of the entanglement.
pub fn entanglement_survival(params: &ChannelParams, mu: f64) -> Result<EntanglementResult> {
    let pair = tmsv_state(mu)?;
    let triad = effective_triad(params)?;
    ppt_least_eigenvalue(&apply_triad_to_half(&pair, &triad)?)
}
