//! Gaussian states in the quadrature picture (vacuum covariance `I/2`) and
//! their propagation through single-mode channel triads.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::mode_algebra::symplectic_form;
use crate::scheme::ChannelTriad;

/// Tolerance below `1/2` accepted for the least symplectic eigenvalue.
pub const PHYSICALITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Checks dimensions, symmetry and the uncertainty principle.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let state = Self::new_unchecked(mean, cov)?;
        let nu = state.least_symplectic_eigenvalue();
        if nu < 0.5 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(nu));
        }
        Ok(state)
    }

    /// Checks shapes and symmetry only.
    pub(crate) fn new_unchecked(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let len = mean.len();
        if len == 0 || !len.is_multiple_of(2) {
            return Err(Error::dims("nonzero even mean length", len));
        }
        if cov.shape() != (len, len) {
            return Err(Error::dims(
                format!("{len}x{len} covariance"),
                format!("{:?}", cov.shape()),
            ));
        }
        if mean.iter().chain(cov.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if (&cov - cov.transpose()).amax() > 1e-12 {
            return Err(Error::Unphysical(f64::NAN));
        }
        Ok(Self { mean, cov })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * modes),
            cov: DMatrix::identity(2 * modes, 2 * modes) * 0.5,
        }
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Covariance block between modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    pub fn mode_mean(&self, i: usize) -> Vector2<f64> {
        self.mean.fixed_rows::<2>(2 * i).into_owned()
    }

    /// Sorted symplectic eigenvalues (one per mode).
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.cov)
    }

    pub fn least_symplectic_eigenvalue(&self) -> f64 {
        self.symplectic_eigenvalues()[0]
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.symplectic_eigenvalues()
            .iter()
            .all(|nu| (nu - 0.5).abs() <= tol)
    }

    /// Reduced state of the listed modes, in the given order.
    pub fn reduce(&self, modes: &[usize]) -> Result<GaussianState> {
        if let Some(&bad) = modes.iter().find(|&&m| m >= self.modes()) {
            return Err(Error::dims(format!("mode index < {}", self.modes()), bad));
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cov[(idx[r], idx[c])]);
        Ok(Self { mean, cov })
    }

    /// Product state `self ⊗ other`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (a, b) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(a + b);
        mean.rows_mut(0, a).copy_from(&self.mean);
        mean.rows_mut(a, b).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(a + b, a + b);
        cov.view_mut((0, 0), (a, a)).copy_from(&self.cov);
        cov.view_mut((a, a), (b, b)).copy_from(&other.cov);
        GaussianState { mean, cov }
    }
}

/// Symplectic eigenvalues of a `2n × 2n` covariance: moduli of the spectrum
/// of `iJV`, each appearing twice, returned once per mode in ascending order.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Vec<f64> {
    let modes = cov.nrows() / 2;
    let jv = symplectic_form(modes) * cov;
    let mut moduli: Vec<f64> = jv.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    moduli
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect()
}

/// Coherent state `|α⟩`: mean `√2 (Re α, Im α)`, covariance `I/2`.
pub fn coherent_state(alpha_re: f64, alpha_im: f64) -> GaussianState {
    let s = std::f64::consts::SQRT_2;
    GaussianState {
        mean: DVector::from_vec(vec![s * alpha_re, s * alpha_im]),
        cov: DMatrix::identity(2, 2) * 0.5,
    }
}

/// Two-mode squeezed vacuum with `μ = tanh r`.
pub fn tmsv_state(mu: f64) -> Result<GaussianState> {
    if !(mu.is_finite() && (0.0..1.0).contains(&mu)) {
        return Err(Error::param("mu", mu, "must lie in [0, 1)"));
    }
    let denom = 1.0 - mu * mu;
    let ch = 0.5 * (1.0 + mu * mu) / denom;
    let sh = 0.5 * 2.0 * mu / denom;
    #[rustfmt::skip]
    let cov = DMatrix::from_row_slice(4, 4, &[
        ch,  0.0, sh,  0.0,
        0.0, ch,  0.0, -sh,
        sh,  0.0, ch,  0.0,
        0.0, -sh, 0.0, ch,
    ]);
    Ok(GaussianState {
        mean: DVector::zeros(4),
        cov,
    })
}

pub fn thermal_state(t: f64, modes: usize) -> Result<GaussianState> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("T", t, "must be nonnegative"));
    }
    if modes == 0 {
        return Err(Error::dims("at least one mode", 0));
    }
    Ok(GaussianState {
        mean: DVector::zeros(2 * modes),
        cov: DMatrix::identity(2 * modes, 2 * modes) * (t + 0.5),
    })
}

/// `d ↦ X_C d + d_C`, `V ↦ X_C V X_Cᵀ + Y_C` on a single-mode state.
pub fn apply_triad(state: &GaussianState, triad: &ChannelTriad) -> Result<GaussianState> {
    if state.modes() != 1 {
        return Err(Error::dims(
            "1-mode state",
            format!("{}-mode state", state.modes()),
        ));
    }
    let mean = triad.x() * state.mode_mean(0) + triad.d();
    let cov = triad.x() * state.block(0, 0) * triad.x().transpose() + triad.y();
    GaussianState::new(
        DVector::from_column_slice(mean.as_slice()),
        DMatrix::from_column_slice(2, 2, cov.as_slice()),
    )
}

/// Sends the first mode of a two-mode state through a triad with
/// `X_C = ζ·I`; the second mode is untouched. Blocks transform as
/// `A′ = ζ²A + Y_C`, `B′ = B`, `C′ = ζC`.
pub fn apply_triad_to_half(state: &GaussianState, triad: &ChannelTriad) -> Result<GaussianState> {
    if state.modes() != 2 {
        return Err(Error::dims(
            "2-mode state",
            format!("{}-mode state", state.modes()),
        ));
    }
    let zeta = triad.scalar_transfer().ok_or(Error::NonScalarTransfer)?;
    let a = state.block(0, 0) * (zeta * zeta) + triad.y();
    let c = state.block(0, 1) * zeta;
    let mut cov = state.cov.clone();
    cov.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    cov.fixed_view_mut::<2, 2>(0, 2).copy_from(&c);
    cov.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
    let mut mean = state.mean.clone();
    let ma = state.mode_mean(0) * zeta + triad.d();
    mean.fixed_rows_mut::<2>(0).copy_from(&ma);
    GaussianState::new(mean, cov)
}
