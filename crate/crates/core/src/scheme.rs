//! End-to-end reduction of encoder → memory channel → decoder to a single
//! effective Gaussian channel acting on the signal mode.

use nalgebra::{Matrix2, Vector2};

use crate::channel::{build_channel_coefficients, MemoryChannelSpec};
use crate::error::{check_unit, Error, Result};
use crate::mode_algebra::ModeLinearMap;
use crate::splitter::{build_decoder, build_encoder, SplitterSpec};

/// Parameters of one scheme instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub n: usize,
    pub eta: f64,
    pub eps: f64,
    /// Mean thermal excitation of each environment mode.
    pub t: f64,
    pub flips: bool,
}

impl ChannelParams {
    pub fn new(n: usize, eta: f64, eps: f64, t: f64, flips: bool) -> Result<Self> {
        let p = Self {
            n,
            eta,
            eps,
            t,
            flips,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        SplitterSpec::new(self.n, self.flips)?;
        check_unit("eta", self.eta)?;
        check_unit("eps", self.eps)?;
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::param("T", self.t, "must be nonnegative"));
        }
        Ok(())
    }

    pub fn splitter(&self) -> Result<SplitterSpec> {
        SplitterSpec::new(self.n, self.flips)
    }

    pub fn channel(&self) -> Result<MemoryChannelSpec> {
        MemoryChannelSpec::new(self.n, self.eta, self.eps)
    }

    pub fn with_flips(self, flips: bool) -> Self {
        Self { flips, ..self }
    }
}

/// Decomposition of the output signal over every input mode:
///
/// `a_out = ζ_in a_in − Σ ζ_b,i b_in,i + Σ ζ_e,i e_i + ζ_m m₁`
///
/// `zeta_e` is stored with its alternating sign absorbed.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    pub zeta_in: f64,
    pub zeta_b: Vec<f64>,
    pub zeta_e: Vec<f64>,
    pub zeta_m: f64,
}

impl CoefficientSet {
    /// `ζ_in² + Σζ_b² + Σζ_e² + ζ_m²`, which is 1 for a unitary dilation.
    pub fn norm_sq(&self) -> f64 {
        self.zeta_in * self.zeta_in
            + self.zeta_b.iter().map(|z| z * z).sum::<f64>()
            + self.zeta_e.iter().map(|z| z * z).sum::<f64>()
            + self.zeta_m * self.zeta_m
    }

    pub fn signal_weight(&self) -> f64 {
        self.zeta_in * self.zeta_in
    }

    pub fn aux_weights(&self) -> Vec<f64> {
        self.zeta_b.iter().map(|z| z * z).collect()
    }

    pub fn env_weights(&self) -> Vec<f64> {
        self.zeta_e.iter().map(|z| z * z).collect()
    }

    pub fn memory_weight(&self) -> f64 {
        self.zeta_m * self.zeta_m
    }

    /// Largest difference in squared magnitudes against another set; signs
    /// of individual coefficients do not enter any covariance-level quantity.
    pub fn max_weight_diff(&self, other: &CoefficientSet) -> f64 {
        let sq = |c: &CoefficientSet| {
            let mut v = vec![c.signal_weight(), c.memory_weight()];
            v.extend(c.aux_weights());
            v.extend(c.env_weights());
            v
        };
        sq(self)
            .iter()
            .zip(sq(other))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest absolute difference against another set of the same size.
    pub fn max_abs_diff(&self, other: &CoefficientSet) -> f64 {
        let pairs = self
            .zeta_b
            .iter()
            .zip(&other.zeta_b)
            .chain(self.zeta_e.iter().zip(&other.zeta_e));
        pairs
            .map(|(a, b)| (a - b).abs())
            .fold((self.zeta_in - other.zeta_in).abs(), f64::max)
            .max((self.zeta_m - other.zeta_m).abs())
    }
}

/// Affine action `(d_C, X_C, Y_C)` of a single-mode Gaussian channel:
/// `d ↦ X_C d + d_C`, `V ↦ X_C V X_Cᵀ + Y_C`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelTriad {
    d: Vector2<f64>,
    x: Matrix2<f64>,
    y: Matrix2<f64>,
}

impl ChannelTriad {
    /// Validates symmetry of `Y_C` and complete positivity,
    /// `Y_C + (i/2)(J − X_C J X_Cᵀ) ⪰ 0`.
    pub fn new(d: Vector2<f64>, x: Matrix2<f64>, y: Matrix2<f64>) -> Result<Self> {
        if d.iter()
            .chain(x.iter())
            .chain(y.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite);
        }
        if (y[(0, 1)] - y[(1, 0)]).abs() > 1e-12 {
            return Err(Error::Unphysical(f64::NAN));
        }
        let triad = Self { d, x, y };
        let witness = triad.cp_witness();
        if witness < -1e-10 {
            return Err(Error::Unphysical(witness));
        }
        Ok(triad)
    }

    pub fn identity() -> Self {
        Self {
            d: Vector2::zeros(),
            x: Matrix2::identity(),
            y: Matrix2::zeros(),
        }
    }

    /// Phase-insensitive channel `(0, ζ·I, y·I)`.
    pub fn isotropic(zeta: f64, noise: f64) -> Result<Self> {
        Self::new(
            Vector2::zeros(),
            Matrix2::identity() * zeta,
            Matrix2::identity() * noise,
        )
    }

    pub fn d(&self) -> &Vector2<f64> {
        &self.d
    }

    pub fn x(&self) -> &Matrix2<f64> {
        &self.x
    }

    pub fn y(&self) -> &Matrix2<f64> {
        &self.y
    }

    /// `ζ` when `X_C = ζ·I`.
    pub fn scalar_transfer(&self) -> Option<f64> {
        let z = self.x[(0, 0)];
        let scalar = (self.x[(1, 1)] - z).abs() < 1e-14
            && self.x[(0, 1)].abs() < 1e-14
            && self.x[(1, 0)].abs() < 1e-14;
        scalar.then_some(z)
    }

    /// Least eigenvalue of the Hermitian matrix `Y_C + (i/2)(J − X_C J X_Cᵀ)`.
    pub fn cp_witness(&self) -> f64 {
        // X ω Xᵀ = det(X) ω for 2×2 X
        let k = 0.5 * (1.0 - self.x.determinant());
        let (a, b, c) = (self.y[(0, 0)], self.y[(0, 1)], self.y[(1, 1)]);
        let half_gap = (0.25 * (a - c) * (a - c) + b * b + k * k).sqrt();
        0.5 * (a + c) - half_gap
    }

    /// Least eigenvalue of `Y_C`.
    pub fn noise_min_eigenvalue(&self) -> f64 {
        let (a, b, c) = (self.y[(0, 0)], self.y[(0, 1)], self.y[(1, 1)]);
        0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt()
    }
}

/// Builders for the three stages of the scheme. The standard pipeline is
/// what every public entry point uses; the fields exist so verification can
/// be pointed at a modified network.
#[derive(Clone, Copy)]
pub struct Pipeline {
    pub encoder: fn(&SplitterSpec) -> ModeLinearMap,
    pub decoder: fn(&SplitterSpec) -> ModeLinearMap,
    pub channel: fn(&MemoryChannelSpec) -> ModeLinearMap,
}

impl Default for Pipeline {
    fn default() -> Self {
        Self {
            encoder: build_encoder,
            decoder: build_decoder,
            channel: build_channel_coefficients,
        }
    }
}

impl std::fmt::Debug for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Pipeline")
    }
}

impl Pipeline {
    /// Full end-to-end dilation, `N × (2N+1)`, outputs `(a_out, idlers…)`
    /// over inputs `(a_in, b_in,1…N−1, e_1…N, m₁)`.
    pub fn compose(&self, params: &ChannelParams) -> Result<ModeLinearMap> {
        params.validate()?;
        let split = params.splitter()?;
        let chan = params.channel()?;
        let encoder = (self.encoder)(&split);
        let passthrough = ModeLinearMap::identity(params.n + 1);
        let front = encoder.direct_sum(&passthrough);
        let channel = (self.channel)(&chan);
        let decoder = (self.decoder)(&split);
        decoder.compose(&channel.compose(&front)?)
    }

    pub fn reduce(&self, params: &ChannelParams) -> Result<CoefficientSet> {
        let full = self.compose(params)?;
        Ok(coefficients_from_row(&full.row(0), params.n))
    }

    pub fn effective_triad(&self, params: &ChannelParams) -> Result<ChannelTriad> {
        triad_from_coefficients(&self.reduce(params)?, params.t)
    }
}

fn coefficients_from_row(row: &[f64], n: usize) -> CoefficientSet {
    CoefficientSet {
        zeta_in: row[0],
        zeta_b: row[1..n].iter().map(|x| -x).collect(),
        zeta_e: row[n..2 * n].to_vec(),
        zeta_m: row[2 * n],
    }
}

/// Complete dilation of the scheme as a single mode map.
pub fn compose(params: &ChannelParams) -> Result<ModeLinearMap> {
    Pipeline::default().compose(params)
}

/// Reads the signal-output coefficients off the composed dilation.
pub fn reduce(params: &ChannelParams) -> Result<CoefficientSet> {
    Pipeline::default().reduce(params)
}

/// Evaluates the coefficient sums directly from the channel's `f`, `g`, `h`
/// arrays and the splitter amplitudes, with `σ_k = (−1)^{k+1}` when flips are
/// on and `σ_k = 1` otherwise:
///
/// ```text
/// ζ_in  = (1/N) Σ_k Σ_{j≤k} σ_j σ_k f_kj
/// ζ_b,i = (1/√N) [ t_i Σ_{k≥i} σ_i σ_k f_ki − r_i r_{i+1} Σ_{k>i} Σ_{i<j≤k} σ_j σ_k f_kj ]
/// ζ_e,i = −(1/√N) Σ_{k≥i} σ_k g_ki
/// ζ_m   = −(1/√N) Σ_k σ_k h_k
/// ```
pub fn closed_form_coefficients(params: &ChannelParams) -> Result<CoefficientSet> {
    params.validate()?;
    let n = params.n;
    let split = params.splitter()?;
    let chan = params.channel()?;
    let m = build_channel_coefficients(&chan);
    let f = |k: usize, j: usize| m.get(k - 1, chan.signal_col(j - 1));
    let g = |k: usize, j: usize| m.get(k - 1, chan.env_col(j - 1));
    let h = |k: usize| m.get(k - 1, chan.memory_col());
    let signs = split.flip_signs();
    let sigma = |k: usize| signs[k - 1];
    let root_n = (n as f64).sqrt();

    let mut zeta_in = 0.0;
    for k in 1..=n {
        for j in 1..=k {
            zeta_in += sigma(j) * sigma(k) * f(k, j);
        }
    }
    zeta_in /= n as f64;

    let zeta_b = (1..n)
        .map(|i| {
            let direct: f64 = (i..=n).map(|k| sigma(i) * sigma(k) * f(k, i)).sum();
            let mut crossed = 0.0;
            for k in i + 1..=n {
                for j in i + 1..=k {
                    crossed += sigma(j) * sigma(k) * f(k, j);
                }
            }
            let r = split.reflectivity(i) * split.reflectivity(i + 1);
            (split.transmissivity(i) * direct - r * crossed) / root_n
        })
        .collect();

    let zeta_e = (1..=n)
        .map(|i| -(i..=n).map(|k| sigma(k) * g(k, i)).sum::<f64>() / root_n)
        .collect();

    let zeta_m = -(1..=n).map(|k| sigma(k) * h(k)).sum::<f64>() / root_n;

    Ok(CoefficientSet {
        zeta_in,
        zeta_b,
        zeta_e,
        zeta_m,
    })
}

/// Effective triad for independent inputs: auxiliary and memory modes in
/// vacuum, environments thermal with mean excitation `t`, all zero-mean.
pub fn triad_from_coefficients(coeffs: &CoefficientSet, t: f64) -> Result<ChannelTriad> {
    let vac = 0.5;
    let noise = coeffs.aux_weights().iter().sum::<f64>() * vac
        + coeffs.env_weights().iter().sum::<f64>() * (t + 0.5)
        + coeffs.memory_weight() * vac;
    ChannelTriad::isotropic(coeffs.zeta_in, noise)
}

pub fn effective_triad(params: &ChannelParams) -> Result<ChannelTriad> {
    Pipeline::default().effective_triad(params)
}
