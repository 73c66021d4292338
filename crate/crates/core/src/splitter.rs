//! Encoder and decoder networks: an `N`-port splitter built from a cascade
//! of two-port beam splitters, with π phase flips on the even-indexed
//! channels.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mode_algebra::ModeLinearMap;

/// Configuration of one splitter network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitterSpec {
    n: usize,
    flips: bool,
}

impl SplitterSpec {
    /// `n` must be even and at least 2.
    pub fn new(n: usize, flips: bool) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::param("N", n as f64, "must be an even integer >= 2"));
        }
        Ok(Self { n, flips })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flips(&self) -> bool {
        self.flips
    }

    /// Reflectivity of stage `i` (1-based): `√(1/(N−i+1))`.
    pub fn reflectivity(&self, i: usize) -> f64 {
        (1.0 / (self.n + 1 - i) as f64).sqrt()
    }

    /// Transmissivity of stage `i` (1-based): `√((N−i)/(N−i+1))`.
    pub fn transmissivity(&self, i: usize) -> f64 {
        ((self.n - i) as f64 / (self.n + 1 - i) as f64).sqrt()
    }

    /// Per-channel phase factors: `(−1)^{i+1}` for channel `i` when flips are
    /// enabled, all `+1` otherwise.
    pub fn flip_signs(&self) -> Vec<f64> {
        (1..=self.n)
            .map(|i| if self.flips && i % 2 == 0 { -1.0 } else { 1.0 })
            .collect()
    }
}

/// Map from `(a_in, b_in,1, …, b_in,N−1)` to the channel inputs
/// `(d_in,1, …, d_in,N)`.
///
/// Stage `i` mixes the running signal `a_in,i−1` with the auxiliary vacuum
/// `b_in,i`:
///
/// ```text
/// d_in,i = t_i b_in,i − r_i a_in,i−1
/// a_in,i = t_i a_in,i−1 + r_i b_in,i
/// ```
///
/// The last stage has `r_N = 1`, `t_N = 0`, so no `N`-th auxiliary port is
/// needed. Flips multiply row `i` by `(−1)^{i+1}`.
pub fn build_encoder(spec: &SplitterSpec) -> ModeLinearMap {
    let n = spec.n();
    let mut rows = DMatrix::zeros(n, n);
    // running signal a_in,i−1 as a row over the inputs
    let mut signal = DVector::<f64>::zeros(n);
    signal[0] = 1.0;
    for i in 1..=n {
        let (r, t) = (spec.reflectivity(i), spec.transmissivity(i));
        let mut aux = DVector::<f64>::zeros(n);
        if i < n {
            aux[i] = 1.0;
        }
        let d = &aux * t - &signal * r;
        rows.set_row(i - 1, &d.transpose());
        signal = &signal * t + &aux * r;
    }
    for (i, s) in spec.flip_signs().into_iter().enumerate() {
        rows.row_mut(i).scale_mut(s);
    }
    ModeLinearMap::new(rows).expect("splitter coefficients are finite")
}

/// Map from the channel outputs `(d_out,1, …, d_out,N)` to
/// `(a_out, f_out,2, …, f_out,N)`.
///
/// Channel output `i` enters the inverse splitter with stage index
/// `j = N − i + 1`:
///
/// ```text
/// f_out,i = t_j d_out,i + r_j a_out,i−1
/// a_out,i = t_j a_out,i−1 − r_j d_out,i
/// ```
///
/// For `i = 1`, `t_N = 0` and the port `a_out,0` only feeds `f_out,1`, so that
/// output is dropped and the remaining `N − 1` idler outputs are relabelled
/// `1…N−1`. Flips substitute `d_out,k ↦ (−1)^{k+1} d_out,k` on the inputs.
pub fn build_decoder(spec: &SplitterSpec) -> ModeLinearMap {
    let n = spec.n();
    let mut rows = DMatrix::zeros(n, n);
    let mut signal = DVector::<f64>::zeros(n);
    for i in 1..=n {
        let j = n - i + 1;
        let (r, t) = (spec.reflectivity(j), spec.transmissivity(j));
        let mut d = DVector::<f64>::zeros(n);
        d[i - 1] = 1.0;
        let idler = &d * t + &signal * r;
        signal = &signal * t - &d * r;
        if i > 1 {
            rows.set_row(i - 1, &idler.transpose());
        }
    }
    rows.set_row(0, &signal.transpose());
    for (k, s) in spec.flip_signs().into_iter().enumerate() {
        rows.column_mut(k).scale_mut(s);
    }
    ModeLinearMap::new(rows).expect("splitter coefficients are finite")
}
