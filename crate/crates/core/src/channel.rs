//! Lossy bosonic memory channel: `N` signal uses, `N` local environment
//! modes and a single memory mode threading consecutive uses.
//!
//! Column order of every map built here is fixed: signals `d_in,1…N`, then
//! environments `e_1…N`, then the memory mode `m₁`.

use nalgebra::{DMatrix, Matrix2, Vector2};

use crate::error::{check_unit, Error, Result};
use crate::mode_algebra::ModeLinearMap;
use crate::scheme::ChannelTriad;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemoryChannelSpec {
    n: usize,
    eta: f64,
    eps: f64,
}

impl MemoryChannelSpec {
    pub fn new(n: usize, eta: f64, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("N", 0.0, "must be positive"));
        }
        check_unit("eta", eta)?;
        check_unit("eps", eps)?;
        Ok(Self { n, eta, eps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn signal_col(&self, j: usize) -> usize {
        j
    }

    pub fn env_col(&self, j: usize) -> usize {
        self.n + j
    }

    pub fn memory_col(&self) -> usize {
        2 * self.n
    }
}

/// Coefficients of the `k`-th channel output over signals, environments and
/// memory (`N × (2N+1)`), lower-triangular in the use index.
///
/// With `s = √(εη)`:
///
/// ```text
/// f_kk = √η,   f_kj = −√ε (1−η) s^{k−j−1}      (j < k)
/// g_kj = −√((1−ε)(1−η)) s^{k−j}                (j ≤ k)
/// h_k  = √(ε(1−η)) s^{k−1}
/// ```
///
/// `0⁰ = 1`, so the boundary values of `η` and `ε` are exact.
pub fn build_channel_coefficients(spec: &MemoryChannelSpec) -> ModeLinearMap {
    let MemoryChannelSpec { n, eta, eps } = *spec;
    let s = (eps * eta).sqrt();
    let cross = -eps.sqrt() * (1.0 - eta);
    let env = -((1.0 - eps) * (1.0 - eta)).sqrt();
    let mem = (eps * (1.0 - eta)).sqrt();

    let mut m = DMatrix::zeros(n, 2 * n + 1);
    for k in 0..n {
        m[(k, spec.signal_col(k))] = eta.sqrt();
        for j in 0..k {
            m[(k, spec.signal_col(j))] = cross * s.powi((k - j - 1) as i32);
        }
        for j in 0..=k {
            m[(k, spec.env_col(j))] = env * s.powi((k - j) as i32);
        }
        m[(k, spec.memory_col())] = mem * s.powi(k as i32);
    }
    ModeLinearMap::new(m).expect("channel coefficients are finite")
}

/// Zero-transmissivity limit: each use hands its signal to the next one
/// through the memory, `d_out,k = −√ε d_in,k−1 − √(1−ε) e_k + √ε δ_{k,1} m₁`.
pub fn dephasing_limit_coefficients(eps: f64, n: usize) -> Result<ModeLinearMap> {
    let spec = MemoryChannelSpec::new(n, 0.0, eps)?;
    let mut m = DMatrix::zeros(n, 2 * n + 1);
    for k in 0..n {
        if k > 0 {
            m[(k, spec.signal_col(k - 1))] = -eps.sqrt();
        }
        m[(k, spec.env_col(k))] = -(1.0 - eps).sqrt();
    }
    m[(0, spec.memory_col())] = eps.sqrt();
    ModeLinearMap::new(m)
}

/// Triad of a single bare channel use, environment thermal with mean
/// excitation `t`, memory in vacuum.
pub fn single_use_triad(eta: f64, eps: f64, t: f64) -> Result<ChannelTriad> {
    check_unit("eta", eta)?;
    check_unit("eps", eps)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("T", t, "must be nonnegative"));
    }
    let noise = (1.0 - eps) * (1.0 - eta) * (t + 0.5) + eps * (1.0 - eta) * 0.5;
    ChannelTriad::new(
        Vector2::zeros(),
        Matrix2::identity() * eta.sqrt(),
        Matrix2::identity() * noise,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

    #[test]
    fn rejects_out_of_range() {
        assert!(MemoryChannelSpec::new(2, 1.1, 0.0).is_err());
        assert!(MemoryChannelSpec::new(2, 0.5, -0.1).is_err());
        assert!(MemoryChannelSpec::new(2, f64::NAN, 0.1).is_err());
        assert!(MemoryChannelSpec::new(0, 0.5, 0.1).is_err());
        assert!(single_use_triad(0.5, 0.5, -1.0).is_err());
    }

    #[test]
    fn lossless_limit() {
        for eps in GRID {
            let m = build_channel_coefficients(&MemoryChannelSpec::new(3, 1.0, eps).unwrap());
            for k in 0..3 {
                for c in 0..7 {
                    let expect = if c == k { 1.0 } else { 0.0 };
                    assert_eq!(m.get(k, c), expect);
                }
            }
        }
    }

    #[test]
    fn memoryless_limit() {
        let m = build_channel_coefficients(&MemoryChannelSpec::new(2, 0.6, 0.0).unwrap());
        let (f, g) = (0.6f64.sqrt(), -(0.4f64.sqrt()));
        let expect = [[f, 0.0, g, 0.0, 0.0], [0.0, f, 0.0, g, 0.0]];
        for k in 0..2 {
            for c in 0..5 {
                assert!((m.get(k, c) - expect[k][c]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn two_use_values() {
        let m = build_channel_coefficients(&MemoryChannelSpec::new(2, 0.6, 0.3).unwrap());
        let close = |a: f64, b: f64| (a - b).abs() < 5e-7;
        assert!(close(m.get(0, 0), 0.774597) && close(m.get(1, 1), 0.774597));
        assert!(close(m.get(1, 0), -0.219089));
        assert_eq!(m.get(0, 1), 0.0);
        assert!(close(m.get(0, 2), -0.529150) && close(m.get(1, 3), -0.529150));
        assert!(close(m.get(1, 2), -0.224499));
        assert_eq!(m.get(0, 3), 0.0);
        assert!(close(m.get(0, 4), 0.346410));
        assert!(close(m.get(1, 4), 0.146969));
        assert!(m.is_orthonormal(1e-12));
    }

    #[test]
    fn orthonormal_and_causal_on_grid() {
        for n in [1, 2, 3, 4, 6, 8] {
            for eta in GRID {
                for eps in GRID {
                    let spec = MemoryChannelSpec::new(n, eta, eps).unwrap();
                    let m = build_channel_coefficients(&spec);
                    assert!(m.is_orthonormal(1e-12), "n={n} eta={eta} eps={eps}");
                    for k in 0..n {
                        for j in k + 1..n {
                            assert_eq!(m.get(k, spec.signal_col(j)), 0.0);
                            assert_eq!(m.get(k, spec.env_col(j)), 0.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coefficients_continuous() {
        let h = 1e-7;
        for n in [2, 4] {
            for eta in [0.125, 0.375, 0.625, 0.875] {
                for eps in [0.125, 0.375, 0.625, 0.875] {
                    let base =
                        build_channel_coefficients(&MemoryChannelSpec::new(n, eta, eps).unwrap());
                    let de = build_channel_coefficients(
                        &MemoryChannelSpec::new(n, eta + h, eps).unwrap(),
                    );
                    let dp = build_channel_coefficients(
                        &MemoryChannelSpec::new(n, eta, eps + h).unwrap(),
                    );
                    let jump_eta = (de.entries() - base.entries()).amax();
                    let jump_eps = (dp.entries() - base.entries()).amax();
                    assert!(jump_eta < 1e-5 && jump_eps < 1e-5);
                }
            }
        }
    }

    #[test]
    fn dephasing_limit_matches_zero_transmissivity() {
        for n in [1, 2, 4, 6] {
            for eps in GRID.iter().copied().chain([0.3]) {
                let d = dephasing_limit_coefficients(eps, n).unwrap();
                let full =
                    build_channel_coefficients(&MemoryChannelSpec::new(n, 0.0, eps).unwrap());
                assert_eq!(d.entries(), full.entries(), "n={n} eps={eps}");
            }
        }
    }

    #[test]
    fn dephasing_extremes() {
        let n = 4;
        let perfect = dephasing_limit_coefficients(1.0, n).unwrap();
        for k in 0..n {
            for c in 0..2 * n + 1 {
                let expect = if k > 0 && c == k - 1 {
                    -1.0
                } else if k == 0 && c == 2 * n {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(perfect.get(k, c), expect);
            }
        }
        let swap = dephasing_limit_coefficients(0.0, n).unwrap();
        for k in 0..n {
            for c in 0..2 * n + 1 {
                let expect = if c == n + k { -1.0 } else { 0.0 };
                assert_eq!(swap.get(k, c), expect);
            }
        }
        assert!(dephasing_limit_coefficients(1.5, 2).is_err());
    }

    #[test]
    fn single_use_triads() {
        let id = single_use_triad(1.0, 0.4, 2.0).unwrap();
        assert_eq!(id.x(), &Matrix2::identity());
        assert_eq!(id.y(), &Matrix2::zeros());
        let t = single_use_triad(0.6, 0.3, 3.0).unwrap();
        assert!((t.y()[(0, 0)] - 1.04).abs() < 1e-12);
        assert!((t.x()[(0, 0)] - 0.6f64.sqrt()).abs() < 1e-15);
        let swap = single_use_triad(0.0, 0.0, 3.0).unwrap();
        assert_eq!(swap.x(), &Matrix2::zeros());
        assert!((swap.y()[(1, 1)] - 3.5).abs() < 1e-15);
    }
}
