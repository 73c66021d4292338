//! Linear maps on bosonic mode operators and the quadrature layout used
//! throughout the crate.
//!
//! Every map here is real: passive beam splitters with real amplitudes and
//! ±1 phase flips never produce complex coefficients. Quadrature vectors are
//! mode-interleaved, `(q₁, p₁, q₂, p₂, …)`, and the vacuum covariance is `I/2`.

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};

/// Real coefficient matrix sending a vector of input mode operators to a
/// vector of output mode operators. Row `k` holds the expansion of output
/// mode `k` over the inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeLinearMap {
    entries: DMatrix<f64>,
}

impl ModeLinearMap {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n, n),
        }
    }

    /// Builds a map from row-major data.
    pub fn from_rows(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims(rows * cols, data.len()));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, data))
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    pub fn row(&self, row: usize) -> Vec<f64> {
        self.entries.row(row).iter().copied().collect()
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &ModeLinearMap) -> Result<ModeLinearMap> {
        if self.cols() != inner.rows() {
            return Err(Error::dims(
                format!("{} inner outputs", self.cols()),
                inner.rows(),
            ));
        }
        Ok(ModeLinearMap {
            entries: &self.entries * &inner.entries,
        })
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &ModeLinearMap) -> ModeLinearMap {
        let (r1, c1) = self.entries.shape();
        let (r2, c2) = other.entries.shape();
        let mut out = DMatrix::zeros(r1 + r2, c1 + c2);
        out.view_mut((0, 0), (r1, c1)).copy_from(&self.entries);
        out.view_mut((r1, c1), (r2, c2)).copy_from(&other.entries);
        ModeLinearMap { entries: out }
    }

    /// Largest entrywise deviation of `M·Mᵀ` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = &self.entries * self.entries.transpose();
        let id = DMatrix::<f64>::identity(gram.nrows(), gram.ncols());
        (gram - id).amax()
    }

    /// True when the rows are orthonormal within `tol`, i.e. the map is a
    /// complete passive dilation.
    pub fn is_orthonormal(&self, tol: f64) -> bool {
        self.orthonormality_defect() <= tol
    }
}

/// Quadrature ordering for `modes` modes: interleaved `(q₁, p₁, q₂, p₂, …)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureLayout {
    modes: usize,
}

impl QuadratureLayout {
    pub fn new(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::dims("at least one mode", 0));
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        2 * self.modes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn q_index(&self, mode: usize) -> usize {
        2 * mode
    }

    pub fn p_index(&self, mode: usize) -> usize {
        2 * mode + 1
    }

    pub fn symplectic_form(&self) -> DMatrix<f64> {
        symplectic_form(self.modes)
    }

    /// Permutation `P` with `P·x_interleaved = x_block`, where the block
    /// layout is `(q₁…q_n, p₁…p_n)`.
    pub fn to_block_order(&self) -> DMatrix<f64> {
        let n = self.modes;
        let mut perm = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            perm[(k, 2 * k)] = 1.0;
            perm[(n + k, 2 * k + 1)] = 1.0;
        }
        perm
    }
}

/// Single-mode symplectic block `ω = [[0, 1], [−1, 0]]`.
pub fn omega() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// `J = ω ⊕ … ⊕ ω` over `modes` modes in the interleaved layout.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

/// Lifts a real mode map to quadrature space: each coefficient `c` becomes
/// the block `c·I₂`.
pub fn lift_to_quadratures(map: &ModeLinearMap) -> DMatrix<f64> {
    map.entries.kronecker(&DMatrix::<f64>::identity(2, 2))
}
