//! Symmetric matrices under the Löwner order.
//!
//! `A ⪯ B` iff `B − A` is positive semidefinite. This module carries the
//! largest-eigenvalue operator `Φ(A) = λ₁(A)·𝟏`, its subgradients (linear
//! maps acting by trace pairing), spectral powers `A^p`, and randomized
//! checks of the classical spectral inequalities.

mod eigen;
mod positive_part;
mod spectral;
mod suites;

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eigen::{eigen_decompose, EigenSystem, MAX_SWEEPS};
pub use positive_part::{positive_part_map, positive_part_subgradient};
pub use spectral::{
    diag_functional, is_in_lambda1_support, is_psd, lambda1_operator, lambda1_subgradient,
    lambda_max, lambda_min, loewner_leq, matrix_power, operator_norm, SupportFunctional,
};
pub use suites::{
    check_lambda1_subgradients, check_loewner_heinz, check_weyl_properties, random_psd,
    random_symmetric, MatrixSuiteConfig,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("row {row} has {got} entries, expected {expected}")]
    NotSquare { row: usize, expected: usize, got: usize },
    #[error("matrix must have at least one row")]
    Empty,
    #[error("entries ({i},{j}) and ({j},{i}) differ by {gap:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },
    #[error("non-finite entry at ({0},{1})")]
    NonFinite(usize, usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
    #[error("smallest eigenvalue {0:e} is negative beyond tolerance")]
    NegativeSpectrum(f64),
    #[error("exponent must be positive and finite, got {0}")]
    BadExponent(f64),
    #[error("entry ({i},{j}) = {value} is negative")]
    NegativeEntry { i: usize, j: usize, value: f64 },
}

/// Relative symmetry tolerance, scaled by `max(1, ‖A‖_F)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A real symmetric matrix, stored row-major and exactly symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Accepts rows that are symmetric up to `1e-12·max(1, ‖A‖_F)` and
    /// stores the exact symmetric part.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::NotSquare {
                    row,
                    expected: n,
                    got: r.len(),
                });
            }
            if let Some(j) = r.iter().position(|v| !v.is_finite()) {
                return Err(MatrixError::NonFinite(row, j));
            }
        }
        let norm = rows.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        let tol = SYMMETRY_TOL * norm.max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = (rows[i][j] - rows[j][i]).abs();
                if gap > tol {
                    return Err(MatrixError::NotSymmetric { i, j, gap });
                }
            }
        }
        Ok(Self::from_fn(n, |i, j| 0.5 * (rows[i][j] + rows[j][i])))
    }

    /// Builds from the upper triangle `f(i, j)`, `i <= j`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1.0; n])
    }

    pub fn diag(d: &[f64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    /// `v vᵀ`
    pub fn outer(v: &[f64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `Σ_{ik} a_ik b_ik = tr(A B)`.
    pub fn frobenius_inner(&self, other: &SymMatrix) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// `⟨A x, x⟩`
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| x[i] * (0..self.n).map(|j| self.get(i, j) * x[j]).sum::<f64>())
            .sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub(crate) fn data(&self) -> &[f64] {
        &self.data
    }

    fn zip(&self, other: &SymMatrix, op: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub(crate) fn check_same_dim(&self, other: &SymMatrix) -> Result<(), MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;

    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;

    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul<&SymMatrix> for f64 {
    type Output = SymMatrix;

    fn mul(self, rhs: &SymMatrix) -> SymMatrix {
        rhs.scale(self)
    }
}

/// Wire format `{"n": 2, "rows": [[..], [..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl TryFrom<MatrixFile> for SymMatrix {
    type Error = MatrixError;

    fn try_from(file: MatrixFile) -> Result<Self, Self::Error> {
        if file.rows.len() != file.n {
            return Err(MatrixError::DimensionMismatch {
                left: file.n,
                right: file.rows.len(),
            });
        }
        SymMatrix::from_rows(&file.rows)
    }
}

impl From<SymMatrix> for MatrixFile {
    fn from(m: SymMatrix) -> Self {
        MatrixFile {
            n: m.n,
            rows: m.rows(),
        }
    }
}
