use serde::{Deserialize, Serialize};

use super::{eigen_decompose, MatrixError, SymMatrix};

/// Eigenvalues above `-NEGATIVE_SPECTRUM_TOL` are clamped to zero before
/// taking fractional powers.
pub const NEGATIVE_SPECTRUM_TOL: f64 = 1e-10;

pub fn lambda_max(a: &SymMatrix) -> Result<f64, MatrixError> {
    Ok(eigen_decompose(a)?.values[0])
}

pub fn lambda_min(a: &SymMatrix) -> Result<f64, MatrixError> {
    Ok(*eigen_decompose(a)?.values.last().expect("nonempty"))
}

/// `‖A‖ = sup_{‖x‖=1} |⟨Ax, x⟩| = max |λ_k(A)|`.
pub fn operator_norm(a: &SymMatrix) -> Result<f64, MatrixError> {
    let es = eigen_decompose(a)?;
    Ok(es.values.iter().fold(0.0, |m: f64, l| m.max(l.abs())))
}

/// `λ_min(A) ≥ −tol·max(1, ‖A‖_F)`.
pub fn is_psd(a: &SymMatrix, tol: f64) -> Result<bool, MatrixError> {
    Ok(lambda_min(a)? >= -tol * a.frobenius_norm().max(1.0))
}

/// `A ⪯ B` iff `λ_min(B − A) ≥ −tol`.
pub fn loewner_leq(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<bool, MatrixError> {
    a.check_same_dim(b)?;
    Ok(lambda_min(&(b - a))? >= -tol)
}

/// `Φ(A) = λ₁(A)·𝟏 ∈ ℝⁿ`.
pub fn lambda1_operator(a: &SymMatrix) -> Result<Vec<f64>, MatrixError> {
    Ok(vec![lambda_max(a)?; a.n()])
}

/// A linear map `Sym(n) → ℝᵐ`, `T(B)_j = Σ_{ik} (W_j)_{ik} B_{ik}`.
///
/// `T` is positive iff every `W_j` is positive semidefinite, and
/// `T(I) = 𝟏` iff every `W_j` has unit trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportFunctional {
    pub weights: Vec<SymMatrix>,
}

impl SupportFunctional {
    pub fn new(weights: Vec<SymMatrix>) -> Result<Self, MatrixError> {
        if let Some(first) = weights.first() {
            for w in &weights[1..] {
                first.check_same_dim(w)?;
            }
        }
        Ok(Self { weights })
    }

    pub fn input_dim(&self) -> Option<usize> {
        self.weights.first().map(SymMatrix::n)
    }

    pub fn output_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn apply(&self, b: &SymMatrix) -> Result<Vec<f64>, MatrixError> {
        self.weights
            .iter()
            .map(|w| {
                w.check_same_dim(b)?;
                Ok(w.frobenius_inner(b))
            })
            .collect()
    }
}

/// The rank-one subgradient of `Φ` at `A`: every `W_j = v vᵀ` with `v` a
/// unit top eigenvector. Then `T(A) = λ₁(A)·𝟏` and, by the Rayleigh bound,
/// `T(B) = ⟨Bv, v⟩·𝟏 ≤ λ₁(B)·𝟏` for every `B`.
///
/// At a repeated top eigenvalue the first eigenvector produced by the
/// Jacobi solver is used; any unit vector of the top eigenspace works.
pub fn lambda1_subgradient(a: &SymMatrix) -> Result<SupportFunctional, MatrixError> {
    let es = eigen_decompose(a)?;
    let w = SymMatrix::outer(&es.vectors[0]);
    Ok(SupportFunctional {
        weights: vec![w; a.n()],
    })
}

/// `T(A) = diag(A)`: `W_j = e_j e_jᵀ`.
pub fn diag_functional(n: usize) -> SupportFunctional {
    let weights = (0..n)
        .map(|j| SymMatrix::from_fn(n, |r, c| if r == j && c == j { 1.0 } else { 0.0 }))
        .collect();
    SupportFunctional { weights }
}

/// Membership in the support `∂Φ(0)`: each `W_j` is PSD
/// (`λ_min ≥ −tol·max(1, ‖W_j‖_F)`) with `|tr W_j − 1| ≤ tol`. Also requires
/// one weight per output coordinate, i.e. `m = n`.
pub fn is_in_lambda1_support(t: &SupportFunctional, tol: f64) -> Result<bool, MatrixError> {
    let Some(n) = t.input_dim() else {
        return Ok(false);
    };
    if t.output_dim() != n {
        return Ok(false);
    }
    for w in &t.weights {
        if (w.trace() - 1.0).abs() > tol || !is_psd(w, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Spectral power `A^p = Q diag(λ_i^p) Qᵀ` for PSD `A`.
///
/// Any `p > 0` is accepted; `t ↦ t^p` is matrix monotone only for
/// `p ∈ (0, 1]`, and larger exponents are useful for showing that.
pub fn matrix_power(a: &SymMatrix, p: f64) -> Result<SymMatrix, MatrixError> {
    if !(p.is_finite() && p > 0.0) {
        return Err(MatrixError::BadExponent(p));
    }
    let es = eigen_decompose(a)?;
    let min = *es.values.last().expect("nonempty");
    if min < -NEGATIVE_SPECTRUM_TOL {
        return Err(MatrixError::NegativeSpectrum(min));
    }
    if p == 1.0 {
        return Ok(a.clone());
    }
    Ok(es.reconstruct_with(|l| l.max(0.0).powf(p)))
}
