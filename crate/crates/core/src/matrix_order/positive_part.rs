use super::MatrixError;

fn check_nonnegative(a: &[Vec<f64>], cols: usize) -> Result<(), MatrixError> {
    for (i, row) in a.iter().enumerate() {
        if row.len() != cols {
            return Err(MatrixError::DimensionMismatch {
                left: cols,
                right: row.len(),
            });
        }
        if let Some(j) = row.iter().position(|v| !(*v >= 0.0)) {
            return Err(MatrixError::NegativeEntry { i, j, value: row[j] });
        }
    }
    Ok(())
}

/// `Φ(x) = A x⁺` for an entrywise nonnegative `m×n` matrix `A`.
pub fn positive_part_map(a: &[Vec<f64>], x: &[f64]) -> Result<Vec<f64>, MatrixError> {
    check_nonnegative(a, x.len())?;
    Ok(a.iter()
        .map(|row| row.iter().zip(x).map(|(aij, xj)| aij * xj.max(0.0)).sum())
        .collect())
}

/// A positive subgradient of `x ↦ A x⁺` at `x0`: `T = A·diag(s)` with
/// `s_i = 1` where `x0_i > 0` and `s_i = 0` otherwise (including `x0_i = 0`,
/// where any `s_i ∈ [0, 1]` would do).
pub fn positive_part_subgradient(
    a: &[Vec<f64>],
    x0: &[f64],
) -> Result<Vec<Vec<f64>>, MatrixError> {
    check_nonnegative(a, x0.len())?;
    Ok(a.iter()
        .map(|row| {
            row.iter()
                .zip(x0)
                .map(|(&aij, &xj)| if xj > 0.0 { aij } else { 0.0 })
                .collect()
        })
        .collect())
}
