//! Cyclic Jacobi eigensolver for real symmetric matrices.

use super::{MatrixError, SymMatrix};

pub const MAX_SWEEPS: usize = 100;
/// Convergence when the off-diagonal Frobenius norm drops below
/// `OFF_DIAGONAL_TOL · ‖A‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Eigenvalues in nonincreasing order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `Q diag(g(λ)) Qᵀ`
    pub fn reconstruct_with(&self, g: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.n();
        let mapped: Vec<f64> = self.values.iter().map(|&l| g(l)).collect();
        SymMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| mapped[k] * self.vectors[k][i] * self.vectors[k][j])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(|l| l)
    }

    /// `‖QᵀQ − I‖_F`
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.n();
        let mut sum = 0.0;
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n).map(|i| self.vectors[a][i] * self.vectors[b][i]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                sum += (dot - target).powi(2);
            }
        }
        sum.sqrt()
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic-by-row Jacobi with at most [`MAX_SWEEPS`] sweeps.
///
/// Eigenvalues are sorted nonincreasing (stable, so equal eigenvalues keep
/// the order in which the rotations produced them) and each eigenvector is
/// signed so that its first entry of magnitude above `1e-10` is positive.
/// The result is deterministic for a fixed input.
pub fn eigen_decompose(m: &SymMatrix) -> Result<EigenSystem, MatrixError> {
    let n = m.n();
    let mut a = m.data().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- A J
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                // A <- Jᵀ A
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                // V <- V J
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(MatrixError::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..n).map(|i| v[i * n + k]).collect();
            if let Some(first) = col.iter().find(|x| x.abs() > 1e-10) {
                if *first < 0.0 {
                    col.iter_mut().for_each(|x| *x = -*x);
                }
            }
            col
        })
        .collect();
    Ok(EigenSystem { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_order::random_symmetric;
    use crate::rng::trial_rng;
    use nalgebra::DMatrix;

    fn check_invariants(m: &SymMatrix, es: &EigenSystem) {
        let scale = m.frobenius_norm().max(1.0);
        assert!((&es.reconstruct() - m).frobenius_norm() <= 1e-10 * scale);
        assert!(es.orthogonality_error() <= 1e-10);
        assert!(es.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn identity() {
        let es = eigen_decompose(&SymMatrix::identity(4)).unwrap();
        assert_eq!(es.values, vec![1.0; 4]);
    }

    #[test]
    fn diagonal_input() {
        let es = eigen_decompose(&SymMatrix::diag(&[3.0, 1.0])).unwrap();
        assert_eq!(es.values, vec![3.0, 1.0]);
        assert_eq!(es.vectors, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let es = eigen_decompose(&SymMatrix::diag(&[1.0, 3.0])).unwrap();
        assert_eq!(es.values, vec![3.0, 1.0]);
        assert_eq!(es.vectors[0], vec![0.0, 1.0]);
    }

    #[test]
    fn two_by_two_by_hand() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let es = eigen_decompose(&m).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((es.values[0] - 3.0).abs() < 1e-14);
        assert!((es.values[1] - 1.0).abs() < 1e-14);
        for (got, want) in es.vectors[0].iter().zip([r, r]) {
            assert!((got - want).abs() < 1e-14);
        }
        for (got, want) in es.vectors[1].iter().zip([r, -r]) {
            assert!((got - want).abs() < 1e-14);
        }
        check_invariants(&m, &es);
    }

    #[test]
    fn zero_matrix() {
        let es = eigen_decompose(&SymMatrix::zeros(3)).unwrap();
        assert_eq!(es.values, vec![0.0; 3]);
        check_invariants(&SymMatrix::zeros(3), &es);
    }

    #[test]
    fn random_matrices_agree_with_nalgebra() {
        for trial in 0..50 {
            let mut rng = trial_rng(99, trial);
            let n = 1 + trial % 8;
            let m = random_symmetric(&mut rng, n);
            let es = eigen_decompose(&m).unwrap();
            check_invariants(&m, &es);
            let mut reference: Vec<f64> = DMatrix::from_row_slice(n, n, m.data())
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect();
            reference.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in es.values.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-10, "trial {trial}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn repeated_eigenvalues() {
        // Q diag(2, 2, -1) Qᵀ for a non-axis-aligned Q
        let v = [1.0 / 3f64.sqrt(); 3];
        let m = &(2.0 * &SymMatrix::identity(3)) - &(3.0 * &SymMatrix::outer(&v));
        let es = eigen_decompose(&m).unwrap();
        assert!((es.values[0] - 2.0).abs() < 1e-13);
        assert!((es.values[1] - 2.0).abs() < 1e-13);
        assert!((es.values[2] + 1.0).abs() < 1e-13);
        check_invariants(&m, &es);
    }

    #[test]
    fn deterministic() {
        let mut rng = trial_rng(5, 0);
        let m = random_symmetric(&mut rng, 6);
        assert_eq!(eigen_decompose(&m).unwrap(), eigen_decompose(&m).unwrap());
    }
}
