//! Randomized checks of the spectral inequalities behind the λ₁ operator
//! and matrix monotone powers.

use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::json;

use super::{
    eigen_decompose, is_in_lambda1_support, lambda1_operator, lambda1_subgradient, lambda_min,
    matrix_power, operator_norm, MatrixError, SymMatrix,
};
use crate::report::{PropertyReport, PropertyTracker};
use crate::rng::{trial_rng, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixSuiteConfig {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for MatrixSuiteConfig {
    fn default() -> Self {
        Self {
            dim: 6,
            trials: 200,
            seed: DEFAULT_SEED,
            tolerance: 1e-9,
        }
    }
}

/// Symmetric matrix with independent standard normal upper triangle.
pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> SymMatrix {
    let upper: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    SymMatrix::from_fn(n, |i, j| upper[i * n + j])
}

/// `G Gᵀ / n` with `G` an `n × rank` standard normal matrix.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> SymMatrix {
    let g: Vec<f64> = (0..n * rank).map(|_| rng.sample(StandardNormal)).collect();
    SymMatrix::from_fn(n, |i, j| {
        (0..rank).map(|k| g[i * rank + k] * g[j * rank + k]).sum::<f64>() / n as f64
    })
}

fn max_component(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn rows(m: &SymMatrix) -> serde_json::Value {
    json!(m.rows())
}

/// Weyl monotonicity (`A ⪯ B ⟹ λ_i(A) ≤ λ_i(B)` for all `i`, with
/// `B = A + PSD`) and the perturbation bound
/// `max_k |λ_k(A) − λ_k(B)| ≤ ‖A − B‖` on independent pairs.
pub fn check_weyl_properties(cfg: &MatrixSuiteConfig) -> Result<PropertyReport, MatrixError> {
    let n = cfg.dim;
    let mut t = PropertyTracker::new(cfg.tolerance, &["weyl_monotonicity", "weyl_perturbation"]);
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let a = random_symmetric(&mut rng, n);
        let rank = rng.random_range(1..=n);
        let b = &a + &random_psd(&mut rng, n, rank);
        let (la, lb) = (eigen_decompose(&a)?.values, eigen_decompose(&b)?.values);
        let v = max_component(la.iter().zip(&lb).map(|(x, y)| x - y));
        t.record("weyl_monotonicity", v, || json!({"trial": trial, "a": rows(&a), "b": rows(&b)}));

        let scale = rng.random_range(0.0..2.0);
        let c = &a + &random_symmetric(&mut rng, n).scale(scale);
        let lc = eigen_decompose(&c)?.values;
        let gap = max_component(la.iter().zip(&lc).map(|(x, y)| (x - y).abs()));
        let v = gap - operator_norm(&(&a - &c))?;
        t.record("weyl_perturbation", v, || json!({"trial": trial, "a": rows(&a), "b": rows(&c)}));
    }
    Ok(t.finish())
}

/// `A ⪯ B ⟹ A^p ⪯ B^p` on random positive definite `A` and `B = A + PSD`.
/// Violation is `−λ_min(B^p − A^p)`.
pub fn check_loewner_heinz(cfg: &MatrixSuiteConfig, p: f64) -> Result<PropertyReport, MatrixError> {
    let n = cfg.dim;
    let mut t = PropertyTracker::new(cfg.tolerance, &["loewner_heinz"]);
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        // keep A away from singular so t^p is evaluated where it is smooth
        let a = &random_psd(&mut rng, n, n) + &SymMatrix::identity(n).scale(1e-3);
        let rank = rng.random_range(1..=n);
        let b = &a + &random_psd(&mut rng, n, rank);
        let v = -lambda_min(&(&matrix_power(&b, p)? - &matrix_power(&a, p)?))?;
        t.record("loewner_heinz", v, || {
            json!({"trial": trial, "p": p, "a": rows(&a), "b": rows(&b)})
        });
    }
    Ok(t.finish())
}

pub const LAMBDA1_PROPERTIES: [&str; 7] = [
    "subgradient_sandwich",
    "subadditivity",
    "positive_homogeneity",
    "isotonicity",
    "tangency",
    "domination",
    "support_membership",
];

/// Properties of `Φ(A) = λ₁(A)·𝟏` and its rank-one subgradients on random
/// pairs: the two-sided subgradient inequality
/// `T(B − A) ≤ Φ(B) − Φ(A) ≤ S(B − A)`, sublinearity, isotonicity,
/// `T(A) = Φ(A)`, `T(B) ≤ Φ(B)` and support membership of `T`.
pub fn check_lambda1_subgradients(cfg: &MatrixSuiteConfig) -> Result<PropertyReport, MatrixError> {
    let n = cfg.dim;
    let mut t = PropertyTracker::new(cfg.tolerance, &LAMBDA1_PROPERTIES);
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let a = random_symmetric(&mut rng, n);
        let b = random_symmetric(&mut rng, n).scale(rng.random_range(0.1..3.0));
        let witness = || json!({"trial": trial, "a": rows(&a), "b": rows(&b)});
        let (phi_a, phi_b) = (lambda1_operator(&a)?, lambda1_operator(&b)?);
        let (ta, sb) = (lambda1_subgradient(&a)?, lambda1_subgradient(&b)?);

        let diff = &b - &a;
        let (lower, upper) = (ta.apply(&diff)?, sb.apply(&diff)?);
        let v = max_component((0..n).flat_map(|j| {
            let delta = phi_b[j] - phi_a[j];
            [lower[j] - delta, delta - upper[j]]
        }));
        t.record("subgradient_sandwich", v, witness);

        let phi_sum = lambda1_operator(&(&a + &b))?;
        let v = max_component((0..n).map(|j| phi_sum[j] - phi_a[j] - phi_b[j]));
        t.record("subadditivity", v, witness);

        let c = rng.random_range(0.0..3.0);
        let phi_scaled = lambda1_operator(&a.scale(c))?;
        let v = max_component((0..n).map(|j| (phi_scaled[j] - c * phi_a[j]).abs()));
        t.record("positive_homogeneity", v, witness);

        let rank = rng.random_range(1..=n);
        let above = &a + &random_psd(&mut rng, n, rank);
        let phi_above = lambda1_operator(&above)?;
        let v = max_component((0..n).map(|j| phi_a[j] - phi_above[j]));
        t.record("isotonicity", v, witness);

        let ta_a = ta.apply(&a)?;
        let v = max_component((0..n).map(|j| (ta_a[j] - phi_a[j]).abs()));
        t.record("tangency", v, witness);

        let ta_b = ta.apply(&b)?;
        let v = max_component((0..n).map(|j| ta_b[j] - phi_b[j]));
        t.record("domination", v, witness);

        let v = if is_in_lambda1_support(&ta, cfg.tolerance)? {
            0.0
        } else {
            f64::INFINITY
        };
        t.record("support_membership", v, witness);
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_order::loewner_leq;

    fn cfg(dim: usize, trials: usize) -> MatrixSuiteConfig {
        MatrixSuiteConfig {
            dim,
            trials,
            ..Default::default()
        }
    }

    #[test]
    fn weyl_equality_cases() {
        let a = SymMatrix::diag(&[1.0, 0.0]);
        let b = SymMatrix::zeros(2);
        let la = eigen_decompose(&a).unwrap().values;
        let lb = eigen_decompose(&b).unwrap().values;
        let gap = la.iter().zip(&lb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert_eq!(gap, 1.0);
        assert_eq!(operator_norm(&(&a - &b)).unwrap(), 1.0);
        assert_eq!(operator_norm(&(&a - &a)).unwrap(), 0.0);
    }

    #[test]
    fn weyl_suite_has_no_violations() {
        let report = check_weyl_properties(&cfg(6, 200)).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn loewner_heinz_diagonal_example() {
        let a = SymMatrix::diag(&[1.0, 1.0]);
        let b = SymMatrix::diag(&[4.0, 1.0]);
        let (ra, rb) = (matrix_power(&a, 0.5).unwrap(), matrix_power(&b, 0.5).unwrap());
        assert!((&rb - &SymMatrix::diag(&[2.0, 1.0])).frobenius_norm() < 1e-14);
        assert!(loewner_leq(&ra, &rb, 1e-12).unwrap());
        assert!(loewner_leq(&ra, &ra, 0.0).unwrap());
    }

    #[test]
    fn loewner_heinz_suite_passes_for_square_root() {
        let report = check_loewner_heinz(&cfg(5, 200), 0.5).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn squaring_breaks_the_order() {
        let report = check_loewner_heinz(&cfg(5, 200), 2.0).unwrap();
        assert!(!report.all_passed());
    }

    #[test]
    fn lambda1_suite_has_no_violations() {
        let report = check_lambda1_subgradients(&cfg(6, 200)).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }
}
