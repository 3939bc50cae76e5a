//! The Bernstein-Kantorovich-Choquet operator
//!
//! ```text
//! K_{n,μ}(f)(x) = Σ_{k=0}^{n} [ (C)∫_{I_k} f dμ / μ(I_k) ] · C(n,k) x^k (1−x)^{n−k},
//! I_k = [k/(n+1), (k+1)/(n+1)],
//! ```
//!
//! for distorted Lebesgue capacities `μ = u∘λ`. Cell integrals use
//! [`choquet_interval`] with a fixed per-cell sample count; `μ(I_k)` is the
//! exact value `u(1/(n+1))`.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::capacity::DistortionFn;
use crate::choquet::{choquet_interval, ChoquetError};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_GRID_POINTS: usize = 101;
pub const MIN_SAMPLES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BkcError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("need at least {MIN_SAMPLES} samples per cell, got {0}")]
    TooFewSamples(usize),
    #[error("evaluation point {0} outside [0, 1]")]
    PointOutOfRange(f64),
    #[error("evaluation grid is empty")]
    EmptyGrid,
    #[error("cell capacity u(1/(n+1)) = {0} is not positive")]
    DegenerateCapacity(f64),
    #[error(transparent)]
    Choquet(#[from] ChoquetError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BkcConfig {
    pub degree: usize,
    pub distortion: DistortionFn,
    /// Samples per cell for the Choquet quadrature.
    pub samples: usize,
    pub eval_grid: Vec<f64>,
}

impl BkcConfig {
    pub fn new(degree: usize, distortion: DistortionFn) -> Self {
        Self {
            degree,
            distortion,
            samples: DEFAULT_SAMPLES,
            eval_grid: uniform_grid(DEFAULT_GRID_POINTS),
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_grid_points(mut self, points: usize) -> Self {
        self.eval_grid = uniform_grid(points);
        self
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    pub fn validate(&self) -> Result<(), BkcError> {
        if self.degree == 0 {
            return Err(BkcError::ZeroDegree);
        }
        if self.samples < MIN_SAMPLES {
            return Err(BkcError::TooFewSamples(self.samples));
        }
        if self.eval_grid.is_empty() {
            return Err(BkcError::EmptyGrid);
        }
        if let Some(&x) = self.eval_grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(BkcError::PointOutOfRange(x));
        }
        Ok(())
    }
}

/// `points` equally spaced abscissas including both endpoints
/// (`[0.0]` when `points <= 1`).
pub fn uniform_grid(points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![0.0];
    }
    let last = (points - 1) as f64;
    (0..points).map(|i| i as f64 / last).collect()
}

/// `C(n,k) x^k (1−x)^{n−k}` for `k = 0..=n` by the multiplicative
/// recurrence `w_{k+1} = w_k · (n−k)/(k+1) · x/(1−x)`, run from the end
/// closer to `x` so the ratio never exceeds one.
pub fn bernstein_weights(n: usize, x: f64) -> Vec<f64> {
    let mirrored = x > 0.5;
    let y = if mirrored { 1.0 - x } else { x };
    let mut w = vec![0.0; n + 1];
    w[0] = (1.0 - y).powi(n as i32);
    if y > 0.0 {
        let ratio = y / (1.0 - y);
        for k in 0..n {
            w[k + 1] = w[k] * (n - k) as f64 / (k + 1) as f64 * ratio;
        }
    }
    if mirrored {
        w.reverse();
    }
    w
}

/// The normalized cell integrals `(C)∫_{I_k} f dμ / μ(I_k)`, `k = 0..=n`.
pub fn cell_values(
    f: impl Fn(f64) -> f64 + Sync,
    cfg: &BkcConfig,
) -> Result<Vec<f64>, BkcError> {
    cfg.validate()?;
    let n = cfg.degree;
    let cells = (n + 1) as f64;
    let mass = cfg.distortion.eval(1.0 / cells);
    if !(mass > 0.0) {
        return Err(BkcError::DegenerateCapacity(mass));
    }
    (0..=n)
        .into_par_iter()
        .map(|k| {
            let a = k as f64 / cells;
            let b = ((k + 1) as f64 / cells).min(1.0);
            Ok(choquet_interval(&f, &cfg.distortion, a, b, cfg.samples)? / mass)
        })
        .collect()
}

/// `(x, K_{n,μ}(f)(x))` for every `x` of the evaluation grid.
pub fn bkc_apply(
    f: impl Fn(f64) -> f64 + Sync,
    cfg: &BkcConfig,
) -> Result<Vec<(f64, f64)>, BkcError> {
    let values = cell_values(f, cfg)?;
    Ok(cfg
        .eval_grid
        .iter()
        .map(|&x| {
            let y = bernstein_weights(cfg.degree, x)
                .iter()
                .zip(&values)
                .map(|(w, v)| w * v)
                .sum();
            (x, y)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub degree: usize,
    pub sup_error: f64,
}

/// Sup-norm error of `K_{n,μ} f` against `f` on the evaluation grid, one row
/// per degree, in the order given.
pub fn bkc_error_table(
    f: impl Fn(f64) -> f64 + Sync,
    base: &BkcConfig,
    degrees: &[usize],
) -> Result<Vec<ErrorRow>, BkcError> {
    degrees
        .iter()
        .map(|&degree| {
            let cfg = base.clone().with_degree(degree);
            let sup_error = bkc_apply(&f, &cfg)?
                .into_iter()
                .map(|(x, y)| (y - f(x)).abs())
                .fold(0.0, f64::max);
            Ok(ErrorRow { degree, sup_error })
        })
        .collect()
}

/// CSV with header `n,sup_error`; floats use Rust's shortest round-trip
/// formatting so output is byte-identical across runs.
pub fn error_table_csv(rows: &[ErrorRow]) -> String {
    let mut out = String::from("n,sup_error\n");
    for row in rows {
        let _ = writeln!(out, "{},{}", row.degree, row.sup_error);
    }
    out
}

/// Test integrands selectable by name on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedFunction {
    Identity,
    Square,
    Sqrt,
    Sine,
    AbsCenter,
    Constant(f64),
}

impl NamedFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            NamedFunction::Identity => t,
            NamedFunction::Square => t * t,
            NamedFunction::Sqrt => t.sqrt(),
            NamedFunction::Sine => (2.0 * std::f64::consts::PI * t).sin(),
            NamedFunction::AbsCenter => (t - 0.5).abs(),
            NamedFunction::Constant(c) => c,
        }
    }
}

impl FromStr for NamedFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" | "t" => Ok(NamedFunction::Identity),
            "square" => Ok(NamedFunction::Square),
            "sqrt" => Ok(NamedFunction::Sqrt),
            "sin" => Ok(NamedFunction::Sine),
            "abs-center" => Ok(NamedFunction::AbsCenter),
            other => match other.strip_prefix("const:") {
                Some(c) => c
                    .parse::<f64>()
                    .ok()
                    .filter(|c| c.is_finite())
                    .map(NamedFunction::Constant)
                    .ok_or_else(|| format!("bad constant in {other:?}")),
                None => Err(format!(
                    "unknown function {other:?} (expected identity, square, sqrt, sin, abs-center or const:<c>)"
                )),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::DistortionKind;

    fn sqrt_u() -> DistortionFn {
        DistortionFn::power(0.5).unwrap()
    }

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 4, 16, 64, 200] {
            for i in 0..=40 {
                let x = i as f64 / 40.0;
                let w = bernstein_weights(n, x);
                let s: f64 = w.iter().sum();
                assert!((s - 1.0).abs() < 1e-12, "n={n} x={x} sum={s}");
                assert!(w.iter().all(|v| *v >= 0.0));
            }
        }
    }

    #[test]
    fn weights_match_binomial_formula_for_small_degree() {
        let x: f64 = 0.3;
        let w = bernstein_weights(4, x);
        let binom = [1.0, 4.0, 6.0, 4.0, 1.0];
        for k in 0..=4 {
            let direct = binom[k] * x.powi(k as i32) * (1.0 - x).powi(4 - k as i32);
            assert!((w[k] - direct).abs() < 1e-15);
        }
        assert_eq!(bernstein_weights(3, 1.0), vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn constant_is_reproduced() {
        let cfg = BkcConfig::new(7, sqrt_u()).with_samples(64).with_grid_points(11);
        for (_, y) in bkc_apply(|_| -1.75, &cfg).unwrap() {
            assert!((y + 1.75).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_at_center_and_origin() {
        let mut cfg = BkcConfig::new(8, DistortionFn::identity()).with_samples(1000);
        cfg.eval_grid = vec![0.0, 0.5];
        let out = bkc_apply(|t| t, &cfg).unwrap();
        // (2nx + 1) / (2(n + 1))
        assert!((out[1].1 - 0.5).abs() < 1e-12);
        assert!((out[0].1 - 1.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn identity_matches_closed_form_everywhere() {
        let n = 5;
        let cfg = BkcConfig::new(n, DistortionFn::identity())
            .with_samples(100)
            .with_grid_points(21);
        for (x, y) in bkc_apply(|t| t, &cfg).unwrap() {
            let closed = (2.0 * n as f64 * x + 1.0) / (2.0 * (n + 1) as f64);
            assert!((y - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn classical_kantorovich_means_for_sine() {
        // oracle: exact cell means of sin(2πt) and direct Bernstein summation
        let n = 6;
        let cfg = BkcConfig::new(n, DistortionFn::identity()).with_grid_points(9);
        let two_pi = 2.0 * std::f64::consts::PI;
        let cells = (n + 1) as f64;
        let means: Vec<f64> = (0..=n)
            .map(|k| {
                let (a, b) = (k as f64 / cells, (k + 1) as f64 / cells);
                ((two_pi * a).cos() - (two_pi * b).cos()) / (two_pi * (b - a))
            })
            .collect();
        for (x, y) in bkc_apply(|t| (two_pi * t).sin(), &cfg).unwrap() {
            let mut expected = 0.0;
            for k in 0..=n {
                let binom: f64 = (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product();
                expected += means[k] * binom * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32);
            }
            assert!((y - expected).abs() < 1e-8, "x={x}: {y} vs {expected}");
        }
    }

    #[test]
    fn sqrt_distortion_of_identity_has_closed_form() {
        // each cell contributes a + 2h/3, so K f(x) = (n x + 2/3) / (n + 1)
        let n = 9;
        let cfg = BkcConfig::new(n, sqrt_u()).with_grid_points(11);
        for (x, y) in bkc_apply(|t| t, &cfg).unwrap() {
            let closed = (n as f64 * x + 2.0 / 3.0) / (n + 1) as f64;
            assert!((y - closed).abs() < 1e-4, "x={x}");
        }
    }

    #[test]
    fn error_table_for_identity() {
        let cfg = BkcConfig::new(1, DistortionFn::identity()).with_samples(1000);
        let rows = bkc_error_table(|t| t, &cfg, &[4, 16, 64]).unwrap();
        let expected = [0.1, 1.0 / 34.0, 1.0 / 130.0];
        for (row, want) in rows.iter().zip(expected) {
            assert!((row.sup_error - want).abs() < 1e-9, "{row:?}");
        }
        assert_eq!(rows.iter().map(|r| r.degree).collect::<Vec<_>>(), vec![4, 16, 64]);
    }

    #[test]
    fn error_table_for_constant_is_zero() {
        let cfg = BkcConfig::new(1, sqrt_u()).with_samples(100);
        let rows = bkc_error_table(|_| 1.0, &cfg, &[4, 16, 64]).unwrap();
        assert!(rows.iter().all(|r| r.sup_error < 1e-12));
    }

    #[test]
    fn error_column_decreases_under_sqrt_distortion() {
        let cfg = BkcConfig::new(1, sqrt_u());
        let rows = bkc_error_table(|t| t, &cfg, &[4, 16, 64]).unwrap();
        assert!(rows.windows(2).all(|w| w[1].sup_error < w[0].sup_error), "{rows:?}");
    }

    #[test]
    fn csv_layout() {
        let rows = [
            ErrorRow { degree: 4, sup_error: 0.1 },
            ErrorRow { degree: 16, sup_error: 0.5 },
        ];
        assert_eq!(error_table_csv(&rows), "n,sup_error\n4,0.1\n16,0.5\n");
    }

    #[test]
    fn config_validation() {
        let u = DistortionFn::identity();
        assert_eq!(BkcConfig::new(0, u.clone()).validate(), Err(BkcError::ZeroDegree));
        assert_eq!(
            BkcConfig::new(2, u.clone()).with_samples(4).validate(),
            Err(BkcError::TooFewSamples(4))
        );
        let mut cfg = BkcConfig::new(2, u);
        cfg.eval_grid = vec![0.5, 1.5];
        assert_eq!(cfg.validate(), Err(BkcError::PointOutOfRange(1.5)));
    }

    #[test]
    fn degenerate_cell_capacity_is_rejected() {
        let flat = DistortionFn::unchecked(DistortionKind::PiecewiseLinear {
            knots: vec![(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)],
        });
        let cfg = BkcConfig::new(3, flat).with_samples(8);
        assert_eq!(bkc_apply(|t| t, &cfg), Err(BkcError::DegenerateCapacity(0.0)));
    }

    #[test]
    fn named_functions_parse() {
        assert_eq!("identity".parse(), Ok(NamedFunction::Identity));
        assert_eq!("const:2.5".parse(), Ok(NamedFunction::Constant(2.5)));
        assert!("const:x".parse::<NamedFunction>().is_err());
        assert!("cosh".parse::<NamedFunction>().is_err());
        assert_eq!(NamedFunction::AbsCenter.eval(0.25), 0.25);
    }
}
