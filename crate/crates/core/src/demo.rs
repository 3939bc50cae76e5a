//! Worked demonstrations backing the command-line demos.
//!
//! [`positive_minorant`] takes a vector of submodular capacities
//! `P(f) = (Ch_{μ_1}(f), …, Ch_{μ_m}(f))` and a point `h ≥ 0`, and builds
//! a positive linear `T` with `T ≤ P` on nonnegative functions and
//! `T(h) = P(h)`. [`sym_demo`] bundles the symmetric-matrix suites.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::capacity::{Capacity, CapacityError, SubsetMask, Submodularity};
use crate::choquet::{choquet_discrete, ChoquetError, DiscreteFunction};
use crate::matrix_order::{
    check_lambda1_subgradients, check_loewner_heinz, check_weyl_properties, diag_functional,
    eigen_decompose, is_in_lambda1_support, lambda1_operator, MatrixError, MatrixSuiteConfig,
    SymMatrix,
};
use crate::report::{PropertyReport, PropertyTracker};
use crate::rng::trial_rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DemoError {
    #[error("no capacities given")]
    NoCapacities,
    #[error("capacity {index} has ground set size {got}, expected {expected}")]
    GroundSetMismatch { index: usize, expected: usize, got: usize },
    #[error("capacity {index} is not submodular: subsets {a:#b} and {b:#b} violate it by {excess:e}")]
    NotSubmodular {
        index: usize,
        a: SubsetMask,
        b: SubsetMask,
        excess: f64,
    },
    #[error("h({0}) is negative")]
    NegativeValue(usize),
    #[error("h({i}) = h({j}); the tangent functional is only canonical for distinct values")]
    TiedValues { i: usize, j: usize },
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Choquet(#[from] ChoquetError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Element indices sorted by decreasing `h`; refuses ties and negatives.
fn descending_order(h: &DiscreteFunction) -> Result<Vec<usize>, DemoError> {
    let v = h.values();
    if let Some(i) = v.iter().position(|x| *x < 0.0) {
        return Err(DemoError::NegativeValue(i));
    }
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[j].total_cmp(&v[i]));
    for w in order.windows(2) {
        if v[w[0]] == v[w[1]] {
            let (i, j) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(DemoError::TiedValues { i, j });
        }
    }
    Ok(order)
}

/// Weights of the comonotone-additive functional tangent to `Ch_μ` at `h`:
/// the element at rank `i` of the decreasing reordering gets
/// `μ(top i) − μ(top i−1)`.
pub fn tangent_weights(c: &Capacity, h: &DiscreteFunction) -> Result<Vec<f64>, DemoError> {
    if h.len() != c.n() {
        return Err(ChoquetError::DimensionMismatch {
            expected: c.n(),
            got: h.len(),
        }
        .into());
    }
    let order = descending_order(h)?;
    let mut w = vec![0.0; c.n()];
    let mut top: SubsetMask = 0;
    let mut prev = 0.0;
    for &i in &order {
        top |= 1 << i;
        let cur = c.get(top);
        w[i] = cur - prev;
        prev = cur;
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateMinorant {
    /// A probability on the ground set; `T_j(f) = Σ w_i f(i)`.
    pub weights: Vec<f64>,
    pub linear_at_h: f64,
    pub choquet_at_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorantReport {
    pub h: Vec<f64>,
    pub coordinates: Vec<CoordinateMinorant>,
    pub properties: PropertyReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorantConfig {
    pub probes: usize,
    pub seed: u64,
    /// Tangency and domination tolerance.
    pub tolerance: f64,
    /// Tolerance on `Σ w = 1`.
    pub weight_tolerance: f64,
}

impl Default for MinorantConfig {
    fn default() -> Self {
        Self {
            probes: 1000,
            seed: crate::rng::DEFAULT_SEED,
            tolerance: 1e-10,
            weight_tolerance: 1e-12,
        }
    }
}

pub const MINORANT_PROPERTIES: [&str; 4] = ["tangency", "domination", "weights_nonnegative", "weights_sum_to_one"];

/// Builds the tangent positive linear minorant of `f ↦ (Ch_{μ_j}(f))_j` at
/// `h` and checks it: `T(h) = P(h)`, `T(f) ≤ P(f)` on seeded random
/// `f ∈ [0, 5]ⁿ`, weights nonnegative and summing to `μ_j(X) = 1`.
pub fn positive_minorant(
    capacities: &[Capacity],
    h: &DiscreteFunction,
    cfg: &MinorantConfig,
) -> Result<MinorantReport, DemoError> {
    let Some(first) = capacities.first() else {
        return Err(DemoError::NoCapacities);
    };
    let n = first.n();
    for (index, c) in capacities.iter().enumerate() {
        if c.n() != n {
            return Err(DemoError::GroundSetMismatch {
                index,
                expected: n,
                got: c.n(),
            });
        }
        if let Submodularity::Violated { a, b, excess } = c.submodularity()? {
            return Err(DemoError::NotSubmodular { index, a, b, excess });
        }
    }

    let full = first.full_mask();
    let mut coordinates = Vec::with_capacity(capacities.len());
    for c in capacities {
        let weights = tangent_weights(c, h)?;
        let linear_at_h = dot(&weights, h.values());
        let choquet_at_h = choquet_discrete(h, c, full)?;
        coordinates.push(CoordinateMinorant {
            weights,
            linear_at_h,
            choquet_at_h,
        });
    }

    let mut t = PropertyTracker::new(cfg.tolerance, &MINORANT_PROPERTIES);
    for (j, coord) in coordinates.iter().enumerate() {
        let gap = (coord.linear_at_h - coord.choquet_at_h).abs();
        t.record("tangency", gap, || json!({"coordinate": j}));
        let neg = coord.weights.iter().fold(0.0, |m: f64, w| m.max(-w));
        t.record("weights_nonnegative", neg, || json!({"coordinate": j}));
        // pinned tighter than the functional tolerance
        let sum_gap = (coord.weights.iter().sum::<f64>() - 1.0).abs();
        let v = if sum_gap <= cfg.weight_tolerance { 0.0 } else { sum_gap };
        t.record("weights_sum_to_one", v, || json!({"coordinate": j, "sum_gap": sum_gap}));
    }
    for probe in 0..cfg.probes {
        let mut rng = trial_rng(cfg.seed, probe);
        let f = DiscreteFunction::new((0..n).map(|_| rng.random_range(0.0..5.0)).collect())?;
        for (j, (c, coord)) in capacities.iter().zip(&coordinates).enumerate() {
            let v = dot(&coord.weights, f.values()) - choquet_discrete(&f, c, full)?;
            t.record("domination", v, || json!({"probe": probe, "coordinate": j, "f": f.values()}));
        }
    }

    Ok(MinorantReport {
        h: h.values().to_vec(),
        coordinates,
        properties: t.finish(),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgradientExample {
    pub a: Vec<Vec<f64>>,
    pub lambda1: Vec<f64>,
    pub top_eigenvector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymDemoReport {
    pub example: SubgradientExample,
    pub lambda1: PropertyReport,
    pub weyl: PropertyReport,
    pub diag_support: bool,
    /// Keyed by the exponent as written, e.g. `"0.5"`.
    pub loewner_heinz: BTreeMap<String, PropertyReport>,
}

impl SymDemoReport {
    /// Everything passed. Exponents above 1 are expected to fail and are
    /// left out.
    pub fn passed(&self) -> bool {
        self.lambda1.all_passed()
            && self.weyl.all_passed()
            && self.diag_support
            && self
                .loewner_heinz
                .iter()
                .filter(|(p, _)| p.parse::<f64>().is_ok_and(|p| p <= 1.0))
                .all(|(_, r)| r.all_passed())
    }
}

/// The rank-one subgradient of `λ₁` at `[[2, 1], [1, 2]]`, the λ₁ and Weyl
/// suites at `cfg.dim`, diag-functional support membership, and
/// Löwner-Heinz at each exponent in `powers`.
pub fn sym_demo(cfg: &MatrixSuiteConfig, powers: &[f64]) -> Result<SymDemoReport, DemoError> {
    let a = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]])?;
    let es = eigen_decompose(&a)?;
    let example = SubgradientExample {
        a: a.rows(),
        lambda1: lambda1_operator(&a)?,
        top_eigenvector: es.vectors[0].clone(),
    };
    let mut loewner_heinz = BTreeMap::new();
    for &p in powers {
        loewner_heinz.insert(p.to_string(), check_loewner_heinz(cfg, p)?);
    }
    Ok(SymDemoReport {
        example,
        lambda1: check_lambda1_subgradients(cfg)?,
        weyl: check_weyl_properties(cfg)?,
        diag_support: is_in_lambda1_support(&diag_functional(cfg.dim), cfg.tolerance)?,
        loewner_heinz,
    })
}
