//! Choquet integration of discrete signed functions.
//!
//! For a capacity `μ`, a function `f` on the ground set and a subset `A`,
//!
//! ```text
//! (C)∫_A f dμ = ∫_0^∞ μ({f ≥ t} ∩ A) dt + ∫_{-∞}^0 [μ({f ≥ t} ∩ A) − μ(A)] dt
//! ```
//!
//! Both integrands are step functions with jumps at the distinct values of
//! `f` on `A`, so the integral is computed exactly by summing rectangles,
//! splitting at `t = 0` as the formula does.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::capacity::{Capacity, CapacityError, DistortionFn, SubsetMask, Submodularity};
use crate::report::{PropertyReport, PropertyTracker};
use crate::rng::{trial_rng, DEFAULT_SEED};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChoquetError {
    #[error("function has {got} values but the ground set has {expected} elements")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subset mask {mask:#b} has bits outside the ground set of size {n}")]
    MaskOutOfRange { mask: SubsetMask, n: usize },
    #[error("non-finite function value at index {0}")]
    NonFinite(usize),
    #[error("invalid integration interval [{a}, {b}] (need 0 <= a < b <= 1)")]
    BadInterval { a: f64, b: f64 },
    #[error("empty sample set")]
    EmptySamples,
    #[error("capacity is not submodular: subsets {a:#b} and {b:#b} violate it by {excess:e}")]
    NotSubmodular { a: SubsetMask, b: SubsetMask, excess: f64 },
    #[error(transparent)]
    Capacity(#[from] CapacityError),
}

/// Real values `f(i)` on the ground-set elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionFile", into = "FunctionFile")]
pub struct DiscreteFunction {
    values: Vec<f64>,
}

impl DiscreteFunction {
    pub fn new(values: Vec<f64>) -> Result<Self, ChoquetError> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(ChoquetError::NonFinite(i));
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self {
            values: vec![c; n],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, mut op: impl FnMut(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| op(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.len(), other.len(), "length mismatch");
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }
}

/// Wire format `{"values": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub values: Vec<f64>,
}

impl TryFrom<FunctionFile> for DiscreteFunction {
    type Error = ChoquetError;

    fn try_from(file: FunctionFile) -> Result<Self, Self::Error> {
        DiscreteFunction::new(file.values)
    }
}

impl From<DiscreteFunction> for FunctionFile {
    fn from(f: DiscreteFunction) -> Self {
        FunctionFile { values: f.values }
    }
}

/// How level sets are formed. Both give the same integral; `Greater` exists
/// as an independent route for regression checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelSetRule {
    /// `{f ≥ t}`
    #[default]
    AtLeast,
    /// `{f > t}`
    Greater,
}

/// The survival function `t ↦ μ({f ≥ t} ∩ A)` as a step function.
///
/// `thresholds` are the distinct values `v_1 < .. < v_r` of `f` on `A`;
/// `survival[0]` is the value on `t < v_1` (equal to `μ(A)`),
/// `survival[j]` the value strictly between `v_j` and `v_{j+1}`, and
/// `survival[r]` the value above `v_r` (always `μ(∅) = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct LevelBreakdown {
    pub thresholds: Vec<f64>,
    pub survival: Vec<f64>,
    /// `μ(A)`
    pub total: f64,
}

impl LevelBreakdown {
    /// Exact value of the Choquet integral of the step function.
    pub fn integrate(&self) -> f64 {
        let r = self.thresholds.len();
        if r == 0 {
            return 0.0;
        }
        let mut sum = 0.0;
        // (-inf, v_1): survival equals μ(A), so only the part above zero counts.
        sum += self.thresholds[0].max(0.0) * self.survival[0];
        for j in 1..r {
            let (lo, hi) = (self.thresholds[j - 1], self.thresholds[j]);
            let value = self.survival[j];
            let positive = (hi.max(0.0) - lo.max(0.0)).max(0.0);
            let negative = (hi.min(0.0) - lo.min(0.0)).max(0.0);
            sum += positive * value + negative * (value - self.total);
        }
        // (v_r, inf): survival is μ(∅) = 0, so only the part below zero counts.
        let top = self.thresholds[r - 1];
        sum += (-top).max(0.0) * (self.survival[r] - self.total);
        sum
    }
}

fn check_inputs(f: &DiscreteFunction, c: &Capacity, a: SubsetMask) -> Result<(), ChoquetError> {
    if f.len() != c.n() {
        return Err(ChoquetError::DimensionMismatch {
            expected: c.n(),
            got: f.len(),
        });
    }
    if a & !c.full_mask() != 0 {
        return Err(ChoquetError::MaskOutOfRange { mask: a, n: c.n() });
    }
    Ok(())
}

fn level_set(f: &[f64], a: SubsetMask, keep: impl Fn(f64) -> bool) -> SubsetMask {
    f.iter()
        .enumerate()
        .filter(|&(i, &v)| a & (1 << i) != 0 && keep(v))
        .fold(0, |acc, (i, _)| acc | (1 << i))
}

pub fn level_breakdown(
    f: &DiscreteFunction,
    c: &Capacity,
    a: SubsetMask,
    rule: LevelSetRule,
) -> Result<LevelBreakdown, ChoquetError> {
    check_inputs(f, c, a)?;
    let values = f.values();
    let mut thresholds: Vec<f64> = values
        .iter()
        .enumerate()
        .filter(|(i, _)| a & (1 << i) != 0)
        .map(|(_, &v)| v)
        .collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let r = thresholds.len();

    let survival: Vec<f64> = (0..=r)
        .map(|j| match rule {
            // on (v_j, v_{j+1}] the level set is {f ≥ v_{j+1}}
            LevelSetRule::AtLeast => {
                let above = thresholds.get(j).copied().unwrap_or(f64::INFINITY);
                c.get(level_set(values, a, |v| v >= above))
            }
            // on [v_j, v_{j+1}) the level set is {f > v_j}
            LevelSetRule::Greater => {
                let below = if j == 0 { f64::NEG_INFINITY } else { thresholds[j - 1] };
                c.get(level_set(values, a, |v| v > below))
            }
        })
        .collect();

    Ok(LevelBreakdown {
        thresholds,
        survival,
        total: c.get(a),
    })
}

/// `(C)∫_A f dμ`, exact for discrete data. `A = ∅` gives 0.
pub fn choquet_discrete(
    f: &DiscreteFunction,
    c: &Capacity,
    a: SubsetMask,
) -> Result<f64, ChoquetError> {
    choquet_discrete_with_rule(f, c, a, LevelSetRule::AtLeast)
}

pub fn choquet_discrete_with_rule(
    f: &DiscreteFunction,
    c: &Capacity,
    a: SubsetMask,
    rule: LevelSetRule,
) -> Result<f64, ChoquetError> {
    Ok(level_breakdown(f, c, a, rule)?.integrate())
}

/// Choquet integral of `samples` against the symmetric capacity
/// `S ↦ nu(|S|)` (with `nu(0) = 0`). Sorts `samples` in place.
pub fn choquet_cardinality(samples: &mut [f64], nu: impl Fn(usize) -> f64) -> f64 {
    samples.sort_by(|x, y| y.total_cmp(x));
    let mut prev = 0.0;
    let mut sum = 0.0;
    for (k, &v) in samples.iter().enumerate() {
        let level = nu(k + 1);
        sum += v * (level - prev);
        prev = level;
    }
    sum
}

/// Approximates `(C)∫_{[a,b]} f d(u∘λ)` from `m` midpoint samples of `[a, b]`.
///
/// The samples are treated as a discrete function under the capacity
/// `S ↦ u(|S|·(b − a)/m)`. The error is first order in `(b − a)/m` times the
/// Lipschitz constant of `f`, plus the modulus of continuity of `u` at
/// `(b − a)/m`.
pub fn choquet_interval(
    f: impl Fn(f64) -> f64,
    u: &DistortionFn,
    a: f64,
    b: f64,
    m: usize,
) -> Result<f64, ChoquetError> {
    if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b && b <= 1.0) {
        return Err(ChoquetError::BadInterval { a, b });
    }
    if m == 0 {
        return Err(ChoquetError::EmptySamples);
    }
    let width = b - a;
    let h = width / m as f64;
    let mut samples = Vec::with_capacity(m);
    for i in 0..m {
        let v = f(a + (i as f64 + 0.5) * h);
        if !v.is_finite() {
            return Err(ChoquetError::NonFinite(i));
        }
        samples.push(v);
    }
    Ok(choquet_cardinality(&mut samples, |k| {
        u.eval(k as f64 * width / m as f64)
    }))
}

/// Result of a comonotonicity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Comonotonicity {
    Comonotonic,
    /// `(f(i) − f(j))·(g(i) − g(j)) < 0`.
    Opposed { i: usize, j: usize },
}

impl Comonotonicity {
    pub fn holds(&self) -> bool {
        matches!(self, Comonotonicity::Comonotonic)
    }
}

pub fn are_comonotonic(
    f: &DiscreteFunction,
    g: &DiscreteFunction,
    a: SubsetMask,
) -> Result<Comonotonicity, ChoquetError> {
    if f.len() != g.len() {
        return Err(ChoquetError::DimensionMismatch {
            expected: f.len(),
            got: g.len(),
        });
    }
    let members: Vec<usize> = (0..f.len()).filter(|i| a & (1 << i) != 0).collect();
    let (fv, gv) = (f.values(), g.values());
    for (p, &i) in members.iter().enumerate() {
        for &j in &members[p + 1..] {
            if (fv[i] - fv[j]) * (gv[i] - gv[j]) < 0.0 {
                return Ok(Comonotonicity::Opposed { i, j });
            }
        }
    }
    Ok(Comonotonicity::Comonotonic)
}

/// Settings for the randomized property suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyConfig {
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: DEFAULT_SEED,
            tolerance: 1e-10,
        }
    }
}

pub const AXIOM_PROPERTIES: [&str; 6] = [
    "positivity",
    "monotonicity",
    "positive_homogeneity",
    "calibration",
    "translation_invariance",
    "comonotonic_additivity",
];

pub const SUBADDITIVITY_PROPERTIES: [&str; 3] =
    ["subadditivity", "modulus_inequality", "difference_modulus_inequality"];

fn random_function(rng: &mut impl Rng, n: usize) -> DiscreteFunction {
    // a quarter of the draws are on a coarse grid so ties are exercised
    let coarse = rng.random_bool(0.25);
    let values = (0..n)
        .map(|_| {
            let v: f64 = rng.random_range(-2.0..2.0);
            if coarse {
                (v * 2.0).round() / 2.0
            } else {
                v
            }
        })
        .collect();
    DiscreteFunction { values }
}

fn random_nonempty_subset(rng: &mut impl Rng, c: &Capacity) -> SubsetMask {
    rng.random_range(1..=c.full_mask())
}

/// Two nondecreasing value sequences assigned along one shared random
/// ranking of the ground set; the resulting pair is comonotonic.
pub fn random_comonotonic_pair(
    rng: &mut impl Rng,
    n: usize,
) -> (DiscreteFunction, DiscreteFunction) {
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.shuffle(rng);
    let fs = sorted_draws(rng, n);
    let gs = sorted_draws(rng, n);
    let mut f = vec![0.0; n];
    let mut g = vec![0.0; n];
    for (rank, &element) in ranking.iter().enumerate() {
        f[element] = fs[rank];
        g[element] = gs[rank];
    }
    (DiscreteFunction { values: f }, DiscreteFunction { values: g })
}

fn sorted_draws(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn integral(f: &DiscreteFunction, c: &Capacity, a: SubsetMask) -> f64 {
    choquet_discrete(f, c, a).expect("inputs validated by the suite")
}

/// Positivity, monotonicity, positive homogeneity, calibration, translation
/// invariance and comonotonic additivity on `cfg.trials` random instances.
pub fn check_integral_axioms(c: &Capacity, cfg: &PropertyConfig) -> PropertyReport {
    let n = c.n();
    let mut t = PropertyTracker::new(cfg.tolerance, &AXIOM_PROPERTIES);
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let a = random_nonempty_subset(&mut rng, c);
        let f = random_function(&mut rng, n);
        let fi = integral(&f, c, a);

        let abs_f = f.map(f64::abs);
        let v = -integral(&abs_f, c, a);
        t.record("positivity", v, || json!({"trial": trial, "set": a, "f": abs_f.values()}));

        let g = f.map(|x| x + rng.random_range(0.0..1.0));
        let v = fi - integral(&g, c, a);
        t.record("monotonicity", v, || {
            json!({"trial": trial, "set": a, "f": f.values(), "g": g.values()})
        });

        let scale = if trial == 0 { 0.0 } else { rng.random_range(0.0..3.0) };
        let scaled = f.map(|x| scale * x);
        let v = (integral(&scaled, c, a) - scale * fi).abs();
        t.record("positive_homogeneity", v, || {
            json!({"trial": trial, "set": a, "f": f.values(), "scale": scale})
        });

        let one = DiscreteFunction::constant(n, 1.0);
        let v = (integral(&one, c, a) - c.get(a)).abs();
        t.record("calibration", v, || json!({"trial": trial, "set": a}));

        let shift = rng.random_range(-3.0..3.0);
        let shifted = f.map(|x| x + shift);
        let v = (integral(&shifted, c, a) - fi - shift * c.get(a)).abs();
        t.record("translation_invariance", v, || {
            json!({"trial": trial, "set": a, "f": f.values(), "shift": shift})
        });

        let (p, q) = random_comonotonic_pair(&mut rng, n);
        let sum = p.zip_with(&q, |x, y| x + y);
        let v = (integral(&sum, c, a) - integral(&p, c, a) - integral(&q, c, a)).abs();
        t.record("comonotonic_additivity", v, || {
            json!({"trial": trial, "set": a, "f": p.values(), "g": q.values()})
        });
    }
    t.finish()
}

/// Subadditivity and the two modulus inequalities. Requires a submodular
/// capacity; otherwise reports the violating pair as an error.
pub fn check_subadditivity(
    c: &Capacity,
    cfg: &PropertyConfig,
) -> Result<PropertyReport, ChoquetError> {
    if let Submodularity::Violated { a, b, excess } = c.submodularity()? {
        return Err(ChoquetError::NotSubmodular { a, b, excess });
    }
    Ok(probe_subadditivity(c, cfg))
}

/// Same checks as [`check_subadditivity`] without the submodularity
/// precondition, for measuring how badly a general capacity fails them.
pub fn probe_subadditivity(c: &Capacity, cfg: &PropertyConfig) -> PropertyReport {
    let n = c.n();
    let mut t = PropertyTracker::new(cfg.tolerance, &SUBADDITIVITY_PROPERTIES);
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let a = random_nonempty_subset(&mut rng, c);
        let f = random_function(&mut rng, n);
        // every fifth pair uses g = -f
        let g = if trial % 5 == 4 {
            f.map(|x| -x)
        } else {
            random_function(&mut rng, n)
        };
        let (fi, gi) = (integral(&f, c, a), integral(&g, c, a));
        let witness = || json!({"trial": trial, "set": a, "f": f.values(), "g": g.values()});

        let sum = f.zip_with(&g, |x, y| x + y);
        t.record("subadditivity", integral(&sum, c, a) - fi - gi, witness);

        let abs_f = f.map(f64::abs);
        t.record("modulus_inequality", fi.abs() - integral(&abs_f, c, a), witness);

        let diff = f.zip_with(&g, |x, y| (x - y).abs());
        t.record(
            "difference_modulus_inequality",
            (fi - gi).abs() - integral(&diff, c, a),
            witness,
        );
    }
    t.finish()
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // decimal values as printed in the examples
mod tests {
    use super::*;

    fn sqrt_uniform(n: usize) -> Capacity {
        Capacity::uniform_distorted(n, &DistortionFn::power(0.5).unwrap()).unwrap()
    }

    fn func(v: &[f64]) -> DiscreteFunction {
        DiscreteFunction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn constant_one_integrates_to_capacity_of_set() {
        let c = sqrt_uniform(3);
        for a in 0..8 {
            let v = choquet_discrete(&DiscreteFunction::constant(3, 1.0), &c, a).unwrap();
            assert!((v - c.get(a)).abs() < 1e-15, "set {a:#b}");
        }
    }

    #[test]
    fn indicator_of_first_element() {
        let v = choquet_discrete(&func(&[1.0, 0.0]), &sqrt_uniform(2), 0b11).unwrap();
        assert!((v - 0.70710678).abs() < 1e-8);
    }

    #[test]
    fn signed_function_splits_at_zero() {
        let v = choquet_discrete(&func(&[-1.0, 1.0]), &sqrt_uniform(2), 0b11).unwrap();
        assert!((v - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((v - 0.41421356).abs() < 1e-8);
    }

    #[test]
    fn additive_capacity_gives_expectation() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let c = Capacity::additive(&p).unwrap();
        let f = [3.0, -1.5, 0.25, 2.0];
        let expected: f64 = f.iter().zip(p).map(|(x, w)| x * w).sum();
        let v = choquet_discrete(&func(&f), &c, c.full_mask()).unwrap();
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn empty_set_integrates_to_zero() {
        let v = choquet_discrete(&func(&[5.0, -3.0]), &sqrt_uniform(2), 0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn all_negative_function() {
        // f = (-2, -1) on the full set: -2·μ(X) + 1·μ({1}) by hand
        let c = sqrt_uniform(2);
        let v = choquet_discrete(&func(&[-2.0, -1.0]), &c, 0b11).unwrap();
        assert!((v - (-2.0 + 0.5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn strict_level_sets_give_identical_values() {
        let c = sqrt_uniform(4);
        let f = func(&[0.3, -1.2, 2.5, 0.9]);
        for a in 0..16 {
            let ge = choquet_discrete_with_rule(&f, &c, a, LevelSetRule::AtLeast).unwrap();
            let gt = choquet_discrete_with_rule(&f, &c, a, LevelSetRule::Greater).unwrap();
            assert_eq!(ge, gt, "set {a:#b}");
        }
    }

    #[test]
    fn breakdown_survival_is_nonincreasing_from_total() {
        let c = sqrt_uniform(4);
        let f = func(&[1.0, 1.0, -2.0, 0.5]);
        let lb = level_breakdown(&f, &c, 0b1111, LevelSetRule::AtLeast).unwrap();
        assert_eq!(lb.thresholds, vec![-2.0, 0.5, 1.0]);
        assert_eq!(lb.survival[0], lb.total);
        assert!(lb.survival.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*lb.survival.last().unwrap(), 0.0);
    }

    #[test]
    fn dimension_and_mask_errors() {
        let c = sqrt_uniform(2);
        assert_eq!(
            choquet_discrete(&func(&[1.0]), &c, 1),
            Err(ChoquetError::DimensionMismatch { expected: 2, got: 1 })
        );
        assert!(matches!(
            choquet_discrete(&func(&[1.0, 2.0]), &c, 0b100),
            Err(ChoquetError::MaskOutOfRange { .. })
        ));
        assert_eq!(DiscreteFunction::new(vec![f64::NAN]), Err(ChoquetError::NonFinite(0)));
    }

    #[test]
    fn interval_constant_function() {
        let u = DistortionFn::power(0.5).unwrap();
        let v = choquet_interval(|_| 2.5, &u, 0.2, 0.6, 100).unwrap();
        assert!((v - 2.5 * 0.4f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn interval_identity_matches_lebesgue() {
        let v = choquet_interval(|t| t, &DistortionFn::identity(), 0.0, 1.0, 100_000).unwrap();
        assert!((v - 0.5).abs() < 1e-4);
    }

    #[test]
    fn interval_sqrt_distortion_of_identity() {
        // survival of t on [0,1] under √λ is √(1 − t), integral 2/3
        let u = DistortionFn::power(0.5).unwrap();
        let v = choquet_interval(|t| t, &u, 0.0, 1.0, 100_000).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn interval_agrees_with_materialized_cardinality_capacity() {
        let u = DistortionFn::power(0.4).unwrap();
        let (a, b, m) = (0.1, 0.7, 8usize);
        let f = |t: f64| (6.0 * t).sin() - 0.3;
        let width = b - a;
        let c = Capacity::from_fn(m, |mask| u.eval(mask.count_ones() as f64 * width / m as f64))
            .unwrap();
        let samples: Vec<f64> = (0..m)
            .map(|i| f(a + (i as f64 + 0.5) * width / m as f64))
            .collect();
        let discrete = choquet_discrete(&func(&samples), &c, c.full_mask()).unwrap();
        let interval = choquet_interval(f, &u, a, b, m).unwrap();
        assert!((discrete - interval).abs() < 1e-12);
    }

    #[test]
    fn interval_rejects_bad_domain() {
        let u = DistortionFn::identity();
        assert!(matches!(
            choquet_interval(|t| t, &u, 0.5, 0.5, 10),
            Err(ChoquetError::BadInterval { .. })
        ));
        assert_eq!(
            choquet_interval(|t| t, &u, 0.0, 1.0, 0),
            Err(ChoquetError::EmptySamples)
        );
    }

    #[test]
    fn comonotonicity_examples() {
        let f = func(&[1.0, 2.0, 3.0]);
        assert!(are_comonotonic(&f, &f, 0b111).unwrap().holds());
        assert!(are_comonotonic(&f, &func(&[0.0, 5.0, 5.0]), 0b111).unwrap().holds());
        assert_eq!(
            are_comonotonic(&func(&[1.0, 2.0]), &func(&[2.0, 1.0]), 0b11).unwrap(),
            Comonotonicity::Opposed { i: 0, j: 1 }
        );
        // restricted to a single element nothing can be opposed
        assert!(are_comonotonic(&func(&[1.0, 2.0]), &func(&[2.0, 1.0]), 0b01).unwrap().holds());
    }

    #[test]
    fn generated_pairs_are_comonotonic() {
        let mut rng = trial_rng(7, 0);
        for _ in 0..50 {
            let (f, g) = random_comonotonic_pair(&mut rng, 6);
            assert!(are_comonotonic(&f, &g, 0b111111).unwrap().holds());
        }
    }

    #[test]
    fn axioms_hold_exactly_for_additive_capacity() {
        let c = Capacity::additive(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let cfg = PropertyConfig {
            trials: 200,
            tolerance: 1e-12,
            ..Default::default()
        };
        let report = check_integral_axioms(&c, &cfg);
        assert!(report.all_passed(), "{report:?}");
        assert!(report.max_violation() <= 1e-12);
    }

    #[test]
    fn axioms_hold_for_sqrt_distortion() {
        let report = check_integral_axioms(&sqrt_uniform(6), &PropertyConfig::default());
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.get("calibration").unwrap().checks, 1000);
    }

    #[test]
    fn zero_scaling_gives_zero_integral() {
        let c = sqrt_uniform(3);
        let f = func(&[1.0, -4.0, 2.0]).map(|x| 0.0 * x);
        assert_eq!(choquet_discrete(&f, &c, 0b111).unwrap(), 0.0);
    }

    #[test]
    fn subadditivity_is_equality_for_additive_capacity() {
        let c = Capacity::additive(&[0.25; 4]).unwrap();
        let mut rng = trial_rng(3, 0);
        for _ in 0..100 {
            let f = random_function(&mut rng, 4);
            let g = random_function(&mut rng, 4);
            let s = f.zip_with(&g, |x, y| x + y);
            let gap = integral(&s, &c, 0b1111) - integral(&f, &c, 0b1111) - integral(&g, &c, 0b1111);
            assert!(gap.abs() <= 1e-12);
        }
        let cfg = PropertyConfig { trials: 100, ..Default::default() };
        assert!(check_subadditivity(&c, &cfg).unwrap().all_passed());
    }

    #[test]
    fn subadditivity_suite_passes_for_sqrt_distortion() {
        let report = check_subadditivity(&sqrt_uniform(6), &PropertyConfig::default()).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn function_and_its_negation() {
        let c = sqrt_uniform(5);
        let mut rng = trial_rng(11, 0);
        for _ in 0..100 {
            let f = random_function(&mut rng, 5);
            let sum = integral(&f, &c, c.full_mask()) + integral(&f.map(|x| -x), &c, c.full_mask());
            assert!(sum >= -1e-12);
        }
    }

    #[test]
    fn subadditivity_precondition_names_pair() {
        let c = Capacity::new(2, vec![0.0, 0.1, 0.1, 1.0]).unwrap();
        assert!(matches!(
            check_subadditivity(&c, &PropertyConfig::default()),
            Err(ChoquetError::NotSubmodular { a: 0b01, b: 0b10, .. })
        ));
        let probe = probe_subadditivity(&c, &PropertyConfig::default());
        assert!(!probe.get("subadditivity").unwrap().pass);
    }

    #[test]
    fn function_file_format() {
        let f: DiscreteFunction = serde_json::from_str(r#"{"values": [1, -0.5]}"#).unwrap();
        assert_eq!(f.values(), &[1.0, -0.5]);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"values":[1.0,-0.5]}"#);
    }
}
