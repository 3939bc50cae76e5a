//! Capacities: normalized monotone set functions on a finite ground set.
//!
//! A capacity on `{0, .., n-1}` is stored as `2^n` values indexed by subset
//! bitmask, bit `i` set iff element `i` belongs to the subset (LSB is
//! element 0). The same encoding is used on disk (`"bitmask-lsb0"`).

mod distortion;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use distortion::{DistortionFn, DistortionKind, DistortionSpec, CHECK_GRID_POINTS};

/// Subset of the ground set as a bitmask (bit `i` = element `i`).
pub type SubsetMask = u32;

/// Largest ground set that can be stored (`2^20` values, 8 MB).
pub const MAX_GROUND_SET: usize = 20;
/// Largest ground set for the exhaustive `4^n` submodularity scan.
pub const MAX_SUBMODULAR_SCAN: usize = 14;
/// Absolute tolerance for every capacity comparison.
pub const TOLERANCE: f64 = 1e-12;

pub const ENCODING: &str = "bitmask-lsb0";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CapacityError {
    #[error("ground set size {0} outside 1..={MAX_GROUND_SET}")]
    GroundSetSize(usize),
    #[error("expected {expected} values for n = {n}, got {got}")]
    LengthMismatch { n: usize, expected: usize, got: usize },
    #[error("non-finite value for subset {mask:#b}")]
    NonFinite { mask: SubsetMask },
    #[error("exhaustive submodularity scan supports n <= {MAX_SUBMODULAR_SCAN}, got n = {0}")]
    TooLargeForScan(usize),
    #[error("weights are not a probability vector: {0}")]
    NotAProbability(String),
    #[error("invalid distortion: {0}")]
    Distortion(String),
    #[error("unsupported subset encoding {0:?} (expected \"{ENCODING}\")")]
    Encoding(String),
    #[error("capacity file must contain exactly one of `values` or `distorted`")]
    AmbiguousFile,
    #[error("permutation of length {got} does not match ground set size {n}")]
    BadPermutation { n: usize, got: usize },
}

/// A set function on the subsets of `{0, .., n-1}`.
///
/// Construction only checks the structure (length, finiteness). Whether the
/// values actually form a capacity is reported by [`Capacity::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CapacityFile", into = "CapacityFile")]
pub struct Capacity {
    n: usize,
    values: Vec<f64>,
}

/// First failure found by [`Capacity::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CapacityViolation {
    EmptySetNonzero { value: f64 },
    FullSetNotOne { value: f64 },
    NotMonotone {
        subset: SubsetMask,
        superset: SubsetMask,
        subset_value: f64,
        superset_value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub normalization: Option<CapacityViolation>,
    pub monotonicity: Option<CapacityViolation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.normalization.is_none() && self.monotonicity.is_none()
    }
}

/// Outcome of the exhaustive pair scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Submodularity {
    Holds,
    /// `μ(A∪B) + μ(A∩B) - μ(A) - μ(B) = excess > tolerance`.
    Violated { a: SubsetMask, b: SubsetMask, excess: f64 },
}

impl Submodularity {
    pub fn holds(&self) -> bool {
        matches!(self, Submodularity::Holds)
    }
}

impl Capacity {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self, CapacityError> {
        if n == 0 || n > MAX_GROUND_SET {
            return Err(CapacityError::GroundSetSize(n));
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(CapacityError::LengthMismatch {
                n,
                expected,
                got: values.len(),
            });
        }
        if let Some(mask) = values.iter().position(|v| !v.is_finite()) {
            return Err(CapacityError::NonFinite {
                mask: mask as SubsetMask,
            });
        }
        Ok(Self { n, values })
    }

    /// Builds the capacity by evaluating `f` on every subset.
    pub fn from_fn(n: usize, f: impl Fn(SubsetMask) -> f64) -> Result<Self, CapacityError> {
        if n == 0 || n > MAX_GROUND_SET {
            return Err(CapacityError::GroundSetSize(n));
        }
        let values = (0..(1u32 << n)).map(f).collect();
        Self::new(n, values)
    }

    /// The distorted probability `S ↦ u(Σ_{i∈S} p_i)`.
    pub fn distort(weights: &[f64], u: &DistortionFn) -> Result<Self, CapacityError> {
        let n = weights.len();
        if n == 0 || n > MAX_GROUND_SET {
            return Err(CapacityError::GroundSetSize(n));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(CapacityError::NotAProbability(format!(
                "weight {i} is {}",
                weights[i]
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(CapacityError::NotAProbability(format!(
                "weights sum to {total}"
            )));
        }
        let full = (1usize << n) - 1;
        let mut sums = vec![0.0; 1 << n];
        for mask in 1..=full {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + weights[low];
        }
        let mut values: Vec<f64> = sums.into_iter().map(|s| u.eval(s)).collect();
        values[0] = 0.0;
        values[full] = 1.0;
        Self::new(n, values)
    }

    /// The probability measure with point masses `weights` (identity distortion).
    pub fn additive(weights: &[f64]) -> Result<Self, CapacityError> {
        Self::distort(weights, &DistortionFn::identity())
    }

    pub fn uniform_distorted(n: usize, u: &DistortionFn) -> Result<Self, CapacityError> {
        if n == 0 || n > MAX_GROUND_SET {
            return Err(CapacityError::GroundSetSize(n));
        }
        Self::distort(&vec![1.0 / n as f64; n], u)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn full_mask(&self) -> SubsetMask {
        ((1u64 << self.n) - 1) as SubsetMask
    }

    /// `μ(S)`. Bits above `n` are ignored.
    pub fn get(&self, mask: SubsetMask) -> f64 {
        self.values[(mask & self.full_mask()) as usize]
    }

    /// Normalization and monotonicity check. Monotonicity is scanned over
    /// `(S, S ∪ {i})` pairs only, which implies it for all `A ⊆ B`.
    pub fn validate(&self) -> ValidationReport {
        let full = self.full_mask();
        let empty_value = self.values[0];
        let full_value = self.values[full as usize];
        let normalization = if empty_value.abs() > TOLERANCE {
            Some(CapacityViolation::EmptySetNonzero { value: empty_value })
        } else if (full_value - 1.0).abs() > TOLERANCE {
            Some(CapacityViolation::FullSetNotOne { value: full_value })
        } else {
            None
        };

        let mut monotonicity = None;
        'scan: for subset in 0..=full {
            for i in 0..self.n {
                let bit = 1 << i;
                if subset & bit != 0 {
                    continue;
                }
                let superset = subset | bit;
                let (lo, hi) = (self.values[subset as usize], self.values[superset as usize]);
                if lo > hi + TOLERANCE {
                    monotonicity = Some(CapacityViolation::NotMonotone {
                        subset,
                        superset,
                        subset_value: lo,
                        superset_value: hi,
                    });
                    break 'scan;
                }
            }
        }
        ValidationReport {
            normalization,
            monotonicity,
        }
    }

    /// Exhaustive check of `μ(A∪B) + μ(A∩B) <= μ(A) + μ(B) + 1e-12` over all
    /// pairs. The reported counterexample is the lexicographically first
    /// `(A, B)` with `A < B`.
    pub fn submodularity(&self) -> Result<Submodularity, CapacityError> {
        if self.n > MAX_SUBMODULAR_SCAN {
            return Err(CapacityError::TooLargeForScan(self.n));
        }
        let size = 1u32 << self.n;
        let v = &self.values;
        let found = (0..size).into_par_iter().find_map_first(|a| {
            let va = v[a as usize];
            ((a + 1)..size).find_map(|b| {
                let excess = v[(a | b) as usize] + v[(a & b) as usize] - va - v[b as usize];
                (excess > TOLERANCE).then_some(Submodularity::Violated { a, b, excess })
            })
        });
        Ok(found.unwrap_or(Submodularity::Holds))
    }

    pub fn is_submodular(&self) -> Result<bool, CapacityError> {
        Ok(self.submodularity()?.holds())
    }

    /// Relabels the ground set: element `i` becomes element `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, CapacityError> {
        if perm.len() != self.n || !is_permutation(perm) {
            return Err(CapacityError::BadPermutation {
                n: self.n,
                got: perm.len(),
            });
        }
        let mut values = vec![0.0; self.values.len()];
        for (mask, value) in self.values.iter().enumerate() {
            values[permute_mask(mask as SubsetMask, perm) as usize] = *value;
        }
        Self::new(self.n, values)
    }
}

/// Image of `mask` under the relabeling `i ↦ perm[i]`.
pub fn permute_mask(mask: SubsetMask, perm: &[usize]) -> SubsetMask {
    perm.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .fold(0, |acc, (_, &j)| acc | (1 << j))
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &j in perm {
        if j >= perm.len() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

/// On-disk form of a capacity. Exactly one of `values` / `distorted` must be
/// present; the distorted form is materialized into explicit values on read.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distorted: Option<DistortedSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistortedSpec {
    pub weights: Vec<f64>,
    pub distortion: DistortionFn,
}

impl TryFrom<CapacityFile> for Capacity {
    type Error = CapacityError;

    fn try_from(file: CapacityFile) -> Result<Self, Self::Error> {
        if let Some(enc) = &file.encoding {
            if enc != ENCODING {
                return Err(CapacityError::Encoding(enc.clone()));
            }
        }
        match (file.values, file.distorted) {
            (Some(values), None) => Capacity::new(file.n, values),
            (None, Some(spec)) => {
                if spec.weights.len() != file.n {
                    return Err(CapacityError::LengthMismatch {
                        n: file.n,
                        expected: file.n,
                        got: spec.weights.len(),
                    });
                }
                Capacity::distort(&spec.weights, &spec.distortion)
            }
            _ => Err(CapacityError::AmbiguousFile),
        }
    }
}

impl From<Capacity> for CapacityFile {
    fn from(c: Capacity) -> Self {
        CapacityFile {
            n: c.n,
            values: Some(c.values),
            encoding: Some(ENCODING.to_string()),
            distorted: None,
        }
    }
}
