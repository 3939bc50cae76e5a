//! Concave distortion functions `u: [0, 1] -> [0, 1]` used to turn a
//! probability vector into a submodular capacity `u ∘ P`.

use serde::{Deserialize, Serialize};

use super::CapacityError;

/// Number of abscissas used by the monotonicity / concavity grid checks.
pub const CHECK_GRID_POINTS: usize = 1001;

const TOL: f64 = 1e-12;

/// The concrete shape of a [`DistortionFn`].
#[derive(Debug, Clone, PartialEq)]
pub enum DistortionKind {
    /// `u(t) = t^alpha`, `alpha ∈ (0, 1]`.
    Power { alpha: f64 },
    /// Linear interpolation through `(x, y)` knots, first knot `(0, 0)`,
    /// last knot `(1, 1)`, strictly increasing abscissas.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    /// Values on a uniform grid of `[0, 1]` with linear interpolation.
    Table { values: Vec<f64> },
}

/// A nondecreasing concave distortion fixing 0 and 1.
///
/// Instances can only be obtained through the checked constructors (or by
/// deserializing, which goes through the same checks), so every value of
/// this type satisfies the endpoint, monotonicity and midpoint-concavity
/// invariants on the 1001-point grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistortionSpec", into = "DistortionSpec")]
pub struct DistortionFn {
    kind: DistortionKind,
}

impl DistortionFn {
    pub fn identity() -> Self {
        Self {
            kind: DistortionKind::Power { alpha: 1.0 },
        }
    }

    pub fn power(alpha: f64) -> Result<Self, CapacityError> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
            return Err(CapacityError::Distortion(format!(
                "power exponent must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(Self {
            kind: DistortionKind::Power { alpha },
        })
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self, CapacityError> {
        if knots.len() < 2 {
            return Err(CapacityError::Distortion(
                "piecewise-linear distortion needs at least two knots".into(),
            ));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(CapacityError::Distortion("non-finite knot".into()));
        }
        let (x0, _) = knots[0];
        let (xl, _) = knots[knots.len() - 1];
        if x0 != 0.0 || xl != 1.0 {
            return Err(CapacityError::Distortion(format!(
                "knots must span [0, 1], got [{x0}, {xl}]"
            )));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(CapacityError::Distortion(
                "knot abscissas must be strictly increasing".into(),
            ));
        }
        let slopes: Vec<f64> = knots
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        if slopes.windows(2).any(|s| s[1] > s[0] + TOL) {
            return Err(CapacityError::Distortion(
                "piecewise-linear distortion must have nonincreasing slopes".into(),
            ));
        }
        Self::checked(DistortionKind::PiecewiseLinear { knots })
    }

    pub fn table(values: Vec<f64>) -> Result<Self, CapacityError> {
        if values.len() < 2 {
            return Err(CapacityError::Distortion(
                "table distortion needs at least two grid values".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CapacityError::Distortion("non-finite table value".into()));
        }
        // Equal spacing, so concavity of the interpolant is nonpositive second differences.
        if values.windows(3).any(|w| w[2] - w[1] > w[1] - w[0] + TOL) {
            return Err(CapacityError::Distortion(
                "table distortion must have nonincreasing increments".into(),
            ));
        }
        Self::checked(DistortionKind::Table { values })
    }

    fn checked(kind: DistortionKind) -> Result<Self, CapacityError> {
        let u = Self { kind };
        u.check_invariants()?;
        Ok(u)
    }

    pub fn kind(&self) -> &DistortionKind {
        &self.kind
    }

    /// Evaluates `u(t)`. Arguments are clamped to `[0, 1]` so that subset
    /// sums that overshoot 1 by rounding still map to `u(1)`.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match &self.kind {
            DistortionKind::Power { alpha } => {
                if *alpha == 1.0 {
                    t
                } else {
                    t.powf(*alpha)
                }
            }
            DistortionKind::PiecewiseLinear { knots } => {
                let idx = knots.partition_point(|(x, _)| *x <= t);
                if idx == 0 {
                    return knots[0].1;
                }
                if idx >= knots.len() {
                    return knots[knots.len() - 1].1;
                }
                let (x0, y0) = knots[idx - 1];
                let (x1, y1) = knots[idx];
                y0 + (y1 - y0) * (t - x0) / (x1 - x0)
            }
            DistortionKind::Table { values } => {
                let last = values.len() - 1;
                let pos = t * last as f64;
                let i = (pos.floor() as usize).min(last - 1);
                let frac = pos - i as f64;
                values[i] + (values[i + 1] - values[i]) * frac
            }
        }
    }

    /// Endpoint, monotonicity and midpoint-concavity checks on the
    /// [`CHECK_GRID_POINTS`]-point grid.
    pub fn check_invariants(&self) -> Result<(), CapacityError> {
        let at0 = self.eval(0.0);
        let at1 = self.eval(1.0);
        if at0.abs() > TOL || (at1 - 1.0).abs() > TOL {
            return Err(CapacityError::Distortion(format!(
                "distortion must fix 0 and 1, got u(0) = {at0}, u(1) = {at1}"
            )));
        }
        let step = 1.0 / (CHECK_GRID_POINTS - 1) as f64;
        let grid: Vec<f64> = (0..CHECK_GRID_POINTS)
            .map(|i| self.eval(i as f64 * step))
            .collect();
        if let Some(i) = grid.windows(2).position(|w| w[1] < w[0] - TOL) {
            return Err(CapacityError::Distortion(format!(
                "distortion decreases between t = {} and t = {}",
                i as f64 * step,
                (i + 1) as f64 * step
            )));
        }
        for i in 0..CHECK_GRID_POINTS {
            for j in (i + 2)..CHECK_GRID_POINTS {
                let mid = self.eval((i + j) as f64 * step / 2.0);
                if mid < 0.5 * (grid[i] + grid[j]) - TOL {
                    return Err(CapacityError::Distortion(format!(
                        "distortion is not midpoint-concave at s = {}, t = {}",
                        i as f64 * step,
                        j as f64 * step
                    )));
                }
            }
        }
        Ok(())
    }
}

impl Default for DistortionFn {
    fn default() -> Self {
        Self::identity()
    }
}

/// Wire format of a distortion, e.g. `{"kind": "power", "alpha": 0.5}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DistortionSpec {
    Power { alpha: f64 },
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    Table { values: Vec<f64> },
}

impl TryFrom<DistortionSpec> for DistortionFn {
    type Error = CapacityError;

    fn try_from(spec: DistortionSpec) -> Result<Self, Self::Error> {
        match spec {
            DistortionSpec::Power { alpha } => DistortionFn::power(alpha),
            DistortionSpec::PiecewiseLinear { knots } => DistortionFn::piecewise_linear(knots),
            DistortionSpec::Table { values } => DistortionFn::table(values),
        }
    }
}

impl From<DistortionFn> for DistortionSpec {
    fn from(u: DistortionFn) -> Self {
        match u.kind {
            DistortionKind::Power { alpha } => DistortionSpec::Power { alpha },
            DistortionKind::PiecewiseLinear { knots } => DistortionSpec::PiecewiseLinear { knots },
            DistortionKind::Table { values } => DistortionSpec::Table { values },
        }
    }
}

#[cfg(test)]
impl DistortionFn {
    /// Bypasses every invariant; only for exercising downstream guards.
    pub(crate) fn unchecked(kind: DistortionKind) -> Self {
        Self { kind }
    }
}
