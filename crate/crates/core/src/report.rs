//! Pass/fail reports shared by the randomized property suites.
//!
//! Serialized as `{property: {pass, max_violation, checks, witness?}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub pass: bool,
    /// Largest amount by which the property failed (0 when it always held).
    pub max_violation: f64,
    /// Number of instances checked.
    pub checks: usize,
    /// First instance whose violation exceeded the tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PropertyReport(BTreeMap<String, PropertyOutcome>);

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.0.values().all(|o| o.pass)
    }

    pub fn get(&self, property: &str) -> Option<&PropertyOutcome> {
        self.0.get(property)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PropertyOutcome)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn max_violation(&self) -> f64 {
        self.0.values().map(|o| o.max_violation).fold(0.0, f64::max)
    }

    pub fn merge(&mut self, other: PropertyReport) {
        self.0.extend(other.0);
    }

    pub fn insert(&mut self, property: impl Into<String>, outcome: PropertyOutcome) {
        self.0.insert(property.into(), outcome);
    }
}

/// Accumulates violations per property. A violation is the signed amount
/// by which a check fails; nonpositive values mean the check held.
#[derive(Debug)]
pub(crate) struct PropertyTracker {
    tolerance: f64,
    outcomes: BTreeMap<String, PropertyOutcome>,
}

impl PropertyTracker {
    pub fn new(tolerance: f64, properties: &[&str]) -> Self {
        let outcomes = properties
            .iter()
            .map(|p| {
                (
                    p.to_string(),
                    PropertyOutcome {
                        pass: true,
                        max_violation: 0.0,
                        checks: 0,
                        witness: None,
                    },
                )
            })
            .collect();
        Self {
            tolerance,
            outcomes,
        }
    }

    pub fn record(&mut self, property: &str, violation: f64, witness: impl FnOnce() -> Value) {
        let tolerance = self.tolerance;
        let outcome = self
            .outcomes
            .get_mut(property)
            .unwrap_or_else(|| panic!("unregistered property {property}"));
        outcome.checks += 1;
        // NaN counts as a failure
        let violation = if violation.is_nan() { f64::INFINITY } else { violation.max(0.0) };
        outcome.max_violation = outcome.max_violation.max(violation);
        if violation > tolerance && outcome.pass {
            outcome.pass = false;
            outcome.witness = Some(witness());
        }
    }

    pub fn finish(self) -> PropertyReport {
        PropertyReport(self.outcomes)
    }
}
