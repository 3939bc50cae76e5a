use std::path::{Path, PathBuf};

use isotone_core::bkc::{bkc_error_table, error_table_csv, BkcConfig, NamedFunction};
use isotone_core::capacity::{Capacity, CapacityError, Submodularity, ValidationReport};
use isotone_core::choquet::{check_integral_axioms, check_subadditivity, PropertyConfig};
use isotone_core::demo::{positive_minorant, sym_demo, MinorantConfig};
use isotone_core::isotone_certify::{certify_isotone, probe_monotone_pairs, CertifyConfig, IsotonicityVerdict, MaxAffineMap};
use isotone_core::matrix_order::MatrixSuiteConfig;
use isotone_core::{choquet_discrete, DiscreteFunction, PropertyReport};
use serde::Serialize;

use crate::io::{emit, emit_json, read_json, CliError};
use crate::parse;

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Failed,
}

impl Status {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Success
        } else {
            Status::Failed
        }
    }
}

#[derive(Serialize)]
struct CapacityCheck {
    n: usize,
    valid: bool,
    validation: ValidationReport,
    /// `None` when the ground set is too large for the exhaustive scan.
    submodular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    submodularity: Option<Submodularity>,
}

/// Exit 0 when the capacity is normalized and monotone; submodularity is
/// reported but does not affect the status.
pub fn capacity_check(capacity: &Path, output: Option<&Path>) -> Result<Status, CliError> {
    let c: Capacity = read_json(capacity)?;
    let validation = c.validate();
    let submodularity = match c.submodularity() {
        Ok(s) => Some(s),
        Err(CapacityError::TooLargeForScan { .. }) => None,
        Err(e) => return Err(CliError::input(e)),
    };
    let report = CapacityCheck {
        n: c.n(),
        valid: validation.passed(),
        submodular: submodularity.as_ref().map(Submodularity::holds),
        submodularity,
        validation,
    };
    emit_json(output, &report)?;
    Ok(Status::from_pass(report.valid))
}

pub fn distort(weights: &[f64], distortion: &str, output: Option<&Path>) -> Result<Status, CliError> {
    let u = parse::distortion(distortion)?;
    let c = Capacity::distort(weights, &u).map_err(CliError::input)?;
    emit_json(output, &c)?;
    Ok(Status::Success)
}

pub fn integrate(capacity: &Path, function: &Path, set: &str, output: Option<&Path>) -> Result<Status, CliError> {
    let c: Capacity = read_json(capacity)?;
    let f: DiscreteFunction = read_json(function)?;
    let mask = parse::subset(set, c.n())?;
    let value = choquet_discrete(&f, &c, mask).map_err(CliError::input)?;
    emit(output, &format!("{value:.8}\n"))?;
    Ok(Status::Success)
}

#[derive(Serialize)]
struct PropertiesOutput {
    submodular: bool,
    axioms: PropertyReport,
    /// Only run on submodular capacities.
    subadditivity: Option<PropertyReport>,
}

pub fn properties(capacity: &Path, cfg: PropertyConfig, output: Option<&Path>) -> Result<Status, CliError> {
    let c: Capacity = read_json(capacity)?;
    let axioms = check_integral_axioms(&c, &cfg);
    let subadditivity = match check_subadditivity(&c, &cfg) {
        Ok(r) => Some(r),
        Err(isotone_core::choquet::ChoquetError::NotSubmodular { .. }) => None,
        Err(e) => return Err(CliError::input(e)),
    };
    let pass = axioms.all_passed() && subadditivity.as_ref().is_none_or(PropertyReport::all_passed);
    emit_json(
        output,
        &PropertiesOutput {
            submodular: subadditivity.is_some(),
            axioms,
            subadditivity,
        },
    )?;
    Ok(Status::from_pass(pass))
}

pub struct BkcArgs {
    pub degrees: Vec<usize>,
    pub distortion: String,
    pub samples: usize,
    pub grid_points: usize,
    pub function: NamedFunction,
}

pub fn bkc(args: &BkcArgs, output: Option<&Path>) -> Result<Status, CliError> {
    let u = parse::distortion(&args.distortion)?;
    let base = BkcConfig::new(args.degrees[0], u)
        .with_samples(args.samples)
        .with_grid_points(args.grid_points);
    let f = args.function;
    let rows = bkc_error_table(move |t| f.eval(t), &base, &args.degrees).map_err(CliError::input)?;
    emit(output, &error_table_csv(&rows))?;
    Ok(Status::Success)
}

#[derive(Serialize)]
struct CertifyOutput {
    #[serde(flatten)]
    verdict: IsotonicityVerdict,
    /// Random monotone-pair probes of a certified map.
    #[serde(skip_serializing_if = "Option::is_none")]
    probes: Option<PropertyReport>,
}

/// Exit 0 when certified (and the probes agree), 3 when violated.
pub fn certify(map: &Path, cone: bool, probes: usize, seed: u64, output: Option<&Path>) -> Result<Status, CliError> {
    let map: MaxAffineMap = read_json(map)?;
    let verdict = certify_isotone(&map, cone, &CertifyConfig::default()).map_err(CliError::input)?;
    let probes = verdict
        .is_certified()
        .then(|| probe_monotone_pairs(&map, cone, probes, seed, CertifyConfig::default().witness_margin));
    let pass = verdict.is_certified() && probes.as_ref().is_some_and(PropertyReport::all_passed);
    emit_json(output, &CertifyOutput { verdict, probes })?;
    Ok(Status::from_pass(pass))
}

pub fn sym(cfg: MatrixSuiteConfig, powers: &[f64], output: Option<&Path>) -> Result<Status, CliError> {
    let report = sym_demo(&cfg, powers).map_err(CliError::input)?;
    emit_json(output, &report)?;
    Ok(Status::from_pass(report.passed()))
}

pub fn choquet_demo(
    capacities: &[PathBuf],
    function: &Path,
    cfg: MinorantConfig,
    output: Option<&Path>,
) -> Result<Status, CliError> {
    let caps = capacities
        .iter()
        .map(|p| read_json::<Capacity>(p))
        .collect::<Result<Vec<_>, _>>()?;
    let h: DiscreteFunction = read_json(function)?;
    let report = positive_minorant(&caps, &h, &cfg).map_err(CliError::input)?;
    emit_json(output, &report)?;
    Ok(Status::from_pass(report.properties.all_passed()))
}
