//! Exact isotonicity certification for max-affine vector maps
//! `Φ(x)_j = max_k (a_jk·x + b_jk)`.
//!
//! A convex map is isotone iff every subgradient is a positive operator, and
//! for a max-affine map the gradient of any piece that is active somewhere is
//! a subgradient there. So `Φ` is isotone iff every ever-active piece has a
//! nonnegative gradient, which is decided with one LP per piece.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::lp::{solve, LinearProgram, LpError, LpOutcome, Relation, SimplexOptions};
use crate::report::{PropertyReport, PropertyTracker};
use crate::rng::trial_rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("input_dim must be positive")]
    ZeroDimension,
    #[error("map has no components")]
    NoComponents,
    #[error("component {0} has no pieces")]
    EmptyComponent(usize),
    #[error("component {component} piece {piece}: gradient has length {got}, expected {expected}")]
    GradientLength {
        component: usize,
        piece: usize,
        expected: usize,
        got: usize,
    },
    #[error("component {component} piece {piece}: non-finite coefficient")]
    NonFinite { component: usize, piece: usize },
    #[error("point has dimension {got}, expected {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("component {component} piece {piece} does not exist")]
    NoSuchPiece { component: usize, piece: usize },
    #[error("empty or ragged vector list")]
    BadVectors,
    #[error("LP for component {component} piece {piece} ended unexpectedly: {detail}")]
    UnexpectedLp {
        component: usize,
        piece: usize,
        detail: String,
    },
    #[error("no validated witness for active negative-gradient pieces (first: component {component} piece {piece})")]
    WitnessNotFound { component: usize, piece: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinePiece {
    pub a: Vec<f64>,
    pub b: f64,
}

impl AffinePiece {
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.a, x) + self.b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub pieces: Vec<AffinePiece>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    input_dim: usize,
    components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapFile")]
pub struct MaxAffineMap {
    input_dim: usize,
    components: Vec<Component>,
}

impl TryFrom<MapFile> for MaxAffineMap {
    type Error = CertifyError;

    fn try_from(f: MapFile) -> Result<Self, Self::Error> {
        Self::new(f.input_dim, f.components)
    }
}

fn dot(a: &[f64], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(p, q)| p * q).sum()
}

impl MaxAffineMap {
    pub fn new(input_dim: usize, components: Vec<Component>) -> Result<Self, CertifyError> {
        if input_dim == 0 {
            return Err(CertifyError::ZeroDimension);
        }
        if components.is_empty() {
            return Err(CertifyError::NoComponents);
        }
        for (j, c) in components.iter().enumerate() {
            if c.pieces.is_empty() {
                return Err(CertifyError::EmptyComponent(j));
            }
            for (k, p) in c.pieces.iter().enumerate() {
                if p.a.len() != input_dim {
                    return Err(CertifyError::GradientLength {
                        component: j,
                        piece: k,
                        expected: input_dim,
                        got: p.a.len(),
                    });
                }
                if !p.b.is_finite() || p.a.iter().any(|v| !v.is_finite()) {
                    return Err(CertifyError::NonFinite {
                        component: j,
                        piece: k,
                    });
                }
            }
        }
        Ok(Self {
            input_dim,
            components,
        })
    }

    /// Builds a map from `(gradient, offset)` pairs per component.
    pub fn from_pieces(input_dim: usize, components: Vec<Vec<(Vec<f64>, f64)>>) -> Result<Self, CertifyError> {
        let components = components
            .into_iter()
            .map(|pieces| Component {
                pieces: pieces.into_iter().map(|(a, b)| AffinePiece { a, b }).collect(),
            })
            .collect();
        Self::new(input_dim, components)
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    fn piece(&self, j: usize, k: usize) -> Result<&AffinePiece, CertifyError> {
        self.components
            .get(j)
            .and_then(|c| c.pieces.get(k))
            .ok_or(CertifyError::NoSuchPiece {
                component: j,
                piece: k,
            })
    }

    fn check_point(&self, x: &[f64]) -> Result<(), CertifyError> {
        if x.len() != self.input_dim {
            return Err(CertifyError::PointDimension {
                expected: self.input_dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `Φ_j(x)`; `x` must have length `input_dim`.
    pub fn eval_component(&self, j: usize, x: &[f64]) -> f64 {
        self.components[j]
            .pieces
            .iter()
            .map(|p| p.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, CertifyError> {
        self.check_point(x)?;
        Ok((0..self.output_dim()).map(|j| self.eval_component(j, x)).collect())
    }

    /// Pieces of component `j` within `slack·max(1, |Φ_j(x)|)` of the max.
    pub fn active_pieces(&self, j: usize, x: &[f64], slack: f64) -> Vec<usize> {
        let top = self.eval_component(j, x);
        let tol = slack * top.abs().max(1.0);
        self.components[j]
            .pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| top - p.eval(x) <= tol)
            .map(|(k, _)| k)
            .collect()
    }

    /// Multiplies every piece of component `j` by `c`.
    pub fn scale_component(&mut self, j: usize, c: f64) {
        for p in &mut self.components[j].pieces {
            p.a.iter_mut().for_each(|v| *v *= c);
            p.b *= c;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyConfig {
    /// Cone mode works on `x ≥ cone_epsilon·𝟏`.
    pub cone_epsilon: f64,
    /// Activity LPs are solved on the box `|x_i| ≤ box_bound`.
    pub box_bound: f64,
    /// Relative slack for active-set detection at a point, and absolute
    /// slack for declaring a piece ever active.
    pub active_slack: f64,
    /// A witness must violate isotonicity by more than this.
    pub witness_margin: f64,
    pub simplex: SimplexOptions,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            cone_epsilon: 1e-6,
            box_bound: 1e6,
            active_slack: 1e-9,
            witness_margin: 1e-9,
            simplex: SimplexOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PositiveCombination {
    Found {
        weights: Vec<f64>,
        combination: Vec<f64>,
    },
    Infeasible {
        phase_one_optimum: f64,
    },
}

/// Looks for `λ ≥ 0`, `Σλ = 1` with `Σ λ_k v_k ≥ 0` entrywise, i.e. a
/// nonnegative point in the convex hull of `vectors`.
pub fn lp_feasible_positive_combination(
    vectors: &[Vec<f64>],
    opts: &SimplexOptions,
) -> Result<PositiveCombination, CertifyError> {
    let Some(first) = vectors.first() else {
        return Err(CertifyError::BadVectors);
    };
    let dim = first.len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(CertifyError::BadVectors);
    }
    let m = vectors.len();
    let mut lp = LinearProgram::new(m);
    for i in 0..dim {
        lp.constrain(vectors.iter().map(|v| v[i]).collect(), Relation::Ge, 0.0);
    }
    lp.constrain(vec![1.0; m], Relation::Eq, 1.0);
    match solve(&lp, opts)? {
        LpOutcome::Optimal { x, .. } => {
            let combination = (0..dim)
                .map(|i| vectors.iter().zip(&x).map(|(v, w)| w * v[i]).sum())
                .collect();
            Ok(PositiveCombination::Found {
                weights: x,
                combination,
            })
        }
        LpOutcome::Infeasible { phase_one_optimum } => {
            Ok(PositiveCombination::Infeasible { phase_one_optimum })
        }
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

/// How `x ∈ ℝⁿ` is encoded in nonnegative LP variables: `x = x⁺ − x⁻` on the
/// whole space, `x = z + ε𝟏` on the ε-interior of the cone.
struct Embedding {
    n: usize,
    cone: bool,
    eps: f64,
}

impl Embedding {
    fn x_vars(&self) -> usize {
        if self.cone {
            self.n
        } else {
            2 * self.n
        }
    }

    /// Linear form `g·x` as LP coefficients (first `x_vars` entries) plus a
    /// constant.
    fn expand(&self, g: &[f64], out: &mut [f64]) -> f64 {
        out[..self.n].copy_from_slice(g);
        if self.cone {
            self.eps * g.iter().sum::<f64>()
        } else {
            for (o, v) in out[self.n..2 * self.n].iter_mut().zip(g) {
                *o = -v;
            }
            0.0
        }
    }

    fn decode(&self, sol: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                if self.cone {
                    sol[i] + self.eps
                } else {
                    sol[i] - sol[self.n + i]
                }
            })
            .collect()
    }
}

/// LP over `x` keeping piece `k` of component `c` within `s` of every other
/// piece (`(a_l − a_k)·x + s ≤ b_k − b_l`), plus the box. With `free_slack`
/// the variable `s = s⁺ − s⁻ ≤ 1` is appended; otherwise `s = 0`.
fn activity_program(
    c: &Component,
    k: usize,
    emb: &Embedding,
    box_bound: f64,
    free_slack: bool,
) -> LinearProgram {
    let nx = emb.x_vars();
    let nvars = nx + if free_slack { 2 } else { 0 };
    let mut lp = LinearProgram::new(nvars);
    let ak = &c.pieces[k];
    for (l, pl) in c.pieces.iter().enumerate() {
        if l == k {
            continue;
        }
        let diff: Vec<f64> = pl.a.iter().zip(&ak.a).map(|(p, q)| p - q).collect();
        let mut row = vec![0.0; nvars];
        let constant = emb.expand(&diff, &mut row);
        if free_slack {
            row[nx] = 1.0;
            row[nx + 1] = -1.0;
        }
        lp.constrain(row, Relation::Le, ak.b - pl.b - constant);
    }
    for i in 0..emb.n {
        let mut e = vec![0.0; emb.n];
        e[i] = 1.0;
        let mut row = vec![0.0; nvars];
        let constant = emb.expand(&e, &mut row);
        lp.constrain(row.clone(), Relation::Le, box_bound - constant);
        if !emb.cone {
            lp.constrain(row.iter().map(|v| -v).collect(), Relation::Le, box_bound + constant);
        }
    }
    if free_slack {
        let mut cap = vec![0.0; nvars];
        cap[nx] = 1.0;
        cap[nx + 1] = -1.0;
        lp.constrain(cap, Relation::Le, 1.0);
        lp.objective[nx] = -1.0;
        lp.objective[nx + 1] = 1.0;
    }
    lp
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Activity {
    pub active: bool,
    /// Largest margin (capped at 1) by which piece `k` beats the others.
    pub max_slack: f64,
    /// A maximizer of that margin.
    pub point: Vec<f64>,
}

/// Decides whether piece `k` of component `j` attains the max somewhere on
/// the box `|x_i| ≤ box_bound`, restricted to `x ≥ ε𝟏` when `cone`.
pub fn piece_ever_active(
    map: &MaxAffineMap,
    j: usize,
    k: usize,
    cone: bool,
    cfg: &CertifyConfig,
) -> Result<Activity, CertifyError> {
    map.piece(j, k)?;
    let emb = Embedding {
        n: map.input_dim,
        cone,
        eps: cfg.cone_epsilon,
    };
    let lp = activity_program(&map.components[j], k, &emb, cfg.box_bound, true);
    match solve(&lp, &cfg.simplex)? {
        LpOutcome::Optimal { x, objective } => {
            let max_slack = -objective;
            Ok(Activity {
                active: max_slack >= -cfg.active_slack,
                max_slack,
                point: emb.decode(&x),
            })
        }
        other => Err(CertifyError::UnexpectedLp {
            component: j,
            piece: k,
            detail: format!("{other:?}"),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceStatus {
    pub piece: usize,
    pub ever_active: bool,
    pub gradient_nonnegative: bool,
    pub max_slack: f64,
    pub activity_point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentCertificate {
    pub component: usize,
    pub pieces: Vec<PieceStatus>,
}

/// `x ≤ y` componentwise with `Φ_j(x) > Φ_j(y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub component: usize,
    pub piece: usize,
    pub coordinate: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub phi_x: f64,
    pub phi_y: f64,
}

impl ViolationWitness {
    /// Re-evaluates the pair; returns the violation `Φ_j(x) − Φ_j(y)` when
    /// `x ≤ y` holds, `None` otherwise.
    pub fn violation(&self, map: &MaxAffineMap) -> Option<f64> {
        if self.x.len() != map.input_dim
            || self.y.len() != map.input_dim
            || self.component >= map.output_dim()
            || self.x.iter().zip(&self.y).any(|(a, b)| a > b)
        {
            return None;
        }
        Some(map.eval_component(self.component, &self.x) - map.eval_component(self.component, &self.y))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IsotonicityVerdict {
    Certified {
        cone: bool,
        certificate: Vec<ComponentCertificate>,
    },
    Violated {
        cone: bool,
        witness: ViolationWitness,
    },
}

impl IsotonicityVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified { .. })
    }

    pub fn witness(&self) -> Option<&ViolationWitness> {
        match self {
            Self::Violated { witness, .. } => Some(witness),
            Self::Certified { .. } => None,
        }
    }
}

fn make_witness(
    map: &MaxAffineMap,
    j: usize,
    k: usize,
    i: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    margin: f64,
) -> Option<ViolationWitness> {
    let w = ViolationWitness {
        component: j,
        piece: k,
        coordinate: i,
        phi_x: map.eval_component(j, &x),
        phi_y: map.eval_component(j, &y),
        x,
        y,
    };
    (w.violation(map)? > margin).then_some(w)
}

/// Candidate pairs for an active piece `k` with `a_ki < 0`, each validated by
/// direct evaluation:
/// 1. `x = x0`, `y = x0 + t e_i` with `t` small enough that `k` stays
///    active (needs positive slack at `x0`);
/// 2. `x = x0 − t e_i`, `y = x0`, valid for any `t > 0` because `a_k` is a
///    subgradient at `x0`; in the cone `t = x0_i`;
/// 3. (cone only) as 2, from the point of the activity region maximizing
///    `x_i`.
fn find_witness(
    map: &MaxAffineMap,
    j: usize,
    k: usize,
    activity: &Activity,
    cone: bool,
    cfg: &CertifyConfig,
) -> Result<Option<ViolationWitness>, CertifyError> {
    let comp = &map.components[j];
    let ak = &comp.pieces[k].a;
    let x0 = &activity.point;
    for i in (0..map.input_dim).filter(|&i| ak[i] < 0.0) {
        if activity.max_slack > 0.0 {
            let steepest = comp
                .pieces
                .iter()
                .map(|p| p.a[i] - ak[i])
                .fold(0.0, f64::max);
            let t = if steepest > 0.0 {
                activity.max_slack / steepest
            } else {
                1.0
            };
            let mut y = x0.clone();
            y[i] += t;
            if let Some(w) = make_witness(map, j, k, i, x0.clone(), y, cfg.witness_margin) {
                return Ok(Some(w));
            }
        }

        let t = if cone { x0[i] } else { (1.0 / ak[i].abs()).max(1.0) };
        let mut x = x0.clone();
        x[i] -= t;
        if let Some(w) = make_witness(map, j, k, i, x, x0.clone(), cfg.witness_margin) {
            return Ok(Some(w));
        }

        if cone {
            let emb = Embedding {
                n: map.input_dim,
                cone,
                eps: cfg.cone_epsilon,
            };
            let mut lp = activity_program(comp, k, &emb, cfg.box_bound, false);
            lp.objective[i] = -1.0;
            if let LpOutcome::Optimal { x: sol, .. } = solve(&lp, &cfg.simplex)? {
                let y = emb.decode(&sol);
                let mut x = y.clone();
                x[i] = 0.0;
                if let Some(w) = make_witness(map, j, k, i, x, y, cfg.witness_margin) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// Certified iff every piece active somewhere on `ℝⁿ` (or on the
/// ε-interior of `ℝⁿ₊` when `cone`) has an entrywise nonnegative gradient.
/// Otherwise returns a validated witness pair from the first offending
/// piece in (component, piece) order.
pub fn certify_isotone(
    map: &MaxAffineMap,
    cone: bool,
    cfg: &CertifyConfig,
) -> Result<IsotonicityVerdict, CertifyError> {
    let jobs: Vec<(usize, usize)> = map
        .components
        .iter()
        .enumerate()
        .flat_map(|(j, c)| (0..c.pieces.len()).map(move |k| (j, k)))
        .collect();
    let activities: Vec<Activity> = jobs
        .par_iter()
        .map(|&(j, k)| piece_ever_active(map, j, k, cone, cfg))
        .collect::<Result<_, _>>()?;

    let mut certificate: Vec<ComponentCertificate> = (0..map.output_dim())
        .map(|component| ComponentCertificate {
            component,
            pieces: Vec::new(),
        })
        .collect();
    let mut first_offender = None;
    for (&(j, k), activity) in jobs.iter().zip(&activities) {
        let nonneg = map.components[j].pieces[k].a.iter().all(|v| *v >= 0.0);
        if activity.active && !nonneg {
            first_offender.get_or_insert((j, k));
            if let Some(witness) = find_witness(map, j, k, activity, cone, cfg)? {
                return Ok(IsotonicityVerdict::Violated { cone, witness });
            }
        }
        certificate[j].pieces.push(PieceStatus {
            piece: k,
            ever_active: activity.active,
            gradient_nonnegative: nonneg,
            max_slack: activity.max_slack,
            activity_point: activity.point.clone(),
        });
    }
    if let Some((component, piece)) = first_offender {
        return Err(CertifyError::WitnessNotFound { component, piece });
    }
    Ok(IsotonicityVerdict::Certified { cone, certificate })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSubgradient {
    pub component: usize,
    pub active_pieces: Vec<usize>,
    /// Convex weights over `active_pieces`.
    pub weights: Vec<f64>,
    /// `Σ w_k a_k`, the nonnegative row of the subgradient.
    pub row: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PointwiseSubgradient {
    Found { rows: Vec<ComponentSubgradient> },
    Missing { component: usize, active_pieces: Vec<usize> },
}

/// A positive element of `∂Φ(x0)`: per component, a convex combination of
/// active gradients that is entrywise nonnegative.
pub fn pointwise_positive_subgradient(
    map: &MaxAffineMap,
    x0: &[f64],
    cfg: &CertifyConfig,
) -> Result<PointwiseSubgradient, CertifyError> {
    map.check_point(x0)?;
    let mut rows = Vec::with_capacity(map.output_dim());
    for j in 0..map.output_dim() {
        let active = map.active_pieces(j, x0, cfg.active_slack);
        let grads: Vec<Vec<f64>> = active
            .iter()
            .map(|&k| map.components[j].pieces[k].a.clone())
            .collect();
        match lp_feasible_positive_combination(&grads, &cfg.simplex)? {
            PositiveCombination::Found {
                weights,
                combination,
            } => rows.push(ComponentSubgradient {
                component: j,
                active_pieces: active,
                weights,
                row: combination,
            }),
            PositiveCombination::Infeasible { .. } => {
                return Ok(PointwiseSubgradient::Missing {
                    component: j,
                    active_pieces: active,
                })
            }
        }
    }
    Ok(PointwiseSubgradient::Found { rows })
}

/// `Φ(x) ≥ Φ(x0) + T(x − x0)` at `probes` points `x = x0 + U[−5, 5]ⁿ`.
pub fn check_subgradient_inequality(
    map: &MaxAffineMap,
    x0: &[f64],
    rows: &[ComponentSubgradient],
    probes: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport, CertifyError> {
    map.check_point(x0)?;
    let phi0 = map.eval(x0)?;
    let mut t = PropertyTracker::new(tol, &["subgradient_inequality"]);
    for probe in 0..probes {
        let mut rng = trial_rng(seed, probe);
        let x: Vec<f64> = x0.iter().map(|v| v + rng.random_range(-5.0..5.0)).collect();
        let delta: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a - b).collect();
        let v = rows
            .iter()
            .map(|r| phi0[r.component] + dot(&r.row, &delta) - map.eval_component(r.component, &x))
            .fold(f64::NEG_INFINITY, f64::max);
        t.record("subgradient_inequality", v, || json!({"probe": probe, "x": x}));
    }
    Ok(t.finish())
}

/// Random ordered pairs `x ≤ y` with `y − x ≥ 0` sparse: checks
/// `Φ(x) ≤ Φ(y)` componentwise. `x` is drawn from `[−5, 5]ⁿ`, or `[0, 5]ⁿ`
/// when `cone`.
pub fn probe_monotone_pairs(
    map: &MaxAffineMap,
    cone: bool,
    probes: usize,
    seed: u64,
    tol: f64,
) -> PropertyReport {
    let n = map.input_dim;
    let mut t = PropertyTracker::new(tol, &["monotone_pairs"]);
    let low = if cone { 0.0 } else { -5.0 };
    for probe in 0..probes {
        let mut rng = trial_rng(seed, probe);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(low..5.0)).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| if rng.random_bool(0.5) { *v } else { v + rng.random_range(0.0..2.0) })
            .collect();
        let v = (0..map.output_dim())
            .map(|j| map.eval_component(j, &x) - map.eval_component(j, &y))
            .fold(f64::NEG_INFINITY, f64::max);
        t.record("monotone_pairs", v, || json!({"probe": probe, "x": x, "y": y}));
    }
    t.finish()
}
