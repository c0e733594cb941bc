//! Input-oriented CCR/BCC envelopment models.
//!
//! Each DMU is scored in two solves. The first finds the smallest radial
//! contraction θ of its inputs that the reference technology still
//! supports. The second fixes θ and maximises the remaining slacks, so a
//! unit is only reported `Efficient` when it has θ = 1 and no slack at all.
//!
//! Slacks in the second solve are carried as proportions of the evaluated
//! unit's own observations (`s_i / x_i`, `s_j / y_j`), which makes the
//! max-slack objective independent of the units each column is measured in.
//! When several optimal peer mixes exist, the deterministic pivot rule of
//! [`crate::lp`] picks one; the peer set is reproducible but not unique.

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::domain::{Cohort, CohortError, ModelSpec, ReturnsToScale, SpecError};
use crate::lp::{self, LpError, LpProblem, LpSolution, LpStatus, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EfficiencyStatus {
    Efficient,
    WeaklyEfficient,
    Inefficient,
}

impl EfficiencyStatus {
    /// On the radial frontier (θ = 1), with or without residual slack.
    pub fn is_frontier(self) -> bool {
        !matches!(self, EfficiencyStatus::Inefficient)
    }
}

impl std::fmt::Display for EfficiencyStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EfficiencyStatus::Efficient => "efficient",
            EfficiencyStatus::WeaklyEfficient => "weakly-efficient",
            EfficiencyStatus::Inefficient => "inefficient",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Peer {
    pub index: usize,
    pub id: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyResult {
    pub dmu_id: String,
    #[serde(skip)]
    pub index: usize,
    pub theta: f64,
    /// Reference peers with nonzero weight, in cohort order.
    #[serde(rename = "lambdas", serialize_with = "peers_as_map")]
    pub peers: Vec<Peer>,
    pub input_slacks: Vec<f64>,
    pub output_slacks: Vec<f64>,
    pub status: EfficiencyStatus,
    pub input_targets: Vec<f64>,
    pub output_targets: Vec<f64>,
}

fn peers_as_map<S: Serializer>(peers: &[Peer], serializer: S) -> Result<S::Ok, S::Error> {
    let mut map = serializer.serialize_map(Some(peers.len()))?;
    for p in peers {
        map.serialize_entry(&p.id, &p.weight)?;
    }
    map.end()
}

impl EfficiencyResult {
    /// Dense λ vector over a cohort of `k` units.
    pub fn lambda_vector(&self, k: usize) -> Vec<f64> {
        let mut lambdas = vec![0.0; k];
        for p in &self.peers {
            lambdas[p.index] = p.weight;
        }
        lambdas
    }

    pub fn lambda(&self, id: &str) -> f64 {
        self.peers
            .iter()
            .find(|p| p.id == id)
            .map_or(0.0, |p| p.weight)
    }

    /// Input reduction from the radial contraction alone, `(1 − θ)·x`.
    pub fn radial_excess(&self, observed_inputs: &[f64]) -> Vec<f64> {
        observed_inputs
            .iter()
            .map(|x| (1.0 - self.theta) * x)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveFailure {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("phase {phase} returned {status:?}")]
    UnexpectedStatus { phase: u8, status: LpStatus },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeaError {
    #[error(transparent)]
    Cohort(#[from] CohortError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("dmu index {index} out of range for a cohort of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("solver failure on dmu '{dmu_id}'{}: {reason}",
        .group.as_ref().map(|g| format!(" (group '{g}')")).unwrap_or_default())]
    SolverFailure {
        dmu_id: String,
        group: Option<String>,
        reason: SolveFailure,
    },
}

impl DeaError {
    pub(crate) fn in_group(self, label: &str) -> Self {
        match self {
            DeaError::SolverFailure { dmu_id, reason, .. } => DeaError::SolverFailure {
                dmu_id,
                group: Some(label.to_string()),
                reason,
            },
            other => other,
        }
    }
}

/// Radial model: variables `(λ_1..λ_K, θ)`, minimise θ subject to
/// `Σ λ_k x_ik − θ x_if ≤ 0`, `Σ λ_k y_jk ≥ y_jf`, and `Σ λ_k = 1` under VRS.
pub fn build_phase1(cohort: &Cohort, target: usize, spec: &ModelSpec) -> LpProblem {
    let k = cohort.len();
    let dmus = cohort.dmus();
    let evaluated = &dmus[target];
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LpProblem::minimize(objective);

    for i in 0..cohort.n_inputs() {
        let mut row: Vec<f64> = dmus.iter().map(|d| d.inputs[i]).collect();
        row.push(-evaluated.inputs[i]);
        lp.add_constraint(row, Relation::Le, 0.0);
    }
    for j in 0..cohort.n_outputs() {
        let mut row: Vec<f64> = dmus.iter().map(|d| d.outputs[j]).collect();
        row.push(0.0);
        lp.add_constraint(row, Relation::Ge, evaluated.outputs[j]);
    }
    if spec.returns_to_scale == ReturnsToScale::Vrs {
        let mut row = vec![1.0; k];
        row.push(0.0);
        lp.add_constraint(row, Relation::Eq, 1.0);
    }
    lp
}

/// Divisors that turn raw slacks into proportions of the evaluated unit.
/// Zero outputs fall back to the column maximum (or 1 for an all-zero
/// column), which keeps the scaling unit-consistent.
pub fn slack_scales(cohort: &Cohort, target: usize) -> (Vec<f64>, Vec<f64>) {
    let evaluated = &cohort.dmus()[target];
    let input = evaluated.inputs.clone();
    let output = (0..cohort.n_outputs())
        .map(|j| {
            let y = evaluated.outputs[j];
            if y > 0.0 {
                y
            } else {
                let col_max = cohort
                    .dmus()
                    .iter()
                    .map(|d| d.outputs[j])
                    .fold(0.0, f64::max);
                if col_max > 0.0 {
                    col_max
                } else {
                    1.0
                }
            }
        })
        .collect();
    (input, output)
}

/// Max-slack model at fixed θ: variables `(λ_1..λ_K, σ⁻_1..σ⁻_N, σ⁺_1..σ⁺_M)`
/// with equality rows `Σ λ_k x_ik + x_if σ⁻_i = θ* x_if` and
/// `Σ λ_k y_jk − ȳ_j σ⁺_j = y_jf`; maximise `Σ σ⁻ + Σ σ⁺`. The raw slacks
/// are `s⁻_i = x_if σ⁻_i` and `s⁺_j = ȳ_j σ⁺_j` (see [`slack_scales`]).
pub fn build_phase2(cohort: &Cohort, target: usize, theta_star: f64, spec: &ModelSpec) -> LpProblem {
    let k = cohort.len();
    let (n, m) = (cohort.n_inputs(), cohort.n_outputs());
    let dmus = cohort.dmus();
    let evaluated = &dmus[target];
    let (in_scale, out_scale) = slack_scales(cohort, target);
    let width = k + n + m;

    let mut objective = vec![0.0; width];
    objective[k..].iter_mut().for_each(|c| *c = 1.0);
    let mut lp = LpProblem::maximize(objective);

    for i in 0..n {
        let mut row = vec![0.0; width];
        for (c, d) in row.iter_mut().zip(dmus) {
            *c = d.inputs[i];
        }
        row[k + i] = in_scale[i];
        lp.add_constraint(row, Relation::Eq, theta_star * evaluated.inputs[i]);
    }
    for j in 0..m {
        let mut row = vec![0.0; width];
        for (c, d) in row.iter_mut().zip(dmus) {
            *c = d.outputs[j];
        }
        row[k + n + j] = -out_scale[j];
        lp.add_constraint(row, Relation::Eq, evaluated.outputs[j]);
    }
    if spec.returns_to_scale == ReturnsToScale::Vrs {
        let mut row = vec![0.0; width];
        row[..k].iter_mut().for_each(|c| *c = 1.0);
        lp.add_constraint(row, Relation::Eq, 1.0);
    }
    lp
}

fn run_lp(
    cohort: &Cohort,
    target: usize,
    lp: &LpProblem,
    spec: &ModelSpec,
) -> Result<LpSolution, DeaError> {
    lp::solve_with(lp, &spec.solver).map_err(|e| DeaError::SolverFailure {
        dmu_id: cohort.dmus()[target].id.clone(),
        group: None,
        reason: e.into(),
    })
}

/// Scores one DMU against the whole cohort.
pub fn solve_dmu(cohort: &Cohort, target: usize, spec: &ModelSpec) -> Result<EfficiencyResult, DeaError> {
    spec.validate()?;
    if target >= cohort.len() {
        return Err(DeaError::IndexOutOfRange {
            index: target,
            len: cohort.len(),
        });
    }
    let k = cohort.len();
    let (n, m) = (cohort.n_inputs(), cohort.n_outputs());
    let evaluated = &cohort.dmus()[target];
    let failure = |phase, status| DeaError::SolverFailure {
        dmu_id: evaluated.id.clone(),
        group: None,
        reason: SolveFailure::UnexpectedStatus { phase, status },
    };

    let radial = run_lp(cohort, target, &build_phase1(cohort, target, spec), spec)?;
    if !radial.is_optimal() {
        return Err(failure(1, radial.status));
    }
    // θ = 1 with λ_f = 1 is always feasible, so anything above is round-off.
    let theta = radial.values[k].min(1.0);

    let mut slack_fit = run_lp(cohort, target, &build_phase2(cohort, target, theta, spec), spec)?;
    if slack_fit.status == LpStatus::Infeasible {
        // θ* landed a hair below the true optimum.
        let relaxed = theta * (1.0 + 1e-9);
        slack_fit = run_lp(cohort, target, &build_phase2(cohort, target, relaxed, spec), spec)?;
    }
    if !slack_fit.is_optimal() {
        return Err(failure(2, slack_fit.status));
    }

    let (in_scale, out_scale) = slack_scales(cohort, target);
    let snap = |sigma: f64, scale: f64| {
        if sigma <= spec.zero_tolerance {
            0.0
        } else {
            sigma * scale
        }
    };
    let input_slacks: Vec<f64> = (0..n)
        .map(|i| snap(slack_fit.values[k + i], in_scale[i]))
        .collect();
    let output_slacks: Vec<f64> = (0..m)
        .map(|j| snap(slack_fit.values[k + n + j], out_scale[j]))
        .collect();

    let peers = slack_fit.values[..k]
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > spec.zero_tolerance)
        .map(|(index, &weight)| Peer {
            index,
            id: cohort.dmus()[index].id.clone(),
            weight,
        })
        .collect();

    let radially_efficient = theta >= 1.0 - spec.efficiency_tolerance;
    let has_slack = input_slacks.iter().chain(&output_slacks).any(|&s| s > 0.0);
    let status = match (radially_efficient, has_slack) {
        (true, false) => EfficiencyStatus::Efficient,
        (true, true) => EfficiencyStatus::WeaklyEfficient,
        (false, _) => EfficiencyStatus::Inefficient,
    };

    let input_targets = evaluated
        .inputs
        .iter()
        .zip(&input_slacks)
        .map(|(x, s)| theta * x - s)
        .collect();
    let output_targets = evaluated
        .outputs
        .iter()
        .zip(&output_slacks)
        .map(|(y, s)| y + s)
        .collect();

    Ok(EfficiencyResult {
        dmu_id: evaluated.id.clone(),
        index: target,
        theta,
        peers,
        input_slacks,
        output_slacks,
        status,
        input_targets,
        output_targets,
    })
}

/// Scores every DMU of the cohort, in cohort order. Solves run on the
/// current rayon pool; the output does not depend on its size.
pub fn solve_all(cohort: &Cohort, spec: &ModelSpec) -> Result<Vec<EfficiencyResult>, DeaError> {
    spec.validate()?;
    (0..cohort.len())
        .into_par_iter()
        .map(|i| solve_dmu(cohort, i, spec))
        .collect()
}
