//! Decision-making units, validated cohorts and model settings.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::SolverOptions;

/// One decision-making unit: an identifier, an opaque group label and its
/// observed input and output quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmuRecord {
    pub id: String,
    pub group: String,
    pub inputs: Vec<f64>,
    pub outputs: Vec<f64>,
}

impl DmuRecord {
    pub fn new(
        id: impl Into<String>,
        group: impl Into<String>,
        inputs: Vec<f64>,
        outputs: Vec<f64>,
    ) -> Self {
        Self {
            id: id.into(),
            group: group.into(),
            inputs,
            outputs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CohortError {
    #[error("cohort is empty")]
    EmptyCohort,
    #[error("dmu #{index} ('{id}') has {found} {kind}s, expected {expected}")]
    DimensionMismatch {
        index: usize,
        id: String,
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("dmu #{index} ('{id}') has non-positive input x{} = {value}", .input + 1)]
    NonPositiveInput {
        index: usize,
        id: String,
        input: usize,
        value: f64,
    },
    #[error("dmu #{index} ('{id}') has invalid output y{} = {value}", .output + 1)]
    InvalidOutput {
        index: usize,
        id: String,
        output: usize,
        value: f64,
    },
    #[error("dmu #{index} ('{id}') has no positive output")]
    AllZeroOutputs { index: usize, id: String },
    #[error("dmu #{index} has an empty identifier")]
    EmptyId { index: usize },
    #[error("duplicate dmu id '{id}' at #{first} and #{second}")]
    DuplicateId {
        id: String,
        first: usize,
        second: usize,
    },
    #[error("cohort needs at least one input and one output (got N={n_inputs}, M={n_outputs})")]
    NoVariables { n_inputs: usize, n_outputs: usize },
}

/// A group label together with the cohort indices of its members.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupInfo {
    pub label: String,
    pub members: Vec<usize>,
}

impl GroupInfo {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A validated set of DMUs sharing the same numbers of inputs and outputs.
///
/// Groups are kept in order of first appearance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cohort {
    dmus: Vec<DmuRecord>,
    n_inputs: usize,
    n_outputs: usize,
    groups: Vec<GroupInfo>,
}

impl Cohort {
    pub fn dmus(&self) -> &[DmuRecord] {
        &self.dmus
    }

    pub fn len(&self) -> usize {
        self.dmus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dmus.is_empty()
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn groups(&self) -> &[GroupInfo] {
        &self.groups
    }

    pub fn group(&self, label: &str) -> Option<&GroupInfo> {
        self.groups.iter().find(|g| g.label == label)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.dmus.iter().position(|d| d.id == id)
    }

    pub fn into_records(self) -> Vec<DmuRecord> {
        self.dmus
    }

    /// Sub-cohort holding the given members, in the given order.
    pub fn subset(&self, members: &[usize]) -> Result<Cohort, CohortError> {
        validate_cohort(members.iter().map(|&i| self.dmus[i].clone()).collect())
    }

    /// Returns a copy with one extra DMU appended.
    pub fn with_appended(&self, record: DmuRecord) -> Result<Cohort, CohortError> {
        let mut records = self.dmus.clone();
        records.push(record);
        validate_cohort(records)
    }
}

/// Validates raw records into a [`Cohort`].
pub fn validate_cohort(records: Vec<DmuRecord>) -> Result<Cohort, CohortError> {
    let first = records.first().ok_or(CohortError::EmptyCohort)?;
    let n_inputs = first.inputs.len();
    let n_outputs = first.outputs.len();
    if n_inputs == 0 || n_outputs == 0 {
        return Err(CohortError::NoVariables {
            n_inputs,
            n_outputs,
        });
    }

    let mut seen: HashMap<&str, usize> = HashMap::with_capacity(records.len());
    for (index, dmu) in records.iter().enumerate() {
        if dmu.id.is_empty() {
            return Err(CohortError::EmptyId { index });
        }
        if dmu.inputs.len() != n_inputs {
            return Err(CohortError::DimensionMismatch {
                index,
                id: dmu.id.clone(),
                kind: "input",
                expected: n_inputs,
                found: dmu.inputs.len(),
            });
        }
        if dmu.outputs.len() != n_outputs {
            return Err(CohortError::DimensionMismatch {
                index,
                id: dmu.id.clone(),
                kind: "output",
                expected: n_outputs,
                found: dmu.outputs.len(),
            });
        }
        // NaN fails `> 0.0`, so it is rejected here too.
        if let Some((input, &value)) = dmu
            .inputs
            .iter()
            .enumerate()
            .find(|(_, &x)| !(x > 0.0 && x.is_finite()))
        {
            return Err(CohortError::NonPositiveInput {
                index,
                id: dmu.id.clone(),
                input,
                value,
            });
        }
        if let Some((output, &value)) = dmu
            .outputs
            .iter()
            .enumerate()
            .find(|(_, &y)| !(y >= 0.0 && y.is_finite()))
        {
            return Err(CohortError::InvalidOutput {
                index,
                id: dmu.id.clone(),
                output,
                value,
            });
        }
        if dmu.outputs.iter().all(|&y| y == 0.0) {
            return Err(CohortError::AllZeroOutputs {
                index,
                id: dmu.id.clone(),
            });
        }
        if let Some(&prev) = seen.get(dmu.id.as_str()) {
            return Err(CohortError::DuplicateId {
                id: dmu.id.clone(),
                first: prev,
                second: index,
            });
        }
        seen.insert(dmu.id.as_str(), index);
    }

    let mut groups: Vec<GroupInfo> = Vec::new();
    for (index, dmu) in records.iter().enumerate() {
        match groups.iter_mut().find(|g| g.label == dmu.group) {
            Some(g) => g.members.push(index),
            None => groups.push(GroupInfo {
                label: dmu.group.clone(),
                members: vec![index],
            }),
        }
    }

    Ok(Cohort {
        dmus: records,
        n_inputs,
        n_outputs,
        groups,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReturnsToScale {
    /// Constant returns to scale (CCR).
    Crs,
    /// Variable returns to scale (BCC): CCR plus the convexity row.
    Vrs,
}

impl std::fmt::Display for ReturnsToScale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReturnsToScale::Crs => f.write_str("crs"),
            ReturnsToScale::Vrs => f.write_str("vrs"),
        }
    }
}

impl std::str::FromStr for ReturnsToScale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "crs" | "ccr" => Ok(ReturnsToScale::Crs),
            "vrs" | "bcc" => Ok(ReturnsToScale::Vrs),
            other => Err(format!("unknown returns-to-scale '{other}' (expected crs or vrs)")),
        }
    }
}

/// Only input orientation is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Input,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("{name} must be in (0, 1e-2), got {value}")]
    Tolerance { name: &'static str, value: f64 },
}

/// Model settings shared by every solve of an analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    pub returns_to_scale: ReturnsToScale,
    pub orientation: Orientation,
    /// θ ≥ 1 − efficiency_tolerance counts as radially efficient.
    pub efficiency_tolerance: f64,
    /// Slacks whose relative size (slack / observed value) is at or below
    /// this are snapped to zero.
    pub zero_tolerance: f64,
    #[serde(skip)]
    pub solver: SolverOptions,
}

impl ModelSpec {
    pub const DEFAULT_EFFICIENCY_TOLERANCE: f64 = 1e-6;
    pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-9;

    pub fn new(returns_to_scale: ReturnsToScale) -> Self {
        Self {
            returns_to_scale,
            orientation: Orientation::Input,
            efficiency_tolerance: Self::DEFAULT_EFFICIENCY_TOLERANCE,
            zero_tolerance: Self::DEFAULT_ZERO_TOLERANCE,
            solver: SolverOptions::default(),
        }
    }

    pub fn crs() -> Self {
        Self::new(ReturnsToScale::Crs)
    }

    pub fn vrs() -> Self {
        Self::new(ReturnsToScale::Vrs)
    }

    pub fn with_tolerances(
        mut self,
        efficiency_tolerance: f64,
        zero_tolerance: f64,
    ) -> Result<Self, SpecError> {
        self.efficiency_tolerance = efficiency_tolerance;
        self.zero_tolerance = zero_tolerance;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        for (name, value) in [
            ("efficiency_tolerance", self.efficiency_tolerance),
            ("zero_tolerance", self.zero_tolerance),
        ] {
            if !(value > 0.0 && value < 1e-2) {
                return Err(SpecError::Tolerance { name, value });
            }
        }
        Ok(())
    }
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self::crs()
    }
}

/// Outcome of the sample-size rule Ψ ≥ max(M·N, 3·(M+N)) for one scope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminationCheck {
    pub scope: String,
    pub size: usize,
    pub threshold: usize,
    pub pass: bool,
}

pub fn discrimination_threshold(n_inputs: usize, n_outputs: usize) -> usize {
    (n_inputs * n_outputs).max(3 * (n_inputs + n_outputs))
}

/// Evaluates the discrimination rule per group, or once for the whole
/// cohort (scope label `"global"`). Informational only.
pub fn check_discrimination(cohort: &Cohort, per_group: bool) -> Vec<DiscriminationCheck> {
    let threshold = discrimination_threshold(cohort.n_inputs, cohort.n_outputs);
    let entry = |scope: &str, size: usize| DiscriminationCheck {
        scope: scope.to_string(),
        size,
        threshold,
        pass: size >= threshold,
    };
    if per_group {
        cohort
            .groups
            .iter()
            .map(|g| entry(&g.label, g.size()))
            .collect()
    } else {
        vec![entry("global", cohort.len())]
    }
}
