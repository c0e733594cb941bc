//! Local (per-group) versus global (pooled) benchmarking.
//!
//! Local scope solves every group as an isolated cohort; global scope solves
//! the pooled cohort once and disaggregates the results by group. The
//! summaries here are pure functions of the per-DMU results so any report
//! built from them can be recomputed from its per-DMU records.

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{Cohort, DmuRecord, ModelSpec};
use crate::engine::{solve_all, DeaError, EfficiencyResult, EfficiencyStatus};

/// Which units the average excess-input proportion is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExcessMode {
    /// Every unit of the group; units without slack contribute zero.
    #[default]
    All,
    /// Only units not classified `Efficient`.
    InefficientOnly,
}

impl std::str::FromStr for ExcessMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(ExcessMode::All),
            "inefficient-only" => Ok(ExcessMode::InefficientOnly),
            other => Err(format!(
                "unknown excess mode '{other}' (expected all or inefficient-only)"
            )),
        }
    }
}

impl std::fmt::Display for ExcessMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExcessMode::All => "all",
            ExcessMode::InefficientOnly => "inefficient-only",
        })
    }
}

/// Efficiency statistics of one group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub group: String,
    pub size: usize,
    pub avg_theta: f64,
    /// Sample standard deviation (divisor Ψ − 1); zero for a single unit.
    pub std_theta: f64,
    pub min_theta: f64,
    /// Strictly efficient units (θ = 1 and no slack).
    pub efficient_count: usize,
    pub efficient_pct: f64,
    /// Units with θ = 1, weakly efficient ones included.
    pub frontier_count: usize,
    pub frontier_pct: f64,
}

/// Average excess input per input dimension, in percent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlackSummary {
    pub group: String,
    pub excess_pct: Vec<f64>,
    /// Index of the largest `excess_pct` entry, lowest index on ties.
    pub pivotal_input: usize,
}

pub fn percent(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

/// Summarises the θ values and statuses of one group's results.
pub fn summarize(group: &str, results: &[&EfficiencyResult]) -> GroupSummary {
    let size = results.len();
    let thetas: Vec<f64> = results.iter().map(|r| r.theta).collect();
    let avg = if size == 0 {
        0.0
    } else {
        thetas.iter().sum::<f64>() / size as f64
    };
    let std = if size < 2 {
        0.0
    } else {
        let ss: f64 = thetas.iter().map(|t| (t - avg) * (t - avg)).sum();
        (ss / (size - 1) as f64).sqrt()
    };
    let min = thetas.iter().copied().fold(f64::INFINITY, f64::min);
    let efficient_count = results
        .iter()
        .filter(|r| r.status == EfficiencyStatus::Efficient)
        .count();
    let frontier_count = results.iter().filter(|r| r.status.is_frontier()).count();
    GroupSummary {
        group: group.to_string(),
        size,
        avg_theta: avg,
        std_theta: std,
        min_theta: if size == 0 { 0.0 } else { min },
        efficient_count,
        efficient_pct: percent(efficient_count, size),
        frontier_count,
        frontier_pct: percent(frontier_count, size),
    }
}

/// Average of `s_ik / x_ik` over the selected units, times 100, for each
/// input `i`. `dmus[k]` must be the unit scored by `results[k]`.
pub fn excess_proportions(
    dmus: &[&DmuRecord],
    results: &[&EfficiencyResult],
    mode: ExcessMode,
) -> Vec<f64> {
    assert_eq!(dmus.len(), results.len(), "one result per dmu");
    let n = dmus.first().map_or(0, |d| d.inputs.len());
    let mut total = vec![0.0; n];
    let mut counted = 0usize;
    for (dmu, result) in dmus.iter().zip(results) {
        debug_assert_eq!(dmu.id, result.dmu_id);
        if mode == ExcessMode::InefficientOnly && result.status == EfficiencyStatus::Efficient {
            continue;
        }
        counted += 1;
        for ((acc, s), x) in total.iter_mut().zip(&result.input_slacks).zip(&dmu.inputs) {
            *acc += s / x;
        }
    }
    if counted > 0 {
        total
            .iter_mut()
            .for_each(|v| *v = 100.0 * *v / counted as f64);
    }
    total
}

pub fn pivotal_input(excess_pct: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in excess_pct.iter().enumerate() {
        if v > excess_pct[best] {
            best = i;
        }
    }
    best
}

pub fn slack_summary(
    group: &str,
    dmus: &[&DmuRecord],
    results: &[&EfficiencyResult],
    mode: ExcessMode,
) -> SlackSummary {
    let excess_pct = excess_proportions(dmus, results, mode);
    SlackSummary {
        group: group.to_string(),
        pivotal_input: pivotal_input(&excess_pct),
        excess_pct,
    }
}

/// Results for one group solved on its own.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupAnalysis {
    pub group: String,
    /// Results in group order. `index` and peer indices refer to the full
    /// cohort.
    pub results: Vec<EfficiencyResult>,
    pub summary: GroupSummary,
    pub slack: SlackSummary,
}

/// Pooled results with per-group disaggregation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalAnalysis {
    /// Results in cohort order.
    pub results: Vec<EfficiencyResult>,
    pub groups: Vec<(GroupSummary, SlackSummary)>,
}

fn group_slices<'a>(
    cohort: &'a Cohort,
    members: &[usize],
    results: &'a [EfficiencyResult],
) -> (Vec<&'a DmuRecord>, Vec<&'a EfficiencyResult>) {
    let dmus = members.iter().map(|&i| &cohort.dmus()[i]).collect();
    let res = members.iter().map(|&i| &results[i]).collect();
    (dmus, res)
}

/// Solves each group as its own cohort.
pub fn analyze_local(
    cohort: &Cohort,
    spec: &ModelSpec,
    mode: ExcessMode,
) -> Result<Vec<GroupAnalysis>, DeaError> {
    cohort
        .groups()
        .par_iter()
        .map(|group| {
            let sub = cohort.subset(&group.members)?;
            let mut results = solve_all(&sub, spec).map_err(|e| e.in_group(&group.label))?;
            for r in &mut results {
                r.index = group.members[r.index];
                for p in &mut r.peers {
                    p.index = group.members[p.index];
                }
            }
            let dmus: Vec<&DmuRecord> = group.members.iter().map(|&i| &cohort.dmus()[i]).collect();
            let refs: Vec<&EfficiencyResult> = results.iter().collect();
            let summary = summarize(&group.label, &refs);
            let slack = slack_summary(&group.label, &dmus, &refs, mode);
            Ok(GroupAnalysis {
                group: group.label.clone(),
                results,
                summary,
                slack,
            })
        })
        .collect()
}

/// Solves the pooled cohort once and summarises each group from it.
pub fn analyze_global(
    cohort: &Cohort,
    spec: &ModelSpec,
    mode: ExcessMode,
) -> Result<GlobalAnalysis, DeaError> {
    let results = solve_all(cohort, spec)?;
    let groups = cohort
        .groups()
        .iter()
        .map(|g| {
            let (dmus, refs) = group_slices(cohort, &g.members, &results);
            (
                summarize(&g.label, &refs),
                slack_summary(&g.label, &dmus, &refs, mode),
            )
        })
        .collect();
    Ok(GlobalAnalysis { results, groups })
}

/// Local and global outcome of one DMU.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DmuComparison {
    pub dmu_id: String,
    pub group: String,
    pub theta_local: f64,
    pub theta_global: f64,
    pub status_local: EfficiencyStatus,
    pub status_global: EfficiencyStatus,
    pub worse: bool,
    pub shifted: bool,
}

impl DmuComparison {
    /// Classifies a pair of results; `tolerance` is the θ drop that counts
    /// as a deterioration.
    pub fn classify(
        dmu: &DmuRecord,
        local: &EfficiencyResult,
        global: &EfficiencyResult,
        tolerance: f64,
    ) -> Self {
        let shifted = local.status == EfficiencyStatus::Efficient
            && global.status != EfficiencyStatus::Efficient;
        // Losing strict efficiency at unchanged θ also counts as worse, so
        // the shifted units are always a subset of the worse ones.
        let worse = global.theta < local.theta - tolerance || shifted;
        DmuComparison {
            dmu_id: dmu.id.clone(),
            group: dmu.group.clone(),
            theta_local: local.theta,
            theta_global: global.theta,
            status_local: local.status,
            status_global: global.status,
            worse,
            shifted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupComparison {
    pub group: String,
    pub size: usize,
    pub local: GroupSummary,
    pub global: GroupSummary,
    pub local_slack: SlackSummary,
    pub global_slack: SlackSummary,
    pub worse_count: usize,
    pub worse_pct: f64,
    pub shifted_count: usize,
    pub shifted_pct: f64,
    pub pivotal_changed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScopeComparison {
    /// One entry per DMU, cohort order.
    pub dmus: Vec<DmuComparison>,
    pub groups: Vec<GroupComparison>,
    pub worse_total: usize,
    pub worse_total_pct: f64,
    pub shifted_total: usize,
    pub shifted_total_pct: f64,
}

/// Everything a two-scope run produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScopeRun {
    pub local: Vec<GroupAnalysis>,
    pub global: GlobalAnalysis,
    pub comparison: ScopeComparison,
}

/// Builds the comparison from already computed local and global analyses.
pub fn assemble_comparison(
    cohort: &Cohort,
    local: &[GroupAnalysis],
    global: &GlobalAnalysis,
    tolerance: f64,
) -> ScopeComparison {
    let mut local_by_index: Vec<Option<&EfficiencyResult>> = vec![None; cohort.len()];
    for g in local {
        for r in &g.results {
            local_by_index[r.index] = Some(r);
        }
    }
    let dmus: Vec<DmuComparison> = cohort
        .dmus()
        .iter()
        .enumerate()
        .map(|(i, dmu)| {
            let l = local_by_index[i].expect("every dmu belongs to a group");
            DmuComparison::classify(dmu, l, &global.results[i], tolerance)
        })
        .collect();

    let groups: Vec<GroupComparison> = cohort
        .groups()
        .iter()
        .zip(local)
        .zip(&global.groups)
        .map(|((info, loc), (gsum, gslack))| {
            debug_assert_eq!(info.label, loc.group);
            let worse_count = info.members.iter().filter(|&&i| dmus[i].worse).count();
            let shifted_count = info.members.iter().filter(|&&i| dmus[i].shifted).count();
            let size = info.size();
            GroupComparison {
                group: info.label.clone(),
                size,
                local: loc.summary.clone(),
                global: gsum.clone(),
                local_slack: loc.slack.clone(),
                global_slack: gslack.clone(),
                worse_count,
                worse_pct: percent(worse_count, size),
                shifted_count,
                shifted_pct: percent(shifted_count, size),
                pivotal_changed: loc.slack.pivotal_input != gslack.pivotal_input,
            }
        })
        .collect();

    let worse_total = dmus.iter().filter(|d| d.worse).count();
    let shifted_total = dmus.iter().filter(|d| d.shifted).count();
    ScopeComparison {
        worse_total,
        worse_total_pct: percent(worse_total, cohort.len()),
        shifted_total,
        shifted_total_pct: percent(shifted_total, cohort.len()),
        dmus,
        groups,
    }
}

/// Runs both scopes and compares them.
pub fn compare_scopes(
    cohort: &Cohort,
    spec: &ModelSpec,
    mode: ExcessMode,
) -> Result<ScopeRun, DeaError> {
    let local = analyze_local(cohort, spec, mode)?;
    let global = analyze_global(cohort, spec, mode)?;
    let comparison = assemble_comparison(cohort, &local, &global, spec.efficiency_tolerance);
    Ok(ScopeRun {
        local,
        global,
        comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::validate_cohort;
    use approx::assert_abs_diff_eq;

    fn cohort(rows: &[(&str, &str, &[f64], &[f64])]) -> Cohort {
        validate_cohort(
            rows.iter()
                .map(|(id, g, x, y)| DmuRecord::new(*id, *g, x.to_vec(), y.to_vec()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn singleton_group() {
        let c = cohort(&[("A", "g", &[3.0, 1.0], &[2.0])]);
        let local = analyze_local(&c, &ModelSpec::crs(), ExcessMode::All).unwrap();
        let s = &local[0].summary;
        assert_eq!((s.avg_theta, s.min_theta, s.std_theta), (1.0, 1.0, 0.0));
        assert_eq!(s.efficient_pct, 100.0);
        assert_eq!(local[0].slack.excess_pct, vec![0.0, 0.0]);
    }

    #[test]
    fn two_unit_group_summary() {
        let c = cohort(&[("A", "g", &[2.0], &[2.0]), ("B", "g", &[4.0], &[2.0])]);
        let local = analyze_local(&c, &ModelSpec::crs(), ExcessMode::All).unwrap();
        let s = &local[0].summary;
        assert_abs_diff_eq!(s.avg_theta, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(s.min_theta, 0.5, epsilon = 1e-12);
        // sample std of {1, 0.5}
        assert_abs_diff_eq!(s.std_theta, (0.125f64).sqrt(), epsilon = 1e-12);
        assert_eq!(s.efficient_count, 1);
        assert_eq!(s.efficient_pct, 50.0);
    }

    #[test]
    fn weak_instance_excess() {
        let c = cohort(&[
            ("A", "g", &[1.0, 4.0], &[1.0]),
            ("B", "g", &[4.0, 1.0], &[1.0]),
            ("C", "g", &[6.0, 1.0], &[1.0]),
        ]);
        let local = analyze_local(&c, &ModelSpec::crs(), ExcessMode::All).unwrap();
        let slack = &local[0].slack;
        assert_abs_diff_eq!(slack.excess_pct[0], 100.0 * (2.0 / 6.0) / 3.0, epsilon = 1e-8);
        assert_abs_diff_eq!(slack.excess_pct[1], 0.0);
        assert_eq!(slack.pivotal_input, 0);
        assert_eq!(local[0].summary.efficient_count, 2);
        assert_eq!(local[0].summary.frontier_count, 3);

        let only = analyze_local(&c, &ModelSpec::crs(), ExcessMode::InefficientOnly).unwrap();
        assert_abs_diff_eq!(only[0].slack.excess_pct[0], 100.0 * 2.0 / 6.0, epsilon = 1e-8);
    }

    #[test]
    fn pivotal_ties_take_lowest_index() {
        assert_eq!(pivotal_input(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(pivotal_input(&[0.0, 0.0]), 0);
    }

    #[test]
    fn shift_fixture() {
        let c = cohort(&[
            ("A", "g1", &[2.0], &[2.0]),
            ("B", "g1", &[4.0], &[2.0]),
            ("Z", "g2", &[1.0], &[2.0]),
        ]);
        let run = compare_scopes(&c, &ModelSpec::crs(), ExcessMode::All).unwrap();
        let a = &run.comparison.dmus[0];
        assert_abs_diff_eq!(a.theta_local, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.theta_global, 0.5, epsilon = 1e-12);
        let g1 = &run.comparison.groups[0];
        assert_eq!((g1.worse_count, g1.shifted_count), (2, 1));
        let g2 = &run.comparison.groups[1];
        assert_eq!((g2.worse_count, g2.shifted_count), (0, 0));
        assert_eq!(run.comparison.worse_total, 2);
    }

    #[test]
    fn single_group_scopes_coincide() {
        let c = cohort(&[
            ("A", "g", &[2.0, 1.0], &[2.0]),
            ("B", "g", &[4.0, 3.0], &[2.0]),
            ("C", "g", &[1.0, 3.0], &[1.5]),
        ]);
        let run = compare_scopes(&c, &ModelSpec::crs(), ExcessMode::All).unwrap();
        assert_eq!(run.local[0].summary, run.global.groups[0].0);
        assert_eq!(run.local[0].slack, run.global.groups[0].1);
        assert_eq!(run.comparison.worse_total, 0);
        assert_eq!(run.comparison.shifted_total, 0);
        assert!(!run.comparison.groups[0].pivotal_changed);
    }
}
