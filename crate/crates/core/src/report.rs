//! Report assembly and rendering.
//!
//! A [`ReportBundle`] holds full-precision values only; rounding to three
//! decimals for efficiencies and two for percentages happens in
//! [`ReportBundle::to_text`]. The JSON and CSV renderings carry the same
//! unrounded numbers.

use std::fmt::Write as _;

use serde::Serialize;

use crate::domain::{check_discrimination, Cohort, DiscriminationCheck, ModelSpec, Orientation, ReturnsToScale};
use crate::engine::EfficiencyResult;
use crate::scope::{ExcessMode, GlobalAnalysis, GroupAnalysis, GroupSummary, ScopeRun, SlackSummary};

pub const TOOL_NAME: &str = "deabench";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const EFFICIENT_CONVENTION: &str =
    "efficient = theta at 1 with zero slacks; frontier counts also include weakly efficient units";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Group,
    Global,
}

impl std::str::FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "group" => Ok(Scope::Group),
            "global" => Ok(Scope::Global),
            other => Err(format!("unknown scope '{other}' (expected group or global)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelInfo {
    pub returns_to_scale: ReturnsToScale,
    pub orientation: Orientation,
    pub efficiency_tolerance: f64,
    pub zero_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSize {
    pub group: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub source: String,
    pub seed: Option<u64>,
    pub model: ModelInfo,
    pub excess_mode: ExcessMode,
    pub std_divisor: &'static str,
    pub efficient_convention: &'static str,
    pub n_dmus: usize,
    pub n_inputs: usize,
    pub n_outputs: usize,
    pub groups: Vec<GroupSize>,
    pub discrimination: Vec<DiscriminationCheck>,
}

/// One scope's result for one DMU, plus the radial share of its excess.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DmuScopeResult {
    #[serde(flatten)]
    pub result: EfficiencyResult,
    pub radial_excess: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DmuReport {
    pub dmu_id: String,
    pub group: String,
    pub local: Option<DmuScopeResult>,
    pub global: Option<DmuScopeResult>,
    pub worse: Option<bool>,
    pub shifted: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupTables {
    pub efficiency: GroupSummary,
    pub slack: SlackSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupShift {
    pub group: String,
    pub size: usize,
    pub worse_count: usize,
    pub worse_pct: f64,
    pub shifted_count: usize,
    pub shifted_pct: f64,
    pub local_pivotal_input: usize,
    pub global_pivotal_input: usize,
    pub pivotal_changed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub groups: Vec<GroupShift>,
    pub worse_total: usize,
    pub worse_total_pct: f64,
    pub shifted_total: usize,
    pub shifted_total_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBundle {
    pub metadata: Metadata,
    pub per_dmu: Vec<DmuReport>,
    /// Per-group tables from group-by-group solves.
    pub local: Option<Vec<GroupTables>>,
    /// Per-group tables disaggregated from the pooled solve.
    pub global: Option<Vec<GroupTables>>,
    pub comparison: Option<ComparisonReport>,
}

/// Run settings recorded in the report metadata.
#[derive(Debug, Clone)]
pub struct RunInfo {
    pub command: String,
    pub source: String,
    pub seed: Option<u64>,
    pub spec: ModelSpec,
    pub excess_mode: ExcessMode,
}

fn metadata(cohort: &Cohort, info: &RunInfo) -> Metadata {
    Metadata {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        command: info.command.clone(),
        source: info.source.clone(),
        seed: info.seed,
        model: ModelInfo {
            returns_to_scale: info.spec.returns_to_scale,
            orientation: info.spec.orientation,
            efficiency_tolerance: info.spec.efficiency_tolerance,
            zero_tolerance: info.spec.zero_tolerance,
        },
        excess_mode: info.excess_mode,
        std_divisor: "n-1",
        efficient_convention: EFFICIENT_CONVENTION,
        n_dmus: cohort.len(),
        n_inputs: cohort.n_inputs(),
        n_outputs: cohort.n_outputs(),
        groups: cohort
            .groups()
            .iter()
            .map(|g| GroupSize {
                group: g.label.clone(),
                size: g.size(),
            })
            .collect(),
        discrimination: check_discrimination(cohort, true),
    }
}

fn scope_result(cohort: &Cohort, r: &EfficiencyResult) -> DmuScopeResult {
    DmuScopeResult {
        radial_excess: r.radial_excess(&cohort.dmus()[r.index].inputs),
        result: r.clone(),
    }
}

fn local_by_index(cohort: &Cohort, local: &[GroupAnalysis]) -> Vec<Option<DmuScopeResult>> {
    let mut out = vec![None; cohort.len()];
    for g in local {
        for r in &g.results {
            out[r.index] = Some(scope_result(cohort, r));
        }
    }
    out
}

fn local_tables(local: &[GroupAnalysis]) -> Vec<GroupTables> {
    local
        .iter()
        .map(|g| GroupTables {
            efficiency: g.summary.clone(),
            slack: g.slack.clone(),
        })
        .collect()
}

fn global_tables(global: &GlobalAnalysis) -> Vec<GroupTables> {
    global
        .groups
        .iter()
        .map(|(s, k)| GroupTables {
            efficiency: s.clone(),
            slack: k.clone(),
        })
        .collect()
}

impl ReportBundle {
    /// Report for a single-scope run.
    pub fn single_scope(
        cohort: &Cohort,
        info: &RunInfo,
        local: Option<&[GroupAnalysis]>,
        global: Option<&GlobalAnalysis>,
    ) -> Self {
        let mut locals = local.map_or_else(|| vec![None; cohort.len()], |l| local_by_index(cohort, l));
        let per_dmu = cohort
            .dmus()
            .iter()
            .enumerate()
            .map(|(i, d)| DmuReport {
                dmu_id: d.id.clone(),
                group: d.group.clone(),
                local: locals[i].take(),
                global: global.map(|g| scope_result(cohort, &g.results[i])),
                worse: None,
                shifted: None,
            })
            .collect();
        ReportBundle {
            metadata: metadata(cohort, info),
            per_dmu,
            local: local.map(local_tables),
            global: global.map(global_tables),
            comparison: None,
        }
    }

    /// Report for a local-versus-global comparison.
    pub fn comparison(cohort: &Cohort, info: &RunInfo, run: &ScopeRun) -> Self {
        let mut locals = local_by_index(cohort, &run.local);
        let per_dmu = cohort
            .dmus()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let cmp = &run.comparison.dmus[i];
                DmuReport {
                    dmu_id: d.id.clone(),
                    group: d.group.clone(),
                    local: locals[i].take(),
                    global: Some(scope_result(cohort, &run.global.results[i])),
                    worse: Some(cmp.worse),
                    shifted: Some(cmp.shifted),
                }
            })
            .collect();
        let c = &run.comparison;
        let comparison = ComparisonReport {
            groups: c
                .groups
                .iter()
                .map(|g| GroupShift {
                    group: g.group.clone(),
                    size: g.size,
                    worse_count: g.worse_count,
                    worse_pct: g.worse_pct,
                    shifted_count: g.shifted_count,
                    shifted_pct: g.shifted_pct,
                    local_pivotal_input: g.local_slack.pivotal_input,
                    global_pivotal_input: g.global_slack.pivotal_input,
                    pivotal_changed: g.pivotal_changed,
                })
                .collect(),
            worse_total: c.worse_total,
            worse_total_pct: c.worse_total_pct,
            shifted_total: c.shifted_total,
            shifted_total_pct: c.shifted_total_pct,
        };
        ReportBundle {
            metadata: metadata(cohort, info),
            per_dmu,
            local: Some(local_tables(&run.local)),
            global: Some(global_tables(&run.global)),
            comparison: Some(comparison),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    /// Long-format CSV: `section,key,field,value`, one value per line.
    pub fn to_csv(&self) -> String {
        let mut rows = LongRows::default();
        let md = &self.metadata;
        rows.push("metadata", "", "tool", md.tool);
        rows.push("metadata", "", "version", md.version);
        rows.push("metadata", "", "command", &md.command);
        rows.push("metadata", "", "source", &md.source);
        if let Some(seed) = md.seed {
            rows.push("metadata", "", "seed", seed);
        }
        rows.push("metadata", "", "returns_to_scale", md.model.returns_to_scale);
        rows.push("metadata", "", "efficiency_tolerance", md.model.efficiency_tolerance);
        rows.push("metadata", "", "zero_tolerance", md.model.zero_tolerance);
        rows.push("metadata", "", "excess_mode", md.excess_mode);
        rows.push("metadata", "", "n_dmus", md.n_dmus);
        rows.push("metadata", "", "n_inputs", md.n_inputs);
        rows.push("metadata", "", "n_outputs", md.n_outputs);
        for g in &md.groups {
            rows.push("table1", &g.group, "size", g.size);
        }
        for d in &md.discrimination {
            rows.push("discrimination", &d.scope, "threshold", d.threshold);
            rows.push("discrimination", &d.scope, "pass", d.pass);
        }

        let tables = [
            (&self.local, "table2", "table3"),
            (&self.global, "table4", "table5"),
        ];
        for (scope, eff, slack) in tables {
            for t in scope.iter().flatten() {
                let s = &t.efficiency;
                rows.push(eff, &s.group, "avg_theta", s.avg_theta);
                rows.push(eff, &s.group, "std_theta", s.std_theta);
                rows.push(eff, &s.group, "min_theta", s.min_theta);
                rows.push(eff, &s.group, "efficient_count", s.efficient_count);
                rows.push(eff, &s.group, "efficient_pct", s.efficient_pct);
                rows.push(eff, &s.group, "frontier_count", s.frontier_count);
                rows.push(eff, &s.group, "frontier_pct", s.frontier_pct);
                for (i, v) in t.slack.excess_pct.iter().enumerate() {
                    rows.push(slack, &t.slack.group, &format!("x{}", i + 1), v);
                }
                rows.push(slack, &t.slack.group, "pivotal_input", format!("x{}", t.slack.pivotal_input + 1));
            }
        }
        if let Some(c) = &self.comparison {
            for g in &c.groups {
                rows.push("comparison", &g.group, "worse_count", g.worse_count);
                rows.push("comparison", &g.group, "worse_pct", g.worse_pct);
                rows.push("comparison", &g.group, "shifted_count", g.shifted_count);
                rows.push("comparison", &g.group, "shifted_pct", g.shifted_pct);
                rows.push("comparison", &g.group, "pivotal_changed", g.pivotal_changed);
            }
            rows.push("comparison", "", "worse_total", c.worse_total);
            rows.push("comparison", "", "worse_total_pct", c.worse_total_pct);
            rows.push("comparison", "", "shifted_total", c.shifted_total);
            rows.push("comparison", "", "shifted_total_pct", c.shifted_total_pct);
        }

        for d in &self.per_dmu {
            for (section, res) in [("dmu_local", &d.local), ("dmu_global", &d.global)] {
                let Some(res) = res else { continue };
                let r = &res.result;
                let id = d.dmu_id.as_str();
                rows.push(section, id, "group", &d.group);
                rows.push(section, id, "theta", r.theta);
                rows.push(section, id, "status", r.status);
                for p in &r.peers {
                    rows.push(section, id, &format!("lambda:{}", p.id), p.weight);
                }
                let vectors = [
                    ("input_slack", &r.input_slacks, 'x'),
                    ("output_slack", &r.output_slacks, 'y'),
                    ("input_target", &r.input_targets, 'x'),
                    ("output_target", &r.output_targets, 'y'),
                    ("radial_excess", &res.radial_excess, 'x'),
                ];
                for (name, values, prefix) in vectors {
                    for (i, v) in values.iter().enumerate() {
                        rows.push(section, id, &format!("{name}:{prefix}{}", i + 1), v);
                    }
                }
            }
            if let (Some(w), Some(s)) = (d.worse, d.shifted) {
                rows.push("dmu_comparison", &d.dmu_id, "worse", w);
                rows.push("dmu_comparison", &d.dmu_id, "shifted", s);
            }
        }
        rows.finish()
    }

    /// Plain-text tables laid out with one column per group.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let md = &self.metadata;
        let _ = writeln!(
            out,
            "{} {} | {} | {} | K={} N={} M={} | rts={} | excess={}",
            md.tool,
            md.version,
            md.command,
            md.source,
            md.n_dmus,
            md.n_inputs,
            md.n_outputs,
            md.model.returns_to_scale,
            md.excess_mode
        );
        if let Some(seed) = md.seed {
            let _ = writeln!(out, "seed {seed}");
        }
        let labels: Vec<&str> = md.groups.iter().map(|g| g.group.as_str()).collect();
        let table = TextTable::new(&labels);

        table.title(&mut out, "Table 1: group sizes");
        table.row(&mut out, "Size", md.groups.iter().map(|g| g.size.to_string()));
        table.row(
            &mut out,
            "Discrim.",
            md.discrimination
                .iter()
                .map(|d| format!("{}{}", if d.pass { "ok>=" } else { "FAIL<" }, d.threshold)),
        );

        if let Some(local) = &self.local {
            table.efficiency(&mut out, "Table 2: local (group-wise) efficiency", local, None);
            table.slacks(&mut out, "Table 3: local average excess input (%), * = pivotal", local, None);
        }
        if let Some(global) = &self.global {
            let shifts = self.comparison.as_ref().map(|c| c.groups.as_slice());
            table.efficiency(&mut out, "Table 4: global (pooled) efficiency", global, shifts);
            table.slacks(
                &mut out,
                "Table 5: global average excess input (%), * = pivotal",
                global,
                shifts,
            );
        }
        if let Some(c) = &self.comparison {
            let _ = writeln!(
                out,
                "\nOverall: worse {} of {} ({:.2}%), shifted {} ({:.2}%)",
                c.worse_total, md.n_dmus, c.worse_total_pct, c.shifted_total, c.shifted_total_pct
            );
        }
        let _ = writeln!(out, "\nNote: {EFFICIENT_CONVENTION}; STD uses divisor n-1.");

        let _ = writeln!(out, "\nPer-DMU results");
        let _ = writeln!(
            out,
            "{:<12} {:<8} {:>8} {:<17} {:>8} {:<17} peers",
            "dmu_id", "group", "theta_l", "status_l", "theta_g", "status_g"
        );
        for d in &self.per_dmu {
            let fmt = |r: &Option<DmuScopeResult>| match r {
                Some(r) => (format!("{:.3}", r.result.theta), r.result.status.to_string()),
                None => ("-".into(), "-".into()),
            };
            let (tl, sl) = fmt(&d.local);
            let (tg, sg) = fmt(&d.global);
            let peers = d
                .global
                .as_ref()
                .or(d.local.as_ref())
                .map(|r| {
                    r.result
                        .peers
                        .iter()
                        .map(|p| format!("{}:{:.3}", p.id, p.weight))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default();
            let _ = writeln!(out, "{:<12} {:<8} {:>8} {:<17} {:>8} {:<17} {}", d.dmu_id, d.group, tl, sl, tg, sg, peers);
        }
        out
    }
}

#[derive(Default)]
struct LongRows {
    wtr: Option<csv::Writer<Vec<u8>>>,
}

impl LongRows {
    fn push(&mut self, section: &str, key: &str, field: &str, value: impl std::fmt::Display) {
        let wtr = self.wtr.get_or_insert_with(|| {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["section", "key", "field", "value"])
                .expect("in-memory write");
            w
        });
        wtr.write_record([section, key, field, &value.to_string()])
            .expect("in-memory write");
    }

    fn finish(self) -> String {
        let bytes = self
            .wtr
            .map(|w| w.into_inner().expect("in-memory flush"))
            .unwrap_or_default();
        String::from_utf8(bytes).expect("csv output is utf-8")
    }
}

struct TextTable {
    labels: Vec<String>,
    width: usize,
}

impl TextTable {
    const STUB: usize = 10;

    fn new(labels: &[&str]) -> Self {
        let width = labels.iter().map(|l| l.len()).max().unwrap_or(0).max(7) + 1;
        Self {
            labels: labels.iter().map(|l| l.to_string()).collect(),
            width,
        }
    }

    fn title(&self, out: &mut String, title: &str) {
        let _ = writeln!(out, "\n{title}");
        let _ = write!(out, "{:<w$}", "Group", w = Self::STUB);
        for l in &self.labels {
            let _ = write!(out, "{:>w$}", l, w = self.width);
        }
        let _ = writeln!(out);
    }

    fn row(&self, out: &mut String, stub: &str, cells: impl Iterator<Item = String>) {
        let _ = write!(out, "{:<w$}", stub, w = Self::STUB);
        for c in cells {
            let _ = write!(out, "{:>w$}", c, w = self.width);
        }
        let _ = writeln!(out);
    }

    fn efficiency(&self, out: &mut String, title: &str, tables: &[GroupTables], shifts: Option<&[GroupShift]>) {
        self.title(out, title);
        let eff = || tables.iter().map(|t| &t.efficiency);
        self.row(out, "Avg", eff().map(|s| format!("{:.3}", s.avg_theta)));
        self.row(out, "STD", eff().map(|s| format!("{:.3}", s.std_theta)));
        self.row(out, "min", eff().map(|s| format!("{:.3}", s.min_theta)));
        self.row(out, "Efficient", eff().map(|s| s.efficient_count.to_string()));
        self.row(out, "%", eff().map(|s| format!("{:.2}", s.efficient_pct)));
        self.row(out, "Frontier", eff().map(|s| s.frontier_count.to_string()));
        self.row(out, "%", eff().map(|s| format!("{:.2}", s.frontier_pct)));
        if let Some(shifts) = shifts {
            self.row(out, "Worse", shifts.iter().map(|g| g.worse_count.to_string()));
            self.row(out, "%", shifts.iter().map(|g| format!("{:.2}", g.worse_pct)));
            self.row(out, "Shifted", shifts.iter().map(|g| g.shifted_count.to_string()));
            self.row(out, "%", shifts.iter().map(|g| format!("{:.2}", g.shifted_pct)));
        }
    }

    fn slacks(&self, out: &mut String, title: &str, tables: &[GroupTables], shifts: Option<&[GroupShift]>) {
        self.title(out, title);
        let n = tables.first().map_or(0, |t| t.slack.excess_pct.len());
        for i in 0..n {
            self.row(
                out,
                &format!("X{}", i + 1),
                tables.iter().map(|t| {
                    let mark = if t.slack.pivotal_input == i { "*" } else { " " };
                    format!("{:.2}{mark}", t.slack.excess_pct[i])
                }),
            );
        }
        if let Some(shifts) = shifts {
            self.row(
                out,
                "Status",
                shifts
                    .iter()
                    .map(|g| if g.pivotal_changed { "X " } else { "- " }.to_string()),
            );
        }
    }
}
