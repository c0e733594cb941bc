//! Dense two-phase primal simplex.
//!
//! Every variable is implicitly non-negative. Rows are normalised so the
//! right-hand side is non-negative and then equilibrated by their largest
//! coefficient. Phase one minimises the sum of artificial variables; phase
//! two optimises the user objective from the feasible basis found.
//!
//! Pricing is Dantzig's rule (most negative reduced cost, lowest index on
//! ties). After `stall_threshold` consecutive degenerate pivots the phase
//! switches to Bland's rule for the rest of its run, which rules out
//! cycling. Both rules are fully deterministic, so solving the same problem
//! twice yields bitwise-identical values.

use std::fmt;

use log::trace;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A linear program over non-negative variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        Self {
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn maximize(objective: Vec<f64>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn add_constraint(&mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
    }

    pub fn with_constraint(mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        self.add_constraint(coefficients, relation, rhs);
        self
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if n == 0 {
            return Err(LpError::InvalidProblem("problem has no variables".into()));
        }
        if let Some(j) = self.objective.iter().position(|c| !c.is_finite()) {
            return Err(LpError::InvalidProblem(format!(
                "objective coefficient {j} is not finite"
            )));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coefficients.len() != n {
                return Err(LpError::InvalidProblem(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    row.coefficients.len()
                )));
            }
            if !row.rhs.is_finite() || row.coefficients.iter().any(|a| !a.is_finite()) {
                return Err(LpError::InvalidProblem(format!(
                    "constraint {i} has a non-finite coefficient"
                )));
            }
        }
        Ok(())
    }

    /// Largest violation of any constraint or sign bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let bounds = x.iter().map(|&v| (-v).max(0.0));
        let rows = self.constraints.iter().map(|row| {
            let lhs: f64 = row.coefficients.iter().zip(x).map(|(a, v)| a * v).sum();
            match row.relation {
                Relation::Le => (lhs - row.rhs).max(0.0),
                Relation::Ge => (row.rhs - lhs).max(0.0),
                Relation::Eq => (lhs - row.rhs).abs(),
            }
        });
        bounds.chain(rows).fold(0.0, f64::max)
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective at `values`; NaN unless `Optimal`.
    pub objective_value: f64,
    pub values: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("numerical breakdown at iteration {iteration}: {detail}")]
    NumericalBreakdown { iteration: usize, detail: String },
    #[error("iteration limit of {0} reached")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub feasibility_tolerance: f64,
    pub optimality_tolerance: f64,
    /// Smallest admissible pivot element.
    pub pivot_tolerance: f64,
    /// Column entries at or below this are treated as structural zeros.
    pub breakdown_tolerance: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub stall_threshold: usize,
    pub max_iterations: usize,
    /// Dump the tableau at `trace` log level after every pivot.
    pub trace_tableau: bool,
}

impl SolverOptions {
    pub const FEASIBILITY_TOLERANCE: f64 = 1e-8;
    pub const OPTIMALITY_TOLERANCE: f64 = 1e-8;
    pub const PIVOT_TOLERANCE: f64 = 1e-9;
    pub const BREAKDOWN_TOLERANCE: f64 = 1e-12;
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feasibility_tolerance: Self::FEASIBILITY_TOLERANCE,
            optimality_tolerance: Self::OPTIMALITY_TOLERANCE,
            pivot_tolerance: Self::PIVOT_TOLERANCE,
            breakdown_tolerance: Self::BREAKDOWN_TOLERANCE,
            stall_threshold: 50,
            max_iterations: 100_000,
            trace_tableau: false,
        }
    }
}

/// Solves `problem` with default options.
pub fn solve(problem: &LpProblem) -> Result<LpSolution, LpError> {
    solve_with(problem, &SolverOptions::default())
}

pub fn solve_with(problem: &LpProblem, options: &SolverOptions) -> Result<LpSolution, LpError> {
    problem.validate()?;
    let n = problem.num_vars();
    let infeasible = |iterations| LpSolution {
        status: LpStatus::Infeasible,
        objective_value: f64::NAN,
        values: vec![0.0; n],
        iterations,
    };

    let Some(mut tableau) = Tableau::build(problem, options) else {
        return Ok(infeasible(0));
    };

    tableau.set_phase_one_costs();
    match tableau.run(options, false)? {
        PhaseOutcome::Optimal => {}
        PhaseOutcome::Unbounded => {
            return Err(LpError::NumericalBreakdown {
                iteration: tableau.iterations,
                detail: "phase one reported an unbounded ray".into(),
            })
        }
    }
    let infeasibility: f64 = tableau
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &col)| tableau.is_artificial(col))
        .map(|(r, _)| tableau.rhs(r).max(0.0))
        .sum();
    if infeasibility > options.feasibility_tolerance * (1.0 + tableau.rhs_scale) {
        return Ok(infeasible(tableau.iterations));
    }
    tableau.drive_out_artificials(options);

    tableau.set_phase_two_costs(problem);
    let outcome = tableau.run(options, true)?;
    let iterations = tableau.iterations;
    match outcome {
        PhaseOutcome::Unbounded => Ok(LpSolution {
            status: LpStatus::Unbounded,
            objective_value: match problem.sense {
                Sense::Minimize => f64::NEG_INFINITY,
                Sense::Maximize => f64::INFINITY,
            },
            values: vec![0.0; n],
            iterations,
        }),
        PhaseOutcome::Optimal => {
            let values = tableau.primal_values(n);
            Ok(LpSolution {
                status: LpStatus::Optimal,
                objective_value: problem.objective_at(&values),
                values,
                iterations,
            })
        }
    }
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

/// Column layout: structural variables, one slack or surplus per inequality
/// row, then artificials. The right-hand side is stored as the last entry
/// of every row.
struct Tableau {
    rows: usize,
    cols: usize,
    first_artificial: usize,
    data: Vec<f64>,
    costs: Vec<f64>,
    basis: Vec<usize>,
    iterations: usize,
    rhs_scale: f64,
}

impl Tableau {
    /// Returns `None` when a row with no nonzero coefficient is violated.
    fn build(problem: &LpProblem, options: &SolverOptions) -> Option<Tableau> {
        let n = problem.num_vars();
        let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(problem.num_constraints());
        for c in &problem.constraints {
            let scale = c.coefficients.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
            if scale == 0.0 {
                let ok = match c.relation {
                    Relation::Le => c.rhs >= -options.feasibility_tolerance,
                    Relation::Ge => c.rhs <= options.feasibility_tolerance,
                    Relation::Eq => c.rhs.abs() <= options.feasibility_tolerance,
                };
                if !ok {
                    return None;
                }
                continue;
            }
            let mut coefficients: Vec<f64> = c.coefficients.iter().map(|a| a / scale).collect();
            let mut rhs = c.rhs / scale;
            let mut relation = c.relation;
            if rhs < 0.0 {
                coefficients.iter_mut().for_each(|a| *a = -*a);
                rhs = -rhs;
                relation = match relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rows.push((coefficients, relation, rhs));
        }

        let m = rows.len();
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = n + n_slack;
        let cols = first_artificial + n_art;
        let width = cols + 1;
        let mut data = vec![0.0; m * width];
        let mut basis = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (n, first_artificial);
        let mut rhs_scale = 0.0_f64;
        for (r, (coefficients, relation, rhs)) in rows.into_iter().enumerate() {
            let row = &mut data[r * width..(r + 1) * width];
            row[..n].copy_from_slice(&coefficients);
            row[cols] = rhs;
            rhs_scale = rhs_scale.max(rhs);
            match relation {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis.push(next_art);
                    next_art += 1;
                }
            }
        }

        Some(Tableau {
            rows: m,
            cols,
            first_artificial,
            data,
            costs: vec![0.0; cols],
            basis,
            iterations: 0,
            rhs_scale,
        })
    }

    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.first_artificial
    }

    /// Reduced costs for the phase-one objective (sum of artificials).
    fn set_phase_one_costs(&mut self) {
        let mut costs = vec![0.0; self.cols];
        for c in costs.iter_mut().skip(self.first_artificial) {
            *c = 1.0;
        }
        self.price_out(costs);
    }

    fn set_phase_two_costs(&mut self, problem: &LpProblem) {
        let mut costs = vec![0.0; self.cols];
        let sign = match problem.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        for (c, &o) in costs.iter_mut().zip(&problem.objective) {
            *c = sign * o;
        }
        self.price_out(costs);
    }

    /// Turns raw costs into reduced costs against the current basis.
    fn price_out(&mut self, mut costs: Vec<f64>) {
        let width = self.width();
        for r in 0..self.rows {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                let row = &self.data[r * width..r * width + self.cols];
                for (c, a) in costs.iter_mut().zip(row) {
                    *c -= cb * a;
                }
            }
        }
        for &b in &self.basis {
            costs[b] = 0.0;
        }
        self.costs = costs;
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let width = self.width();
        let inv = 1.0 / self.at(pr, pc);
        {
            let row = &mut self.data[pr * width..(pr + 1) * width];
            row.iter_mut().for_each(|v| *v *= inv);
            row[pc] = 1.0;
        }
        let pivot_row: Vec<f64> = self.data[pr * width..(pr + 1) * width].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let factor = self.data[r * width + pc];
            if factor != 0.0 {
                let row = &mut self.data[r * width..(r + 1) * width];
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
                row[pc] = 0.0;
                // Round-off may push a basic value marginally negative.
                if row[self.cols] < 0.0 && row[self.cols] > -1e-11 * (1.0 + self.rhs_scale) {
                    row[self.cols] = 0.0;
                }
            }
        }
        let factor = self.costs[pc];
        if factor != 0.0 {
            for (c, p) in self.costs.iter_mut().zip(&pivot_row) {
                *c -= factor * p;
            }
            self.costs[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Ratio test for entering column `col`.
    fn leaving_row(&self, col: usize, options: &SolverOptions, bland: bool) -> RatioTest {
        let mut best: Option<(usize, f64, f64)> = None;
        let mut tiny_pivot = false;
        for r in 0..self.rows {
            let a = self.at(r, col);
            if a <= options.pivot_tolerance {
                if a > options.breakdown_tolerance {
                    tiny_pivot = true;
                }
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / a;
            best = match best {
                None => Some((r, ratio, a)),
                Some((br, bratio, ba)) => {
                    let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                    let better = if tie {
                        if bland {
                            self.basis[r] < self.basis[br]
                        } else {
                            a > ba || (a == ba && self.basis[r] < self.basis[br])
                        }
                    } else {
                        ratio < bratio
                    };
                    if better {
                        Some((r, ratio, a))
                    } else {
                        Some((br, bratio, ba))
                    }
                }
            };
        }
        match best {
            Some((r, ratio, _)) => RatioTest::Row(r, ratio),
            None if tiny_pivot => RatioTest::TinyPivot,
            None => RatioTest::Unbounded,
        }
    }

    fn run(&mut self, options: &SolverOptions, phase_two: bool) -> Result<PhaseOutcome, LpError> {
        let allowed = if phase_two { self.first_artificial } else { self.cols };
        let mut bland = false;
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= options.max_iterations {
                return Err(LpError::IterationLimit(options.max_iterations));
            }
            let mut candidates: Vec<usize> = (0..allowed)
                .filter(|&j| self.costs[j] < -options.optimality_tolerance)
                .collect();
            if candidates.is_empty() {
                return Ok(PhaseOutcome::Optimal);
            }
            if !bland {
                // Stable sort keeps the lowest index first among equal costs.
                candidates.sort_by(|&a, &b| self.costs[a].total_cmp(&self.costs[b]));
            }

            let mut chosen = None;
            let mut saw_tiny = false;
            for &col in &candidates {
                match self.leaving_row(col, options, bland) {
                    RatioTest::Row(r, ratio) => {
                        chosen = Some((r, col, ratio));
                        break;
                    }
                    RatioTest::Unbounded => return Ok(PhaseOutcome::Unbounded),
                    RatioTest::TinyPivot => saw_tiny = true,
                }
            }
            let Some((r, col, ratio)) = chosen else {
                debug_assert!(saw_tiny);
                return Err(LpError::NumericalBreakdown {
                    iteration: self.iterations,
                    detail: format!(
                        "every improving column has pivot magnitude below {:e}",
                        options.pivot_tolerance
                    ),
                });
            };

            if ratio <= options.feasibility_tolerance {
                degenerate_run += 1;
                if !bland && degenerate_run >= options.stall_threshold {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, col);
            self.iterations += 1;
            if options.trace_tableau {
                trace!(
                    "phase {} pivot {} (row {r}, col {col}{}):\n{}",
                    if phase_two { 2 } else { 1 },
                    self.iterations,
                    if bland { ", bland" } else { "" },
                    self
                );
            }
        }
    }

    /// Pivots basic artificials (at level zero after phase one) out of the
    /// basis where some non-artificial column allows it. Rows where none
    /// does are redundant and keep their artificial at zero.
    fn drive_out_artificials(&mut self, options: &SolverOptions) {
        for r in 0..self.rows {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let col = (0..self.first_artificial)
                .filter(|&j| !self.basis.contains(&j))
                .find(|&j| self.at(r, j).abs() > options.pivot_tolerance);
            if let Some(col) = col {
                self.pivot(r, col);
                self.iterations += 1;
            }
        }
    }

    fn primal_values(&self, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (r, &col) in self.basis.iter().enumerate() {
            if col < n {
                x[col] = self.rhs(r).max(0.0);
            }
        }
        x
    }
}

enum RatioTest {
    Row(usize, f64),
    Unbounded,
    TinyPivot,
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "  x{:<4} |", self.basis[r])?;
            for c in 0..=self.cols {
                write!(f, " {:>10.4}", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "  cost  |")?;
        for c in &self.costs {
            write!(f, " {:>10.4}", c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_variable_lower_bound() {
        let lp = LpProblem::minimize(vec![1.0]).with_constraint(vec![1.0], Relation::Ge, 3.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.values[0], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn maximize_on_simplex() {
        let lp = LpProblem::maximize(vec![1.0, 1.0]).with_constraint(
            vec![1.0, 1.0],
            Relation::Le,
            1.0,
        );
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn negative_upper_bound_is_infeasible() {
        let lp = LpProblem::minimize(vec![1.0]).with_constraint(vec![1.0], Relation::Le, -1.0);
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let lp = LpProblem::maximize(vec![1.0, 0.0]).with_constraint(
            vec![1.0, -1.0],
            Relation::Le,
            1.0,
        );
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_rows_and_redundancy() {
        // x + y = 2 stated twice, minimise x - y.
        let lp = LpProblem::minimize(vec![1.0, -1.0])
            .with_constraint(vec![1.0, 1.0], Relation::Eq, 2.0)
            .with_constraint(vec![2.0, 2.0], Relation::Eq, 4.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, -2.0, epsilon = 1e-12);
        assert!(lp.max_violation(&sol.values) <= 1e-12);
    }

    #[test]
    fn zero_row_handling() {
        let ok = LpProblem::minimize(vec![1.0]).with_constraint(vec![0.0], Relation::Le, 1.0);
        assert_eq!(solve(&ok).unwrap().status, LpStatus::Optimal);
        let bad = LpProblem::minimize(vec![1.0]).with_constraint(vec![0.0], Relation::Ge, 1.0);
        assert_eq!(solve(&bad).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn rejects_malformed() {
        let lp = LpProblem::minimize(vec![1.0, 2.0]).with_constraint(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve(&lp), Err(LpError::InvalidProblem(_))));
        let lp = LpProblem::minimize(vec![f64::NAN]);
        assert!(matches!(solve(&lp), Err(LpError::InvalidProblem(_))));
    }

    #[test]
    fn classic_degenerate_cycling_example() {
        // Beale's example cycles under naive Dantzig pricing with
        // lowest-index leaving rule; must terminate here.
        let lp = LpProblem::minimize(vec![-0.75, 150.0, -0.02, 6.0])
            .with_constraint(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0)
            .with_constraint(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0)
            .with_constraint(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, -0.05, epsilon = 1e-10);
    }

    #[test]
    fn bland_only_mode_agrees() {
        let lp = LpProblem::maximize(vec![3.0, 5.0])
            .with_constraint(vec![1.0, 0.0], Relation::Le, 4.0)
            .with_constraint(vec![0.0, 2.0], Relation::Le, 12.0)
            .with_constraint(vec![3.0, 2.0], Relation::Le, 18.0);
        let bland = SolverOptions {
            stall_threshold: 0,
            ..SolverOptions::default()
        };
        let a = solve(&lp).unwrap();
        let b = solve_with(&lp, &bland).unwrap();
        assert_abs_diff_eq!(a.objective_value, 36.0, epsilon = 1e-10);
        assert_abs_diff_eq!(b.objective_value, 36.0, epsilon = 1e-10);
    }

    #[test]
    fn tiny_pivots_break_down() {
        // The only improving column has a pivot of 1e-10: admissible as a
        // coefficient but below the pivot tolerance.
        let lp = LpProblem::maximize(vec![1.0, 0.0])
            .with_constraint(vec![1e-10, 1.0], Relation::Le, 1.0);
        assert!(matches!(
            solve(&lp),
            Err(LpError::NumericalBreakdown { .. })
        ));
    }

    #[test]
    fn iteration_limit() {
        let lp = LpProblem::maximize(vec![1.0, 1.0])
            .with_constraint(vec![1.0, 0.0], Relation::Le, 1.0)
            .with_constraint(vec![0.0, 1.0], Relation::Le, 1.0);
        let opts = SolverOptions {
            max_iterations: 1,
            ..SolverOptions::default()
        };
        assert_eq!(solve_with(&lp, &opts), Err(LpError::IterationLimit(1)));
    }

    #[test]
    fn repeat_solve_is_bitwise_identical() {
        let lp = LpProblem::minimize(vec![2.0, 3.0, 1.0])
            .with_constraint(vec![1.0, 1.0, 1.0], Relation::Ge, 4.0)
            .with_constraint(vec![1.0, -1.0, 0.5], Relation::Le, 2.0)
            .with_constraint(vec![0.0, 1.0, 3.0], Relation::Ge, 3.0);
        let a = solve(&lp).unwrap();
        let b = solve(&lp).unwrap();
        assert_eq!(
            a.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
}
