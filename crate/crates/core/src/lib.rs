//! Input-oriented data envelopment analysis.
//!
//! Scores decision-making units with the CCR (constant returns) or BCC
//! (variable returns) envelopment model, maximises residual slacks in a
//! second solve, and compares each unit's standing when benchmarked within
//! its own group against the standing it gets in the pooled cohort.
//!
//! ```
//! use deabench_core::{validate_cohort, solve_all, DmuRecord, ModelSpec};
//!
//! let cohort = validate_cohort(vec![
//!     DmuRecord::new("A", "north", vec![2.0], vec![2.0]),
//!     DmuRecord::new("B", "north", vec![4.0], vec![2.0]),
//! ])
//! .unwrap();
//! let results = solve_all(&cohort, &ModelSpec::crs()).unwrap();
//! assert!((results[1].theta - 0.5).abs() < 1e-9);
//! ```

pub mod domain;
pub mod engine;
pub mod io;
pub mod lp;
pub mod report;
pub mod scope;
pub mod synth;

pub use domain::{
    check_discrimination, validate_cohort, Cohort, CohortError, DiscriminationCheck, DmuRecord,
    ModelSpec, ReturnsToScale,
};
pub use engine::{solve_all, solve_dmu, DeaError, EfficiencyResult, EfficiencyStatus};
pub use report::{ReportBundle, RunInfo, Scope};
pub use scope::{analyze_global, analyze_local, compare_scopes, ExcessMode, ScopeComparison, ScopeRun};
pub use synth::{generate, GenSpec};
