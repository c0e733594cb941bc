use deabench_core::lp::{solve, LpProblem, LpStatus, Relation};
use proptest::prelude::*;

/// Brute-force optimum of `max c·x` over a bounded 2-variable polygon:
/// evaluate every pairwise intersection of boundary lines (including the
/// axes) and keep the best feasible one.
fn vertex_enumeration_max(c: [f64; 2], rows: &[([f64; 2], f64)]) -> Option<f64> {
    let mut lines: Vec<([f64; 2], f64)> = rows.to_vec();
    lines.push(([1.0, 0.0], 0.0));
    lines.push(([0.0, 1.0], 0.0));
    let feasible = |p: [f64; 2]| {
        p[0] >= -1e-9
            && p[1] >= -1e-9
            && rows
                .iter()
                .all(|(a, b)| a[0] * p[0] + a[1] * p[1] <= b + 1e-9)
    };
    let mut best: Option<f64> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a, b) = lines[i];
            let (d, e) = lines[j];
            let det = a[0] * d[1] - a[1] * d[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let p = [(b * d[1] - a[1] * e) / det, (a[0] * e - b * d[0]) / det];
            if feasible(p) {
                let v = c[0] * p[0] + c[1] * p[1];
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
    }
    best
}

fn dense(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.1f64..1.0, cols), rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn strong_duality(
        (a, b, c) in (1usize..6, 1usize..6).prop_flat_map(|(m, n)| (
            dense(m, n),
            prop::collection::vec(1.0f64..10.0, m),
            prop::collection::vec(-1.0f64..2.0, n),
        ))
    ) {
        let (m, n) = (a.len(), c.len());
        // Primal: max c·x, A x <= b, x >= 0. Feasible at 0, bounded since A > 0.
        let mut primal = LpProblem::maximize(c.clone());
        for (row, &bi) in a.iter().zip(&b) {
            primal.add_constraint(row.clone(), Relation::Le, bi);
        }
        // Dual: min b·y, Aᵀ y >= c, y >= 0.
        let mut dual = LpProblem::minimize(b.clone());
        for j in 0..n {
            dual.add_constraint((0..m).map(|i| a[i][j]).collect(), Relation::Ge, c[j]);
        }
        let p = solve(&primal).unwrap();
        let d = solve(&dual).unwrap();
        prop_assert_eq!(p.status, LpStatus::Optimal);
        prop_assert_eq!(d.status, LpStatus::Optimal);
        prop_assert!((p.objective_value - d.objective_value).abs() <= 1e-6,
            "primal {} dual {}", p.objective_value, d.objective_value);
        prop_assert!(primal.max_violation(&p.values) <= 1e-8);
        prop_assert!(dual.max_violation(&d.values) <= 1e-8);
    }

    #[test]
    fn matches_vertex_enumeration(
        c in prop::array::uniform2(-2.0f64..2.0),
        rows in prop::collection::vec((prop::array::uniform2(-1.0f64..1.0), 0.5f64..5.0), 1..5),
    ) {
        let mut rows = rows;
        // Box keeps every instance bounded.
        rows.push(([1.0, 0.0], 10.0));
        rows.push(([0.0, 1.0], 10.0));
        let mut lp = LpProblem::maximize(c.to_vec());
        for (a, b) in &rows {
            lp.add_constraint(a.to_vec(), Relation::Le, *b);
        }
        let sol = solve(&lp).unwrap();
        let oracle = vertex_enumeration_max(c, &rows).expect("origin is feasible");
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!((sol.objective_value - oracle).abs() <= 1e-8,
            "simplex {} oracle {}", sol.objective_value, oracle);
    }

    #[test]
    fn mixed_relations_are_feasible_when_optimal(
        (a, rel, x0) in (2usize..6, 2usize..6).prop_flat_map(|(m, n)| (
            prop::collection::vec(prop::collection::vec(-2.0f64..2.0, n), m),
            prop::collection::vec(0u8..3, m),
            prop::collection::vec(0.0f64..3.0, n),
        ))
    ) {
        // Right-hand sides are built from a known point so the problem is
        // feasible; a box keeps it bounded.
        let n = x0.len();
        let mut lp = LpProblem::minimize(vec![1.0; n]);
        for (row, r) in a.iter().zip(&rel) {
            let lhs: f64 = row.iter().zip(&x0).map(|(a, x)| a * x).sum();
            let (relation, rhs) = match r {
                0 => (Relation::Le, lhs + 0.5),
                1 => (Relation::Ge, lhs - 0.5),
                _ => (Relation::Eq, lhs),
            };
            lp.add_constraint(row.clone(), relation, rhs);
        }
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            lp.add_constraint(e, Relation::Le, 10.0);
        }
        let sol = solve(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(lp.max_violation(&sol.values) <= 1e-8);
        prop_assert!(sol.objective_value <= x0.iter().sum::<f64>() + 1e-8);
        let again = solve(&lp).unwrap();
        prop_assert_eq!(
            sol.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            again.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
}
