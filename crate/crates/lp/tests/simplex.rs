// Copyright (c) 2026 The rdarp developers.
//
// Permission is hereby granted, free of charge, to any person obtaining
// a copy of this software and associated documentation files (the
// "Software"), to deal in the Software without restriction, including
// without limitation the rights to use, copy, modify, merge, publish,
// distribute, sublicense, and/or sell copies of the Software, and to
// permit persons to whom the Software is furnished to do so, subject to
// the following conditions:
//
// The above copyright notice and this permission notice shall be
// included in all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
// EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF
// MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND
// NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE
// LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION
// OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION
// WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.


use proptest::prelude::*;
use rdarp_lp::{dump_model, parse_dump, solve_lp, LinearModel, Sense, Status};

const INF: f64 = f64::INFINITY;

#[test]
fn single_ge_row() {
    let mut m = LinearModel::new();
    let x = m.add_var("x", 0.0, INF, 1.0);
    m.add_con("c", vec![(x, 1.0)], Sense::Ge, 3.0);
    let s = solve_lp(&m).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective - 3.0).abs() < 1e-9);
    assert!((s.duals[0] - 1.0).abs() < 1e-9);
}

#[test]
fn identity_partitioning() {
    let mut m = LinearModel::new();
    let a = m.add_var("l1", 0.0, INF, 1.0);
    let b = m.add_var("l2", 0.0, INF, 1.0);
    m.add_con("p1", vec![(a, 1.0)], Sense::Eq, 1.0);
    m.add_con("p2", vec![(b, 1.0)], Sense::Eq, 1.0);
    let s = solve_lp(&m).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective - 2.0).abs() < 1e-9);
    assert!((s.duals[0] - 1.0).abs() < 1e-9);
    assert!((s.duals[1] - 1.0).abs() < 1e-9);
}

#[test]
fn le_row_dual_is_nonpositive() {
    // max x + y  s.t. x + 2y <= 4, 3x + y <= 6
    let mut m = LinearModel::new();
    let x = m.add_var("x", 0.0, INF, -1.0);
    let y = m.add_var("y", 0.0, INF, -1.0);
    m.add_con("a", vec![(x, 1.0), (y, 2.0)], Sense::Le, 4.0);
    m.add_con("b", vec![(x, 3.0), (y, 1.0)], Sense::Le, 6.0);
    let s = solve_lp(&m).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective + 2.8).abs() < 1e-9);
    assert!((s.x[0] - 1.6).abs() < 1e-9 && (s.x[1] - 1.2).abs() < 1e-9);
    assert!((s.duals[0] + 0.4).abs() < 1e-9);
    assert!((s.duals[1] + 0.2).abs() < 1e-9);
}

#[test]
fn infeasible_and_unbounded() {
    let mut m = LinearModel::new();
    let x = m.add_var("x", 0.0, 1.0, 1.0);
    m.add_con("c", vec![(x, 1.0)], Sense::Ge, 2.0);
    assert_eq!(solve_lp(&m).unwrap().status, Status::Infeasible);

    let mut m = LinearModel::new();
    let x = m.add_var("x", 0.0, INF, -1.0);
    let y = m.add_var("y", 0.0, INF, 0.0);
    m.add_con("c", vec![(x, 1.0), (y, -1.0)], Sense::Le, 1.0);
    assert_eq!(solve_lp(&m).unwrap().status, Status::Unbounded);
}

#[test]
fn empty_model_is_rejected() {
    assert!(solve_lp(&LinearModel::new()).is_err());
}

#[test]
fn free_variable_and_equality() {
    // min |x - 2| style: min t s.t. t >= x - 2, t >= 2 - x, x = 5 with x free
    let mut m = LinearModel::new();
    let x = m.add_var("x", -INF, INF, 0.0);
    let t = m.add_var("t", -INF, INF, 1.0);
    m.add_con("u", vec![(t, 1.0), (x, -1.0)], Sense::Ge, -2.0);
    m.add_con("l", vec![(t, 1.0), (x, 1.0)], Sense::Ge, 2.0);
    m.add_con("fix", vec![(x, 1.0)], Sense::Eq, 5.0);
    let s = solve_lp(&m).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective - 3.0).abs() < 1e-9);
}

/// Three requests, five columns: {1,2,3}=10, {1}=4, {2}=4, {3}=4, {1,2}=5.
#[test]
fn set_partition_matches_enumeration() {
    let cols: [(&[usize], f64); 5] = [(&[0, 1, 2], 10.0), (&[0], 4.0), (&[1], 4.0), (&[2], 4.0), (&[0, 1], 5.0)];
    let mut m = LinearModel::new();
    for (k, (_, c)) in cols.iter().enumerate() {
        m.add_var(format!("c{k}"), 0.0, INF, *c);
    }
    for i in 0..3 {
        let row: Vec<(usize, f64)> = cols
            .iter()
            .enumerate()
            .filter(|(_, (s, _))| s.contains(&i))
            .map(|(k, _)| (k, 1.0))
            .collect();
        m.add_con(format!("p{i}"), row, Sense::Eq, 1.0);
    }
    let s = solve_lp(&m).unwrap();

    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << cols.len()) {
        let mut cover = [0; 3];
        let mut cost = 0.0;
        for (k, (set, c)) in cols.iter().enumerate() {
            if mask & (1 << k) != 0 {
                cost += c;
                for &i in *set {
                    cover[i] += 1;
                }
            }
        }
        if cover.iter().all(|&v| v == 1) {
            best = best.min(cost);
        }
    }
    assert_eq!(best, 9.0);
    assert!((s.objective - best).abs() < 1e-9);
}

#[test]
fn dump_round_trip() {
    let mut m = LinearModel::new();
    let x = m.add_var("x", 0.0, INF, 1.5);
    let y = m.add_var("y y", -INF, 4.0, -0.25);
    m.add_con("row", vec![(x, 1.0), (y, -2.0)], Sense::Le, 3.0);
    let text = dump_model(&m);
    assert!(text.starts_with("VAR x 0.0 inf 1.5\n"));
    let back = parse_dump(&text).unwrap();
    assert_eq!(back.vars[1].name, "y_y");
    assert_eq!(back.vars[1].ub, 4.0);
    assert_eq!(back.cons, m.cons);
}

fn random_model() -> impl Strategy<Value = LinearModel> {
    (2usize..6, 1usize..6).prop_flat_map(|(n, m)| {
        (
            proptest::collection::vec((-5i32..6, 0i32..4), n),
            proptest::collection::vec((proptest::collection::vec(-3i32..4, n), 0u8..3, -4i32..10), m),
        )
            .prop_map(move |(vars, rows)| {
                let mut lp = LinearModel::new();
                for (k, (c, ub)) in vars.iter().enumerate() {
                    lp.add_var(format!("x{k}"), 0.0, f64::from(*ub + 1) * 2.0, f64::from(*c));
                }
                for (r, (coef, sense, rhs)) in rows.iter().enumerate() {
                    let sense = match sense {
                        0 => Sense::Le,
                        1 => Sense::Ge,
                        _ => Sense::Eq,
                    };
                    let coeffs = coef.iter().enumerate().map(|(j, a)| (j, f64::from(*a))).collect();
                    lp.add_con(format!("r{r}"), coeffs, sense, f64::from(*rhs));
                }
                lp
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn optimal_solutions_satisfy_kkt(lp in random_model()) {
        let s = solve_lp(&lp).unwrap();
        prop_assert_ne!(s.status, Status::NumericalFailure);
        prop_assert_ne!(s.status, Status::Unbounded);
        if s.status == Status::Optimal {
            let act = lp.row_activity(&s.x);
            for (r, c) in lp.cons.iter().enumerate() {
                match c.sense {
                    Sense::Le => { prop_assert!(act[r] <= c.rhs + 1e-7); prop_assert!(s.duals[r] <= 1e-7); }
                    Sense::Ge => { prop_assert!(act[r] >= c.rhs - 1e-7); prop_assert!(s.duals[r] >= -1e-7); }
                    Sense::Eq => prop_assert!((act[r] - c.rhs).abs() <= 1e-7),
                }
                prop_assert!(s.duals[r] * (act[r] - c.rhs) <= 1e-6 && s.duals[r] * (act[r] - c.rhs) >= -1e-6);
            }
            let mut dual_obj: f64 = lp.cons.iter().zip(&s.duals).map(|(c, y)| c.rhs * y).sum();
            for (j, v) in lp.vars.iter().enumerate() {
                let d = s.reduced_costs[j];
                if s.x[j] > v.lb + 1e-7 && s.x[j] < v.ub - 1e-7 {
                    prop_assert!(d.abs() <= 1e-6);
                } else if s.x[j] <= v.lb + 1e-7 {
                    prop_assert!(d >= -1e-6);
                    dual_obj += d * v.lb;
                } else {
                    prop_assert!(d <= 1e-6);
                    dual_obj += d * v.ub;
                }
            }
            prop_assert!((s.objective - dual_obj).abs() <= 1e-6 * (1.0 + s.objective.abs()));
        }
    }

    #[test]
    fn deterministic(lp in random_model()) {
        let a = solve_lp(&lp).unwrap();
        let b = solve_lp(&lp).unwrap();
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn added_inequality_never_lowers_objective(lp in random_model(), extra in proptest::collection::vec(-3i32..4, 5), rhs in -2i32..8) {
        let base = solve_lp(&lp).unwrap();
        prop_assume!(base.status == Status::Optimal);
        let mut cut = lp.clone();
        let coeffs = (0..lp.num_vars()).map(|j| (j, f64::from(extra[j % extra.len()]))).collect();
        cut.add_con("cut", coeffs, Sense::Le, f64::from(rhs));
        let s = solve_lp(&cut).unwrap();
        prop_assert!(s.status == Status::Optimal || s.status == Status::Infeasible);
        if s.status == Status::Optimal {
            prop_assert!(s.objective >= base.objective - 1e-7);
        }
    }
}
