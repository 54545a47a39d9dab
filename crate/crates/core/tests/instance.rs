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
use rdarp_core::instance::*;

const FIXTURE2: &str = include_str!("fixtures/fixture2.txt");

fn fixture2() -> Instance {
    parse_cordeau(FIXTURE2, "fixture2").unwrap()
}

#[test]
fn cordeau_fixture_distances() {
    let inst = fixture2();
    assert_eq!(inst.n, 2);
    assert_eq!(inst.fleet, 2);
    assert_eq!(inst.capacity, 3);
    assert_eq!(inst.max_ride, vec![30.0, 30.0]);
    let pts = [(0.0, 0.0), (3.0, 4.0), (6.0, 8.0), (3.0, 0.0), (9.0, 8.0), (0.0, 0.0)];
    for i in 0..6 {
        for j in 0..6 {
            let (dx, dy): (f64, f64) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
            assert!((inst.t(i, j) - (dx * dx + dy * dy).sqrt()).abs() < 1e-9);
        }
    }
    assert_eq!(inst.t(0, 1), 5.0);
    assert_eq!(inst.t(1, 3), 4.0);
    assert_eq!(inst.t(2, 4), 3.0);
}

#[test]
fn cordeau_without_destination_line() {
    let text: String = FIXTURE2.lines().take(6).map(|l| format!("{l}\n")).collect();
    let inst = parse_cordeau(&text, "x").unwrap();
    assert_eq!(inst.n, 2);
    assert_eq!(inst.nodes[5].early, 0.0);
    assert_eq!(inst.nodes[5].id, 5);
}

#[test]
fn cordeau_errors() {
    assert!(matches!(parse_cordeau("1 0 100 3 30\n0 0 0 0 0 0 100\n0 0 0 0 0 0 100\n", "z"), Err(InstanceError::NoRequests)));
    let bad = FIXTURE2.replace("3 0 1 -1 0 150", "3 zero 1 -1 0 150");
    match parse_cordeau(&bad, "b") {
        Err(InstanceError::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("unexpected {other:?}"),
    }
    let bad_load = FIXTURE2.replace("3 3 0 1 -1 0 150", "3 3 0 1 -2 0 150");
    assert!(matches!(parse_cordeau(&bad_load, "b"), Err(InstanceError::Validation(_))));
    let short_ride = FIXTURE2.replacen("2 4 200 3 30", "2 4 200 3 3", 1);
    assert!(matches!(parse_cordeau(&short_ride, "b"), Err(InstanceError::Validation(_))));
}

#[test]
fn route_duration_caps_depot_windows() {
    let text = FIXTURE2.replacen("2 4 200 3 30", "2 4 150 3 30", 1);
    let inst = parse_cordeau(&text, "t").unwrap();
    assert_eq!(inst.nodes[0].late, 150.0);
    assert_eq!(inst.nodes[5].late, 150.0);
}

#[test]
fn benchmark_risk_follows_load() {
    let inst = derive_benchmark_risk(&fixture2());
    assert_eq!(inst.risk_of(1), 1.0);
    assert_eq!(inst.nodes[3].risk, -1.0);
    let mut mixed = fixture2();
    mixed.capacity = 6;
    for (i, w) in [(1, 2), (2, 3)] {
        mixed.nodes[i].load = w;
        mixed.nodes[i + 2].load = -w;
    }
    let m = derive_benchmark_risk(&mixed);
    assert_eq!((m.risk_of(1), m.risk_of(2)), (2.0, 3.0));
    // q_max = 200 * mean risk
    assert!((m.q_max - 500.0).abs() < 1e-9);
}

#[test]
fn qmax_formula() {
    let mut inst = derive_benchmark_risk(&fixture2());
    inst.nodes[5].late = 100.0;
    assert_eq!(compute_qmax(&inst).unwrap(), 100.0);
    inst.nodes[5].late = 480.0;
    for (i, r) in [(1, 0.4), (2, 0.9)] {
        inst.nodes[i].risk = r;
        inst.nodes[i + 2].risk = -r;
    }
    // 480 * (0.4 + 0.9) / 2
    assert!((compute_qmax(&inst).unwrap() - 312.0).abs() < 1e-9);
    let zero = fixture2();
    assert_eq!(compute_qmax(&zero).unwrap(), 0.0);
}

#[test]
fn risk_scores() {
    let top = RiskProfile::Rider { purpose: Purpose::Dialysis, age: AgeGroup::Over65, county: County::Jefferson };
    assert!((assess_risk_score(top) - 0.9).abs() < 1e-12);
    let low = RiskProfile::Rider { purpose: Purpose::Personal, age: AgeGroup::From18To44, county: County::Walker };
    assert!((assess_risk_score(low) - 0.4).abs() < 1e-12);
    assert_eq!(assess_risk_score(RiskProfile::Exempt), 0.0);
    assert!((assess_risk_components(0.3, 0.3, 0.3).unwrap() - 0.9).abs() < 1e-12);
    assert!(assess_risk_components(0.1, 0.1, 0.1).is_err());
    assert!(assess_risk_components(0.25, 0.1, 0.2).is_err());
}

#[test]
fn edarp_weights() {
    let mut inst = fixture2();
    let e = edarp_transform(&inst);
    assert_eq!(e.mode, Mode::Edarp);
    assert!((1..=2).all(|i| e.risk_of(i) == 0.0));
    assert_eq!(e.detour_weight, vec![15.0, 15.0]);
    // stretch request 1 so its direct time is 22
    inst.nodes[3].x = 3.0;
    inst.nodes[3].y = 26.0;
    inst.travel = {
        let nn = 6;
        let mut t = inst.travel.clone();
        for j in 0..nn {
            let (a, b) = (&inst.nodes[3], &inst.nodes[j]);
            let d = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
            t[3 * nn + j] = d;
            t[j * nn + 3] = d;
        }
        t
    };
    assert_eq!(inst.t(1, 3), 22.0);
    let e = edarp_transform(&inst);
    assert_eq!(e.detour_weight[0], 22.0);
}

#[test]
fn preprocess_rejects_empty_window() {
    let mut inst = fixture2();
    inst.nodes[1].early = 100.0;
    inst.nodes[1].late = 100.0;
    inst.nodes[3].late = 102.0;
    match preprocess(&inst) {
        Err(InstanceError::InfeasibleRequest { request, .. }) => assert_eq!(request, 1),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn zero_travel_removes_no_arc_by_time() {
    let mut inst = fixture2();
    inst.travel.iter_mut().for_each(|t| *t = 0.0);
    for v in inst.nodes.iter_mut() {
        v.service = 0.0;
        v.early = 0.0;
        v.late = 10.0;
    }
    let p = preprocess(&inst).unwrap();
    let nn = p.num_nodes();
    for i in 0..nn {
        for j in 0..nn {
            let structural = i == j
                || j == 0
                || i == nn - 1
                || (i == 0 && (j == nn - 1 || p.is_drop(j)))
                || (p.is_pickup(i) && j == nn - 1)
                || (p.is_drop(i) && j + p.n == i);
            assert_eq!(p.arc_removed(i, j), structural, "arc ({i},{j})");
        }
    }
}

/// Independent restatement of the removal rules with plain loops.
fn naive_removed(inst: &Instance) -> usize {
    let n = inst.n;
    let nn = 2 * n + 2;
    let s = |v: usize| inst.nodes[v].service;
    // shortest start-to-start times by repeated relaxation
    let mut d = vec![vec![f64::INFINITY; nn]; nn];
    for i in 0..nn {
        d[i][i] = 0.0;
        for j in 0..nn {
            if i != j {
                d[i][j] = s(i) + inst.t(i, j);
            }
        }
    }
    for _ in 0..nn {
        for i in 0..nn {
            for j in 0..nn {
                for k in 0..nn {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
    }
    let mut count = 0;
    for i in 0..nn {
        for j in 0..nn {
            let pick = |v: usize| v >= 1 && v <= n;
            let drop = |v: usize| v > n && v <= 2 * n;
            let mut gone = i == j || j == 0 || i == nn - 1 || (i == 0 && j == nn - 1);
            gone |= inst.nodes[i].early + s(i) + inst.t(i, j) > inst.nodes[j].late + 1e-9;
            gone |= drop(i) && j == i - n;
            gone |= i == 0 && drop(j);
            gone |= pick(i) && j == nn - 1;
            gone |= pick(i) && pick(j) && inst.nodes[i].load + inst.nodes[j].load > inst.capacity;
            if pick(i) && j != n + i && j != nn - 1 && j != 0 {
                gone |= inst.t(i, j) + d[j][n + i] > inst.max_ride_of(i) + 1e-9;
            }
            if drop(j) && i != j - n && i != 0 && i != nn - 1 {
                let p = j - n;
                gone |= d[p][i] - s(p) + s(i) + inst.t(i, j) > inst.max_ride_of(p) + 1e-9;
            }
            count += usize::from(gone);
        }
    }
    count
}

#[test]
fn removed_arcs_match_naive_rules() {
    for text in [include_str!("fixtures/rw_small.json"), include_str!("fixtures/rw_noq.json")] {
        let inst = preprocess(&parse_realworld(text).unwrap()).unwrap();
        assert_eq!(inst.removed_arc_count(), naive_removed(&inst));
    }
    let inst = preprocess(&fixture2()).unwrap();
    assert_eq!(inst.removed_arc_count(), naive_removed(&inst));
}

#[test]
fn realworld_round_trip() {
    for text in [
        include_str!("fixtures/rw_small.json"),
        include_str!("fixtures/rw_noq.json"),
        include_str!("fixtures/rw_edarp.json"),
    ] {
        let a = parse_realworld(text).unwrap();
        let b = parse_realworld(&emit_realworld(&a)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn realworld_minimal_and_qmax() {
    let doc = r#"{"n":1,"K":1,"capacity":1,"mode":"RDARP",
        "nodes":[{"id":0,"service":0,"load":0,"risk":0,"early":0,"late":100},
                 {"id":1,"service":0,"load":1,"risk":0.5,"early":0,"late":100},
                 {"id":2,"service":0,"load":-1,"risk":-0.5,"early":0,"late":100},
                 {"id":3,"service":0,"load":0,"risk":0,"early":0,"late":100}],
        "travel_time":[0,1,2,1, 1,0,1,2, 2,1,0,1, 1,2,1,0],
        "max_ride":[10]}"#;
    let inst = parse_realworld(doc).unwrap();
    assert_eq!(inst.n, 1);
    assert!((inst.q_max - 100.0 * 0.5).abs() < 1e-12);
    let noq = parse_realworld(include_str!("fixtures/rw_noq.json")).unwrap();
    assert!((noq.q_max - compute_qmax(&noq).unwrap()).abs() < 1e-12);
    let short = doc.replace("\"travel_time\":[0,1,2,1,", "\"travel_time\":[");
    assert!(parse_realworld(&short).is_err());
    let wrong_n = doc.replace("\"n\":1", "\"n\":2");
    assert!(parse_realworld(&wrong_n).is_err());
}

#[test]
fn cordeau_convert_round_trip() {
    let inst = fixture2();
    let text = emit_cordeau(&inst).unwrap();
    assert_eq!(parse_cordeau(&text, "fixture2").unwrap(), inst);
}

fn jitter() -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((0.0f64..60.0, 10.0f64..80.0), 4)
}

proptest! {
    #[test]
    fn preprocess_is_idempotent_and_never_widens(w in jitter()) {
        let mut inst = fixture2();
        for (k, (a, len)) in w.iter().enumerate() {
            inst.nodes[k + 1].early = *a;
            inst.nodes[k + 1].late = a + len;
        }
        if let Ok(p) = preprocess(&inst) {
            for v in 0..inst.num_nodes() {
                prop_assert!(p.nodes[v].early >= inst.nodes[v].early - 1e-12);
                prop_assert!(p.nodes[v].late <= inst.nodes[v].late + 1e-12);
            }
            let q = preprocess(&p).unwrap();
            prop_assert_eq!(p, q);
        }
    }

    #[test]
    fn qmax_is_order_independent(perm in Just(vec![1usize, 2, 3, 4]).prop_shuffle()) {
        let inst = derive_benchmark_risk(&parse_realworld(include_str!("fixtures/rw_noq.json")).unwrap());
        let mut shuffled = inst.clone();
        // permute request labels consistently
        let n = inst.n;
        for (new, &old) in perm.iter().enumerate() {
            shuffled.nodes[new + 1].risk = inst.nodes[old].risk;
            shuffled.nodes[new + 1].load = inst.nodes[old].load;
        }
        let a = compute_qmax(&derive_benchmark_risk(&shuffled)).unwrap();
        let b = compute_qmax(&inst).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert_eq!(n, 4);
    }
}
