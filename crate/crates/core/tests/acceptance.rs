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


//! Acceptance runner: one PASS/FAIL line per criterion.
//!
//! A criterion whose input data is not present prints FAIL with the reason
//! and does not fail the process unless `RDARP_ACCEPTANCE_STRICT` is set.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::reference::*;
use common::*;
use rdarp_core::bcp::{solve, SolveOptions, SolveReport, SolveStatus};
use rdarp_core::cuts::{separate, ArcFlow, CutFamilies};
use rdarp_core::generate::{random_instance, GeneratorConfig};
use rdarp_core::instance::*;
use rdarp_core::oracle::*;
use rdarp_core::pareto::{pareto_front, ParetoOptions};
use rdarp_core::pricing::*;

/// Benchmark tolerance on cost and maximum exposure.
const BENCH_TOL: f64 = 0.02;
const BENCH_TIME: Duration = Duration::from_secs(120);
const INFEASIBLE_TIME: Duration = Duration::from_secs(300);
/// Objective agreement with the exhaustive oracle.
const ORACLE_TOL: f64 = 1e-5;
const ORACLE_TIME: Duration = Duration::from_secs(60);
/// Min-max agreement of stored columns.
const MMR_TOL: f64 = 1e-6;
const GOLDEN_TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
    missing_data: bool,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), missing_data: false }
    }

    fn missing(detail: impl Into<String>) -> Self {
        Outcome { pass: false, detail: detail.into(), missing_data: true }
    }
}

fn cordeau_dir() -> PathBuf {
    match std::env::var_os("RDARP_CORDEAU_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).ancestors().nth(2).unwrap().join("data/cordeau"),
    }
}

fn load_cordeau(name: &str) -> Result<Instance, String> {
    let dir = cordeau_dir();
    let path = [dir.join(name), dir.join(format!("{name}.txt"))]
        .into_iter()
        .find(|p| p.is_file())
        .ok_or_else(|| format!("instance file missing: {}", dir.join(name).display()))?;
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let inst = parse_cordeau(&text, name).map_err(|e| e.to_string())?;
    preprocess(&derive_benchmark_risk(&inst)).map_err(|e| e.to_string())
}

fn benchmark_regression() -> Outcome {
    let rows: [(&str, [(f64, f64, f64); 3]); 4] = [
        ("a2-16", [(f64::INFINITY, 294.25, 19.00), (30.0, 294.25, 19.00), (15.0, 318.63, 13.13)]),
        ("a2-20", [(f64::INFINITY, 344.83, 15.33), (30.0, 344.83, 15.33), (15.0, 380.12, 12.69)]),
        ("a2-24", [(f64::INFINITY, 431.12, 36.57), (30.0, 441.06, 17.75), (15.0, 441.57, 13.72)]),
        ("a3-24", [(f64::INFINITY, 344.83, 20.01), (30.0, 344.83, 20.01), (15.0, 353.09, 14.74)]),
    ];
    let mut missing = Vec::new();
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, cases) in rows {
        let inst = match load_cordeau(name) {
            Ok(i) => i,
            Err(e) => {
                missing.push(e);
                continue;
            }
        };
        for (eps, cost, h_bar) in cases {
            checked += 1;
            let start = Instant::now();
            let opts = SolveOptions { eps_risk: eps, time_limit: Some(BENCH_TIME), ..Default::default() };
            let run = solve(&inst, &opts);
            let got = run.ok().and_then(|r| {
                let z = r.objective?;
                if r.status != SolveStatus::Optimal {
                    return None;
                }
                let left = BENCH_TIME.saturating_sub(start.elapsed());
                let risk = solve(
                    &inst,
                    &SolveOptions {
                        mode: PriceMode::Risk,
                        eps_risk: eps,
                        eps_cost: z + 1e-7 * (1.0 + z),
                        time_limit: Some(left),
                        ..Default::default()
                    },
                )
                .ok()?;
                (risk.status == SolveStatus::Optimal).then(|| (z, risk.objective.unwrap()))
            });
            let elapsed = start.elapsed();
            match got {
                Some((z, h)) if (z - cost).abs() <= BENCH_TOL && (h - h_bar).abs() <= BENCH_TOL && elapsed <= BENCH_TIME => {}
                Some((z, h)) => failures.push(format!("{name} eps {eps}: ({z:.2}, {h:.2}) vs ({cost}, {h_bar}) in {elapsed:.1?}")),
                None => failures.push(format!("{name} eps {eps}: not solved to optimality in {elapsed:.1?}")),
            }
        }
    }
    if !failures.is_empty() {
        return Outcome::check(false, failures.join("; "));
    }
    if !missing.is_empty() {
        return Outcome::missing(missing.join("; "));
    }
    Outcome::check(true, format!("{checked} rows within {BENCH_TOL}"))
}

fn infeasibility_detection() -> Outcome {
    let inst = match load_cordeau("a3-30") {
        Ok(i) => i,
        Err(e) => return Outcome::missing(e),
    };
    let start = Instant::now();
    let r = solve(&inst, &SolveOptions { eps_risk: 15.0, time_limit: Some(INFEASIBLE_TIME), ..Default::default() });
    let elapsed = start.elapsed();
    match r {
        Ok(r) => Outcome::check(
            r.status == SolveStatus::Infeasible && r.nodes == 1 && elapsed <= INFEASIBLE_TIME,
            format!("status {} after {} nodes in {elapsed:.1?}", r.status.as_str(), r.nodes),
        ),
        Err(e) => Outcome::check(false, e.to_string()),
    }
}

struct OracleRun {
    inst: Instance,
    report: SolveReport,
}

fn oracle_equivalence(runs: &mut Vec<OracleRun>) -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for k in 0..50u64 {
        let n = 2 + (k % 3) as usize;
        let fleet = 1 + ((k / 3) % 2) as usize;
        let cfg = GeneratorConfig { n, fleet, ..Default::default() };
        let inst = random_instance(&cfg, k).unwrap();
        let bf = BruteForce::new(&inst).unwrap();
        let tight = bf.front().last().map_or(0.0, |p| p.1);
        let edarp = random_instance(&GeneratorConfig { mode: Mode::Edarp, ..cfg }, k).unwrap();
        let cases = [
            ("cost(inf)", &inst, PriceMode::Cost, f64::INFINITY, Objective::Cost),
            ("cost(tight)", &inst, PriceMode::Cost, tight, Objective::Cost),
            ("risk(inf)", &inst, PriceMode::Risk, f64::INFINITY, Objective::Risk),
            ("edarp(2)", &edarp, PriceMode::Cost, 2.0, Objective::Cost),
            ("edarp(4)", &edarp, PriceMode::Cost, 4.0, Objective::Cost),
        ];
        for (label, target, mode, eps, objective) in cases {
            compared += 1;
            let report = solve(target, &SolveOptions { mode, eps_risk: eps, ..Default::default() }).unwrap();
            let brute = brute_force_solve(target, eps, objective, f64::INFINITY).ok();
            let ok = match (report.objective, &brute) {
                (Some(z), Some(b)) => report.status == SolveStatus::Optimal && (z - b.objective).abs() <= ORACLE_TOL,
                (None, None) => report.status == SolveStatus::Infeasible,
                _ => false,
            };
            if !ok {
                mismatches.push(format!("seed {k} {label}: {:?} vs {:?}", report.objective, brute.map(|b| b.objective)));
            }
            runs.push(OracleRun { inst: target.clone(), report });
        }
    }
    let elapsed = start.elapsed();
    Outcome::check(
        mismatches.is_empty() && elapsed <= ORACLE_TIME,
        if mismatches.is_empty() {
            format!("{compared} solves agree in {elapsed:.2?}")
        } else {
            mismatches.join("; ")
        },
    )
}

fn column_soundness(runs: &[OracleRun]) -> Outcome {
    let mut columns = 0;
    let mut bad = Vec::new();
    for run in runs {
        for col in run.report.pool.iter() {
            columns += 1;
            let r = &col.route;
            if let Err(v) = validate_route(&run.inst, r) {
                bad.push(format!("{:?}: {v:?}", r.sequence));
                continue;
            }
            match mmr_schedule(&run.inst, &r.sequence) {
                Ok((_, best)) if (best - r.h_bar).abs() <= MMR_TOL => {}
                Ok((_, best)) => bad.push(format!("{:?}: max H {} vs min-max {best}", r.sequence, r.h_bar)),
                Err(e) => bad.push(format!("{:?}: {e}", r.sequence)),
            }
        }
    }
    Outcome::check(
        bad.is_empty() && columns > 0,
        if bad.is_empty() { format!("{columns} columns valid and min-max") } else { bad.into_iter().take(5).collect::<Vec<_>>().join("; ") },
    )
}

fn golden_labels() -> Outcome {
    let mut errs = Vec::new();
    let mut expect = |what: &str, got: f64, want: f64| {
        if (got - want).abs() > GOLDEN_TOL {
            errs.push(format!("{what}: {got} vs {want}"));
        }
    };
    let inst = chain(60.0);
    let ls = walk(&inst, &[0, 1, 2, 4, 3, 5]);
    let o = ls[1].0.open_res(1).unwrap();
    expect("i: B^i", o.bo, 20.0);
    expect("i: D^i(B^i)", o.d_bo, 40.0);
    expect("i: d^i", o.d, 10.0);
    let at_j = &ls[2].0;
    let (oi, oj) = (at_j.open_res(1).unwrap(), at_j.open_res(2).unwrap());
    expect("j: B^i", oi.bo, 30.0);
    expect("j: B^j", oj.bo, 60.0);
    expect("j: D^j(B^j)", oj.d_bo, 100.0);
    expect("j: d^i", oi.d, 10.0);
    expect("j: d^j", oj.d, 40.0);
    let at_in = &ls[3].0;
    let oj = at_in.open_res(2).unwrap();
    expect("i+n: B", at_in.b, 40.0);
    expect("i+n: B^j", oj.bo, 40.0);
    expect("i+n: D^j(B^j)", oj.d_bo, 70.0);
    expect("i+n: d^i", at_in.buffer(1).unwrap_or(f64::NAN), 10.0);
    expect("i+n: d^j", oj.d, 10.0);
    let at_k = &ls[4].0;
    let (oj, ok) = (at_k.open_res(2).unwrap(), at_k.open_res(3).unwrap());
    expect("k: B^j", oj.bo, 50.0);
    expect("k: D^j(B^j)", oj.d_bo, 70.0);
    expect("k: B^k", ok.bo, 50.0);
    expect("k: D^k(B^k)", ok.d_bo, 90.0);
    let (at_jn, cal) = &ls[5];
    let ok = at_jn.open_res(3).unwrap();
    expect("j+n: B", at_jn.b, 70.0);
    expect("j+n: B^k", ok.bo, 60.0);
    expect("j+n: D^k(B^k)", ok.d_bo, 90.0);
    expect("ΔA at a_(j+n) = 60", shift(at_k, at_jn, cal.as_ref().unwrap()), 10.0);
    let ls = walk(&chain(65.0), &[0, 1, 2, 4, 3, 5]);
    expect("ΔA at a_(j+n) = 65", shift(&ls[4].0, &ls[5].0, ls[5].1.as_ref().unwrap()), 15.0);
    let pass = errs.is_empty();
    Outcome::check(pass, if pass { "resource table and both calibration cases reproduced".into() } else { errs.join("; ") })
}

fn risk_measure() -> Outcome {
    let inst = uniform(2, 5.0, &[1.0, 1.0], 100.0);
    let r = route_from_schedule(&inst, &[0, 1, 2, 3, 4, 5], vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0]);
    match validate_route(&inst, &r) {
        Ok(b) => Outcome::check(b.h == [5.0, 5.0], format!("H = {:?}", b.h)),
        Err(v) => Outcome::check(false, format!("{v:?}")),
    }
}

fn dominance_preserves_minimum() -> Result<String, String> {
    for seed in 0..100u64 {
        let n = 2 + (seed % 4) as usize;
        let inst = random_instance(&small_config(n, Mode::Rdarp), seed).unwrap();
        let mut rng = lcg(seed);
        let d = random_duals(&inst, &mut rng, false, seed % 2 == 0);
        let out = solve_pricing(&inst, &d, &PricingOptions { limit: 10_000, ..Default::default() }).map_err(|e| e.to_string())?;
        let r = reference(&inst, &d, PriceMode::Cost, f64::INFINITY);
        let got = out.columns.first().map_or(f64::INFINITY, |c| c.reduced_cost);
        let ok = if r.best < NEG_RC - 1e-6 { (got - r.best).abs() < 1e-6 } else { got >= r.best - 1e-6 };
        if !ok {
            return Err(format!("seed {seed}: pricing {got} vs enumeration {}", r.best));
        }
    }
    Ok("100 dual vectors".into())
}

fn cuts_hold_for_optimum() -> Result<String, String> {
    let mut checked = 0;
    for seed in 0..120u64 {
        let n = 3 + (seed % 2) as usize;
        let inst = random_instance(&GeneratorConfig { n, fleet: 2, ..Default::default() }, seed).unwrap();
        let routes = all_routes(&inst);
        let Ok(best) = brute_force_solve(&inst, f64::INFINITY, Objective::Cost, f64::INFINITY) else { continue };
        let opt = ArcFlow::from_arcs(best.routes.iter().flat_map(|r| r.arcs().map(|a| (a, 1.0))));
        let mut rng = lcg(seed);
        let mut flow = Vec::new();
        for _ in 0..3 {
            let r = &routes[(rng() * routes.len() as f64) as usize];
            let w = 0.2 + 0.8 * rng();
            flow.extend(r.arcs().map(|a| (a, w)));
        }
        for cut in separate(&ArcFlow::from_arcs(flow), &inst, CutFamilies::ALL, &HashSet::new()) {
            checked += 1;
            if cut.violation(&opt, &inst) > 1e-9 {
                return Err(format!("seed {seed}: {:?} {:?} cuts the optimum", cut.kind, cut.nodes));
            }
        }
    }
    if checked == 0 {
        return Err("no cut separated".into());
    }
    Ok(format!("{checked} cuts"))
}

fn cuts_raise_root_bound() -> Result<String, String> {
    let mut with_cuts = 0;
    for seed in 0..15u64 {
        let inst = random_instance(&GeneratorConfig { n: 5, fleet: 2, ..Default::default() }, seed).unwrap();
        let r = solve(&inst, &SolveOptions::default()).map_err(|e| e.to_string())?;
        if let (Some(root), Some(plain)) = (r.root_bound, r.root_bound_no_cuts) {
            if root < plain - 1e-6 {
                return Err(format!("seed {seed}: {root} below {plain}"));
            }
            if r.cuts > 0 {
                with_cuts += 1;
            }
        }
    }
    Ok(format!("{with_cuts} roots with cuts"))
}

fn cost_monotone_in_cap() -> Result<String, String> {
    for seed in 0..5u64 {
        let inst = random_instance(&GeneratorConfig { n: 4, fleet: 2, ..Default::default() }, seed).unwrap();
        let top = solve(&inst, &SolveOptions::default()).map_err(|e| e.to_string())?.max_risk();
        let mut last = f64::NEG_INFINITY;
        for k in 0..5 {
            let eps = top * (1.0 - k as f64 / 4.0);
            let z = solve(&inst, &SolveOptions { eps_risk: eps, ..Default::default() })
                .map_err(|e| e.to_string())?
                .objective
                .unwrap_or(f64::INFINITY);
            if z < last - 1e-6 {
                return Err(format!("seed {seed}: cost {z} below {last} at eps {eps}"));
            }
            last = z;
        }
    }
    Ok("5 sweeps".into())
}

fn pareto_points_certified() -> Result<String, String> {
    let mut points = 0;
    for seed in 0..4u64 {
        let inst = random_instance(&GeneratorConfig { n: 4, fleet: 2, ..Default::default() }, seed).unwrap();
        let front = pareto_front(&inst, &ParetoOptions::default()).map_err(|e| e.to_string())?;
        let cert: Vec<_> = front.certified().collect();
        for (a, p) in cert.iter().enumerate() {
            points += 1;
            for q in &cert[a + 1..] {
                let dominated = (q.cost <= p.cost + 1e-9 && q.max_risk <= p.max_risk + 1e-9)
                    || (p.cost <= q.cost + 1e-9 && p.max_risk <= q.max_risk + 1e-9);
                if dominated {
                    return Err(format!("seed {seed}: ({}, {}) and ({}, {})", p.cost, p.max_risk, q.cost, q.max_risk));
                }
            }
            let z = solve(&inst, &SolveOptions { eps_risk: p.max_risk, ..Default::default() })
                .map_err(|e| e.to_string())?
                .objective;
            let h = solve(&inst, &SolveOptions { mode: PriceMode::Risk, eps_cost: p.cost + 1e-7 * (1.0 + p.cost), ..Default::default() })
                .map_err(|e| e.to_string())?
                .objective;
            if z.is_none_or(|z| (z - p.cost).abs() > ORACLE_TOL) || h.is_none_or(|h| (h - p.max_risk).abs() > ORACLE_TOL) {
                return Err(format!("seed {seed}: point ({}, {}) fails cross-solve: {z:?} {h:?}", p.cost, p.max_risk));
            }
        }
    }
    Ok(format!("{points} points"))
}

fn edarp_identity(runs: &[OracleRun]) -> Result<String, String> {
    let mut columns = 0;
    for run in runs.iter().filter(|r| r.inst.mode == Mode::Edarp) {
        let inst = &run.inst;
        for i in 1..=inst.n {
            let want = inst.t(i, inst.n + i).max(15.0);
            if inst.detour_weight[i - 1] != want {
                return Err(format!("detour weight {} vs {want}", inst.detour_weight[i - 1]));
            }
        }
        for col in run.report.pool.iter() {
            columns += 1;
            let r = &col.route;
            for i in r.requests(inst) {
                let p = r.sequence.iter().position(|&v| v == i).unwrap();
                let q = r.sequence.iter().position(|&v| v == inst.n + i).unwrap();
                let ride = r.schedule[q] - r.schedule[p];
                if (r.h[i - 1] - ride).abs() > 1e-9 {
                    return Err(format!("{:?}: H_{i} = {} vs ride {ride}", r.sequence, r.h[i - 1]));
                }
            }
        }
    }
    Ok(format!("{columns} columns"))
}

fn property_suites(runs: &[OracleRun]) -> Outcome {
    let parts: [(&str, Box<dyn Fn() -> Result<String, String> + '_>); 6] = [
        ("a", Box::new(dominance_preserves_minimum)),
        ("b", Box::new(cuts_hold_for_optimum)),
        ("c", Box::new(cuts_raise_root_bound)),
        ("d", Box::new(cost_monotone_in_cap)),
        ("e", Box::new(pareto_points_certified)),
        ("f", Box::new(move || edarp_identity(runs))),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (tag, f) in parts {
        match catch_unwind(AssertUnwindSafe(|| f())) {
            Ok(Ok(s)) => detail.push(format!("({tag}) ok, {s}")),
            Ok(Err(e)) => {
                pass = false;
                detail.push(format!("({tag}) FAIL, {e}"));
            }
            Err(_) => {
                pass = false;
                detail.push(format!("({tag}) FAIL, panicked"));
            }
        }
    }
    Outcome::check(pass, detail.join("; "))
}

fn format_round_trip() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut names = Vec::new();
    for name in ["rw_small.json", "rw_noq.json", "rw_edarp.json"] {
        let text = match std::fs::read_to_string(dir.join(name)) {
            Ok(t) => t,
            Err(e) => return Outcome::check(false, format!("{name}: {e}")),
        };
        let a = match parse_realworld(&text) {
            Ok(a) => a,
            Err(e) => return Outcome::check(false, format!("{name}: {e}")),
        };
        match parse_realworld(&emit_realworld(&a)) {
            Ok(b) if a == b => names.push(name),
            Ok(_) => return Outcome::check(false, format!("{name}: instance changed after a round trip")),
            Err(e) => return Outcome::check(false, format!("{name}: {e}")),
        }
    }
    Outcome::check(true, format!("{} fixtures", names.len()))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Outcome::check(false, format!("panicked: {msg}"))
    })
}

fn main() {
    let strict = std::env::var_os("RDARP_ACCEPTANCE_STRICT").is_some();
    let mut runs = Vec::new();
    let results = vec![
        (1, "benchmark regression", guarded(benchmark_regression)),
        (2, "infeasibility detection", guarded(infeasibility_detection)),
        (3, "oracle equivalence", guarded(|| oracle_equivalence(&mut runs))),
        (4, "column soundness", guarded(|| column_soundness(&runs))),
        (5, "label golden test", guarded(golden_labels)),
        (6, "risk measure", guarded(risk_measure)),
        (7, "property suites", guarded(|| property_suites(&runs))),
        (8, "real-world format round trip", guarded(format_round_trip)),
    ];
    let mut hard_failures = 0;
    for (k, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {k} {tag}: {name}: {}", o.detail);
        if !o.pass && (strict || !o.missing_data) {
            hard_failures += 1;
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if hard_failures > 0 {
        std::process::exit(1);
    }
}
