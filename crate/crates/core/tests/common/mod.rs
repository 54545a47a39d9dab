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


#![allow(dead_code)]

pub mod reference;

use rdarp_core::instance::*;
use rdarp_core::oracle::*;

/// Instance with every travel time equal to `t`, zero service and wide windows.
pub fn uniform(n: usize, t: f64, risks: &[f64], horizon: f64) -> Instance {
    let nn = 2 * n + 2;
    let mut nodes = Vec::new();
    for v in 0..nn {
        let (load, risk) = if v >= 1 && v <= n {
            (1, risks[v - 1])
        } else if v > n && v <= 2 * n {
            (-1, -risks[v - n - 1])
        } else {
            (0, 0.0)
        };
        nodes.push(Node { id: v, x: 0.0, y: 0.0, service: 0.0, load, risk, early: 0.0, late: horizon });
    }
    let travel = (0..nn * nn).map(|k| if k / nn == k % nn { 0.0 } else { t }).collect();
    Instance {
        name: "uniform".into(),
        n,
        fleet: 1,
        capacity: n as i32,
        q_max: f64::INFINITY,
        mode: Mode::Rdarp,
        nodes,
        has_coords: false,
        travel,
        max_ride: vec![horizon; n],
        detour_weight: vec![1.0; n],
        removed: Vec::new(),
    }
}

pub const FIXTURE2: &str = include_str!("../fixtures/fixture2.txt");

pub fn fixture2() -> Instance {
    preprocess(&derive_benchmark_risk(&parse_cordeau(FIXTURE2, "fixture2").unwrap())).unwrap()
}

/// Every route with a feasible schedule, each with its min-max schedule.
pub fn all_routes(inst: &Instance) -> Vec<Route> {
    let mut out = Vec::new();
    grow(inst, &mut vec![0], &mut out);
    out
}

fn grow(inst: &Instance, seq: &mut Vec<usize>, out: &mut Vec<Route>) {
    let n = inst.n;
    let open: Vec<usize> = (1..=n).filter(|&i| seq.contains(&i) && !seq.contains(&(i + n))).collect();
    let mut next: Vec<usize> = (1..=n).filter(|i| !seq.contains(i)).collect();
    next.extend(open.iter().map(|&i| i + n));
    if open.is_empty() && seq.len() > 1 {
        next.push(2 * n + 1);
    }
    let load: i32 = seq.iter().map(|&v| inst.nodes[v].load).sum();
    for j in next {
        if load + inst.nodes[j].load > inst.capacity {
            continue;
        }
        seq.push(j);
        if j == 2 * n + 1 {
            if let Ok((r, _)) = mmr_schedule(inst, seq) {
                out.push(r);
            }
        } else if earliest_schedule(inst, seq, f64::NEG_INFINITY).is_some() {
            grow(inst, seq, out);
        }
        seq.pop();
    }
}

/// Every set of at most `fleet` routes covering each request once.
pub fn all_solutions(inst: &Instance, routes: &[Route]) -> Vec<Vec<usize>> {
    let masks: Vec<usize> = routes
        .iter()
        .map(|r| r.requests(inst).iter().fold(0, |m, &i| m | 1 << (i - 1)))
        .collect();
    let full = (1 << inst.n) - 1;
    let mut out = Vec::new();
    pick(&masks, full, 0, inst.fleet, &mut Vec::new(), &mut out);
    out
}

fn pick(masks: &[usize], full: usize, covered: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if covered == full {
        out.push(cur.clone());
        return;
    }
    if left == 0 {
        return;
    }
    let low = !covered & (covered + 1);
    for (k, &m) in masks.iter().enumerate() {
        if m & low != 0 && m & covered == 0 {
            cur.push(k);
            pick(masks, full, covered | m, left - 1, cur, out);
            cur.pop();
        }
    }
}

pub fn lcg(seed: u64) -> impl FnMut() -> f64 {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (s >> 11) as f64 / (1u64 << 53) as f64
    }
}
