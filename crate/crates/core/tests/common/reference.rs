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


//! Exhaustive pricing reference and the hand-built calibration chain.

use rdarp_core::generate::GeneratorConfig;
use rdarp_core::instance::*;
use rdarp_core::oracle::*;
use rdarp_core::pricing::*;

use super::uniform;

/// Requests i, j, k = 1, 2, 3 visited as i, j, i+n, k, j+n, k+n.
pub fn chain(a_jn: f64) -> Instance {
    let mut inst = uniform(3, 10.0, &[1.0, 1.0, 1.0], 200.0);
    let w = [(1, 10.0, 20.0), (2, 20.0, 60.0), (4, 20.0, 40.0), (3, 40.0, 50.0), (5, a_jn, 100.0), (6, 0.0, 90.0)];
    for (v, a, b) in w {
        inst.nodes[v].early = a;
        inst.nodes[v].late = b;
    }
    inst.max_ride = vec![20.0, 40.0, 40.0];
    inst
}

pub fn walk(inst: &Instance, seq: &[usize]) -> Vec<(Label, Option<Calibration>)> {
    let w = vec![0.0; inst.n];
    let ctx = ExtendCtx { inst, weights: &w, check_q: false };
    let mut out = vec![(Label::root(&ctx, 0.0), None)];
    for &j in &seq[1..] {
        let (l, c) = out.last().unwrap().0.extend_with(&ctx, j, 0.0).unwrap();
        out.push((l, c));
    }
    out
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

/// Leg duration after the departure delay absorbed by calibration.
pub fn shift(prev: &Label, next: &Label, cal: &Calibration) -> f64 {
    next.a - prev.a - cal.delta_star
}

pub struct Reference {
    pub best: f64,
    pub count: usize,
}

/// Minimum reduced cost over every elementary feasible route, priced with the
/// fixed-sequence min-max schedule.
pub fn reference(inst: &Instance, d: &DualValues, mode: PriceMode, cap: f64) -> Reference {
    let mut seq = vec![0];
    let mut best = f64::INFINITY;
    let mut count = 0;
    dfs(inst, d, mode, cap, &mut seq, 0, inst.nodes[0].early, &mut best, &mut count);
    Reference { best, count }
}

pub fn arc_cost(inst: &Instance, d: &DualValues, mode: PriceMode, i: usize, j: usize) -> f64 {
    let t = inst.t(i, j);
    let mut c = if mode == PriceMode::Cost { t } else { -d.xi * t };
    if i >= 1 && i <= inst.n {
        c -= d.pi[i - 1];
    }
    c + d.arc_delta[i * inst.num_nodes() + j]
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    inst: &Instance,
    d: &DualValues,
    mode: PriceMode,
    cap: f64,
    seq: &mut Vec<usize>,
    load: i32,
    time: f64,
    best: &mut f64,
    count: &mut usize,
) {
    let n = inst.n;
    let last = *seq.last().unwrap();
    let open: Vec<usize> = (1..=n).filter(|&i| seq.contains(&i) && !seq.contains(&(i + n))).collect();
    let mut next: Vec<usize> = (1..=n).filter(|i| !seq.contains(i)).collect();
    next.extend(open.iter().map(|&i| i + n));
    if open.is_empty() && seq.len() > 1 {
        next.push(2 * n + 1);
    }
    for j in next {
        let l = load + inst.nodes[j].load;
        if l > inst.capacity {
            continue;
        }
        let a = (time + inst.nodes[last].service + inst.t(last, j)).max(inst.nodes[j].early);
        if a > inst.nodes[j].late + 1e-9 {
            continue;
        }
        seq.push(j);
        if j == 2 * n + 1 {
            if let Ok((route, h_bar)) = mmr_schedule(inst, seq) {
                if h_bar <= cap + CAP_TOL {
                    *count += 1;
                    let mut rc = d.route_constant();
                    for w in seq.windows(2) {
                        rc += arc_cost(inst, d, mode, w[0], w[1]);
                    }
                    for i in 1..=n {
                        rc += -d.rho[i - 1] / inst.exposure_norm(i) * route.h[i - 1];
                    }
                    *best = best.min(rc);
                }
            }
        } else {
            dfs(inst, d, mode, cap, seq, l, a, best, count);
        }
        seq.pop();
    }
}

pub fn small_config(n: usize, mode: Mode) -> GeneratorConfig {
    GeneratorConfig { n, fleet: n, mode, ..Default::default() }
}

pub fn random_duals(inst: &Instance, rng: &mut impl FnMut() -> f64, weights: bool, cuts: bool) -> DualValues {
    let mut d = DualValues::zero(inst);
    for p in d.pi.iter_mut() {
        *p = 60.0 * rng();
    }
    d.mu = -10.0 * rng();
    if weights {
        for r in d.rho.iter_mut() {
            if rng() < 0.6 {
                *r = -3.0 * rng();
            }
        }
        d.xi = -rng();
    }
    if cuts {
        let nn = inst.num_nodes();
        for k in 0..nn * nn {
            if rng() < 0.1 {
                d.arc_delta[k] = 10.0 * rng() - 5.0;
            }
        }
        d.route_adj = 4.0 * rng() - 2.0;
    }
    d
}
