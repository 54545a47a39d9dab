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


//! Forward labeling for the pricing problem.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::time::Instant;

use crate::instance::{Instance, Mode};
use crate::oracle::{mmr_schedule, solve_segment, ScheduleError, Segment, SegmentGoal, CAP_TOL};

use super::dominance::{dominates, dtw_dominates};
use super::label::{ExtendCtx, Label, MAX_REQUESTS};
use super::{arc_reduced_cost, DualValues, PriceMode, PricedColumn, PricingError, NEG_RC};

/// Dominance and pruning policy of one labeling run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Calibrated-resource dominance without the served-set test.
    Heuristic,
    /// Dynamic time window dominance; exact without exposure caps or weights.
    Darp,
    /// Dominance only across identical on-board clusters; exact under caps.
    Cluster,
    /// Elementary enumeration; exact with exposure weights.
    Enumerate,
}

#[derive(Debug, Clone)]
pub struct PricingOptions {
    pub mode: PriceMode,
    pub heuristic: bool,
    /// Maximum number of columns returned.
    pub limit: usize,
    /// Cap on the normalised min-max exposure of a column.
    pub eps_risk: f64,
    /// Record one line per accepted label.
    pub trace: bool,
    /// Stop the heuristic pass after this many labels.
    pub label_limit: Option<usize>,
    /// Abandon the search at this instant; the outcome is then incomplete.
    pub deadline: Option<Instant>,
}

impl Default for PricingOptions {
    fn default() -> Self {
        Self {
            mode: PriceMode::Cost,
            heuristic: false,
            limit: 200,
            eps_risk: f64::INFINITY,
            trace: false,
            label_limit: None,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PricingOutcome {
    /// Negative reduced-cost columns, most negative first.
    pub columns: Vec<PricedColumn>,
    pub labels: usize,
    pub routes_evaluated: usize,
    pub trace: Vec<String>,
    /// False when the run stopped early.
    pub complete: bool,
    pub regime: Option<Regime>,
}

/// Cluster bookkeeping for [`Regime::Cluster`].
#[derive(Debug, Clone, Default)]
struct ClusterState {
    /// Nodes since the vehicle was last empty.
    nodes: Vec<usize>,
    /// Earliest start of the first cluster node, or finish of the last closed cluster.
    ready: f64,
    /// Lower bound on cumulative risk of the closed clusters.
    q_lo: f64,
    /// Cumulative risk of the closed clusters under the earliest-finish schedule.
    q_w: f64,
}

struct Entry {
    label: Label,
    cluster: Option<ClusterState>,
    alive: bool,
}

#[derive(PartialEq)]
struct Key(f64, u64, usize);

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pick the regime for an exact run.
pub fn exact_regime(inst: &Instance, duals: &DualValues, eps_risk: f64) -> Regime {
    if duals.has_weights() {
        Regime::Enumerate
    } else if inst.mode == Mode::Edarp || (!eps_risk.is_finite() && !inst.q_relevant()) {
        Regime::Darp
    } else {
        Regime::Cluster
    }
}

/// Copy of an EDARP instance whose ride limits encode a detour-rate cap.
pub fn detour_capped(inst: &Instance, eps: f64) -> Instance {
    let mut out = inst.clone();
    if eps.is_finite() {
        for i in 1..=inst.n {
            let lim = eps * inst.exposure_norm(i) - inst.nodes[i].service;
            out.max_ride[i - 1] = out.max_ride[i - 1].min(lim);
        }
    }
    out
}

/// Run one labeling pass.
pub fn run_labeling(
    inst: &Instance,
    duals: &DualValues,
    opts: &PricingOptions,
    regime: Regime,
) -> Result<PricingOutcome, PricingError> {
    if inst.n > MAX_REQUESTS {
        return Err(PricingError::TooManyRequests(inst.n));
    }
    let capped;
    let search: &Instance = if inst.mode == Mode::Edarp && opts.eps_risk.is_finite() {
        capped = detour_capped(inst, opts.eps_risk);
        &capped
    } else {
        inst
    };
    let nn = inst.num_nodes();
    let end = inst.end_depot();
    let mut rc = vec![f64::INFINITY; nn * nn];
    for i in 0..nn {
        for j in 0..nn {
            if i != j && j != 0 && i != end && !inst.arc_removed(i, j) {
                rc[i * nn + j] = arc_reduced_cost(inst, duals, i, j, opts.mode);
            }
        }
    }
    let weights: Vec<f64> = (1..=inst.n).map(|i| -duals.rho[i - 1] / inst.exposure_norm(i)).collect();
    let ctx = ExtendCtx { inst: search, weights: &weights, check_q: regime == Regime::Heuristic };
    let open_subset = regime == Regime::Darp && delivery_triangle_holds(inst, &rc);
    let cap = opts.eps_risk;
    let q_relevant = inst.q_relevant();

    let mut out = PricingOutcome { complete: true, regime: Some(regime), ..Default::default() };
    let mut arena: Vec<Entry> = Vec::new();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); nn];
    let mut heap = BinaryHeap::new();
    let mut counter = 0u64;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut found: Vec<PricedColumn> = Vec::new();

    let root = Label::root(&ctx, duals.route_constant());
    let root_cluster = (regime == Regime::Cluster).then(|| ClusterState { ready: root.a, ..Default::default() });
    arena.push(Entry { label: root, cluster: root_cluster, alive: true });
    heap.push(Key(arena[0].label.c_tilde, counter, 0));

    let mut pops = 0usize;
    'search: while let Some(Key(_, _, idx)) = heap.pop() {
        if !arena[idx].alive {
            continue;
        }
        pops += 1;
        if pops % 64 == 0 && opts.deadline.is_some_and(|d| Instant::now() >= d) {
            out.complete = false;
            break;
        }
        let eta = arena[idx].label.node;
        for j in 1..nn {
            let arc = rc[eta * nn + j];
            if !arc.is_finite() {
                continue;
            }
            let Ok(mut next) = arena[idx].label.extend(&ctx, j, arc) else { continue };
            next.parent = Some(idx);
            let cluster = match &arena[idx].cluster {
                Some(st) => match advance_cluster(search, st, eta, &next, cap, q_relevant)? {
                    Some(c) => Some(c),
                    None => continue,
                },
                None => None,
            };
            if j == end {
                let seq = path(&arena, idx, j);
                if seen.insert(seq.clone()) {
                    if let Some(col) = evaluate(inst, &next, seq, &weights, cap, &mut out)? {
                        found.push(col);
                        if opts.heuristic && found.len() >= opts.limit {
                            out.complete = false;
                            break 'search;
                        }
                    }
                }
                continue;
            }
            if regime != Regime::Enumerate {
                let dominated = buckets[j].iter().any(|&k| {
                    arena[k].alive && label_dominates(regime, &arena[k], &next, cluster.as_ref(), open_subset)
                });
                if dominated {
                    continue;
                }
                let mut keep = Vec::with_capacity(buckets[j].len() + 1);
                for &k in &buckets[j] {
                    if !arena[k].alive {
                        continue;
                    }
                    let probe = Entry { label: next.clone(), cluster: cluster.clone(), alive: true };
                    if label_dominates(regime, &probe, &arena[k].label, arena[k].cluster.as_ref(), open_subset) {
                        arena[k].alive = false;
                    } else {
                        keep.push(k);
                    }
                }
                buckets[j] = keep;
            }
            if opts.trace {
                out.trace.push(trace_line(&next));
            }
            counter += 1;
            let key = next.c_tilde;
            arena.push(Entry { label: next, cluster, alive: true });
            let k = arena.len() - 1;
            buckets[j].push(k);
            heap.push(Key(key, counter, k));
            out.labels += 1;
            if let Some(limit) = opts.label_limit {
                if opts.heuristic && out.labels >= limit {
                    out.complete = false;
                    break 'search;
                }
            }
        }
    }
    found.sort_by(|a, b| a.reduced_cost.total_cmp(&b.reduced_cost).then(a.route.sequence.cmp(&b.route.sequence)));
    found.truncate(opts.limit);
    out.columns = found;
    Ok(out)
}

fn label_dominates(regime: Regime, e1: &Entry, l2: &Label, c2: Option<&ClusterState>, open_subset: bool) -> bool {
    let l1 = &e1.label;
    match regime {
        Regime::Heuristic => dominates(l1, l2, true),
        Regime::Darp => dtw_dominates(l1, l2, open_subset),
        Regime::Cluster => {
            let (Some(c1), Some(c2)) = (e1.cluster.as_ref(), c2) else { return false };
            l1.node == l2.node
                && c1.nodes == c2.nodes
                && l1.picked.is_subset(&l2.picked)
                && l1.arc_rc <= l2.arc_rc + 1e-9
                && c1.ready <= c2.ready + 1e-9
                && c1.q_w <= c2.q_lo + 1e-9
        }
        Regime::Enumerate => false,
    }
}

/// Whether skipping a drop-off never raises reduced cost or arrival time.
fn delivery_triangle_holds(inst: &Instance, rc: &[f64]) -> bool {
    let nn = inst.num_nodes();
    for v in inst.n + 1..=2 * inst.n {
        for u in 0..nn {
            let uv = rc[u * nn + v];
            if !uv.is_finite() {
                continue;
            }
            for w in 0..nn {
                let vw = rc[v * nn + w];
                let uw = rc[u * nn + w];
                if u == w || !vw.is_finite() || !uw.is_finite() {
                    continue;
                }
                if uw > uv + vw + 1e-9 {
                    return false;
                }
                let su = inst.nodes[u].service;
                let direct = su + inst.t(u, w);
                let via = su + inst.t(u, v) + inst.nodes[v].service + inst.t(v, w);
                if direct > via + 1e-9 {
                    return false;
                }
            }
        }
    }
    true
}

/// Node sequence of the label at `idx` followed by `last`.
fn path(arena: &[Entry], idx: usize, last: usize) -> Vec<usize> {
    let mut seq = vec![last];
    let mut cur = Some(idx);
    while let Some(k) = cur {
        seq.push(arena[k].label.node);
        cur = arena[k].label.parent;
    }
    seq.reverse();
    seq
}

/// Update the cluster state for `next`; `None` when the label is pruned.
fn advance_cluster(
    inst: &Instance,
    st: &ClusterState,
    prev: usize,
    next: &Label,
    cap: f64,
    q_relevant: bool,
) -> Result<Option<ClusterState>, PricingError> {
    let j = next.node;
    let mut out = st.clone();
    if j == inst.end_depot() {
        return Ok(Some(out));
    }
    if st.nodes.is_empty() {
        // first pick-up after an empty stretch: `ready` holds the previous finish
        let arrive = st.ready + inst.nodes[prev].service + inst.t(prev, j);
        out.ready = arrive.max(inst.nodes[j].early);
    }
    out.nodes.push(j);
    if cap.is_finite() && exposure_floor(inst, &out.nodes) > cap + CAP_TOL {
        return Ok(None);
    }
    if next.load == 0 {
        let seg = Segment { nodes: &out.nodes, start_min: out.ready, cap, q_cap: f64::INFINITY };
        let fin = match solve_segment(inst, &seg, SegmentGoal::MinFinish) {
            Ok(s) => s,
            Err(ScheduleError::Infeasible) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let q_fin = segment_q(inst, &out.nodes, &fin.times);
        let q_min = if q_relevant {
            match solve_segment(inst, &seg, SegmentGoal::MinQ) {
                Ok(s) => segment_q(inst, &out.nodes, &s.times),
                Err(ScheduleError::Infeasible) => return Ok(None),
                Err(e) => return Err(e.into()),
            }
        } else {
            0.0
        };
        out.q_lo += q_min;
        out.q_w += q_fin;
        if q_relevant && out.q_lo > inst.q_max + 1e-6 {
            return Ok(None);
        }
        out.ready = *fin.times.last().unwrap();
        out.nodes.clear();
    }
    Ok(Some(out))
}

/// Cumulative risk accrued inside a cluster under `times`.
fn segment_q(inst: &Instance, nodes: &[usize], times: &[f64]) -> f64 {
    let mut r = 0.0;
    let mut q = 0.0;
    for k in 0..nodes.len() {
        if k > 0 {
            q += r * (times[k] - times[k - 1]);
        }
        r += inst.nodes[nodes[k]].risk;
    }
    q
}

/// Largest normalised exposure in a cluster prefix when nobody waits.
fn exposure_floor(inst: &Instance, nodes: &[usize]) -> f64 {
    let mut clock = vec![0.0; nodes.len()];
    for k in 1..nodes.len() {
        clock[k] = clock[k - 1] + inst.nodes[nodes[k - 1]].service + inst.t(nodes[k - 1], nodes[k]);
    }
    let last = nodes.len() - 1;
    let span = |req: usize| {
        let p = nodes.iter().position(|&v| v == req).unwrap();
        let d = nodes.iter().position(|&v| v == req + inst.n).unwrap_or(last);
        (p, d)
    };
    let reqs: Vec<usize> = nodes.iter().copied().filter(|&v| inst.is_pickup(v)).collect();
    let mut worst: f64 = 0.0;
    for &i in &reqs {
        let (pi, di) = span(i);
        let mut h = 0.0;
        for &j in &reqs {
            if i == j {
                continue;
            }
            let (pj, dj) = span(j);
            let (s, e) = (pi.max(pj), di.min(dj));
            if s < e {
                h += inst.risk_of(j) * (clock[e] - clock[s]);
            }
        }
        worst = worst.max(h / inst.exposure_norm(i));
    }
    worst
}

/// Schedule a finished path and price it.
fn evaluate(
    inst: &Instance,
    last: &Label,
    seq: Vec<usize>,
    weights: &[f64],
    cap: f64,
    out: &mut PricingOutcome,
) -> Result<Option<PricedColumn>, PricingError> {
    if last.arc_rc >= NEG_RC {
        return Ok(None);
    }
    out.routes_evaluated += 1;
    let route = match mmr_schedule(inst, &seq) {
        Ok((r, _)) => r,
        Err(ScheduleError::Infeasible) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    if route.h_bar > cap + CAP_TOL {
        return Ok(None);
    }
    let reduced_cost = last.arc_rc
        + (1..=inst.n)
            .filter(|&i| route.covers(inst, i))
            .map(|i| weights[i - 1] * route.h[i - 1])
            .sum::<f64>();
    if reduced_cost < NEG_RC {
        Ok(Some(PricedColumn { route, reduced_cost }))
    } else {
        Ok(None)
    }
}

fn trace_line(l: &Label) -> String {
    format!(
        "node={} c={:.4} A={:.4} B={:.4} open={} Q={:.4}",
        l.node,
        l.c_tilde,
        l.a,
        l.b,
        l.open.len(),
        l.q
    )
}
