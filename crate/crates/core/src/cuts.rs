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


//! Valid inequalities over aggregated arc flows and their separation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rdarp_lp::Sense;

use crate::instance::Instance;
use crate::master::{ColumnPool, ExtraRow, RowExpr};
use crate::oracle::{earliest_schedule, solve_segment, Segment, SegmentGoal};

/// Minimum violation for a cut to be reported.
pub const VIOLATION_TOL: f64 = 1e-4;
/// Cuts returned per separation round at most.
pub const MAX_CUTS_PER_ROUND: usize = 100;
/// Longest path stub inspected for infeasible paths, in arcs.
pub const MAX_PATH_ARCS: usize = 6;
/// Largest node set inspected by the two-path separation.
pub const MAX_TWO_PATH_SET: usize = 4;
const MAX_RC_SET: usize = 8;
const SUPPORT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    Ipec,
    StrengthenedIpec,
    TwoPath,
    RoundedCapacity,
}

/// Families enabled for separation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutFamilies {
    pub ipec: bool,
    pub two_path: bool,
    pub rounded_capacity: bool,
}

impl CutFamilies {
    pub const ALL: CutFamilies = CutFamilies { ipec: true, two_path: true, rounded_capacity: true };
    pub const NONE: CutFamilies = CutFamilies { ipec: false, two_path: false, rounded_capacity: false };

    pub fn any(&self) -> bool {
        self.ipec || self.two_path || self.rounded_capacity
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub kind: CutKind,
    /// Node path for the infeasible-path families, node set otherwise.
    pub nodes: Vec<usize>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Cut {
    fn path(kind: CutKind, path: Vec<usize>) -> Cut {
        let arcs = (path.len() - 1) as f64;
        let rhs = if kind == CutKind::StrengthenedIpec { arcs - 2.0 } else { arcs - 1.0 };
        Cut { kind, nodes: path, sense: Sense::Le, rhs }
    }

    fn set(kind: CutKind, mut set: Vec<usize>, rhs: f64) -> Cut {
        set.sort_unstable();
        Cut { kind, nodes: set, sense: Sense::Ge, rhs }
    }

    /// Arc coefficients `β_ij`.
    pub fn arcs(&self, inst: &Instance) -> BTreeMap<(usize, usize), f64> {
        let mut w = BTreeMap::new();
        match self.kind {
            CutKind::Ipec | CutKind::StrengthenedIpec => {
                for a in self.nodes.windows(2) {
                    *w.entry((a[0], a[1])).or_insert(0.0) += 1.0;
                }
            }
            CutKind::TwoPath | CutKind::RoundedCapacity => {
                for &i in &self.nodes {
                    for j in 0..inst.num_nodes() {
                        if j != i && !self.nodes.contains(&j) {
                            w.insert((i, j), 1.0);
                        }
                    }
                }
            }
        }
        w
    }

    pub fn key(&self) -> (CutKind, Vec<usize>) {
        (self.kind, self.nodes.clone())
    }

    pub fn lhs(&self, flow: &ArcFlow, inst: &Instance) -> f64 {
        self.arcs(inst).iter().map(|(a, b)| b * flow.get(a.0, a.1)).sum()
    }

    pub fn violation(&self, flow: &ArcFlow, inst: &Instance) -> f64 {
        let lhs = self.lhs(flow, inst);
        match self.sense {
            Sense::Le => lhs - self.rhs,
            Sense::Ge => self.rhs - lhs,
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }

    pub fn to_row(&self, inst: &Instance) -> ExtraRow {
        let tag = match self.kind {
            CutKind::Ipec => "ipec",
            CutKind::StrengthenedIpec => "sipec",
            CutKind::TwoPath => "2pc",
            CutKind::RoundedCapacity => "rc",
        };
        let ids: Vec<String> = self.nodes.iter().map(|v| v.to_string()).collect();
        ExtraRow {
            name: format!("{tag}_{}", ids.join("_")),
            expr: RowExpr::Arcs(self.arcs(inst)),
            sense: self.sense,
            rhs: self.rhs,
        }
    }
}

/// Aggregated arc flows `x̄_ij = Σ_r β_ij,r λ_r`.
#[derive(Debug, Clone, Default)]
pub struct ArcFlow {
    x: BTreeMap<(usize, usize), f64>,
}

impl ArcFlow {
    pub fn from_solution(pool: &ColumnPool, lambda: &[(usize, f64)]) -> ArcFlow {
        let mut x = BTreeMap::new();
        for &(k, v) in lambda {
            for a in pool.get(k).route.arcs() {
                *x.entry(a).or_insert(0.0) += v;
            }
        }
        ArcFlow { x }
    }

    pub fn from_arcs(arcs: impl IntoIterator<Item = ((usize, usize), f64)>) -> ArcFlow {
        let mut x = BTreeMap::new();
        for (a, v) in arcs {
            *x.entry(a).or_insert(0.0) += v;
        }
        ArcFlow { x }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.x.get(&(i, j)).copied().unwrap_or(0.0)
    }

    /// Arcs with positive flow, sorted.
    pub fn support(&self) -> Vec<((usize, usize), f64)> {
        let mut s: Vec<_> = self.x.iter().filter(|(_, &v)| v > SUPPORT_TOL).map(|(&a, &v)| (a, v)).collect();
        s.sort_by(|a, b| a.0.cmp(&b.0));
        s
    }

    /// Flow leaving `set`.
    pub fn outflow(&self, set: &[usize]) -> f64 {
        self.x
            .iter()
            .filter(|(&(i, j), _)| set.contains(&i) && !set.contains(&j))
            .map(|(_, v)| v)
            .sum()
    }
}

/// True when `t_ij <= t_ik + s_k + t_kj` for all triples.
pub fn triangle_holds(inst: &Instance) -> bool {
    let nn = inst.num_nodes();
    (0..nn).all(|k| {
        let s = inst.nodes[k].service;
        (0..nn).all(|i| (0..nn).all(|j| i == j || i == k || j == k || inst.t(i, j) <= inst.t(i, k) + s + inst.t(k, j) + 1e-9))
    })
}

/// Why a partial path cannot appear in a route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PathStatus {
    Feasible,
    /// Infeasible for timing reasons alone.
    Timing,
    /// Infeasible through precedence or load.
    Other,
}

fn path_status(inst: &Instance, path: &[usize]) -> PathStatus {
    let n = inst.n;
    let mut start_load = 0;
    for (k, &v) in path.iter().enumerate() {
        if inst.is_drop(v) {
            match path.iter().position(|&u| u == v - n) {
                Some(p) if p > k => return PathStatus::Other,
                None => start_load -= inst.nodes[v].load,
                _ => {}
            }
        }
    }
    let mut load = start_load;
    for &v in path {
        load += inst.nodes[v].load;
        if load > inst.capacity {
            return PathStatus::Other;
        }
    }
    if earliest_schedule(inst, path, f64::NEG_INFINITY).is_none() {
        return PathStatus::Timing;
    }
    let complete = path.iter().any(|&v| inst.is_pickup(v) && path.contains(&(v + n)));
    if complete {
        let seg = Segment { nodes: path, start_min: f64::NEG_INFINITY, cap: f64::INFINITY, q_cap: f64::INFINITY };
        if solve_segment(inst, &seg, SegmentGoal::MinFinish).is_err() {
            return PathStatus::Timing;
        }
    }
    PathStatus::Feasible
}

/// Infeasible path elimination cuts from bounded path stubs of the support.
pub fn separate_ipec(flow: &ArcFlow, inst: &Instance) -> Vec<Cut> {
    let strengthen = triangle_holds(inst);
    let mut succ: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
    for ((i, j), v) in flow.support() {
        if is_request_node(inst, i) && is_request_node(inst, j) {
            succ.entry(i).or_default().push((j, v));
        }
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut starts: Vec<usize> = succ.keys().copied().collect();
    starts.sort_unstable();
    for s in starts {
        let mut path = vec![s];
        ipec_dfs(inst, &succ, &mut path, 0.0, strengthen, &mut seen, &mut out);
    }
    out
}

fn is_request_node(inst: &Instance, v: usize) -> bool {
    v >= 1 && v <= 2 * inst.n
}

fn ipec_dfs(
    inst: &Instance,
    succ: &HashMap<usize, Vec<(usize, f64)>>,
    path: &mut Vec<usize>,
    deficit: f64,
    strengthen: bool,
    seen: &mut HashSet<Vec<usize>>,
    out: &mut Vec<Cut>,
) {
    if path.len() > MAX_PATH_ARCS {
        return;
    }
    let last = *path.last().unwrap();
    let Some(next) = succ.get(&last) else { return };
    for &(j, x) in next {
        if path.contains(&j) {
            continue;
        }
        let d = deficit + (1.0 - x);
        let start_pick = inst.is_pickup(path[0]);
        let limit = if strengthen && start_pick { 2.0 } else { 1.0 };
        if d >= limit - VIOLATION_TOL {
            continue;
        }
        path.push(j);
        if seen.insert(path.clone()) {
            match path_status(inst, path) {
                PathStatus::Feasible => ipec_dfs(inst, succ, path, d, strengthen, seen, out),
                status => {
                    let closes = start_pick && j == path[0] + inst.n;
                    if strengthen && closes && status == PathStatus::Timing && d < 2.0 - VIOLATION_TOL {
                        out.push(Cut::path(CutKind::StrengthenedIpec, path.clone()));
                    } else if d < 1.0 - VIOLATION_TOL {
                        out.push(Cut::path(CutKind::Ipec, path.clone()));
                    }
                }
            }
        }
        path.pop();
    }
}

/// Candidate node sets grown greedily from every support node.
fn candidate_sets(flow: &ArcFlow, inst: &Instance, max_size: usize) -> Vec<Vec<usize>> {
    let mut neighbours: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for ((i, j), _) in flow.support() {
        if is_request_node(inst, i) && is_request_node(inst, j) {
            neighbours.entry(i).or_default().insert(j);
            neighbours.entry(j).or_default().insert(i);
        }
    }
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut seeds: Vec<usize> = neighbours.keys().copied().collect();
    seeds.sort_unstable();
    for &s in &seeds {
        for &t in &neighbours[&s] {
            let mut set = vec![s, t];
            loop {
                let mut sorted = set.clone();
                sorted.sort_unstable();
                out.insert(sorted);
                if set.len() >= max_size {
                    break;
                }
                let frontier: BTreeSet<usize> = set
                    .iter()
                    .flat_map(|v| neighbours[v].iter().copied())
                    .filter(|v| !set.contains(v))
                    .collect();
                let best = frontier.into_iter().min_by(|&a, &b| {
                    let mut sa = set.clone();
                    sa.push(a);
                    let mut sb = set.clone();
                    sb.push(b);
                    flow.outflow(&sa).total_cmp(&flow.outflow(&sb))
                });
                match best {
                    Some(v) => set.push(v),
                    None => break,
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Requests touched by a node set.
fn requests_of(inst: &Instance, set: &[usize]) -> Vec<usize> {
    let mut r: Vec<usize> = set.iter().filter_map(|&v| inst.request_of(v)).collect();
    r.sort_unstable();
    r.dedup();
    r
}

/// Whether one route can serve all of `requests`, ignoring risk limits.
pub fn single_route_feasible(inst: &Instance, requests: &[usize]) -> bool {
    let mut seq = vec![0];
    let mut load = 0;
    sequence_search(inst, requests, &mut seq, &mut load)
}

fn sequence_search(inst: &Instance, requests: &[usize], seq: &mut Vec<usize>, load: &mut i32) -> bool {
    let n = inst.n;
    if seq.len() == 2 * requests.len() + 1 {
        seq.push(inst.end_depot());
        let seg = Segment { nodes: seq, start_min: f64::NEG_INFINITY, cap: f64::INFINITY, q_cap: f64::INFINITY };
        let ok = solve_segment(inst, &seg, SegmentGoal::MinFinish).is_ok();
        seq.pop();
        return ok;
    }
    let mut next = Vec::new();
    for &r in requests {
        if !seq.contains(&r) {
            next.push(r);
        } else if !seq.contains(&(r + n)) {
            next.push(r + n);
        }
    }
    for v in next {
        let l = *load + inst.nodes[v].load;
        if l > inst.capacity {
            continue;
        }
        seq.push(v);
        if earliest_schedule(inst, seq, f64::NEG_INFINITY).is_some() {
            let saved = *load;
            *load = l;
            let ok = sequence_search(inst, requests, seq, load);
            *load = saved;
            if ok {
                seq.pop();
                return true;
            }
        }
        seq.pop();
    }
    false
}

/// Two-path cuts on node sets no single route can serve.
pub fn separate_two_path(flow: &ArcFlow, inst: &Instance) -> Vec<Cut> {
    if !triangle_holds(inst) {
        return Vec::new();
    }
    let mut cache: HashMap<Vec<usize>, bool> = HashMap::new();
    let mut out = Vec::new();
    for set in candidate_sets(flow, inst, MAX_TWO_PATH_SET) {
        if flow.outflow(&set) >= 2.0 - VIOLATION_TOL {
            continue;
        }
        let reqs = requests_of(inst, &set);
        let feasible = *cache.entry(reqs.clone()).or_insert_with(|| single_route_feasible(inst, &reqs));
        if !feasible {
            out.push(Cut::set(CutKind::TwoPath, set, 2.0));
        }
    }
    out
}

/// Right-hand side of the rounded capacity inequality for `set`.
pub fn rounded_capacity_rhs(inst: &Instance, set: &[usize]) -> f64 {
    let n = inst.n;
    let cap = f64::from(inst.capacity);
    let mut w_minus = 0.0;
    let mut w_plus = 0.0;
    for &v in set {
        if inst.is_drop(v) && !set.contains(&(v - n)) {
            w_minus += f64::from(inst.nodes[v - n].load);
        }
        if inst.is_pickup(v) && !set.contains(&(v + n)) {
            w_plus += f64::from(inst.nodes[v + n].load);
        }
    }
    1f64.max((w_minus / cap - 1e-9).ceil()).max((-w_plus / cap - 1e-9).ceil())
}

/// Rounded capacity cuts on greedily grown node sets.
pub fn separate_rounded_capacity(flow: &ArcFlow, inst: &Instance) -> Vec<Cut> {
    candidate_sets(flow, inst, MAX_RC_SET)
        .into_iter()
        .filter_map(|set| {
            let rhs = rounded_capacity_rhs(inst, &set);
            (flow.outflow(&set) < rhs - VIOLATION_TOL).then(|| Cut::set(CutKind::RoundedCapacity, set, rhs))
        })
        .collect()
}

/// Run the enabled families, drop known cuts, keep the most violated.
pub fn separate(flow: &ArcFlow, inst: &Instance, families: CutFamilies, known: &HashSet<(CutKind, Vec<usize>)>) -> Vec<Cut> {
    let mut all = Vec::new();
    if families.ipec {
        all.extend(separate_ipec(flow, inst));
    }
    if families.two_path {
        all.extend(separate_two_path(flow, inst));
    }
    if families.rounded_capacity {
        all.extend(separate_rounded_capacity(flow, inst));
    }
    let mut keys = HashSet::new();
    all.retain(|c| !known.contains(&c.key()) && keys.insert(c.key()));
    let mut scored: Vec<(f64, Cut)> = all.into_iter().map(|c| (c.violation(flow, inst), c)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.key().cmp(&b.1.key())));
    scored.into_iter().take(MAX_CUTS_PER_ROUND).map(|(_, c)| c).collect()
}

/// Additive arc reduced-cost table from the duals of active cuts.
///
/// Panics when a dual has the wrong sign for its row sense.
pub fn fold_cut_duals(inst: &Instance, cuts: &[Cut], duals: &[f64]) -> Vec<f64> {
    let nn = inst.num_nodes();
    let mut table = vec![0.0; nn * nn];
    for (c, &y) in cuts.iter().zip(duals) {
        match c.sense {
            Sense::Le => assert!(y <= 1e-9, "dual {y} of a <= cut must be non-positive"),
            Sense::Ge => assert!(y >= -1e-9, "dual {y} of a >= cut must be non-negative"),
            Sense::Eq => {}
        }
        for ((i, j), b) in c.arcs(inst) {
            table[i * nn + j] -= y * b;
        }
    }
    table
}
