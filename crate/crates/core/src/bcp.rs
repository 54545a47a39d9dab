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


//! Best-first branch-cut-and-price over the column generation relaxation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashSet};
use std::time::{Duration, Instant};

use rdarp_lp::Sense;
use thiserror::Error;

use crate::cuts::{separate, ArcFlow, Cut, CutFamilies, CutKind};
use crate::instance::Instance;
use crate::master::{
    column_generation, seed_pool, CgOptions, CgOutcome, ColumnPool, ExtraRow, MasterConfig, MasterError, MasterSolution,
    RowExpr,
};
use crate::oracle::Route;
use crate::pricing::PriceMode;

/// Values within this distance of an integer count as integral.
pub const INT_TOL: f64 = 1e-6;
/// Nodes are pruned when their bound is within this of the incumbent.
pub const PRUNE_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub mode: PriceMode,
    /// Exposure cap; in the risk master a known upper bound on the optimum.
    pub eps_risk: f64,
    pub eps_cost: f64,
    pub time_limit: Option<Duration>,
    pub cuts: CutFamilies,
    pub heuristic_pricing: bool,
    pub max_cut_rounds: usize,
    pub node_limit: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            mode: PriceMode::Cost,
            eps_risk: f64::INFINITY,
            eps_cost: f64::INFINITY,
            time_limit: None,
            cuts: CutFamilies::ALL,
            heuristic_pricing: true,
            max_cut_rounds: 20,
            node_limit: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// Stopped early with an incumbent.
    Feasible,
    Infeasible,
    /// Stopped early without an incumbent.
    TimeLimit,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::TimeLimit => "time_limit",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub routes: Vec<Route>,
    pub objective: Option<f64>,
    pub bound: f64,
    pub gap: f64,
    /// Branch nodes solved, the root included.
    pub nodes: usize,
    pub columns: usize,
    pub cuts: usize,
    pub t_master: Duration,
    pub t_pricing: Duration,
    pub root_bound: Option<f64>,
    /// Root bound before any cut was added.
    pub root_bound_no_cuts: Option<f64>,
    /// Set when a node had to branch on a single arc.
    pub arc_branching: bool,
    /// Nodes whose relaxation fell below the parent bound.
    pub bound_drops: usize,
    /// Every column generated during the search.
    pub pool: ColumnPool,
}

impl SolveReport {
    pub fn total_cost(&self) -> f64 {
        self.routes.iter().map(|r| r.cost).sum()
    }

    pub fn max_risk(&self) -> f64 {
        self.routes.iter().map(|r| r.h_bar).fold(0.0, f64::max)
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Master(#[from] MasterError),
    #[error("fractional master solution with no branching candidate")]
    NoBranch,
}

/// A branching decision, kept for consistency checks.
#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Vehicles(Sense, f64),
    PairOutflow([usize; 2], Sense),
    ArcFlow((usize, usize), Sense),
}

impl Decision {
    fn row(&self, inst: &Instance) -> ExtraRow {
        match self {
            Decision::Vehicles(sense, k) => ExtraRow {
                name: format!("br_veh_{sense}_{k}"),
                expr: RowExpr::Vehicles,
                sense: *sense,
                rhs: *k,
            },
            Decision::PairOutflow(pair, sense) => {
                let mut w = BTreeMap::new();
                for &i in pair {
                    for j in 0..inst.num_nodes() {
                        if !pair.contains(&j) {
                            w.insert((i, j), 1.0);
                        }
                    }
                }
                ExtraRow {
                    name: format!("br_pair_{}_{}", pair[0], pair[1]),
                    expr: RowExpr::Arcs(w),
                    sense: *sense,
                    rhs: if *sense == Sense::Le { 1.0 } else { 2.0 },
                }
            }
            Decision::ArcFlow(a, sense) => ExtraRow {
                name: format!("br_arc_{}_{}", a.0, a.1),
                expr: RowExpr::Arcs(BTreeMap::from([(*a, 1.0)])),
                sense: *sense,
                rhs: if *sense == Sense::Le { 0.0 } else { 1.0 },
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct BranchNode {
    pub decisions: Vec<Decision>,
    /// Bound inherited from the parent until solved.
    pub bound: f64,
    pub depth: usize,
    id: usize,
}

struct Queued(BranchNode);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl Ord for Queued {
    // BinaryHeap pops the greatest: lowest bound, then deepest, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .bound
            .total_cmp(&self.0.bound)
            .then(self.0.depth.cmp(&other.0.depth))
            .then(other.0.id.cmp(&self.0.id))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Outcome of [`branch`].
#[derive(Debug, Clone, PartialEq)]
pub enum Branching {
    Integral,
    Split(Decision, Decision),
}

/// Choose a branching rule for a master solution.
pub fn branch(sol: &MasterSolution, pool: &ColumnPool, inst: &Instance, taken: &[Decision]) -> Branching {
    if sol.is_integral(INT_TOL) {
        return Branching::Integral;
    }
    let v = sol.vehicles();
    if (v - v.round()).abs() > INT_TOL {
        return Branching::Split(Decision::Vehicles(Sense::Le, v.floor()), Decision::Vehicles(Sense::Ge, v.ceil()));
    }
    let flow = ArcFlow::from_solution(pool, &sol.lambda);
    let mut support: BTreeSet<usize> = BTreeSet::new();
    for &(k, x) in &sol.lambda {
        if (x - x.round()).abs() > INT_TOL {
            support.extend(pool.get(k).route.sequence.iter().copied().filter(|&u| u >= 1 && u <= 2 * inst.n));
        }
    }
    let nodes: Vec<usize> = support.into_iter().collect();
    let mut best: Option<([usize; 2], f64)> = None;
    for (a, &u) in nodes.iter().enumerate() {
        for &w in &nodes[a + 1..] {
            let pair = [u, w];
            if taken.iter().any(|d| matches!(d, Decision::PairOutflow(p, _) if *p == pair)) {
                continue;
            }
            let out = flow.outflow(&pair);
            if out > 1.0 + INT_TOL && out < 2.0 - INT_TOL {
                let score = (out - 1.5).abs();
                if best.is_none_or(|(_, s)| score < s - 1e-12) {
                    best = Some((pair, score));
                }
            }
        }
    }
    if let Some((pair, _)) = best {
        return Branching::Split(Decision::PairOutflow(pair, Sense::Le), Decision::PairOutflow(pair, Sense::Ge));
    }
    let mut arc: Option<((usize, usize), f64)> = None;
    for (a, x) in flow.support() {
        if (x - x.round()).abs() > INT_TOL && x < 1.0 {
            let score = (x - 0.5).abs();
            if arc.is_none_or(|(_, s)| score < s - 1e-12) {
                arc = Some((a, score));
            }
        }
    }
    match arc {
        Some((a, _)) => Branching::Split(Decision::ArcFlow(a, Sense::Le), Decision::ArcFlow(a, Sense::Ge)),
        None => Branching::Integral,
    }
}

/// Objective of an integral route set under the solve mode.
pub fn objective_of(routes: &[Route], mode: PriceMode) -> f64 {
    match mode {
        PriceMode::Cost => routes.iter().map(|r| r.cost).sum(),
        PriceMode::Risk => routes.iter().map(|r| r.h_bar).fold(0.0, f64::max),
    }
}

struct Stats {
    nodes: usize,
    t_master: Duration,
    t_pricing: Duration,
}

impl Stats {
    fn absorb(&mut self, cg: &CgOutcome) {
        self.t_master += cg.t_master;
        self.t_pricing += cg.t_pricing;
    }
}

/// Solve one ε-constraint problem to optimality or until the limits hit.
pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    let deadline = opts.time_limit.map(|d| start + d);
    let cfg = MasterConfig {
        mode: opts.mode,
        eps_risk: opts.eps_risk,
        eps_cost: opts.eps_cost,
        risk_rows: Default::default(),
    };
    let cg_opts = CgOptions { heuristic: opts.heuristic_pricing, deadline, ..Default::default() };
    let mut stats = Stats { nodes: 0, t_master: Duration::ZERO, t_pricing: Duration::ZERO };
    let mut pool = ColumnPool::new();
    let infeasible = |stats: &Stats, pool: &ColumnPool, cuts: usize| SolveReport {
        status: SolveStatus::Infeasible,
        routes: Vec::new(),
        objective: None,
        bound: f64::INFINITY,
        gap: 0.0,
        nodes: stats.nodes,
        columns: pool.len(),
        cuts,
        t_master: stats.t_master,
        t_pricing: stats.t_pricing,
        root_bound: None,
        root_bound_no_cuts: None,
        arc_branching: false,
        bound_drops: 0,
        pool: pool.clone(),
    };
    match seed_pool(inst, &mut pool) {
        Ok(()) => {}
        Err(MasterError::Unservable(_)) => return Ok(infeasible(&stats, &pool, 0)),
        Err(e) => return Err(e.into()),
    }

    // root with cut rounds
    let mut cut_rows: Vec<ExtraRow> = Vec::new();
    let mut known: HashSet<(CutKind, Vec<usize>)> = HashSet::new();
    stats.nodes += 1;
    let mut root = match column_generation(inst, &mut pool, &cfg, &cut_rows, &cg_opts) {
        Ok(cg) => cg,
        Err(MasterError::Infeasible) => return Ok(infeasible(&stats, &pool, 0)),
        Err(e) => return Err(e.into()),
    };
    stats.absorb(&root);
    let root_bound_no_cuts = (!root.truncated).then_some(root.solution.objective);
    let mut rounds = 0;
    while opts.cuts.any() && !root.truncated && rounds < opts.max_cut_rounds && !root.solution.is_integral(INT_TOL) {
        let flow = ArcFlow::from_solution(&pool, &root.solution.lambda);
        let cuts: Vec<Cut> = separate(&flow, inst, opts.cuts, &known);
        if cuts.is_empty() {
            break;
        }
        for c in &cuts {
            known.insert(c.key());
            cut_rows.push(c.to_row(inst));
        }
        rounds += 1;
        root = match column_generation(inst, &mut pool, &cfg, &cut_rows, &cg_opts) {
            Ok(cg) => cg,
            Err(MasterError::Infeasible) => return Ok(infeasible(&stats, &pool, cut_rows.len())),
            Err(e) => return Err(e.into()),
        };
        stats.absorb(&root);
    }
    let root_bound = (!root.truncated).then_some(root.solution.objective);

    let mut incumbent: Option<(f64, Vec<Route>)> = None;
    let mut arc_branching = false;
    let mut bound_drops = 0;
    let mut open: BinaryHeap<Queued> = BinaryHeap::new();
    let mut next_id = 1;
    let mut stopped_bound: Option<f64> = None;
    let mut pending: Option<(BranchNode, CgOutcome)> = Some((BranchNode { decisions: Vec::new(), bound: f64::NEG_INFINITY, depth: 0, id: 0 }, root));

    loop {
        let (node, cg) = match pending.take() {
            Some(p) => p,
            None => {
                let Some(Queued(node)) = open.pop() else { break };
                if incumbent.as_ref().is_some_and(|(z, _)| node.bound >= z - PRUNE_TOL) {
                    continue;
                }
                if deadline.is_some_and(|d| Instant::now() >= d) || opts.node_limit.is_some_and(|l| stats.nodes >= l) {
                    stopped_bound = Some(node.bound);
                    open.push(Queued(node));
                    break;
                }
                stats.nodes += 1;
                let mut rows = cut_rows.clone();
                rows.extend(node.decisions.iter().map(|d| d.row(inst)));
                match column_generation(inst, &mut pool, &cfg, &rows, &cg_opts) {
                    Ok(cg) => {
                        stats.absorb(&cg);
                        (node, cg)
                    }
                    Err(MasterError::Infeasible) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
        };
        if cg.truncated {
            stopped_bound = Some(node.bound);
            open.push(Queued(node));
            break;
        }
        if cg.solution.objective < node.bound - PRUNE_TOL {
            bound_drops += 1;
        }
        let bound = cg.solution.objective.max(node.bound);
        if incumbent.as_ref().is_some_and(|(z, _)| bound >= z - PRUNE_TOL) {
            continue;
        }
        match branch(&cg.solution, &pool, inst, &node.decisions) {
            Branching::Integral => {
                let routes: Vec<Route> = cg
                    .solution
                    .lambda
                    .iter()
                    .filter(|&&(_, x)| x > 0.5)
                    .map(|&(k, _)| pool.get(k).route.clone())
                    .collect();
                let mut served: Vec<usize> = routes.iter().flat_map(|r| r.requests(inst)).collect();
                served.sort_unstable();
                if served != (1..=inst.n).collect::<Vec<_>>() || routes.len() > inst.fleet {
                    return Err(SolveError::NoBranch);
                }
                let z = objective_of(&routes, opts.mode);
                if incumbent.as_ref().is_none_or(|(best, _)| z < *best - PRUNE_TOL) {
                    incumbent = Some((z, routes));
                }
            }
            Branching::Split(left, right) => {
                if matches!(left, Decision::ArcFlow(..)) {
                    arc_branching = true;
                }
                for d in [left, right] {
                    let mut decisions = node.decisions.clone();
                    decisions.push(d);
                    open.push(Queued(BranchNode { decisions, bound, depth: node.depth + 1, id: next_id }));
                    next_id += 1;
                }
            }
        }
    }

    let open_bound = open.iter().map(|q| q.0.bound).fold(f64::INFINITY, f64::min);
    let finished = stopped_bound.is_none();
    let (status, objective, routes, bound) = match incumbent {
        Some((z, routes)) => {
            let bound = if finished { z } else { open_bound.min(z) };
            let status = if finished { SolveStatus::Optimal } else { SolveStatus::Feasible };
            (status, Some(z), routes, bound)
        }
        None if finished => (SolveStatus::Infeasible, None, Vec::new(), f64::INFINITY),
        None => (SolveStatus::TimeLimit, None, Vec::new(), open_bound),
    };
    let gap = match objective {
        Some(z) if z.abs() > 1e-12 => ((z - bound) / z).max(0.0),
        _ => 0.0,
    };
    Ok(SolveReport {
        status,
        routes,
        objective,
        bound,
        gap,
        nodes: stats.nodes,
        columns: pool.len(),
        cuts: cut_rows.len(),
        t_master: stats.t_master,
        t_pricing: stats.t_pricing,
        root_bound,
        root_bound_no_cuts,
        arc_branching,
        bound_drops,
        pool,
    })
}
