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


//! Ground truth: route validation, fixed-sequence schedule LPs and an
//! exhaustive solver for tiny instances.

use std::collections::BTreeMap;
use std::fmt;

use rdarp_lp::{solve_lp, LinearModel, Sense, Status};
use thiserror::Error;

use crate::instance::{Instance, Mode};

/// Tolerance for schedule quantities (times, exposures, caps).
pub const SCHED_TOL: f64 = 1e-6;
/// Slack granted when comparing a route's min-max exposure against a cap.
pub const CAP_TOL: f64 = 1e-7;

/// A vehicle trip with a concrete schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    /// Node ids from `0` to `2n+1`.
    pub sequence: Vec<usize>,
    /// Start of service per position of `sequence`.
    pub schedule: Vec<f64>,
    pub cost: f64,
    /// Exposure per request, index `i - 1`; zero when not covered.
    pub h: Vec<f64>,
    /// Cumulative risk at the destination depot.
    pub q_end: f64,
    /// `max_i h_i / norm_i` over covered requests.
    pub h_bar: f64,
}

impl Route {
    pub fn covers(&self, inst: &Instance, request: usize) -> bool {
        self.sequence.contains(&request) && request >= 1 && request <= inst.n
    }

    pub fn requests(&self, inst: &Instance) -> Vec<usize> {
        self.sequence.iter().copied().filter(|&v| inst.is_pickup(v)).collect()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sequence.windows(2).map(|w| (w[0], w[1]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExposureBreakdown {
    /// Onboard risk sum after service, per position.
    pub r: Vec<f64>,
    /// Cumulative risk after service, per position (departure convention).
    pub q: Vec<f64>,
    /// Exposure per request, index `i - 1`.
    pub h: Vec<f64>,
    pub h_bar: f64,
    pub q_end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Offending node id.
    pub node: usize,
    pub what: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: {} ({} vs {})", self.node, self.what, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("route violates {} constraint(s): {}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct RouteViolations(pub Vec<Violation>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("sequence is malformed: {0}")]
    BadSequence(String),
    #[error("no feasible schedule for the sequence")]
    Infeasible,
    #[error("schedule LP failed numerically")]
    Numerical,
}

/// Positions of pick-up and drop-off per request (index `i - 1`).
fn positions(inst: &Instance, seq: &[usize]) -> Vec<Option<(usize, usize)>> {
    let mut pick = vec![None; inst.n];
    let mut out = vec![None; inst.n];
    for (k, &v) in seq.iter().enumerate() {
        if inst.is_pickup(v) {
            pick[v - 1] = Some(k);
        } else if inst.is_drop(v) {
            if let Some(p) = pick[v - inst.n - 1] {
                out[v - inst.n - 1] = Some((p, k));
            }
        }
    }
    out
}

/// Structural checks: depots, node ids, single visits, pairing and precedence.
pub fn check_structure(inst: &Instance, seq: &[usize]) -> Result<(), String> {
    let end = inst.end_depot();
    if seq.len() < 2 || seq[0] != 0 || *seq.last().unwrap() != end {
        return Err(format!("sequence must start at 0 and end at {end}"));
    }
    let mut seen = vec![false; inst.num_nodes()];
    for &v in &seq[1..seq.len() - 1] {
        if v == 0 || v >= end {
            return Err(format!("node {v} is not a request node"));
        }
        if seen[v] {
            return Err(format!("node {v} visited twice"));
        }
        seen[v] = true;
        if inst.is_drop(v) && !seen[v - inst.n] {
            return Err(format!("drop-off {v} precedes its pick-up"));
        }
    }
    for i in 1..=inst.n {
        if seen[i] != seen[inst.n + i] {
            return Err(format!("request {i} is not paired"));
        }
    }
    Ok(())
}

/// Exposure of every request in `seq` under `sched`, summed pairwise.
pub fn pairwise_exposure(inst: &Instance, seq: &[usize], sched: &[f64]) -> Vec<f64> {
    let pos = positions(inst, seq);
    let mut h = vec![0.0; inst.n];
    for i in 0..inst.n {
        let Some((pi, di)) = pos[i] else { continue };
        for j in 0..inst.n {
            if i == j {
                continue;
            }
            let Some((pj, dj)) = pos[j] else { continue };
            let start = pi.max(pj);
            let stop = di.min(dj);
            if start < stop {
                h[i] += inst.risk_of(j + 1) * (sched[stop] - sched[start]);
            }
        }
        if inst.mode == Mode::Edarp {
            h[i] += sched[di] - sched[pi];
        }
    }
    h
}

/// Check every route constraint and compute the exposure breakdown.
pub fn validate_route(inst: &Instance, route: &Route) -> Result<ExposureBreakdown, RouteViolations> {
    let seq = &route.sequence;
    let a = &route.schedule;
    let mut bad = Vec::new();
    if let Err(msg) = check_structure(inst, seq) {
        bad.push(Violation {
            node: seq.first().copied().unwrap_or(0),
            what: msg,
            lhs: 0.0,
            rhs: 0.0,
        });
        return Err(RouteViolations(bad));
    }
    if a.len() != seq.len() {
        bad.push(Violation {
            node: 0,
            what: "schedule length differs from sequence length".into(),
            lhs: a.len() as f64,
            rhs: seq.len() as f64,
        });
        return Err(RouteViolations(bad));
    }
    let tol = SCHED_TOL;
    let mut load = 0i32;
    let mut cost = 0.0;
    for (k, &v) in seq.iter().enumerate() {
        let node = &inst.nodes[v];
        if a[k] < node.early - tol {
            bad.push(Violation { node: v, what: "start before window opens".into(), lhs: a[k], rhs: node.early });
        }
        if a[k] > node.late + tol {
            bad.push(Violation { node: v, what: "start after window closes".into(), lhs: a[k], rhs: node.late });
        }
        if k > 0 {
            let u = seq[k - 1];
            let need = a[k - 1] + inst.nodes[u].service + inst.t(u, v);
            cost += inst.t(u, v);
            if a[k] < need - tol {
                bad.push(Violation { node: v, what: "start earlier than arrival".into(), lhs: a[k], rhs: need });
            }
        }
        load += node.load;
        if load > inst.capacity {
            bad.push(Violation { node: v, what: "load exceeds capacity".into(), lhs: f64::from(load), rhs: f64::from(inst.capacity) });
        }
        if load < 0 {
            bad.push(Violation { node: v, what: "negative load".into(), lhs: f64::from(load), rhs: 0.0 });
        }
    }
    for (i, p) in positions(inst, seq).iter().enumerate() {
        let Some((pi, di)) = *p else { continue };
        let req = i + 1;
        let ride = a[di] - a[pi] - inst.nodes[req].service;
        let direct = inst.t(req, inst.n + req);
        if ride > inst.max_ride_of(req) + tol {
            bad.push(Violation { node: inst.n + req, what: "ride time exceeds maximum".into(), lhs: ride, rhs: inst.max_ride_of(req) });
        }
        if ride < direct - tol {
            bad.push(Violation { node: inst.n + req, what: "ride time below direct travel".into(), lhs: ride, rhs: direct });
        }
    }
    if (cost - route.cost).abs() > tol * (1.0 + cost.abs()) {
        bad.push(Violation { node: inst.end_depot(), what: "stated cost differs from arc sum".into(), lhs: route.cost, rhs: cost });
    }

    let r = onboard_risk(inst, seq);
    let mut q = vec![0.0; seq.len()];
    for k in 1..seq.len() {
        q[k] = q[k - 1] + r[k - 1] * (a[k] - a[k - 1]);
    }
    let q_end = *q.last().unwrap();
    if q_end > inst.q_max + tol * (1.0 + inst.q_max.abs().min(1e12)) {
        bad.push(Violation { node: inst.end_depot(), what: "cumulative risk exceeds cap".into(), lhs: q_end, rhs: inst.q_max });
    }
    // Exposure from cumulative risk minus self exposure.
    let pos = positions(inst, seq);
    let mut h = vec![0.0; inst.n];
    let mut h_bar: f64 = 0.0;
    for (i, p) in pos.iter().enumerate() {
        let Some((pi, di)) = *p else { continue };
        let self_risk = inst.risk_of(i + 1);
        h[i] = q[di] - q[pi] - (a[di] - a[pi]) * self_risk;
        h_bar = h_bar.max(h[i] / inst.exposure_norm(i + 1));
    }
    let pair = pairwise_exposure(inst, seq, a);
    for i in 0..inst.n {
        if (pair[i] - h[i]).abs() > 1e-6 * (1.0 + h[i].abs()) {
            bad.push(Violation { node: i + 1, what: "exposure identity mismatch".into(), lhs: h[i], rhs: pair[i] });
        }
        if (route.h[i] - h[i]).abs() > tol * (1.0 + h[i].abs()) {
            bad.push(Violation { node: i + 1, what: "stated exposure differs from schedule".into(), lhs: route.h[i], rhs: h[i] });
        }
    }
    if bad.is_empty() {
        Ok(ExposureBreakdown { r, q, h, h_bar, q_end })
    } else {
        Err(RouteViolations(bad))
    }
}

/// Earliest start times along `seq` ignoring ride times; `None` on a window miss.
pub fn earliest_schedule(inst: &Instance, seq: &[usize], start: f64) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(seq.len());
    let mut t = start.max(inst.nodes[seq[0]].early);
    for (k, &v) in seq.iter().enumerate() {
        if k > 0 {
            let u = seq[k - 1];
            t = (t + inst.nodes[u].service + inst.t(u, v)).max(inst.nodes[v].early);
        }
        if t > inst.nodes[v].late + 1e-9 {
            return None;
        }
        out.push(t);
    }
    Some(out)
}

/// Objective of a segment schedule LP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentGoal {
    /// Minimise the largest normalised exposure.
    MinMax,
    /// Minimise the start of service at the last node.
    MinFinish,
    /// Minimise the cumulative risk accrued on the segment.
    MinQ,
    /// Minimise the sum of normalised exposures with the maximum capped.
    MinSum,
}

/// A node list whose requests are all picked and dropped inside it.
#[derive(Debug, Clone)]
pub struct Segment<'a> {
    pub nodes: &'a [usize],
    /// Lower bound on the first start of service.
    pub start_min: f64,
    /// Cap on normalised exposure.
    pub cap: f64,
    /// Cap on cumulative risk accrued on the segment.
    pub q_cap: f64,
}

#[derive(Debug, Clone)]
pub struct SegmentSchedule {
    pub times: Vec<f64>,
    pub objective: f64,
}

/// Solve one schedule LP over a fixed node order.
pub fn solve_segment(inst: &Instance, seg: &Segment<'_>, goal: SegmentGoal) -> Result<SegmentSchedule, ScheduleError> {
    let seq = seg.nodes;
    let m = seq.len();
    if m == 0 {
        return Err(ScheduleError::BadSequence("empty segment".into()));
    }
    let first = earliest_schedule(inst, seq, seg.start_min).ok_or(ScheduleError::Infeasible)?;
    let mut lp = LinearModel::new();
    for (k, &v) in seq.iter().enumerate() {
        let lb = if k == 0 { inst.nodes[v].early.max(seg.start_min) } else { first[k] };
        let ub = inst.nodes[v].late;
        if lb > ub + 1e-9 {
            return Err(ScheduleError::Infeasible);
        }
        lp.add_var(format!("A{k}"), lb, ub.max(lb), 0.0);
    }
    for k in 1..m {
        let (u, v) = (seq[k - 1], seq[k]);
        lp.add_con(
            format!("prec{k}"),
            vec![(k, 1.0), (k - 1, -1.0)],
            Sense::Ge,
            inst.nodes[u].service + inst.t(u, v),
        );
    }
    let pos = positions(inst, seq);
    for (i, p) in pos.iter().enumerate() {
        let Some((pi, di)) = *p else { continue };
        let req = i + 1;
        lp.add_con(
            format!("ride{req}"),
            vec![(di, 1.0), (pi, -1.0)],
            Sense::Le,
            inst.nodes[req].service + inst.max_ride_of(req),
        );
    }
    // exposure expressions as sparse rows over positions
    let mut exprs: Vec<(usize, BTreeMap<usize, f64>)> = Vec::new();
    for (i, p) in pos.iter().enumerate() {
        let Some((pi, di)) = *p else { continue };
        let mut e: BTreeMap<usize, f64> = BTreeMap::new();
        let norm = inst.exposure_norm(i + 1);
        for (j, q) in pos.iter().enumerate() {
            let Some((pj, dj)) = *q else { continue };
            if i == j {
                continue;
            }
            let start = pi.max(pj);
            let stop = di.min(dj);
            let r = inst.risk_of(j + 1);
            if start < stop && r != 0.0 {
                *e.entry(stop).or_default() += r / norm;
                *e.entry(start).or_default() -= r / norm;
            }
        }
        if inst.mode == Mode::Edarp {
            *e.entry(di).or_default() += 1.0 / norm;
            *e.entry(pi).or_default() -= 1.0 / norm;
        }
        e.retain(|_, c| *c != 0.0);
        exprs.push((i, e));
    }
    let r = onboard_risk(inst, seq);
    let mut q_row: BTreeMap<usize, f64> = BTreeMap::new();
    for k in 1..m {
        if r[k - 1] != 0.0 {
            *q_row.entry(k).or_default() += r[k - 1];
            *q_row.entry(k - 1).or_default() -= r[k - 1];
        }
    }
    q_row.retain(|_, c| *c != 0.0);
    if seg.q_cap.is_finite() && !q_row.is_empty() {
        lp.add_con("qcap", q_row.iter().map(|(&k, &c)| (k, c)).collect(), Sense::Le, seg.q_cap);
    }
    let needs_hbar = goal == SegmentGoal::MinMax || goal == SegmentGoal::MinSum || seg.cap.is_finite();
    let hbar = if needs_hbar {
        let obj = if goal == SegmentGoal::MinMax { 1.0 } else { 0.0 };
        let ub = if seg.cap.is_finite() { seg.cap } else { f64::INFINITY };
        Some(lp.add_var("Hbar", 0.0, ub, obj))
    } else {
        None
    };
    if let Some(hv) = hbar {
        for (i, e) in &exprs {
            if e.is_empty() {
                continue;
            }
            let mut row: Vec<(usize, f64)> = e.iter().map(|(&k, &c)| (k, c)).collect();
            row.push((hv, -1.0));
            lp.add_con(format!("H{}", i + 1), row, Sense::Le, 0.0);
        }
    }
    match goal {
        SegmentGoal::MinMax => {}
        SegmentGoal::MinFinish => lp.vars[m - 1].obj = 1.0,
        SegmentGoal::MinQ => {
            for (&k, &c) in &q_row {
                lp.vars[k].obj += c;
            }
        }
        SegmentGoal::MinSum => {
            for (_, e) in &exprs {
                for (&k, &c) in e {
                    lp.vars[k].obj += c;
                }
            }
        }
    }
    let sol = solve_lp(&lp).map_err(|_| ScheduleError::Numerical)?;
    match sol.status {
        Status::Optimal => {}
        Status::Infeasible => return Err(ScheduleError::Infeasible),
        _ => return Err(ScheduleError::Numerical),
    }
    let mut times: Vec<f64> = sol.x[..m].to_vec();
    for (k, &v) in seq.iter().enumerate() {
        times[k] = times[k].max(inst.nodes[v].early).min(inst.nodes[v].late);
    }
    let objective = match goal {
        SegmentGoal::MinMax => sol.x[hbar.unwrap()],
        _ => sol.objective,
    };
    Ok(SegmentSchedule { times, objective })
}

/// Onboard risk after each position, including the virtual rider in EDARP.
fn onboard_risk(inst: &Instance, seq: &[usize]) -> Vec<f64> {
    let mut acc = if inst.mode == Mode::Edarp { 1.0 } else { 0.0 };
    seq.iter()
        .map(|&v| {
            if v != 0 && v != inst.end_depot() {
                acc += inst.nodes[v].risk;
            } else if v == inst.end_depot() {
                acc = 0.0;
            }
            acc
        })
        .collect()
}

/// Min-max exposure schedule for a fixed full route.
///
/// Stage one minimises the largest normalised exposure under the window,
/// ride-time and cumulative-risk constraints. Stage two keeps that maximum
/// and minimises the sum of normalised exposures.
pub fn mmr_schedule(inst: &Instance, seq: &[usize]) -> Result<(Route, f64), ScheduleError> {
    check_structure(inst, seq).map_err(ScheduleError::BadSequence)?;
    let mut load = 0;
    for &v in seq {
        load += inst.nodes[v].load;
        if load > inst.capacity {
            return Err(ScheduleError::Infeasible);
        }
    }
    let seg = Segment { nodes: seq, start_min: f64::NEG_INFINITY, cap: f64::INFINITY, q_cap: inst.q_max };
    let stage1 = solve_segment(inst, &seg, SegmentGoal::MinMax)?;
    let star = stage1.objective.max(0.0);
    let capped = Segment { cap: star + 1e-9 * (1.0 + star), ..seg.clone() };
    let times = match solve_segment(inst, &capped, SegmentGoal::MinSum) {
        Ok(s) => s.times,
        Err(_) => stage1.times,
    };
    let route = route_from_schedule(inst, seq, times);
    let h_bar = route.h_bar;
    Ok((route, h_bar))
}

/// Assemble a [`Route`] with exposures evaluated from the schedule.
pub fn route_from_schedule(inst: &Instance, seq: &[usize], times: Vec<f64>) -> Route {
    let h = pairwise_exposure(inst, seq, &times);
    let r = onboard_risk(inst, seq);
    let mut q_end = 0.0;
    for k in 1..seq.len() {
        q_end += r[k - 1] * (times[k] - times[k - 1]);
    }
    let cost = seq.windows(2).map(|w| inst.t(w[0], w[1])).sum();
    let h_bar = (1..=inst.n)
        .filter(|&i| seq.contains(&i))
        .map(|i| h[i - 1] / inst.exposure_norm(i))
        .fold(0.0, f64::max);
    Route { sequence: seq.to_vec(), schedule: times, cost, h, q_end, h_bar }
}

// ---------------------------------------------------------------------------
// Exhaustive solver

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Cost,
    Risk,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BruteForceError {
    #[error("exhaustive search is limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("no feasible solution")]
    Infeasible,
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

#[derive(Debug, Clone)]
pub struct BruteSolution {
    pub routes: Vec<Route>,
    pub objective: f64,
    pub cost: f64,
    pub h_bar: f64,
}

/// All feasible routes of a tiny instance, grouped by covered request set.
#[derive(Debug, Clone)]
pub struct BruteForce {
    pub n: usize,
    pub fleet: usize,
    /// Per request mask, the (cost, h_bar)-Pareto routes sorted by h_bar.
    pub by_mask: Vec<Vec<Route>>,
    pub routes_evaluated: usize,
}

pub const BRUTE_FORCE_MAX_N: usize = 5;

impl BruteForce {
    pub fn new(inst: &Instance) -> Result<Self, BruteForceError> {
        if inst.n > BRUTE_FORCE_MAX_N {
            return Err(BruteForceError::TooLarge { n: inst.n, max: BRUTE_FORCE_MAX_N });
        }
        let n = inst.n;
        let mut by_mask: Vec<Vec<Route>> = vec![Vec::new(); 1 << n];
        let mut evaluated = 0;
        let mut seq = vec![0usize];
        enumerate(inst, &mut seq, 0, 0, 0, &mut |seq: &[usize], mask: usize| {
            let mut full = seq.to_vec();
            full.push(inst.end_depot());
            if earliest_schedule(inst, &full, f64::NEG_INFINITY).is_none() {
                return Ok(());
            }
            evaluated += 1;
            match mmr_schedule(inst, &full) {
                Ok((route, _)) => {
                    by_mask[mask].push(route);
                    Ok(())
                }
                Err(ScheduleError::Infeasible) => Ok(()),
                Err(e) => Err(e),
            }
        })?;
        for list in by_mask.iter_mut() {
            list.sort_by(|a, b| a.h_bar.total_cmp(&b.h_bar).then(a.cost.total_cmp(&b.cost)));
            let mut kept: Vec<Route> = Vec::new();
            for r in list.drain(..) {
                if kept.last().map_or(true, |k| r.cost < k.cost - 1e-9) {
                    kept.push(r);
                }
            }
            *list = kept;
        }
        Ok(BruteForce { n, fleet: inst.fleet, by_mask, routes_evaluated: evaluated })
    }

    /// Cheapest route per mask with `h_bar <= cap`.
    fn cheapest(&self, cap: f64) -> Vec<Option<&Route>> {
        self.by_mask
            .iter()
            .map(|list| {
                list.iter()
                    .filter(|r| r.h_bar <= cap + CAP_TOL)
                    .min_by(|a, b| a.cost.total_cmp(&b.cost))
            })
            .collect()
    }

    /// Min-cost partition into at most `fleet` routes under a cap.
    pub fn min_cost(&self, cap: f64) -> Option<BruteSolution> {
        let best = self.cheapest(cap);
        let full = (1usize << self.n) - 1;
        let k_max = self.fleet.min(self.n);
        // dp[k][mask]
        let mut dp = vec![vec![f64::INFINITY; 1 << self.n]; k_max + 1];
        let mut choice = vec![vec![0usize; 1 << self.n]; k_max + 1];
        dp[0][0] = 0.0;
        for k in 1..=k_max {
            for mask in 1..=full {
                let low = mask & mask.wrapping_neg();
                let mut sub = mask;
                while sub > 0 {
                    if sub & low != 0 {
                        if let Some(r) = best[sub] {
                            let rest = dp[k - 1][mask ^ sub];
                            if rest + r.cost < dp[k][mask] - 1e-12 {
                                dp[k][mask] = rest + r.cost;
                                choice[k][mask] = sub;
                            }
                        }
                    }
                    sub = (sub - 1) & mask;
                }
            }
        }
        let (k, cost) = (1..=k_max)
            .map(|k| (k, dp[k][full]))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))?;
        if !cost.is_finite() {
            return None;
        }
        let mut routes = Vec::new();
        let (mut kk, mut mask) = (k, full);
        while mask != 0 {
            let sub = choice[kk][mask];
            routes.push(best[sub].unwrap().clone());
            mask ^= sub;
            kk -= 1;
        }
        let h_bar = routes.iter().map(|r| r.h_bar).fold(0.0, f64::max);
        Some(BruteSolution { routes, objective: cost, cost, h_bar })
    }

    /// Distinct route `h_bar` values in increasing order.
    pub fn thresholds(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.by_mask.iter().flatten().map(|r| r.h_bar).collect();
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
        v
    }

    /// Smallest threshold whose min-cost partition costs at most `eps_cost`.
    pub fn min_risk(&self, eps_cost: f64) -> Option<BruteSolution> {
        for tau in self.thresholds() {
            if let Some(sol) = self.min_cost(tau) {
                if sol.cost <= eps_cost + 1e-9 * (1.0 + eps_cost.abs().min(1e12)) {
                    return Some(BruteSolution { objective: sol.h_bar, ..sol });
                }
            }
        }
        None
    }

    /// Exact (cost, h_bar) front, sorted by increasing cost.
    pub fn front(&self) -> Vec<(f64, f64)> {
        let mut points: Vec<(f64, f64)> = Vec::new();
        for tau in self.thresholds().into_iter().rev() {
            if let Some(sol) = self.min_cost(tau) {
                match points.last_mut() {
                    Some(last) if (last.0 - sol.cost).abs() <= 1e-9 => last.1 = sol.h_bar,
                    _ => points.push((sol.cost, sol.h_bar)),
                }
            }
        }
        points
    }

    pub fn solve(&self, eps_risk: f64, objective: Objective, eps_cost: f64) -> Result<BruteSolution, BruteForceError> {
        match objective {
            Objective::Cost => self.min_cost(eps_risk),
            Objective::Risk => {
                let sol = self.min_risk(eps_cost).ok_or(BruteForceError::Infeasible)?;
                if sol.h_bar > eps_risk + CAP_TOL {
                    None
                } else {
                    Some(sol)
                }
            }
        }
        .ok_or(BruteForceError::Infeasible)
    }
}

/// Convenience wrapper over [`BruteForce`].
pub fn brute_force_solve(
    inst: &Instance,
    eps_risk: f64,
    objective: Objective,
    eps_cost: f64,
) -> Result<BruteSolution, BruteForceError> {
    BruteForce::new(inst)?.solve(eps_risk, objective, eps_cost)
}

/// Depth-first enumeration of precedence- and capacity-feasible partial sequences.
fn enumerate<F>(
    inst: &Instance,
    seq: &mut Vec<usize>,
    mask: usize,
    open: usize,
    load: i32,
    emit: &mut F,
) -> Result<(), ScheduleError>
where
    F: FnMut(&[usize], usize) -> Result<(), ScheduleError>,
{
    let n = inst.n;
    if open == 0 && mask != 0 {
        emit(seq, mask)?;
    }
    for v in 1..=2 * n {
        let (next_mask, next_open, next_load) = if v <= n {
            let bit = 1 << (v - 1);
            if mask & bit != 0 || load + inst.nodes[v].load > inst.capacity {
                continue;
            }
            (mask | bit, open | bit, load + inst.nodes[v].load)
        } else {
            let bit = 1 << (v - n - 1);
            if open & bit == 0 {
                continue;
            }
            (mask, open & !bit, load + inst.nodes[v].load)
        };
        seq.push(v);
        if earliest_schedule(inst, seq, f64::NEG_INFINITY).is_some() {
            enumerate(inst, seq, next_mask, next_open, next_load, emit)?;
        }
        seq.pop();
    }
    Ok(())
}
