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


//! Restricted master problems and the column generation loop.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use rdarp_lp::{solve_lp, LinearModel, ModelError, Sense, Status};
use thiserror::Error;

use crate::instance::Instance;
use crate::oracle::{mmr_schedule, validate_route, Route, ScheduleError, CAP_TOL};
use crate::pricing::{solve_pricing, DualValues, PriceMode, PricingError, PricingOptions};

/// Artificial activity above this marks an infeasible master.
pub const ART_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum MasterError {
    #[error("request {0} cannot be served by any route")]
    Unservable(usize),
    #[error("master problem is infeasible")]
    Infeasible,
    #[error("column rejected by the oracle: {0}")]
    InvalidColumn(String),
    #[error("master LP ended with status {0:?}")]
    Lp(Status),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pricing(#[from] PricingError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// A route stored in the pool with its master coefficients.
#[derive(Debug, Clone)]
pub struct Column {
    pub route: Route,
    /// `H_ir / norm_i` per request.
    pub h_norm: Vec<f64>,
}

impl Column {
    pub fn cost(&self) -> f64 {
        self.route.cost
    }

    pub fn h_bar(&self) -> f64 {
        self.route.h_bar
    }
}

/// Columns keyed by node sequence.
#[derive(Debug, Clone, Default)]
pub struct ColumnPool {
    cols: Vec<Column>,
    index: HashMap<Vec<usize>, usize>,
}

impl ColumnPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validate and add a route; `Ok(None)` when the sequence is already pooled.
    pub fn insert(&mut self, inst: &Instance, route: Route) -> Result<Option<usize>, MasterError> {
        if self.index.contains_key(&route.sequence) {
            return Ok(None);
        }
        validate_route(inst, &route).map_err(|v| MasterError::InvalidColumn(format!("{:?}: {v}", route.sequence)))?;
        let h_norm = (1..=inst.n).map(|i| route.h[i - 1] / inst.exposure_norm(i)).collect();
        let k = self.cols.len();
        self.index.insert(route.sequence.clone(), k);
        self.cols.push(Column { route, h_norm });
        Ok(Some(k))
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn get(&self, k: usize) -> &Column {
        &self.cols[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Column> {
        self.cols.iter()
    }

    pub fn position(&self, seq: &[usize]) -> Option<usize> {
        self.index.get(seq).copied()
    }
}

/// Add the round trip of every request.
pub fn seed_pool(inst: &Instance, pool: &mut ColumnPool) -> Result<(), MasterError> {
    for i in 1..=inst.n {
        let seq = [0, i, inst.n + i, inst.end_depot()];
        match mmr_schedule(inst, &seq) {
            Ok((route, _)) => {
                pool.insert(inst, route)?;
            }
            Err(ScheduleError::Infeasible) => return Err(MasterError::Unservable(i)),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

/// How a finite exposure cap enters the cost master.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RiskRows {
    /// Columns above the cap are left out.
    #[default]
    Filter,
    /// Every column enters and one row per request bounds its exposure.
    Explicit,
}

/// Which of the two masters to build and its caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterConfig {
    pub mode: PriceMode,
    /// Cap on normalised exposure. In the risk master it is a known upper
    /// bound on the optimum and only filters columns.
    pub eps_risk: f64,
    /// Cost cap of the risk master.
    pub eps_cost: f64,
    pub risk_rows: RiskRows,
}

impl MasterConfig {
    pub fn cost(eps_risk: f64) -> Self {
        Self { mode: PriceMode::Cost, eps_risk, eps_cost: f64::INFINITY, risk_rows: RiskRows::Filter }
    }

    pub fn risk(eps_cost: f64) -> Self {
        Self { mode: PriceMode::Risk, eps_risk: f64::INFINITY, eps_cost, risk_rows: RiskRows::Filter }
    }

    fn explicit_rows(&self) -> bool {
        self.mode == PriceMode::Cost && self.risk_rows == RiskRows::Explicit && self.eps_risk.is_finite()
    }

    /// Cap applied to the columns themselves.
    pub fn column_cap(&self) -> f64 {
        if self.explicit_rows() {
            f64::INFINITY
        } else {
            self.eps_risk
        }
    }
}

/// Left-hand side of a cut or branching row.
#[derive(Debug, Clone, PartialEq)]
pub enum RowExpr {
    /// Number of routes.
    Vehicles,
    /// Weighted arc traversals.
    Arcs(BTreeMap<(usize, usize), f64>),
}

/// A row added to the master on top of the model rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtraRow {
    pub name: String,
    pub expr: RowExpr,
    pub sense: Sense,
    pub rhs: f64,
}

impl ExtraRow {
    pub fn coefficient(&self, route: &Route) -> f64 {
        match &self.expr {
            RowExpr::Vehicles => 1.0,
            RowExpr::Arcs(w) => route.arcs().filter_map(|a| w.get(&a)).sum(),
        }
    }
}

/// A built master LP and the meaning of its rows and columns.
#[derive(Debug, Clone)]
pub struct Rlmp {
    pub model: LinearModel,
    /// Pool index per route variable.
    pub columns: Vec<(usize, usize)>,
    pub artificials: Vec<usize>,
    pub h_bar_var: Option<usize>,
    pub fleet_row: usize,
    /// One per request when present.
    pub risk_rows: Option<usize>,
    pub cost_row: Option<usize>,
    pub extra_start: usize,
}

/// Objective weight of an artificial variable.
pub fn big_m(inst: &Instance) -> f64 {
    10.0 * inst.nodes.iter().map(|v| v.late).sum::<f64>()
}

/// Build `P_cost(ε^risk)` or `P_risk(ε^cost)` over the pool.
pub fn build_rlmp(pool: &ColumnPool, inst: &Instance, cfg: &MasterConfig, extra: &[ExtraRow]) -> Rlmp {
    let n = inst.n;
    let big = big_m(inst);
    let mut model = LinearModel::new();
    let cap = cfg.column_cap();
    let mut columns = Vec::new();
    for (k, col) in pool.iter().enumerate() {
        if col.h_bar() > cap + CAP_TOL {
            continue;
        }
        let obj = if cfg.mode == PriceMode::Cost { col.cost() } else { 0.0 };
        let v = model.add_var(format!("lambda_{k}"), 0.0, f64::INFINITY, obj);
        columns.push((k, v));
    }
    let h_bar_var = (cfg.mode == PriceMode::Risk).then(|| model.add_var("h_bar", 0.0, f64::INFINITY, 1.0));
    let artificials: Vec<usize> = (1..=n).map(|i| model.add_var(format!("art_{i}"), 0.0, f64::INFINITY, big)).collect();

    for i in 1..=n {
        let mut row: Vec<(usize, f64)> = columns
            .iter()
            .filter(|&&(k, _)| pool.get(k).route.covers(inst, i))
            .map(|&(_, v)| (v, 1.0))
            .collect();
        row.push((artificials[i - 1], 1.0));
        model.add_con(format!("cover_{i}"), row, Sense::Eq, 1.0);
    }
    let fleet_row = model.add_con(
        "fleet",
        columns.iter().map(|&(_, v)| (v, 1.0)).collect(),
        Sense::Le,
        inst.fleet as f64,
    );
    let mut risk_rows = None;
    if cfg.mode == PriceMode::Risk || cfg.explicit_rows() {
        for i in 1..=n {
            let mut row: Vec<(usize, f64)> = columns
                .iter()
                .map(|&(k, v)| (v, pool.get(k).h_norm[i - 1]))
                .filter(|&(_, a)| a != 0.0)
                .collect();
            let rhs = match h_bar_var {
                Some(hv) => {
                    row.push((hv, -1.0));
                    0.0
                }
                None => cfg.eps_risk,
            };
            let r = model.add_con(format!("risk_{i}"), row, Sense::Le, rhs);
            risk_rows.get_or_insert(r);
        }
    }
    let mut cost_row = None;
    if cfg.mode == PriceMode::Risk && cfg.eps_cost.is_finite() {
        let row = columns.iter().map(|&(k, v)| (v, pool.get(k).cost())).collect();
        cost_row = Some(model.add_con("cost_cap", row, Sense::Le, cfg.eps_cost));
    }
    let extra_start = model.num_cons();
    let mut artificials = artificials;
    for (e, x) in extra.iter().enumerate() {
        let mut row: Vec<(usize, f64)> = columns
            .iter()
            .map(|&(k, v)| (v, x.coefficient(&pool.get(k).route)))
            .filter(|&(_, a)| a != 0.0)
            .collect();
        if x.sense != Sense::Le {
            let a = model.add_var(format!("art_row_{e}"), 0.0, f64::INFINITY, big);
            artificials.push(a);
            row.push((a, 1.0));
        }
        model.add_con(x.name.clone(), row, x.sense, x.rhs);
    }
    Rlmp { model, columns, artificials, h_bar_var, fleet_row, risk_rows, cost_row, extra_start }
}

/// One row per request bounding `Σ_r (H_ir / dw_i) λ_r` by `bound`.
///
/// `columns` maps pool indices to model variables.
pub fn add_edarp_constraints(model: &mut LinearModel, pool: &ColumnPool, columns: &[(usize, usize)], inst: &Instance, bound: f64) -> Vec<usize> {
    (1..=inst.n)
        .map(|i| {
            let dw = inst.exposure_norm(i);
            let row = columns
                .iter()
                .map(|&(k, v)| (v, pool.get(k).route.h[i - 1] / dw))
                .filter(|&(_, a)| a != 0.0)
                .collect();
            model.add_con(format!("detour_{i}"), row, Sense::Le, bound)
        })
        .collect()
}

/// LP solution of a master in pool terms.
#[derive(Debug, Clone)]
pub struct MasterSolution {
    pub objective: f64,
    /// Positive route values as (pool index, λ).
    pub lambda: Vec<(usize, f64)>,
    /// Value of the `H̄` variable in the risk master.
    pub h_bar: Option<f64>,
    pub duals: DualValues,
    /// Duals of the extra rows in order.
    pub extra_duals: Vec<f64>,
    /// Total artificial activity.
    pub artificial: f64,
}

impl MasterSolution {
    pub fn is_integral(&self, tol: f64) -> bool {
        self.artificial <= ART_TOL && self.lambda.iter().all(|&(_, v)| (v - v.round()).abs() <= tol)
    }

    pub fn vehicles(&self) -> f64 {
        self.lambda.iter().map(|&(_, v)| v).sum()
    }
}

fn non_positive(x: f64) -> f64 {
    x.min(0.0)
}

/// Solve a built master and translate its duals.
pub fn solve_rlmp(rlmp: &Rlmp, inst: &Instance, extra: &[ExtraRow]) -> Result<MasterSolution, MasterError> {
    let sol = solve_lp(&rlmp.model)?;
    if sol.status != Status::Optimal {
        return Err(MasterError::Lp(sol.status));
    }
    let n = inst.n;
    let nn = inst.num_nodes();
    let mut duals = DualValues::zero(inst);
    duals.pi = sol.duals[..n].to_vec();
    duals.mu = non_positive(sol.duals[rlmp.fleet_row]);
    if let Some(r0) = rlmp.risk_rows {
        for i in 0..n {
            duals.rho[i] = non_positive(sol.duals[r0 + i]);
        }
    }
    if let Some(c) = rlmp.cost_row {
        duals.xi = non_positive(sol.duals[c]);
    }
    let extra_duals: Vec<f64> = (0..extra.len()).map(|e| sol.duals[rlmp.extra_start + e]).collect();
    for (x, &y) in extra.iter().zip(&extra_duals) {
        match &x.expr {
            RowExpr::Vehicles => duals.route_adj -= y,
            RowExpr::Arcs(w) => {
                for (&(i, j), &a) in w {
                    duals.arc_delta[i * nn + j] -= y * a;
                }
            }
        }
    }
    let lambda = rlmp
        .columns
        .iter()
        .map(|&(k, v)| (k, sol.x[v]))
        .filter(|&(_, x)| x > 1e-9)
        .collect();
    Ok(MasterSolution {
        objective: sol.objective,
        lambda,
        h_bar: rlmp.h_bar_var.map(|v| sol.x[v]),
        duals,
        extra_duals,
        artificial: rlmp.artificials.iter().map(|&a| sol.x[a]).sum(),
    })
}

#[derive(Debug, Clone)]
pub struct CgOptions {
    pub heuristic: bool,
    /// Columns added per pricing call at most.
    pub pricing_limit: usize,
    pub deadline: Option<Instant>,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self { heuristic: true, pricing_limit: 200, deadline: None }
    }
}

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub solution: MasterSolution,
    /// True when the deadline stopped the loop before exact convergence.
    pub truncated: bool,
    pub iterations: usize,
    pub columns_added: usize,
    pub t_master: Duration,
    pub t_pricing: Duration,
}

/// Alternate master solves and pricing until no negative column remains.
///
/// Returns [`MasterError::Infeasible`] when artificials stay positive after
/// exact convergence.
pub fn column_generation(
    inst: &Instance,
    pool: &mut ColumnPool,
    cfg: &MasterConfig,
    extra: &[ExtraRow],
    opts: &CgOptions,
) -> Result<CgOutcome, MasterError> {
    let mut t_master = Duration::ZERO;
    let mut t_pricing = Duration::ZERO;
    let mut iterations = 0;
    let mut columns_added = 0;
    let price_opts = PricingOptions {
        mode: cfg.mode,
        heuristic: opts.heuristic,
        limit: opts.pricing_limit,
        eps_risk: cfg.column_cap(),
        deadline: opts.deadline,
        ..Default::default()
    };
    loop {
        iterations += 1;
        let t0 = Instant::now();
        let rlmp = build_rlmp(pool, inst, cfg, extra);
        let solution = solve_rlmp(&rlmp, inst, extra)?;
        t_master += t0.elapsed();

        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(CgOutcome { solution, truncated: true, iterations, columns_added, t_master, t_pricing });
        }
        let t1 = Instant::now();
        let mut added = 0;
        let mut out = solve_pricing(inst, &solution.duals, &price_opts)?;
        let mut complete = out.complete || price_opts.heuristic;
        for c in std::mem::take(&mut out.columns) {
            if pool.insert(inst, c.route)?.is_some() {
                added += 1;
            }
        }
        if added == 0 && price_opts.heuristic {
            let exact = PricingOptions { heuristic: false, ..price_opts.clone() };
            let out = solve_pricing(inst, &solution.duals, &exact)?;
            complete = out.complete;
            for c in out.columns {
                if pool.insert(inst, c.route)?.is_some() {
                    added += 1;
                }
            }
        }
        t_pricing += t1.elapsed();
        columns_added += added;
        if added == 0 && !complete {
            return Ok(CgOutcome { solution, truncated: true, iterations, columns_added, t_master, t_pricing });
        }
        if added == 0 {
            if solution.artificial > ART_TOL {
                return Err(MasterError::Infeasible);
            }
            return Ok(CgOutcome { solution, truncated: false, iterations, columns_added, t_master, t_pricing });
        }
    }
}
