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


//! Exact ε-constraint Pareto front by alternating cost and risk solves.

use std::io::Write;
use std::time::Duration;

use crate::bcp::{solve, SolveError, SolveOptions, SolveStatus};
use crate::instance::Instance;
use crate::oracle::Route;
use crate::pricing::PriceMode;

/// Default decrement of the exposure cap between points.
pub const DEFAULT_STEP: f64 = 0.01;

pub const CSV_HEADER: &str = "epsilon_risk,cost,max_risk,n_routes,t_master_s,t_pricing_s";

#[derive(Debug, Clone)]
pub struct ParetoOptions {
    pub step: f64,
    /// Limit per cost or risk solve.
    pub time_limit: Option<Duration>,
    /// Cuts, pricing and node limits shared by every solve.
    pub solve: SolveOptions,
}

impl Default for ParetoOptions {
    fn default() -> Self {
        Self { step: DEFAULT_STEP, time_limit: None, solve: SolveOptions::default() }
    }
}

#[derive(Debug, Clone)]
pub struct ParetoPoint {
    /// Exposure cap of the cost solve.
    pub eps_risk: f64,
    pub cost: f64,
    pub max_risk: f64,
    pub routes: Vec<Route>,
    pub t_master: Duration,
    pub t_pricing: Duration,
    /// Both solves proved optimal.
    pub exact: bool,
}

/// Every point found, certified or not.
#[derive(Debug, Clone, Default)]
pub struct ParetoFront {
    pub points: Vec<ParetoPoint>,
}

impl ParetoFront {
    pub fn certified(&self) -> impl Iterator<Item = &ParetoPoint> {
        self.points.iter().filter(|p| p.exact)
    }
}

/// Walk the front from the cost-optimal end towards zero exposure.
///
/// Panics when `step` is not positive.
pub fn pareto_front(inst: &Instance, opts: &ParetoOptions) -> Result<ParetoFront, SolveError> {
    assert!(opts.step > 0.0, "step must be positive");
    let mut front = ParetoFront::default();
    let mut eps = f64::INFINITY;
    let base = SolveOptions { time_limit: opts.time_limit, ..opts.solve.clone() };
    loop {
        let cost_run = solve(inst, &SolveOptions { mode: PriceMode::Cost, eps_risk: eps, eps_cost: f64::INFINITY, ..base.clone() })?;
        let Some(f_cost) = cost_run.objective else { break };
        let eps_cost = f_cost + 1e-7 * (1.0 + f_cost.abs());
        let risk_run = solve(inst, &SolveOptions { mode: PriceMode::Risk, eps_risk: eps, eps_cost, ..base.clone() })?;
        let exact = cost_run.status == SolveStatus::Optimal && risk_run.status == SolveStatus::Optimal;
        let (routes, f_risk) = match risk_run.objective {
            Some(r) => (risk_run.routes.clone(), r),
            None => (cost_run.routes.clone(), cost_run.max_risk()),
        };
        if let Some(prev) = front.points.last() {
            debug_assert!(f_cost >= prev.cost - 1e-6, "cost fell from {} to {f_cost} as the cap tightened", prev.cost);
        }
        front.points.push(ParetoPoint {
            eps_risk: eps,
            cost: f_cost,
            max_risk: f_risk,
            routes,
            t_master: cost_run.t_master + risk_run.t_master,
            t_pricing: cost_run.t_pricing + risk_run.t_pricing,
            exact,
        });
        if f_risk <= 1e-9 {
            break;
        }
        eps = f_risk - opts.step;
        if eps < 0.0 {
            break;
        }
    }
    Ok(front)
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.6}")
    }
}

/// One CSV row per certified point; timings print as zero when disabled.
pub fn write_csv<W: Write>(front: &ParetoFront, timings: bool, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for p in front.certified() {
        let (tm, tp) = if timings { (p.t_master.as_secs_f64(), p.t_pricing.as_secs_f64()) } else { (0.0, 0.0) };
        w.write_record([num(p.eps_risk), num(p.cost), num(p.max_risk), p.routes.len().to_string(), num(tm), num(tp)])?;
    }
    w.flush()
}
