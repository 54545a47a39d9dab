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


//! Pricing: elementary shortest paths with resource constraints whose
//! columns carry min-max exposure schedules.

mod calibrate;
mod dominance;
mod label;
mod labeling;

pub use calibrate::{calibrate_risk, AssocInput, Calibration, CalibrationCase, OpenInput, PiecewiseLinear};
pub use dominance::{dominates, dtw_dominates};
pub use label::{AssocRes, ExtendCtx, Label, OpenRes, Reject, ReqSet, Stage, MAX_REQUESTS};
pub use labeling::{detour_capped, exact_regime, run_labeling, PricingOptions, PricingOutcome, Regime};

use thiserror::Error;

use crate::instance::Instance;
use crate::oracle::{Route, ScheduleError};

/// Columns must price below this to enter the master.
pub const NEG_RC: f64 = -1e-6;

/// Objective of the master whose duals are priced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriceMode {
    /// Travel cost objective.
    Cost,
    /// Min-max exposure objective; travel cost only enters through the cost cap.
    Risk,
}

/// Master duals in pricing form.
#[derive(Debug, Clone, PartialEq)]
pub struct DualValues {
    /// Partitioning duals per request, index `i - 1`.
    pub pi: Vec<f64>,
    /// Fleet-size dual, `<= 0`.
    pub mu: f64,
    /// Exposure-row duals per request, `<= 0`.
    pub rho: Vec<f64>,
    /// Cost-cap dual, `<= 0`.
    pub xi: f64,
    /// Additive reduced-cost terms per arc, row-major over nodes.
    pub arc_delta: Vec<f64>,
    /// Additive reduced-cost term per route.
    pub route_adj: f64,
}

impl DualValues {
    pub fn zero(inst: &Instance) -> Self {
        let nn = inst.num_nodes();
        DualValues {
            pi: vec![0.0; inst.n],
            mu: 0.0,
            rho: vec![0.0; inst.n],
            xi: 0.0,
            arc_delta: vec![0.0; nn * nn],
            route_adj: 0.0,
        }
    }

    pub fn has_weights(&self) -> bool {
        self.rho.iter().any(|&r| r < -1e-12)
    }

    /// Reduced-cost contribution paid once per route.
    pub fn route_constant(&self) -> f64 {
        -self.mu + self.route_adj
    }

    /// Panics when a dual has the wrong sign.
    pub fn check_signs(&self) {
        assert!(self.mu <= 1e-9, "fleet dual must be non-positive, got {}", self.mu);
        assert!(self.xi <= 1e-9, "cost-cap dual must be non-positive, got {}", self.xi);
        for (i, r) in self.rho.iter().enumerate() {
            assert!(*r <= 1e-9, "exposure dual {} must be non-positive, got {r}", i + 1);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    #[error("pricing supports at most {MAX_REQUESTS} requests, got {0}")]
    TooManyRequests(usize),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// A route together with its reduced cost under the priced duals.
#[derive(Debug, Clone, PartialEq)]
pub struct PricedColumn {
    pub route: Route,
    pub reduced_cost: f64,
}

/// Reduced cost of arc `(i, j)`.
///
/// Panics on an arc removed by preprocessing.
pub fn arc_reduced_cost(inst: &Instance, duals: &DualValues, i: usize, j: usize, mode: PriceMode) -> f64 {
    assert!(!inst.arc_removed(i, j), "arc ({i},{j}) was eliminated");
    let t = inst.t(i, j);
    let mut c = match mode {
        PriceMode::Cost => t,
        PriceMode::Risk => -duals.xi * t,
    };
    if inst.is_pickup(i) {
        c -= duals.pi[i - 1];
    }
    c + duals.arc_delta[i * inst.num_nodes() + j]
}

/// Price with an optional heuristic pass followed by exact confirmation.
pub fn solve_pricing(inst: &Instance, duals: &DualValues, opts: &PricingOptions) -> Result<PricingOutcome, PricingError> {
    duals.check_signs();
    if opts.heuristic {
        let quick = run_labeling(inst, duals, opts, Regime::Heuristic)?;
        if !quick.columns.is_empty() {
            return Ok(quick);
        }
    }
    let exact = PricingOptions { heuristic: false, ..opts.clone() };
    run_labeling(inst, duals, &exact, exact_regime(inst, duals, opts.eps_risk))
}
