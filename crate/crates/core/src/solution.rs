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


//! Solution files.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bcp::SolveReport;
use crate::instance::Instance;
use crate::oracle::{route_from_schedule, validate_route};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteOut {
    pub sequence: Vec<usize>,
    pub schedule: Vec<f64>,
    pub cost: f64,
    /// Exposure per covered request, keyed by request id.
    #[serde(rename = "H")]
    pub h: BTreeMap<String, f64>,
    #[serde(rename = "Q")]
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes: usize,
    pub columns: usize,
    pub cuts: usize,
    pub t_master_s: f64,
    pub t_pricing_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub status: String,
    pub objective: Option<f64>,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    pub routes: Vec<RouteOut>,
    pub stats: Stats,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl SolutionFile {
    pub fn from_report(inst: &Instance, report: &SolveReport, timings: bool) -> Self {
        let routes = report
            .routes
            .iter()
            .map(|r| RouteOut {
                sequence: r.sequence.clone(),
                schedule: r.schedule.clone(),
                cost: r.cost,
                h: r.requests(inst).into_iter().map(|i| (i.to_string(), r.h[i - 1])).collect(),
                q: r.q_end,
            })
            .collect();
        let secs = |d: std::time::Duration| if timings { d.as_secs_f64() } else { 0.0 };
        SolutionFile {
            status: report.status.as_str().into(),
            objective: report.objective,
            bound: finite(report.bound),
            gap: report.objective.map(|_| report.gap),
            routes,
            stats: Stats {
                nodes: report.nodes,
                columns: report.columns,
                cuts: report.cuts,
                t_master_s: secs(report.t_master),
                t_pricing_s: secs(report.t_pricing),
            },
        }
    }
}

/// Every violated constraint of a stored solution, one line each.
pub fn check_solution(inst: &Instance, sol: &SolutionFile) -> Vec<String> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, r) in sol.routes.iter().enumerate() {
        if r.sequence.len() != r.schedule.len() {
            out.push(format!("route {k}: sequence has {} nodes but schedule has {}", r.sequence.len(), r.schedule.len()));
            continue;
        }
        if r.sequence.iter().any(|&v| v >= inst.num_nodes()) {
            out.push(format!("route {k}: node id out of range"));
            continue;
        }
        let route = route_from_schedule(inst, &r.sequence, r.schedule.clone());
        if let Err(v) = validate_route(inst, &route) {
            for x in v.0 {
                out.push(format!("route {k}: {x}"));
            }
        }
        for i in route.requests(inst) {
            if !seen.insert(i) {
                out.push(format!("request {i} is served more than once"));
            }
        }
    }
    for i in 1..=inst.n {
        if !seen.contains(&i) {
            out.push(format!("request {i} is not served"));
        }
    }
    if sol.routes.len() > inst.fleet {
        out.push(format!("{} routes exceed the fleet of {}", sol.routes.len(), inst.fleet));
    }
    out
}
