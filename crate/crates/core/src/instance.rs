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


//! Problem data, file formats and preprocessing.
//!
//! Node ids: `0` origin depot, `1..=n` pick-ups, `n+1..=2n` drop-offs,
//! `2n+1` destination depot.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "RDARP")]
    Rdarp,
    #[serde(rename = "EDARP")]
    Edarp,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Rdarp => write!(f, "RDARP"),
            Mode::Edarp => write!(f, "EDARP"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub service: f64,
    pub load: i32,
    pub risk: f64,
    pub early: f64,
    pub late: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub n: usize,
    pub fleet: usize,
    pub capacity: i32,
    pub q_max: f64,
    pub mode: Mode,
    pub nodes: Vec<Node>,
    /// Whether `x`/`y` are meaningful (Cordeau input) or placeholders.
    pub has_coords: bool,
    /// Row-major `(2n+2)²` travel times.
    pub travel: Vec<f64>,
    /// Per request, index `i - 1`.
    pub max_ride: Vec<f64>,
    /// Per request detour weight `max(15, t_{i,n+i})`; empty outside EDARP.
    pub detour_weight: Vec<f64>,
    /// Row-major arc mask filled by [`preprocess`].
    pub removed: Vec<bool>,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("instance has no requests")]
    NoRequests,
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("request {request} is infeasible: {reason}")]
    InfeasibleRequest { request: usize, reason: String },
    #[error("invalid JSON instance: {0}")]
    Json(#[from] serde_json::Error),
    #[error("risk component {value} is not one of the allowed levels for {factor}")]
    RiskLevel { factor: &'static str, value: f64 },
}

impl Instance {
    pub fn num_nodes(&self) -> usize {
        2 * self.n + 2
    }

    pub fn end_depot(&self) -> usize {
        2 * self.n + 1
    }

    #[inline]
    pub fn t(&self, i: usize, j: usize) -> f64 {
        self.travel[i * self.num_nodes() + j]
    }

    #[inline]
    pub fn is_pickup(&self, v: usize) -> bool {
        v >= 1 && v <= self.n
    }

    #[inline]
    pub fn is_drop(&self, v: usize) -> bool {
        v > self.n && v <= 2 * self.n
    }

    /// Request (1-based) served at `v`, if any.
    pub fn request_of(&self, v: usize) -> Option<usize> {
        if self.is_pickup(v) {
            Some(v)
        } else if self.is_drop(v) {
            Some(v - self.n)
        } else {
            None
        }
    }

    pub fn max_ride_of(&self, request: usize) -> f64 {
        self.max_ride[request - 1]
    }

    pub fn risk_of(&self, request: usize) -> f64 {
        self.nodes[request].risk
    }

    /// `b_{2n+1} - a_0`.
    pub fn horizon(&self) -> f64 {
        self.nodes[self.end_depot()].late - self.nodes[0].early
    }

    pub fn arc_removed(&self, i: usize, j: usize) -> bool {
        !self.removed.is_empty() && self.removed[i * self.num_nodes() + j]
    }

    /// Divisor applied to exposures before the min-max: 1 in RDARP, `dw_i` in EDARP.
    pub fn exposure_norm(&self, request: usize) -> f64 {
        match self.mode {
            Mode::Rdarp => 1.0,
            Mode::Edarp => self.detour_weight[request - 1],
        }
    }

    /// Whether the cumulative risk cap can ever bind.
    pub fn q_relevant(&self) -> bool {
        if self.mode == Mode::Edarp || !self.q_max.is_finite() {
            return false;
        }
        let worst: f64 = (1..=self.n)
            .map(|i| self.risk_of(i) * (self.nodes[i].service + self.max_ride_of(i)))
            .sum();
        worst > self.q_max + 1e-9
    }

    pub fn removed_arc_count(&self) -> usize {
        self.removed.iter().filter(|&&r| r).count()
    }

    /// Structural checks shared by all constructors.
    pub fn validate(&self) -> Result<(), InstanceError> {
        let v = |m: String| Err(InstanceError::Validation(m));
        if self.n == 0 {
            return Err(InstanceError::NoRequests);
        }
        let nn = self.num_nodes();
        if self.nodes.len() != nn {
            return v(format!("expected {nn} nodes, found {}", self.nodes.len()));
        }
        if self.travel.len() != nn * nn {
            return v(format!("travel matrix has {} entries, expected {}", self.travel.len(), nn * nn));
        }
        if self.travel.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return v("travel times must be finite and non-negative".into());
        }
        if self.max_ride.len() != self.n {
            return v(format!("expected {} max ride times, found {}", self.n, self.max_ride.len()));
        }
        if self.fleet == 0 {
            return v("fleet size must be positive".into());
        }
        for (k, node) in self.nodes.iter().enumerate() {
            if node.id != k {
                return v(format!("node at position {k} has id {}", node.id));
            }
            if !(node.early <= node.late) {
                return v(format!("node {k}: window [{}, {}] is empty", node.early, node.late));
            }
            if node.service < 0.0 {
                return v(format!("node {k}: negative service time"));
            }
        }
        for d in [0, self.end_depot()] {
            if self.nodes[d].service != 0.0 || self.nodes[d].load != 0 {
                return v(format!("depot {d} must have zero service and load"));
            }
        }
        for i in 1..=self.n {
            let (p, d) = (&self.nodes[i], &self.nodes[self.n + i]);
            if p.load != -d.load {
                return v(format!("request {i}: loads {} and {} do not cancel", p.load, d.load));
            }
            if (p.risk + d.risk).abs() > 1e-12 {
                return v(format!("request {i}: risks {} and {} do not cancel", p.risk, d.risk));
            }
            if p.risk < 0.0 {
                return v(format!("request {i}: negative risk {}", p.risk));
            }
            if p.load <= 0 || p.load > self.capacity {
                return v(format!("request {i}: load {} outside (0, {}]", p.load, self.capacity));
            }
            let direct = self.t(i, self.n + i);
            if direct > self.max_ride_of(i) + 1e-9 {
                return v(format!(
                    "request {i}: direct time {direct} exceeds max ride {}",
                    self.max_ride_of(i)
                ));
            }
        }
        if self.mode == Mode::Edarp && self.detour_weight.len() != self.n {
            return v("EDARP instance without detour weights".into());
        }
        Ok(())
    }
}

fn euclid(a: &Node, b: &Node) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

fn euclidean_matrix(nodes: &[Node]) -> Vec<f64> {
    let nn = nodes.len();
    let mut t = vec![0.0; nn * nn];
    for i in 0..nn {
        for j in 0..nn {
            if i != j {
                t[i * nn + j] = euclid(&nodes[i], &nodes[j]);
            }
        }
    }
    t
}

/// `(b_{2n+1} - a_0) * mean pick-up risk`.
pub fn compute_qmax(inst: &Instance) -> Result<f64, InstanceError> {
    if inst.n == 0 {
        return Err(InstanceError::NoRequests);
    }
    let sum: f64 = (1..=inst.n).map(|i| inst.risk_of(i)).sum();
    Ok(inst.horizon() * sum / inst.n as f64)
}

/// Parse the Cordeau text format.
///
/// Header `K m T Q L`; `m` may count requests or nodes, the request count is
/// inferred from the number of node lines. A missing destination depot line
/// copies the origin.
pub fn parse_cordeau(text: &str, name: &str) -> Result<Instance, InstanceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(InstanceError::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let nums = |line: usize, s: &str| -> Result<Vec<f64>, InstanceError> {
        s.split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| InstanceError::Parse {
                    line,
                    msg: format!("not a number: {tok:?}"),
                })
            })
            .collect()
    };
    let h = nums(hline, header)?;
    if h.len() < 5 {
        return Err(InstanceError::Parse {
            line: hline,
            msg: format!("header needs 5 fields (K n T Q L), found {}", h.len()),
        });
    }
    let (fleet, route_dur, cap, ride) = (h[0], h[2], h[3], h[4]);
    let mut rows = Vec::new();
    for (line, l) in lines {
        let v = nums(line, l)?;
        if v.len() < 7 {
            return Err(InstanceError::Parse {
                line,
                msg: format!("node line needs 7 fields (id x y s w a b), found {}", v.len()),
            });
        }
        rows.push((line, v));
    }
    let count = rows.len();
    if count < 2 {
        return Err(InstanceError::NoRequests);
    }
    let n = if count % 2 == 0 { (count - 2) / 2 } else { (count - 1) / 2 };
    if n == 0 {
        return Err(InstanceError::NoRequests);
    }
    let m = h[1] as usize;
    if m != n && m != 2 * n {
        return Err(InstanceError::Parse {
            line: hline,
            msg: format!("header announces {m} but {count} node lines were found"),
        });
    }
    let mut nodes: Vec<Node> = rows
        .iter()
        .enumerate()
        .map(|(k, (_, v))| Node {
            id: k,
            x: v[1],
            y: v[2],
            service: v[3],
            load: v[4] as i32,
            risk: 0.0,
            early: v[5],
            late: v[6],
        })
        .collect();
    for (k, (line, v)) in rows.iter().enumerate() {
        if v[0] as usize != k && !(k == 2 * n + 1 && v[0] == 0.0) {
            return Err(InstanceError::Parse {
                line: *line,
                msg: format!("expected node id {k}, found {}", v[0]),
            });
        }
        if v[4].fract() != 0.0 {
            return Err(InstanceError::Parse {
                line: *line,
                msg: format!("load {} is not an integer", v[4]),
            });
        }
    }
    if count % 2 == 1 {
        let mut end = nodes[0].clone();
        end.id = 2 * n + 1;
        nodes.push(end);
    }
    nodes[2 * n + 1].id = 2 * n + 1;
    let a0 = nodes[0].early;
    for d in [0, 2 * n + 1] {
        nodes[d].late = nodes[d].late.min(a0 + route_dur);
    }
    let travel = euclidean_matrix(&nodes);
    let mut inst = Instance {
        name: name.to_string(),
        n,
        fleet: fleet as usize,
        capacity: cap as i32,
        q_max: 0.0,
        mode: Mode::Rdarp,
        nodes,
        has_coords: true,
        travel,
        max_ride: vec![ride; n],
        detour_weight: Vec::new(),
        removed: Vec::new(),
    };
    inst.validate()?;
    inst.q_max = compute_qmax(&inst)?;
    Ok(inst)
}

/// `r_i := w_i` on pick-ups, `r_{n+i} := -w_i`, then recompute `q_max`.
pub fn derive_benchmark_risk(inst: &Instance) -> Instance {
    let mut out = inst.clone();
    for i in 1..=out.n {
        let w = f64::from(out.nodes[i].load);
        out.nodes[i].risk = w;
        out.nodes[out.n + i].risk = -w;
    }
    if out.mode == Mode::Rdarp {
        out.q_max = compute_qmax(&out).unwrap_or(0.0);
    }
    out
}

/// Switch to the detour-rate variant: real riders carry no risk, a virtual
/// rider of risk 1 is implied by the mode, and `dw_i = max(15, t_{i,n+i})`.
pub fn edarp_transform(inst: &Instance) -> Instance {
    let mut out = inst.clone();
    out.mode = Mode::Edarp;
    for v in 0..out.num_nodes() {
        out.nodes[v].risk = 0.0;
    }
    out.detour_weight = (1..=out.n).map(|i| out.t(i, out.n + i).max(15.0)).collect();
    out.q_max = f64::INFINITY;
    out
}

// ---------------------------------------------------------------------------
// Real-world JSON

#[derive(Debug, Serialize, Deserialize)]
struct JsonNode {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<f64>,
    service: f64,
    load: i32,
    risk: f64,
    early: f64,
    late: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    n: usize,
    #[serde(rename = "K")]
    fleet: usize,
    capacity: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q_max: Option<f64>,
    mode: Mode,
    nodes: Vec<JsonNode>,
    travel_time: Vec<f64>,
    max_ride: Vec<f64>,
}

pub fn parse_realworld(text: &str) -> Result<Instance, InstanceError> {
    let doc: JsonInstance = serde_json::from_str(text)?;
    let nn = 2 * doc.n + 2;
    if doc.n == 0 {
        return Err(InstanceError::NoRequests);
    }
    if doc.nodes.len() != nn {
        return Err(InstanceError::Validation(format!(
            "n = {} needs {nn} nodes, found {}",
            doc.n,
            doc.nodes.len()
        )));
    }
    if doc.travel_time.len() != nn * nn {
        return Err(InstanceError::Validation(format!(
            "travel_time needs {} entries, found {}",
            nn * nn,
            doc.travel_time.len()
        )));
    }
    let has_coords = doc.nodes.iter().all(|v| v.x.is_some() && v.y.is_some());
    let nodes: Vec<Node> = doc
        .nodes
        .iter()
        .map(|v| Node {
            id: v.id,
            x: v.x.unwrap_or(0.0),
            y: v.y.unwrap_or(0.0),
            service: v.service,
            load: v.load,
            risk: v.risk,
            early: v.early,
            late: v.late,
        })
        .collect();
    let mut inst = Instance {
        name: doc.name.unwrap_or_default(),
        n: doc.n,
        fleet: doc.fleet,
        capacity: doc.capacity,
        q_max: 0.0,
        mode: Mode::Rdarp,
        nodes,
        has_coords,
        travel: doc.travel_time,
        max_ride: doc.max_ride,
        detour_weight: Vec::new(),
        removed: Vec::new(),
    };
    inst.validate()?;
    match doc.mode {
        Mode::Rdarp => {
            inst.q_max = match doc.q_max {
                Some(q) => q,
                None => compute_qmax(&inst)?,
            };
        }
        Mode::Edarp => {
            if (1..=inst.n).any(|i| inst.risk_of(i) != 0.0) {
                return Err(InstanceError::Validation("EDARP riders must have zero risk".into()));
            }
            inst = edarp_transform(&inst);
        }
    }
    Ok(inst)
}

pub fn emit_realworld(inst: &Instance) -> String {
    let doc = JsonInstance {
        name: if inst.name.is_empty() { None } else { Some(inst.name.clone()) },
        n: inst.n,
        fleet: inst.fleet,
        capacity: inst.capacity,
        q_max: if inst.mode == Mode::Rdarp { Some(inst.q_max) } else { None },
        mode: inst.mode,
        nodes: inst
            .nodes
            .iter()
            .map(|v| JsonNode {
                id: v.id,
                x: inst.has_coords.then_some(v.x),
                y: inst.has_coords.then_some(v.y),
                service: v.service,
                load: v.load,
                risk: v.risk,
                early: v.early,
                late: v.late,
            })
            .collect(),
        travel_time: inst.travel.clone(),
        max_ride: inst.max_ride.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("instance serialises");
    s.push('\n');
    s
}

/// Cordeau text for instances with coordinates; windows are written as stored.
pub fn emit_cordeau(inst: &Instance) -> Result<String, InstanceError> {
    if !inst.has_coords {
        return Err(InstanceError::Validation(
            "instance has an explicit matrix and no coordinates".into(),
        ));
    }
    let ride = inst.max_ride.first().copied().unwrap_or(0.0);
    if inst.max_ride.iter().any(|&l| l != ride) {
        return Err(InstanceError::Validation(
            "Cordeau format needs a uniform max ride time".into(),
        ));
    }
    let mut out = format!(
        "{} {} {} {} {}\n",
        inst.fleet,
        2 * inst.n,
        inst.horizon(),
        inst.capacity,
        ride
    );
    for v in &inst.nodes {
        out.push_str(&format!(
            "{} {} {} {} {} {} {}\n",
            v.id, v.x, v.y, v.service, v.load, v.early, v.late
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Risk scoring

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Personal,
    Education,
    Employment,
    Workshop,
    Recreation,
    Shopping,
    Dialysis,
    Medical,
    Nutrition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgeGroup {
    From18To44,
    From44To65,
    Over65,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum County {
    Walker,
    Jefferson,
    Shelby,
}

/// Risk score components in tenths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskProfile {
    Rider {
        purpose: Purpose,
        age: AgeGroup,
        county: County,
    },
    /// Riders who do not contribute exposure.
    Exempt,
}

impl Purpose {
    fn tenths(self) -> u32 {
        match self {
            Purpose::Personal => 1,
            Purpose::Education
            | Purpose::Employment
            | Purpose::Workshop
            | Purpose::Recreation
            | Purpose::Shopping => 2,
            Purpose::Dialysis | Purpose::Medical | Purpose::Nutrition => 3,
        }
    }
}

impl AgeGroup {
    fn tenths(self) -> u32 {
        match self {
            AgeGroup::From18To44 => 1,
            AgeGroup::From44To65 => 2,
            AgeGroup::Over65 => 3,
        }
    }
}

impl County {
    fn tenths(self) -> u32 {
        match self {
            County::Walker => 2,
            County::Jefferson | County::Shelby => 3,
        }
    }
}

pub fn assess_risk_score(profile: RiskProfile) -> f64 {
    match profile {
        RiskProfile::Exempt => 0.0,
        RiskProfile::Rider { purpose, age, county } => {
            f64::from(purpose.tenths() + age.tenths() + county.tenths()) / 10.0
        }
    }
}

/// Score from raw component values, rejecting values outside the level tables.
pub fn assess_risk_components(purpose: f64, age: f64, county: f64) -> Result<f64, InstanceError> {
    fn level(factor: &'static str, value: f64, allowed: &[u32]) -> Result<u32, InstanceError> {
        let tenths = (value * 10.0).round();
        if (value * 10.0 - tenths).abs() < 1e-9 && allowed.contains(&(tenths as u32)) && tenths >= 0.0 {
            Ok(tenths as u32)
        } else {
            Err(InstanceError::RiskLevel { factor, value })
        }
    }
    let total = level("travel purpose", purpose, &[1, 2, 3])?
        + level("age group", age, &[1, 2, 3])?
        + level("county", county, &[2, 3])?;
    Ok(f64::from(total) / 10.0)
}

// ---------------------------------------------------------------------------
// Preprocessing

/// All-pairs shortest `t_uv + s_v` style distances used by the pairing rule.
fn shortest_paths(inst: &Instance) -> Vec<f64> {
    let nn = inst.num_nodes();
    let mut d: Vec<f64> = (0..nn * nn)
        .map(|k| {
            let (i, j) = (k / nn, k % nn);
            if i == j {
                0.0
            } else {
                inst.nodes[i].service + inst.t(i, j)
            }
        })
        .collect();
    for k in 0..nn {
        for i in 0..nn {
            let dik = d[i * nn + k];
            for j in 0..nn {
                let via = dik + d[k * nn + j];
                if via < d[i * nn + j] {
                    d[i * nn + j] = via;
                }
            }
        }
    }
    d
}

/// Tighten windows to a fixed point and compute the removed-arc mask.
pub fn preprocess(inst: &Instance) -> Result<Instance, InstanceError> {
    inst.validate()?;
    let mut out = inst.clone();
    let n = out.n;
    let end = out.end_depot();
    let eps = 1e-9;
    loop {
        let mut changed = false;
        let mut set = |v: &mut f64, new: f64, lower: bool| {
            if (lower && new > *v + eps) || (!lower && new < *v - eps) {
                *v = new;
                changed = true;
            }
        };
        for i in 1..=n {
            let s = out.nodes[i].service;
            let tt = out.t(i, n + i);
            let l = out.max_ride_of(i);
            let (ai, bi) = (out.nodes[i].early, out.nodes[i].late);
            let (ad, bd) = (out.nodes[n + i].early, out.nodes[n + i].late);
            let a0 = out.nodes[0].early;
            let bend = out.nodes[end].late;
            let sd = out.nodes[n + i].service;
            let t0i = out.t(0, i);
            let tdend = out.t(n + i, end);
            set(&mut out.nodes[n + i].early, ai + s + tt, true);
            set(&mut out.nodes[i].late, bd - s - tt, false);
            set(&mut out.nodes[i].early, ad - s - l, true);
            set(&mut out.nodes[n + i].late, bi + s + l, false);
            set(&mut out.nodes[i].early, a0 + t0i, true);
            set(&mut out.nodes[n + i].late, bend - sd - tdend, false);
        }
        for i in 1..=n {
            for v in [i, n + i] {
                if out.nodes[v].early > out.nodes[v].late + eps {
                    return Err(InstanceError::InfeasibleRequest {
                        request: i,
                        reason: format!(
                            "window of node {v} empties to [{}, {}]",
                            out.nodes[v].early, out.nodes[v].late
                        ),
                    });
                }
            }
        }
        if !changed {
            break;
        }
    }
    out.removed = removed_arcs(&out);
    Ok(out)
}

/// Removed-arc mask under the time, structure and pairing rules.
pub fn removed_arcs(inst: &Instance) -> Vec<bool> {
    let n = inst.n;
    let nn = inst.num_nodes();
    let end = inst.end_depot();
    let sp = shortest_paths(inst);
    let mut removed = vec![false; nn * nn];
    for i in 0..nn {
        for j in 0..nn {
            let r = &mut removed[i * nn + j];
            if i == j || j == 0 || i == end {
                *r = true;
                continue;
            }
            if i == 0 && j == end {
                // empty route, never a column
                *r = true;
                continue;
            }
            if inst.nodes[i].early + inst.nodes[i].service + inst.t(i, j) > inst.nodes[j].late + 1e-9 {
                *r = true;
                continue;
            }
            if inst.is_drop(i) && j == i - n {
                *r = true;
                continue;
            }
            if i == 0 && inst.is_drop(j) {
                *r = true;
                continue;
            }
            if inst.is_pickup(i) && j == end {
                *r = true;
                continue;
            }
            if inst.is_pickup(i) && inst.is_pickup(j) {
                if inst.nodes[i].load + inst.nodes[j].load > inst.capacity {
                    *r = true;
                    continue;
                }
            }
            // pairing: i ... j ... n+i with j a different node
            if inst.is_pickup(i) && j != n + i {
                let l = inst.max_ride_of(i);
                let via = inst.t(i, j) + sp[j * nn + n + i];
                if via > l + 1e-9 {
                    *r = true;
                    continue;
                }
            }
            if inst.is_drop(j) && i != j - n && i != 0 {
                let p = j - n;
                let sp_p = inst.nodes[p].service;
                let via = sp[p * nn + i] - sp_p + inst.nodes[i].service + inst.t(i, j);
                if via > inst.max_ride_of(p) + 1e-9 {
                    *r = true;
                    continue;
                }
            }
        }
    }
    removed
}
