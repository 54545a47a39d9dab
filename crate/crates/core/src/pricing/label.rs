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


//! Labels and resource extension functions.

use std::fmt;

use crate::instance::{Instance, Mode};

use super::calibrate::{calibrate_risk, AssocInput, Calibration, OpenInput};

/// Largest request count a [`ReqSet`] can hold.
pub const MAX_REQUESTS: usize = 256;

/// Fixed-size bitset over request ids `1..=MAX_REQUESTS`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReqSet([u64; 4]);

impl ReqSet {
    #[inline]
    pub fn insert(&mut self, req: usize) {
        let k = req - 1;
        self.0[k / 64] |= 1 << (k % 64);
    }

    #[inline]
    pub fn remove(&mut self, req: usize) {
        let k = req - 1;
        self.0[k / 64] &= !(1 << (k % 64));
    }

    #[inline]
    pub fn contains(&self, req: usize) -> bool {
        let k = req - 1;
        self.0[k / 64] & (1 << (k % 64)) != 0
    }

    #[inline]
    pub fn is_subset(&self, other: &ReqSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_REQUESTS).filter(|&k| self.0[k / 64] & (1 << (k % 64)) != 0).map(|k| k + 1)
    }
}

/// Resources of a request that is aboard.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenRes {
    pub req: usize,
    /// Path position of the pick-up.
    pub pos: usize,
    pub h: f64,
    pub d: f64,
    /// Breakpoint `B^o`.
    pub bo: f64,
    /// `D^o(A)`.
    pub d_a: f64,
    /// `D^o(B^o)`.
    pub d_bo: f64,
}

/// Resources of a delivered request that shared the ride with someone still aboard.
#[derive(Debug, Clone, PartialEq)]
pub struct AssocRes {
    pub req: usize,
    pub pick_pos: usize,
    pub drop_pos: usize,
    pub h: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub node: usize,
    /// Position of `node` on the path (the origin depot is 0).
    pub pos: usize,
    /// Arena index of the predecessor label.
    pub parent: Option<usize>,
    /// Reduced cost including the calibrated exposure terms.
    pub c_tilde: f64,
    /// Reduced cost from arc terms and route constants only.
    pub arc_rc: f64,
    pub a: f64,
    pub b: f64,
    pub load: i32,
    /// Requests picked up so far.
    pub picked: ReqSet,
    /// Requests delivered so far.
    pub served: ReqSet,
    pub open_set: ReqSet,
    pub assoc_set: ReqSet,
    /// Open requests in pick-up order.
    pub open: Vec<OpenRes>,
    pub assoc: Vec<AssocRes>,
    pub r_sum: f64,
    pub q: f64,
    /// Waiting time absorbed or left on the incoming arc.
    pub wait: f64,
    /// Onboard duration on the incoming arc per request that was aboard.
    pub onboard: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Pdptw,
    Darp,
    Rdarp,
}

/// Why an extension was refused.
#[derive(Debug, Clone, PartialEq)]
pub struct Reject {
    pub stage: Stage,
    pub reason: &'static str,
    pub value: f64,
    pub limit: f64,
}

impl fmt::Display for Reject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {} ({} > {})", self.stage, self.reason, self.value, self.limit)
    }
}

/// Data shared by all extensions of one pricing run.
#[derive(Debug, Clone)]
pub struct ExtendCtx<'a> {
    pub inst: &'a Instance,
    /// Per request `-ρ_i / norm_i`, index `i - 1`.
    pub weights: &'a [f64],
    /// Reject on the calibrated cumulative risk.
    pub check_q: bool,
}

impl ExtendCtx<'_> {
    fn base_risk(&self) -> f64 {
        if self.inst.mode == Mode::Edarp {
            1.0
        } else {
            0.0
        }
    }
}

const EPS: f64 = 1e-9;

impl Label {
    pub fn root(ctx: &ExtendCtx<'_>, c0: f64) -> Label {
        let depot = &ctx.inst.nodes[0];
        Label {
            node: 0,
            pos: 0,
            parent: None,
            c_tilde: c0,
            arc_rc: c0,
            a: depot.early,
            b: depot.late,
            load: 0,
            picked: ReqSet::default(),
            served: ReqSet::default(),
            open_set: ReqSet::default(),
            assoc_set: ReqSet::default(),
            open: Vec::new(),
            assoc: Vec::new(),
            r_sum: ctx.base_risk(),
            q: 0.0,
            wait: 0.0,
            onboard: Vec::new(),
        }
    }

    pub fn open_res(&self, req: usize) -> Option<&OpenRes> {
        self.open.iter().find(|o| o.req == req)
    }

    /// Buffer of an open or associated request.
    pub fn buffer(&self, req: usize) -> Option<f64> {
        self.open
            .iter()
            .find(|o| o.req == req)
            .map(|o| o.d)
            .or_else(|| self.assoc.iter().find(|a| a.req == req).map(|a| a.d))
    }

    /// Exposure of an open or associated request.
    pub fn exposure(&self, req: usize) -> Option<f64> {
        self.open
            .iter()
            .find(|o| o.req == req)
            .map(|o| o.h)
            .or_else(|| self.assoc.iter().find(|a| a.req == req).map(|a| a.h))
    }

    /// Extend along `(self.node, j)` whose reduced cost is `arc_rc`.
    pub fn extend(&self, ctx: &ExtendCtx<'_>, j: usize, arc_rc: f64) -> Result<Label, Reject> {
        self.extend_with(ctx, j, arc_rc).map(|(l, _)| l)
    }

    /// Like [`Label::extend`] but also returns the calibration.
    pub fn extend_with(&self, ctx: &ExtendCtx<'_>, j: usize, arc_rc: f64) -> Result<(Label, Option<Calibration>), Reject> {
        let inst = ctx.inst;
        let n = inst.n;
        let end = inst.end_depot();
        let eta = self.node;
        let reject = |stage, reason, value, limit| Err(Reject { stage, reason, value, limit });

        // PDPTW
        if j == 0 || j == eta || eta == end {
            return reject(Stage::Pdptw, "structural arc", j as f64, eta as f64);
        }
        if j == end && (!self.open_set.is_empty() || self.picked.is_empty()) {
            return reject(Stage::Pdptw, "route end with open requests", self.open_set.len() as f64, 0.0);
        }
        if inst.is_pickup(j) && self.picked.contains(j) {
            return reject(Stage::Pdptw, "request already picked up", j as f64, 0.0);
        }
        if inst.is_drop(j) && !self.open_set.contains(j - n) {
            return reject(Stage::Pdptw, "precedence", j as f64, 0.0);
        }
        let node = &inst.nodes[j];
        let travel = inst.nodes[eta].service + inst.t(eta, j);
        let arrive = self.a + travel;
        let a = arrive.max(node.early);
        if a > node.late + EPS {
            return reject(Stage::Pdptw, "time window", a, node.late);
        }
        let load = self.load + node.load;
        if load > inst.capacity {
            return reject(Stage::Pdptw, "capacity", f64::from(load), f64::from(inst.capacity));
        }

        // DARP: dynamic time windows
        let b = if inst.is_drop(j) {
            let o = self.open_res(j - n).unwrap();
            node.late.min(o.d_bo)
        } else {
            node.late
        };
        if a > b + EPS {
            return reject(Stage::Darp, "latest start", a, b);
        }
        let mut open: Vec<OpenRes> = Vec::with_capacity(self.open.len() + 1);
        for o in &self.open {
            let bo = a.max((o.bo + travel).min(b));
            let d_a = o.d_a + (a - travel - self.a).min((o.bo - self.a).max(0.0));
            let d_bo = o.d_bo - (o.bo + travel - b).max(0.0);
            if a > d_a + EPS {
                return reject(Stage::Darp, "ride time", a, d_a);
            }
            if j != n + o.req {
                let reach = a + node.service + inst.t(j, n + o.req);
                if reach > d_a + EPS {
                    return reject(Stage::Darp, "ride time lookahead", reach, d_a);
                }
            }
            open.push(OpenRes { bo, d_a, d_bo, ..o.clone() });
        }

        // RDARP: calibration
        let base = ctx.base_risk();
        let wait = a - arrive;
        let buffer_cap = self.b - self.a;
        let open_in: Vec<OpenInput> = self
            .open
            .iter()
            .map(|o| OpenInput {
                risk: inst.risk_of(o.req),
                h: o.h,
                avail: o.d.min(buffer_cap),
                norm: inst.exposure_norm(o.req),
            })
            .collect();
        let assoc_in: Vec<AssocInput> = self
            .assoc
            .iter()
            .map(|x| {
                let mut co_riders = Vec::new();
                let mut slopes = Vec::new();
                for (k, o) in self.open.iter().enumerate() {
                    if o.pos > x.pick_pos && o.pos < x.drop_pos {
                        let mut aboard = base;
                        for p in &self.open {
                            if p.pos < o.pos {
                                aboard += inst.risk_of(p.req);
                            }
                        }
                        for y in &self.assoc {
                            if y.req != x.req && y.pick_pos < o.pos && o.pos < y.drop_pos {
                                aboard += inst.risk_of(y.req);
                            }
                        }
                        co_riders.push(k);
                        slopes.push(aboard);
                    }
                }
                AssocInput {
                    risk: inst.risk_of(x.req),
                    h: x.h,
                    d: x.d,
                    norm: inst.exposure_norm(x.req),
                    co_riders,
                    slopes,
                }
            })
            .collect();
        let cal = if self.open.is_empty() {
            None
        } else {
            Some(calibrate_risk(travel, wait, base, &open_in, &assoc_in))
        };

        let mut c_tilde = self.c_tilde + arc_rc;
        let mut q = self.q;
        let mut onboard = Vec::new();
        let mut assoc: Vec<AssocRes> = Vec::with_capacity(self.assoc.len() + 1);
        if let Some(cal) = &cal {
            for (k, o) in self.open.iter().enumerate() {
                let mut dh = base * cal.onboard[k];
                for (i, p) in self.open.iter().enumerate() {
                    if i != k {
                        dh += inst.risk_of(p.req) * cal.onboard[k.max(i)];
                    }
                }
                open[k].h = o.h + dh;
                open[k].d = (o.d - cal.delay[k]).max(0.0);
                q += inst.risk_of(o.req) * cal.onboard[k];
                c_tilde += ctx.weights[o.req - 1] * dh;
                onboard.push((o.req, cal.onboard[k]));
            }
            let idle = cal.delay.iter().copied().fold(0.0, f64::max);
            q += base * (travel + wait - idle);
            for (k, x) in self.assoc.iter().enumerate() {
                let dh = cal.assoc_increase[k];
                q += inst.risk_of(x.req) * cal.assoc_delay[k];
                c_tilde += ctx.weights[x.req - 1] * dh;
                assoc.push(AssocRes { h: x.h + dh, d: (x.d - cal.assoc_delay[k]).max(0.0), ..x.clone() });
            }
        } else {
            q += base * (travel + wait);
            assoc.extend(self.assoc.iter().cloned());
        }
        for o in open.iter_mut() {
            o.d = o.d.min((o.bo - a).max(0.0));
        }

        let mut picked = self.picked;
        let mut served = self.served;
        let mut open_set = self.open_set;
        let mut assoc_set = self.assoc_set;
        if inst.is_pickup(j) {
            let late = inst.nodes[n + j].late;
            let bo = b.min(late - node.service - inst.max_ride_of(j)).max(a);
            open.push(OpenRes {
                req: j,
                pos: self.pos + 1,
                h: 0.0,
                d: (b - a).max(0.0),
                bo,
                d_a: (a + node.service + inst.max_ride_of(j)).min(late),
                d_bo: (bo + node.service + inst.max_ride_of(j)).min(late),
            });
            picked.insert(j);
            open_set.insert(j);
        } else if inst.is_drop(j) {
            let req = j - n;
            let k = open.iter().position(|o| o.req == req).unwrap();
            let gone = open.remove(k);
            open_set.remove(req);
            served.insert(req);
            if !open.is_empty() {
                assoc.push(AssocRes { req, pick_pos: gone.pos, drop_pos: self.pos + 1, h: gone.h, d: gone.d });
                assoc_set.insert(req);
            }
        }
        if open.is_empty() {
            assoc.clear();
            assoc_set = ReqSet::default();
        }
        let r_sum = self.r_sum + if j == end { -base } else { node.risk };
        if ctx.check_q && q > inst.q_max + 1e-6 {
            return reject(Stage::Rdarp, "cumulative risk", q, inst.q_max);
        }
        let label = Label {
            node: j,
            pos: self.pos + 1,
            parent: None,
            c_tilde,
            arc_rc: self.arc_rc + arc_rc,
            a,
            b,
            load,
            picked,
            served,
            open_set,
            assoc_set,
            open,
            assoc,
            r_sum,
            q,
            wait,
            onboard,
        };
        Ok((label, cal))
    }
}
