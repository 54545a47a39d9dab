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


//! Revised primal simplex over bounded variables.
//!
//! Every row `a_r x (sense) b_r` becomes `a_r x + s_r = b_r` with a logical
//! `s_r` whose bounds encode the sense. Rows whose logical cannot absorb the
//! initial residual get an artificial; phase one drives the artificials to
//! zero, phase two optimises the true objective. The basis inverse is kept
//! explicitly and refreshed by Gauss-Jordan every few dozen pivots.

use crate::model::{LinearModel, ModelError, Sense};

const NONBASIC: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: Status,
    pub objective: f64,
    /// Primal value per model variable.
    pub x: Vec<f64>,
    /// Dual value per constraint; `∂ objective / ∂ rhs`.
    pub duals: Vec<f64>,
    /// Reduced cost per model variable.
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    fn failed(status: Status, iterations: usize) -> Self {
        LpSolution {
            status,
            objective: f64::NAN,
            x: Vec::new(),
            duals: Vec::new(),
            reduced_costs: Vec::new(),
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub feas_tol: f64,
    pub opt_tol: f64,
    pub pivot_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    pub refactor_every: usize,
    /// `None` scales the limit with the model size.
    pub max_iterations: Option<usize>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            feas_tol: 1e-7,
            opt_tol: 1e-7,
            pivot_tol: 1e-9,
            bland_after: 1000,
            refactor_every: 64,
            max_iterations: None,
        }
    }
}

pub fn solve_lp(model: &LinearModel) -> Result<LpSolution, ModelError> {
    solve_lp_with(model, &SimplexOptions::default())
}

pub fn solve_lp_with(model: &LinearModel, opts: &SimplexOptions) -> Result<LpSolution, ModelError> {
    model.validate()?;
    let mut s = Tableau::build(model, opts);
    Ok(s.run(model))
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    Failure,
}

struct Tableau<'o> {
    opts: &'o SimplexOptions,
    m: usize,
    n_struct: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    obj: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    pos: Vec<usize>,
    binv: Vec<f64>,
    artificial_start: usize,
    iterations: usize,
    since_refactor: usize,
    // scratch
    y: Vec<f64>,
    alpha: Vec<f64>,
}

impl<'o> Tableau<'o> {
    fn build(model: &LinearModel, opts: &'o SimplexOptions) -> Self {
        let m = model.cons.len();
        let n = model.vars.len();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (r, c) in model.cons.iter().enumerate() {
            for &(j, a) in &c.coeffs {
                if a == 0.0 {
                    continue;
                }
                match cols[j].last_mut() {
                    Some(last) if last.0 == r => last.1 += a,
                    _ => cols[j].push((r, a)),
                }
            }
        }
        // Rows may list a variable twice non-adjacently; merge defensively.
        for col in cols.iter_mut() {
            col.sort_by_key(|e| e.0);
            col.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
            col.retain(|e| e.1 != 0.0);
        }
        let mut lb: Vec<f64> = model.vars.iter().map(|v| v.lb).collect();
        let mut ub: Vec<f64> = model.vars.iter().map(|v| v.ub).collect();
        let mut obj: Vec<f64> = model.vars.iter().map(|v| v.obj).collect();
        let mut x: Vec<f64> = model
            .vars
            .iter()
            .map(|v| {
                if v.lb.is_finite() {
                    v.lb
                } else if v.ub.is_finite() {
                    v.ub
                } else {
                    0.0
                }
            })
            .collect();
        let rhs: Vec<f64> = model.cons.iter().map(|c| c.rhs).collect();

        let mut residual = rhs.clone();
        for (j, col) in cols.iter().enumerate() {
            if x[j] != 0.0 {
                for &(r, a) in col {
                    residual[r] -= a * x[j];
                }
            }
        }

        // logicals
        for (r, c) in model.cons.iter().enumerate() {
            cols.push(vec![(r, 1.0)]);
            let (l, u) = match c.sense {
                Sense::Le => (0.0, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, 0.0),
                Sense::Eq => (0.0, 0.0),
            };
            lb.push(l);
            ub.push(u);
            obj.push(0.0);
            x.push(0.0);
        }
        let artificial_start = cols.len();
        let mut basis = vec![NONBASIC; m];
        let mut binv = vec![0.0; m * m];
        for r in 0..m {
            let logical = n + r;
            let res = residual[r];
            if res >= lb[logical] - opts.feas_tol && res <= ub[logical] + opts.feas_tol {
                basis[r] = logical;
                x[logical] = res;
                binv[r * m + r] = 1.0;
            } else {
                let at = if res < lb[logical] { lb[logical] } else { ub[logical] };
                x[logical] = at;
                let gap = res - at;
                let sign = if gap >= 0.0 { 1.0 } else { -1.0 };
                cols.push(vec![(r, sign)]);
                lb.push(0.0);
                ub.push(f64::INFINITY);
                obj.push(0.0);
                x.push(gap.abs());
                basis[r] = cols.len() - 1;
                binv[r * m + r] = sign;
            }
        }
        let total = cols.len();
        let mut pos = vec![NONBASIC; total];
        for (r, &v) in basis.iter().enumerate() {
            pos[v] = r;
        }
        Tableau {
            opts,
            m,
            n_struct: n,
            cols,
            lb,
            ub,
            obj,
            cost: vec![0.0; total],
            x,
            rhs,
            basis,
            pos,
            binv,
            artificial_start,
            iterations: 0,
            since_refactor: 0,
            y: vec![0.0; m],
            alpha: vec![0.0; m],
        }
    }

    fn max_iterations(&self) -> usize {
        self.opts
            .max_iterations
            .unwrap_or(20_000 + 50 * (self.m + self.cols.len()))
    }

    fn run(&mut self, model: &LinearModel) -> LpSolution {
        let has_artificials = self.cols.len() > self.artificial_start;
        if has_artificials {
            for j in 0..self.cols.len() {
                self.cost[j] = if j >= self.artificial_start { 1.0 } else { 0.0 };
            }
            match self.optimise() {
                PhaseEnd::Optimal => {}
                PhaseEnd::Unbounded | PhaseEnd::Failure => {
                    return LpSolution::failed(Status::NumericalFailure, self.iterations)
                }
            }
            let infeas: f64 = (self.artificial_start..self.cols.len()).map(|j| self.x[j]).sum();
            let scale = 1.0 + self.rhs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if infeas > 1e-6 * scale {
                return LpSolution::failed(Status::Infeasible, self.iterations);
            }
            for j in self.artificial_start..self.cols.len() {
                self.ub[j] = 0.0;
                if self.pos[j] == NONBASIC {
                    self.x[j] = 0.0;
                }
            }
        }
        self.cost.copy_from_slice(&self.obj);
        match self.optimise() {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => return LpSolution::failed(Status::Unbounded, self.iterations),
            PhaseEnd::Failure => return LpSolution::failed(Status::NumericalFailure, self.iterations),
        }
        if !self.refactor() {
            return LpSolution::failed(Status::NumericalFailure, self.iterations);
        }
        self.recompute_basics();
        // A refactor may expose drift; polish once more from the fresh inverse.
        match self.optimise() {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => return LpSolution::failed(Status::Unbounded, self.iterations),
            PhaseEnd::Failure => return LpSolution::failed(Status::NumericalFailure, self.iterations),
        }
        self.extract(model)
    }

    fn extract(&mut self, model: &LinearModel) -> LpSolution {
        self.compute_duals();
        let n = self.n_struct;
        let x: Vec<f64> = self.x[..n].to_vec();
        let duals = self.y.clone();
        let reduced_costs: Vec<f64> = (0..n).map(|j| self.reduced_cost(j)).collect();

        // primal feasibility check on the original rows
        let act = model.row_activity(&x);
        for (r, c) in model.cons.iter().enumerate() {
            let tol = 1e-6 * (1.0 + c.rhs.abs());
            let bad = match c.sense {
                Sense::Le => act[r] > c.rhs + tol,
                Sense::Ge => act[r] < c.rhs - tol,
                Sense::Eq => (act[r] - c.rhs).abs() > tol,
            };
            if bad {
                return LpSolution::failed(Status::NumericalFailure, self.iterations);
            }
        }
        for (j, v) in model.vars.iter().enumerate() {
            let tol = 1e-6 * (1.0 + x[j].abs());
            if x[j] < v.lb - tol || x[j] > v.ub + tol {
                return LpSolution::failed(Status::NumericalFailure, self.iterations);
            }
        }
        let x: Vec<f64> = x
            .iter()
            .zip(&model.vars)
            .map(|(&xi, v)| xi.max(v.lb).min(v.ub))
            .collect();
        LpSolution {
            status: Status::Optimal,
            objective: model.objective_value(&x),
            x,
            duals,
            reduced_costs,
            iterations: self.iterations,
        }
    }

    fn compute_duals(&mut self) {
        let m = self.m;
        for k in 0..m {
            self.y[k] = 0.0;
        }
        for r in 0..m {
            let c = self.cost[self.basis[r]];
            if c != 0.0 {
                let row = &self.binv[r * m..(r + 1) * m];
                for k in 0..m {
                    self.y[k] += c * row[k];
                }
            }
        }
    }

    fn reduced_cost(&self, j: usize) -> f64 {
        let mut d = self.cost[j];
        for &(r, a) in &self.cols[j] {
            d -= self.y[r] * a;
        }
        d
    }

    fn compute_alpha(&mut self, q: usize) {
        let m = self.m;
        for v in self.alpha.iter_mut() {
            *v = 0.0;
        }
        for &(k, a) in &self.cols[q] {
            for r in 0..m {
                self.alpha[r] += self.binv[r * m + k] * a;
            }
        }
    }

    /// Choose an entering variable. Returns (index, direction).
    fn price(&self, bland: bool) -> Option<(usize, f64)> {
        let tol = self.opts.opt_tol;
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.cols.len() {
            if self.pos[j] != NONBASIC {
                continue;
            }
            let (l, u) = (self.lb[j], self.ub[j]);
            if l == u {
                continue;
            }
            let d = self.reduced_cost(j);
            let xj = self.x[j];
            let at_lb = l.is_finite() && xj <= l;
            let at_ub = u.is_finite() && xj >= u;
            let dir = if d < -tol && !at_ub {
                1.0
            } else if d > tol && !at_lb {
                -1.0
            } else {
                continue;
            };
            if bland {
                return Some((j, dir));
            }
            let score = d.abs();
            match best {
                Some((_, _, s)) if s >= score => {}
                _ => best = Some((j, dir, score)),
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn optimise(&mut self) -> PhaseEnd {
        let mut degenerate_run = 0usize;
        let limit = self.max_iterations();
        loop {
            if self.iterations >= limit {
                return PhaseEnd::Failure;
            }
            if self.since_refactor >= self.opts.refactor_every {
                if !self.refactor() {
                    return PhaseEnd::Failure;
                }
                self.recompute_basics();
            }
            self.compute_duals();
            let bland = degenerate_run >= self.opts.bland_after;
            let Some((q, dir)) = self.price(bland) else {
                return PhaseEnd::Optimal;
            };
            self.compute_alpha(q);
            self.iterations += 1;

            // Harris two-pass ratio test.
            let ftol = self.opts.feas_tol;
            let ptol = self.opts.pivot_tol;
            let mut relaxed = f64::INFINITY;
            for r in 0..self.m {
                let a = self.alpha[r];
                if a.abs() <= ptol {
                    continue;
                }
                let v = self.basis[r];
                let rate = -dir * a;
                let lim = if rate < 0.0 {
                    if self.lb[v].is_finite() {
                        (self.x[v] - self.lb[v] + ftol) / -rate
                    } else {
                        continue;
                    }
                } else if self.ub[v].is_finite() {
                    (self.ub[v] - self.x[v] + ftol) / rate
                } else {
                    continue;
                };
                relaxed = relaxed.min(lim);
            }
            let own = self.ub[q] - self.lb[q];
            let mut leave: Option<(usize, f64)> = None;
            if relaxed.is_finite() {
                let mut best_piv = 0.0;
                for r in 0..self.m {
                    let a = self.alpha[r];
                    if a.abs() <= ptol {
                        continue;
                    }
                    let v = self.basis[r];
                    let rate = -dir * a;
                    let exact = if rate < 0.0 {
                        if self.lb[v].is_finite() {
                            (self.x[v] - self.lb[v]) / -rate
                        } else {
                            continue;
                        }
                    } else if self.ub[v].is_finite() {
                        (self.ub[v] - self.x[v]) / rate
                    } else {
                        continue;
                    };
                    if exact > relaxed {
                        continue;
                    }
                    let better = match leave {
                        None => true,
                        Some((lr, _)) => {
                            if bland {
                                self.basis[r] < self.basis[lr]
                            } else {
                                a.abs() > best_piv
                            }
                        }
                    };
                    if better {
                        best_piv = a.abs();
                        leave = Some((r, exact.max(0.0)));
                    }
                }
            }
            let flip = own.is_finite() && leave.map_or(true, |(_, t)| own <= t);
            if flip {
                let t = own;
                self.apply_step(q, dir, t);
                self.x[q] = if dir > 0.0 { self.ub[q] } else { self.lb[q] };
                if t <= 1e-12 {
                    degenerate_run += 1;
                } else {
                    degenerate_run = 0;
                }
                continue;
            }
            let Some((r, t)) = leave else {
                return PhaseEnd::Unbounded;
            };
            self.apply_step(q, dir, t);
            let out = self.basis[r];
            let rate = -dir * self.alpha[r];
            self.x[out] = if rate < 0.0 { self.lb[out] } else { self.ub[out] };
            if !self.pivot(r, q) {
                return PhaseEnd::Failure;
            }
            if t <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
        }
    }

    fn apply_step(&mut self, q: usize, dir: f64, t: f64) {
        if t == 0.0 {
            return;
        }
        self.x[q] += dir * t;
        for r in 0..self.m {
            let a = self.alpha[r];
            if a != 0.0 {
                let v = self.basis[r];
                self.x[v] -= dir * a * t;
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) -> bool {
        let m = self.m;
        let piv = self.alpha[r];
        if piv.abs() < 1e-12 {
            return false;
        }
        let inv = 1.0 / piv;
        for k in 0..m {
            self.binv[r * m + k] *= inv;
        }
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = self.alpha[i];
            if f == 0.0 {
                continue;
            }
            for k in 0..m {
                let v = self.binv[r * m + k];
                if v != 0.0 {
                    self.binv[i * m + k] -= f * v;
                }
            }
        }
        let out = self.basis[r];
        self.pos[out] = NONBASIC;
        self.basis[r] = q;
        self.pos[q] = r;
        self.since_refactor += 1;
        true
    }

    /// Rebuild the basis inverse from scratch; `false` when singular.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        self.since_refactor = 0;
        if m == 0 {
            return true;
        }
        let mut a = vec![0.0; m * m];
        for (r, &v) in self.basis.iter().enumerate() {
            for &(k, val) in &self.cols[v] {
                a[k * m + r] = val;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let mut p = c;
            let mut best = a[c * m + c].abs();
            for i in c + 1..m {
                let v = a[i * m + c].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < 1e-11 {
                return false;
            }
            if p != c {
                for k in 0..m {
                    a.swap(p * m + k, c * m + k);
                    inv.swap(p * m + k, c * m + k);
                }
            }
            let d = 1.0 / a[c * m + c];
            for k in 0..m {
                a[c * m + k] *= d;
                inv[c * m + k] *= d;
            }
            for i in 0..m {
                if i == c {
                    continue;
                }
                let f = a[i * m + c];
                if f == 0.0 {
                    continue;
                }
                for k in 0..m {
                    a[i * m + k] -= f * a[c * m + k];
                    inv[i * m + k] -= f * inv[c * m + k];
                }
            }
        }
        self.binv = inv;
        true
    }

    fn recompute_basics(&mut self) {
        let m = self.m;
        let mut res = self.rhs.clone();
        for j in 0..self.cols.len() {
            if self.pos[j] == NONBASIC && self.x[j] != 0.0 {
                for &(r, a) in &self.cols[j] {
                    res[r] -= a * self.x[j];
                }
            }
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            let v: f64 = row.iter().zip(&res).map(|(a, b)| a * b).sum();
            self.x[self.basis[r]] = v;
        }
    }
}
