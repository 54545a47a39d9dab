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


//! Risk calibration on one label extension.

/// Continuous piecewise linear function given by its breakpoints.
///
/// Constant extrapolation outside the first and last breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    /// Panics unless the abscissae are strictly increasing and there is at least one point.
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        assert!(!points.is_empty(), "piecewise linear function needs a breakpoint");
        assert!(
            points.windows(2).all(|w| w[0].0 < w[1].0),
            "breakpoints must be strictly increasing"
        );
        Self { points }
    }

    pub fn constant(x: f64, value: f64) -> Self {
        Self { points: vec![(x, value)] }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = &self.points;
        if x <= p[0].0 {
            return p[0].1;
        }
        let last = p[p.len() - 1];
        if x >= last.0 {
            return last.1;
        }
        let k = p.partition_point(|q| q.0 <= x);
        let (x0, y0) = p[k - 1];
        let (x1, y1) = p[k];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Pointwise maximum of `fs` on `[lo, hi]`.
    pub fn upper_envelope(fs: &[PiecewiseLinear], lo: f64, hi: f64) -> PiecewiseLinear {
        assert!(!fs.is_empty());
        if hi <= lo {
            let v = fs.iter().map(|f| f.eval(lo)).fold(f64::NEG_INFINITY, f64::max);
            return PiecewiseLinear::constant(lo, v);
        }
        let mut xs: Vec<f64> = vec![lo, hi];
        for f in fs {
            xs.extend(f.points.iter().map(|p| p.0).filter(|&x| x > lo && x < hi));
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        // every component is linear between consecutive xs; add pairwise crossings
        let mut all = xs.clone();
        for w in xs.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let ends: Vec<(f64, f64)> = fs.iter().map(|f| (f.eval(x0), f.eval(x1))).collect();
            for a in 0..ends.len() {
                for b in a + 1..ends.len() {
                    let d0 = ends[a].0 - ends[b].0;
                    let d1 = ends[a].1 - ends[b].1;
                    if d0 * d1 < 0.0 {
                        let x = x0 + (x1 - x0) * d0 / (d0 - d1);
                        if x > x0 && x < x1 {
                            all.push(x);
                        }
                    }
                }
            }
        }
        all.sort_by(f64::total_cmp);
        all.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        let points = all
            .into_iter()
            .map(|x| (x, fs.iter().map(|f| f.eval(x)).fold(f64::NEG_INFINITY, f64::max)))
            .collect();
        PiecewiseLinear::new(points)
    }

    /// Leftmost minimiser over the breakpoints.
    pub fn argmin(&self) -> (f64, f64) {
        let mut best = self.points[0];
        for &p in &self.points[1..] {
            if p.1 < best.1 - 1e-12 {
                best = p;
            }
        }
        best
    }
}

/// An open request as seen by the calibration, in pick-up order.
#[derive(Debug, Clone, Copy)]
pub struct OpenInput {
    pub risk: f64,
    pub h: f64,
    /// Usable delay buffer on this extension.
    pub avail: f64,
    /// Normalisation of the request's exposure.
    pub norm: f64,
}

/// A delivered request whose exposure can still change.
#[derive(Debug, Clone)]
pub struct AssocInput {
    pub risk: f64,
    pub h: f64,
    pub d: f64,
    pub norm: f64,
    /// Indices into the open list of co-riders picked up during its ride.
    pub co_riders: Vec<usize>,
    /// Per co-rider, risk aboard just before its pick-up, excluding the request itself.
    pub slopes: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationCase {
    /// No associated request; every open request absorbs what its buffer allows.
    Unconstrained,
    NoDelay,
    MaxDelay,
    PartialDelay,
}

#[derive(Debug, Clone)]
pub struct Calibration {
    pub case: CalibrationCase,
    pub delta_star: f64,
    /// Delay per open request.
    pub delay: Vec<f64>,
    /// Onboard duration on the arc per open request.
    pub onboard: Vec<f64>,
    /// Equivalent delay per associated request.
    pub assoc_delay: Vec<f64>,
    /// Exposure increase per associated request.
    pub assoc_increase: Vec<f64>,
}

/// Minimum-delay calibration of the onboard durations on one arc.
///
/// `travel` is `s + t` of the arc, `wait` the waiting time before the head
/// node that delays could absorb, `base` the risk of an always-aboard
/// virtual rider.
pub fn calibrate_risk(travel: f64, wait: f64, base: f64, open: &[OpenInput], assoc: &[AssocInput]) -> Calibration {
    let wait = wait.max(0.0);
    let caps: Vec<f64> = open.iter().map(|o| o.avail.max(0.0).min(wait)).collect();
    let max_buf = caps.iter().copied().fold(0.0, f64::max);
    let full: Vec<f64> = caps.clone();
    let finish = |delay: Vec<f64>, case, delta_star: f64| {
        let onboard = delay.iter().map(|d| travel + wait - d).collect();
        let assoc_delay = assoc.iter().map(|a| a.d.max(0.0).min(delta_star)).collect();
        let assoc_increase = assoc
            .iter()
            .map(|a| assoc_curve(a, &caps).eval(delta_star) * a.norm - a.h)
            .collect();
        Calibration { case, delta_star, delay, onboard, assoc_delay, assoc_increase }
    };
    if assoc.is_empty() || open.is_empty() {
        return finish(full, CalibrationCase::Unconstrained, max_buf);
    }
    let f = open_envelope(travel, wait, base, open, &caps, max_buf);
    let g_parts: Vec<PiecewiseLinear> = assoc.iter().map(|a| assoc_curve(a, &caps)).collect();
    let g = PiecewiseLinear::upper_envelope(&g_parts, 0.0, max_buf);
    if f.eval(0.0) <= g.eval(0.0) + 1e-12 {
        return finish(vec![0.0; open.len()], CalibrationCase::NoDelay, 0.0);
    }
    if f.eval(max_buf) >= g.eval(max_buf) - 1e-12 {
        return finish(full, CalibrationCase::MaxDelay, max_buf);
    }
    let both = PiecewiseLinear::upper_envelope(&[f, g], 0.0, max_buf);
    let (star, _) = both.argmin();
    let delay = caps.iter().map(|c| c.min(star)).collect();
    finish(delay, CalibrationCase::PartialDelay, star)
}

/// `max_o h^o + F^o(δ)` over the open requests, normalised.
fn open_envelope(travel: f64, wait: f64, base: f64, open: &[OpenInput], caps: &[f64], max_buf: f64) -> PiecewiseLinear {
    let mut xs: Vec<f64> = caps.iter().copied().chain([0.0, max_buf]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    let parts: Vec<PiecewiseLinear> = (0..open.len())
        .map(|o| {
            let pts = xs
                .iter()
                .map(|&x| {
                    let mut v = base * (travel + wait - x.min(caps[o]));
                    for (i, other) in open.iter().enumerate() {
                        if i != o {
                            // co-ride on this arc is the onboard time of the later pick-up
                            let later = o.max(i);
                            v += other.risk * (travel + wait - x.min(caps[later]));
                        }
                    }
                    (x, (open[o].h + v) / open[o].norm)
                })
                .collect();
            PiecewiseLinear::new(pts)
        })
        .collect();
    PiecewiseLinear::upper_envelope(&parts, 0.0, max_buf)
}

/// `h^i + G^i(δ)` for one associated request, normalised.
fn assoc_curve(a: &AssocInput, caps: &[f64]) -> PiecewiseLinear {
    let mut order: Vec<(f64, f64)> = a
        .co_riders
        .iter()
        .zip(&a.slopes)
        .map(|(&j, &s)| (caps[j], s))
        .collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut pts = vec![(0.0, a.h)];
    let mut x = a.d.max(0.0);
    let mut y = a.h;
    if x > 0.0 {
        pts.push((x, y));
    }
    for (bp, slope) in order {
        if bp > x {
            y += slope.max(0.0) * (bp - x);
            x = bp;
            pts.push((x, y));
        }
    }
    PiecewiseLinear::new(pts.into_iter().map(|(x, y)| (x, y / a.norm)).collect())
}
