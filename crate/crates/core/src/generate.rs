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


//! Seeded random instances for tests and fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{
    compute_qmax, edarp_transform, preprocess, Instance, InstanceError, Mode, Node,
};

/// Shape of a random instance.
#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub n: usize,
    pub fleet: usize,
    pub capacity: i32,
    /// Side of the square service area.
    pub area: f64,
    pub horizon: f64,
    pub window: f64,
    pub max_ride: f64,
    pub mode: Mode,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n: 3,
            fleet: 2,
            capacity: 3,
            area: 20.0,
            horizon: 150.0,
            window: 30.0,
            max_ride: 30.0,
            mode: Mode::Rdarp,
        }
    }
}

/// Euclidean instance with pick-up windows and risk scores in tenths from 0.4 to 0.9.
///
/// The result is preprocessed.
pub fn random_instance(cfg: &GeneratorConfig, seed: u64) -> Result<Instance, InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.n;
    let nn = 2 * n + 2;
    let centre = cfg.area / 2.0;
    let mut pts = vec![(centre, centre); nn];
    for p in pts.iter_mut().take(2 * n + 1).skip(1) {
        *p = (round1(rng.gen_range(0.0..cfg.area)), round1(rng.gen_range(0.0..cfg.area)));
    }
    let mut travel = vec![0.0; nn * nn];
    for i in 0..nn {
        for j in 0..nn {
            let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
            travel[i * nn + j] = (dx * dx + dy * dy).sqrt();
        }
    }
    let mut nodes = Vec::with_capacity(nn);
    for (v, &(x, y)) in pts.iter().enumerate() {
        nodes.push(Node { id: v, x, y, service: 0.0, load: 0, risk: 0.0, early: 0.0, late: cfg.horizon });
    }
    for i in 1..=n {
        let risk = f64::from(rng.gen_range(4..=9)) / 10.0;
        let direct = travel[i * nn + n + i];
        let latest_open = (cfg.horizon - cfg.window - direct - 2.0 * centre).max(1.0);
        let early = rng.gen_range(0.0..latest_open).floor();
        nodes[i].service = 1.0;
        nodes[i].load = 1;
        nodes[i].risk = risk;
        nodes[i].early = early;
        nodes[i].late = early + cfg.window;
        nodes[n + i].service = 1.0;
        nodes[n + i].load = -1;
        nodes[n + i].risk = -risk;
    }
    let mut inst = Instance {
        name: format!("random-{n}-{seed}"),
        n,
        fleet: cfg.fleet,
        capacity: cfg.capacity,
        q_max: f64::INFINITY,
        mode: Mode::Rdarp,
        nodes,
        has_coords: true,
        travel,
        max_ride: vec![cfg.max_ride; n],
        detour_weight: Vec::new(),
        removed: Vec::new(),
    };
    inst.q_max = compute_qmax(&inst)?;
    if cfg.mode == Mode::Edarp {
        inst = edarp_transform(&inst);
    }
    inst.validate()?;
    preprocess(&inst)
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}
