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


//! Label dominance tests.

use super::label::Label;

const TOL: f64 = 1e-9;

/// Full resource dominance on calibrated labels.
///
/// With `ignore_visited` the served-set comparison is skipped, which gives
/// the weakened rule of the heuristic pass.
pub fn dominates(l1: &Label, l2: &Label, ignore_visited: bool) -> bool {
    if l1.node != l2.node {
        return false;
    }
    if l1.a > l2.a + TOL || l1.load > l2.load || l1.q > l2.q + TOL || l1.c_tilde > l2.c_tilde + TOL {
        return false;
    }
    if !ignore_visited && !l1.served.is_subset(&l2.served) {
        return false;
    }
    if !l1.open_set.is_subset(&l2.open_set) || !l1.assoc_set.is_subset(&l2.assoc_set) {
        return false;
    }
    for o1 in &l1.open {
        let Some(o2) = l2.open_res(o1.req) else { return false };
        if o1.d_a - l1.a < o2.d_a - l2.a - TOL || o1.d_bo < o2.d_bo - TOL || o1.d < o2.d - TOL {
            return false;
        }
    }
    for x1 in &l1.assoc {
        match l2.buffer(x1.req) {
            Some(d2) if x1.d >= d2 - TOL => {}
            _ => return false,
        }
    }
    true
}

/// Dominance with dynamic time windows, exact when exposures play no role.
///
/// `open_subset` allows `O_1 ⊆ O_2`; it is only valid when skipping a
/// drop-off never increases reduced cost or arrival time.
pub fn dtw_dominates(l1: &Label, l2: &Label, open_subset: bool) -> bool {
    if l1.node != l2.node || l1.arc_rc > l2.arc_rc + TOL || l1.a > l2.a + TOL {
        return false;
    }
    if !l1.picked.is_subset(&l2.picked) {
        return false;
    }
    if open_subset {
        if !l1.open_set.is_subset(&l2.open_set) {
            return false;
        }
    } else if l1.open_set != l2.open_set {
        return false;
    }
    l1.open.iter().all(|o1| match l2.open_res(o1.req) {
        Some(o2) => o1.d_a - l1.a >= o2.d_a - l2.a - TOL && o1.d_bo >= o2.d_bo - TOL,
        None => false,
    })
}
