//! Closed vertex-label sequences of size `k`: exact counts on a matrix and
//! their expectation under `G̅(n, m, p)`.
//!
//! A sequence has `k` distinct vertices and `k` distinct labels with
//! `{v_i, v_{i+1}} ⊆ L_{ℓ_i}` cyclically. Rotations are the same sequence,
//! reflections are not, which is what the `1/k` factor in
//!
//! ```text
//! E[C_k] = (1/k) · n!/(n−k)! · m!/(m−k)! · p^{2k}
//! ```
//!
//! accounts for.
//!
//! For `k = 1` the exact count is the number of ones of `R` (a single vertex
//! and a label it holds), whose mean is `nmp`, while the formula gives
//! `nmp²`. The formula value is kept at `k = 1` for continuity only.

use crate::error::{Error, Result};
use crate::model::RepresentationMatrix;

pub const DEFAULT_MAX_K: usize = 4;
pub const DEFAULT_MAX_N: usize = 12;

fn ln_falling(x: usize, k: usize) -> f64 {
    (0..k).map(|i| ((x - i) as f64).ln()).sum()
}

pub fn expected_sequence_count(n: usize, m: usize, p: f64, k: usize) -> Result<f64> {
    if k == 0 || k > n.min(m) {
        return Err(Error::OutOfRange(format!(
            "k = {k} outside 1..={}",
            n.min(m)
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!(
            "p must lie in [0, 1], got {p}"
        )));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let ln = ln_falling(n, k) + ln_falling(m, k) + 2.0 * k as f64 * p.ln() - (k as f64).ln();
    Ok(ln.exp())
}

pub fn count_sequences_exact(r: &RepresentationMatrix, k: usize) -> Result<u64> {
    count_sequences_exact_capped(r, k, DEFAULT_MAX_K, DEFAULT_MAX_N)
}

/// Enumerates sequences with `v_1` the smallest vertex: from `v_1` pick an
/// unused label, then an unused larger vertex in it, and so on; the `k`-th
/// label must also contain `v_1`.
pub fn count_sequences_exact_capped(
    r: &RepresentationMatrix,
    k: usize,
    max_k: usize,
    max_n: usize,
) -> Result<u64> {
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    if k > max_k {
        return Err(Error::OutOfRange(format!(
            "k = {k} exceeds the cap {max_k}"
        )));
    }
    if r.n() > max_n {
        return Err(Error::OverCap {
            n: r.n(),
            cap: max_n,
        });
    }
    if k > r.n() || k > r.m() {
        return Ok(0);
    }
    let mut walk = Walk {
        r,
        k,
        start: 0,
        used_vertex: vec![false; r.n()],
        used_label: vec![false; r.m()],
    };
    let mut total = 0;
    for start in 0..r.n() {
        walk.start = start;
        walk.used_vertex[start] = true;
        total += walk.extend(start, 0);
        walk.used_vertex[start] = false;
    }
    Ok(total)
}

struct Walk<'a> {
    r: &'a RepresentationMatrix,
    k: usize,
    start: usize,
    used_vertex: Vec<bool>,
    used_label: Vec<bool>,
}

impl Walk<'_> {
    /// Sequences completing a prefix that ends at `at` with `placed` labels.
    fn extend(&mut self, at: usize, placed: usize) -> u64 {
        let r = self.r;
        let mut total = 0;
        for &label in r.vertex_set(at) {
            if self.used_label[label] {
                continue;
            }
            if placed + 1 == self.k {
                if r.contains(label, self.start) {
                    total += 1;
                }
                continue;
            }
            self.used_label[label] = true;
            for &next in r.label_set(label) {
                if next <= self.start || self.used_vertex[next] {
                    continue;
                }
                self.used_vertex[next] = true;
                total += self.extend(next, placed + 1);
                self.used_vertex[next] = false;
            }
            self.used_label[label] = false;
        }
        total
    }
}
