//! Cut heuristics and exhaustive oracles.
//!
//! * [`random_cut`]: every vertex picks a side with a fair coin.
//! * [`majority_cut`]: a random prefix, then each vertex joins the side
//!   opposite to the signed weight of its already-colored neighbours.
//! * [`brute_force_max_cut`] / [`brute_force_min_discrepancy`]: Gray-code
//!   enumeration of all `2^{n−1}` colorings with `x_0 = +1`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Coloring, RepresentationMatrix};
use crate::sampling::{streams, Seed};

/// Largest `n` the exhaustive oracles accept unless told otherwise.
pub const DEFAULT_EXACT_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Random,
    Majority,
    Exact,
    MinDiscrepancy,
    Bipartization,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Random => "random",
            Algorithm::Majority => "majority",
            Algorithm::Exact => "exact",
            Algorithm::MinDiscrepancy => "mindisc",
            Algorithm::Bipartization => "bipartize",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub coloring: Coloring,
    /// Always equal to `cut_weight(R, coloring)`.
    pub weight: u64,
    pub algorithm: Algorithm,
    /// Greedy-phase `Z_t` values in processing order, when requested.
    pub trace: Option<Vec<i64>>,
}

impl CutResult {
    fn evaluate(r: &RepresentationMatrix, coloring: Coloring, algorithm: Algorithm) -> Self {
        let weight = r.cut_weight(&coloring).expect("coloring built for r");
        Self {
            coloring,
            weight,
            algorithm,
            trace: None,
        }
    }
}

/// Uniform random bipartition drawn from the [`streams::COLORING`] stream.
pub fn random_cut(r: &RepresentationMatrix, seed: Seed) -> CutResult {
    let mut rng = seed.rng(streams::COLORING);
    let coloring = Coloring::from_sides((0..r.n()).map(|_| rng.random_bool(0.5)));
    CutResult::evaluate(r, coloring, Algorithm::Random)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VertexOrder {
    /// `0, 1, …, n−1`.
    #[default]
    Natural,
    /// A uniform permutation drawn from the [`streams::ORDER`] stream.
    Shuffled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorityConfig {
    epsilon: f64,
    order: VertexOrder,
    record_trace: bool,
}

impl Default for MajorityConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            order: VertexOrder::Natural,
            record_trace: false,
        }
    }
}

impl MajorityConfig {
    /// `epsilon` is the fraction of vertices colored at random before the
    /// greedy phase; `⌊εn⌋` vertices are. Accepts `[0, 1]`.
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in [0, 1], got {epsilon}"
            )));
        }
        Ok(Self {
            epsilon,
            ..Self::default()
        })
    }

    pub fn with_order(mut self, order: VertexOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_trace(mut self, record: bool) -> Self {
        self.record_trace = record;
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn order(&self) -> VertexOrder {
        self.order
    }

    pub fn random_prefix(&self, n: usize) -> usize {
        ((self.epsilon * n as f64).floor() as usize).min(n)
    }
}

/// Majority cut.
///
/// Keeps the partial row sums `P_ℓ = Σ_{i colored, i∈L_ℓ} x_i`, so that
/// `Z_t = Σ_{i<t} [RᵀR]_{i,t} x_i = Σ_{ℓ∈S_t} P_ℓ` costs `O(|S_t|)`. The
/// vertex goes to `−1` when `Z_t ≥ 0` and to `+1` otherwise.
pub fn majority_cut(r: &RepresentationMatrix, cfg: &MajorityConfig, seed: Seed) -> CutResult {
    let n = r.n();
    let mut order: Vec<usize> = (0..n).collect();
    if cfg.order == VertexOrder::Shuffled {
        order.shuffle(&mut seed.rng(streams::ORDER));
    }
    let prefix = cfg.random_prefix(n);
    let mut coin = seed.rng(streams::COLORING);
    let mut partial = vec![0i64; r.m()];
    let mut coloring = Coloring::all_plus(n);
    let mut trace = cfg.record_trace.then(|| Vec::with_capacity(n - prefix));

    for (step, &v) in order.iter().enumerate() {
        let sign: i8 = if step < prefix {
            if coin.random_bool(0.5) {
                1
            } else {
                -1
            }
        } else {
            let z: i64 = r.vertex_set(v).iter().map(|&l| partial[l]).sum();
            if let Some(t) = trace.as_mut() {
                t.push(z);
            }
            if z >= 0 {
                -1
            } else {
                1
            }
        };
        coloring.set(v, sign);
        for &l in r.vertex_set(v) {
            partial[l] += sign as i64;
        }
    }

    let mut result = CutResult::evaluate(r, coloring, Algorithm::Majority);
    result.trace = trace;
    result
}

/// `√(16 / (27π c³))`, the asymptotic lower bound on the majority cut's
/// relative gain over a random cut when `m = n`, `p = c/n`.
pub fn beta_lower_bound(c: f64) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParams(format!("c must be positive, got {c}")));
    }
    Ok((16.0 / (27.0 * std::f64::consts::PI * c.powi(3))).sqrt())
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(63);
    if n > cap {
        return Err(Error::OverCap { n, cap });
    }
    Ok(())
}

/// Orders masks lexicographically over `(x_0, x_1, …)` with `+1` before `−1`.
fn lex_key(mask: u64) -> u64 {
    mask.reverse_bits()
}

/// Receives the events of [`gray_walk`].
trait WalkTracker {
    /// Row `old → new` after a single-vertex flip.
    fn row_changed(&mut self, old: i64, new: i64);
    /// A complete coloring, as its `−1` mask.
    fn visit(&mut self, mask: u64);
}

/// Walks all colorings with `x_0 = +1` in Gray-code order, keeping the row
/// sums current. Starts from all `+1`; each later state differs from the
/// previous one in a single vertex.
fn gray_walk(r: &RepresentationMatrix, tracker: &mut impl WalkTracker) {
    let n = r.n();
    let mut rows: Vec<i64> = r.label_sets().iter().map(|s| s.len() as i64).collect();
    let mut mask = 0u64;
    tracker.visit(mask);
    if n <= 1 {
        return;
    }
    for i in 1u64..(1u64 << (n - 1)) {
        let v = i.trailing_zeros() as usize + 1;
        let delta = if mask >> v & 1 == 0 { -2 } else { 2 };
        mask ^= 1 << v;
        for &l in r.vertex_set(v) {
            let old = rows[l];
            rows[l] += delta;
            tracker.row_changed(old, rows[l]);
        }
        tracker.visit(mask);
    }
}

struct NormTracker {
    norm: i64,
    best: (i64, u64),
}

impl WalkTracker for NormTracker {
    fn row_changed(&mut self, old: i64, new: i64) {
        self.norm += new * new - old * old;
    }

    fn visit(&mut self, mask: u64) {
        let cand = (self.norm, lex_key(mask));
        if cand < self.best {
            self.best = cand;
        }
    }
}

/// Histogram of `|row sum|` with a lazily lowered running maximum.
struct DiscTracker {
    hist: Vec<usize>,
    top: usize,
    best: (usize, u64),
}

impl WalkTracker for DiscTracker {
    fn row_changed(&mut self, old: i64, new: i64) {
        let (o, nw) = (old.unsigned_abs() as usize, new.unsigned_abs() as usize);
        self.hist[o] -= 1;
        self.hist[nw] += 1;
        self.top = self.top.max(nw);
    }

    fn visit(&mut self, mask: u64) {
        while self.top > 0 && self.hist[self.top] == 0 {
            self.top -= 1;
        }
        let cand = (self.top, lex_key(mask));
        if cand < self.best {
            self.best = cand;
        }
    }
}

pub fn brute_force_max_cut(r: &RepresentationMatrix) -> Result<CutResult> {
    brute_force_max_cut_capped(r, DEFAULT_EXACT_CAP)
}

/// Exact max cut by minimizing `‖Rx‖²`. Among optimal colorings with
/// `x_0 = +1` the lexicographically smallest (`+1 < −1`) is returned.
pub fn brute_force_max_cut_capped(r: &RepresentationMatrix, cap: usize) -> Result<CutResult> {
    check_cap(r.n(), cap)?;
    let mut tracker = NormTracker {
        norm: r.gram_total() as i64,
        best: (i64::MAX, u64::MAX),
    };
    gray_walk(r, &mut tracker);
    let coloring = Coloring::from_minus_mask(r.n(), lex_key(tracker.best.1));
    Ok(CutResult::evaluate(r, coloring, Algorithm::Exact))
}

pub fn brute_force_min_discrepancy(r: &RepresentationMatrix) -> Result<(Coloring, u64)> {
    brute_force_min_discrepancy_capped(r, DEFAULT_EXACT_CAP)
}

/// Exact `disc(Σ)` with a minimizing coloring, same enumeration and
/// tie-break as [`brute_force_max_cut_capped`].
pub fn brute_force_min_discrepancy_capped(
    r: &RepresentationMatrix,
    cap: usize,
) -> Result<(Coloring, u64)> {
    check_cap(r.n(), cap)?;
    let mut hist = vec![0usize; r.max_label_size() + 1];
    for s in r.label_sets() {
        hist[s.len()] += 1;
    }
    let mut tracker = DiscTracker {
        hist,
        top: r.max_label_size(),
        best: (usize::MAX, u64::MAX),
    };
    gray_walk(r, &mut tracker);
    let coloring = Coloring::from_minus_mask(r.n(), lex_key(tracker.best.1));
    Ok((coloring, tracker.best.0 as u64))
}
