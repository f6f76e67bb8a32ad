//! Seeded sampling of `G̅(n, m, p)` instances.
//!
//! Every random draw in the crate goes through [`Seed`]: a 64-bit root value
//! that is mixed with trial coordinates into child seeds, and that opens
//! independent ChaCha8 streams for the different consumers inside one trial
//! (matrix entries, coloring coins, vertex order, matchings).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::model::RepresentationMatrix;

/// Stream identifiers used with [`Seed::rng`].
pub mod streams {
    pub const MATRIX: u64 = 0;
    pub const COLORING: u64 = 1;
    pub const ORDER: u64 = 2;
    pub const MATCHING: u64 = 3;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Seed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Seed {
    /// Child seed for a coordinate, e.g. a trial index. Order-sensitive:
    /// `s.child(a).child(b) != s.child(b).child(a)` in general.
    pub fn child(self, index: u64) -> Seed {
        Seed(splitmix64(
            splitmix64(self.0) ^ splitmix64(index.wrapping_add(0x6A09_E667_F3BC_C909)),
        ))
    }

    /// Child seed for a path of coordinates.
    pub fn derive(self, path: &[u64]) -> Seed {
        path.iter().fold(self, |s, &i| s.child(i))
    }

    /// A generator on one of the independent ChaCha streams under this seed.
    pub fn rng(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

/// How `(m, p)` were obtained from higher-level regime parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivation {
    Explicit,
    /// `m = ⌊n^α⌋`.
    Alpha(f64),
    /// `m = n`, `p = c / n`.
    C(f64),
}

/// `⌊n^α⌋`, snapping to the integer when `n^α` is one up to rounding noise
/// (so that `1024^0.5` gives 32, not 31).
pub fn floor_pow(n: usize, alpha: f64) -> usize {
    let f = (n as f64).powf(alpha);
    let r = f.round();
    if (r - f).abs() <= 1e-9 * f.max(1.0) {
        r as usize
    } else {
        f.floor() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    m: usize,
    p: f64,
    derivation: Derivation,
}

impl ModelParams {
    pub fn new(n: usize, m: usize, p: f64) -> Result<Self> {
        Self::validated(n, m, p, Derivation::Explicit)
    }

    /// `m = ⌊n^α⌋` labels with explicit `p`.
    pub fn with_alpha(n: usize, alpha: f64, p: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        Self::validated(n, floor_pow(n, alpha), p, Derivation::Alpha(alpha))
    }

    /// The sparse square regime `m = n`, `p = c / n`.
    pub fn with_c(n: usize, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "c must be non-negative, got {c}"
            )));
        }
        let p = if n == 0 { 0.0 } else { c / n as f64 };
        Self::validated(n, n, p, Derivation::C(c))
    }

    fn validated(n: usize, m: usize, p: f64, derivation: Derivation) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParams(format!(
                "need n, m >= 1, got n = {n}, m = {m}"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!(
                "p must lie in [0, 1], got {p}"
            )));
        }
        Ok(Self {
            n,
            m,
            p,
            derivation,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn derivation(&self) -> Derivation {
        self.derivation
    }

    /// Whether `√(1/nm) ≤ p ≤ 1/√m`, the range the concentration results
    /// are stated for (with both constants set to one).
    pub fn in_studied_range(&self) -> bool {
        let nm = (self.n * self.m) as f64;
        let lo = (1.0 / nm).sqrt();
        let hi = 1.0 / (self.m as f64).sqrt();
        // relative slack so p = 1/√(nm) computed elsewhere is not rejected
        self.p >= lo * (1.0 - 1e-12) && self.p <= hi * (1.0 + 1e-12)
    }

    /// `E[Σ_{i≠j} [RᵀR]_{i,j}] = n(n−1)mp²`.
    pub fn expected_edge_weight_sum(&self) -> f64 {
        let n = self.n as f64;
        n * (n - 1.0) * self.m as f64 * self.p * self.p
    }
}

/// Entry-generation strategy. Both produce the same distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMethod {
    /// Geometric skips for `p < 0.1`, one Bernoulli draw per entry otherwise.
    #[default]
    Auto,
    Dense,
    GeometricSkip,
}

const SKIP_THRESHOLD: f64 = 0.1;

pub fn sample_matrix(params: &ModelParams, seed: Seed) -> RepresentationMatrix {
    sample_matrix_with(params, seed, SamplingMethod::Auto)
}

/// Draws every entry `R_{ℓ,v}` independently with probability `p`. The
/// `m × n` grid is visited row-major on the [`streams::MATRIX`] stream.
pub fn sample_matrix_with(
    params: &ModelParams,
    seed: Seed,
    method: SamplingMethod,
) -> RepresentationMatrix {
    let (n, m, p) = (params.n, params.m, params.p);
    let mut rng = seed.rng(streams::MATRIX);
    let mut label_sets: Vec<Vec<usize>> = vec![Vec::new(); m];
    let skip = match method {
        SamplingMethod::Auto => p < SKIP_THRESHOLD,
        SamplingMethod::Dense => false,
        SamplingMethod::GeometricSkip => true,
    };
    if p <= 0.0 {
        // nothing to draw
    } else if skip {
        let geo = Geometric::new(p).expect("p validated to lie in (0, 1]");
        let total = (n as u64) * (m as u64);
        let mut pos = 0u64;
        loop {
            pos = pos.saturating_add(geo.sample(&mut rng));
            if pos >= total {
                break;
            }
            label_sets[(pos / n as u64) as usize].push((pos % n as u64) as usize);
            pos += 1;
        }
    } else {
        for set in label_sets.iter_mut() {
            for v in 0..n {
                if rng.random_bool(p) {
                    set.push(v);
                }
            }
        }
    }
    RepresentationMatrix::from_sorted_unchecked(n, label_sets)
}
