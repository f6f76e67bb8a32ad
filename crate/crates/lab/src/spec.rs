//! Experiment configuration.
//!
//! Specs are TOML documents with flat keys; grid axes are arrays and the
//! grid is their Cartesian product, expanded in the order the axes are
//! listed below (first axis outermost).
//!
//! ```toml
//! name = "square-sparse"
//! regime = "c-sweep"          # fixed | alpha-sweep | c-sweep
//! n = [500, 1000]
//! c = [0.5, 2.0]
//! trials = 100
//! algorithms = ["random", "majority", "bipartize"]
//! epsilon = 0.01
//! seed = 7
//! output = "square.csv"
//! workers = 0                 # 0 picks the number of cores
//! ```
//!
//! | regime        | axes                         | matrix             |
//! |---------------|------------------------------|--------------------|
//! | `fixed`       | `n`, `m`, `p`                | `m × n`, entry `p` |
//! | `alpha-sweep` | `n`, `alpha`, `p` or `p_scale` | `m = ⌊n^α⌋`; `p` given, or `p_scale/√(nm)` |
//! | `c-sweep`     | `n`, `c`                     | `m = n`, `p = c/n` |

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wrig::cut::DEFAULT_EXACT_CAP;
use wrig::sampling::floor_pow;
use wrig::{MajorityConfig, ModelParams, VertexOrder};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Fixed,
    AlphaSweep,
    CSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Random,
    Majority,
    /// Exhaustive max cut and minimum discrepancy, for `n ≤ exact_cap` only.
    Exact,
    Bipartize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    #[default]
    Natural,
    Shuffled,
}

fn default_epsilon() -> f64 {
    0.01
}

fn default_exact_cap() -> usize {
    DEFAULT_EXACT_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub regime: Regime,
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c: Vec<f64>,
    pub trials: usize,
    pub algorithms: Vec<AlgorithmKind>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub order: OrderKind,
    #[serde(default)]
    pub seed: u64,
    /// Re-matching budget per bipartization run; the library default
    /// for the instance size when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rematch: Option<usize>,
    #[serde(default = "default_exact_cap")]
    pub exact_cap: usize,
    /// CSV destination. Required by the command line, ignored by the
    /// in-memory runners.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// JSON summary destination; defaults to `output` with a `.json`
    /// extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
    #[serde(default)]
    pub workers: usize,
    /// Fill the per-algorithm wall-time columns. Off by default because
    /// timings make the CSV differ between runs.
    #[serde(default)]
    pub timings: bool,
}

/// One grid point: an id (its position in the expanded grid) and the model
/// parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub id: usize,
    pub params: ModelParams,
}

impl ExperimentSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Input {
            path: path.into(),
            source,
        })?;
        let mut spec = Self::from_toml_str(&text)?;
        // relative output paths are taken relative to the spec file
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut spec.output, &mut spec.summary].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(LabError::Spec("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(LabError::Spec("algorithms must not be empty".into()));
        }
        let distinct: BTreeSet<_> = self.algorithms.iter().collect();
        if distinct.len() != self.algorithms.len() {
            return Err(LabError::Spec("algorithms lists an entry twice".into()));
        }
        MajorityConfig::new(self.epsilon)?;
        self.grid().map(|_| ())
    }

    pub fn runs(&self, algo: AlgorithmKind) -> bool {
        self.algorithms.contains(&algo)
    }

    pub fn majority_config(&self) -> MajorityConfig {
        let order = match self.order {
            OrderKind::Natural => VertexOrder::Natural,
            OrderKind::Shuffled => VertexOrder::Shuffled,
        };
        MajorityConfig::new(self.epsilon)
            .expect("validated")
            .with_order(order)
    }

    /// Summary destination, if any.
    pub fn summary_path(&self) -> Option<PathBuf> {
        self.summary
            .clone()
            .or_else(|| self.output.as_ref().map(|o| o.with_extension("json")))
    }

    /// Expands the grid. Axes that do not belong to the regime must be
    /// left empty.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        let unused = |name: &str, empty: bool| {
            if empty {
                Ok(())
            } else {
                Err(LabError::Spec(format!(
                    "`{name}` is not used by the {:?} regime",
                    self.regime
                )))
            }
        };
        let need = |name: &str, empty: bool| {
            if empty {
                Err(LabError::Spec(format!("`{name}` must not be empty")))
            } else {
                Ok(())
            }
        };
        need("n", self.n.is_empty())?;
        let mut params = Vec::new();
        match self.regime {
            Regime::Fixed => {
                need("m", self.m.is_empty())?;
                need("p", self.p.is_empty())?;
                unused("alpha", self.alpha.is_empty())?;
                unused("c", self.c.is_empty())?;
                unused("p_scale", self.p_scale.is_none())?;
                for &n in &self.n {
                    for &m in &self.m {
                        for &p in &self.p {
                            params.push(ModelParams::new(n, m, p)?);
                        }
                    }
                }
            }
            Regime::AlphaSweep => {
                need("alpha", self.alpha.is_empty())?;
                unused("m", self.m.is_empty())?;
                unused("c", self.c.is_empty())?;
                match (self.p.is_empty(), self.p_scale) {
                    (false, None) => {
                        for &n in &self.n {
                            for &a in &self.alpha {
                                for &p in &self.p {
                                    params.push(ModelParams::with_alpha(n, a, p)?);
                                }
                            }
                        }
                    }
                    (true, Some(scale)) => {
                        for &n in &self.n {
                            for &a in &self.alpha {
                                let m = floor_pow(n, a);
                                let p = scale / ((n * m.max(1)) as f64).sqrt();
                                params.push(ModelParams::with_alpha(n, a, p)?);
                            }
                        }
                    }
                    _ => {
                        return Err(LabError::Spec(
                            "alpha-sweep needs exactly one of `p` and `p_scale`".into(),
                        ))
                    }
                }
            }
            Regime::CSweep => {
                need("c", self.c.is_empty())?;
                unused("m", self.m.is_empty())?;
                unused("alpha", self.alpha.is_empty())?;
                unused("p", self.p.is_empty())?;
                unused("p_scale", self.p_scale.is_none())?;
                for &n in &self.n {
                    for &c in &self.c {
                        params.push(ModelParams::with_c(n, c)?);
                    }
                }
            }
        }
        Ok(params
            .into_iter()
            .enumerate()
            .map(|(id, params)| GridPoint { id, params })
            .collect())
    }
}
