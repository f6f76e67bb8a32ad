//! Running moments and the per-point summary.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::record::TrialRecord;

/// Count, mean, sum of squared deviations (Welford), min and max.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        if self.count == 1 {
            self.min = x;
            self.max = x;
        } else {
            self.min = self.min.min(x);
            self.max = self.max.max(x);
        }
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Combines two partial accumulations (Chan et al.).
    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let d = other.mean - self.mean;
        self.mean += d * nb / n;
        self.m2 += other.m2 + d * d * na * nb / n;
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance with the `n − 1` denominator; `None` below two
    /// observations.
    pub fn variance(&self) -> Option<f64> {
        (self.count >= 2).then(|| self.m2 / (self.count - 1) as f64)
    }

    pub fn std_dev(&self) -> Option<f64> {
        self.variance().map(f64::sqrt)
    }

    pub fn std_err(&self) -> Option<f64> {
        self.std_dev().map(|s| s / (self.count as f64).sqrt())
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn describe(&self) -> StatSummary {
        StatSummary {
            count: self.count,
            mean: self.mean,
            variance: self.variance().unwrap_or(0.0),
            variance_defined: self.variance().is_some(),
            std_err: self.std_err().unwrap_or(0.0),
            min: self.min,
            max: self.max,
        }
    }
}

impl FromIterator<f64> for RunningStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.push(x);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatSummary {
    pub count: u64,
    pub mean: f64,
    /// Zero when undefined, see `variance_defined`.
    pub variance: f64,
    pub variance_defined: bool,
    pub std_err: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ratios {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_over_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majority_over_random: Option<f64>,
    /// `majority_over_random − 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_hat: Option<f64>,
    /// `Var / mean²` of the max-cut weight over trials.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concentration_proxy: Option<f64>,
    /// `"exact"` or, above the exhaustive cap, `"majority"` as a stand-in.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concentration_source: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartizeSummary {
    pub runs: u64,
    pub terminated: u64,
    pub termination_fraction: f64,
    /// Among terminated runs.
    pub label_disjoint: u64,
    pub iterations: StatSummary,
    pub codd_encounters: StatSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSummary {
    pub point: usize,
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub trials: u64,
    pub total_offdiag: StatSummary,
    /// Cut weights per algorithm.
    pub weight: BTreeMap<&'static str, StatSummary>,
    /// `‖Rx‖∞` of the produced colorings per algorithm.
    pub discrepancy: BTreeMap<&'static str, StatSummary>,
    /// Mean wall time in microseconds, when recorded.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub wall_us: BTreeMap<&'static str, f64>,
    pub ratios: Ratios,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bipartize: Option<BipartizeSummary>,
    pub audited: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub points: Vec<PointSummary>,
}

impl SummaryStats {
    pub fn point(&self, id: usize) -> Option<&PointSummary> {
        self.points.iter().find(|p| p.point == id)
    }

    /// Bipartization runs that hit the re-matching budget.
    pub fn non_terminated(&self) -> u64 {
        self.points
            .iter()
            .filter_map(|p| p.bipartize.as_ref())
            .map(|b| b.runs - b.terminated)
            .sum()
    }
}

const ALGOS: [&str; 4] = ["random", "majority", "exact", "bipartize"];

/// Accumulates the records of one grid point.
#[derive(Debug, Clone, Default)]
pub struct PointAccumulator {
    meta: Option<(usize, usize, usize, f64)>,
    trials: u64,
    total_offdiag: RunningStats,
    weight: [RunningStats; 4],
    disc: [RunningStats; 4],
    wall: [RunningStats; 4],
    bip_runs: u64,
    bip_terminated: u64,
    bip_disjoint: u64,
    bip_iterations: RunningStats,
    bip_codd: RunningStats,
    audited: u64,
}

impl PointAccumulator {
    pub fn push(&mut self, r: &TrialRecord) {
        self.meta.get_or_insert((r.point, r.n, r.m, r.p));
        self.trials += 1;
        self.total_offdiag.push(r.total_offdiag as f64);
        let cols = [
            (r.random_weight, r.random_disc, r.random_us),
            (r.majority_weight, r.majority_disc, r.majority_us),
            (r.exact_weight, r.exact_disc, r.exact_us),
            (r.bip_weight, r.bip_disc, r.bip_us),
        ];
        for (i, (w, d, t)) in cols.into_iter().enumerate() {
            if let Some(w) = w {
                self.weight[i].push(w as f64);
            }
            if let Some(d) = d {
                self.disc[i].push(d as f64);
            }
            if let Some(t) = t {
                self.wall[i].push(t as f64);
            }
        }
        if let Some(term) = r.bip_terminated {
            self.bip_runs += 1;
            if term {
                self.bip_terminated += 1;
                if r.bip_label_disjoint == Some(true) {
                    self.bip_disjoint += 1;
                }
            }
            if let Some(it) = r.bip_iterations {
                self.bip_iterations.push(it as f64);
            }
            if let Some(c) = r.bip_codd {
                self.bip_codd.push(c as f64);
            }
        }
        if r.audited {
            self.audited += 1;
        }
    }

    pub fn finish(&self) -> Option<PointSummary> {
        let (point, n, m, p) = self.meta?;
        let collect = |stats: &[RunningStats; 4]| {
            ALGOS
                .iter()
                .zip(stats)
                .filter(|(_, s)| s.count() > 0)
                .map(|(a, s)| (*a, s.describe()))
                .collect::<BTreeMap<_, _>>()
        };
        let [random, majority, exact, _] = &self.weight;
        let ratio = |a: &RunningStats, b: &RunningStats| {
            (a.count() > 0 && b.count() > 0 && b.mean() != 0.0).then(|| a.mean() / b.mean())
        };
        let majority_over_random = ratio(majority, random);
        let (proxy_src, source) = if exact.count() > 0 {
            (Some(exact), Some("exact"))
        } else if majority.count() > 0 {
            (Some(majority), Some("majority"))
        } else {
            (None, None)
        };
        let concentration_proxy = proxy_src.and_then(|s| {
            let v = s.variance()?;
            (s.mean() != 0.0).then(|| v / (s.mean() * s.mean()))
        });
        Some(PointSummary {
            point,
            n,
            m,
            p,
            trials: self.trials,
            total_offdiag: self.total_offdiag.describe(),
            weight: collect(&self.weight),
            discrepancy: collect(&self.disc),
            wall_us: ALGOS
                .iter()
                .zip(&self.wall)
                .filter(|(_, s)| s.count() > 0)
                .map(|(a, s)| (*a, s.mean()))
                .collect(),
            ratios: Ratios {
                random_over_exact: ratio(random, exact),
                majority_over_random,
                beta_hat: majority_over_random.map(|r| r - 1.0),
                concentration_proxy,
                concentration_source: concentration_proxy.and(source),
            },
            bipartize: (self.bip_runs > 0).then(|| BipartizeSummary {
                runs: self.bip_runs,
                terminated: self.bip_terminated,
                termination_fraction: self.bip_terminated as f64 / self.bip_runs as f64,
                label_disjoint: self.bip_disjoint,
                iterations: self.bip_iterations.describe(),
                codd_encounters: self.bip_codd.describe(),
            }),
            audited: self.audited,
        })
    }
}

/// Summary of a record list, grouped by grid point in order of first
/// appearance.
pub fn summarize(records: &[TrialRecord]) -> Result<SummaryStats> {
    if records.is_empty() {
        return Err(LabError::Empty);
    }
    let mut order = Vec::new();
    let mut accs: BTreeMap<usize, PointAccumulator> = BTreeMap::new();
    for r in records {
        accs.entry(r.point)
            .or_insert_with(|| {
                order.push(r.point);
                PointAccumulator::default()
            })
            .push(r);
    }
    Ok(SummaryStats {
        points: order.iter().filter_map(|id| accs[id].finish()).collect(),
    })
}
