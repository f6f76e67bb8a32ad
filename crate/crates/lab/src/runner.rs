//! Parallel execution of an [`ExperimentSpec`].
//!
//! Trials are cut into fixed-size batches; each batch runs on the worker
//! pool and is then written and accumulated in `(point, trial)` order, so
//! the output does not depend on the number of workers or on scheduling.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use rayon::prelude::*;
use wrig::bipartization::default_max_rematch;
use wrig::cut::{brute_force_max_cut_capped, brute_force_min_discrepancy_capped};
use wrig::{
    extract_coloring, majority_cut, random_cut, sample_matrix, weak_bipartization, Coloring,
    MajorityConfig, RepresentationMatrix, Seed,
};

use crate::error::{LabError, Result};
use crate::record::{RecordWriter, TrialRecord};
use crate::spec::{AlgorithmKind, ExperimentSpec, GridPoint};
use crate::stats::{PointAccumulator, SummaryStats};

const BATCH: usize = 256;

/// Sub-seeds of a trial seed for the individual algorithms.
mod sub {
    pub const RANDOM: u64 = 1;
    pub const MAJORITY: u64 = 2;
    pub const BIPARTIZE: u64 = 3;
    pub const AUDIT: u64 = 4;
}

/// Seed of trial `trial` at grid point `point`.
pub fn trial_seed(spec_seed: u64, point: usize, trial: usize) -> Seed {
    Seed(spec_seed).derive(&[point as u64, trial as u64])
}

struct TrialPlan {
    seed: u64,
    random: bool,
    majority: Option<MajorityConfig>,
    exact_cap: Option<usize>,
    bipartize: Option<Option<usize>>,
    timings: bool,
}

impl TrialPlan {
    fn new(spec: &ExperimentSpec) -> Self {
        Self {
            seed: spec.seed,
            random: spec.runs(AlgorithmKind::Random),
            majority: spec
                .runs(AlgorithmKind::Majority)
                .then(|| spec.majority_config()),
            exact_cap: spec.runs(AlgorithmKind::Exact).then_some(spec.exact_cap),
            bipartize: spec
                .runs(AlgorithmKind::Bipartize)
                .then_some(spec.max_rematch),
            timings: spec.timings,
        }
    }
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<u64>) {
    let start = on.then(Instant::now);
    let out = f();
    (out, start.map(|s| s.elapsed().as_micros() as u64))
}

fn run_trial(point: &GridPoint, trial: usize, plan: &TrialPlan) -> Result<TrialRecord> {
    let params = &point.params;
    let seed = trial_seed(plan.seed, point.id, trial);
    let r = sample_matrix(params, seed);
    let mut rec = TrialRecord::new(point.id, trial, seed.0, params.n(), params.m(), params.p());
    rec.total_offdiag = r.total_offdiag();
    rec.audited = seed.child(sub::AUDIT).0.is_multiple_of(100);
    let mut produced: Vec<(&str, Coloring, u64)> = Vec::new();
    let disc = |x: &Coloring| r.discrepancy(x).expect("coloring built for r");

    if plan.random {
        let (res, us) = timed(plan.timings, || random_cut(&r, seed.child(sub::RANDOM)));
        rec.random_weight = Some(res.weight);
        rec.random_disc = Some(disc(&res.coloring));
        rec.random_us = us;
        produced.push(("random", res.coloring, res.weight));
    }
    if let Some(cfg) = &plan.majority {
        let (res, us) = timed(plan.timings, || {
            majority_cut(&r, cfg, seed.child(sub::MAJORITY))
        });
        rec.majority_weight = Some(res.weight);
        rec.majority_disc = Some(disc(&res.coloring));
        rec.majority_us = us;
        produced.push(("majority", res.coloring, res.weight));
    }
    if let Some(cap) = plan.exact_cap.filter(|&cap| r.n() <= cap) {
        let (res, us) = timed(plan.timings, || -> Result<_> {
            let cut = brute_force_max_cut_capped(&r, cap)?;
            let (_, d) = brute_force_min_discrepancy_capped(&r, cap)?;
            Ok((cut, d))
        });
        let (cut, d) = res?;
        rec.exact_weight = Some(cut.weight);
        rec.exact_disc = Some(d);
        rec.exact_us = us;
        produced.push(("exact", cut.coloring, cut.weight));
    }
    if let Some(budget) = plan.bipartize {
        let budget = budget.unwrap_or_else(|| default_max_rematch(r.n()));
        let ((outcome, coloring), us) = timed(plan.timings, || {
            let outcome = weak_bipartization(&r, seed.child(sub::BIPARTIZE), budget);
            let coloring = extract_coloring(&outcome).ok();
            (outcome, coloring)
        });
        rec.bip_terminated = Some(outcome.terminated);
        rec.bip_iterations = Some(outcome.iterations);
        rec.bip_codd = Some(outcome.codd_encounters);
        rec.bip_label_disjoint = Some(outcome.label_disjoint);
        rec.bip_us = us;
        if let Some(x) = coloring {
            let w = r.cut_weight(&x)?;
            rec.bip_weight = Some(w);
            rec.bip_disc = Some(disc(&x));
            produced.push(("bipartize", x, w));
        }
    }
    if rec.audited {
        audit(&r, &produced).map_err(|msg| LabError::Audit {
            point: point.id,
            trial,
            msg,
        })?;
    }
    Ok(rec)
}

/// Recomputes each weight through the explicit intersection graph.
fn audit(r: &RepresentationMatrix, produced: &[(&str, Coloring, u64)]) -> Result<(), String> {
    let g = r.graph();
    for (algo, x, w) in produced {
        let direct = g.cut_weight(x).map_err(|e| e.to_string())?;
        if direct != *w {
            return Err(format!("{algo} reported {w}, graph sum is {direct}"));
        }
    }
    Ok(())
}

/// Runs the spec, handing every record to `sink` in `(point, trial)` order.
pub fn run_with(
    spec: &ExperimentSpec,
    mut sink: impl FnMut(&TrialRecord) -> Result<()>,
) -> Result<SummaryStats> {
    spec.validate()?;
    let grid = spec.grid()?;
    let plan = TrialPlan::new(spec);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()?;
    let mut points = Vec::with_capacity(grid.len());
    for point in &grid {
        let mut acc = PointAccumulator::default();
        for start in (0..spec.trials).step_by(BATCH) {
            let end = (start + BATCH).min(spec.trials);
            let batch: Vec<TrialRecord> = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|t| run_trial(point, t, &plan))
                    .collect::<Result<_>>()
            })?;
            for rec in &batch {
                sink(rec)?;
                acc.push(rec);
            }
        }
        points.extend(acc.finish());
    }
    Ok(SummaryStats { points })
}

/// Runs the spec in memory.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<(Vec<TrialRecord>, SummaryStats)> {
    let mut records = Vec::new();
    let summary = run_with(spec, |r| {
        records.push(r.clone());
        Ok(())
    })?;
    Ok((records, summary))
}

/// Runs the spec and streams the CSV to `out`.
pub fn run_to_writer<W: Write>(spec: &ExperimentSpec, out: W) -> Result<(W, SummaryStats)> {
    let mut writer = RecordWriter::new(out)?;
    let summary = run_with(spec, |r| writer.write(r))?;
    Ok((writer.finish()?, summary))
}

/// The JSON summary document.
#[derive(Debug, serde::Serialize)]
pub struct SummaryDocument<'a> {
    pub schema: u32,
    pub name: &'a str,
    pub seed: u64,
    pub trials: usize,
    pub points: &'a [crate::stats::PointSummary],
}

pub fn summary_json(spec: &ExperimentSpec, summary: &SummaryStats) -> Result<String> {
    let doc = SummaryDocument {
        schema: 1,
        name: &spec.name,
        seed: spec.seed,
        trials: spec.trials,
        points: &summary.points,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Runs the spec, writing the CSV to `spec.output` and the summary next to
/// it (or to `spec.summary`).
pub fn run_to_files(spec: &ExperimentSpec) -> Result<SummaryStats> {
    let out = spec
        .output
        .as_ref()
        .ok_or_else(|| LabError::Spec("`output` is required".into()))?;
    let file = File::create(out).map_err(|e| LabError::io(out, e))?;
    let (buf, summary) = run_to_writer(spec, BufWriter::new(file))?;
    buf.into_inner()
        .map_err(|e| LabError::io(out, e.into_error()))?
        .sync_all()
        .map_err(|e| LabError::io(out, e))?;
    if let Some(path) = spec.summary_path() {
        std::fs::write(&path, summary_json(spec, &summary)?).map_err(|e| LabError::io(&path, e))?;
    }
    Ok(summary)
}
