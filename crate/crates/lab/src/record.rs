//! Per-trial rows and their CSV form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// First line of every CSV the harness writes.
pub const SCHEMA_LINE: &str = "# wrig-lab schema 1";

/// One trial of one grid point. Columns of algorithms that did not run are
/// empty. Wall times are in microseconds and only filled when the spec asks
/// for timings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub point: usize,
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub total_offdiag: u64,
    pub random_weight: Option<u64>,
    pub random_disc: Option<u64>,
    pub majority_weight: Option<u64>,
    pub majority_disc: Option<u64>,
    pub exact_weight: Option<u64>,
    pub exact_disc: Option<u64>,
    pub bip_terminated: Option<bool>,
    pub bip_iterations: Option<usize>,
    pub bip_codd: Option<usize>,
    pub bip_label_disjoint: Option<bool>,
    pub bip_weight: Option<u64>,
    pub bip_disc: Option<u64>,
    pub audited: bool,
    pub random_us: Option<u64>,
    pub majority_us: Option<u64>,
    pub exact_us: Option<u64>,
    pub bip_us: Option<u64>,
}

impl TrialRecord {
    pub fn new(point: usize, trial: usize, seed: u64, n: usize, m: usize, p: f64) -> Self {
        Self {
            point,
            trial,
            seed,
            n,
            m,
            p,
            total_offdiag: 0,
            random_weight: None,
            random_disc: None,
            majority_weight: None,
            majority_disc: None,
            exact_weight: None,
            exact_disc: None,
            bip_terminated: None,
            bip_iterations: None,
            bip_codd: None,
            bip_label_disjoint: None,
            bip_weight: None,
            bip_disc: None,
            audited: false,
            random_us: None,
            majority_us: None,
            exact_us: None,
            bip_us: None,
        }
    }
}

/// Streams records as CSV behind the schema line.
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(mut out: W) -> Result<Self> {
        writeln!(out, "{SCHEMA_LINE}").map_err(|e| LabError::io("<csv>", e))?;
        Ok(Self {
            inner: csv::Writer::from_writer(out),
        })
    }

    pub fn write(&mut self, record: &TrialRecord) -> Result<()> {
        self.inner.serialize(record)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush().map_err(|e| LabError::io("<csv>", e))?;
        self.inner
            .into_inner()
            .map_err(|e| LabError::io("<csv>", e.into_error()))
    }
}

/// Reads a CSV written by [`RecordWriter`].
pub fn read_records(input: impl Read) -> Result<Vec<TrialRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    reader
        .deserialize()
        .map(|r| r.map_err(LabError::from))
        .collect()
}
