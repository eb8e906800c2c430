//! Flat, versioned CSV rows for benchmark results.

use std::fs::OpenOptions;
use std::io::{Read, Write};
use std::path::Path;

use clusterwise_spgemm::cluster_spgemm::AccessStats;
use clusterwise_spgemm::format::FootprintReport;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Bump whenever columns are added, removed, renamed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl TimingStats {
    pub fn from_samples(samples: &[f64]) -> Self {
        if samples.is_empty() {
            return TimingStats::default();
        }
        TimingStats {
            mean: samples.iter().sum::<f64>() / samples.len() as f64,
            min: samples.iter().copied().fold(f64::INFINITY, f64::min),
            max: samples.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Preprocessing seconds needed before the variant pays for itself:
/// `preprocess / (baseline - optimized)`, infinite without an improvement.
pub fn amortization_iters(preprocess: f64, baseline: f64, optimized: f64) -> f64 {
    let gain = baseline - optimized;
    if gain > 0.0 {
        preprocess / gain
    } else {
        f64::INFINITY
    }
}

/// One benchmark result. Columns are flat so the record maps one-to-one
/// onto a CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,

    // configuration echo
    pub matrix: String,
    pub workload: String,
    pub num_frontiers: usize,
    pub batch: usize,
    pub frontier_seed: u64,
    pub reorder: String,
    pub clustering: String,
    pub jacc_th: f64,
    pub max_cluster: usize,
    pub repetitions: usize,
    pub threads: usize,
    pub warmup: bool,

    // problem
    pub nrows: usize,
    pub ncols: usize,
    pub nnz: usize,
    pub products: usize,
    pub clusters: usize,

    pub reorder_seconds: f64,
    pub cluster_seconds: f64,
    pub preprocess_seconds: f64,

    pub baseline_mean_seconds: f64,
    pub baseline_min_seconds: f64,
    pub baseline_max_seconds: f64,
    pub spgemm_mean_seconds: f64,
    pub spgemm_min_seconds: f64,
    pub spgemm_max_seconds: f64,
    pub speedup_vs_baseline: f64,

    pub csr_bytes: usize,
    pub cluster_bytes: usize,
    pub footprint_ratio: f64,
    pub fixed_length_bytes: Option<usize>,

    pub b_row_loads: u64,
    pub a_inner_iters: u64,
    pub placeholder_skips: u64,
    pub baseline_b_row_loads: u64,
    pub baseline_a_inner_iters: u64,

    pub amortization_iters: f64,
    pub verified: bool,
}

impl BenchReport {
    pub fn baseline_seconds(&self) -> TimingStats {
        TimingStats {
            mean: self.baseline_mean_seconds,
            min: self.baseline_min_seconds,
            max: self.baseline_max_seconds,
        }
    }

    pub fn spgemm_seconds(&self) -> TimingStats {
        TimingStats {
            mean: self.spgemm_mean_seconds,
            min: self.spgemm_min_seconds,
            max: self.spgemm_max_seconds,
        }
    }

    pub fn footprint(&self) -> FootprintReport {
        FootprintReport {
            csr_bytes: self.csr_bytes,
            cluster_bytes: self.cluster_bytes,
            ratio: self.footprint_ratio,
            fixed_length_bytes: self.fixed_length_bytes,
        }
    }

    pub fn access(&self) -> AccessStats {
        AccessStats {
            b_row_loads: self.b_row_loads,
            a_inner_iters: self.a_inner_iters,
            placeholder_skips: self.placeholder_skips,
        }
    }

    pub fn baseline_access(&self) -> AccessStats {
        AccessStats {
            b_row_loads: self.baseline_b_row_loads,
            a_inner_iters: self.baseline_a_inner_iters,
            placeholder_skips: 0,
        }
    }
}

/// Writes a header followed by `reports`.
pub fn write_reports<W: Write>(w: W, reports: &[BenchReport]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in reports {
        wtr.serialize(r)?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Appends `report` to `path`, writing the header only when the file is new
/// or empty.
pub fn append_report(path: &Path, report: &BenchReport) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| BenchError::io(path, e))?;
    let mut wtr = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    wtr.serialize(report)?;
    wtr.flush().map_err(|e| BenchError::io(path, e))?;
    Ok(())
}

/// Parses a report file, rejecting rows from another schema version.
pub fn read_reports<R: Read>(r: R) -> Result<Vec<BenchReport>> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.get(0) != Some("schema_version") {
        return Err(BenchError::Config("report file lacks a schema_version column".into()));
    }
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: BenchReport = row?;
        if row.schema_version != SCHEMA_VERSION {
            return Err(BenchError::Config(format!(
                "report schema version {} (expected {SCHEMA_VERSION})",
                row.schema_version
            )));
        }
        out.push(row);
    }
    Ok(out)
}

pub fn load_reports(path: &Path) -> Result<Vec<BenchReport>> {
    let f = std::fs::File::open(path).map_err(|e| BenchError::io(path, e))?;
    read_reports(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amortization_cases() {
        assert_eq!(amortization_iters(2.0, 1.0, 0.5), 4.0);
        assert_eq!(amortization_iters(2.0, 1.0, 1.0), f64::INFINITY);
        assert_eq!(amortization_iters(2.0, 1.0, 1.5), f64::INFINITY);
    }

    #[test]
    fn timing_stats() {
        let t = TimingStats::from_samples(&[3.0, 1.0, 2.0]);
        assert_eq!(t, TimingStats { mean: 2.0, min: 1.0, max: 3.0 });
    }
}
