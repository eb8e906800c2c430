use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use clusterwise_spgemm::sparse::{first_mismatch, CsrMatrix, Mismatch};

use crate::config::{BenchConfig, Workload};
use crate::error::{BenchError, Result};
use crate::pipeline::{load_matrix, Pipeline};
use crate::report::{amortization_iters, append_report, BenchReport, TimingStats, SCHEMA_VERSION};

/// Absolute tolerance when comparing variant output against the baseline.
pub const VERIFY_TOL: f64 = 1e-9;

/// First disagreement between variant and baseline for one product.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyFailure {
    /// Index of the product (frontier iteration for tall-skinny).
    pub product: usize,
    /// Mismatch in the reordered frame.
    pub mismatch: Mismatch,
    /// Row and column of the mismatch in the original frame.
    pub original: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub passed: bool,
    pub products: usize,
    pub failure: Option<VerifyFailure>,
    /// Error that stopped the pipeline before comparison, if any.
    pub error: Option<String>,
}

impl VerifyReport {
    fn error(e: BenchError) -> Self {
        VerifyReport {
            passed: false,
            products: 0,
            failure: None,
            error: Some(e.to_string()),
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return write!(f, "PASS ({} products)", self.products);
        }
        if let Some(e) = &self.error {
            return write!(f, "FAIL: {e}");
        }
        match &self.failure {
            Some(fl) => {
                write!(f, "FAIL: product {}: {}", fl.product, fl.mismatch)?;
                if let Some((r, c)) = fl.original {
                    write!(f, " [original row {r}, col {c}]")?;
                }
                Ok(())
            }
            None => f.write_str("FAIL"),
        }
    }
}

fn compare(pipe: &Pipeline) -> Result<VerifyReport> {
    let baseline = pipe.baseline()?;
    let variant = pipe.variant()?;
    for (t, (c, v)) in baseline.iter().zip(variant).enumerate() {
        let expected = pipe.to_reordered(c)?;
        let got = v.into_csr();
        if let Some(mismatch) = first_mismatch(&expected, &got, VERIFY_TOL) {
            let original = match &mismatch {
                Mismatch::Shape { .. } => None,
                Mismatch::Pattern { row, col, .. } | Mismatch::Value { row, col, .. } => {
                    let fwd = pipe.perm.forward_map();
                    Some(match pipe.workload {
                        Workload::ASquared => (fwd[*row], fwd[*col]),
                        Workload::TallSkinny { .. } => (fwd[*row], *col),
                    })
                }
            };
            return Ok(VerifyReport {
                passed: false,
                products: baseline.len(),
                failure: Some(VerifyFailure {
                    product: t,
                    mismatch,
                    original,
                }),
                error: None,
            });
        }
    }
    Ok(VerifyReport {
        passed: true,
        products: baseline.len(),
        failure: None,
        error: None,
    })
}

/// Checks an already prepared pipeline against the row-wise baseline.
pub fn verify_pipeline(pipe: &Pipeline) -> VerifyReport {
    compare(pipe).unwrap_or_else(VerifyReport::error)
}

/// Runs the configured pipeline once and compares the variant's output with
/// row-wise output on the original order, moved through the permutation.
/// Every failure, including bad input files, is reported rather than raised.
pub fn verify_mode(cfg: &BenchConfig) -> VerifyReport {
    let run = || -> Result<VerifyReport> {
        cfg.validate()?;
        cfg.install(|| {
            let a = load_matrix(&cfg.matrix_path)?;
            let pipe = Pipeline::prepare(a, cfg.workload, &cfg.reorder, &cfg.clustering)?;
            compare(&pipe)
        })?
    };
    run().unwrap_or_else(VerifyReport::error)
}

/// Verifies, then times baseline and variant and appends a CSV row to
/// `cfg.output_path` when set.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let a = load_matrix(&cfg.matrix_path)?;
    let report = cfg.install(|| bench_matrix(cfg, a))??;
    if let Some(path) = &cfg.output_path {
        append_report(path, &report)?;
    }
    Ok(report)
}

/// The timed part of [`run_bench`] for a matrix already in memory. Must be
/// called inside the configured worker pool.
pub fn bench_matrix(cfg: &BenchConfig, a: CsrMatrix) -> Result<BenchReport> {
    let pipe = Pipeline::prepare(a, cfg.workload, &cfg.reorder, &cfg.clustering)?;
    let check = verify_pipeline(&pipe);
    if !check.passed {
        return Err(BenchError::Verification(check.to_string()));
    }

    let skip = usize::from(cfg.warmup);
    let mut base = Vec::with_capacity(cfg.repetitions);
    let mut var = Vec::with_capacity(cfg.repetitions);
    for rep in 0..cfg.repetitions + skip {
        // alternate which side goes first so neither always runs on a warm cache
        let (tb, tv) = if rep % 2 == 0 {
            let tb = time(|| pipe.baseline().map(|p| drop(black_box(p))))?;
            (tb, time(|| pipe.variant().map(|p| drop(black_box(p))))?)
        } else {
            let tv = time(|| pipe.variant().map(|p| drop(black_box(p))))?;
            (time(|| pipe.baseline().map(|p| drop(black_box(p))))?, tv)
        };
        if rep >= skip {
            base.push(tb);
            var.push(tv);
        }
    }
    let base = TimingStats::from_samples(&base);
    let var = TimingStats::from_samples(&var);

    let fp = pipe.footprint();
    let acc = pipe.variant_access();
    let base_acc = pipe.baseline_access();
    let (num_frontiers, batch, frontier_seed) = match cfg.workload {
        Workload::ASquared => (0, 0, 0),
        Workload::TallSkinny {
            num_frontiers,
            batch,
            seed,
        } => (num_frontiers, batch, seed),
    };
    let params = cfg.clustering.params().unwrap_or_default();
    let preprocess = pipe.preprocess_seconds();

    Ok(BenchReport {
        schema_version: SCHEMA_VERSION,
        matrix: cfg.matrix_path.display().to_string(),
        workload: cfg.workload.name().to_string(),
        num_frontiers,
        batch,
        frontier_seed,
        reorder: cfg.reorder.to_string(),
        clustering: cfg.clustering.to_string(),
        jacc_th: params.jacc_th,
        max_cluster: params.max_cluster_th,
        repetitions: cfg.repetitions,
        threads: cfg.threads,
        warmup: cfg.warmup,
        nrows: pipe.a.nrows(),
        ncols: pipe.a.ncols(),
        nnz: pipe.a.nnz(),
        products: pipe.operands.len(),
        clusters: pipe
            .assignment
            .as_ref()
            .map_or(pipe.a.nrows(), |asg| asg.len()),
        reorder_seconds: pipe.reorder_seconds,
        cluster_seconds: pipe.cluster_seconds,
        preprocess_seconds: preprocess,
        baseline_mean_seconds: base.mean,
        baseline_min_seconds: base.min,
        baseline_max_seconds: base.max,
        spgemm_mean_seconds: var.mean,
        spgemm_min_seconds: var.min,
        spgemm_max_seconds: var.max,
        speedup_vs_baseline: base.mean / var.mean,
        csr_bytes: fp.csr_bytes,
        cluster_bytes: fp.cluster_bytes,
        footprint_ratio: fp.ratio,
        fixed_length_bytes: fp.fixed_length_bytes,
        b_row_loads: acc.b_row_loads,
        a_inner_iters: acc.a_inner_iters,
        placeholder_skips: acc.placeholder_skips,
        baseline_b_row_loads: base_acc.b_row_loads,
        baseline_a_inner_iters: base_acc.a_inner_iters,
        amortization_iters: amortization_iters(preprocess, base.mean, var.mean),
        verified: true,
    })
}

fn time(f: impl FnOnce() -> Result<()>) -> Result<f64> {
    let t = Instant::now();
    f()?;
    Ok(t.elapsed().as_secs_f64())
}
