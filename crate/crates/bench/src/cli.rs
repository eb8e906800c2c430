use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clusterwise_spgemm::clustering::{ClusterParams, DEFAULT_JACC_TH, DEFAULT_MAX_CLUSTER};
use clusterwise_spgemm::format::ClusterAssignment;
use clusterwise_spgemm::reorder::ReorderSpec;
use clusterwise_spgemm::sparse::{write_matrix_market, write_permutation, CooMatrix, CsrMatrix};

use crate::config::{BenchConfig, Clustering, Workload, DEFAULT_REPETITIONS};
use crate::error::{BenchError, Result};
use crate::frontier::{DEFAULT_BATCH, DEFAULT_FRONTIERS};
use crate::harness::{run_bench, verify_mode};
use crate::pipeline::{load_matrix, Pipeline};
use crate::report::write_reports;

#[derive(Parser, Debug)]
#[command(name = "cwbench", version, about = "Row-wise vs cluster-wise SpGEMM driver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the configured variant once and write the product as Matrix Market
    /// in the original row order. Tall-skinny products are written side by
    /// side, one block of columns per frontier.
    Multiply(CommonArgs),
    /// Print the cluster assignment (original row numbers, one cluster per line).
    Cluster(CommonArgs),
    /// Print the permutation, one original row index per line.
    Reorder(CommonArgs),
    /// Time baseline and variant and emit a CSV report row.
    Bench(CommonArgs),
    /// Check the variant against row-wise output on the original order.
    Verify(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WorkloadArg {
    A2,
    Tallskinny,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Matrix Market file.
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = WorkloadArg::A2)]
    pub workload: WorkloadArg,
    /// original | random | degree | rcm | file:PATH
    #[arg(long, default_value = "original")]
    pub reorder: String,
    /// Seed for random reordering and frontier sources.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// none | fixed:K | variable | hierarchical
    #[arg(long, default_value = "none")]
    pub cluster: String,
    #[arg(long, default_value_t = DEFAULT_JACC_TH)]
    pub jacc_th: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_CLUSTER)]
    pub max_cluster: usize,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    pub reps: usize,
    /// Worker threads; defaults to all available cores.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output file; stdout when omitted. `bench` appends to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Discard one untimed repetition before measuring.
    #[arg(long)]
    pub warmup: bool,
    /// Frontier matrices for the tall-skinny workload.
    #[arg(long, default_value_t = DEFAULT_FRONTIERS)]
    pub frontiers: usize,
    /// BFS sources (columns) per frontier matrix.
    #[arg(long, default_value_t = DEFAULT_BATCH)]
    pub batch: usize,
}

impl CommonArgs {
    pub fn params(&self) -> ClusterParams {
        ClusterParams {
            jacc_th: self.jacc_th,
            max_cluster_th: self.max_cluster,
            ..ClusterParams::default()
        }
    }

    pub fn to_config(&self) -> Result<BenchConfig> {
        let workload = match self.workload {
            WorkloadArg::A2 => Workload::ASquared,
            WorkloadArg::Tallskinny => Workload::TallSkinny {
                num_frontiers: self.frontiers,
                batch: self.batch,
                seed: self.seed,
            },
        };
        let cfg = BenchConfig {
            matrix_path: self.matrix.clone(),
            workload,
            reorder: ReorderSpec::parse_with_seed(&self.reorder, self.seed)?,
            clustering: Clustering::parse(&self.cluster, self.params())?,
            repetitions: self.reps,
            threads: self
                .threads
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            warmup: self.warmup,
            output_path: self.out.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| BenchError::io(p, e))?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn io_err(path: &Option<PathBuf>) -> impl Fn(std::io::Error) -> BenchError + '_ {
    move |e| BenchError::io(path.clone().unwrap_or_else(|| "<stdout>".into()), e)
}

fn prepare(cfg: &BenchConfig) -> Result<Pipeline> {
    let a = load_matrix(&cfg.matrix_path)?;
    cfg.install(|| Pipeline::prepare(a, cfg.workload, &cfg.reorder, &cfg.clustering))?
}

/// Side-by-side concatenation of equally tall matrices.
fn hstack(nrows: usize, blocks: &[CsrMatrix]) -> CsrMatrix {
    let ncols = blocks.iter().map(|b| b.ncols()).sum();
    let mut coo = CooMatrix::new(nrows, ncols);
    let mut off = 0;
    for b in blocks {
        for (i, j, v) in b.iter() {
            coo.push(i, off + j, v).expect("block entry in range");
        }
        off += b.ncols();
    }
    CsrMatrix::from_coo(&coo)
}

/// Executes a parsed command. Returns `false` when `verify` fails.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Multiply(args) => {
            let cfg = args.to_config()?;
            let pipe = prepare(&cfg)?;
            let products = cfg.install(|| -> Result<Vec<CsrMatrix>> {
                pipe.variant()?
                    .into_iter()
                    .map(|p| pipe.to_original(&p.into_csr()))
                    .collect()
            })??;
            let c = match cfg.workload {
                Workload::ASquared => products.into_iter().next().expect("one product"),
                Workload::TallSkinny { .. } => hstack(pipe.a.nrows(), &products),
            };
            let mut w = output(&args.out)?;
            write_matrix_market(&mut w, &c).map_err(io_err(&args.out))?;
            w.flush().map_err(io_err(&args.out))?;
            Ok(true)
        }
        Command::Cluster(args) => {
            let cfg = args.to_config()?;
            let pipe = prepare(&cfg)?;
            let n = pipe.a.nrows();
            let fwd = pipe.perm.forward_map();
            let asg = match &pipe.assignment {
                Some(asg) => {
                    let clusters = asg
                        .clusters()
                        .iter()
                        .map(|c| {
                            let mut rows: Vec<usize> = c.iter().map(|&r| fwd[r]).collect();
                            rows.sort_unstable();
                            rows
                        })
                        .collect();
                    ClusterAssignment::new(n, clusters)?
                }
                None => ClusterAssignment::singletons(n),
            };
            let mut w = output(&args.out)?;
            asg.write_text(&mut w).map_err(io_err(&args.out))?;
            w.flush().map_err(io_err(&args.out))?;
            Ok(true)
        }
        Command::Reorder(args) => {
            let cfg = args.to_config()?;
            let a = load_matrix(&cfg.matrix_path)?;
            let perm = cfg.install(|| cfg.reorder.compute(&a))??;
            let mut w = output(&args.out)?;
            write_permutation(&mut w, &perm).map_err(io_err(&args.out))?;
            w.flush().map_err(io_err(&args.out))?;
            Ok(true)
        }
        Command::Bench(args) => {
            let cfg = args.to_config()?;
            let report = run_bench(&cfg)?;
            if cfg.output_path.is_none() {
                write_reports(std::io::stdout().lock(), std::slice::from_ref(&report))?;
            } else {
                eprintln!(
                    "{} {} reorder={} cluster={}: baseline {:.6}s, variant {:.6}s, speedup {:.3}, footprint {:.3}",
                    report.matrix,
                    report.workload,
                    report.reorder,
                    report.clustering,
                    report.baseline_mean_seconds,
                    report.spgemm_mean_seconds,
                    report.speedup_vs_baseline,
                    report.footprint_ratio,
                );
            }
            Ok(true)
        }
        Command::Verify(args) => {
            let cfg = args.to_config()?;
            let report = verify_mode(&cfg);
            println!("{report}");
            Ok(report.passed)
        }
    }
}
