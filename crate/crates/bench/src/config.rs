use std::fmt;
use std::path::PathBuf;

use clusterwise_spgemm::clustering::{
    fixed_length_clusters, hierarchical_clusters, variable_length_clusters, ClusterParams,
    DEFAULT_FIXED_LEN,
};
use clusterwise_spgemm::format::ClusterAssignment;
use clusterwise_spgemm::reorder::ReorderSpec;
use clusterwise_spgemm::sparse::CsrMatrix;

use crate::error::{BenchError, Result};
use crate::frontier::{DEFAULT_BATCH, DEFAULT_FRONTIERS};

pub const DEFAULT_REPETITIONS: usize = 10;

/// Which product is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Workload {
    /// `A * A`.
    ASquared,
    /// `A * F_t` for each BFS frontier matrix `F_t` of `A`.
    TallSkinny {
        num_frontiers: usize,
        batch: usize,
        seed: u64,
    },
}

impl Workload {
    pub fn tall_skinny(seed: u64) -> Self {
        Workload::TallSkinny {
            num_frontiers: DEFAULT_FRONTIERS,
            batch: DEFAULT_BATCH,
            seed,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Workload::ASquared => "a2",
            Workload::TallSkinny { .. } => "tallskinny",
        }
    }
}

/// How rows of the (reordered) matrix are grouped before multiplying.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Clustering {
    /// No clustering: the variant runs the row-wise kernel.
    None,
    Fixed(usize),
    Variable(ClusterParams),
    Hierarchical(ClusterParams),
}

impl Clustering {
    /// Parses `none`, `fixed`, `fixed:K`, `variable` or `hierarchical`;
    /// `params` supplies the thresholds.
    pub fn parse(s: &str, params: ClusterParams) -> Result<Self> {
        let c = match s {
            "none" => Clustering::None,
            "fixed" => Clustering::Fixed(DEFAULT_FIXED_LEN),
            "variable" => Clustering::Variable(params),
            "hierarchical" => Clustering::Hierarchical(params),
            _ => {
                let k = s
                    .strip_prefix("fixed:")
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| BenchError::Config(format!("unknown clustering {s:?}")))?;
                Clustering::Fixed(k)
            }
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Clustering::None => Ok(()),
            Clustering::Fixed(0) => Err(BenchError::Config("fixed cluster length must be at least 1".into())),
            Clustering::Fixed(_) => Ok(()),
            Clustering::Variable(p) | Clustering::Hierarchical(p) => Ok(p.validate()?),
        }
    }

    pub fn params(&self) -> Option<ClusterParams> {
        match self {
            Clustering::Variable(p) | Clustering::Hierarchical(p) => Some(*p),
            _ => None,
        }
    }

    /// Cluster assignment for `a`, or `None` when clustering is off.
    pub fn assign(&self, a: &CsrMatrix) -> Result<Option<ClusterAssignment>> {
        Ok(match self {
            Clustering::None => None,
            Clustering::Fixed(k) => Some(fixed_length_clusters(a.nrows(), *k)?),
            Clustering::Variable(p) => Some(variable_length_clusters(a, p)?),
            Clustering::Hierarchical(p) => Some(hierarchical_clusters(a, p)?),
        })
    }
}

impl fmt::Display for Clustering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clustering::None => f.write_str("none"),
            Clustering::Fixed(k) => write!(f, "fixed:{k}"),
            Clustering::Variable(_) => f.write_str("variable"),
            Clustering::Hierarchical(_) => f.write_str("hierarchical"),
        }
    }
}

/// One experiment: a matrix, a workload and the preprocessing to evaluate.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub matrix_path: PathBuf,
    pub workload: Workload,
    pub reorder: ReorderSpec,
    pub clustering: Clustering,
    pub repetitions: usize,
    pub threads: usize,
    /// Run one extra untimed repetition first.
    pub warmup: bool,
    /// CSV file that reports are appended to.
    pub output_path: Option<PathBuf>,
}

impl BenchConfig {
    /// Identity configuration on `matrix_path`: original order, no clustering.
    pub fn new(matrix_path: impl Into<PathBuf>) -> Self {
        BenchConfig {
            matrix_path: matrix_path.into(),
            workload: Workload::ASquared,
            reorder: ReorderSpec::Original,
            clustering: Clustering::None,
            repetitions: DEFAULT_REPETITIONS,
            threads: rayon::current_num_threads().max(1),
            warmup: false,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(BenchError::Config("repetitions must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(BenchError::Config("threads must be at least 1".into()));
        }
        if let Workload::TallSkinny { batch: 0, .. } = self.workload {
            return Err(BenchError::Config("frontier batch must be at least 1".into()));
        }
        self.clustering.validate()
    }

    /// Runs `f` on a worker pool sized by `threads`.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| BenchError::Config(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering_names_round_trip() {
        let p = ClusterParams::default();
        for s in ["none", "fixed:1", "fixed:4", "variable", "hierarchical"] {
            assert_eq!(Clustering::parse(s, p).unwrap().to_string(), s);
        }
        assert_eq!(Clustering::parse("fixed", p).unwrap(), Clustering::Fixed(4));
        assert!(Clustering::parse("fixed:0", p).is_err());
        assert!(Clustering::parse("kmeans", p).is_err());
        let bad = ClusterParams { jacc_th: 1.5, ..p };
        assert!(Clustering::parse("variable", bad).is_err());
    }

    #[test]
    fn config_limits() {
        let mut c = BenchConfig::new("m.mtx");
        assert!(c.validate().is_ok());
        c.repetitions = 0;
        assert!(c.validate().is_err());
        c.repetitions = 1;
        c.threads = 0;
        assert!(c.validate().is_err());
    }
}
