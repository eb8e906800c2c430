use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};
use crate::sparse::Permutation;

/// Ordered partition of `[0, nrows)` into non-empty clusters, each holding
/// strictly increasing original row indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterAssignment {
    nrows: usize,
    clusters: Vec<Vec<usize>>,
}

impl ClusterAssignment {
    pub fn new(nrows: usize, clusters: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; nrows];
        for (c, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidAssignment(format!("cluster {c} is empty")));
            }
            if members.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidAssignment(format!(
                    "cluster {c} rows are not strictly increasing"
                )));
            }
            for &r in members {
                if r >= nrows {
                    return Err(Error::InvalidAssignment(format!(
                        "row {r} out of range for {nrows} rows"
                    )));
                }
                if std::mem::replace(&mut seen[r], true) {
                    return Err(Error::InvalidAssignment(format!(
                        "row {r} assigned more than once"
                    )));
                }
            }
        }
        if let Some(r) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidAssignment(format!("row {r} not assigned")));
        }
        Ok(ClusterAssignment { nrows, clusters })
    }

    pub(crate) fn from_parts(nrows: usize, clusters: Vec<Vec<usize>>) -> Self {
        debug_assert!(Self::new(nrows, clusters.clone()).is_ok());
        ClusterAssignment { nrows, clusters }
    }

    /// Every row in its own cluster, in row order.
    pub fn singletons(nrows: usize) -> Self {
        Self::from_parts(nrows, (0..nrows).map(|r| vec![r]).collect())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.clusters.iter().map(Vec::len)
    }

    pub fn max_cluster_size(&self) -> usize {
        self.sizes().max().unwrap_or(0)
    }

    /// Rows listed in cluster order: cluster 0's members first, then cluster 1's, ...
    pub fn to_permutation(&self) -> Permutation {
        let perm: Vec<usize> = self.clusters.iter().flatten().copied().collect();
        Permutation::new(perm).expect("a partition concatenates to a permutation")
    }

    /// One line per cluster with space-separated original row indices.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for members in &self.clusters {
            let line: Vec<String> = members.iter().map(usize::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text<R: Read>(r: R, nrows: usize) -> Result<Self> {
        let mut clusters = Vec::new();
        for (lineno, line) in BufReader::new(r).lines().enumerate() {
            let line =
                line.map_err(|e| Error::InvalidAssignment(format!("read failed: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let members = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| {
                        Error::InvalidAssignment(format!("line {}: bad row {t:?}", lineno + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            clusters.push(members);
        }
        Self::new(nrows, clusters)
    }
}
