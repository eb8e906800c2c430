//! The preprocessing and multiplication steps shared by `bench`, `verify`
//! and `multiply`.

use std::time::Instant;

use clusterwise_spgemm::cluster_spgemm::{
    clusterwise_access_stats, rowwise_access_stats, spgemm_clusterwise, AccessStats,
};
use clusterwise_spgemm::format::{
    build_csr_cluster, cluster_to_csr, csr_bytes, footprint, IndexWidth, ClusterAssignment, CsrClusterMatrix,
    FootprintReport,
};
use clusterwise_spgemm::reorder::ReorderSpec;
use clusterwise_spgemm::rowwise::spgemm_rowwise;
use clusterwise_spgemm::sparse::{load_matrix_market, CsrMatrix, Permutation};

use crate::config::{Clustering, Workload};
use crate::error::Result;
use crate::frontier::generate_frontiers;

pub fn load_matrix(path: &std::path::Path) -> Result<CsrMatrix> {
    Ok(CsrMatrix::from_coo(&load_matrix_market(path)?))
}

/// Right-hand operands for `workload` in the original row order.
pub fn workload_operands(a: &CsrMatrix, workload: &Workload) -> Result<Vec<CsrMatrix>> {
    Ok(match *workload {
        Workload::ASquared => vec![a.clone()],
        Workload::TallSkinny {
            num_frontiers,
            batch,
            seed,
        } => generate_frontiers(a, num_frontiers, batch, seed)?,
    })
}

/// Baseline and variant operands after reordering and clustering.
///
/// The reordered problem is `P A P^T` times `P B`: for `A^2` that is just
/// the symmetrically permuted `A`, for tall-skinny the frontier rows move with
/// `A`'s columns. The variant product is then `P (A B)` or `P A^2 P^T`.
pub struct Pipeline {
    pub workload: Workload,
    pub a: CsrMatrix,
    pub operands: Vec<CsrMatrix>,
    pub perm: Permutation,
    pub a_perm: CsrMatrix,
    pub operands_perm: Vec<CsrMatrix>,
    pub assignment: Option<ClusterAssignment>,
    pub clustered: Option<CsrClusterMatrix>,
    pub reorder_seconds: f64,
    pub cluster_seconds: f64,
}

pub enum VariantProduct {
    Rowwise(CsrMatrix),
    Clustered(CsrClusterMatrix),
}

impl VariantProduct {
    pub fn into_csr(self) -> CsrMatrix {
        match self {
            VariantProduct::Rowwise(c) => c,
            VariantProduct::Clustered(c) => cluster_to_csr(&c),
        }
    }
}

impl Pipeline {
    pub fn prepare(
        a: CsrMatrix,
        workload: Workload,
        reorder: &ReorderSpec,
        clustering: &Clustering,
    ) -> Result<Self> {
        let operands = workload_operands(&a, &workload)?;

        let t = Instant::now();
        let perm = reorder.compute(&a)?;
        let a_perm = a.permute_symmetric(&perm)?;
        let operands_perm = match workload {
            Workload::ASquared => vec![a_perm.clone()],
            Workload::TallSkinny { .. } => operands
                .iter()
                .map(|f| f.permute_rows(&perm))
                .collect::<clusterwise_spgemm::Result<_>>()?,
        };
        let reorder_seconds = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let assignment = clustering.assign(&a_perm)?;
        let clustered = assignment
            .as_ref()
            .map(|asg| build_csr_cluster(&a_perm, asg))
            .transpose()?;
        let cluster_seconds = t.elapsed().as_secs_f64();

        Ok(Pipeline {
            workload,
            a,
            operands,
            perm,
            a_perm,
            operands_perm,
            assignment,
            clustered,
            reorder_seconds,
            cluster_seconds,
        })
    }

    pub fn preprocess_seconds(&self) -> f64 {
        self.reorder_seconds + self.cluster_seconds
    }

    /// Row-wise products on the original order.
    pub fn baseline(&self) -> Result<Vec<CsrMatrix>> {
        self.operands
            .iter()
            .map(|b| Ok(spgemm_rowwise(&self.a, b)?))
            .collect()
    }

    /// Products of the configured variant, in the reordered frame.
    pub fn variant(&self) -> Result<Vec<VariantProduct>> {
        self.operands_perm
            .iter()
            .map(|b| {
                Ok(match &self.clustered {
                    Some(ac) => VariantProduct::Clustered(spgemm_clusterwise(ac, b)?),
                    None => VariantProduct::Rowwise(spgemm_rowwise(&self.a_perm, b)?),
                })
            })
            .collect()
    }

    /// Maps a product in the original frame into the reordered frame.
    pub fn to_reordered(&self, c: &CsrMatrix) -> Result<CsrMatrix> {
        Ok(match self.workload {
            Workload::ASquared => c.permute_symmetric(&self.perm)?,
            Workload::TallSkinny { .. } => c.permute_rows(&self.perm)?,
        })
    }

    /// Maps a product in the reordered frame back to the original frame.
    pub fn to_original(&self, c: &CsrMatrix) -> Result<CsrMatrix> {
        let inv = self.perm.inverse();
        Ok(match self.workload {
            Workload::ASquared => c.permute_symmetric(&inv)?,
            Workload::TallSkinny { .. } => c.permute_rows(&inv)?,
        })
    }

    pub fn baseline_access(&self) -> AccessStats {
        sum_stats(self.operands.iter().map(|b| rowwise_access_stats(&self.a, b)))
    }

    pub fn variant_access(&self) -> AccessStats {
        sum_stats(self.operands_perm.iter().map(|b| match &self.clustered {
            Some(ac) => clusterwise_access_stats(ac, b),
            None => rowwise_access_stats(&self.a_perm, b),
        }))
    }

    /// Footprint of the variant's left operand; CSR against itself when
    /// clustering is off.
    pub fn footprint(&self) -> FootprintReport {
        match &self.clustered {
            Some(ac) => footprint(&self.a_perm, ac),
            None => {
                let bytes = csr_bytes(&self.a_perm, IndexWidth::for_len(self.a_perm.nnz()));
                FootprintReport {
                    csr_bytes: bytes,
                    cluster_bytes: bytes,
                    ratio: 1.0,
                    fixed_length_bytes: None,
                }
            }
        }
    }
}

fn sum_stats(it: impl Iterator<Item = AccessStats>) -> AccessStats {
    it.fold(AccessStats::default(), |acc, s| AccessStats {
        b_row_loads: acc.b_row_loads + s.b_row_loads,
        a_inner_iters: acc.a_inner_iters + s.a_inner_iters,
        placeholder_skips: acc.placeholder_skips + s.placeholder_skips,
    })
}
