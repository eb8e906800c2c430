use super::ClusterParams;
use crate::error::Result;
use crate::format::ClusterAssignment;
use crate::rowwise::jaccard_sorted;
use crate::sparse::CsrMatrix;

/// Single forward scan over rows `0..nrows`. The first row of each cluster is
/// its representative; row `i` joins the open cluster when
/// `similarity(rep, i) >= jacc_th` and the cluster has room, otherwise it
/// opens a new cluster.
pub fn variable_length_scan(
    nrows: usize,
    params: &ClusterParams,
    mut similarity: impl FnMut(usize, usize) -> f64,
) -> Result<ClusterAssignment> {
    params.validate()?;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    if nrows == 0 {
        return Ok(ClusterAssignment::from_parts(0, clusters));
    }
    let mut rep = 0;
    clusters.push(vec![0]);
    for i in 1..nrows {
        let open = clusters.last_mut().unwrap();
        if open.len() < params.max_cluster_th && similarity(rep, i) >= params.jacc_th {
            open.push(i);
        } else {
            rep = i;
            clusters.push(vec![i]);
        }
    }
    Ok(ClusterAssignment::from_parts(nrows, clusters))
}

/// Variable-length clusters of consecutive rows by Jaccard similarity to the
/// cluster's first row.
pub fn variable_length_clusters(a: &CsrMatrix, params: &ClusterParams) -> Result<ClusterAssignment> {
    variable_length_scan(a.nrows(), params, |rep, i| {
        jaccard_sorted(a.row_cols(rep), a.row_cols(i))
    })
}
