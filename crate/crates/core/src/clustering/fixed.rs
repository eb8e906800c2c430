use crate::error::{Error, Result};
use crate::format::ClusterAssignment;

/// Consecutive blocks of `k` rows; the last block may be shorter.
pub fn fixed_length_clusters(nrows: usize, k: usize) -> Result<ClusterAssignment> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "fixed cluster length must be at least 1".into(),
        ));
    }
    let clusters = (0..nrows)
        .step_by(k)
        .map(|start| (start..(start + k).min(nrows)).collect())
        .collect();
    Ok(ClusterAssignment::from_parts(nrows, clusters))
}
