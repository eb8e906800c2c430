use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use super::{ClusterParams, DisjointSet};
use crate::error::Result;
use crate::format::ClusterAssignment;
use crate::rowwise::{jaccard_sorted, spgemm_topk};
use crate::sparse::CsrMatrix;

/// How a pair of merged sets is re-scored when a stale candidate surfaces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Rescore {
    /// Jaccard similarity of the two root rows.
    #[default]
    RootRows,
    /// Jaccard similarity of the unions of each set's member columns.
    MemberUnion,
}

/// One union performed during hierarchical clustering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MergeEvent {
    /// Roots of the two sets before the merge.
    pub left: usize,
    pub right: usize,
    /// Score the pair was queued with.
    pub score: f64,
    /// Root after the merge.
    pub root: usize,
}

#[derive(Clone, Copy, Debug)]
struct Queued {
    score: f64,
    i: usize,
    j: usize,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    // Max-heap on score; on equal scores the smaller (i, j) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.i.cmp(&self.i))
            .then_with(|| other.j.cmp(&self.j))
    }
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

fn union_cols(a: &CsrMatrix, members: &[usize]) -> Vec<usize> {
    let mut cols: Vec<usize> = members.iter().flat_map(|&r| a.row_cols(r)).copied().collect();
    cols.sort_unstable();
    cols.dedup();
    cols
}

/// Hierarchical clustering with the default root-row re-scoring.
pub fn hierarchical_clusters(a: &CsrMatrix, params: &ClusterParams) -> Result<ClusterAssignment> {
    Ok(hierarchical_clusters_traced(a, params, Rescore::RootRows)?.0)
}

/// Greedy agglomeration of similar rows.
///
/// Candidate pairs are each row's `max_cluster_th - 1` most similar rows
/// (Jaccard `>= jacc_th`), found through the overlap counts of `A * A^T`.
/// They are consumed from a max-heap. A pair whose endpoints are both still
/// set roots is merged when the combined size stays within `max_cluster_th`,
/// and dropped otherwise. A pair with a non-root endpoint is mapped to its
/// roots; if that root pair has not been queued before it is re-scored and
/// queued again when the score clears the threshold.
///
/// Clusters list members in ascending order and are ordered by their
/// smallest member. Also returns the merges in the order they happened.
pub fn hierarchical_clusters_traced(
    a: &CsrMatrix,
    params: &ClusterParams,
    rescore: Rescore,
) -> Result<(ClusterAssignment, Vec<MergeEvent>)> {
    params.validate()?;
    let n = a.nrows();
    let mut sets = DisjointSet::new(n);
    let mut trace = Vec::new();
    let topk = params.max_cluster_th - 1;
    if topk == 0 || n == 0 {
        return Ok((ClusterAssignment::from_parts(n, sets.groups()), trace));
    }

    let bin = a.binarize();
    let candidates = spgemm_topk(&bin, &bin.transpose(), topk, params.jacc_th)?;
    let mut queued: HashSet<(usize, usize)> = candidates.iter().map(|p| (p.i, p.j)).collect();
    let mut heap: BinaryHeap<Queued> = candidates
        .iter()
        .map(|p| Queued {
            score: p.score,
            i: p.i,
            j: p.j,
        })
        .collect();
    // Member lists per root, only needed for union-of-columns re-scoring.
    let mut members: Vec<Vec<usize>> = match rescore {
        Rescore::MemberUnion => (0..n).map(|r| vec![r]).collect(),
        Rescore::RootRows => Vec::new(),
    };

    while let Some(Queued { score, i, j }) = heap.pop() {
        if sets.is_root(i) && sets.is_root(j) {
            if sets.set_size(i) + sets.set_size(j) > params.max_cluster_th {
                continue;
            }
            let root = sets.union(i, j);
            if rescore == Rescore::MemberUnion {
                let child = if root == i { j } else { i };
                let moved = std::mem::take(&mut members[child]);
                members[root].extend(moved);
            }
            trace.push(MergeEvent {
                left: i,
                right: j,
                score,
                root,
            });
        } else {
            let (ri, rj) = ordered(sets.find(i), sets.find(j));
            if ri == rj || queued.contains(&(ri, rj)) {
                continue;
            }
            let s = match rescore {
                Rescore::RootRows => jaccard_sorted(a.row_cols(ri), a.row_cols(rj)),
                Rescore::MemberUnion => {
                    jaccard_sorted(&union_cols(a, &members[ri]), &union_cols(a, &members[rj]))
                }
            };
            if s >= params.jacc_th {
                heap.push(Queued { score: s, i: ri, j: rj });
                queued.insert((ri, rj));
            }
        }
    }

    Ok((ClusterAssignment::from_parts(n, sets.groups()), trace))
}
