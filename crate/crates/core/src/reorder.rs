//! Row reorderings computed in-process (random shuffle, descending degree,
//! reverse Cuthill-McKee) and import of permutations produced elsewhere.

use std::collections::VecDeque;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::{load_permutation, CsrMatrix, Permutation};

fn require_square(a: &CsrMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        })
    }
}

/// Uniform random permutation. The generator is ChaCha8 seeded through
/// `seed_from_u64`, so a seed reproduces the same order on every platform.
pub fn reorder_random(nrows: usize, seed: u64) -> Permutation {
    let mut perm: Vec<usize> = (0..nrows).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    perm.shuffle(&mut rng);
    Permutation::new(perm).expect("shuffle of 0..n is a bijection")
}

/// Rows by descending nonzero count, ties by ascending index.
pub fn reorder_degree(a: &CsrMatrix) -> Result<Permutation> {
    require_square(a)?;
    let mut perm: Vec<usize> = (0..a.nrows()).collect();
    perm.sort_by_key(|&i| (std::cmp::Reverse(a.row_nnz(i)), i));
    Permutation::new(perm)
}

/// Adjacency of `A ∨ Aᵀ` without self loops.
fn symmetric_pattern(a: &CsrMatrix) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let mut adj = vec![Vec::new(); n];
    for (i, j, _) in a.iter() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
        nbrs.dedup();
    }
    adj
}

/// BFS level structure rooted at `start`.
fn bfs_levels(adj: &[Vec<usize>], start: usize, mark: &mut [usize], stamp: usize) -> Vec<Vec<usize>> {
    mark[start] = stamp;
    let mut levels = vec![vec![start]];
    loop {
        let mut next = Vec::new();
        for &v in levels.last().unwrap() {
            for &w in &adj[v] {
                if mark[w] != stamp {
                    mark[w] = stamp;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return levels;
        }
        levels.push(next);
    }
}

/// Pseudo-peripheral vertex: repeatedly jump to the minimum-degree vertex of
/// the deepest BFS level while that increases the eccentricity.
fn pseudo_peripheral(adj: &[Vec<usize>], seed: usize, mark: &mut [usize], stamp: &mut usize) -> usize {
    let mut start = seed;
    *stamp += 1;
    let mut levels = bfs_levels(adj, start, mark, *stamp);
    loop {
        let candidate = *levels
            .last()
            .unwrap()
            .iter()
            .min_by_key(|&&v| (adj[v].len(), v))
            .unwrap();
        *stamp += 1;
        let next = bfs_levels(adj, candidate, mark, *stamp);
        if next.len() <= levels.len() {
            return start;
        }
        start = candidate;
        levels = next;
    }
}

/// Reverse Cuthill-McKee on the symmetrized pattern.
///
/// Components are handled in order of their smallest vertex. Each starts from
/// a pseudo-peripheral vertex reached from the component's minimum-degree
/// vertex, and its BFS enqueues neighbours by ascending degree. The complete
/// visit order is reversed at the end.
pub fn reorder_rcm(a: &CsrMatrix) -> Result<Permutation> {
    require_square(a)?;
    let n = a.nrows();
    let adj = symmetric_pattern(a);
    let degree = |v: usize| adj[v].len();

    let mut visited = vec![false; n];
    let mut mark = vec![0usize; n];
    let mut stamp = 0usize;
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let mut nbrs = Vec::new();

    for root in 0..n {
        if visited[root] {
            continue;
        }
        stamp += 1;
        let seed = bfs_levels(&adj, root, &mut mark, stamp)
            .into_iter()
            .flatten()
            .min_by_key(|&v| (degree(v), v))
            .unwrap();
        let start = pseudo_peripheral(&adj, seed, &mut mark, &mut stamp);

        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            nbrs.clear();
            nbrs.extend(adj[v].iter().copied().filter(|&w| !visited[w]));
            nbrs.sort_unstable_by_key(|&w| (degree(w), w));
            for &w in &nbrs {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    Permutation::new(order)
}

/// Largest `|i - j|` over stored entries; 0 for empty or diagonal matrices.
pub fn bandwidth(a: &CsrMatrix) -> Result<usize> {
    require_square(a)?;
    Ok(a.iter().map(|(i, j, _)| i.abs_diff(j)).max().unwrap_or(0))
}

/// A reordering method selectable from the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReorderSpec {
    Original,
    Random { seed: u64 },
    Degree,
    Rcm,
    File(PathBuf),
}

impl ReorderSpec {
    pub fn compute(&self, a: &CsrMatrix) -> Result<Permutation> {
        match self {
            ReorderSpec::Original => Ok(Permutation::identity(a.nrows())),
            ReorderSpec::Random { seed } => Ok(reorder_random(a.nrows(), *seed)),
            ReorderSpec::Degree => reorder_degree(a),
            ReorderSpec::Rcm => reorder_rcm(a),
            ReorderSpec::File(path) => load_permutation(path, a.nrows()),
        }
    }

    /// Parses `original`, `random`, `degree`, `rcm` or `file:PATH`.
    pub fn parse_with_seed(s: &str, seed: u64) -> Result<Self> {
        match s {
            "original" => Ok(ReorderSpec::Original),
            "random" => Ok(ReorderSpec::Random { seed }),
            "degree" => Ok(ReorderSpec::Degree),
            "rcm" => Ok(ReorderSpec::Rcm),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(ReorderSpec::File(PathBuf::from(path))),
                _ => Err(Error::InvalidArgument(format!("unknown reordering {s:?}"))),
            },
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            ReorderSpec::Random { seed } => Some(*seed),
            _ => None,
        }
    }
}

impl FromStr for ReorderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(seed) = s.strip_prefix("random:") {
            let seed = seed
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad seed in {s:?}")))?;
            return Ok(ReorderSpec::Random { seed });
        }
        Self::parse_with_seed(s, 0)
    }
}

impl fmt::Display for ReorderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReorderSpec::Original => f.write_str("original"),
            ReorderSpec::Random { seed } => write!(f, "random:{seed}"),
            ReorderSpec::Degree => f.write_str("degree"),
            ReorderSpec::Rcm => f.write_str("rcm"),
            ReorderSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}
