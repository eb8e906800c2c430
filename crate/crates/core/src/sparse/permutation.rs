use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Bijection on `[0, n)`. `perm[new] = old` and `inv[old] = new`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    perm: Vec<usize>,
    inv: Vec<usize>,
}

impl Permutation {
    /// Validates `perm` (`perm[new_position] = old_index`) as a bijection.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut inv = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            if old >= n {
                return Err(Error::InvalidPermutation(format!(
                    "index {old} out of range for size {n}"
                )));
            }
            if inv[old] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("duplicate index {old}")));
            }
            inv[old] = new;
        }
        Ok(Permutation { perm, inv })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            perm: (0..n).collect(),
            inv: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `perm[new_position] = old_index`.
    pub fn forward_map(&self) -> &[usize] {
        &self.perm
    }

    /// `inv[old_index] = new_position`.
    pub fn inverse_map(&self) -> &[usize] {
        &self.inv
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            perm: self.inv.clone(),
            inv: self.perm.clone(),
        }
    }

    /// Applies `self` first, then `then`.
    pub fn then(&self, then: &Permutation) -> Result<Permutation> {
        if self.len() != then.len() {
            return Err(Error::DimensionMismatch(format!(
                "composing permutations of size {} and {}",
                self.len(),
                then.len()
            )));
        }
        Permutation::new(then.perm.iter().map(|&k| self.perm[k]).collect())
    }
}

/// Reads a permutation file: one integer per line, line `k` holding `perm[k]`.
pub fn read_permutation<R: Read>(reader: R, nrows: usize) -> Result<Permutation> {
    let mut perm = Vec::with_capacity(nrows);
    for (lineno, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| Error::InvalidPermutation(format!("read failed: {e}")))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: usize = t.parse().map_err(|_| {
            Error::InvalidPermutation(format!("line {}: not an index: {t:?}", lineno + 1))
        })?;
        perm.push(v);
    }
    if perm.len() != nrows {
        return Err(Error::InvalidPermutation(format!(
            "length {} does not match {nrows} rows",
            perm.len()
        )));
    }
    Permutation::new(perm)
}

pub fn load_permutation(path: impl AsRef<Path>, nrows: usize) -> Result<Permutation> {
    let path = path.as_ref();
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_permutation(f, nrows)
}

pub fn write_permutation<W: Write>(mut w: W, p: &Permutation) -> std::io::Result<()> {
    for &v in p.forward_map() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_file() {
        let p = read_permutation("0\n1\n2\n".as_bytes(), 3).unwrap();
        assert!(p.is_identity());
    }

    #[test]
    fn duplicate_is_named() {
        let err = read_permutation("2\n2\n0\n".as_bytes(), 3).unwrap_err();
        assert!(err.to_string().contains("duplicate index 2"), "{err}");
    }

    #[test]
    fn length_mismatch() {
        let err = read_permutation("0\n1\n2\n3\n".as_bytes(), 3).unwrap_err();
        assert!(err.to_string().contains("length 4"), "{err}");
        let err = read_permutation("0\n1\n5\n".as_bytes(), 3).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }

    #[test]
    fn inverse_and_compose() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.inverse_map(), &[1, 2, 0]);
        assert!(p.then(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn write_then_read() {
        let p = Permutation::new(vec![3, 1, 0, 2]).unwrap();
        let mut buf = Vec::new();
        write_permutation(&mut buf, &p).unwrap();
        assert_eq!(read_permutation(buf.as_slice(), 4).unwrap(), p);
    }
}
