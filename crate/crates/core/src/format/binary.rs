//! Little-endian dump of a [`CsrClusterMatrix`].
//!
//! Layout: 8-byte magic, `u32` version, `u64` nclusters, nrows and ncols,
//! `u8` index width (4 or 8), then the arrays in declared order:
//! `cluster_sizes`, `cluster_col_ptr`, `col_idx`, `value_ptr`, `values`
//! (`f64`), the validity mask (`u64` words) and `row_map`. Array lengths
//! follow from the header and the pointer arrays.

use std::io::{Read, Write};

use super::{CsrClusterMatrix, IndexWidth};
use crate::error::{Error, Result};

pub const MAGIC: [u8; 8] = *b"CSRCLSTR";
pub const VERSION: u32 = 1;

fn write_indices<W: Write>(w: &mut W, xs: &[usize], width: IndexWidth) -> Result<()> {
    let io = |e| Error::Format(format!("write failed: {e}"));
    for &x in xs {
        match width {
            IndexWidth::U32 => {
                let v = u32::try_from(x)
                    .map_err(|_| Error::Format(format!("index {x} does not fit in 32 bits")))?;
                w.write_all(&v.to_le_bytes()).map_err(io)?;
            }
            IndexWidth::U64 => w.write_all(&(x as u64).to_le_bytes()).map_err(io)?,
        }
    }
    Ok(())
}

pub fn write_csr_cluster<W: Write>(
    mut w: W,
    m: &CsrClusterMatrix,
    width: IndexWidth,
) -> Result<()> {
    let io = |e| Error::Format(format!("write failed: {e}"));
    w.write_all(&MAGIC).map_err(io)?;
    w.write_all(&VERSION.to_le_bytes()).map_err(io)?;
    for n in [m.nclusters(), m.nrows(), m.ncols()] {
        w.write_all(&(n as u64).to_le_bytes()).map_err(io)?;
    }
    w.write_all(&[width.bytes() as u8]).map_err(io)?;
    write_indices(&mut w, m.cluster_sizes(), width)?;
    write_indices(&mut w, m.cluster_col_ptr(), width)?;
    write_indices(&mut w, m.col_idx(), width)?;
    write_indices(&mut w, m.value_ptr(), width)?;
    for v in m.values() {
        w.write_all(&v.to_le_bytes()).map_err(io)?;
    }
    for word in m.valid_words() {
        w.write_all(&word.to_le_bytes()).map_err(io)?;
    }
    write_indices(&mut w, m.row_map(), width)?;
    Ok(())
}

struct Reader<R> {
    inner: R,
}

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner
            .read_exact(&mut buf)
            .map_err(|e| Error::Format(format!("truncated input: {e}")))?;
        Ok(buf)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }

    fn count(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Format("count overflows usize".into()))
    }

    fn indices(&mut self, n: usize, width: IndexWidth) -> Result<Vec<usize>> {
        (0..n)
            .map(|_| match width {
                IndexWidth::U32 => Ok(u32::from_le_bytes(self.bytes()?) as usize),
                IndexWidth::U64 => self.count(),
            })
            .collect()
    }
}

pub fn read_csr_cluster<R: Read>(r: R) -> Result<CsrClusterMatrix> {
    let mut rd = Reader { inner: r };
    if rd.bytes::<8>()? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(rd.bytes()?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let nclusters = rd.count()?;
    let nrows = rd.count()?;
    let ncols = rd.count()?;
    let width = match rd.bytes::<1>()?[0] {
        4 => IndexWidth::U32,
        8 => IndexWidth::U64,
        w => return Err(Error::Format(format!("unsupported index width {w}"))),
    };
    let cluster_sizes = rd.indices(nclusters, width)?;
    let cluster_col_ptr = rd.indices(nclusters + 1, width)?;
    let ncol_idx = *cluster_col_ptr.last().unwrap();
    let col_idx = rd.indices(ncol_idx, width)?;
    let value_ptr = rd.indices(nclusters + 1, width)?;
    let nslots = *value_ptr.last().unwrap();
    let values = (0..nslots)
        .map(|_| Ok(f64::from_le_bytes(rd.bytes()?)))
        .collect::<Result<Vec<_>>>()?;
    let valid = (0..nslots.div_ceil(64))
        .map(|_| rd.u64())
        .collect::<Result<Vec<_>>>()?;
    let row_map = rd.indices(nrows, width)?;
    CsrClusterMatrix::from_raw(
        nrows,
        ncols,
        cluster_sizes,
        cluster_col_ptr,
        col_idx,
        value_ptr,
        values,
        valid,
        row_map,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{build_csr_cluster, ClusterAssignment};
    use crate::sparse::{CooMatrix, CsrMatrix};

    fn sample() -> CsrClusterMatrix {
        let coo = CooMatrix::from_entries(
            4,
            5,
            vec![(0, 0, 1.5), (0, 4, 2.0), (1, 4, -1.0), (2, 1, 3.0), (3, 0, 4.0)],
        )
        .unwrap();
        let a = CsrMatrix::from_coo(&coo);
        let asg = ClusterAssignment::new(4, vec![vec![0, 1, 3], vec![2]]).unwrap();
        build_csr_cluster(&a, &asg).unwrap()
    }

    #[test]
    fn dump_and_restore() {
        let m = sample();
        for width in [IndexWidth::U32, IndexWidth::U64] {
            let mut buf = Vec::new();
            write_csr_cluster(&mut buf, &m, width).unwrap();
            assert_eq!(&buf[..8], b"CSRCLSTR");
            assert_eq!(read_csr_cluster(buf.as_slice()).unwrap(), m);
        }
    }

    #[test]
    fn rejects_truncated_and_bad_magic() {
        let m = sample();
        let mut buf = Vec::new();
        write_csr_cluster(&mut buf, &m, IndexWidth::U32).unwrap();
        assert!(read_csr_cluster(&buf[..buf.len() - 1]).is_err());
        buf[0] = b'X';
        assert!(read_csr_cluster(buf.as_slice()).is_err());
    }
}
