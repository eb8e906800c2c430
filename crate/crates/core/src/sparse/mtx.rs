//! Matrix Market coordinate format (`.mtx`).
//!
//! Supports `real`, `integer` and `pattern` fields with `general` or
//! `symmetric` symmetry. Indices are 1-based in the file and 0-based in memory.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{CooMatrix, CsrMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: &str) -> Result<(Field, Symmetry)> {
    let toks: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" {
        return Err(parse_err(1, format!("malformed header: {line:?}")));
    }
    if toks[1] != "matrix" {
        return Err(parse_err(1, format!("unsupported object {:?}", toks[1])));
    }
    if toks[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format {:?}", toks[2])));
    }
    let field = match toks[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(parse_err(1, format!("unsupported field {other:?}"))),
    };
    let sym = match toks[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(parse_err(1, format!("unsupported symmetry {other:?}"))),
    };
    Ok((field, sym))
}

fn parse_index(tok: Option<&str>, bound: usize, what: &str, lineno: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(lineno, format!("missing {what} index")))?;
    let v: usize = tok
        .parse()
        .map_err(|_| parse_err(lineno, format!("invalid {what} index {tok:?}")))?;
    if v == 0 || v > bound {
        return Err(parse_err(
            lineno,
            format!("{what} index {v} outside declared bound {bound}"),
        ));
    }
    Ok(v - 1)
}

/// Parses a Matrix Market coordinate stream.
pub fn read_matrix_market<R: Read>(reader: R) -> Result<CooMatrix> {
    let mut lines = BufReader::new(reader).lines().enumerate();
    let read = |r: Option<(usize, std::io::Result<String>)>| -> Result<Option<(usize, String)>> {
        match r {
            None => Ok(None),
            Some((i, Ok(s))) => Ok(Some((i + 1, s))),
            Some((i, Err(e))) => Err(parse_err(i + 1, format!("read failed: {e}"))),
        }
    };

    let (_, header) = read(lines.next())?.ok_or_else(|| parse_err(1, "empty file"))?;
    let (field, sym) = parse_header(&header)?;

    let (size_line, size) = loop {
        match read(lines.next())? {
            None => return Err(parse_err(1, "missing size line")),
            Some((_, l)) if l.trim().is_empty() || l.trim_start().starts_with('%') => continue,
            Some(x) => break x,
        }
    };
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(size_line, format!("malformed size line {size:?}")))?;
    let [nrows, ncols, nnz] = dims[..] else {
        return Err(parse_err(size_line, format!("malformed size line {size:?}")));
    };
    if sym == Symmetry::Symmetric && nrows != ncols {
        return Err(parse_err(size_line, "symmetric matrix must be square"));
    }

    let mut coo = CooMatrix::new(nrows, ncols);
    let mut seen = 0usize;
    while let Some((lineno, line)) = read(lines.next())? {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if seen == nnz {
            return Err(parse_err(lineno, format!("more than {nnz} declared entries")));
        }
        let mut toks = t.split_whitespace();
        let r = parse_index(toks.next(), nrows, "row", lineno)?;
        let c = parse_index(toks.next(), ncols, "column", lineno)?;
        let v = match field {
            Field::Pattern => 1.0,
            Field::Real | Field::Integer => {
                let tok = toks
                    .next()
                    .ok_or_else(|| parse_err(lineno, "missing value"))?;
                tok.parse::<f64>()
                    .map_err(|_| parse_err(lineno, format!("invalid value {tok:?}")))?
            }
        };
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens after entry"));
        }
        coo.push(r, c, v)?;
        if sym == Symmetry::Symmetric && r != c {
            coo.push(c, r, v)?;
        }
        seen += 1;
    }
    if seen != nnz {
        return Err(parse_err(
            size_line,
            format!("declared {nnz} entries but found {seen}"),
        ));
    }
    Ok(coo)
}

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<CooMatrix> {
    let path = path.as_ref();
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_matrix_market(f)
}

/// Writes `m` as `coordinate real general`. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_matrix_market<W: Write>(w: W, m: &CsrMatrix) -> std::io::Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for (i, j, v) in m.iter() {
        writeln!(w, "{} {} {:?}", i + 1, j + 1, v)?;
    }
    w.flush()
}
