//! Plain-text matrix files.
//!
//! ```text
//! cyc R C          gf41 R C
//! <R·C lines, one  <R lines of C residues>
//!  scalar each>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::gf41::{Gf41, MODULUS};
use crate::linalg::{CycMatrix, GfMatrix, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMatrix {
    Cyc(CycMatrix),
    Gf41(GfMatrix),
}

impl AnyMatrix {
    pub fn to_text(&self) -> String {
        match self {
            AnyMatrix::Cyc(m) => write_cyc(m),
            AnyMatrix::Gf41(m) => write_gf41(m),
        }
    }
}

pub fn write_cyc(m: &CycMatrix) -> String {
    let mut out = format!("cyc {} {}\n", m.rows(), m.cols());
    for x in m.entries() {
        writeln!(out, "{x}").expect("writing to a String");
    }
    out
}

pub fn write_gf41(m: &GfMatrix) -> String {
    let mut out = format!("gf41 {} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [kind, r, c] = fields[..] else {
        return Err(parse_err(hl, "expected header \"cyc R C\" or \"gf41 R C\""));
    };
    let rows: usize = r.parse().map_err(|_| parse_err(hl, format!("bad row count {r:?}")))?;
    let cols: usize = c
        .parse()
        .map_err(|_| parse_err(hl, format!("bad column count {c:?}")))?;
    let m = match kind {
        "cyc" => {
            let mut data = Vec::with_capacity(rows * cols);
            for (ln, l) in lines.by_ref().take(rows * cols) {
                data.push(l.parse::<CycNum>().map_err(|e| parse_err(ln, e))?);
            }
            if data.len() != rows * cols {
                return Err(Error::Parse(format!(
                    "expected {} scalars, found {}",
                    rows * cols,
                    data.len()
                )));
            }
            AnyMatrix::Cyc(Matrix::new(rows, cols, data)?)
        }
        "gf41" => {
            let mut data = Vec::with_capacity(rows * cols);
            for (ln, l) in lines.by_ref().take(rows) {
                let row: Vec<Gf41> = l
                    .split_whitespace()
                    .map(|t| match t.parse::<u8>() {
                        Ok(v) if v < MODULUS => Ok(Gf41::new(v as i64)),
                        _ => Err(parse_err(ln, format!("{t:?} is not a residue mod 41"))),
                    })
                    .collect::<Result<_>>()?;
                if row.len() != cols {
                    return Err(parse_err(ln, format!("expected {cols} entries, found {}", row.len())));
                }
                data.extend(row);
            }
            if data.len() != rows * cols {
                return Err(Error::Parse(format!(
                    "expected {rows} rows, found {}",
                    data.len() / cols.max(1)
                )));
            }
            AnyMatrix::Gf41(Matrix::new(rows, cols, data)?)
        }
        other => return Err(parse_err(hl, format!("unknown matrix kind {other:?}"))),
    };
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing data after matrix"));
    }
    Ok(m)
}

pub fn read_matrix_file(path: &Path) -> Result<AnyMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}
