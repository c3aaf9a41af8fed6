//! File formats.
//!
//! Subspace text: a header line `N q dim` followed by `dim` lines of `N`
//! space-separated field elements in text form. Extension fields use the
//! default modulus for `q`.
//!
//! Code JSON: a header with the field, the code parameters and the monomial
//! order, followed by one entry per codeword with its label (a linear form)
//! and its RREF basis rows.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{Code, CodeError, Codeword};
use crate::gf::{Field, GfError};
use crate::linalg::{LinalgError, MatrixFq, Subspace};
use crate::veronese::{LinearForm, VeroneseError};

pub const MONOMIAL_ORDER: &str = "grlex-desc";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("codeword {index}: basis is not in reduced row echelon form")]
    NonCanonical { index: usize },
    #[error("header field {field} says {header}, the codewords give {actual}")]
    HeaderMismatch { field: &'static str, header: String, actual: String },
    #[error("unsupported monomial order {0:?}")]
    MonomialOrder(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Veronese(#[from] VeroneseError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

fn format_row(field: &Field, row: &[u32]) -> Vec<String> {
    row.iter().map(|&v| field.format(v)).collect()
}

pub fn write_subspace(v: &Subspace) -> String {
    let f = v.field();
    let mut out = format!("{} {} {}\n", v.ambient_dim(), f.order(), v.dim());
    for row in v.basis().row_iter() {
        out.push_str(&format_row(f, row).join(" "));
        out.push('\n');
    }
    out
}

/// Reads the subspace text format. Rows need not be reduced; the result is
/// the canonical span of whatever rows are listed.
pub fn read_subspace(text: &str) -> Result<Subspace, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(FormatError::Syntax { line: 1, reason: "empty input".into() })?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|e| FormatError::Syntax { line: 1, reason: format!("bad header: {e}") })?;
    let [ambient, q, dim] = nums[..] else {
        return Err(FormatError::Syntax { line: 1, reason: "header must be `N q dim`".into() });
    };
    let field = Field::with_order(q)?;
    let mut rows = Vec::with_capacity(dim as usize);
    for (lineno, line) in lines {
        let row = line.split_whitespace().map(|t| field.parse(t)).collect::<Result<Vec<_>, _>>()?;
        if row.len() as u64 != ambient {
            return Err(FormatError::Syntax {
                line: lineno + 1,
                reason: format!("expected {ambient} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() as u64 != dim {
        return Err(FormatError::Syntax { line: 1, reason: format!("header announces {dim} rows, found {}", rows.len()) });
    }
    Ok(Subspace::span(&field, ambient as usize, &rows)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CodeFile {
    q: u32,
    p: u32,
    m: u32,
    irreducible: Vec<u32>,
    n: usize,
    d: u32,
    k: u32,
    #[serde(rename = "N")]
    packet_length: usize,
    dim: usize,
    size: u64,
    #[serde(rename = "D")]
    min_distance: usize,
    monomial_order: String,
    codewords: Vec<CodewordEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CodewordEntry {
    label: String,
    basis: Vec<Vec<String>>,
}

pub fn write_code(code: &Code) -> String {
    let f = code.field();
    let p = code.params();
    let file = CodeFile {
        q: f.order(),
        p: f.characteristic(),
        m: f.degree(),
        irreducible: f.modulus().to_vec(),
        n: code.n(),
        d: code.d(),
        k: code.k(),
        packet_length: p.packet_length,
        dim: p.dim,
        size: p.size,
        min_distance: p.min_distance,
        monomial_order: MONOMIAL_ORDER.to_string(),
        codewords: code
            .codewords()
            .iter()
            .map(|cw| CodewordEntry {
                label: cw.label.to_text(),
                basis: cw.space.basis().row_iter().map(|r| format_row(f, r)).collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("code file serializes");
    out.push('\n');
    out
}

fn mismatch<T: ToString>(field: &'static str, header: T, actual: T) -> Result<(), FormatError> {
    let (header, actual) = (header.to_string(), actual.to_string());
    if header == actual {
        Ok(())
    } else {
        Err(FormatError::HeaderMismatch { field, header, actual })
    }
}

/// Parses a code file, insisting on canonical bases and recomputing the
/// header parameters from the codewords.
pub fn read_code(text: &str) -> Result<Code, FormatError> {
    let file: CodeFile = serde_json::from_str(text)?;
    if file.monomial_order != MONOMIAL_ORDER {
        return Err(FormatError::MonomialOrder(file.monomial_order));
    }
    let field = Field::new(file.p as u64, file.m, Some(&file.irreducible))?;
    mismatch("q", file.q, field.order())?;
    let codewords = file
        .codewords
        .iter()
        .enumerate()
        .map(|(index, entry)| {
            let rows = entry
                .basis
                .iter()
                .map(|r| r.iter().map(|t| field.parse(t)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let matrix = MatrixFq::from_rows(&field, file.packet_length, &rows)?;
            let space = Subspace::from_matrix(matrix.clone());
            if space.basis() != &matrix {
                return Err(FormatError::NonCanonical { index });
            }
            Ok(Codeword { label: LinearForm::parse(&field, &entry.label)?, space })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let code = Code::new(file.n, file.d, file.k, &field, codewords)?;
    let p = code.params();
    mismatch("N", file.packet_length, p.packet_length)?;
    mismatch("dim", file.dim, p.dim)?;
    mismatch("size", file.size, p.size)?;
    mismatch("D", file.min_distance, p.min_distance)?;
    Ok(code)
}
