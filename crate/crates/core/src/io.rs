//! Parity-check matrix interchange: dense text and alist.
//!
//! Dense text: a header line `m n`, then `m` lines of `n` space-separated
//! 0/1 entries. Alist is the usual LDPC layout: `n m`, max column/row
//! weights, per-column and per-row weights, then 1-based index lists per
//! column and per row (zero padding entries are tolerated on input).
//! Both formats round-trip bit-exactly.

use crate::f2::BinMatrix;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Parse { line, msg: msg.into() })
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>, IoError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| IoError::Parse { line: lineno, msg: format!("expected an integer, found {tok:?}") })
        })
        .collect()
}

pub fn parse_dense(text: &str) -> Result<BinMatrix, IoError> {
    let mut lines = text.lines().enumerate();
    let (lineno, header) = lines
        .next()
        .ok_or(IoError::Parse { line: 1, msg: "empty input".into() })?;
    let dims = numbers(header, lineno + 1)?;
    if dims.len() != 2 {
        return err(lineno + 1, "expected header `m n`");
    }
    let (m, n) = (dims[0], dims[1]);
    if m == 0 || n == 0 {
        return err(lineno + 1, "matrix dimensions must be positive");
    }
    let mut out = BinMatrix::zeros(m, n);
    let mut filled = 0;
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if filled == m {
            return err(lineno + 1, format!("unexpected extra row (expected {m})"));
        }
        let row = numbers(line, lineno + 1)?;
        if row.len() != n {
            return err(lineno + 1, format!("expected {n} entries, found {}", row.len()));
        }
        for (j, &e) in row.iter().enumerate() {
            if e > 1 {
                return err(lineno + 1, format!("entry {e} is not 0 or 1"));
            }
            if e == 1 {
                out.set(filled, j, true);
            }
        }
        filled += 1;
    }
    if filled != m {
        return err(filled + 1, format!("expected {m} rows, found {filled}"));
    }
    Ok(out)
}

pub fn render_dense(m: &BinMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<&str> = (0..m.cols()).map(|c| if m.get(r, c) { "1" } else { "0" }).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_alist(text: &str) -> Result<BinMatrix, IoError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let need = |idx: usize| -> Result<(usize, &str), IoError> {
        lines
            .get(idx)
            .copied()
            .ok_or(IoError::Parse { line: lines.last().map_or(1, |&(n, _)| n + 1), msg: "truncated alist".into() })
    };

    let (l0, header) = need(0)?;
    let dims = numbers(header, l0)?;
    if dims.len() != 2 {
        return err(l0, "expected header `n m`");
    }
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return err(l0, "matrix dimensions must be positive");
    }
    let (l1, maxline) = need(1)?;
    let maxes = numbers(maxline, l1)?;
    if maxes.len() != 2 {
        return err(l1, "expected `max_col_weight max_row_weight`");
    }
    let (l2, cw_line) = need(2)?;
    let col_weights = numbers(cw_line, l2)?;
    if col_weights.len() != n {
        return err(l2, format!("expected {n} column weights, found {}", col_weights.len()));
    }
    let (l3, rw_line) = need(3)?;
    let row_weights = numbers(rw_line, l3)?;
    if row_weights.len() != m {
        return err(l3, format!("expected {m} row weights, found {}", row_weights.len()));
    }

    let mut out = BinMatrix::zeros(m, n);
    for (j, &want) in col_weights.iter().enumerate() {
        let (ln, line) = need(4 + j)?;
        let entries = numbers(line, ln)?;
        let rows: Vec<usize> = entries.iter().copied().filter(|&e| e != 0).collect();
        if rows.len() != want {
            return err(ln, format!("column {} lists {} rows, weight says {want}", j + 1, rows.len()));
        }
        for &r in &rows {
            if r > m {
                return err(ln, format!("row index {r} out of range 1..={m}"));
            }
            out.set(r - 1, j, true);
        }
    }
    for (i, &want) in row_weights.iter().enumerate() {
        let (ln, line) = need(4 + n + i)?;
        let entries = numbers(line, ln)?;
        let cols: Vec<usize> = entries.iter().copied().filter(|&e| e != 0).collect();
        if cols.len() != want {
            return err(ln, format!("row {} lists {} columns, weight says {want}", i + 1, cols.len()));
        }
        for &c in &cols {
            if c > n {
                return err(ln, format!("column index {c} out of range 1..={n}"));
            }
            if !out.get(i, c - 1) {
                return err(ln, format!("row list marks ({}, {c}) but the column lists do not", i + 1));
            }
        }
        if cols.len() != out.row_weight(i) {
            return err(ln, format!("row {} weight disagrees with the column lists", i + 1));
        }
    }
    Ok(out)
}

pub fn render_alist(m: &BinMatrix) -> String {
    let rows = m.rows();
    let cols = m.cols();
    let col_weights: Vec<usize> = (0..cols).map(|c| m.column(c).weight()).collect();
    let row_weights: Vec<usize> = (0..rows).map(|r| m.row_weight(r)).collect();
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    // Zero-weight lines carry a single `0` pad so the line count is stable.
    let join_idx = |v: &[usize]| if v.is_empty() { "0".to_string() } else { join(v) };
    let mut out = String::new();
    out.push_str(&format!("{cols} {rows}\n"));
    out.push_str(&format!(
        "{} {}\n",
        col_weights.iter().max().copied().unwrap_or(0),
        row_weights.iter().max().copied().unwrap_or(0)
    ));
    out.push_str(&join(&col_weights));
    out.push('\n');
    out.push_str(&join(&row_weights));
    out.push('\n');
    for c in 0..cols {
        let idx: Vec<usize> = m.column(c).iter_ones().map(|r| r + 1).collect();
        out.push_str(&join_idx(&idx));
        out.push('\n');
    }
    for r in 0..rows {
        let idx: Vec<usize> = m.row_ones(r).map(|c| c + 1).collect();
        out.push_str(&join_idx(&idx));
        out.push('\n');
    }
    out
}

/// Parse a single line of space-separated 0/1 entries as an error vector.
pub fn parse_bit_line(text: &str) -> Result<crate::f2::BinVector, IoError> {
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entries = numbers(line, i + 1)?;
        if entries.iter().any(|&e| e > 1) {
            return err(i + 1, "entries must be 0 or 1");
        }
        let bits: Vec<u8> = entries.iter().map(|&e| e as u8).collect();
        return Ok(crate::f2::BinVector::from_bits(&bits));
    }
    err(1, "empty input")
}

/// SHA-256 of the canonical dense-text rendering, hex-encoded. Used to pin
/// matrices in run manifests.
pub fn matrix_sha256_hex(m: &BinMatrix) -> String {
    let digest = Sha256::digest(render_dense(m).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dense_round_trip() {
        let m = BinMatrix::from_bits(&[&[1, 1, 0], &[0, 1, 1]]);
        let text = render_dense(&m);
        assert_eq!(text, "2 3\n1 1 0\n0 1 1\n");
        assert_eq!(parse_dense(&text).unwrap(), m);
    }

    #[test]
    fn dense_errors_name_the_line() {
        let e = parse_dense("2 3\n1 1 0\n0 x 1\n").unwrap_err();
        assert!(e.to_string().starts_with("line 3:"), "{e}");
        let e = parse_dense("2 3\n1 1 0\n").unwrap_err();
        assert!(e.to_string().contains("expected 2 rows"), "{e}");
        let e = parse_dense("2 3\n1 1\n0 1 1\n").unwrap_err();
        assert!(e.to_string().contains("expected 3 entries"), "{e}");
    }

    #[test]
    fn alist_golden() {
        let m = BinMatrix::from_bits(&[&[1, 1, 0], &[0, 1, 1]]);
        let text = render_alist(&m);
        assert_eq!(text, "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n");
        assert_eq!(parse_alist(&text).unwrap(), m);
    }

    #[test]
    fn alist_accepts_zero_padding() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        let m = parse_alist(text).unwrap();
        assert_eq!(m, BinMatrix::from_bits(&[&[1, 1, 0], &[0, 1, 1]]));
    }

    #[test]
    fn alist_rejects_inconsistent_lists() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 3\n2 3\n";
        let e = parse_alist(text).unwrap_err();
        assert!(e.to_string().contains("column lists"), "{e}");
    }

    #[test]
    fn bit_line() {
        let v = parse_bit_line("0 1 1 0\n").unwrap();
        assert_eq!(v, crate::f2::BinVector::from_bits(&[0, 1, 1, 0]));
        assert!(parse_bit_line("\n\n").is_err());
    }

    #[test]
    fn hash_is_stable() {
        let m = BinMatrix::identity(2);
        assert_eq!(matrix_sha256_hex(&m), matrix_sha256_hex(&m.clone()));
        assert_eq!(matrix_sha256_hex(&m).len(), 64);
    }

    fn matrix_strategy() -> impl Strategy<Value = BinMatrix> {
        (1..=9usize, 1..=12usize).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
                let mut m = BinMatrix::zeros(r, c);
                for (i, b) in bits.into_iter().enumerate() {
                    m.set(i / c, i % c, b);
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn round_trips_are_exact(m in matrix_strategy()) {
            prop_assert_eq!(parse_dense(&render_dense(&m)).unwrap(), m.clone());
            prop_assert_eq!(parse_alist(&render_alist(&m)).unwrap(), m);
        }
    }
}
