//! Text format for matrices.
//!
//! ```text
//! # optional comment lines
//! 3 2
//! 1?
//! 11
//! ?1
//! ```
//!
//! The header holds `n` and `m` separated by a single space. Then come
//! exactly `n` rows of `m` symbols from `0`, `1`, `?`. Every line ends with
//! `\n`; trailing whitespace is rejected.

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, CharState, IncompleteMatrix};

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

pub fn parse_matrix(text: &str) -> Result<IncompleteMatrix> {
    if text.is_empty() {
        return err(1, "empty input");
    }
    if !text.ends_with('\n') {
        return err(text.lines().count(), "missing final newline");
    }
    let lines: Vec<&str> = text[..text.len() - 1].split('\n').collect();
    for (i, l) in lines.iter().enumerate() {
        if l.ends_with(|c: char| c.is_whitespace()) {
            return err(i + 1, "trailing whitespace");
        }
    }
    let mut i = 0;
    while i < lines.len() && lines[i].starts_with('#') {
        i += 1;
    }
    let Some(header) = lines.get(i) else { return err(i + 1, "missing header") };
    let parse_dim = |s: &str| s.parse::<usize>().ok().filter(|_| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()));
    let (n, m) = match header.split_once(' ') {
        Some((a, b)) => match (parse_dim(a), parse_dim(b)) {
            (Some(n), Some(m)) => (n, m),
            _ => return err(i + 1, format!("bad header {header:?}, expected \"n m\"")),
        },
        None => return err(i + 1, format!("bad header {header:?}, expected \"n m\"")),
    };
    if n == 0 || m == 0 {
        return err(i + 1, "dimensions must be positive");
    }
    let rows = &lines[i + 1..];
    if rows.len() != n {
        return err(i + 2 + rows.len().min(n), format!("expected {n} rows, found {}", rows.len()));
    }
    let mut entries = Vec::with_capacity(n * m);
    for (r, row) in rows.iter().enumerate() {
        let line = i + 2 + r;
        let before = entries.len();
        for ch in row.chars() {
            match CharState::from_symbol(ch) {
                Some(st) => entries.push(st),
                None => return err(line, format!("illegal symbol {ch:?}")),
            }
        }
        if entries.len() - before != m {
            return err(line, format!("expected {m} symbols, found {}", entries.len() - before));
        }
    }
    IncompleteMatrix::new(n, m, entries)
}

pub fn write_matrix(a: &IncompleteMatrix) -> String {
    let mut out = format!("{} {}\n", a.n(), a.m());
    for s in 0..a.n() {
        out.push_str(&a.row_string(s));
        out.push('\n');
    }
    out
}

pub fn write_binary(b: &BinaryMatrix) -> String {
    write_matrix(&b.to_incomplete())
}

/// Parses a matrix file that must not contain `?`.
pub fn parse_binary(text: &str) -> Result<BinaryMatrix> {
    let a = parse_matrix(text)?;
    BinaryMatrix::try_from(&a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "3 2\n1?\n11\n?1\n";
        let a = parse_matrix(text).unwrap();
        assert_eq!(write_matrix(&a), text);
        let with_comment = format!("# planted\n#\n{text}");
        assert_eq!(parse_matrix(&with_comment).unwrap(), a);
    }

    #[test]
    fn rejects_bad_input() {
        for (text, line) in [
            ("", 1),
            ("1 1\n1", 2),
            ("1 1\n1 \n", 2),
            ("1  1\n1\n", 1),
            ("1 1\nx\n", 2),
            ("2 1\n1\n", 3),
            ("1 2\n1\n", 2),
            ("1 1\n1\n0\n", 3),
            ("0 1\n", 1),
            ("1 1\r\n1\r\n", 1),
        ] {
            match parse_matrix(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
