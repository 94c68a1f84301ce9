//! Text format for operation tables:
//!
//! ```text
//! # optional comment lines
//! ktq 3
//! 0 2 1
//! ...
//! ```
//!
//! The header is followed by the `n³` values of `T(i, j, k)` in lexicographic
//! order of `(i, j, k)`, separated by any whitespace. Output writes one line
//! per `(i, j)` pair.

use std::fmt::Write;

use super::{OpTable, MAX_ORDER};
use crate::error::{AlgebraError, ParseError};

pub fn parse_algebra(text: &str) -> Result<OpTable, ParseError> {
    let mut order: Option<(usize, usize)> = None;
    let mut values = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        last_line = line_no;
        let Some((n, _)) = order else {
            let mut parts = line.split_whitespace();
            if parts.next() != Some("ktq") {
                return Err(ParseError::new(line_no, "expected header `ktq <order>`"));
            }
            let n = parts
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| ParseError::new(line_no, "header is missing a valid order"))?;
            if parts.next().is_some() {
                return Err(ParseError::new(line_no, "unexpected text after the order"));
            }
            if n == 0 || n > MAX_ORDER {
                return Err(ParseError::new(line_no, AlgebraError::InvalidOrder(n).to_string()));
            }
            order = Some((n, line_no));
            continue;
        };
        for word in line.split_whitespace() {
            let v: usize = word
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("`{word}` is not a nonnegative integer")))?;
            if v >= n {
                return Err(ParseError::new(line_no, format!("entry {v} is out of range for order {n}")));
            }
            values.push(v as u8);
        }
    }
    let (n, _) = order.ok_or_else(|| ParseError::new(last_line.max(1), "missing header `ktq <order>`"))?;
    let expected = n * n * n;
    if values.len() != expected {
        return Err(ParseError::new(
            last_line,
            format!("expected {expected} table entries, found {}", values.len()),
        ));
    }
    OpTable::new(n, values).map_err(|e| ParseError::new(last_line, e.to_string()))
}

pub fn format_algebra(t: &OpTable) -> String {
    let n = t.order();
    let mut out = format!("ktq {n}\n");
    for row in t.values().chunks(n) {
        let line = row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "{line}").unwrap();
    }
    out
}
