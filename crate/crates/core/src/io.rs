//! Plain-text formats.
//!
//! Generator matrix: a header line `p n k h length dim`, then `dim` rows of
//! space-separated symbols in canonical column order.
//!
//! Point set: a header `# pointset n=<n> p=<p> h=<h>`, then one point index
//! per line, ascending.
//!
//! Vector list (subspace files): one coordinate vector per line, entries
//! space-separated; blank lines and lines starting with `#` are skipped.

use std::fmt::Write;

use crate::blocking::PointSet;
use crate::codes::{Alphabet, Code, CodeKind, CodeParams};
use crate::error::{Error, Result};
use crate::geometry::theta;

pub fn write_generator(code: &Code) -> String {
    let p = code.params();
    let mut s = format!("{} {} {} {} {} {}\n", p.p, p.n, p.k, p.h, code.length(), code.dim());
    for row in code.generator() {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numbers<T: std::str::FromStr>(line: &str, lineno: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(lineno, format!("'{t}' is not a number"))))
        .collect()
}

/// Reads a generator file; the rows are re-canonicalized to RREF.
pub fn read_generator(text: &str) -> Result<Code> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let h: Vec<usize> = numbers(head, 1)?;
    let [p, n, k, hh, length, dim] = h[..] else {
        return Err(parse_err(1, "header must be 'p n k h length dim'"));
    };
    let alpha = Alphabet::new(p as u32)?;
    let mut rows = Vec::with_capacity(dim);
    for (i, line) in lines {
        let row: Vec<u8> = numbers::<u32>(line, i + 1)?
            .into_iter()
            .map(|x| if x < p as u32 { Ok(x as u8) } else { Err(parse_err(i + 1, format!("symbol {x} not below p = {p}"))) })
            .collect::<Result<_>>()?;
        if row.len() != length {
            return Err(parse_err(i + 1, format!("row of length {} where {length} expected", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(parse_err(0, format!("{} rows where {dim} expected", rows.len())));
    }
    let params = CodeParams { n, k, p: p as u32, h: hh as u32 };
    let code = Code::from_rows(params, CodeKind::Custom, alpha, length, rows);
    if code.dim() != dim {
        return Err(parse_err(0, format!("rows have rank {} where {dim} expected", code.dim())));
    }
    Ok(code)
}

pub fn write_point_set(set: &PointSet, n: usize, p: u32, h: u32) -> String {
    let mut s = format!("# pointset n={n} p={p} h={h}\n");
    for i in set.points() {
        let _ = writeln!(s, "{i}");
    }
    s
}

/// Header parameters (n, p, h) and the point set.
pub fn read_point_set(text: &str) -> Result<(usize, u32, u32, PointSet)> {
    let mut lines = text.lines().enumerate();
    let (_, head) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let rest = head
        .trim()
        .strip_prefix("# pointset")
        .ok_or_else(|| parse_err(1, "header must start with '# pointset'"))?;
    let (mut n, mut p, mut h) = (None, None, None);
    for tok in rest.split_whitespace() {
        let (key, val) = tok.split_once('=').ok_or_else(|| parse_err(1, format!("bad field '{tok}'")))?;
        let v: u64 = val.parse().map_err(|_| parse_err(1, format!("bad value '{val}'")))?;
        match key {
            "n" => n = Some(v as usize),
            "p" => p = Some(v as u32),
            "h" => h = Some(v as u32),
            _ => return Err(parse_err(1, format!("unknown field '{key}'"))),
        }
    }
    let (Some(n), Some(p), Some(h)) = (n, p, h) else {
        return Err(parse_err(1, "header needs n, p and h"));
    };
    let q = (p as u64).checked_pow(h).ok_or_else(|| parse_err(1, "p^h overflows"))?;
    let total = theta(n as i64, q) as usize;
    let mut pts = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        pts.push(line.parse::<usize>().map_err(|_| parse_err(i + 1, format!("'{line}' is not an index")))?);
    }
    Ok((n, p, h, PointSet::new(pts, total)?))
}

pub fn read_vectors(text: &str) -> Result<Vec<Vec<u32>>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = numbers(line, i + 1)?;
        if out.first().is_some_and(|f| f.len() != v.len()) {
            return Err(parse_err(i + 1, "vectors of different lengths"));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn write_vectors(rows: &[Vec<u32>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}
