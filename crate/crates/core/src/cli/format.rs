//! The code file format.
//!
//! ```text
//! # the Z_4 code spanned by (1,0) and (0,2)
//! ring p=2 b=2 m=1
//! n 1
//! gen 1 0
//! gen 0 2
//! ```
//!
//! A `gen` line holds `2n` ring elements, the x half then the y half; an
//! element is `m` comma-separated residues in the basis `1, θ, …`. An
//! optional `h=c0,c1,…,1` pins the defining polynomial.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::code::{AdditiveCode, SymplecticVector};
use crate::error::{Error, Result};
use crate::galois::GaloisRing;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub p: u64,
    pub b: u32,
    pub m: usize,
    pub h: Option<Vec<u64>>,
    pub n: usize,
    /// `gens[i][j]` is the coordinate vector of element `j` of row `i`
    pub gens: Vec<Vec<Vec<u64>>>,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &content[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &content[s..],
            column: s + 1,
        });
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn number(text: &str, line: usize, column: usize) -> Result<u64> {
    text.parse::<u64>()
        .map_err(|_| parse_err(line, column, format!("expected a non-negative integer, found {text:?}")))
}

impl CodeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(u64, u32, usize, Option<Vec<u64>>)> = None;
        let mut n: Option<usize> = None;
        let mut gens = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let toks = tokens(raw);
            let Some(first) = toks.first() else { continue };
            match first.text {
                "ring" => {
                    if header.is_some() {
                        return Err(parse_err(line, first.column, "duplicate ring line"));
                    }
                    header = Some(parse_ring(&toks[1..], line, first.column)?);
                }
                "n" => {
                    if header.is_none() {
                        return Err(parse_err(line, first.column, "n before ring line"));
                    }
                    if n.is_some() {
                        return Err(parse_err(line, first.column, "duplicate n line"));
                    }
                    let [_, value] = toks.as_slice() else {
                        return Err(parse_err(line, first.column, "expected `n <count>`"));
                    };
                    let v = number(value.text, line, value.column)?;
                    n = Some(usize::try_from(v).map_err(|_| parse_err(line, value.column, "n too large"))?);
                }
                "gen" => {
                    let Some((p, b, m, _)) = &header else {
                        return Err(parse_err(line, first.column, "gen before ring line"));
                    };
                    let Some(n) = n else {
                        return Err(parse_err(line, first.column, "gen before n line"));
                    };
                    let q = p.checked_pow(*b).unwrap_or(u64::MAX);
                    let elems = &toks[1..];
                    if elems.len() != 2 * n {
                        let col = elems.get(2 * n).map_or(first.column, |t| t.column);
                        return Err(parse_err(
                            line,
                            col,
                            format!("expected {} elements, found {}", 2 * n, elems.len()),
                        ));
                    }
                    let mut row = Vec::with_capacity(2 * n);
                    for t in elems {
                        let mut coords = Vec::with_capacity(*m);
                        let mut offset = 0;
                        for part in t.text.split(',') {
                            let col = t.column + offset;
                            let v = number(part, line, col)?;
                            if v >= q {
                                return Err(Error::Range {
                                    line,
                                    column: col,
                                    value: v,
                                    bound: q,
                                });
                            }
                            coords.push(v);
                            offset += part.len() + 1;
                        }
                        if coords.len() != *m {
                            return Err(parse_err(
                                line,
                                t.column,
                                format!("expected {m} coordinates, found {}", coords.len()),
                            ));
                        }
                        row.push(coords);
                    }
                    gens.push(row);
                }
                other => {
                    return Err(parse_err(line, first.column, format!("unknown directive {other:?}")));
                }
            }
        }
        let Some((p, b, m, h)) = header else {
            return Err(parse_err(last_line.max(1), 1, "missing ring line"));
        };
        let Some(n) = n else {
            return Err(parse_err(last_line.max(1), 1, "missing n line"));
        };
        Ok(CodeFile { p, b, m, h, n, gens })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn ring(&self) -> Result<GaloisRing> {
        match &self.h {
            Some(h) => GaloisRing::with_h(self.p, self.b, self.m, h),
            None => GaloisRing::new(self.p, self.b, self.m),
        }
    }

    pub fn build(&self) -> Result<(Arc<GaloisRing>, AdditiveCode)> {
        let ring = Arc::new(self.ring()?);
        let mut rows = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            let flat = g
                .iter()
                .map(|c| ring.element(c))
                .collect::<Result<Vec<_>>>()?;
            rows.push(SymplecticVector::from_flat(flat));
        }
        let code = AdditiveCode::new(ring.clone(), self.n, rows)?;
        Ok((ring, code))
    }

    /// The file for a code, with the ring's `h` pinned.
    pub fn from_code(code: &AdditiveCode) -> Self {
        let ring = code.ring();
        CodeFile {
            p: ring.p(),
            b: ring.b(),
            m: ring.m(),
            h: Some(ring.h().to_vec()),
            n: code.n(),
            gens: code
                .generators()
                .iter()
                .map(|g| g.to_flat().iter().map(|e| e.coeffs().to_vec()).collect())
                .collect(),
        }
    }

    /// Canonical text: one space between tokens, no comments, `h` echoed.
    pub fn to_canonical(&self) -> Result<String> {
        let ring = self.ring()?;
        let mut s = String::new();
        let h: Vec<String> = ring.h().iter().map(u64::to_string).collect();
        writeln!(s, "ring p={} b={} m={} h={}", self.p, self.b, self.m, h.join(",")).unwrap();
        writeln!(s, "n {}", self.n).unwrap();
        for g in &self.gens {
            s.push_str("gen");
            for e in g {
                s.push(' ');
                s.push_str(&join_coords(e));
            }
            s.push('\n');
        }
        Ok(s)
    }
}

pub fn join_coords(c: &[u64]) -> String {
    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn parse_ring(toks: &[Token<'_>], line: usize, col: usize) -> Result<(u64, u32, usize, Option<Vec<u64>>)> {
    let (mut p, mut b, mut m, mut h) = (None, None, None, None);
    for t in toks {
        let Some((key, value)) = t.text.split_once('=') else {
            return Err(parse_err(line, t.column, format!("expected key=value, found {:?}", t.text)));
        };
        let vcol = t.column + key.len() + 1;
        let dup = || parse_err(line, t.column, format!("duplicate key {key}"));
        match key {
            "p" => {
                if p.replace(number(value, line, vcol)?).is_some() {
                    return Err(dup());
                }
            }
            "b" => {
                let v = number(value, line, vcol)?;
                let v = u32::try_from(v).map_err(|_| parse_err(line, vcol, "b too large"))?;
                if b.replace(v).is_some() {
                    return Err(dup());
                }
            }
            "m" => {
                let v = number(value, line, vcol)?;
                let v = usize::try_from(v).map_err(|_| parse_err(line, vcol, "m too large"))?;
                if m.replace(v).is_some() {
                    return Err(dup());
                }
            }
            "h" => {
                let mut coeffs = Vec::new();
                let mut offset = 0;
                for part in value.split(',') {
                    coeffs.push(number(part, line, vcol + offset)?);
                    offset += part.len() + 1;
                }
                if h.replace(coeffs).is_some() {
                    return Err(dup());
                }
            }
            other => return Err(parse_err(line, t.column, format!("unknown ring key {other:?}"))),
        }
    }
    let missing = |k: &str| parse_err(line, col, format!("ring line lacks {k}="));
    Ok((
        p.ok_or_else(|| missing("p"))?,
        b.ok_or_else(|| missing("b"))?,
        m.ok_or_else(|| missing("m"))?,
        h,
    ))
}

/// Parses and builds in one step.
pub fn parse_code_file(path: &Path) -> Result<(Arc<GaloisRing>, AdditiveCode)> {
    CodeFile::read(path)?.build()
}
