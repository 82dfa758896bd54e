//! Matrix templates: integer entries that may be affine in a single symbol
//! `d`, e.g. `"1 d"` or `"d+2 0 1 0; 0 1 0 d+2"`.

use std::fmt;
use std::str::FromStr;

use crate::lattice::SubstMatrix;
use crate::{Error, Result};

/// `a·d + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub a: i64,
    pub b: i64,
}

impl Affine {
    pub fn at(self, d: i64) -> Result<i64> {
        self.a
            .checked_mul(d)
            .and_then(|x| x.checked_add(self.b))
            .ok_or(Error::Overflow)
    }
}

fn parse_affine(tok: &str, pos: usize) -> Result<Affine> {
    let err = |m: &str| Error::Parse {
        pos,
        message: format!("{m} in template entry '{tok}'"),
    };
    let s: String = tok.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty entry"));
    }
    let (mut a, mut b) = (0i64, 0i64);
    // split into signed summands
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            parts.push(&s[start..i]);
            start = i;
        }
    }
    parts.push(&s[start..]);
    for part in parts {
        let (sign, body) = match part.as_bytes().first() {
            Some(b'-') => (-1i64, &part[1..]),
            Some(b'+') => (1, &part[1..]),
            _ => (1, part),
        };
        if body.is_empty() {
            return Err(err("dangling sign"));
        }
        let factors: Vec<&str> = body.split('*').collect();
        let mut coeff = sign;
        let mut has_d = false;
        for f in factors {
            if f == "d" {
                if has_d {
                    return Err(err("template must be affine in d"));
                }
                has_d = true;
            } else if let Some(num) = f.strip_suffix('d').filter(|n| !n.is_empty()) {
                // "2d"
                if has_d {
                    return Err(err("template must be affine in d"));
                }
                has_d = true;
                coeff = coeff
                    .checked_mul(num.parse::<i64>().map_err(|_| err("bad number"))?)
                    .ok_or(Error::Overflow)?;
            } else {
                let v: i64 = f.parse().map_err(|_| err("bad number"))?;
                coeff = coeff.checked_mul(v).ok_or(Error::Overflow)?;
            }
        }
        if has_d {
            a = a.checked_add(coeff).ok_or(Error::Overflow)?;
        } else {
            b = b.checked_add(coeff).ok_or(Error::Overflow)?;
        }
    }
    Ok(Affine { a, b })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixTemplate {
    source: String,
    rows: Vec<Vec<Affine>>,
}

impl MatrixTemplate {
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut offset = 0;
        for row in text.split(';') {
            let mut parsed = Vec::new();
            let mut cursor = 0;
            for tok in row.split(|c: char| c.is_whitespace() || c == ',') {
                let pos = offset + row[cursor..].find(tok).map_or(cursor, |p| p + cursor);
                cursor = (pos - offset) + tok.len();
                if !tok.is_empty() {
                    parsed.push(parse_affine(tok, pos)?);
                }
            }
            if parsed.is_empty() {
                return Err(Error::Parse {
                    pos: offset,
                    message: "empty matrix row".into(),
                });
            }
            rows.push(parsed);
            offset += row.len() + 1;
        }
        let n = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(MatrixTemplate {
            source: text.trim().to_string(),
            rows,
        })
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn entries_at(&self, d: i64) -> Result<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.at(d)).collect())
            .collect()
    }

    pub fn at(&self, d: i64) -> Result<SubstMatrix> {
        SubstMatrix::new(self.entries_at(d)?)
    }
}

impl FromStr for MatrixTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for MatrixTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}
