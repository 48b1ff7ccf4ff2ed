//! The committed coefficient table.
//!
//! `data/coefficients.txt` is a plain-text artifact. Every block has the form
//!
//! ```text
//! fn <family> <index> <kind> <k>
//! c <i> <j> <l> <p/q>
//! ...
//! end
//! ```
//!
//! With kind `xs` the block is `Σ c x^i α^j β^l / sin^k θ` with `x = cos θ`;
//! with kind `th` it is the Taylor series `Σ c θ^i α^j β^l`; with kind `rho`
//! it is the polynomial `Σ c ρ^i`. The header carries `format 1` and the
//! SHA-256 of everything after the `sha256` line.
//!
//! Families: `elem.u`, `elem.v`, `elem.m`, `elem.n`, `elem.theta`,
//! `bessel.S`, `bessel.T`, `bessel.theta`, `gfront.C`.

use crate::error::{Error, Result};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::sync::OnceLock;

const ARTIFACT: &str = include_str!("../data/coefficients.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Xs,
    Theta,
    Rho,
}

/// One coefficient function with its terms `(i, j, l, value)`.
#[derive(Debug, Clone)]
pub struct Block {
    pub kind: Kind,
    pub k: i32,
    pub terms: Vec<(u32, u32, u32, f64)>,
    // terms grouped by the monomial α^j β^l: (j, l, range into `packed`)
    groups: Vec<(usize, usize, std::ops::Range<usize>)>,
    packed: Vec<(usize, f64)>,
    degree: usize,
    jmax: usize,
    lmax: usize,
}

/// Parsed artifact.
#[derive(Debug)]
pub struct CoefficientTable {
    pub hash: String,
    pub format: u32,
    blocks: BTreeMap<(String, usize), Block>,
}

impl CoefficientTable {
    /// Parses and verifies an artifact.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, msg: &str| Error::Table {
            line,
            msg: msg.to_string(),
        };
        let mut format = None;
        let mut hash = None;
        let mut blocks = BTreeMap::new();
        let mut current: Option<((String, usize), Block)> = None;
        let mut offset = 0usize;
        for (no, line) in text.split_inclusive('\n').enumerate() {
            let lineno = no + 1;
            offset += line.len();
            let line = line.trim_end_matches('\n');
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            let mut it = line.split_ascii_whitespace();
            match it.next() {
                Some("format") => {
                    let v = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err(lineno, "bad format line"))?;
                    format = Some(v);
                }
                Some("sha256") => {
                    let want = it.next().ok_or_else(|| err(lineno, "missing digest"))?;
                    let got = hex(&Sha256::digest(&text.as_bytes()[offset..]));
                    if got != want {
                        return Err(err(
                            lineno,
                            &format!("hash mismatch: content hashes to {got}"),
                        ));
                    }
                    hash = Some(want.to_string());
                }
                Some("fn") => {
                    if current.is_some() {
                        return Err(err(lineno, "nested fn block"));
                    }
                    let fam = it.next().ok_or_else(|| err(lineno, "missing family"))?;
                    let idx = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err(lineno, "bad index"))?;
                    let kind = match it.next() {
                        Some("xs") => Kind::Xs,
                        Some("th") => Kind::Theta,
                        Some("rho") => Kind::Rho,
                        _ => return Err(err(lineno, "bad kind")),
                    };
                    let k = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err(lineno, "bad power"))?;
                    current = Some(((fam.to_string(), idx), Block::new(kind, k)));
                }
                Some("c") => {
                    let block = &mut current
                        .as_mut()
                        .ok_or_else(|| err(lineno, "term outside block"))?
                        .1;
                    let mut e = [0u32; 3];
                    for slot in &mut e {
                        *slot = it
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| err(lineno, "bad exponent"))?;
                    }
                    let v = it
                        .next()
                        .and_then(parse_rational)
                        .ok_or_else(|| err(lineno, "bad value"))?;
                    block.terms.push((e[0], e[1], e[2], v));
                }
                Some("end") => {
                    let (key, mut block) = current
                        .take()
                        .ok_or_else(|| err(lineno, "end without fn"))?;
                    block.pack();
                    blocks.insert(key, block);
                }
                _ => return Err(err(lineno, "unknown directive")),
            }
        }
        if current.is_some() {
            return Err(err(0, "unterminated block"));
        }
        let format = format.ok_or_else(|| err(0, "missing format line"))?;
        if format != 1 {
            return Err(err(0, "unsupported format"));
        }
        let hash = hash.ok_or_else(|| err(0, "missing sha256 line"))?;
        Ok(Self {
            hash,
            format,
            blocks,
        })
    }

    pub fn get(&self, family: &str, index: usize) -> Option<&Block> {
        self.blocks.get(&(family.to_string(), index))
    }

    /// Number of consecutive members `start, start + step, …` present.
    pub fn count(&self, family: &str, start: usize, step: usize) -> usize {
        (0..)
            .take_while(|i| self.get(family, start + i * step).is_some())
            .count()
    }
}

fn parse_rational(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((p, q)) => Some(p.parse::<f64>().ok()? / q.parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// The compiled-in table.
pub fn table() -> &'static CoefficientTable {
    static TABLE: OnceLock<CoefficientTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        CoefficientTable::parse(ARTIFACT).expect("compiled-in coefficient table is valid")
    })
}

/// SHA-256 of the compiled-in table, as recorded in its header.
pub fn artifact_hash() -> &'static str {
    &table().hash
}

fn powers(v: f64, n: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        p.push(acc);
        acc *= v;
    }
    p
}

/// `P(x) / sin^k θ` with `P` a numeric polynomial in `x`.
#[derive(Debug, Clone, Default)]
pub struct XsPoly {
    pub k: i32,
    pub c: Vec<f64>,
}

impl XsPoly {
    #[inline]
    pub fn eval(&self, x: f64, inv_s: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc * inv_s.powi(self.k)
    }
}

/// Taylor polynomial in one variable.
#[derive(Debug, Clone, Default)]
pub struct Series {
    pub c: Vec<f64>,
}

impl Series {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.c.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Series {
        Series {
            c: self
                .c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect(),
        }
    }

    /// Multiplies by `t^shift` (negative shifts drop the low coefficients).
    pub fn shift(&self, shift: i32) -> Series {
        let c = if shift >= 0 {
            std::iter::repeat(0.0)
                .take(shift as usize)
                .chain(self.c.iter().copied())
                .collect()
        } else {
            self.c.iter().skip((-shift) as usize).copied().collect()
        };
        Series { c }
    }

    pub fn axpy(&self, a: f64, other: &Series) -> Series {
        let n = self.c.len().max(other.c.len());
        Series {
            c: (0..n)
                .map(|i| {
                    self.c.get(i).copied().unwrap_or(0.0)
                        + a * other.c.get(i).copied().unwrap_or(0.0)
                })
                .collect(),
        }
    }

    pub fn scale(&self, a: f64) -> Series {
        Series {
            c: self.c.iter().map(|c| a * c).collect(),
        }
    }
}

impl Block {
    fn new(kind: Kind, k: i32) -> Self {
        Self {
            kind,
            k,
            terms: Vec::new(),
            groups: Vec::new(),
            packed: Vec::new(),
            degree: 0,
            jmax: 0,
            lmax: 0,
        }
    }

    fn pack(&mut self) {
        let mut sorted = self.terms.clone();
        sorted.sort_by_key(|t| (t.1, t.2, t.0));
        self.packed = sorted.iter().map(|t| (t.0 as usize, t.3)).collect();
        self.groups.clear();
        let mut start = 0;
        for i in 1..=sorted.len() {
            if i == sorted.len() || (sorted[i].1, sorted[i].2) != (sorted[start].1, sorted[start].2)
            {
                self.groups
                    .push((sorted[start].1 as usize, sorted[start].2 as usize, start..i));
                start = i;
            }
        }
        self.degree = self.terms.iter().map(|t| t.0 as usize).max().unwrap_or(0);
        self.jmax = self.terms.iter().map(|t| t.1 as usize).max().unwrap_or(0);
        self.lmax = self.terms.iter().map(|t| t.2 as usize).max().unwrap_or(0);
    }

    fn collapse_coeffs(&self, alpha: f64, beta: f64) -> Vec<f64> {
        let (pa, pb) = (powers(alpha, self.jmax), powers(beta, self.lmax));
        let mut c = vec![0.0; self.degree + 1];
        for (j, l, range) in &self.groups {
            let m = pa[*j] * pb[*l];
            for &(i, v) in &self.packed[range.clone()] {
                c[i] += v * m;
            }
        }
        c
    }

    /// Numeric form for fixed `α, β` of an `xs` block.
    pub fn xs(&self, alpha: f64, beta: f64) -> XsPoly {
        debug_assert_eq!(self.kind, Kind::Xs);
        XsPoly {
            k: self.k,
            c: self.collapse_coeffs(alpha, beta),
        }
    }

    /// Numeric form for fixed `α, β` of a `th` or `rho` block.
    pub fn series(&self, alpha: f64, beta: f64) -> Series {
        debug_assert_ne!(self.kind, Kind::Xs);
        Series {
            c: self.collapse_coeffs(alpha, beta),
        }
    }
}

/// Collapses family members `start, start + step, …` (at most `count`).
pub(crate) fn xs_family(
    family: &str,
    start: usize,
    step: usize,
    count: usize,
    alpha: f64,
    beta: f64,
) -> Vec<XsPoly> {
    let t = table();
    (0..count)
        .map_while(|i| t.get(family, start + i * step))
        .map(|b| b.xs(alpha, beta))
        .collect()
}

pub(crate) fn series_family(
    family: &str,
    start: usize,
    count: usize,
    alpha: f64,
    beta: f64,
) -> Vec<Series> {
    let t = table();
    (0..count)
        .map_while(|i| t.get(family, start + i))
        .map(|b| b.series(alpha, beta))
        .collect()
}
