//! Upper bounds on multiply constant-weight codes.
//!
//! A multiply constant-weight specification prescribes, for each of `t`
//! coordinate blocks, the block length `n_i` and the exact number of ones
//! `w_i` a codeword carries there, together with a minimum distance `d`.
//! The engine derives upper bounds on the maximum code size by a small
//! calculus of rewriting rules (normalisation symmetries, exact base cases,
//! block merging and two Johnson-style block reductions), backed by
//! ingested tables and the constant-weight linear program at one block.

mod engine;
mod tables;

pub use engine::{BoundEngine, BoundRecord, BoundRule};
pub use tables::{ingest_table, ingest_table_str, Table, TableError, TableKind};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A multiply constant-weight specification `{(w_i, n_i)} @ d`.
///
/// Canonical form (after [`normalize`]): `d` even, every `w_i >= 1`,
/// `2 w_i <= n_i`, pairs sorted descending by `(n_i, w_i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct McwSpec {
    pub pairs: Vec<(usize, usize)>,
    pub d: usize,
}

impl McwSpec {
    pub fn new(pairs: Vec<(usize, usize)>, d: usize) -> Self {
        McwSpec { pairs, d }
    }

    pub fn total_length(&self) -> usize {
        self.pairs.iter().map(|p| p.1).sum()
    }

    pub fn total_weight(&self) -> usize {
        self.pairs.iter().map(|p| p.0).sum()
    }

    pub fn blocks(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_canonical(&self) -> bool {
        matches!(normalize(self), Ok(ref c) if c == self)
    }
}

impl fmt::Display for McwSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (w, n)) in self.pairs.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}:{n}")?;
        }
        write!(f, "@{}", self.d)
    }
}

impl FromStr for McwSpec {
    type Err = SpecParseError;

    /// Parse the `w1:n1,w2:n2,...@d` syntax.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (body, d) = s
            .split_once('@')
            .ok_or_else(|| SpecParseError(s.to_string()))?;
        let d: usize = d.trim().parse().map_err(|_| SpecParseError(s.to_string()))?;
        let mut pairs = Vec::new();
        for part in body.split(',') {
            let (w, n) = part
                .split_once(':')
                .ok_or_else(|| SpecParseError(s.to_string()))?;
            let w = w.trim().parse().map_err(|_| SpecParseError(s.to_string()))?;
            let n = n.trim().parse().map_err(|_| SpecParseError(s.to_string()))?;
            pairs.push((w, n));
        }
        if pairs.is_empty() || d == 0 {
            return Err(SpecParseError(s.to_string()));
        }
        Ok(McwSpec { pairs, d })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse multiply constant-weight spec {0:?} (expected w1:n1,w2:n2@d)")]
pub struct SpecParseError(pub String);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalizeError {
    /// Every pair vanished; the only admissible word is all-zero and the
    /// bound is 1.
    #[error("all pairs removed by normalisation")]
    EmptySpec,
}

/// Canonicalise a specification using the invariance rules:
/// odd `d` increments to `d+1`, zero-weight blocks drop out, weights above
/// half the block length complement, and pairs sort descending. Idempotent.
pub fn normalize(spec: &McwSpec) -> Result<McwSpec, NormalizeError> {
    let d = if spec.d % 2 == 1 { spec.d + 1 } else { spec.d };
    let mut pairs: Vec<(usize, usize)> = spec
        .pairs
        .iter()
        .map(|&(w, n)| {
            assert!(n >= 1 && w <= n, "pair ({w},{n}) out of range");
            if 2 * w > n {
                (n - w, n)
            } else {
                (w, n)
            }
        })
        .filter(|&(w, _)| w > 0)
        .collect();
    if pairs.is_empty() {
        return Err(NormalizeError::EmptySpec);
    }
    pairs.sort_by(|a, b| (b.1, b.0).cmp(&(a.1, a.0)));
    Ok(McwSpec { pairs, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(pairs: &[(usize, usize)], d: usize) -> McwSpec {
        McwSpec::new(pairs.to_vec(), d)
    }

    #[test]
    fn normalize_examples() {
        // Odd d bumps, zero-weight pair drops.
        let s = normalize(&spec(&[(1, 2), (0, 5)], 3)).unwrap();
        assert_eq!(s, spec(&[(1, 2)], 4));
        // Heavy weight complements.
        let s = normalize(&spec(&[(3, 4)], 4)).unwrap();
        assert_eq!(s, spec(&[(1, 4)], 4));
        // Full-weight block complements to zero and drops.
        assert_eq!(
            normalize(&spec(&[(4, 4)], 4)),
            Err(NormalizeError::EmptySpec)
        );
    }

    #[test]
    fn normalize_sorts_descending() {
        let s = normalize(&spec(&[(1, 3), (2, 5), (1, 5)], 4)).unwrap();
        assert_eq!(s.pairs, vec![(2, 5), (1, 5), (1, 3)]);
    }

    #[test]
    fn normalize_is_idempotent() {
        // Deterministic pseudo-random specs.
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = move |m: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % m
        };
        for _ in 0..1000 {
            let t = 1 + next(4) as usize;
            let pairs: Vec<(usize, usize)> = (0..t)
                .map(|_| {
                    let n = 1 + next(12) as usize;
                    let w = next(n as u64 + 1) as usize;
                    (w, n)
                })
                .collect();
            let d = 1 + next(10) as usize;
            let s = spec(&pairs, d);
            if let Ok(once) = normalize(&s) {
                let twice = normalize(&once).unwrap();
                assert_eq!(once, twice, "spec {s}");
                assert!(once.is_canonical());
            }
        }
    }

    #[test]
    fn display_parse_round_trip() {
        let s = spec(&[(2, 13), (3, 14)], 8);
        assert_eq!(s.to_string(), "2:13,3:14@8");
        assert_eq!("2:13,3:14@8".parse::<McwSpec>().unwrap(), s);
        assert!("13@8".parse::<McwSpec>().is_err());
        assert!("1:2".parse::<McwSpec>().is_err());
    }
}
