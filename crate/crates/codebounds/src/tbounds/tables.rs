//! CSV ingestion of external bound tables.
//!
//! Two kinds share one schema (`w1,n1,w2,n2,d,upper`): doubly-constant-
//! weight tables, whose keys canonicalise under the block symmetries, and
//! doubly-bounded-weight tables, whose first block is an at-most constraint
//! and therefore carries no complement symmetry.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use super::{normalize, McwSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// Doubly-constant-weight: exactly `w1` ones on the first block.
    Dcw,
    /// Doubly-bounded-weight: at most `w1` ones on the first block.
    Dbw,
}

/// An ingested table of integer upper bounds.
#[derive(Clone, Debug)]
pub struct Table {
    pub kind: TableKind,
    /// Constant-weight keys, canonicalised (1 or 2 blocks after
    /// normalisation; rows with a vanishing block shrink to one).
    pub dcw: BTreeMap<McwSpec, BigInt>,
    /// Bounded-weight keys, stored verbatim.
    pub dbw: BTreeMap<(usize, usize, usize, usize, usize), BigInt>,
}

impl Table {
    pub fn empty(kind: TableKind) -> Self {
        Table {
            kind,
            dcw: BTreeMap::new(),
            dbw: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.dcw.len() + self.dbw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Constant-weight lookup by canonical spec.
    pub fn lookup(&self, spec: &McwSpec) -> Option<&BigInt> {
        self.dcw.get(spec)
    }

    pub fn lookup_dbw(
        &self,
        w1: usize,
        n1: usize,
        w2: usize,
        n2: usize,
        d: usize,
    ) -> Option<&BigInt> {
        self.dbw.get(&(w1, n1, w2, n2, d))
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parse a table file. Duplicate keys keep the smaller bound (with a
/// warning); malformed rows abort with the offending line number.
pub fn ingest_table(path: &Path, kind: TableKind) -> Result<Table, TableError> {
    let text = std::fs::read_to_string(path)?;
    ingest_table_str(&text, kind)
}

pub fn ingest_table_str(text: &str, kind: TableKind) -> Result<Table, TableError> {
    let mut table = Table::empty(kind);
    let mut lines = text.lines().enumerate();

    let header = loop {
        match lines.next() {
            Some((no, l)) if l.trim().is_empty() => {
                let _ = no;
            }
            other => break other,
        }
    };
    match header {
        Some((no, l)) if l.trim() != "w1,n1,w2,n2,d,upper" => {
            return Err(TableError::Parse {
                line: no + 1,
                msg: format!("expected header 'w1,n1,w2,n2,d,upper', found {l:?}"),
            });
        }
        Some(_) => {}
        None => return Ok(table), // empty file: empty table
    }

    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(TableError::Parse {
                line: no + 1,
                msg: format!("expected 6 fields, found {}", fields.len()),
            });
        }
        let mut nums = [0i64; 5];
        for (slot, f) in nums.iter_mut().zip(&fields[..5]) {
            *slot = f.parse().map_err(|_| TableError::Parse {
                line: no + 1,
                msg: format!("bad integer {f:?}"),
            })?;
        }
        let upper: BigInt = fields[5].parse().map_err(|_| TableError::Parse {
            line: no + 1,
            msg: format!("bad integer {:?}", fields[5]),
        })?;
        let [w1, n1, w2, n2, d] = nums;
        if w1 < 0 || n1 < 1 || w1 > n1 || w2 < 0 || n2 < 0 || w2 > n2.max(0) || d < 1 {
            return Err(TableError::Parse {
                line: no + 1,
                msg: format!("row violates 0 <= w <= n, d >= 1: {line}"),
            });
        }
        if upper < BigInt::one() {
            return Err(TableError::Parse {
                line: no + 1,
                msg: format!("upper bound below 1: {line}"),
            });
        }
        let (w1, n1, w2, n2, d) = (w1 as usize, n1 as usize, w2 as usize, n2 as usize, d as usize);
        match kind {
            TableKind::Dcw => {
                let mut pairs = vec![(w1, n1)];
                if n2 > 0 {
                    pairs.push((w2, n2));
                }
                let Ok(key) = normalize(&McwSpec::new(pairs, d)) else {
                    continue; // all-zero weights: bound is trivial
                };
                insert_min(&mut table.dcw, key, upper, no + 1);
            }
            TableKind::Dbw => {
                insert_min(&mut table.dbw, (w1, n1, w2, n2, d), upper, no + 1);
            }
        }
    }
    Ok(table)
}

fn insert_min<K: Ord + std::fmt::Debug>(
    map: &mut BTreeMap<K, BigInt>,
    key: K,
    upper: BigInt,
    line: usize,
) {
    if let Some(existing) = map.get_mut(&key) {
        log::warn!("line {line}: duplicate key {key:?}; keeping the smaller bound");
        if upper < *existing {
            *existing = upper;
        }
    } else {
        map.insert(key, upper);
    }
}
