//! The recursive bound calculus with memoisation and a persistent cache.
//!
//! Every rule application strictly decreases `(total length, blocks)`
//! lexicographically, so the recursion terminates; the minimum over all
//! applicable rules is taken. Exact base cases return immediately since no
//! sound upper bound can undercut an exact size.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, div_floor_big};
use crate::lp::bound::cw_delsarte_lp_value;
use crate::lp::cw::TProvider;

use super::tables::Table;
use super::{normalize, McwSpec, NormalizeError};

/// Which rule produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundRule {
    /// `d <= 2`: the block shapes impose no interaction, exact product.
    BaseIv,
    /// `d = 2 sum w_i`: disjoint supports, exact floor minimum.
    BaseV,
    /// `2 sum w_i < d`: two distinct words cannot reach distance `d`.
    BaseVi,
    /// Merge two blocks into one.
    Merge16,
    /// Johnson-style reduction removing one one from a block.
    Reduce17,
    /// Johnson-style reduction removing one zero from a block.
    Reduce18,
    /// Ingested table entry.
    Table,
    /// Single-block linear programming bound.
    LpT1,
}

impl fmt::Display for BoundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundRule::BaseIv => "base-iv",
            BoundRule::BaseV => "base-v",
            BoundRule::BaseVi => "base-vi",
            BoundRule::Merge16 => "merge-16",
            BoundRule::Reduce17 => "reduce-17",
            BoundRule::Reduce18 => "reduce-18",
            BoundRule::Table => "table",
            BoundRule::LpT1 => "lp-t1",
        };
        write!(f, "{s}")
    }
}

impl FromStr for BoundRule {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "base-iv" => BoundRule::BaseIv,
            "base-v" => BoundRule::BaseV,
            "base-vi" => BoundRule::BaseVi,
            "merge-16" => BoundRule::Merge16,
            "reduce-17" => BoundRule::Reduce17,
            "reduce-18" => BoundRule::Reduce18,
            "table" => BoundRule::Table,
            "lp-t1" => BoundRule::LpT1,
            _ => return Err(()),
        })
    }
}

/// A cached upper bound with its derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRecord {
    pub spec: McwSpec,
    pub upper: BigInt,
    pub rule: BoundRule,
    /// `"table"` when the winning value came from an ingested table,
    /// otherwise `"derived"` (with a qualifier for the LP leaf).
    pub provenance: String,
    /// Direct sub-specifications the winning rule consumed.
    pub deps: Vec<McwSpec>,
}

/// Memoising bound engine over the rewriting rules, optionally backed by
/// ingested tables.
pub struct BoundEngine {
    dcw: Option<Table>,
    dbw: Option<Table>,
    /// Derive bounded-weight caps by splitting on the exact weight of the
    /// bounded block when no table entry exists.
    split_bounded: bool,
    memo: RwLock<HashMap<McwSpec, BoundRecord>>,
}

impl Default for BoundEngine {
    fn default() -> Self {
        BoundEngine::new(None, None)
    }
}

impl BoundEngine {
    pub fn new(dcw: Option<Table>, dbw: Option<Table>) -> Self {
        BoundEngine {
            dcw,
            dbw,
            split_bounded: false,
            memo: RwLock::new(HashMap::new()),
        }
    }

    /// Enable the weight-splitting fallback for bounded-weight caps: a code
    /// with at most `w1` ones on the first block is the disjoint union of
    /// its exact-weight classes, so the class bounds add up.
    pub fn with_bounded_split(mut self) -> Self {
        self.split_bounded = true;
        self
    }

    /// Upper bound on the maximum code size of `spec`, with derivation.
    pub fn upper_bound(&self, spec: &McwSpec) -> BoundRecord {
        match normalize(spec) {
            Ok(canonical) => self.eval(&canonical),
            Err(NormalizeError::EmptySpec) => BoundRecord {
                spec: McwSpec::new(Vec::new(), spec.d + spec.d % 2),
                upper: BigInt::one(),
                rule: BoundRule::BaseVi,
                provenance: "derived".into(),
                deps: Vec::new(),
            },
        }
    }

    fn eval(&self, spec: &McwSpec) -> BoundRecord {
        if let Some(hit) = self.memo.read().unwrap().get(spec) {
            return hit.clone();
        }
        let record = self.compute(spec);
        self.memo
            .write()
            .unwrap()
            .entry(spec.clone())
            .or_insert_with(|| record.clone());
        record
    }

    fn compute(&self, spec: &McwSpec) -> BoundRecord {
        debug_assert!(spec.is_canonical(), "engine requires canonical specs");
        let make = |upper: BigInt, rule: BoundRule, deps: Vec<McwSpec>| BoundRecord {
            spec: spec.clone(),
            upper,
            rule,
            provenance: if rule == BoundRule::Table {
                "table".into()
            } else if rule == BoundRule::LpT1 {
                "derived (lp)".into()
            } else {
                "derived".into()
            },
            deps,
        };

        let total_weight = spec.total_weight();
        // Exact bases: nothing sound can undercut them.
        if spec.d <= 2 {
            let prod = spec
                .pairs
                .iter()
                .map(|&(w, n)| binomial(n as i64, w as i64))
                .product();
            return make(prod, BoundRule::BaseIv, vec![]);
        }
        if 2 * total_weight < spec.d {
            return make(BigInt::one(), BoundRule::BaseVi, vec![]);
        }
        if 2 * total_weight == spec.d {
            let m = spec
                .pairs
                .iter()
                .map(|&(w, n)| BigInt::from((n / w) as u64))
                .min()
                .unwrap();
            return make(m, BoundRule::BaseV, vec![]);
        }

        let mut best: Option<BoundRecord> = None;
        let mut offer = |cand: BoundRecord| {
            let better = match &best {
                None => true,
                Some(b) => cand.upper < b.upper,
            };
            if better {
                best = Some(cand);
            }
        };

        // Ingested table entries exist for one- and two-block keys.
        if spec.blocks() <= 2 {
            if let Some(v) = self.dcw.as_ref().and_then(|t| t.lookup(spec)) {
                offer(make(v.clone(), BoundRule::Table, vec![]));
            }
        }

        // Single-block linear programming bound.
        if spec.blocks() == 1 {
            let (w, n) = spec.pairs[0];
            if let Some(value) = cw_delsarte_lp_value(n, spec.d, w) {
                offer(make(
                    value.floor().to_integer(),
                    BoundRule::LpT1,
                    vec![],
                ));
            }
        }

        // Merge any two blocks.
        if spec.blocks() >= 2 {
            for a in 0..spec.blocks() {
                for b in a + 1..spec.blocks() {
                    let mut pairs = spec.pairs.clone();
                    let (wb, nb) = pairs.remove(b);
                    let (wa, na) = pairs.remove(a);
                    pairs.push((wa + wb, na + nb));
                    let child = self.child_bound(pairs, spec.d);
                    let (upper, deps) = child;
                    offer(make(upper, BoundRule::Merge16, deps));
                }
            }
        }

        // Johnson reductions on each block.
        for idx in 0..spec.blocks() {
            let (w, n) = spec.pairs[idx];
            // remove a one: scale n/w
            {
                let mut pairs = spec.pairs.clone();
                pairs[idx] = (w - 1, n - 1);
                let (sub, deps) = self.child_bound(pairs, spec.d);
                let val = div_floor_big(&(BigInt::from(n as u64) * sub), &BigInt::from(w as u64));
                offer(make(val, BoundRule::Reduce17, deps));
            }
            // remove a zero: scale n/(n-w)
            {
                let mut pairs = spec.pairs.clone();
                pairs[idx] = (w, n - 1);
                let (sub, deps) = self.child_bound(pairs, spec.d);
                let val = div_floor_big(
                    &(BigInt::from(n as u64) * sub),
                    &BigInt::from((n - w) as u64),
                );
                offer(make(val, BoundRule::Reduce18, deps));
            }
        }

        best.expect("at least one reduction applies to every non-base spec")
    }

    fn child_bound(&self, pairs: Vec<(usize, usize)>, d: usize) -> (BigInt, Vec<McwSpec>) {
        match normalize(&McwSpec::new(pairs, d)) {
            Ok(child) => {
                let rec = self.eval(&child);
                (rec.upper, vec![child])
            }
            Err(NormalizeError::EmptySpec) => (BigInt::one(), vec![]),
        }
    }

    /// Render the derivation chain of a (previously computed) spec.
    pub fn derivation_chain(&self, spec: &McwSpec) -> Vec<String> {
        let memo = self.memo.read().unwrap();
        let mut out = Vec::new();
        let mut stack = vec![normalize(spec).ok()];
        let mut seen = std::collections::BTreeSet::new();
        while let Some(top) = stack.pop() {
            let Some(cur) = top else {
                continue;
            };
            if !seen.insert(cur.clone()) {
                continue;
            }
            if let Some(rec) = memo.get(&cur) {
                let deps = rec
                    .deps
                    .iter()
                    .map(|dd| dd.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                if deps.is_empty() {
                    out.push(format!("{} <= {}  [{}]", cur, rec.upper, rec.rule));
                } else {
                    out.push(format!("{} <= {}  [{} from {}]", cur, rec.upper, rec.rule, deps));
                }
                for dep in &rec.deps {
                    stack.push(Some(dep.clone()));
                }
            }
        }
        out
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    /// Snapshot of all memoised records, sorted by spec.
    pub fn records(&self) -> Vec<BoundRecord> {
        let memo = self.memo.read().unwrap();
        let mut out: Vec<BoundRecord> = memo.values().cloned().collect();
        out.sort_by(|a, b| a.spec.cmp(&b.spec));
        out
    }

    /// Render the one- and two-block memo entries as a table CSV, suitable
    /// for feeding back through `--tables`.
    pub fn export_dcw_csv(&self) -> String {
        let mut out = String::from("w1,n1,w2,n2,d,upper\n");
        for rec in self.records() {
            let row = match rec.spec.pairs.as_slice() {
                [(w1, n1)] => format!("{w1},{n1},0,0,{},{}\n", rec.spec.d, rec.upper),
                [(w1, n1), (w2, n2)] => {
                    format!("{w1},{n1},{w2},{n2},{},{}\n", rec.spec.d, rec.upper)
                }
                _ => continue,
            };
            out.push_str(&row);
        }
        out
    }

    /// Load previously computed records; unparsable files are ignored with
    /// a warning so a corrupt cache never blocks a run.
    pub fn load_cache(&self, path: &Path) {
        let Ok(text) = std::fs::read_to_string(path) else {
            return;
        };
        let entries: Vec<CacheEntry> = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(err) => {
                log::warn!("ignoring unreadable cache {}: {err}", path.display());
                return;
            }
        };
        let mut memo = self.memo.write().unwrap();
        for e in entries {
            if let Some(rec) = e.into_record() {
                memo.insert(rec.spec.clone(), rec);
            }
        }
    }

    /// Persist the memo atomically (write to a temporary file, then rename).
    pub fn save_cache(&self, path: &Path) -> std::io::Result<()> {
        let memo = self.memo.read().unwrap();
        let mut entries: Vec<CacheEntry> = memo.values().map(CacheEntry::from_record).collect();
        entries.sort_by(|a, b| a.spec.cmp(&b.spec));
        let text = serde_json::to_string_pretty(&entries)?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, path)
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    spec: String,
    upper: String,
    rule: String,
    provenance: String,
    deps: Vec<String>,
}

impl CacheEntry {
    fn from_record(r: &BoundRecord) -> Self {
        CacheEntry {
            spec: r.spec.to_string(),
            upper: r.upper.to_string(),
            rule: r.rule.to_string(),
            provenance: r.provenance.clone(),
            deps: r.deps.iter().map(|d| d.to_string()).collect(),
        }
    }

    fn into_record(self) -> Option<BoundRecord> {
        Some(BoundRecord {
            spec: self.spec.parse().ok()?,
            upper: self.upper.parse().ok()?,
            rule: self.rule.parse().ok()?,
            provenance: self.provenance,
            deps: self
                .deps
                .into_iter()
                .map(|d| d.parse().ok())
                .collect::<Option<Vec<_>>>()?,
        })
    }
}

impl TProvider for BoundEngine {
    fn t2(&self, w1: usize, n1: usize, w2: usize, n2: usize, d: usize) -> BigInt {
        let pairs: Vec<(usize, usize)> = [(w1, n1), (w2, n2)]
            .into_iter()
            .filter(|&(_, n)| n > 0)
            .collect();
        self.upper_bound(&McwSpec::new(pairs, d)).upper
    }

    fn t4(&self, blocks: [(usize, usize); 4], d: usize) -> BigInt {
        let pairs: Vec<(usize, usize)> = blocks.into_iter().filter(|&(_, n)| n > 0).collect();
        self.upper_bound(&McwSpec::new(pairs, d)).upper
    }

    fn awd(&self, n: usize, d: usize, w: usize) -> BigInt {
        self.upper_bound(&McwSpec::new(vec![(w, n)], d)).upper
    }

    fn tprime(&self, w1: usize, n1: usize, w2: usize, n2: usize, d: usize) -> Option<BigInt> {
        if let Some(v) = self
            .dbw
            .as_ref()
            .and_then(|t| t.lookup_dbw(w1, n1, w2, n2, d).cloned())
        {
            return Some(v);
        }
        if !self.split_bounded {
            return None;
        }
        let total = w1 + w2;
        let mut sum = BigInt::from(0u32);
        for u in 0..=w1.min(n1) {
            if total < u || total - u > n2 {
                continue;
            }
            let pairs: Vec<(usize, usize)> = [(u, n1), (total - u, n2)]
                .into_iter()
                .filter(|&(_, n)| n > 0)
                .collect();
            if pairs.iter().any(|&(w, n)| w > n) {
                continue;
            }
            sum += self.upper_bound(&McwSpec::new(pairs, d)).upper;
        }
        if sum.is_zero() {
            None
        } else {
            Some(sum)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(pairs: &[(usize, usize)], d: usize) -> McwSpec {
        McwSpec::new(pairs.to_vec(), d)
    }

    #[test]
    fn base_rules() {
        let e = BoundEngine::default();
        // d = 2 sum w: disjoint-support minimum.
        let r = e.upper_bound(&spec(&[(1, 2), (1, 2)], 4));
        assert_eq!(r.upper, BigInt::from(2));
        assert_eq!(r.rule, BoundRule::BaseV);
        // 2 sum w < d: singleton.
        let r = e.upper_bound(&spec(&[(1, 3), (1, 3)], 6));
        assert_eq!(r.upper, BigInt::one());
        assert_eq!(r.rule, BoundRule::BaseVi);
        // d <= 2: product of binomials.
        let r = e.upper_bound(&spec(&[(1, 3), (2, 4)], 2));
        assert_eq!(r.upper, BigInt::from(18));
        assert_eq!(r.rule, BoundRule::BaseIv);
    }

    #[test]
    fn empty_spec_is_one() {
        let e = BoundEngine::default();
        let r = e.upper_bound(&spec(&[(0, 5), (0, 3)], 3));
        assert_eq!(r.upper, BigInt::one());
        assert_eq!(r.rule, BoundRule::BaseVi);
    }

    #[test]
    fn worked_two_block_bound() {
        // The engine reproduces the hand-derivable cap of 26.
        let e = BoundEngine::default();
        let r = e.upper_bound(&spec(&[(2, 13), (3, 14)], 8));
        assert!(r.upper <= BigInt::from(26), "got {}", r.upper);
        assert!(r.upper >= BigInt::one());
        let chain = e.derivation_chain(&spec(&[(2, 13), (3, 14)], 8));
        assert!(!chain.is_empty());
    }

    #[test]
    fn quoted_pair_caps() {
        let e = BoundEngine::default();
        assert!(e.t2(1, 13, 2, 14, 8) <= BigInt::from(1));
        assert!(e.t2(2, 12, 3, 12, 8) <= BigInt::from(20));
        assert!(e.t2(1, 11, 2, 11, 8) <= BigInt::from(1));
        assert!(e.t2(13, 13, 13, 14, 8) <= BigInt::from(1));
    }

    #[test]
    fn complement_invariance() {
        let e = BoundEngine::default();
        let a = e.upper_bound(&spec(&[(2, 7), (3, 9)], 6));
        let b = e.upper_bound(&spec(&[(5, 7), (6, 9)], 6));
        assert_eq!(a.upper, b.upper);
    }

    #[test]
    fn monotone_in_d() {
        let e = BoundEngine::default();
        let mut prev: Option<BigInt> = None;
        for d in [2usize, 4, 6, 8, 10] {
            let r = e.upper_bound(&spec(&[(3, 8), (2, 6)], d));
            if let Some(p) = prev {
                assert!(r.upper <= p, "d={d}");
            }
            prev = Some(r.upper);
        }
    }

    #[test]
    fn table_entry_wins_and_is_flagged() {
        let csv = "w1,n1,w2,n2,d,upper\n2,13,3,14,8,5\n";
        let table = super::super::tables::ingest_table_str(csv, super::super::TableKind::Dcw).unwrap();
        let e = BoundEngine::new(Some(table), None);
        let r = e.upper_bound(&spec(&[(2, 13), (3, 14)], 8));
        assert_eq!(r.upper, BigInt::from(5));
        assert_eq!(r.rule, BoundRule::Table);
        assert_eq!(r.provenance, "table");
    }

    #[test]
    fn cache_round_trip_is_bit_identical() {
        let dir = std::env::temp_dir().join("codebounds-cache-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tbounds.cache.json");
        let _ = std::fs::remove_file(&path);

        let e = BoundEngine::default();
        let s = spec(&[(2, 13), (3, 14)], 8);
        let cold = e.upper_bound(&s);
        e.save_cache(&path).unwrap();

        let warm_engine = BoundEngine::default();
        warm_engine.load_cache(&path);
        let before = warm_engine.memo_len();
        let warm = warm_engine.upper_bound(&s);
        assert_eq!(cold, warm);
        assert_eq!(warm_engine.memo_len(), before, "warm lookup must not recompute");
        std::fs::remove_file(&path).unwrap();
    }
}
