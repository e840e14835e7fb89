//! Construction of the block-diagonalised semidefinite programs.
//!
//! The models maximise the code size over triple-statistics variables
//! subject to two families of positive-semidefinite matrices per block
//! index (the algebra blocks of the statistics themselves and of their
//! complementary counts), the structural conditions on the variables, and
//! any injected linear constraint families.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combin::{beta, binomial};
use crate::lp::cw::TProvider;
use crate::lp::{
    delsarte_constraints_cw, delsarte_constraints_unrestricted, mel_constraints,
    ConstraintTag, LinearConstraint, ParityMode, Relation,
};

use super::key::{
    canonical_key_cw, canonical_key_unrestricted, cw_orbits, enumerate_cw,
    enumerate_unrestricted, realizable_cw, realizable_unrestricted, unrestricted_orbits,
};
use super::VariableKey;

/// A linear form over variable indices with exact rational coefficients.
pub type LinForm = BTreeMap<usize, BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockLabel {
    /// Unrestricted algebra block `k`, statistics side.
    K(usize),
    /// Unrestricted algebra block `k`, complementary side.
    KComp(usize),
    /// Constant-weight algebra block `(k,l)`, statistics side.
    Kl(usize, usize),
    /// Constant-weight algebra block `(k,l)`, complementary side.
    KlComp(usize, usize),
}

/// One positive-semidefiniteness constraint: the symmetric matrix whose
/// `(r,c)` entry is the linear form `entries[r][c]` must be PSD.
#[derive(Clone, Debug)]
pub struct SdpBlock {
    pub label: BlockLabel,
    /// The distance values indexing rows and columns.
    pub index_set: Vec<usize>,
    pub entries: Vec<Vec<LinForm>>,
}

impl SdpBlock {
    pub fn dim(&self) -> usize {
        self.index_set.len()
    }

    /// Evaluate the block at an exact assignment, rounding once at the end.
    pub fn evaluate<F>(&self, mut value: F) -> nalgebra::DMatrix<f64>
    where
        F: FnMut(usize) -> BigRational,
    {
        use num_traits::ToPrimitive;
        let dim = self.dim();
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in r..dim {
                let exact: BigRational = self.entries[r][c]
                    .iter()
                    .map(|(ix, coeff)| coeff * value(*ix))
                    .sum();
                let x = exact.to_f64().unwrap_or(f64::NAN);
                m[(r, c)] = x;
                m[(c, r)] = x;
            }
        }
        m
    }
}

/// Value of a canonical variable on the exact triple statistics of a code.
pub fn stats_value(stats: &crate::oracle::TripleStats, key: &VariableKey) -> BigRational {
    match *key {
        VariableKey::Unrestricted { i, j, t } => stats.x(i as usize, j as usize, t as usize),
        VariableKey::Cw { .. } => panic!("constant-weight key against unrestricted statistics"),
    }
}

/// Constant-weight analogue of [`stats_value`].
pub fn stats_value_cw(stats: &crate::oracle::CwTripleStats, key: &VariableKey) -> BigRational {
    match *key {
        VariableKey::Cw { i, j, t, s } => {
            stats.y(i as usize, j as usize, t as usize, s as usize)
        }
        VariableKey::Unrestricted { .. } => {
            panic!("unrestricted key against constant-weight statistics")
        }
    }
}

/// Instance metadata recorded for reports.
#[derive(Clone, Debug)]
pub struct InstanceMeta {
    pub n: usize,
    pub d: usize,
    pub w: Option<usize>,
    pub families: Vec<String>,
}

/// A complete semidefinite program over canonical variables.
#[derive(Clone, Debug)]
pub struct SdpInstance {
    pub meta: InstanceMeta,
    pub variables: Vec<VariableKey>,
    /// Maximisation objective over variable indices.
    pub objective: LinForm,
    pub psd_blocks: Vec<SdpBlock>,
    pub linear_constraints: Vec<LinearConstraint>,
    /// Box constraints used for certified bound inflation; every variable
    /// of these models lies in `[0,1]`.
    pub var_box: Vec<(f64, f64)>,
}

impl SdpInstance {
    pub fn var_index(&self, key: &VariableKey) -> Option<usize> {
        self.variables.binary_search(key).ok()
    }

    /// Evaluate the objective on an assignment (for feasibility tests).
    pub fn objective_value<F>(&self, mut value: F) -> BigRational
    where
        F: FnMut(&VariableKey) -> BigRational,
    {
        self.objective
            .iter()
            .map(|(ix, c)| c * value(&self.variables[*ix]))
            .sum()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Options for the unrestricted builder. `even_reduction = None` applies
/// the even-distance reduction automatically for even `d`.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnrestrictedOptions {
    pub even_reduction: Option<bool>,
    pub t1: bool,
    pub cor2: bool,
    pub delsarte: bool,
    pub mel: bool,
}

impl UnrestrictedOptions {
    pub fn plus() -> Self {
        UnrestrictedOptions {
            even_reduction: None,
            t1: true,
            cor2: true,
            delsarte: true,
            mel: true,
        }
    }
}

/// Options for the constant-weight builder.
#[derive(Clone, Copy, Debug, Default)]
pub struct CwOptions {
    pub t6: bool,
    pub t7: bool,
    pub families_11_13: bool,
    pub t14: bool,
}

impl CwOptions {
    pub fn plus() -> Self {
        CwOptions {
            t6: true,
            t7: true,
            families_11_13: true,
            t14: true,
        }
    }
}

/// Memoised block-diagonalisation coefficients for one ambient length.
struct BetaCache {
    n: usize,
    memo: HashMap<(usize, usize, usize, usize), BigInt>,
}

impl BetaCache {
    fn new(n: usize) -> Self {
        BetaCache {
            n,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, t: usize, i: usize, j: usize, k: usize) -> &BigInt {
        let n = self.n;
        self.memo
            .entry((t, i, j, k))
            .or_insert_with(|| beta(t as i64, i as i64, j as i64, k as i64, n as i64))
    }
}

fn add_term(form: &mut LinForm, ix: usize, coeff: BigRational) {
    if coeff.is_zero() {
        return;
    }
    let slot = form.entry(ix).or_insert_with(BigRational::zero);
    *slot += coeff;
    if slot.is_zero() {
        form.remove(&ix);
    }
}

/// Re-express a `B`-space row over the declared variables, substituting
/// zero for structurally vanished entries.
fn inject(row: LinearConstraint, declared: &BTreeMap<VariableKey, usize>) -> LinearConstraint {
    let mut out = LinearConstraint::new(row.tag, row.relation);
    out.rhs = row.rhs;
    for (key, coeff) in row.coeffs {
        if declared.contains_key(&key) {
            out.add(key, coeff);
        }
    }
    out
}

/// Deduplicating row collector.
struct RowSet {
    rows: Vec<LinearConstraint>,
    seen: BTreeSet<String>,
}

impl RowSet {
    fn new() -> Self {
        RowSet {
            rows: Vec::new(),
            seen: BTreeSet::new(),
        }
    }

    fn push(&mut self, row: LinearConstraint) {
        if row.coeffs.is_empty() {
            // constant row: keep only if it is binding information
            return;
        }
        let sig = format!("{:?}{:?}{}", row.coeffs, row.relation, row.rhs);
        if self.seen.insert(sig) {
            self.rows.push(row);
        }
    }
}

/// Build the unrestricted `(n,d)` semidefinite program.
pub fn build_unrestricted(
    n: usize,
    d: usize,
    opts: UnrestrictedOptions,
    provider: Option<&dyn TProvider>,
) -> Result<SdpInstance, BuildError> {
    if n < 1 || n > 32 || d < 1 || d > n {
        return Err(BuildError::InvalidParams(format!(
            "need 1 <= d <= n <= 32, got n={n} d={d}"
        )));
    }
    let even_only = match opts.even_reduction {
        Some(flag) => {
            if flag && d % 2 != 0 {
                return Err(BuildError::InvalidParams(
                    "even-distance reduction needs even d".into(),
                ));
            }
            flag
        }
        None => d % 2 == 0,
    };
    if (opts.t1 || opts.cor2 || opts.mel) && provider.is_none() {
        return Err(BuildError::InvalidParams(
            "coefficient families need a bound provider".into(),
        ));
    }

    let variables = enumerate_unrestricted(n, d, even_only);
    let index: BTreeMap<VariableKey, usize> = variables
        .iter()
        .enumerate()
        .map(|(ix, k)| (*k, ix))
        .collect();
    let key_of = |i: usize, j: usize, t: usize| -> Option<usize> {
        canonical_key_unrestricted(i, j, t, n, d, even_only).map(|k| index[&k])
    };

    // PSD blocks for k = 0..=n/2, two per k.
    let mut betas = BetaCache::new(n);
    let mut psd_blocks = Vec::new();
    for k in 0..=n / 2 {
        let idx: Vec<usize> = (k..=n - k).filter(|i| !even_only || i % 2 == 0).collect();
        let dim = idx.len();
        let mut stat = vec![vec![LinForm::new(); dim]; dim];
        let mut comp = vec![vec![LinForm::new(); dim]; dim];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate().skip(r) {
                let mut sf = LinForm::new();
                let mut cf = LinForm::new();
                for t in 0..=i.min(j) {
                    if !realizable_unrestricted(i, j, t, n) {
                        continue;
                    }
                    let b = BigRational::from(betas.get(t, i, j, k).clone());
                    if b.is_zero() {
                        continue;
                    }
                    if let Some(ix) = key_of(i, j, t) {
                        add_term(&mut sf, ix, b.clone());
                        add_term(&mut cf, ix, -b.clone());
                    }
                    if let Some(ix) = key_of(i + j - 2 * t, 0, 0) {
                        add_term(&mut cf, ix, b);
                    }
                }
                stat[r][c] = sf.clone();
                stat[c][r] = sf;
                comp[r][c] = cf.clone();
                comp[c][r] = cf;
            }
        }
        psd_blocks.push(SdpBlock {
            label: BlockLabel::K(k),
            index_set: idx.clone(),
            entries: stat,
        });
        psd_blocks.push(SdpBlock {
            label: BlockLabel::KComp(k),
            index_set: idx,
            entries: comp,
        });
    }

    // Linear constraints.
    let mut rows = RowSet::new();
    let mut families = vec!["cond-i".into(), "cond-ii".into()];
    let one_key = VariableKey::one(false);
    let mut cond_i = LinearConstraint::new(ConstraintTag::CondI, Relation::Eq);
    cond_i.add(one_key, BigRational::one());
    cond_i.rhs = BigRational::one();
    rows.push(cond_i);

    let b_key = |a: usize| canonical_key_unrestricted(a, 0, 0, n, d, even_only);
    for m in unrestricted_orbits(n) {
        let [a, b, c] = m;
        let key = canonical_key_unrestricted(a, b, (a + b - c) / 2, n, d, even_only);
        match key {
            Some(k) => {
                // 0 <= x and x <= x^0_{e,0} for each distance in the orbit.
                let mut nn = LinearConstraint::new(ConstraintTag::CondII, Relation::Ge);
                nn.add(k, BigRational::one());
                rows.push(nn);
                for e in [a, b, c] {
                    if let Some(bk) = b_key(e) {
                        let mut up = LinearConstraint::new(ConstraintTag::CondII, Relation::Le);
                        up.add(k, BigRational::one());
                        up.add(bk, -BigRational::one());
                        up.rhs = BigRational::zero();
                        rows.push(up);
                    }
                }
                for (e, f) in [(a, b), (a, c), (b, c)] {
                    let mut pair = LinearConstraint::new(ConstraintTag::CondII, Relation::Le);
                    if let Some(bk) = b_key(e) {
                        pair.add(bk, BigRational::one());
                    }
                    if let Some(bk) = b_key(f) {
                        pair.add(bk, BigRational::one());
                    }
                    pair.add(k, -BigRational::one());
                    pair.rhs = BigRational::one();
                    rows.push(pair);
                }
            }
            None => {
                // The orbit variable vanished; the pair inequality survives
                // with its right side intact.
                for (e, f) in [(a, b), (a, c), (b, c)] {
                    let mut pair = LinearConstraint::new(ConstraintTag::CondII, Relation::Le);
                    if let Some(bk) = b_key(e) {
                        pair.add(bk, BigRational::one());
                    }
                    if let Some(bk) = b_key(f) {
                        pair.add(bk, BigRational::one());
                    }
                    pair.rhs = BigRational::one();
                    rows.push(pair);
                }
            }
        }
    }

    // Coefficient rows bounding triple variables through pair variables.
    if opts.t1 || opts.cor2 {
        let provider = provider.unwrap();
        for key in &variables {
            let m = key.distance_multiset();
            let mut arrangements = BTreeSet::new();
            for (ii, jj, uu) in [
                (m[0], m[1], m[2]),
                (m[0], m[2], m[1]),
                (m[1], m[0], m[2]),
                (m[1], m[2], m[0]),
                (m[2], m[0], m[1]),
                (m[2], m[1], m[0]),
            ] {
                arrangements.insert((ii, jj, (ii + jj - uu) / 2));
            }
            for (i, j, t) in arrangements {
                let is_cor2 = i == 0;
                if (is_cor2 && !opts.cor2) || (!is_cor2 && !opts.t1) {
                    continue;
                }
                if is_cor2 && j == 0 {
                    continue; // constant variable
                }
                let tval = provider.t2(t, i, j - t, n - i, d);
                let denom = binomial(i as i64, t as i64) * binomial((n - i) as i64, (j - t) as i64);
                debug_assert!(!denom.is_zero());
                let coeff = BigRational::new(tval, denom);
                let Some(anchor) = b_key(i) else { continue };
                let mut row = LinearConstraint::new(
                    if is_cor2 {
                        ConstraintTag::Cor2
                    } else {
                        ConstraintTag::T1
                    },
                    Relation::Le,
                );
                row.add(*key, BigRational::one());
                row.add(anchor, -coeff);
                rows.push(row);
            }
        }
        if opts.t1 {
            families.push("t1".into());
        }
        if opts.cor2 {
            families.push("cor2".into());
        }
    }

    if opts.delsarte {
        for row in delsarte_constraints_unrestricted(n, d, ParityMode::Plain).rows {
            rows.push(inject(row, &index));
        }
        families.push("delsarte".into());
    }
    if opts.mel && d % 2 == 0 {
        let provider = provider.unwrap();
        for row in mel_constraints(n, d, |nn, ww| provider.awd(nn, d, ww)) {
            rows.push(inject(row, &index));
        }
        families.push("mel".into());
    }

    // Objective: the code size.
    let mut objective = LinForm::new();
    for i in 0..=n {
        if let Some(bk) = b_key(i) {
            add_term(
                &mut objective,
                index[&bk],
                BigRational::from(binomial(n as i64, i as i64)),
            );
        }
    }

    let var_box = vec![(0.0, 1.0); variables.len()];
    Ok(SdpInstance {
        meta: InstanceMeta {
            n,
            d,
            w: None,
            families,
        },
        variables,
        objective,
        psd_blocks,
        linear_constraints: rows.rows,
        var_box,
    })
}

/// Build the constant-weight `(n,d,w)` semidefinite program
/// (core regime: even `d`, `4 <= d < 2w <= n`).
pub fn build_cw(
    n: usize,
    d: usize,
    w: usize,
    opts: CwOptions,
    provider: Option<&dyn TProvider>,
) -> Result<SdpInstance, BuildError> {
    if !(d % 2 == 0 && d >= 4 && d < 2 * w && 2 * w <= n && n <= 32) {
        return Err(BuildError::InvalidParams(format!(
            "need even d with 4 <= d < 2w <= n <= 32, got n={n} d={d} w={w}"
        )));
    }
    if (opts.t6 || opts.families_11_13 || opts.t14) && provider.is_none() {
        return Err(BuildError::InvalidParams(
            "coefficient families need a bound provider".into(),
        ));
    }
    let v = n - w;
    let variables = enumerate_cw(w, v, d);
    let index: BTreeMap<VariableKey, usize> = variables
        .iter()
        .enumerate()
        .map(|(ix, k)| (*k, ix))
        .collect();
    let key_of = |i: usize, j: usize, t: usize, s: usize| -> Option<usize> {
        canonical_key_cw(i, j, t, s, w, v, d).map(|k| index[&k])
    };

    let mut beta_w = BetaCache::new(w);
    let mut beta_v = BetaCache::new(v);
    let mut psd_blocks = Vec::new();
    for k in 0..=w / 2 {
        for l in 0..=v / 2 {
            let lo = k.max(l);
            let hi = (w - k).min(v - l);
            let idx: Vec<usize> = if lo > hi { Vec::new() } else { (lo..=hi).collect() };
            let dim = idx.len();
            let mut stat = vec![vec![LinForm::new(); dim]; dim];
            let mut comp = vec![vec![LinForm::new(); dim]; dim];
            for (r, &i) in idx.iter().enumerate() {
                for (c, &j) in idx.iter().enumerate().skip(r) {
                    let mut sf = LinForm::new();
                    let mut cf = LinForm::new();
                    for t in 0..=i.min(j) {
                        for s in 0..=i.min(j) {
                            if !realizable_cw(i, j, t, s, w, v) {
                                continue;
                            }
                            let b = BigRational::from(
                                beta_w.get(t, i, j, k).clone() * beta_v.get(s, i, j, l).clone(),
                            );
                            if b.is_zero() {
                                continue;
                            }
                            if let Some(ix) = key_of(i, j, t, s) {
                                add_term(&mut sf, ix, b.clone());
                                add_term(&mut cf, ix, -b.clone());
                            }
                            if let Some(ix) = key_of(i + j - t - s, 0, 0, 0) {
                                add_term(&mut cf, ix, b);
                            }
                        }
                    }
                    stat[r][c] = sf.clone();
                    stat[c][r] = sf;
                    comp[r][c] = cf.clone();
                    comp[c][r] = cf;
                }
            }
            psd_blocks.push(SdpBlock {
                label: BlockLabel::Kl(k, l),
                index_set: idx.clone(),
                entries: stat,
            });
            psd_blocks.push(SdpBlock {
                label: BlockLabel::KlComp(k, l),
                index_set: idx,
                entries: comp,
            });
        }
    }

    let mut rows = RowSet::new();
    let mut families = vec!["cond-i".into(), "cond-ii".into()];
    let one_key = VariableKey::one(true);
    let mut cond_i = LinearConstraint::new(ConstraintTag::CondI, Relation::Eq);
    cond_i.add(one_key, BigRational::one());
    cond_i.rhs = BigRational::one();
    rows.push(cond_i);

    let b_key = |a: usize| canonical_key_cw(a, 0, 0, 0, w, v, d);
    for (m, delta) in cw_orbits(w, v) {
        let [a, b, c] = m;
        let sigma = (a + b) as i64 - c as i64;
        let t = ((sigma + delta) / 2) as usize;
        let s = ((sigma - delta) / 2) as usize;
        match canonical_key_cw(a, b, t, s, w, v, d) {
            Some(k) => {
                let mut nn = LinearConstraint::new(ConstraintTag::CondII, Relation::Ge);
                nn.add(k, BigRational::one());
                rows.push(nn);
                for e in [a, b, c] {
                    if let Some(bk) = b_key(e) {
                        let mut up = LinearConstraint::new(ConstraintTag::CondII, Relation::Le);
                        up.add(k, BigRational::one());
                        up.add(bk, -BigRational::one());
                        rows.push(up);
                    }
                }
                for (e, f) in [(a, b), (a, c), (b, c)] {
                    let mut pair = LinearConstraint::new(ConstraintTag::CondII, Relation::Le);
                    if let Some(bk) = b_key(e) {
                        pair.add(bk, BigRational::one());
                    }
                    if let Some(bk) = b_key(f) {
                        pair.add(bk, BigRational::one());
                    }
                    pair.add(k, -BigRational::one());
                    pair.rhs = BigRational::one();
                    rows.push(pair);
                }
            }
            None => {
                for (e, f) in [(a, b), (a, c), (b, c)] {
                    let mut pair = LinearConstraint::new(ConstraintTag::CondII, Relation::Le);
                    if let Some(bk) = b_key(e) {
                        pair.add(bk, BigRational::one());
                    }
                    if let Some(bk) = b_key(f) {
                        pair.add(bk, BigRational::one());
                    }
                    pair.rhs = BigRational::one();
                    rows.push(pair);
                }
            }
        }
    }

    if opts.t6 {
        let provider = provider.unwrap();
        for key in &variables {
            let m = key.distance_multiset();
            let delta = match *key {
                VariableKey::Cw { t, s, .. } => t as i64 - s as i64,
                _ => unreachable!(),
            };
            let mut arrangements = BTreeSet::new();
            for (ii, jj, cc) in [
                (m[0], m[1], m[2]),
                (m[0], m[2], m[1]),
                (m[1], m[0], m[2]),
                (m[1], m[2], m[0]),
                (m[2], m[0], m[1]),
                (m[2], m[1], m[0]),
            ] {
                let sig = (ii + jj) as i64 - cc as i64;
                let tt = (sig + delta) / 2;
                let ss = (sig - delta) / 2;
                debug_assert!(tt >= 0 && ss >= 0);
                arrangements.insert((ii, jj, tt as usize, ss as usize));
            }
            for (i, j, t, s) in arrangements {
                if i == 0 && j == 0 {
                    continue; // constant variable
                }
                let tval = provider.t4([(t, i), (j - t, w - i), (s, i), (j - s, v - i)], d);
                let denom = binomial(i as i64, t as i64)
                    * binomial((w - i) as i64, (j - t) as i64)
                    * binomial(i as i64, s as i64)
                    * binomial((v - i) as i64, (j - s) as i64);
                debug_assert!(!denom.is_zero());
                let coeff = BigRational::new(tval, denom);
                let Some(anchor) = b_key(i) else { continue };
                let mut row = LinearConstraint::new(ConstraintTag::T6, Relation::Le);
                row.add(*key, BigRational::one());
                row.add(anchor, -coeff);
                rows.push(row);
            }
        }
        families.push("t6".into());
    }

    if opts.t7 {
        for row in delsarte_constraints_cw(n, d, w) {
            rows.push(inject(row, &index));
        }
        families.push("t7".into());
    }
    if opts.families_11_13 {
        let provider = provider.unwrap();
        let fam_rows = crate::lp::bound::family_rows_11_13(n, d, w, provider);
        if !fam_rows.is_empty() {
            families.push("t11/t13".into());
        }
        for row in fam_rows {
            rows.push(inject(row, &index));
        }
    }
    if opts.t14 {
        let provider = provider.unwrap();
        let fam_rows = crate::lp::bound::family_rows_14(n, d, w, provider);
        if !fam_rows.is_empty() {
            families.push("t14".into());
        }
        for row in fam_rows {
            rows.push(inject(row, &index));
        }
    }

    let mut objective = LinForm::new();
    for i in 0..=w.min(v) {
        if let Some(bk) = b_key(i) {
            add_term(
                &mut objective,
                index[&bk],
                BigRational::from(binomial(w as i64, i as i64) * binomial(v as i64, i as i64)),
            );
        }
    }

    let var_box = vec![(0.0, 1.0); variables.len()];
    Ok(SdpInstance {
        meta: InstanceMeta {
            n,
            d,
            w: Some(w),
            families,
        },
        variables,
        objective,
        psd_blocks,
        linear_constraints: rows.rows,
        var_box,
    })
}
