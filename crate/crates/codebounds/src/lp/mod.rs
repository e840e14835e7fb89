//! Linear constraint machinery and linear programming bounds.
//!
//! Constraints are stored over the canonical model variables with exact
//! rational coefficients. Distance-distribution entries `B_i` enter through
//! the bridge `B_i = C(n,i) x^0_{0,i}` (or `B_{2i} = C(w,i) C(v,i)
//! y^{0,0}_{0,i}` for constant weight), so the same rows slot unchanged into
//! the linear programs here and into the semidefinite models.

mod simplex;

pub mod bound;
pub mod cw;
pub mod unrestricted;

pub use bound::{lp_bound_cw, lp_bound_unrestricted, parity_sweep_cw, parity_sweep_unrestricted};
pub use cw::{
    build_q_table, delsarte_constraints_cw, h1_families, m_ij, theorem11_constraint,
    theorem13_constraints, theorem14_constraints, theorem8_constraints, QTable,
};
pub use simplex::{solve_lp, LpSolution, LpStatus};
pub use unrestricted::{delsarte_constraints_unrestricted, mel_constraints, ParityMode};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combin::binomial;
use crate::sdp::VariableKey;

/// Relation of a linear constraint row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// Origin label of a constraint row; `Display` gives the stable tag names
/// used in reports and printed constraint listings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintTag {
    CondI,
    CondII,
    CondIII,
    CondIV,
    Delsarte(usize),
    Mel9,
    Mel10(usize),
    T1,
    Cor2,
    T6,
    T7(usize),
    T8(usize),
    T11,
    T13A,
    T13B,
    T13C,
    T14A,
    T14B,
    T14C,
}

impl fmt::Display for ConstraintTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintTag::CondI => write!(f, "cond-i"),
            ConstraintTag::CondII => write!(f, "cond-ii"),
            ConstraintTag::CondIII => write!(f, "cond-iii"),
            ConstraintTag::CondIV => write!(f, "cond-iv"),
            ConstraintTag::Delsarte(k) => write!(f, "delsarte-{k}"),
            ConstraintTag::Mel9 => write!(f, "mel-9"),
            ConstraintTag::Mel10(i) => write!(f, "mel-10-{i}"),
            ConstraintTag::T1 => write!(f, "t1"),
            ConstraintTag::Cor2 => write!(f, "cor2"),
            ConstraintTag::T6 => write!(f, "t6"),
            ConstraintTag::T7(k) => write!(f, "t7-{k}"),
            ConstraintTag::T8(k) => write!(f, "t8-{k}"),
            ConstraintTag::T11 => write!(f, "t11"),
            ConstraintTag::T13A => write!(f, "t13-a"),
            ConstraintTag::T13B => write!(f, "t13-b"),
            ConstraintTag::T13C => write!(f, "t13-c"),
            ConstraintTag::T14A => write!(f, "t14-a"),
            ConstraintTag::T14B => write!(f, "t14-b"),
            ConstraintTag::T14C => write!(f, "t14-c"),
        }
    }
}

/// One linear constraint over canonical model variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub coeffs: BTreeMap<VariableKey, BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
    pub tag: ConstraintTag,
}

impl LinearConstraint {
    pub fn new(tag: ConstraintTag, relation: Relation) -> Self {
        LinearConstraint {
            coeffs: BTreeMap::new(),
            relation,
            rhs: BigRational::zero(),
            tag,
        }
    }

    pub fn add(&mut self, key: VariableKey, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// True when the assignment returned by `value` satisfies the row.
    pub fn satisfied_by<F>(&self, mut value: F) -> bool
    where
        F: FnMut(&VariableKey) -> BigRational,
    {
        let lhs: BigRational = self.coeffs.iter().map(|(k, c)| c * value(k)).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }

    /// Slack `rhs - lhs`, oriented so that nonnegative means satisfied
    /// (equality rows report the signed difference).
    pub fn slack<F>(&self, mut value: F) -> BigRational
    where
        F: FnMut(&VariableKey) -> BigRational,
    {
        let lhs: BigRational = self.coeffs.iter().map(|(k, c)| c * value(k)).sum();
        match self.relation {
            Relation::Le | Relation::Eq => &self.rhs - lhs,
            Relation::Ge => lhs - &self.rhs,
        }
    }
}

/// A linear program over canonical variables: maximise the objective subject
/// to the rows and per-variable bounds (defaults `[0, +inf)`).
#[derive(Clone, Debug, Default)]
pub struct LpProblem {
    pub variables: Vec<VariableKey>,
    pub objective: BTreeMap<VariableKey, BigRational>,
    pub constraints: Vec<LinearConstraint>,
    pub upper_bounds: BTreeMap<VariableKey, BigRational>,
}

/// A row rendered over distance-distribution entries, for readable printing
/// and golden comparisons. Keys are full distances (`B_{2i}` appears under
/// `2i`), coefficients cleared to coprime integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSpaceRow {
    pub coeffs: BTreeMap<usize, BigInt>,
    pub relation: Relation,
    pub rhs: BigInt,
    pub tag: String,
}

/// Bridge between `B`-space and model-variable space.
#[derive(Clone, Copy, Debug)]
pub enum Bridge {
    /// Unrestricted codes of length `n`: `B_i = C(n,i) x^0_{0,i}`.
    Unrestricted { n: usize },
    /// Constant-weight codes: `B_{2i} = C(w,i) C(v,i) y^{0,0}_{0,i}`.
    Cw { w: usize, v: usize },
}

impl Bridge {
    /// The model variable carrying `B_dist` together with its scale factor.
    pub fn b_key(&self, dist: usize) -> (VariableKey, BigRational) {
        match *self {
            Bridge::Unrestricted { n } => (
                VariableKey::b_var(dist),
                BigRational::from(binomial(n as i64, dist as i64)),
            ),
            Bridge::Cw { w, v } => {
                assert!(dist % 2 == 0, "constant-weight distances are even");
                let i = dist / 2;
                (
                    VariableKey::b_var_cw(i),
                    BigRational::from(binomial(w as i64, i as i64) * binomial(v as i64, i as i64)),
                )
            }
        }
    }

    /// Build a constraint row from `B`-space data: `sum coeff * B_dist
    /// relation rhs`.
    pub fn row(
        &self,
        tag: ConstraintTag,
        terms: &[(usize, BigRational)],
        relation: Relation,
        rhs: BigRational,
    ) -> LinearConstraint {
        let mut c = LinearConstraint::new(tag, relation);
        c.rhs = rhs;
        for (dist, coeff) in terms {
            let (key, scale) = self.b_key(*dist);
            c.add(key, coeff * scale);
        }
        c
    }

    /// Convert a model-space row back to cleared `B`-space form.
    ///
    /// Panics when the row involves variables other than `B`-bridged ones.
    pub fn b_space(&self, c: &LinearConstraint) -> BSpaceRow {
        let mut coeffs: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (key, coeff) in &c.coeffs {
            let dist = match (*self, key) {
                (Bridge::Unrestricted { .. }, VariableKey::Unrestricted { i: 0, j, t: 0 }) => {
                    *j as usize
                }
                (Bridge::Cw { .. }, VariableKey::Cw { i: 0, j, t: 0, s: 0 }) => 2 * *j as usize,
                _ => panic!("row is not in B-space: contains {key}"),
            };
            let (_, scale) = self.b_key(dist);
            coeffs.insert(dist, coeff / scale);
        }
        clear_denominators(coeffs, c.relation, c.rhs.clone(), c.tag.to_string())
    }
}

fn clear_denominators(
    coeffs: BTreeMap<usize, BigRational>,
    relation: Relation,
    rhs: BigRational,
    tag: String,
) -> BSpaceRow {
    let mut lcm = BigInt::one();
    for r in coeffs.values().chain(std::iter::once(&rhs)) {
        lcm = num_integer::Integer::lcm(&lcm, r.denom());
    }
    let ints: BTreeMap<usize, BigInt> = coeffs
        .iter()
        .map(|(d, r)| (*d, (r * BigRational::from(lcm.clone())).to_integer()))
        .collect();
    let rhs_int = (rhs * BigRational::from(lcm.clone())).to_integer();
    let mut gcd = rhs_int.abs();
    for v in ints.values() {
        gcd = num_integer::Integer::gcd(&gcd, v);
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    BSpaceRow {
        coeffs: ints
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(d, v)| (d, v / &gcd))
            .collect(),
        relation,
        rhs: rhs_int / gcd,
        tag,
    }
}

impl fmt::Display for BSpaceRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (idx, (dist, coeff)) in self.coeffs.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if coeff.is_one() {
                write!(f, "B{dist}")?;
            } else {
                write!(f, "{coeff} B{dist}")?;
            }
        }
        let rel = match self.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        write!(f, " {rel} {}  [{}]", self.rhs, self.tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn bridge_round_trip() {
        let bridge = Bridge::Cw { w: 13, v: 14 };
        let row = bridge.row(
            ConstraintTag::T13A,
            &[(24, rat(1)), (26, rat(1))],
            Relation::Le,
            rat(1),
        );
        let back = bridge.b_space(&row);
        assert_eq!(back.coeffs[&24], BigInt::from(1));
        assert_eq!(back.coeffs[&26], BigInt::from(1));
        assert_eq!(back.rhs, BigInt::from(1));
        assert_eq!(back.to_string(), "B24 + B26 <= 1  [t13-a]");
    }

    #[test]
    fn clearing_scales_to_coprime_integers() {
        let bridge = Bridge::Unrestricted { n: 6 };
        let row = bridge.row(
            ConstraintTag::T11,
            &[(4, BigRational::new(BigInt::from(1), BigInt::from(26)))],
            Relation::Le,
            BigRational::new(BigInt::from(1), BigInt::from(2)),
        );
        let b = bridge.b_space(&row);
        assert_eq!(b.coeffs[&4], BigInt::from(1));
        assert_eq!(b.rhs, BigInt::from(13));
    }

    #[test]
    fn satisfaction_and_slack() {
        let mut c = LinearConstraint::new(ConstraintTag::CondII, Relation::Le);
        c.add(VariableKey::b_var(3), rat(2));
        c.rhs = rat(5);
        assert!(c.satisfied_by(|_| rat(2)));
        assert!(!c.satisfied_by(|_| rat(3)));
        assert_eq!(c.slack(|_| rat(2)), rat(1));
    }
}
