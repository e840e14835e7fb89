//! Linear constraints on distance distributions of constant-weight codes.
//!
//! Beyond the classical inequalities (rows built from `q(k,i,n,w)` and the
//! odd-sum Krawtchouk refinement), this module derives the sphere-packing
//! style families that couple distance classes through upper bounds on
//! doubly- and multiply-constant-weight codes: a class `B_{2i}` counts
//! codeword pairs whose difference lies in a fixed two-block shape, so code
//! sizes of those shapes cap how classes can combine around one codeword.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::combin::{binomial, krawtchouk_odd, q_coeff};

use super::{Bridge, ConstraintTag, LinearConstraint, Relation};

/// Source of upper bounds on block-structured code sizes.
///
/// Implemented by the recursive bound engine; the methods take `&self`
/// because implementations memoise internally.
pub trait TProvider {
    /// Upper bound on the doubly-constant-weight size `T(w1,n1,w2,n2,d)`.
    fn t2(&self, w1: usize, n1: usize, w2: usize, n2: usize, d: usize) -> BigInt;
    /// Upper bound on the four-block multiply-constant-weight size.
    fn t4(&self, blocks: [(usize, usize); 4], d: usize) -> BigInt;
    /// Upper bound on the constant-weight size `A(n,d,w)`.
    fn awd(&self, n: usize, d: usize, w: usize) -> BigInt;
    /// Upper bound on the doubly-bounded-weight size `T'(w1,n1,w2,n2,d)`,
    /// when a table supplies one.
    fn tprime(&self, w1: usize, n1: usize, w2: usize, n2: usize, d: usize) -> Option<BigInt>;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("distance classes {0} and {1} can realise distance >= d; family inapplicable")]
    PreconditionViolated(usize, usize),
}

/// Largest distance between a vector with `i` ones on each side of the
/// support split and one with `j` ones on each side (support size `w`,
/// co-support `v = n - w`).
pub fn m_ij(i: usize, j: usize, n: usize, w: usize) -> usize {
    let v = n - w;
    let part = |cap: usize| -> usize {
        if i + j < cap {
            i + j
        } else {
            // overlap is forced once i + j exceeds the side capacity
            (i + j) - 2 * ((i + j) - cap)
        }
    };
    part(w) + part(v)
}

/// One index family from the selection recipe, together with the
/// distinguished pair `(i,j)` when the family is of the colliding kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Family {
    pub set: Vec<usize>,
    pub pair: Option<(usize, usize)>,
}

/// Families of distance classes around `alpha = d/2 - (n - 2w)`.
///
/// For even positive `alpha` the top classes `{j0..w}` are pairwise
/// incompatible (one family without a pair), and widening steps `eps`
/// produce families whose only compatible pair is `(i0-eps, j0+eps)`. For
/// odd `alpha` the same widening starts at `eps = 0`. Nonpositive `alpha`
/// yields nothing; the bounded-weight family applies there instead.
pub fn h1_families(n: usize, d: usize, w: usize) -> Vec<H1Family> {
    assert!(d % 2 == 0 && d < 2 * w && 2 * w <= n);
    let half = (d / 2) as i64;
    let alpha = half - (n as i64 - 2 * w as i64);
    if alpha <= 0 {
        return Vec::new();
    }
    let alpha1 = (alpha + 1) / 2;
    let alpha2 = alpha / 2;
    let i0 = w as i64 - alpha1;
    let j0 = w as i64 - alpha2;
    let mut out = Vec::new();

    let eps_start = if alpha % 2 == 0 {
        let set: Vec<usize> = (j0..=w as i64)
            .filter(|&k| k >= half)
            .map(|k| k as usize)
            .collect();
        if !set.is_empty() {
            out.push(H1Family { set, pair: None });
        }
        1
    } else {
        0
    };
    for eps in eps_start..=(w as i64 - j0) {
        let i = i0 - eps;
        let j = j0 + eps;
        if i < half {
            continue; // class below d/2 cannot occur
        }
        let mut set = vec![i as usize];
        set.extend(j as usize..=w);
        out.push(H1Family {
            set,
            pair: Some((i as usize, j as usize)),
        });
    }
    out
}

/// Integer caps on sphere sizes: `q[i]` bounds the number of codewords at
/// distance `2i` from any codeword, `pair[(a,b)]` bounds the number at
/// distance `2a` once a codeword at distance `2b` exists, and
/// `p_pair[(a,b)]` is the bounded-weight analogue.
#[derive(Clone, Debug, Default)]
pub struct QTable {
    pub q: BTreeMap<usize, BigInt>,
    pub pair: BTreeMap<(usize, usize), BigInt>,
    pub p_pair: BTreeMap<(usize, usize), BigInt>,
}

impl QTable {
    pub fn q_of(&self, i: usize) -> &BigInt {
        &self.q[&i]
    }
}

/// Populate a [`QTable`] for `(n,d,w)` from the bound engine (or tables
/// behind it): `q[i]` from the split-shape size `T(i,w,i,v,d)`, and
/// `pair[(a,b)]` from `T(w-a, b, v-a, b, d)` for the colliding pairs of the
/// supplied families. Bounded-weight entries are filled for every pair with
/// `a + b <= n - d/2` using the tabulated `T'` when available.
pub fn build_q_table(
    n: usize,
    d: usize,
    w: usize,
    families: &[H1Family],
    provider: &dyn TProvider,
) -> QTable {
    let v = n - w;
    let half = d / 2;
    let mut table = QTable::default();
    for i in half..=w {
        table.q.insert(i, provider.t2(i, w, i, v, d));
    }
    for fam in families {
        if let Some((i, j)) = fam.pair {
            for (a, b) in [(i, j), (j, i)] {
                table
                    .pair
                    .entry((a, b))
                    .or_insert_with(|| provider.t2(w - a, b, v - a, b, d));
            }
        }
    }
    let delta = w as i64 - half as i64; // largest support overlap shift
    for i in half..=w {
        for j in half..=w {
            if i == j || i + j > n - half {
                continue;
            }
            let w2 = i as i64 - delta;
            let dprime = 2 * w2;
            let fallback = table.q[&i].clone();
            let val = if w2 >= 1 && dprime >= 1 && n >= w + j {
                match provider.tprime(delta as usize, j, w2 as usize, n - w - j, dprime as usize) {
                    Some(t) => fallback.clone().min(t),
                    None => fallback,
                }
            } else {
                fallback
            };
            table.p_pair.insert((i, j), val);
        }
    }
    table
}

/// `sum_{i in H1} B_{2i} / Q_i <= 1` for a family whose classes are
/// pairwise incompatible around a codeword.
pub fn theorem11_constraint(
    h1: &[usize],
    q: &QTable,
    n: usize,
    d: usize,
    w: usize,
) -> Result<LinearConstraint, FamilyError> {
    for (a, &i) in h1.iter().enumerate() {
        for &j in &h1[a + 1..] {
            if m_ij(i, j, n, w) >= d {
                return Err(FamilyError::PreconditionViolated(i, j));
            }
        }
    }
    let bridge = Bridge::Cw { w, v: n - w };
    let terms: Vec<(usize, BigRational)> = h1
        .iter()
        .map(|&i| {
            (
                2 * i,
                BigRational::new(BigInt::one(), q.q_of(i).clone()),
            )
        })
        .collect();
    Ok(bridge.row(ConstraintTag::T11, &terms, Relation::Le, BigRational::one()))
}

/// Rows for a family whose only compatible pair is `(i,j)`:
/// depending on whether the cross caps `Q_ij/Q_i + Q_ji/Q_j` reach one,
/// either the two asymmetric rows or the plain packing row.
pub fn theorem13_constraints(
    h1: &[usize],
    i: usize,
    j: usize,
    q: &QTable,
    n: usize,
    d: usize,
    w: usize,
) -> Result<Vec<LinearConstraint>, FamilyError> {
    let v = n - w;
    if i + j < v || m_ij(i, j, n, w) != d {
        return Err(FamilyError::PreconditionViolated(i, j));
    }
    for (a, &k) in h1.iter().enumerate() {
        for &l in &h1[a + 1..] {
            if (k, l) == (i, j) || (k, l) == (j, i) {
                continue;
            }
            if m_ij(k, l, n, w) >= d {
                return Err(FamilyError::PreconditionViolated(k, l));
            }
        }
    }
    let bridge = Bridge::Cw { w, v };
    let one = BigRational::one;
    let qi = BigRational::from(q.q_of(i).clone());
    let qj = BigRational::from(q.q_of(j).clone());
    let qij = BigRational::from(q.pair[&(i, j)].clone());
    let qji = BigRational::from(q.pair[&(j, i)].clone());
    let h2: Vec<usize> = h1.iter().copied().filter(|&k| k != i && k != j).collect();
    let h2_terms = |terms: &mut Vec<(usize, BigRational)>| {
        for &k in &h2 {
            terms.push((2 * k, one() / BigRational::from(q.q_of(k).clone())));
        }
    };

    let gate = &qij / &qi + &qji / &qj;
    let mut rows = Vec::new();
    if gate >= one() {
        let mut terms = vec![
            (2 * i, (&qj - &qji) / (&qj * &qij)),
            (2 * j, one() / &qj),
        ];
        h2_terms(&mut terms);
        rows.push(bridge.row(ConstraintTag::T13A, &terms, Relation::Le, one()));

        let mut terms = vec![
            (2 * i, one() / &qi),
            (2 * j, (&qi - &qij) / (&qi * &qji)),
        ];
        h2_terms(&mut terms);
        rows.push(bridge.row(ConstraintTag::T13B, &terms, Relation::Le, one()));
    } else {
        let mut terms = vec![(2 * i, one() / &qi), (2 * j, one() / &qj)];
        h2_terms(&mut terms);
        rows.push(bridge.row(ConstraintTag::T13C, &terms, Relation::Le, one()));
    }
    Ok(rows)
}

/// Pairwise rows from bounded-weight caps, applicable to any `i != j` in
/// `{d/2..w}` with `i + j <= n - d/2` (the regime where the colliding
/// families above do not exist).
pub fn theorem14_constraints(
    i: usize,
    j: usize,
    q: &QTable,
    n: usize,
    d: usize,
    w: usize,
) -> Vec<LinearConstraint> {
    let half = d / 2;
    assert!(i != j && i >= half && j >= half && i.max(j) <= w && i + j <= n - half);
    let bridge = Bridge::Cw { w, v: n - w };
    let one = BigRational::one;
    let pi = BigRational::from(q.q_of(i).clone());
    let pj = BigRational::from(q.q_of(j).clone());
    let pij = BigRational::from(q.p_pair[&(i, j)].clone());
    let pji = BigRational::from(q.p_pair[&(j, i)].clone());

    let gate = &pij / &pi + &pji / &pj;
    let mut rows = Vec::new();
    if gate > one() {
        rows.push(bridge.row(
            ConstraintTag::T14A,
            &[(2 * i, pji.clone()), (2 * j, &pi - &pij)],
            Relation::Le,
            &pi * &pji,
        ));
        rows.push(bridge.row(
            ConstraintTag::T14B,
            &[(2 * i, &pj - &pji), (2 * j, pij.clone())],
            Relation::Le,
            &pj * &pij,
        ));
    } else {
        rows.push(bridge.row(
            ConstraintTag::T14C,
            &[(2 * i, pj.clone()), (2 * j, pi.clone())],
            Relation::Le,
            &pi * &pj,
        ));
    }
    rows
}

/// Classical linear programming rows for constant-weight codes:
/// `sum_{i=d/2}^w q(k,i,n,w) B_{2i} >= -1` for `k = 1..=w`.
pub fn delsarte_constraints_cw(n: usize, d: usize, w: usize) -> Vec<LinearConstraint> {
    assert!(d % 2 == 0 && d < 2 * w && 2 * w <= n);
    let bridge = Bridge::Cw { w, v: n - w };
    (1..=w)
        .map(|k| {
            let terms: Vec<(usize, BigRational)> = (d / 2..=w)
                .map(|i| (2 * i, q_coeff(k as i64, i as i64, n as i64, w as i64)))
                .collect();
            bridge.row(ConstraintTag::T7(k), &terms, Relation::Ge, -BigRational::one())
        })
        .collect()
}

/// Size-aware odd-sum rows for constant-weight codes of size `M`:
/// for each `k`, with `M P^-_k(n;w) = q_k C(n,k) + r_k`,
///
/// `sum_i P^-_k(n;2i) B_{2i}
///    <= (2/M) [ (C(n,k)-r_k) q_k (M-q_k) + r_k (q_k+1)(M-q_k-1) ]`.
pub fn theorem8_constraints(n: usize, d: usize, w: usize, m: u64) -> Vec<LinearConstraint> {
    assert!(m >= 1);
    let bridge = Bridge::Cw { w, v: n - w };
    let mut rows = Vec::new();
    for k in 1..=n {
        let cnk = binomial(n as i64, k as i64);
        let prod = BigInt::from(m) * krawtchouk_odd(k as i64, n as i64, w as i64);
        let (qk, rk) = num_integer::Integer::div_rem(&prod, &cnk);
        let mm = BigInt::from(m);
        let inner = (&cnk - &rk) * &qk * (&mm - &qk)
            + &rk * (&qk + BigInt::one()) * (&mm - &qk - BigInt::one());
        let rhs = BigRational::new(BigInt::from(2) * inner, mm);
        let terms: Vec<(usize, BigRational)> = (d / 2..=w)
            .map(|i| {
                (
                    2 * i,
                    BigRational::from(krawtchouk_odd(k as i64, n as i64, 2 * i as i64)),
                )
            })
            .collect();
        rows.push(bridge.row(ConstraintTag::T8(k), &terms, Relation::Le, rhs));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::BitWord;
    use num_traits::Zero;

    #[test]
    fn m_ij_matches_brute_force() {
        // Enumerate the vector classes directly for a small split.
        let (n, w) = (10usize, 5usize);
        let brute = |i: usize, j: usize| -> usize {
            let mut best = 0;
            for x in 0u32..(1 << n) {
                let xw = BitWord::new(x, n);
                let (xl, xr) = (x & 0b11111, x >> 5);
                if xl.count_ones() as usize != i || xr.count_ones() as usize != i {
                    continue;
                }
                for y in 0u32..(1 << n) {
                    let (yl, yr) = (y & 0b11111, y >> 5);
                    if yl.count_ones() as usize != j || yr.count_ones() as usize != j {
                        continue;
                    }
                    best = best.max(xw.distance(&BitWord::new(y, n)));
                }
            }
            best
        };
        for (i, j) in [(2, 1), (1, 2), (3, 2), (2, 2), (4, 5)] {
            assert_eq!(m_ij(i, j, n, w), brute(i, j), "i={i} j={j}");
        }
    }

    #[test]
    fn m_ij_worked_value_and_symmetry() {
        assert_eq!(m_ij(11, 12, 27, 13), 8);
        assert_eq!(m_ij(2, 1, 10, 5), 6);
        for i in 1..6 {
            for j in 1..6 {
                assert_eq!(m_ij(i, j, 12, 6), m_ij(j, i, 12, 6));
            }
        }
    }

    #[test]
    fn family_recipe_examples() {
        // (27,8,13): alpha = 3 odd, i0 = 11, j0 = 12.
        let fams = h1_families(27, 8, 13);
        assert_eq!(
            fams[0],
            H1Family {
                set: vec![11, 12, 13],
                pair: Some((11, 12)),
            }
        );
        assert_eq!(
            fams[1],
            H1Family {
                set: vec![10, 13],
                pair: Some((10, 13)),
            }
        );
        assert_eq!(fams.len(), 2);

        // (26,8,13): alpha = 4 even, j0 = 11.
        let fams = h1_families(26, 8, 13);
        assert_eq!(
            fams[0],
            H1Family {
                set: vec![11, 12, 13],
                pair: None,
            }
        );
        assert!(fams[1..].iter().all(|f| f.pair.is_some()));

        // alpha <= 0: nothing.
        assert!(h1_families(23, 10, 9).is_empty());
    }

    #[test]
    fn recipe_families_satisfy_preconditions() {
        for (n, d, w) in [(27usize, 8usize, 13usize), (26, 8, 13), (24, 8, 11)] {
            for fam in h1_families(n, d, w) {
                match fam.pair {
                    None => {
                        for (a, &i) in fam.set.iter().enumerate() {
                            for &j in &fam.set[a + 1..] {
                                assert!(m_ij(i, j, n, w) < d);
                            }
                        }
                    }
                    Some((i, j)) => {
                        assert!(i + j >= n - w);
                        assert_eq!(m_ij(i, j, n, w), d);
                    }
                }
            }
        }
    }

    #[test]
    fn theorem11_rejects_colliding_pairs() {
        let mut q = QTable::default();
        for i in 4..=13 {
            q.q.insert(i, BigInt::from(10));
        }
        // (11,12) realises distance exactly d at (27,8,13).
        let err = theorem11_constraint(&[11, 12], &q, 27, 8, 13).unwrap_err();
        assert_eq!(err, FamilyError::PreconditionViolated(11, 12));
        // Singleton is always fine: B_{2w} <= Q_w.
        let row = theorem11_constraint(&[13], &q, 27, 8, 13).unwrap();
        let b = Bridge::Cw { w: 13, v: 14 }.b_space(&row);
        assert_eq!(b.coeffs[&26], BigInt::one());
        assert_eq!(b.rhs, BigInt::from(10));
    }

    #[test]
    fn worked_example_rows() {
        // (27,8,13) with the known caps gives the two advertised rows.
        let mut q = QTable::default();
        q.q.insert(11, BigInt::from(26));
        q.q.insert(12, BigInt::from(1));
        q.q.insert(13, BigInt::from(1));
        q.pair.insert((11, 12), BigInt::from(20));
        q.pair.insert((12, 11), BigInt::from(1));
        let rows = theorem13_constraints(&[11, 12, 13], 11, 12, &q, 27, 8, 13).unwrap();
        assert_eq!(rows.len(), 2);
        let bridge = Bridge::Cw { w: 13, v: 14 };
        let a = bridge.b_space(&rows[0]);
        assert_eq!(a.to_string(), "B24 + B26 <= 1  [t13-a]");
        let b = bridge.b_space(&rows[1]);
        assert_eq!(b.to_string(), "B22 + 6 B24 + 26 B26 <= 26  [t13-b]");
    }

    #[test]
    fn theorem13_low_gate_packs_plainly() {
        // Same geometry as the worked example but with weak cross caps:
        // gate = 2/26 + 2/10 < 1 -> single packing row over all of H1.
        let mut q = QTable::default();
        q.q.insert(11, BigInt::from(26));
        q.q.insert(12, BigInt::from(10));
        q.q.insert(13, BigInt::from(5));
        q.pair.insert((11, 12), BigInt::from(2));
        q.pair.insert((12, 11), BigInt::from(2));
        let rows = theorem13_constraints(&[11, 12, 13], 11, 12, &q, 27, 8, 13).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].tag, ConstraintTag::T13C);
        assert_eq!(rows[0].coeffs.len(), 3);
    }

    #[test]
    fn theorem14_fallback_degenerates() {
        // With p_pair = q the first row reduces to B_{2i} <= P_i.
        let mut q = QTable::default();
        q.q.insert(5, BigInt::from(7));
        q.q.insert(6, BigInt::from(3));
        q.p_pair.insert((5, 6), BigInt::from(7));
        q.p_pair.insert((6, 5), BigInt::from(3));
        let rows = theorem14_constraints(5, 6, &q, 23, 10, 9);
        assert_eq!(rows.len(), 2);
        let bridge = Bridge::Cw { w: 9, v: 14 };
        let a = bridge.b_space(&rows[0]);
        // 3 B10 <= 21 -> B10 <= 7.
        assert_eq!(a.to_string(), "B10 <= 7  [t14-a]");
        let b = bridge.b_space(&rows[1]);
        assert_eq!(b.to_string(), "B12 <= 3  [t14-b]");
    }

    #[test]
    fn theorem8_worked_arithmetic() {
        // n=6, k=1, w=3, M=4: P^-_1(6;3) = 3, 12 = 2*6 + 0, rhs = 12.
        let rows = theorem8_constraints(6, 4, 3, 4);
        let row = &rows[0];
        assert_eq!(row.tag, ConstraintTag::T8(1));
        assert_eq!(row.rhs, BigRational::from(BigInt::from(12)));
    }

    #[test]
    fn theorem8_zero_remainder_form() {
        // r_k = 0 collapses the bracket to C(n,k) q_k (M - q_k).
        let (n, w, m) = (6usize, 3usize, 4u64);
        for k in 1..=n {
            let cnk = binomial(n as i64, k as i64);
            let prod = BigInt::from(m) * krawtchouk_odd(k as i64, n as i64, w as i64);
            let (qk, rk) = num_integer::Integer::div_rem(&prod, &cnk);
            if rk.is_zero() {
                let expect = BigRational::new(
                    BigInt::from(2) * &cnk * &qk * (BigInt::from(m) - &qk),
                    BigInt::from(m),
                );
                let rows = theorem8_constraints(n, 4, w, m);
                assert_eq!(rows[k - 1].rhs, expect, "k={k}");
            }
        }
    }
}
