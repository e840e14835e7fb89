//! Linear constraints on distance distributions of unrestricted codes:
//! the Krawtchouk inequalities, their odd-size and size 2 mod 4
//! refinements, and the covering-style rows that bound the tail entries
//! `B_{n-i}` through constant-weight code sizes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combin::{binomial, krawtchouk};

use super::{Bridge, ConstraintTag, LinearConstraint, Relation};

/// Size information for the parity-refined Krawtchouk rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityMode {
    /// Valid for every code.
    Plain,
    /// Valid when the code size is odd.
    OddM(u64),
    /// Valid when the code size is 2 mod 4; disjunctive over a hidden
    /// translation weight.
    Mod4M(u64),
}

/// Krawtchouk constraint family for codes of length `n`.
///
/// `rows` must all hold. `alternatives` is nonempty only in
/// [`ParityMode::Mod4M`]: a distribution is admissible if at least one
/// alternative (one choice of the hidden weight `t`) is satisfied in full.
#[derive(Clone, Debug, Default)]
pub struct DelsarteFamily {
    pub rows: Vec<LinearConstraint>,
    pub alternatives: Vec<Vec<LinearConstraint>>,
}

/// The rows `sum_i P_k(n;i) B_i >= -C(n,k)` for `k = 1..=n`, optionally
/// tightened by the size refinements.
///
/// Only `B_i` with `i = 0` or `d <= i <= n` appear; the excluded entries
/// are identically zero for a code of minimum distance `d`.
pub fn delsarte_constraints_unrestricted(n: usize, d: usize, mode: ParityMode) -> DelsarteFamily {
    let mut family = DelsarteFamily::default();
    let bridge = Bridge::Unrestricted { n };
    let shift = |k: usize, extra: BigRational| -> LinearConstraint {
        let terms: Vec<(usize, BigRational)> = (d.max(1)..=n)
            .map(|i| (i, BigRational::from(krawtchouk(k as i64, n as i64, i as i64))))
            .collect();
        let base = -BigRational::from(binomial(n as i64, k as i64));
        bridge.row(ConstraintTag::Delsarte(k), &terms, Relation::Ge, base + extra)
    };

    match mode {
        ParityMode::Plain => {
            for k in 1..=n {
                family.rows.push(shift(k, BigRational::zero()));
            }
        }
        ParityMode::OddM(m) => {
            assert!(m % 2 == 1);
            for k in 1..=n {
                let extra = BigRational::new(binomial(n as i64, k as i64), BigInt::from(m));
                family.rows.push(shift(k, extra));
            }
        }
        ParityMode::Mod4M(m) => {
            assert!(m % 4 == 2);
            for t in 0..=n {
                let mut alt = Vec::with_capacity(n);
                for k in 1..=n {
                    let bump = binomial(n as i64, k as i64)
                        + krawtchouk(k as i64, n as i64, t as i64);
                    let extra = BigRational::new(BigInt::from(2) * bump, BigInt::from(m));
                    alt.push(shift(k, extra));
                }
                family.alternatives.push(alt);
            }
        }
    }
    family
}

/// Tail covering rows for even `d` with `delta = d/2`:
///
/// * `B_{n-delta} + floor(n/delta) * sum_{i<delta} B_{n-i} <= floor(n/delta)`
/// * for `1 <= i < delta`:
///   `B_{n-delta-i} + (A1 - A2) B_{n-delta+i} + A1 * sum_{j>i} B_{n-delta+j} <= A1`
///   with `A1` an upper bound for the constant-weight size at length `n` and
///   `A2` one at length `n-delta+i`, both at weight `delta+i`.
///
/// Replacing exact constant-weight sizes by upper bounds keeps the rows
/// valid. A supplied `A2 > A1` would flip the middle sign, which the true
/// quantities cannot do, so the middle coefficient is clamped at zero (the
/// row only gets weaker).
pub fn mel_constraints(
    n: usize,
    d: usize,
    mut awd_upper: impl FnMut(usize, usize) -> BigInt,
) -> Vec<LinearConstraint> {
    assert!(d % 2 == 0 && d >= 2);
    let delta = d / 2;
    if n < delta {
        return Vec::new();
    }
    let bridge = Bridge::Unrestricted { n };
    let mut rows = Vec::new();

    let cap = BigRational::from(BigInt::from((n / delta) as u64));
    let mut terms: Vec<(usize, BigRational)> = vec![(n - delta, BigRational::one())];
    for i in 0..delta {
        if n - i >= 1 {
            terms.push((n - i, cap.clone()));
        }
    }
    rows.push(bridge.row(ConstraintTag::Mel9, &terms, Relation::Le, cap));

    for i in 1..delta {
        if n < delta + i {
            continue;
        }
        let a1 = BigRational::from(awd_upper(n, delta + i));
        let a2 = BigRational::from(awd_upper(n - delta + i, delta + i));
        let mut middle = &a1 - &a2;
        if middle.is_negative() {
            log::warn!(
                "tail row {i} at (n,d)=({n},{d}): length-{} bound exceeds length-{n} bound; \
                 clamping middle coefficient to zero",
                n - delta + i
            );
            middle = BigRational::zero();
        }
        let mut terms: Vec<(usize, BigRational)> =
            vec![(n - delta - i, BigRational::one()), (n - delta + i, middle)];
        for j in i + 1..=delta {
            terms.push((n - delta + j, a1.clone()));
        }
        rows.push(bridge.row(ConstraintTag::Mel10(i), &terms, Relation::Le, a1));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::VariableKey;

    fn rat(x: i64) -> BigRational {
        BigRational::from(BigInt::from(x))
    }

    #[test]
    fn first_krawtchouk_row_is_linear() {
        // k = 1: sum (n-2i) B_i >= -n.
        let fam = delsarte_constraints_unrestricted(6, 1, ParityMode::Plain);
        let row = &fam.rows[0];
        assert_eq!(row.relation, Relation::Ge);
        assert_eq!(row.rhs, rat(-6));
        // Cleared B-space form divides through by the common factor 2.
        let b = Bridge::Unrestricted { n: 6 };
        let back = b.b_space(row);
        assert_eq!(back.rhs, BigInt::from(-3));
        for i in 1..=6usize {
            let expect = BigInt::from(3 - i as i64);
            if expect.is_zero() {
                assert!(!back.coeffs.contains_key(&i));
            } else {
                assert_eq!(back.coeffs[&i], expect, "i={i}");
            }
        }
    }

    #[test]
    fn odd_refinement_tightens_by_binomial_over_m() {
        let plain = delsarte_constraints_unrestricted(7, 3, ParityMode::Plain);
        let odd = delsarte_constraints_unrestricted(7, 3, ParityMode::OddM(5));
        for (p, o) in plain.rows.iter().zip(&odd.rows) {
            let k = match p.tag {
                ConstraintTag::Delsarte(k) => k,
                _ => unreachable!(),
            };
            let gap = &o.rhs - &p.rhs;
            assert_eq!(
                gap,
                BigRational::new(binomial(7, k as i64), BigInt::from(5)),
                "k={k}"
            );
        }
    }

    #[test]
    fn mod4_mode_is_disjunctive() {
        let fam = delsarte_constraints_unrestricted(5, 3, ParityMode::Mod4M(6));
        assert!(fam.rows.is_empty());
        assert_eq!(fam.alternatives.len(), 6); // t = 0..=5
        for alt in &fam.alternatives {
            assert_eq!(alt.len(), 5);
        }
    }

    #[test]
    fn mel_first_row_instantiation() {
        // n=18, d=8: B14 + 4(B15 + B16 + B17 + B18) <= 4.
        let rows = mel_constraints(18, 8, |_, _| BigInt::from(1000));
        let b = Bridge::Unrestricted { n: 18 };
        let first = b.b_space(&rows[0]);
        assert_eq!(first.coeffs[&14], BigInt::one());
        for i in 15..=18usize {
            assert_eq!(first.coeffs[&i], BigInt::from(4));
        }
        assert_eq!(first.rhs, BigInt::from(4));
        assert_eq!(first.relation, Relation::Le);
    }

    #[test]
    fn mel_middle_coefficient_degenerates() {
        // Equal bounds at both lengths zero the middle coefficient.
        let rows = mel_constraints(10, 6, |_, _| BigInt::from(7));
        let b = Bridge::Unrestricted { n: 10 };
        for row in &rows[1..] {
            let back = b.b_space(row);
            if let ConstraintTag::Mel10(i) = row.tag {
                // middle term B_{n-delta+i} must be absent (coefficient 0)
                assert!(!back.coeffs.contains_key(&(10 - 3 + i)));
            }
        }
    }

    #[test]
    fn rows_reference_declared_b_vars_only() {
        let fam = delsarte_constraints_unrestricted(8, 3, ParityMode::Plain);
        for row in &fam.rows {
            for key in row.coeffs.keys() {
                match key {
                    VariableKey::Unrestricted { i: 0, j, t: 0 } => {
                        assert!(*j as usize == 0 || *j as usize >= 3);
                    }
                    _ => panic!("unexpected key {key}"),
                }
            }
        }
    }
}
