//! Distance and triple statistics of explicit codes.
//!
//! These are the exact quantities the programming bounds relax, so they act
//! as feasibility witnesses in tests: every constraint a bound emits must be
//! satisfied by the statistics of every real code of the matching class.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
#[cfg(test)]
use num_traits::One;

use crate::combin::multinomial;

use super::{Code, CodeError};

/// Triple statistics of an unrestricted code.
///
/// `lambda[(i,j,t)]` counts ordered triples `(X,Y,Z)` of codewords with
/// `|X^Y| = i`, `|X^Z| = j` and `|(X^Y) & (X^Z)| = t`. The normalised value
/// `x(i,j,t)` divides by `|C|` and by the number of placements of the
/// corresponding subset pattern.
#[derive(Clone, Debug)]
pub struct TripleStats {
    pub n: usize,
    pub size: usize,
    pub lambda: BTreeMap<(usize, usize, usize), u64>,
}

impl TripleStats {
    pub fn x(&self, i: usize, j: usize, t: usize) -> BigRational {
        let places = multinomial(
            self.n as i64,
            &[i as i64 - t as i64, j as i64 - t as i64, t as i64],
        );
        if places.is_zero() {
            return BigRational::zero();
        }
        let count = self.lambda.get(&(i, j, t)).copied().unwrap_or(0);
        BigRational::new(BigInt::from(count), BigInt::from(self.size as u64) * places)
    }
}

/// Triple statistics of a constant-weight code, split into the pattern on
/// the support of the base word (`t`) and on its complement (`s`).
#[derive(Clone, Debug)]
pub struct CwTripleStats {
    pub n: usize,
    pub w: usize,
    pub size: usize,
    pub mu: BTreeMap<(usize, usize, usize, usize), u64>,
}

impl CwTripleStats {
    pub fn y(&self, i: usize, j: usize, t: usize, s: usize) -> BigRational {
        let v = self.n - self.w;
        let inner = multinomial(
            self.w as i64,
            &[i as i64 - t as i64, j as i64 - t as i64, t as i64],
        );
        let outer = multinomial(
            v as i64,
            &[i as i64 - s as i64, j as i64 - s as i64, s as i64],
        );
        if inner.is_zero() || outer.is_zero() {
            return BigRational::zero();
        }
        let count = self.mu.get(&(i, j, t, s)).copied().unwrap_or(0);
        BigRational::new(
            BigInt::from(count),
            BigInt::from(self.size as u64) * inner * outer,
        )
    }
}

/// Distance distribution `B_0..B_n`: `B_i` is the number of ordered codeword
/// pairs at distance `i`, divided by the code size.
pub fn distance_distribution(code: &Code) -> Vec<BigRational> {
    assert!(!code.is_empty());
    let mut counts = vec![0u64; code.n() + 1];
    for x in code.words() {
        for y in code.words() {
            counts[x.distance(y)] += 1;
        }
    }
    let size = BigInt::from(code.len() as u64);
    counts
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), size.clone()))
        .collect()
}

/// Full `O(|C|^3)` triple enumeration of an unrestricted code.
pub fn triple_stats(code: &Code) -> TripleStats {
    assert!(!code.is_empty());
    assert!(code.len() <= 512, "triple enumeration is cubic in |C|");
    let mut lambda = BTreeMap::new();
    for x in code.words() {
        for y in code.words() {
            let xy = x.bits() ^ y.bits();
            let i = xy.count_ones() as usize;
            for z in code.words() {
                let xz = x.bits() ^ z.bits();
                let j = xz.count_ones() as usize;
                let t = (xy & xz).count_ones() as usize;
                *lambda.entry((i, j, t)).or_insert(0) += 1;
            }
        }
    }
    TripleStats {
        n: code.n(),
        size: code.len(),
        lambda,
    }
}

/// Triple enumeration of a constant-weight-`w` code.
pub fn cw_triple_stats(code: &Code, w: usize) -> Result<CwTripleStats, CodeError> {
    assert!(!code.is_empty());
    assert!(code.len() <= 512, "triple enumeration is cubic in |C|");
    if !code.is_constant_weight(w) {
        return Err(CodeError::NotConstantWeight(w));
    }
    let mut mu = BTreeMap::new();
    for x in code.words() {
        let xb = x.bits();
        for y in code.words() {
            let x_minus_y = xb & !y.bits();
            let y_minus_x = !xb & y.bits();
            let i = x_minus_y.count_ones() as usize;
            for z in code.words() {
                let x_minus_z = xb & !z.bits();
                let z_minus_x = !xb & z.bits();
                let j = x_minus_z.count_ones() as usize;
                let t = (x_minus_y & x_minus_z).count_ones() as usize;
                let s = (y_minus_x & z_minus_x).count_ones() as usize;
                *mu.entry((i, j, t, s)).or_insert(0) += 1;
            }
        }
    }
    Ok(CwTripleStats {
        n: code.n(),
        w,
        size: code.len(),
        mu,
    })
}
