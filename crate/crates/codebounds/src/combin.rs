//! Exact combinatorial primitives shared by every bound engine.
//!
//! All values are arbitrary-precision integers or reduced rationals; nothing
//! here ever rounds. Binomials with out-of-range arguments evaluate to zero
//! instead of erroring, because the alternating sums below rely on their
//! implicit vanishing terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Number of pairwise disjoint subsets of sizes `parts[0], parts[1], ...`
/// of a set of size `a`, i.e. `a! / (b_1! ... b_m! (a - sum b)!)`.
///
/// Returns zero when the parts do not fit (`sum parts > a`) or any part is
/// negative, matching the convention that the associated statistic vanishes.
pub fn multinomial(a: i64, parts: &[i64]) -> BigInt {
    if a < 0 || parts.iter().any(|&p| p < 0) {
        return BigInt::zero();
    }
    let total: i64 = parts.iter().sum();
    if total > a {
        return BigInt::zero();
    }
    let mut remaining = a;
    let mut acc = BigInt::one();
    for &p in parts {
        acc *= binomial(remaining, p);
        remaining -= p;
    }
    acc
}

/// Krawtchouk polynomial value `P_k(n; x) = sum_j (-1)^j C(x,j) C(n-x,k-j)`.
pub fn krawtchouk(k: i64, n: i64, x: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let term = binomial(x, j) * binomial(n - x, k - j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Odd-index partial sum `P^-_k(n; x) = sum_{j odd} C(x,j) C(n-x,k-j)`.
///
/// Unlike [`krawtchouk`] the terms are not alternating; only odd `j`
/// contribute and all with positive sign.
pub fn krawtchouk_odd(k: i64, n: i64, x: i64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut j = 1;
    while j <= k {
        acc += binomial(x, j) * binomial(n - x, k - j);
        j += 2;
    }
    acc
}

/// Coefficient of the constant-weight linear programming inequality:
///
/// `q(k,i,n,w) = [sum_j (-1)^j C(k,j) C(w-k,i-j) C(n-w-k,i-j)] / [C(w,i) C(n-w,i)]`.
pub fn q_coeff(k: i64, i: i64, n: i64, w: i64) -> BigRational {
    let mut num = BigInt::zero();
    for j in 0..=i {
        let term = binomial(k, j) * binomial(w - k, i - j) * binomial(n - w - k, i - j);
        if j % 2 == 0 {
            num += term;
        } else {
            num -= term;
        }
    }
    let den = binomial(w, i) * binomial(n - w, i);
    debug_assert!(!den.is_zero(), "q_coeff denominator vanished");
    BigRational::new(num, den)
}

/// Block-diagonalisation coefficient of the Terwilliger algebra of the
/// Hamming cube:
///
/// `beta^t_{i,j,k} = sum_u (-1)^(u-t) C(u,t) C(n-2k,u-k) C(n-k-u,i-u) C(n-k-u,j-u)`.
///
/// Vanishing binomials silently truncate the sum, so the effective range of
/// `u` is `max(t,k) ..= min(i,j)`.
pub fn beta(t: i64, i: i64, j: i64, k: i64, n: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for u in 0..=n {
        let term = binomial(u, t)
            * binomial(n - 2 * k, u - k)
            * binomial(n - k - u, i - u)
            * binomial(n - k - u, j - u);
        if term.is_zero() {
            continue;
        }
        if (u - t).rem_euclid(2) == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Exact floor of a nonnegative rational.
pub fn rational_floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Floor of `value + eps`, used to turn solver objective values into integer
/// bounds without letting float slack round a published bound upward.
pub fn floor_with_slack(value: f64, eps: f64) -> i64 {
    (value + eps).floor() as i64
}

/// `a/b` rounded towards minus infinity, exact in `BigInt`.
pub fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if r.is_negative() {
        q - BigInt::one()
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn factorial(n: i64) -> BigInt {
        (1..=n).map(BigInt::from).product()
    }

    #[test]
    fn multinomial_matches_factorial_formula() {
        // Independent evaluation through factorials.
        for a in 0..=8i64 {
            for b1 in 0..=4 {
                for b2 in 0..=4 {
                    let expect = if b1 + b2 > a {
                        BigInt::zero()
                    } else {
                        factorial(a) / (factorial(b1) * factorial(b2) * factorial(a - b1 - b2))
                    };
                    assert_eq!(multinomial(a, &[b1, b2]), expect, "a={a} b=({b1},{b2})");
                }
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(4, &[4]), BigInt::from(1));
        assert_eq!(multinomial(4, &[1, 1, 1]), BigInt::from(24));
        assert_eq!(multinomial(3, &[2, 2]), BigInt::zero());
    }

    #[test]
    fn multinomial_part_order_is_irrelevant() {
        let parts: [&[i64]; 3] = [&[1, 2, 3], &[3, 2, 1], &[2, 3, 1]];
        let vals: Vec<BigInt> = parts.iter().map(|p| multinomial(9, p)).collect();
        assert_eq!(vals[0], vals[1]);
        assert_eq!(vals[0], vals[2]);
    }

    #[test]
    fn krawtchouk_examples() {
        // P_k(n;0) = C(n,k): only the j=0 term survives.
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(krawtchouk(k, n, 0), binomial(n, k));
            }
        }
        assert_eq!(krawtchouk(1, 6, 2), BigInt::from(2));
        assert_eq!(krawtchouk(2, 4, 2), BigInt::from(-2));
    }

    #[test]
    fn krawtchouk_reflection() {
        // P_k(n; n-x) = (-1)^k P_k(n; x)
        for n in 0..=10i64 {
            for k in 0..=n {
                for x in 0..=n {
                    let lhs = krawtchouk(k, n, n - x);
                    let rhs = if k % 2 == 0 {
                        krawtchouk(k, n, x)
                    } else {
                        -krawtchouk(k, n, x)
                    };
                    assert_eq!(lhs, rhs, "k={k} n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn krawtchouk_orthogonality_exact() {
        // sum_x C(n,x) P_k(n;x) P_l(n;x) = delta_kl 2^n C(n,k), exact.
        for n in 0..=12i64 {
            for k in 0..=n {
                for l in 0..=n {
                    let mut acc = BigInt::zero();
                    for x in 0..=n {
                        acc += binomial(n, x) * krawtchouk(k, n, x) * krawtchouk(l, n, x);
                    }
                    let expect = if k == l {
                        BigInt::from(2).pow(n as u32) * binomial(n, k)
                    } else {
                        BigInt::zero()
                    };
                    assert_eq!(acc, expect, "n={n} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn krawtchouk_odd_examples() {
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(krawtchouk_odd(k, n, 0), BigInt::zero());
            }
        }
        assert_eq!(krawtchouk_odd(1, 6, 2), BigInt::from(2));
        assert_eq!(krawtchouk_odd(1, 6, 3), BigInt::from(3));
    }

    #[test]
    fn q_coeff_examples() {
        assert_eq!(
            q_coeff(1, 1, 6, 3),
            BigRational::new(BigInt::from(1), BigInt::from(3))
        );
        // Brute-force the displayed sum independently for a second point.
        let brute = |k: i64, i: i64, n: i64, w: i64| {
            let mut num = BigRational::zero();
            for j in 0..=i {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let t = binomial(k, j) * binomial(w - k, i - j) * binomial(n - w - k, i - j);
                num += BigRational::from(t * BigInt::from(sign));
            }
            num / BigRational::from(binomial(w, i) * binomial(n - w, i))
        };
        assert_eq!(q_coeff(2, 2, 8, 4), brute(2, 2, 8, 4));
    }

    #[test]
    fn q_coeff_is_reduced() {
        // num_rational keeps Ratio reduced with positive denominator.
        let q = q_coeff(2, 3, 10, 4);
        assert!(q.denom().is_positive());
        assert!(num_integer::Integer::gcd(q.numer(), q.denom()).is_one());
    }

    #[test]
    fn beta_examples() {
        for n in 1..=6 {
            assert_eq!(beta(0, 0, 0, 0, n), BigInt::one());
        }
        assert_eq!(beta(0, 1, 1, 0, 4), BigInt::from(12));
    }

    #[test]
    fn beta_symmetric_in_i_and_j() {
        for n in 0..=8i64 {
            for k in 0..=n / 2 {
                for t in 0..=n {
                    for i in 0..=n {
                        for j in 0..=i {
                            assert_eq!(
                                beta(t, i, j, k, n),
                                beta(t, j, i, k, n),
                                "t={t} i={i} j={j} k={k} n={n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn floor_with_slack_does_not_round_up() {
        assert_eq!(floor_with_slack(79.9999989, 1e-6), 79);
        assert_eq!(floor_with_slack(80.0000001, 1e-6), 80);
        assert_eq!(floor_with_slack(79.9999999, 1e-6), 80);
    }

    #[test]
    fn div_floor_handles_negatives() {
        assert_eq!(
            div_floor_big(&BigInt::from(-7), &BigInt::from(2)).to_i64(),
            Some(-4)
        );
        assert_eq!(
            div_floor_big(&BigInt::from(7), &BigInt::from(2)).to_i64(),
            Some(3)
        );
    }
}
