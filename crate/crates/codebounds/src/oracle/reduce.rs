//! Reduction of anchored-code problems to block-structured weight problems.
//!
//! A set of anchor constraints partitions the coordinates into blocks on
//! which every admissible word carries a fixed number of ones. Two anchors
//! reduce to a doubly-constant-weight shape, four anchors (of the special
//! additive form) to a four-block shape. When the linear system for the
//! block weights has no integral solution in range, no word satisfies the
//! anchors at all and the reduction reports infeasibility as a value.

use super::BitWord;

/// Block weight/length pairs `(w_i, n_i)` of a reduced problem.
pub type BlockShape = Vec<(usize, usize)>;

fn in_range(w2: i64, n: i64) -> Option<usize> {
    if w2 % 2 != 0 {
        return None;
    }
    let w = w2 / 2;
    if w < 0 || w > n {
        return None;
    }
    Some(w as usize)
}

/// Two anchors `(X1,d1)`, `(X2,d2)` reduce to the doubly-constant-weight
/// shape `[(w1,n1),(w2,n2)]` with `n1 = d(X1,X2)`, `n2 = n - n1`,
/// `2 w1 = d1 - d2 + n1` and `2 w2 = d1 + d2 - n1`.
///
/// Returns `None` when the system forces a non-integral or out-of-range
/// weight; the anchored problem then admits no word.
pub fn reduce_lambda2(x1: &BitWord, d1: usize, x2: &BitWord, d2: usize) -> Option<BlockShape> {
    assert_eq!(x1.len(), x2.len());
    let n = x1.len() as i64;
    let n1 = x1.distance(x2) as i64;
    let n2 = n - n1;
    let (d1, d2) = (d1 as i64, d2 as i64);
    let w1 = in_range(d1 - d2 + n1, n1)?;
    let w2 = in_range(d1 + d2 - n1, n2)?;
    Some(vec![(w1, n1 as usize), (w2, n2 as usize)])
}

/// Four anchors of the additive form `X1 = 0`, `wt(X2) = wt(X3) = d1`,
/// `X4 = X2 + X3` reduce to a four-block shape.
pub fn reduce_lambda4(
    x2: &BitWord,
    x3: &BitWord,
    d: [usize; 4],
) -> Option<BlockShape> {
    assert_eq!(x2.len(), x3.len());
    assert_eq!(x2.weight(), d[0], "wt(X2) must equal d1");
    assert_eq!(x3.weight(), d[0], "wt(X3) must equal d1");
    let n = x2.len() as i64;
    let d23 = x2.distance(x3) as i64;
    if d23 % 2 != 0 {
        return None;
    }
    let n1 = d23 / 2;
    let n3 = n1;
    let n2 = d[0] as i64 - n1;
    let n4 = n - n1 - n2 - n3;
    if n2 < 0 || n4 < 0 {
        return None;
    }
    let [d1, d2, d3, d4] = d.map(|v| v as i64);
    // 2*w_i from the four distance equations; halved with range checks.
    let quarters = [
        (d1 - d2 + d3 - d4 + 2 * n1, n1),
        (d1 - d2 - d3 + d4 + 2 * n2, n2),
        (d1 + d2 - d3 - d4 + 2 * n3, n3),
        (d1 + d2 + d3 + d4 + 2 * (n4 - n), n4),
    ];
    let mut shape = Vec::with_capacity(4);
    for (four_w, len) in quarters {
        if four_w % 4 != 0 {
            return None;
        }
        let w = in_range(four_w / 2, len)?;
        shape.push((w, len as usize));
    }
    Some(shape)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_anchor_example() {
        let x1 = BitWord::new(0, 8);
        let x2 = BitWord::parse("11110000").unwrap();
        let shape = reduce_lambda2(&x1, 3, &x2, 3).unwrap();
        assert_eq!(shape, vec![(2, 4), (1, 4)]);
    }

    #[test]
    fn parity_obstruction() {
        // d1=3, d2=4 against an anchor at distance 4: w1 = 3/2.
        let x1 = BitWord::new(0, 8);
        let x2 = BitWord::parse("11110000").unwrap();
        assert_eq!(reduce_lambda2(&x1, 3, &x2, 4), None);
    }

    #[test]
    fn coincident_anchors_collapse() {
        let x = BitWord::parse("110000").unwrap();
        // X2 = X1, d1 = d2 = w: n1 = 0 block carries no coordinates.
        let shape = reduce_lambda2(&x, 2, &x, 2).unwrap();
        assert_eq!(shape[0], (0, 0));
        assert_eq!(shape[1], (2, 6));
        // Disagreeing distances at the same anchor are infeasible.
        assert_eq!(reduce_lambda2(&x, 2, &x, 3), None);
    }

    #[test]
    fn four_anchor_constant_weight_triple_shape() {
        // The anchored problem behind the triple-statistics coefficient
        // bound: base weight w, |X^Y| = 2i around two codewords X, Y.
        let n = 10usize;
        let w = 4usize;
        let (i, j, t, s) = (2usize, 3usize, 1usize, 1usize);
        // X supported on the first w coordinates, Y differing from X in i
        // support coordinates and i complement coordinates.
        let x = BitWord::parse("1111000000").unwrap();
        let y = BitWord::parse("1100110000").unwrap();
        assert_eq!(x.distance(&y), 2 * i);
        let c = i + j - t - s;
        let d = [
            w,
            2 * j,
            2 * c,
            w + 2 * t - 2 * s,
        ];
        let shape = reduce_lambda4(&x, &y, d).unwrap();
        let v = n - w;
        assert_eq!(
            shape,
            vec![
                (i - t, i),
                ((w - i) - (j - t), w - i),
                (s, i),
                (j - s, v - i),
            ]
        );
    }

    #[test]
    fn four_anchor_parity_obstruction() {
        let x2 = BitWord::parse("111000").unwrap();
        let x3 = BitWord::parse("110100").unwrap();
        assert_eq!(x2.distance(&x3), 2);
        // These distances force the fractional weight w1 = 1/2.
        assert_eq!(reduce_lambda4(&x2, &x3, [3, 2, 2, 3]), None);
    }

    #[test]
    fn four_anchor_degenerate_equal_words() {
        let x = BitWord::parse("110000").unwrap();
        // X2 = X3 gives n1 = n3 = 0; feasible only with w1 = w3 = 0.
        let shape = reduce_lambda4(&x, &x, [2, 2, 2, 2]);
        // d(Z,X2) = d(Z,X3) forced; d4 = wt(Z ^ 0) must be consistent.
        if let Some(s) = shape {
            assert_eq!(s[0], (0, 0));
            assert_eq!(s[2], (0, 0));
        }
    }
}
