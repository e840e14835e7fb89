//! Canonical indexing of the semidefinite-program variables.
//!
//! Triple statistics are invariant under reordering the three codewords of a
//! triple, so many index tuples denote the same quantity. Each equivalence
//! class is represented by one canonical key; tuples that the model forces
//! to zero (short distances below `d`, odd distances in even-distance mode,
//! or subset patterns with no geometric placement) yield no key at all and
//! are simply absent from the variable set.

use std::fmt;

/// Canonical index of a model variable.
///
/// `Unrestricted { i, j, t }` stands for the normalised count of codeword
/// triples `(X,Y,Z)` with `|X^Y| = i`, `|X^Z| = j`, `|(X^Y)&(X^Z)| = t`.
/// `Cw { i, j, t, s }` is the constant-weight analogue with the pattern
/// split between the support of `X` (`t`) and its complement (`s`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableKey {
    Unrestricted { i: u8, j: u8, t: u8 },
    Cw { i: u8, j: u8, t: u8, s: u8 },
}

impl VariableKey {
    /// The variable equal to the distance-distribution entry `B_i` after
    /// scaling (unrestricted codes).
    pub fn b_var(i: usize) -> Self {
        VariableKey::Unrestricted {
            i: 0,
            j: i as u8,
            t: 0,
        }
    }

    /// The variable equal to `B_{2i}` after scaling (constant-weight codes).
    pub fn b_var_cw(i: usize) -> Self {
        VariableKey::Cw {
            i: 0,
            j: i as u8,
            t: 0,
            s: 0,
        }
    }

    /// The constant-one variable of the matching kind.
    pub fn one(cw: bool) -> Self {
        if cw {
            VariableKey::Cw {
                i: 0,
                j: 0,
                t: 0,
                s: 0,
            }
        } else {
            VariableKey::Unrestricted { i: 0, j: 0, t: 0 }
        }
    }

    /// The multiset of the three pairwise distances encoded by this key
    /// (half-distances in the constant-weight case), sorted ascending.
    pub fn distance_multiset(&self) -> [usize; 3] {
        let mut m = match *self {
            VariableKey::Unrestricted { i, j, t } => {
                [i as usize, j as usize, (i + j - 2 * t) as usize]
            }
            VariableKey::Cw { i, j, t, s } => {
                [i as usize, j as usize, (i + j) as usize - (t + s) as usize]
            }
        };
        m.sort_unstable();
        m
    }

    pub fn is_canonical_unrestricted(&self, n: usize, d: usize, even_only: bool) -> bool {
        match *self {
            VariableKey::Unrestricted { i, j, t } => {
                canonical_key_unrestricted(i as usize, j as usize, t as usize, n, d, even_only)
                    == Some(*self)
            }
            VariableKey::Cw { .. } => false,
        }
    }
}

impl fmt::Debug for VariableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VariableKey::Unrestricted { i, j, t } => write!(f, "x^{t}_{{{i},{j}}}"),
            VariableKey::Cw { i, j, t, s } => write!(f, "y^{{{t},{s}}}_{{{i},{j}}}"),
        }
    }
}

impl fmt::Display for VariableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// True when a subset pattern `(i,j,t)` admits a placement inside an
/// `n`-set, i.e. the multinomial `(n; i-t, j-t, t)` does not vanish.
pub fn realizable_unrestricted(i: usize, j: usize, t: usize, n: usize) -> bool {
    t <= i.min(j) && i + j - t <= n
}

/// Distance killed by the minimum-distance exclusion: `1 <= dist <= d-1`.
fn excluded(dist: usize, d: usize) -> bool {
    dist >= 1 && dist < d
}

/// Canonical representative of `x^t_{i,j}` in an `(n,d)` model, or `None`
/// when the variable is structurally zero or the pattern is unplaceable.
///
/// With `even_only` set (valid for even `d`), variables touching any odd
/// distance are dropped as well.
pub fn canonical_key_unrestricted(
    i: usize,
    j: usize,
    t: usize,
    n: usize,
    d: usize,
    even_only: bool,
) -> Option<VariableKey> {
    if i > n || j > n || !realizable_unrestricted(i, j, t, n) {
        return None;
    }
    let mut m = [i, j, i + j - 2 * t];
    m.sort_unstable();
    if m.iter().any(|&a| excluded(a, d)) {
        return None;
    }
    if even_only && m.iter().any(|&a| a % 2 == 1) {
        return None;
    }
    let (a, b, c) = (m[0], m[1], m[2]);
    Some(VariableKey::Unrestricted {
        i: a as u8,
        j: b as u8,
        t: ((a + b - c) / 2) as u8,
    })
}

/// Validity of a constant-weight pattern: both multinomials nonvanishing.
pub fn realizable_cw(i: usize, j: usize, t: usize, s: usize, w: usize, v: usize) -> bool {
    t <= i.min(j) && i + j - t <= w && s <= i.min(j) && i + j - s <= v
}

/// Canonical representative of `y^{t,s}_{i,j}` in an `(n,d,w)` model with
/// `v = n - w`, or `None` when the variable is structurally zero.
pub fn canonical_key_cw(
    i: usize,
    j: usize,
    t: usize,
    s: usize,
    w: usize,
    v: usize,
    d: usize,
) -> Option<VariableKey> {
    let cap = w.min(v);
    if i > cap || j > cap || !realizable_cw(i, j, t, s, w, v) {
        return None;
    }
    let c = i + j - t - s;
    let mut m = [i, j, c];
    m.sort_unstable();
    if m.iter().any(|&a| excluded(2 * a, d)) {
        return None;
    }
    let delta = t as i64 - s as i64;
    let (a, b, cc) = (m[0], m[1], m[2]);
    let sigma = (a + b) as i64 - cc as i64;
    // Orbit-invariant validity guarantees these are nonnegative integers.
    let tc = (sigma + delta) / 2;
    let sc = (sigma - delta) / 2;
    debug_assert!((sigma + delta) % 2 == 0);
    debug_assert!(tc >= 0 && sc >= 0, "orbit validity violated");
    Some(VariableKey::Cw {
        i: a as u8,
        j: b as u8,
        t: tc as u8,
        s: sc as u8,
    })
}

/// All sorted distance multisets `[a,b,c]` that admit a placement in an
/// `n`-set: triangle inequality, even total, and `(a+b+c)/2 <= n`.
pub fn unrestricted_orbits(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in a..=n {
            for c in b..=n {
                if c <= a + b && (a + b + c) % 2 == 0 && (a + b + c) / 2 <= n {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// All orbits `([a,b,c], delta)` of constant-weight patterns for support
/// size `w` and co-support size `v`.
pub fn cw_orbits(w: usize, v: usize) -> Vec<([usize; 3], i64)> {
    let cap = w.min(v);
    let mut out = Vec::new();
    for a in 0..=cap {
        for b in a..=cap {
            for c in b..=cap {
                if c > a + b {
                    continue;
                }
                let sigma = (a + b - c) as i64;
                for delta in -sigma..=sigma {
                    let t = (sigma + delta) / 2;
                    let s = (sigma - delta) / 2;
                    if (sigma + delta) % 2 != 0 {
                        continue;
                    }
                    if realizable_cw(a, b, t as usize, s as usize, w, v) {
                        out.push(([a, b, c], delta));
                    }
                }
            }
        }
    }
    out
}

/// Enumerate the canonical variable set of an unrestricted `(n,d)` model.
pub fn enumerate_unrestricted(n: usize, d: usize, even_only: bool) -> Vec<VariableKey> {
    let mut keys: Vec<VariableKey> = unrestricted_orbits(n)
        .into_iter()
        .filter_map(|[a, b, c]| {
            canonical_key_unrestricted(a, b, (a + b - c) / 2, n, d, even_only)
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys
}

/// Enumerate the canonical variable set of a constant-weight `(n,d,w)`
/// model with `v = n - w`.
pub fn enumerate_cw(w: usize, v: usize, d: usize) -> Vec<VariableKey> {
    let mut keys: Vec<VariableKey> = cw_orbits(w, v)
        .into_iter()
        .filter_map(|([a, b, c], delta)| {
            let sigma = (a + b - c) as i64;
            let t = ((sigma + delta) / 2) as usize;
            let s = ((sigma - delta) / 2) as usize;
            canonical_key_cw(a, b, t, s, w, v, d)
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_one_key() {
        assert_eq!(
            canonical_key_unrestricted(0, 0, 0, 8, 3, false),
            Some(VariableKey::one(false))
        );
        assert_eq!(
            canonical_key_cw(0, 0, 0, 0, 4, 6, 4),
            Some(VariableKey::one(true))
        );
    }

    #[test]
    fn swap_maps_to_same_key() {
        for n in 4..=8 {
            for i in 0..=n {
                for j in 0..=n {
                    for t in 0..=i.min(j) {
                        let a = canonical_key_unrestricted(i, j, t, n, 3, false);
                        let b = canonical_key_unrestricted(j, i, t, n, 3, false);
                        assert_eq!(a, b, "i={i} j={j} t={t} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn full_orbit_maps_to_same_key() {
        // All six triple orderings produce the same canonical key.
        let n = 9;
        let (i, j, t) = (5, 4, 2);
        let u = i + j - 2 * t;
        let base = canonical_key_unrestricted(i, j, t, n, 2, false).unwrap();
        // Arrangement with (i, u) seen from the second codeword.
        let t2 = (i + u - j) / 2;
        assert_eq!(
            canonical_key_unrestricted(i, u, t2, n, 2, false),
            Some(base)
        );
        let t3 = (j + u - i) / 2;
        assert_eq!(
            canonical_key_unrestricted(j, u, t3, n, 2, false),
            Some(base)
        );
    }

    #[test]
    fn condition_iv_excludes() {
        // distance d-1 is excluded.
        assert_eq!(canonical_key_unrestricted(3, 0, 0, 8, 4, false), None);
        // i + j - 2t inside the forbidden band is excluded.
        assert_eq!(canonical_key_unrestricted(4, 4, 3, 8, 4, false), None);
        assert!(canonical_key_unrestricted(4, 4, 2, 8, 4, false).is_some());
    }

    #[test]
    fn even_mode_excludes_odd() {
        assert_eq!(canonical_key_unrestricted(5, 0, 0, 8, 4, true), None);
        assert!(canonical_key_unrestricted(4, 0, 0, 8, 4, true).is_some());
    }

    #[test]
    fn cw_orbit_consistency() {
        // Whenever two (i,j,t,s) tuples share multiset and t-s they share
        // the canonical key.
        let (w, v, d) = (4, 6, 4);
        for i in 0..=4usize {
            for j in 0..=4usize {
                for t in 0..=i.min(j) {
                    for s in 0..=i.min(j) {
                        let Some(k1) = canonical_key_cw(i, j, t, s, w, v, d) else {
                            continue;
                        };
                        // swap i and j keeps t, s in the first-codeword view
                        if let Some(k2) = canonical_key_cw(j, i, t, s, w, v, d) {
                            assert_eq!(k1, k2);
                        }
                        assert_eq!(k1.distance_multiset(), {
                            let mut m = [i, j, i + j - t - s];
                            m.sort_unstable();
                            m
                        });
                    }
                }
            }
        }
    }

    #[test]
    fn cw_condition_iv() {
        // 2i = d-1 impossible for even d; 2i < d excludes.
        assert_eq!(canonical_key_cw(1, 0, 0, 0, 4, 6, 4), None);
        assert!(canonical_key_cw(2, 0, 0, 0, 4, 6, 4).is_some());
    }

    #[test]
    fn variable_counts_are_stable() {
        // Determinism: two enumerations agree element-wise.
        let a = enumerate_unrestricted(18, 8, true);
        let b = enumerate_unrestricted(18, 8, true);
        assert_eq!(a, b);
        assert_eq!(a.len(), 28);
        let c = enumerate_cw(9, 14, 10);
        assert!(!c.is_empty());
        assert!(c.contains(&VariableKey::one(true)));
    }
}
