//! Assembly of full linear programming bounds and size-parity sweeps.
//!
//! The bound programs maximise the code size `1 + sum B_i` over admissible
//! distance distributions; the sweep programs instead fix a candidate size
//! `M` and ask whether any distribution survives the size-dependent rows,
//! walking `M` downward until one does.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::sdp::VariableKey;

use super::cw::{
    build_q_table, delsarte_constraints_cw, h1_families, theorem11_constraint,
    theorem13_constraints, theorem14_constraints, theorem8_constraints, TProvider,
};
use super::simplex::{solve_lp, LpStatus};
use super::unrestricted::{delsarte_constraints_unrestricted, mel_constraints, ParityMode};
use super::{Bridge, ConstraintTag, LinearConstraint, LpProblem, Relation};

/// Result of a linear programming bound.
#[derive(Clone, Debug)]
pub struct LpBoundReport {
    /// Exact optimum of the program (already including the diagonal term).
    pub value: BigRational,
    /// Floored integer bound.
    pub bound: BigInt,
    /// Names of the constraint families that entered the program.
    pub families: Vec<String>,
}

fn b_problem(
    bridge: Bridge,
    dists: &[usize],
    constraints: Vec<LinearConstraint>,
) -> LpProblem {
    let mut p = LpProblem {
        variables: dists.iter().map(|&dd| bridge.b_key(dd).0).collect(),
        ..LpProblem::default()
    };
    for &dd in dists {
        let (key, scale) = bridge.b_key(dd);
        p.objective.insert(key, scale);
    }
    p.constraints = constraints;
    p
}

fn finish(value: BigRational, families: Vec<String>) -> LpBoundReport {
    let total = value + BigRational::one();
    LpBoundReport {
        bound: total.floor().to_integer(),
        value: total,
        families,
    }
}

/// Linear programming upper bound on the size of an `(n,d)` code.
///
/// The base program carries the Krawtchouk rows; `mel` adds the tail
/// covering rows, with constant-weight sizes bounded through `provider`.
pub fn lp_bound_unrestricted(
    n: usize,
    d: usize,
    mel: bool,
    provider: Option<&dyn TProvider>,
) -> LpBoundReport {
    assert!(n >= 1 && d >= 1);
    if d > n {
        return finish(BigRational::zero(), vec![]);
    }
    let mut families = vec!["delsarte".to_string()];
    let mut rows = delsarte_constraints_unrestricted(n, d, ParityMode::Plain).rows;
    if mel && d % 2 == 0 {
        let provider = provider.expect("tail rows need a bound provider");
        rows.extend(mel_constraints(n, d, |nn, ww| provider.awd(nn, d, ww)));
        families.push("mel".to_string());
    }
    let dists: Vec<usize> = (d..=n).collect();
    let p = b_problem(Bridge::Unrestricted { n }, &dists, rows);
    let sol = solve_lp(&p);
    assert_eq!(sol.status, LpStatus::Optimal, "bound program must be bounded");
    finish(sol.value.unwrap(), families)
}

/// Linear programming upper bound on the size of an `(n,d,w)` code in the
/// core regime `4 <= d < 2w <= n`, `d` even.
///
/// `families` additionally injects the sphere-cap rows derived from the
/// bound engine.
pub fn lp_bound_cw(
    n: usize,
    d: usize,
    w: usize,
    families: bool,
    provider: Option<&dyn TProvider>,
) -> LpBoundReport {
    assert!(d % 2 == 0 && d < 2 * w && 2 * w <= n);
    let mut names = vec!["t7".to_string()];
    let mut rows = delsarte_constraints_cw(n, d, w);
    if families {
        let provider = provider.expect("sphere-cap rows need a bound provider");
        rows.extend(cw_family_rows(n, d, w, provider, &mut names));
    }
    let dists: Vec<usize> = (d / 2..=w).map(|i| 2 * i).collect();
    let p = b_problem(Bridge::Cw { w, v: n - w }, &dists, rows);
    let sol = solve_lp(&p);
    assert_eq!(sol.status, LpStatus::Optimal, "bound program must be bounded");
    finish(sol.value.unwrap(), names)
}

/// Packing and collision rows from the family recipe.
pub fn family_rows_11_13(
    n: usize,
    d: usize,
    w: usize,
    provider: &dyn TProvider,
) -> Vec<LinearConstraint> {
    let fams = h1_families(n, d, w);
    let q = build_q_table(n, d, w, &fams, provider);
    let mut rows = Vec::new();
    for fam in &fams {
        match fam.pair {
            None => {
                rows.push(
                    theorem11_constraint(&fam.set, &q, n, d, w)
                        .expect("recipe family satisfies the packing precondition"),
                );
            }
            Some((i, j)) => {
                rows.extend(
                    theorem13_constraints(&fam.set, i, j, &q, n, d, w)
                        .expect("recipe family satisfies the collision precondition"),
                );
            }
        }
    }
    rows
}

/// Pairwise bounded-weight rows over all eligible class pairs.
pub fn family_rows_14(
    n: usize,
    d: usize,
    w: usize,
    provider: &dyn TProvider,
) -> Vec<LinearConstraint> {
    let q = build_q_table(n, d, w, &h1_families(n, d, w), provider);
    let half = d / 2;
    let mut rows = Vec::new();
    for i in half..=w {
        for j in i + 1..=w {
            if i + j <= n - half {
                rows.extend(theorem14_constraints(i, j, &q, n, d, w));
            }
        }
    }
    rows
}

/// All sphere-cap row families for a core-regime `(n,d,w)` problem.
pub fn cw_family_rows(
    n: usize,
    d: usize,
    w: usize,
    provider: &dyn TProvider,
    names: &mut Vec<String>,
) -> Vec<LinearConstraint> {
    let mut rows = family_rows_11_13(n, d, w, provider);
    if !rows.is_empty() {
        names.push("t11/t13".to_string());
    }
    let t14 = family_rows_14(n, d, w, provider);
    if !t14.is_empty() {
        names.push("t14".to_string());
    }
    rows.extend(t14);
    rows
}

fn feasible(p: &LpProblem) -> bool {
    solve_lp(p).status != LpStatus::Infeasible
}

fn size_row(bridge: Bridge, dists: &[usize], m: u64) -> LinearConstraint {
    let mut c = LinearConstraint::new(ConstraintTag::CondI, Relation::Eq);
    for &dd in dists {
        let (key, scale) = bridge.b_key(dd);
        c.add(key, scale);
    }
    c.rhs = BigRational::from(BigInt::from(m)) - BigRational::one();
    c
}

/// Walk candidate sizes `start, start-1, ...` for an `(n,d)` code and
/// return the largest one not refuted by the size-parity rows.
///
/// Odd sizes use the odd refinement, sizes 2 mod 4 the disjunctive
/// refinement (a size is refuted only when every hidden-weight alternative
/// is infeasible), other sizes only the plain rows.
pub fn parity_sweep_unrestricted(n: usize, d: usize, start: u64) -> u64 {
    let bridge = Bridge::Unrestricted { n };
    let dists: Vec<usize> = (d..=n).collect();
    for m in (1..=start).rev() {
        let mode = match m % 4 {
            1 | 3 => ParityMode::OddM(m),
            2 => ParityMode::Mod4M(m),
            _ => ParityMode::Plain,
        };
        let fam = delsarte_constraints_unrestricted(n, d, mode);
        let admissible = if fam.alternatives.is_empty() {
            let mut rows = fam.rows;
            rows.push(size_row(bridge, &dists, m));
            feasible(&b_problem(bridge, &dists, rows))
        } else {
            fam.alternatives.into_iter().any(|mut rows| {
                rows.push(size_row(bridge, &dists, m));
                feasible(&b_problem(bridge, &dists, rows))
            })
        };
        if admissible {
            return m;
        }
    }
    1
}

/// Constant-weight analogue of [`parity_sweep_unrestricted`], refuting
/// candidate sizes through the size-dependent odd-sum rows.
pub fn parity_sweep_cw(n: usize, d: usize, w: usize, start: u64) -> u64 {
    assert!(d % 2 == 0 && d < 2 * w && 2 * w <= n);
    let bridge = Bridge::Cw { w, v: n - w };
    let dists: Vec<usize> = (d / 2..=w).map(|i| 2 * i).collect();
    for m in (1..=start).rev() {
        let mut rows = delsarte_constraints_cw(n, d, w);
        rows.extend(theorem8_constraints(n, d, w, m));
        rows.push(size_row(bridge, &dists, m));
        if feasible(&b_problem(bridge, &dists, rows)) {
            return m;
        }
    }
    1
}

/// Exact optimum of the plain constant-weight program, used by the bound
/// engine as its single-block rule. `None` outside the core regime.
pub fn cw_delsarte_lp_value(n: usize, d: usize, w: usize) -> Option<BigRational> {
    if !(d % 2 == 0 && d >= 4 && d < 2 * w && 2 * w <= n) {
        return None;
    }
    let rows = delsarte_constraints_cw(n, d, w);
    let dists: Vec<usize> = (d / 2..=w).map(|i| 2 * i).collect();
    let p = b_problem(Bridge::Cw { w, v: n - w }, &dists, rows);
    let sol = solve_lp(&p);
    match sol.status {
        LpStatus::Optimal => Some(sol.value.unwrap() + BigRational::one()),
        _ => None,
    }
}

/// Convenience: key for the `B_dist` variable of either kind.
pub fn b_key_for(bridge: Bridge, dist: usize) -> VariableKey {
    bridge.b_key(dist).0
}
