//! High-level bound entry points shared by the CLI, the examples, and the
//! acceptance tests: parameter normalisation, method dispatch, and the
//! size-parity sweeps.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::combin::binomial;
use crate::lp::{
    self, lp_bound_cw, lp_bound_unrestricted, parity_sweep_cw, parity_sweep_unrestricted,
};
use crate::sdp::{
    build_cw, build_unrestricted, solve, BuildError, CwOptions, SdpInstance, SolveOptions,
    SolveStatus, UnrestrictedOptions,
};
use crate::tbounds::BoundEngine;

/// Bounding method selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Linear program over distance distributions.
    Lp,
    /// Plain semidefinite program.
    Sdp,
    /// Semidefinite program with every sound constraint family.
    SdpPlus,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Lp => "lp",
            Method::Sdp => "sdp",
            Method::SdpPlus => "sdp-plus",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lp" => Ok(Method::Lp),
            "sdp" => Ok(Method::Sdp),
            "sdp-plus" => Ok(Method::SdpPlus),
            other => Err(format!("unknown method {other:?} (lp|sdp|sdp-plus)")),
        }
    }
}

/// Solver telemetry carried into reports.
#[derive(Clone, Debug)]
pub struct SolverInfo {
    pub status: SolveStatus,
    pub iterations: usize,
    pub primal: f64,
    pub dual: f64,
    pub min_eigenvalue: f64,
}

/// Outcome of a bound computation.
#[derive(Clone, Debug)]
pub struct BoundOutcome {
    pub bound: BigInt,
    /// Value before flooring (certified upper bound).
    pub value: f64,
    pub method: Method,
    pub families: Vec<String>,
    pub solver: Option<SolverInfo>,
}

/// Constant-weight parameters reduce along elementary symmetries before any
/// engine runs; many cases finish outright.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CwCase {
    /// The bound is this exact value.
    Exact(BigInt),
    /// Core regime `4 <= d < 2w <= n` with `d` even; engines apply.
    Core { n: usize, d: usize, w: usize },
}

/// Apply the elementary constant-weight reductions: odd `d` increments,
/// heavy `w` complements, and the degenerate regimes collapse to exact
/// sizes.
pub fn normalize_cw(n: usize, d: usize, w: usize) -> CwCase {
    assert!(n >= 1 && w <= n && d >= 1);
    let d = if d % 2 == 1 { d + 1 } else { d };
    let w = if 2 * w > n { n - w } else { w };
    if w == 0 {
        return CwCase::Exact(BigInt::one());
    }
    if d <= 2 {
        return CwCase::Exact(binomial(n as i64, w as i64));
    }
    if d == 2 * w {
        return CwCase::Exact(BigInt::from((n / w) as u64));
    }
    if d > 2 * w {
        return CwCase::Exact(BigInt::one());
    }
    CwCase::Core { n, d, w }
}

fn exact_outcome(v: BigInt, method: Method) -> BoundOutcome {
    BoundOutcome {
        value: v.to_f64().unwrap_or(f64::NAN),
        bound: v,
        method,
        families: vec!["elementary".into()],
        solver: None,
    }
}

fn solve_outcome(
    inst: &SdpInstance,
    method: Method,
    cap: BigInt,
    opts: &SolveOptions,
) -> BoundOutcome {
    let report = solve(inst, opts);
    let floored = BigInt::from((report.dual_objective + 1e-6).floor() as i64);
    BoundOutcome {
        bound: floored.min(cap),
        value: report.dual_objective,
        method,
        families: inst.meta.families.clone(),
        solver: Some(SolverInfo {
            status: report.status,
            iterations: report.iterations,
            primal: report.primal_objective,
            dual: report.dual_objective,
            min_eigenvalue: report.max_block_min_eigenvalue,
        }),
    }
}

/// Upper bound on the size of an `(n,d)` binary code.
pub fn unrestricted_bound(
    n: usize,
    d: usize,
    method: Method,
    engine: &BoundEngine,
    opts: &SolveOptions,
) -> Result<BoundOutcome, BuildError> {
    assert!(n >= 1 && d >= 1);
    if d > n {
        return Ok(exact_outcome(BigInt::one(), method));
    }
    let cap = BigInt::from(2u32).pow(n as u32);
    match method {
        Method::Lp => {
            let r = lp_bound_unrestricted(n, d, false, None);
            Ok(BoundOutcome {
                bound: r.bound.clone().min(cap),
                value: r.value.to_f64().unwrap_or(f64::NAN),
                method,
                families: r.families,
                solver: None,
            })
        }
        Method::Sdp => {
            let inst = build_unrestricted(n, d, UnrestrictedOptions::default(), None)?;
            Ok(solve_outcome(&inst, method, cap, opts))
        }
        Method::SdpPlus => {
            let inst = build_unrestricted(n, d, UnrestrictedOptions::plus(), Some(engine))?;
            Ok(solve_outcome(&inst, method, cap, opts))
        }
    }
}

/// Upper bound on the size of an `(n,d,w)` constant-weight code.
pub fn cw_bound(
    n: usize,
    d: usize,
    w: usize,
    method: Method,
    engine: &BoundEngine,
    opts: &SolveOptions,
) -> Result<BoundOutcome, BuildError> {
    let (n, d, w) = match normalize_cw(n, d, w) {
        CwCase::Exact(v) => return Ok(exact_outcome(v, method)),
        CwCase::Core { n, d, w } => (n, d, w),
    };
    let cap = binomial(n as i64, w as i64);
    match method {
        Method::Lp => {
            let r = lp_bound_cw(n, d, w, false, None);
            Ok(BoundOutcome {
                bound: r.bound.clone().min(cap),
                value: r.value.to_f64().unwrap_or(f64::NAN),
                method,
                families: r.families,
                solver: None,
            })
        }
        Method::Sdp => {
            let inst = build_cw(n, d, w, CwOptions::default(), None)?;
            Ok(solve_outcome(&inst, method, cap, opts))
        }
        Method::SdpPlus => {
            let inst = build_cw(n, d, w, CwOptions::plus(), Some(engine))?;
            Ok(solve_outcome(&inst, method, cap, opts))
        }
    }
}

/// Refine an `(n,d)` bound by walking candidate sizes through the parity
/// families; returns the refined bound (never larger than `base`).
pub fn sweep_unrestricted_bound(n: usize, d: usize, base: &BigInt) -> BigInt {
    match base.to_u64() {
        Some(start) if start >= 1 => BigInt::from(parity_sweep_unrestricted(n, d, start)),
        _ => base.clone(),
    }
}

/// Constant-weight analogue of [`sweep_unrestricted_bound`].
pub fn sweep_cw_bound(n: usize, d: usize, w: usize, base: &BigInt) -> BigInt {
    let (n, d, w) = match normalize_cw(n, d, w) {
        CwCase::Exact(v) => return v.min(base.clone()),
        CwCase::Core { n, d, w } => (n, d, w),
    };
    match base.to_u64() {
        Some(start) if start >= 1 => BigInt::from(parity_sweep_cw(n, d, w, start)),
        _ => base.clone(),
    }
}

/// Verification sweep: for every `(n,d)` and `(n,d,w)` with `n <= max_n`,
/// check that the requested bounds dominate the exact search and that the
/// semidefinite bound does not exceed the linear programming bound.
pub fn oracle_dominance_sweep(
    max_n: usize,
    max_d: usize,
    budget: u64,
    opts: &SolveOptions,
) -> Result<Vec<String>, String> {
    let engine = BoundEngine::default();
    let mut failures = Vec::new();
    for n in 1..=max_n {
        for d in 1..=n.min(max_d) {
            let exact = crate::oracle::exact_max_code(n, d, &crate::oracle::ConstraintSet::empty(), budget);
            let lp = unrestricted_bound(n, d, Method::Lp, &engine, opts).map_err(|e| e.to_string())?;
            let sdp = unrestricted_bound(n, d, Method::Sdp, &engine, opts).map_err(|e| e.to_string())?;
            let exact_big = BigInt::from(exact.size as u64);
            if lp.bound < exact_big {
                failures.push(format!("lp({n},{d}) = {} < exact {}", lp.bound, exact.size));
            }
            if sdp.bound < exact_big {
                failures.push(format!("sdp({n},{d}) = {} < exact {}", sdp.bound, exact.size));
            }
            if sdp.value > lp.value + 1e-6 {
                failures.push(format!(
                    "sdp({n},{d}) value {} exceeds lp value {}",
                    sdp.value, lp.value
                ));
            }
            for w in 0..=n {
                let exact =
                    crate::oracle::exact_max_code(n, d, &crate::oracle::ConstraintSet::weight(n, w), budget);
                let lp = cw_bound(n, d, w, Method::Lp, &engine, opts).map_err(|e| e.to_string())?;
                let sdp = cw_bound(n, d, w, Method::Sdp, &engine, opts).map_err(|e| e.to_string())?;
                let exact_big = BigInt::from(exact.size as u64);
                if lp.bound < exact_big {
                    failures.push(format!("lp({n},{d},{w}) = {} < exact {}", lp.bound, exact.size));
                }
                if sdp.bound < exact_big {
                    failures.push(format!("sdp({n},{d},{w}) = {} < exact {}", sdp.bound, exact.size));
                }
                if sdp.value > lp.value + 1e-6 {
                    failures.push(format!(
                        "sdp({n},{d},{w}) value {} exceeds lp value {}",
                        sdp.value, lp.value
                    ));
                }
            }
        }
    }
    Ok(failures)
}

/// Build the provider-backed engine used by table-assisted runs, loading
/// tables and a warm cache when supplied.
pub fn engine_with_tables(
    dcw: Option<&std::path::Path>,
    dbw: Option<&std::path::Path>,
    cache: Option<&std::path::Path>,
) -> Result<BoundEngine, crate::tbounds::TableError> {
    let dcw = dcw
        .map(|p| crate::tbounds::ingest_table(p, crate::tbounds::TableKind::Dcw))
        .transpose()?;
    let dbw = dbw
        .map(|p| crate::tbounds::ingest_table(p, crate::tbounds::TableKind::Dbw))
        .transpose()?;
    let engine = BoundEngine::new(dcw, dbw);
    if let Some(path) = cache {
        engine.load_cache(path);
    }
    Ok(engine)
}

/// Print-constraint support: all linear rows of the instance the method
/// would solve, in cleared `B`-space form where possible.
pub fn constraint_listing(inst: &SdpInstance) -> Vec<String> {
    let bridge = match inst.meta.w {
        Some(w) => lp::Bridge::Cw {
            w,
            v: inst.meta.n - w,
        },
        None => lp::Bridge::Unrestricted { n: inst.meta.n },
    };
    inst.linear_constraints
        .iter()
        .map(|c| {
            let pure_b = c.coeffs.keys().all(|k| match (bridge, k) {
                (lp::Bridge::Unrestricted { .. }, crate::sdp::VariableKey::Unrestricted { i: 0, t: 0, .. }) => true,
                (lp::Bridge::Cw { .. }, crate::sdp::VariableKey::Cw { i: 0, t: 0, s: 0, .. }) => true,
                _ => false,
            });
            if pure_b {
                bridge.b_space(c).to_string()
            } else {
                let terms: Vec<String> = c
                    .coeffs
                    .iter()
                    .map(|(k, v)| format!("{v} {k}"))
                    .collect();
                let rel = match c.relation {
                    lp::Relation::Le => "<=",
                    lp::Relation::Eq => "=",
                    lp::Relation::Ge => ">=",
                };
                format!("{} {rel} {}  [{}]", terms.join(" + "), c.rhs, c.tag)
            }
        })
        .collect()
}
