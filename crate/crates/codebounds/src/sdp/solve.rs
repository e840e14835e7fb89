//! Dense primal-dual interior-point solver for the block-diagonal models.
//!
//! The model is the linear-matrix-inequality form `maximise c'x subject to
//! M_b(x) = G_b + sum_i x_i F_{b,i} >= 0` over a handful of small dense
//! blocks plus scalarised inequality rows. The solver runs a predictor-
//! corrector scheme on the pair
//!
//! ```text
//!   max c'x, M(x) = S >= 0      |      min <G,Y>, <F_i,Y> = -c_i, Y >= 0
//! ```
//!
//! and certifies the reported bound from the `Y` side: any `Y >= 0` gives
//! `c'x <= <G,Y> + sum_i max(lo_i e_i, hi_i e_i)` with `e_i = c_i +
//! <F_i,Y>`, where `[lo_i, hi_i]` boxes the feasible variables. The
//! multiplier matrix is projected onto the cone before the certificate is
//! evaluated, so solver convergence quality only affects the size of the
//! inflation, never the validity of the bound.
//!
//! Equality rows are eliminated exactly (over the rationals) before any
//! float enters, so the interior-point iteration never sees a problem
//! without strict interior.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::lp::Relation;

use super::model::SdpInstance;
use super::psd::min_eigenvalue;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    NumericalFailure,
    Infeasible,
}

/// Outcome of a solve. `dual_objective` is the certified upper bound on the
/// model optimum; `primal_objective` is the value attained by the returned
/// point and is reported for gap inspection only.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    /// Worst (smallest) eigenvalue over the blocks evaluated at the
    /// returned point.
    pub max_block_min_eigenvalue: f64,
    /// Values of the instance variables at the returned point.
    pub x: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub feas_tol: f64,
    pub gap_tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            feas_tol: 1e-8,
            gap_tol: 1e-7,
            max_iter: 200,
        }
    }
}

/// One variable of the presolved problem expressed over free variables.
#[derive(Clone, Debug)]
struct Expr {
    constant: BigRational,
    terms: Vec<(usize, BigRational)>, // over original variable indices (free)
}

impl Expr {
    fn var(ix: usize) -> Self {
        Expr {
            constant: BigRational::zero(),
            terms: vec![(ix, BigRational::from_integer(1.into()))],
        }
    }
}

struct PBlock {
    dim: usize,
    g: DMatrix<f64>,
    f: Vec<(usize, DMatrix<f64>)>,
}

struct PRow {
    a: Vec<(usize, f64)>, // a·x <= g
    g: f64,
}

struct Presolved {
    m: usize,
    c: Vec<f64>,
    var_scale: Vec<f64>,
    obj_scale: f64,
    obj_const: f64,
    blocks: Vec<PBlock>,
    lp: Vec<PRow>,
    boxes: Vec<(f64, f64)>,
    /// original index of each free variable
    free: Vec<usize>,
    /// per original variable, its expression over free variables
    exprs: Vec<Expr>,
    infeasible: bool,
}

fn resolve(exprs: &BTreeMap<usize, Expr>, form: &BTreeMap<usize, BigRational>) -> Expr {
    let mut constant = BigRational::zero();
    let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (ix, coeff) in form {
        match exprs.get(ix) {
            Some(e) => {
                constant += coeff * &e.constant;
                for (jx, c2) in &e.terms {
                    let slot = acc.entry(*jx).or_insert_with(BigRational::zero);
                    *slot += coeff * c2;
                }
            }
            None => {
                let slot = acc.entry(*ix).or_insert_with(BigRational::zero);
                *slot += coeff.clone();
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Expr {
        constant,
        terms: acc.into_iter().collect(),
    }
}

fn presolve(instance: &SdpInstance) -> Presolved {
    let m0 = instance.variables.len();
    let key_index: BTreeMap<_, _> = instance
        .variables
        .iter()
        .enumerate()
        .map(|(ix, k)| (*k, ix))
        .collect();

    // Exact Gaussian elimination of the equality rows.
    let mut subs: BTreeMap<usize, Expr> = BTreeMap::new();
    let mut infeasible = false;
    for row in &instance.linear_constraints {
        if row.relation != Relation::Eq {
            continue;
        }
        let form: BTreeMap<usize, BigRational> = row
            .coeffs
            .iter()
            .map(|(k, v)| (key_index[k], v.clone()))
            .collect();
        let mut resolved = resolve(&subs, &form);
        resolved.constant -= &row.rhs;
        // resolved == 0 must hold; pick the first variable as pivot.
        if resolved.terms.is_empty() {
            if !resolved.constant.is_zero() {
                infeasible = true;
            }
            continue;
        }
        let (pivot, pcoef) = resolved.terms.remove(0);
        let expr = Expr {
            constant: -&resolved.constant / &pcoef,
            terms: resolved
                .terms
                .into_iter()
                .map(|(ix, c)| (ix, -c / &pcoef))
                .collect(),
        };
        // Substitute the new pivot into all stored expressions.
        for e in subs.values_mut() {
            if let Some(pos) = e.terms.iter().position(|(ix, _)| *ix == pivot) {
                let (_, coeff) = e.terms.remove(pos);
                e.constant += &coeff * &expr.constant;
                for (jx, c2) in &expr.terms {
                    match e.terms.iter_mut().find(|(ix, _)| ix == jx) {
                        Some((_, slot)) => *slot += &coeff * c2,
                        None => e.terms.push((*jx, &coeff * c2)),
                    }
                }
                e.terms.retain(|(_, c)| !c.is_zero());
                e.terms.sort_by_key(|(ix, _)| *ix);
            }
        }
        subs.insert(pivot, expr);
    }

    let free: Vec<usize> = (0..m0).filter(|ix| !subs.contains_key(ix)).collect();
    let free_pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(p, ix)| (*ix, p)).collect();
    let exprs: Vec<Expr> = (0..m0)
        .map(|ix| match subs.get(&ix) {
            Some(e) => e.clone(),
            None => Expr::var(ix),
        })
        .collect();
    let m = free.len();

    let to_f64 = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);

    // Objective over free variables.
    let mut c = vec![0.0; m];
    let obj_const;
    {
        let form: BTreeMap<usize, BigRational> = instance
            .objective
            .iter()
            .map(|(ix, v)| (*ix, v.clone()))
            .collect();
        let e = resolve(&subs, &form);
        obj_const = to_f64(&e.constant);
        for (ix, coeff) in &e.terms {
            c[free_pos[ix]] = to_f64(coeff);
        }
    }

    // PSD blocks, substituted and scaled.
    let mut blocks: Vec<PBlock> = Vec::new();
    for block in &instance.psd_blocks {
        let dim = block.dim();
        if dim == 0 {
            continue;
        }
        let mut g = DMatrix::zeros(dim, dim);
        let mut fmats: BTreeMap<usize, DMatrix<f64>> = BTreeMap::new();
        for r in 0..dim {
            for cc in r..dim {
                let e = resolve(&subs, &block.entries[r][cc]);
                let gv = to_f64(&e.constant);
                g[(r, cc)] = gv;
                g[(cc, r)] = gv;
                for (ix, coeff) in &e.terms {
                    let fm = fmats
                        .entry(free_pos[ix])
                        .or_insert_with(|| DMatrix::zeros(dim, dim));
                    let v = to_f64(coeff);
                    fm[(r, cc)] = v;
                    fm[(cc, r)] = v;
                }
            }
        }
        // Structurally zero rows force permanent singularity (no strict
        // interior); the principal submatrix on the live indices is an
        // exactly equivalent constraint.
        let mut rowmax = vec![0.0f64; dim];
        for r in 0..dim {
            for cc in 0..dim {
                rowmax[r] = rowmax[r].max(g[(r, cc)].abs());
                for fm in fmats.values() {
                    rowmax[r] = rowmax[r].max(fm[(r, cc)].abs());
                }
            }
        }
        let kept: Vec<usize> = (0..dim).filter(|&r| rowmax[r] > 0.0).collect();
        if kept.is_empty() {
            continue;
        }
        if kept.len() < dim {
            g = DMatrix::from_fn(kept.len(), kept.len(), |r, cc| g[(kept[r], kept[cc])]);
            for fm in fmats.values_mut() {
                *fm = DMatrix::from_fn(kept.len(), kept.len(), |r, cc| fm[(kept[r], kept[cc])]);
            }
            rowmax = kept.iter().map(|&r| rowmax[r]).collect();
        }
        let dim = kept.len();
        // Symmetric diagonal scaling to tame the coefficient spread.
        let dscale: Vec<f64> = rowmax
            .iter()
            .map(|&v| 1.0 / v.max(1e-12).sqrt())
            .collect();
        for r in 0..dim {
            for cc in 0..dim {
                let s = dscale[r] * dscale[cc];
                g[(r, cc)] *= s;
                for fm in fmats.values_mut() {
                    fm[(r, cc)] *= s;
                }
            }
        }
        blocks.push(PBlock {
            dim,
            g,
            f: fmats.into_iter().filter(|(_, fm)| fm.amax() > 0.0).collect(),
        });
    }

    // Inequality rows plus boxes of eliminated variables.
    let mut lp: Vec<PRow> = Vec::new();
    let mut push_row = |terms: &[(usize, BigRational)], rhs: BigRational, flip: bool| {
        // flip=false: sum terms <= rhs ; flip=true: sum terms >= rhs
        let sgn = if flip { -1.0 } else { 1.0 };
        let mut a: Vec<(usize, f64)> = terms
            .iter()
            .map(|(ix, coeff)| (free_pos[ix], sgn * to_f64(coeff)))
            .collect();
        let g = sgn * to_f64(&rhs);
        if a.is_empty() {
            if g < 0.0 {
                return Some(());
            }
            return None;
        }
        let scale = a
            .iter()
            .map(|(_, v)| v.abs())
            .fold(g.abs(), f64::max)
            .max(1e-12);
        for (_, v) in a.iter_mut() {
            *v /= scale;
        }
        lp.push(PRow { a, g: g / scale });
        None
    };
    for row in &instance.linear_constraints {
        if row.relation == Relation::Eq {
            continue;
        }
        let form: BTreeMap<usize, BigRational> = row
            .coeffs
            .iter()
            .map(|(k, v)| (key_index[k], v.clone()))
            .collect();
        let mut e = resolve(&subs, &form);
        let rhs = &row.rhs - &e.constant;
        e.constant = BigRational::zero();
        let bad = push_row(&e.terms, rhs, row.relation == Relation::Ge);
        if bad.is_some() {
            infeasible = true;
        }
    }
    for (ix, expr) in exprs.iter().enumerate() {
        if free_pos.contains_key(&ix) {
            continue;
        }
        let (lo, hi) = instance.var_box[ix];
        if expr.terms.is_empty() {
            let v = to_f64(&expr.constant);
            if v < lo - 1e-12 || v > hi + 1e-12 {
                infeasible = true;
            }
            continue;
        }
        let lo_r = BigRational::from_float(lo).unwrap() - &expr.constant;
        let hi_r = BigRational::from_float(hi).unwrap() - &expr.constant;
        if push_row(&expr.terms, hi_r, false).is_some() {
            infeasible = true;
        }
        if push_row(&expr.terms, lo_r, true).is_some() {
            infeasible = true;
        }
    }

    // Per-variable normalisation: scale every variable so its stacked
    // constraint-matrix column has unit maximum entry. This balances the
    // Schur system of the interior-point method.
    let mut var_scale = vec![0.0f64; m];
    for b in &blocks {
        for (ix, fm) in &b.f {
            var_scale[*ix] = var_scale[*ix].max(fm.amax());
        }
    }
    for row in &lp {
        for (ix, av) in &row.a {
            var_scale[*ix] = var_scale[*ix].max(av.abs());
        }
    }
    for v in var_scale.iter_mut() {
        if *v <= 0.0 {
            *v = 1.0;
        }
    }
    for b in blocks.iter_mut() {
        for (ix, fm) in b.f.iter_mut() {
            *fm /= var_scale[*ix];
        }
    }
    for row in lp.iter_mut() {
        for (ix, av) in row.a.iter_mut() {
            *av /= var_scale[*ix];
        }
    }
    for (k, v) in c.iter_mut().enumerate() {
        *v /= var_scale[k];
    }

    let obj_scale = c.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    for v in c.iter_mut() {
        *v /= obj_scale;
    }

    let boxes: Vec<(f64, f64)> = free
        .iter()
        .enumerate()
        .map(|(k, &ix)| {
            let (lo, hi) = instance.var_box[ix];
            (lo * var_scale[k], hi * var_scale[k])
        })
        .collect();

    Presolved {
        m,
        c,
        var_scale,
        obj_scale,
        obj_const,
        blocks,
        lp,
        boxes,
        free,
        exprs,
        infeasible,
    }
}

/// Block-diagonal symmetric iterate.
struct Iterate {
    y_blocks: Vec<DMatrix<f64>>,
    s_blocks: Vec<DMatrix<f64>>,
    y_lp: DVector<f64>,
    s_lp: DVector<f64>,
    x: DVector<f64>,
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Largest step `alpha` with `S + alpha D` remaining positive definite,
/// computed through the Cholesky factor of `S`.
fn max_step(s: &DMatrix<f64>, d: &DMatrix<f64>) -> f64 {
    let Some(chol) = s.clone().cholesky() else {
        return 0.0;
    };
    let l_inv = chol.l().try_inverse().expect("triangular inverse");
    let w = &l_inv * d * l_inv.transpose();
    let lam = min_eigenvalue(&sym(&w)).unwrap_or(0.0);
    if lam >= -1e-14 {
        f64::INFINITY
    } else {
        -1.0 / lam
    }
}

fn max_step_vec(s: &DVector<f64>, d: &DVector<f64>) -> f64 {
    let mut best = f64::INFINITY;
    for (sv, dv) in s.iter().zip(d.iter()) {
        if *dv < 0.0 {
            best = best.min(-sv / dv);
        }
    }
    best
}


/// Dense two-phase simplex in floats, used to re-optimise the linear-row
/// multipliers of a certificate. Minimises `cost . z` subject to `A z =
/// rhs`, `z >= 0`. Returns `None` when no feasible basis is found.
fn float_simplex_min_eq(a: &[Vec<f64>], rhs: &[f64], cost: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    let nv = cost.len();
    if m == 0 {
        return Some(vec![0.0; nv]);
    }
    let ncols = nv + m; // artificial basis
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut b = vec![0.0f64; m];
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = vec![0.0f64; ncols];
        let flip = rhs[r] < 0.0;
        for c in 0..nv {
            row[c] = if flip { -a[r][c] } else { a[r][c] };
        }
        row[nv + r] = 1.0;
        b[r] = rhs[r].abs();
        t.push(row);
        basis.push(nv + r);
    }

    let tol = 1e-9;
    let run = |t: &mut Vec<Vec<f64>>,
                   b: &mut Vec<f64>,
                   basis: &mut Vec<usize>,
                   cost: &[f64],
                   allowed: usize|
     -> bool {
        for _ in 0..20_000 {
            // reduced costs
            let mut entering = None;
            for j in 0..allowed {
                if basis.contains(&j) {
                    continue;
                }
                let mut red = cost.get(j).copied().unwrap_or(0.0);
                for r in 0..m {
                    let cb = cost.get(basis[r]).copied().unwrap_or(0.0);
                    if cb != 0.0 {
                        red -= cb * t[r][j];
                    }
                }
                if red < -tol {
                    entering = Some(j);
                    break; // Bland
                }
            }
            let Some(col) = entering else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                if t[r][col] > tol {
                    let ratio = b[r] / t[r][col];
                    let better = match leave {
                        None => true,
                        Some((lr, lv)) => {
                            ratio < lv - 1e-12
                                || (ratio < lv + 1e-12 && basis[r] < basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else { return false };
            let piv = t[row][col];
            for j in 0..ncols {
                t[row][j] /= piv;
            }
            b[row] /= piv;
            for r in 0..m {
                if r == row {
                    continue;
                }
                let f = t[r][col];
                if f == 0.0 {
                    continue;
                }
                for j in 0..ncols {
                    t[r][j] -= f * t[row][j];
                }
                b[r] -= f * b[row];
            }
            basis[row] = col;
        }
        false
    };

    // Phase 1: drive out the artificial basis.
    let mut phase1 = vec![0.0f64; ncols];
    for c in nv..ncols {
        phase1[c] = 1.0;
    }
    if !run(&mut t, &mut b, &mut basis, &phase1, ncols) {
        return None;
    }
    let w: f64 = basis
        .iter()
        .zip(b.iter())
        .filter(|(bi, _)| **bi >= nv)
        .map(|(_, v)| v)
        .sum();
    if w > 1e-7 {
        return None;
    }
    if !run(&mut t, &mut b, &mut basis, cost, nv) {
        return None;
    }
    let mut z = vec![0.0f64; nv];
    for (r, &bi) in basis.iter().enumerate() {
        if bi < nv {
            z[bi] = b[r].max(0.0);
        }
    }
    Some(z)
}

/// Certificate with linear-row multipliers re-optimised by a cleanup
/// program: fix the cone-projected block multipliers, then choose the row
/// and box multipliers minimising the certified value subject to exact
/// coverage of the objective coefficients. Any leftover coverage error is
/// paid for through the variable boxes.
fn cleanup_bound(p: &Presolved, it: &Iterate) -> f64 {
    let m = p.m;
    // Cone projection with a positivity margin.
    let mut y_blocks = Vec::with_capacity(p.blocks.len());
    for yb in &it.y_blocks {
        let eig = nalgebra::SymmetricEigen::new(yb.clone());
        let vals = eig.eigenvalues.map(|v| v.max(0.0));
        let q = &eig.eigenvectors;
        let mut proj = q * DMatrix::from_diagonal(&vals) * q.transpose();
        let margin = 1e-13 * (1.0 + proj.amax());
        for i in 0..proj.nrows() {
            proj[(i, i)] += margin;
        }
        y_blocks.push(proj);
    }

    let mut value_blocks = 0.0;
    for (b, yb) in p.blocks.iter().zip(&y_blocks) {
        value_blocks += frob(&b.g, yb);
    }
    // target_k = c_k + <F_k, Y_blocks>
    let mut target = p.c.clone();
    for (b, yb) in p.blocks.iter().zip(&y_blocks) {
        for (ix, fm) in &b.f {
            target[*ix] += frob(fm, yb);
        }
    }

    // Cleanup LP over (rows, upper boxes, lower boxes).
    let nrows = p.lp.len();
    let nv = nrows + 2 * m;
    let mut a = vec![vec![0.0f64; nv]; m];
    let mut cost = vec![0.0f64; nv];
    for (ri, row) in p.lp.iter().enumerate() {
        for (ix, av) in &row.a {
            a[*ix][ri] = *av;
        }
        cost[ri] = row.g;
    }
    for k in 0..m {
        a[k][nrows + k] = 1.0;
        cost[nrows + k] = p.boxes[k].1;
        a[k][nrows + m + k] = -1.0;
        cost[nrows + m + k] = -p.boxes[k].0;
    }

    let fallback = |target: &[f64]| -> f64 {
        let mut inflation = 0.0;
        for (tv, (lo, hi)) in target.iter().zip(&p.boxes) {
            inflation += (lo * tv).max(hi * tv);
        }
        value_blocks + inflation
    };

    let dbg = std::env::var("CODEBOUNDS_CERT_TRACE").is_ok();
    match float_simplex_min_eq(&a, &target, &cost) {
        Some(z) => {
            // Honest accounting of the achieved multipliers.
            let mut value = value_blocks;
            for (zi, ci) in z.iter().zip(&cost) {
                value += zi * ci;
            }
            let mut leftover = target.clone();
            for k in 0..m {
                for (ri, row) in p.lp.iter().enumerate() {
                    let _ = row;
                    if a[k][ri] != 0.0 {
                        leftover[k] -= a[k][ri] * z[ri];
                    }
                }
                leftover[k] -= z[nrows + k];
                leftover[k] += z[nrows + m + k];
            }
            let mut slack = 0.0;
            for (lv, (lo, hi)) in leftover.iter().zip(&p.boxes) {
                slack += (lo * lv).max(hi * lv);
            }
            if dbg {
                let lp_part: f64 = z.iter().zip(&cost).map(|(a, b)| a * b).sum();
                let sl: f64 = leftover.iter().zip(&p.boxes).map(|(lv, (lo, hi))| (lo * lv).max(hi * lv)).sum();
                eprintln!("cleanup: blocks={value_blocks:.6} lp={lp_part:.6} slack={sl:.3e} total={:.6} fb={:.6}", value + sl, fallback(&target));
            }
            (value + slack).min(fallback(&target))
        }
        None => {
            if dbg {
                eprintln!("cleanup: simplex FAILED, fallback={:.6}", fallback(&target));
            }
            fallback(&target)
        }
    }
}

/// Certified upper bound from a (possibly infeasible) multiplier iterate.
fn certified_bound(p: &Presolved, it: &Iterate) -> f64 {
    // Project Y onto the cone.
    let mut y_proj = Vec::with_capacity(p.blocks.len());
    for yb in &it.y_blocks {
        let eig = nalgebra::SymmetricEigen::new(yb.clone());
        let vals = eig.eigenvalues.map(|v| v.max(0.0));
        let q = &eig.eigenvectors;
        y_proj.push(q * DMatrix::from_diagonal(&vals) * q.transpose());
    }
    let y_lp = it.y_lp.map(|v| v.max(0.0));

    let mut value = 0.0;
    for (b, yb) in p.blocks.iter().zip(&y_proj) {
        value += frob(&b.g, yb);
    }
    for (row, y) in p.lp.iter().zip(y_lp.iter()) {
        value += row.g * y;
    }

    // Residuals e_i = c_i + <F_i, Y>.
    let mut e = p.c.clone();
    for (b, yb) in p.blocks.iter().zip(&y_proj) {
        for (ix, fm) in &b.f {
            e[*ix] += frob(fm, yb);
        }
    }
    for (row, y) in p.lp.iter().zip(y_lp.iter()) {
        for (ix, a) in &row.a {
            e[*ix] += -a * y;
        }
    }
    let mut inflation = 0.0;
    for (ei, (lo, hi)) in e.iter().zip(&p.boxes) {
        inflation += (lo * ei).max(hi * ei);
    }
    value + inflation
}


fn solve_presolved(p: &Presolved, opts: &SolveOptions) -> (Iterate, SolveStatus, usize, f64) {
    let m = p.m;
    let nu: f64 = p
        .blocks
        .iter()
        .map(|b| b.dim as f64)
        .sum::<f64>()
        + p.lp.len() as f64;

    let gmax = p
        .blocks
        .iter()
        .map(|b| b.g.amax())
        .fold(1.0f64, f64::max)
        .max(p.lp.iter().map(|r| r.g.abs()).fold(0.0, f64::max));
    let eta = 10.0 * gmax.max(1.0);

    let mut it = Iterate {
        y_blocks: p
            .blocks
            .iter()
            .map(|b| DMatrix::identity(b.dim, b.dim) * eta)
            .collect(),
        s_blocks: p
            .blocks
            .iter()
            .map(|b| DMatrix::identity(b.dim, b.dim) * eta)
            .collect(),
        y_lp: DVector::repeat(p.lp.len(), eta),
        s_lp: DVector::repeat(p.lp.len(), eta),
        x: DVector::zeros(m),
    };
    if m == 0 {
        let cert = cleanup_bound(p, &it);
        return (it, SolveStatus::Optimal, 0, cert);
    }
    let mut best_cert = f64::INFINITY;
    // Heavier certificates are evaluated on a stride for large problems.
    let cert_stride = if m <= 96 { 1 } else { 3 };
    let mut since_cert_improve = 0usize;
    let mut stall = 0usize;
    let mut last_alpha = (1.0f64, 1.0f64, 0.0f64);
    let mut last_progress = (f64::INFINITY, f64::INFINITY);

    let cnorm = p.c.iter().fold(1.0f64, |a, v| a.max(v.abs()));

    for iter in 0..opts.max_iter {
        // Factorisations and residuals.
        let cert = if iter % cert_stride == 0 {
            cleanup_bound(p, &it)
        } else {
            certified_bound(p, &it)
        };
        if cert < best_cert - 1e-9 * (1.0 + best_cert.abs()) {
            best_cert = cert.min(best_cert);
            since_cert_improve = 0;
        } else {
            best_cert = best_cert.min(cert);
            since_cert_improve += 1;
        }
        let mut s_inv = Vec::with_capacity(p.blocks.len());
        let mut s_factor_failed = false;
        for sb in &it.s_blocks {
            match sb.clone().cholesky() {
                Some(ch) => s_inv.push(ch.inverse()),
                None => {
                    s_factor_failed = true;
                    break;
                }
            }
        }
        if s_factor_failed {
            return (it, SolveStatus::NumericalFailure, iter, best_cert);
        }

        // R_b = G + sum x_i F_i - S per block.
        let mut r_blocks = Vec::with_capacity(p.blocks.len());
        for (b, sb) in p.blocks.iter().zip(&it.s_blocks) {
            let mut r = b.g.clone() - sb;
            for (ix, fm) in &b.f {
                r += fm * it.x[*ix];
            }
            r_blocks.push(r);
        }
        let mut r_lp = DVector::zeros(p.lp.len());
        for (ri, (row, s)) in p.lp.iter().zip(it.s_lp.iter()).enumerate() {
            let ax: f64 = row.a.iter().map(|(ix, a)| a * it.x[*ix]).sum();
            r_lp[ri] = row.g - ax - s;
        }

        // r_i = -c_i - <F_i, Y>.
        let mut rprim = DVector::zeros(m);
        for i in 0..m {
            rprim[i] = -p.c[i];
        }
        for (b, yb) in p.blocks.iter().zip(&it.y_blocks) {
            for (ix, fm) in &b.f {
                rprim[*ix] -= frob(fm, yb);
            }
        }
        for (ri, row) in p.lp.iter().enumerate() {
            for (ix, a) in &row.a {
                rprim[*ix] += a * it.y_lp[ri];
            }
        }

        let gap: f64 = it
            .y_blocks
            .iter()
            .zip(&it.s_blocks)
            .map(|(y, s)| frob(y, s))
            .sum::<f64>()
            + it.y_lp.dot(&it.s_lp);
        let mu = gap / nu;

        let prim_res = rprim.amax() / (1.0 + cnorm);
        let dual_res = r_blocks
            .iter()
            .map(|r| r.amax())
            .fold(0.0f64, f64::max)
            .max(r_lp.amax())
            / (1.0 + gmax);
        let pobj: f64 = p.c.iter().zip(it.x.iter()).map(|(c, x)| c * x).sum();
        let dobj: f64 = p
            .blocks
            .iter()
            .zip(&it.y_blocks)
            .map(|(b, y)| frob(&b.g, y))
            .sum::<f64>()
            + p.lp
                .iter()
                .zip(it.y_lp.iter())
                .map(|(r, y)| r.g * y)
                .sum::<f64>();
        let rel_gap = (dobj - pobj).abs() / (1.0 + pobj.abs() + dobj.abs());

        if prim_res <= opts.feas_tol && dual_res <= opts.feas_tol && rel_gap <= opts.gap_tol {
            let cert = best_cert.min(cleanup_bound(p, &it));
            return (it, SolveStatus::Optimal, iter, cert);
        }
        // Stop when the certificate stagnates or the multiplier side
        // starts drifting; the tracked minimum stays valid regardless.
        let y_size = it
            .y_blocks
            .iter()
            .map(|y| y.amax())
            .fold(it.y_lp.amax(), f64::max);
        if since_cert_improve >= 12 || y_size > 1e14 {
            return (it, SolveStatus::MaxIterations, iter, best_cert);
        }
        let progress = (mu, prim_res.max(dual_res));
        if (progress.0 - last_progress.0).abs() <= 0.01 * last_progress.0
            && (progress.1 - last_progress.1).abs() <= 0.01 * last_progress.1
        {
            stall += 1;
            if stall >= 5 {
                return (it, SolveStatus::MaxIterations, iter, best_cert);
            }
        } else {
            stall = 0;
        }
        last_progress = progress;
        if std::env::var("CODEBOUNDS_TRACE").is_ok() {
            eprintln!(
                "it {iter:3}: mu={mu:9.2e} prim={prim_res:9.2e} dual={dual_res:9.2e} gap={rel_gap:9.2e} p={pobj:12.6} d={dobj:12.6} LAST(ap={:.2e} ad={:.2e} sg={:.2e})",
                last_alpha.0, last_alpha.1, last_alpha.2
            );
        }

        // Schur complement H and shared right-hand-side pieces.
        let mut h: DMatrix<f64> = DMatrix::zeros(m, m);
        for (b, (yb, sinv)) in p.blocks.iter().zip(it.y_blocks.iter().zip(&s_inv)) {
            let syms: Vec<(usize, DMatrix<f64>)> = b
                .f
                .iter()
                .map(|(jx, fj)| (*jx, sym(&(yb * fj * sinv))))
                .collect();
            for (pos_i, (ix, fi)) in b.f.iter().enumerate() {
                for (jx, symj) in syms.iter().skip(pos_i) {
                    let v = frob(fi, symj);
                    h[(*ix, *jx)] += v;
                    if ix != jx {
                        h[(*jx, *ix)] += v;
                    }
                }
            }
        }
        for (ri, row) in p.lp.iter().enumerate() {
            let w = it.y_lp[ri] / it.s_lp[ri];
            for (ix, ai) in &row.a {
                for (jx, aj) in &row.a {
                    h[(*ix, *jx)] += w * ai * aj;
                }
            }
        }
        // Tikhonov guard for degenerate geometry, escalated until the
        // factorisation succeeds.
        let hmax = h.amax().max(1.0);
        let mut chol_h = None;
        for reg in [1e-13, 1e-10, 1e-7] {
            let mut hr = h.clone();
            for i in 0..m {
                hr[(i, i)] += reg * hmax;
            }
            if let Some(ch) = hr.cholesky() {
                chol_h = Some(ch);
                break;
            }
        }
        let Some(chol_h) = chol_h else {
            return (it, SolveStatus::NumericalFailure, iter, best_cert);
        };
        if std::env::var("CODEBOUNDS_TRACE").is_ok() && iter % 15 == 14 {
            let mut worst = (0usize, 0.0f64);
            for i in 0..m {
                if rprim[i].abs() > worst.1 {
                    worst = (i, rprim[i].abs());
                }
            }
            eprintln!(
                "   stuck var: free#{} |r|={:.2e} H[kk]={:.2e} hmax={:.2e}",
                worst.0, worst.1, h[(worst.0, worst.0)], h.amax()
            );
        }
        let solve_h = |rhs: &DVector<f64>| -> DVector<f64> {
            let mut dx = chol_h.solve(rhs);
            let resid = rhs - &h * &dx;
            dx += chol_h.solve(&resid);
            dx
        };

        // One direction for a given sigma and second-order correction.
        let direction = |sigma_mu: f64,
                         corr_blocks: Option<&Vec<DMatrix<f64>>>,
                         corr_lp: Option<&DVector<f64>>|
         -> (DVector<f64>, Vec<DMatrix<f64>>, DVector<f64>, Vec<DMatrix<f64>>, DVector<f64>) {
            let mut rhs = DVector::zeros(m);
            for i in 0..m {
                rhs[i] = p.c[i];
            }
            for (bi, b) in p.blocks.iter().enumerate() {
                // K = Sym((Y R + correction) S^{-1})
                let sinv = &s_inv[bi];
                let mut inner = &it.y_blocks[bi] * &r_blocks[bi];
                if let Some(corr) = corr_blocks {
                    inner += &corr[bi];
                }
                let k = sym(&(inner * sinv));
                for (ix, fm) in &b.f {
                    rhs[*ix] += sigma_mu * frob(fm, sinv) - frob(fm, &k);
                }
            }
            for (ri, row) in p.lp.iter().enumerate() {
                let mut inner = it.y_lp[ri] * r_lp[ri];
                if let Some(corr) = corr_lp {
                    inner += corr[ri];
                }
                let k = inner / it.s_lp[ri];
                for (ix, a) in &row.a {
                    // F entry is -a
                    rhs[*ix] += -a * (sigma_mu / it.s_lp[ri] - k);
                }
            }
            let dx = solve_h(&rhs);

            // dS = R + sum dx_i F_i ; dY = sigma mu S^-1 - Y - Sym((Y dS + corr) S^-1)
            let mut ds_blocks = Vec::with_capacity(p.blocks.len());
            let mut dy_blocks = Vec::with_capacity(p.blocks.len());
            for (bi, (b, rb)) in p.blocks.iter().zip(&r_blocks).enumerate() {
                let mut ds = rb.clone();
                for (ix, fm) in &b.f {
                    ds += fm * dx[*ix];
                }
                let mut inner = &it.y_blocks[bi] * &ds;
                if let Some(corr) = corr_blocks {
                    inner += &corr[bi];
                }
                let dy = &s_inv[bi] * sigma_mu - &it.y_blocks[bi] - sym(&(inner * &s_inv[bi]));
                ds_blocks.push(ds);
                dy_blocks.push(dy);
            }
            let mut ds_lp = DVector::zeros(p.lp.len());
            let mut dy_lp = DVector::zeros(p.lp.len());
            for (ri, row) in p.lp.iter().enumerate() {
                let da: f64 = row.a.iter().map(|(ix, a)| a * dx[*ix]).sum();
                let ds = r_lp[ri] - da;
                let mut inner = it.y_lp[ri] * ds;
                if let Some(corr) = corr_lp {
                    inner += corr[ri];
                }
                ds_lp[ri] = ds;
                dy_lp[ri] = sigma_mu / it.s_lp[ri] - it.y_lp[ri] - inner / it.s_lp[ri];
            }
            (dx, ds_blocks, ds_lp, dy_blocks, dy_lp)
        };

        // Predictor.
        let (_dx_a, ds_a, dslp_a, dy_a, dylp_a) = direction(0.0, None, None);
        let mut alpha_d = 1.0f64;
        let mut alpha_p = 1.0f64;
        for (bi, sb) in it.s_blocks.iter().enumerate() {
            alpha_d = alpha_d.min(0.98 * max_step(sb, &ds_a[bi]));
            alpha_p = alpha_p.min(0.98 * max_step(&it.y_blocks[bi], &dy_a[bi]));
        }
        alpha_d = alpha_d.min(0.98 * max_step_vec(&it.s_lp, &dslp_a));
        alpha_p = alpha_p.min(0.98 * max_step_vec(&it.y_lp, &dylp_a));

        let mut gap_aff = 0.0;
        for (bi, yb) in it.y_blocks.iter().enumerate() {
            let ytrial = yb + &dy_a[bi] * alpha_p;
            let strial = &it.s_blocks[bi] + &ds_a[bi] * alpha_d;
            gap_aff += frob(&ytrial, &strial);
        }
        for ri in 0..p.lp.len() {
            gap_aff +=
                (it.y_lp[ri] + alpha_p * dylp_a[ri]) * (it.s_lp[ri] + alpha_d * dslp_a[ri]);
        }
        let mut sigma = ((gap_aff / gap).clamp(0.0, 1.0)).powi(3);
        // Keep the barrier from collapsing while the iterate is still
        // infeasible; otherwise the Schur system turns singular before the
        // residuals are gone.
        let res_abs = rprim.amax().max(
            r_blocks
                .iter()
                .map(|r| r.amax())
                .fold(r_lp.amax(), f64::max),
        );
        if res_abs > 0.1 * mu {
            sigma = sigma.max((res_abs / (res_abs + mu)).min(0.8));
        }

        // Corrector with the second-order term dY_a dS_a.
        let corr_blocks: Vec<DMatrix<f64>> = dy_a
            .iter()
            .zip(&ds_a)
            .map(|(dy, ds)| dy * ds)
            .collect();
        let corr_lp: DVector<f64> = DVector::from_iterator(
            p.lp.len(),
            dylp_a.iter().zip(dslp_a.iter()).map(|(a, b)| a * b),
        );
        let (dx, ds_b, ds_l, dy_b, dy_l) =
            direction(sigma * mu, Some(&corr_blocks), Some(&corr_lp));

        let mut alpha_d = 1.0f64;
        let mut alpha_p = 1.0f64;
        for (bi, sb) in it.s_blocks.iter().enumerate() {
            alpha_d = alpha_d.min(0.98 * max_step(sb, &ds_b[bi]));
            alpha_p = alpha_p.min(0.98 * max_step(&it.y_blocks[bi], &dy_b[bi]));
        }
        alpha_d = alpha_d.min(0.98 * max_step_vec(&it.s_lp, &ds_l));
        alpha_p = alpha_p.min(0.98 * max_step_vec(&it.y_lp, &dy_l));

        let (dx, ds_b, ds_l, dy_b, dy_l, alpha_d, alpha_p) =
            if alpha_d < 1e-10 && alpha_p < 1e-10 {
                // centring rescue step
                let (dx, ds_b, ds_l, dy_b, dy_l) = direction(mu, None, None);
                let mut ad = 1.0f64;
                let mut ap = 1.0f64;
                for (bi, sb) in it.s_blocks.iter().enumerate() {
                    ad = ad.min(0.98 * max_step(sb, &ds_b[bi]));
                    ap = ap.min(0.98 * max_step(&it.y_blocks[bi], &dy_b[bi]));
                }
                ad = ad.min(0.98 * max_step_vec(&it.s_lp, &ds_l));
                ap = ap.min(0.98 * max_step_vec(&it.y_lp, &dy_l));
                if ad < 1e-10 && ap < 1e-10 {
                    return (it, SolveStatus::NumericalFailure, iter, best_cert);
                }
                (dx, ds_b, ds_l, dy_b, dy_l, ad, ap)
            } else {
                (dx, ds_b, ds_l, dy_b, dy_l, alpha_d, alpha_p)
            };

        last_alpha = (alpha_p, alpha_d, sigma);
        it.x += &dx * alpha_d;
        for (bi, ds) in ds_b.iter().enumerate() {
            it.s_blocks[bi] += ds * alpha_d;
            it.y_blocks[bi] += &dy_b[bi] * alpha_p;
            it.s_blocks[bi] = sym(&it.s_blocks[bi]);
            it.y_blocks[bi] = sym(&it.y_blocks[bi]);
        }
        it.s_lp += &ds_l * alpha_d;
        it.y_lp += &dy_l * alpha_p;
    }
    let cert = best_cert.min(cleanup_bound(p, &it));
    (it, SolveStatus::MaxIterations, opts.max_iter, cert)
}

/// Solve an instance and certify an upper bound on its optimum.
pub fn solve(instance: &SdpInstance, opts: &SolveOptions) -> SolveReport {
    let p = presolve(instance);
    if p.infeasible {
        return SolveReport {
            primal_objective: f64::NEG_INFINITY,
            dual_objective: f64::NEG_INFINITY,
            status: SolveStatus::Infeasible,
            iterations: 0,
            max_block_min_eigenvalue: 0.0,
            x: vec![0.0; instance.variables.len()],
        };
    }
    let (it, status, iterations, best_cert) = solve_presolved(&p, opts);

    // Reconstruct original-variable values.
    let mut free_vals = vec![0.0f64; instance.variables.len()];
    for (pos, &ix) in p.free.iter().enumerate() {
        free_vals[ix] = it.x[pos] / p.var_scale[pos];
    }
    let mut x = vec![0.0f64; instance.variables.len()];
    for (ix, expr) in p.exprs.iter().enumerate() {
        let mut v = expr.constant.to_f64().unwrap_or(f64::NAN);
        for (jx, coeff) in &expr.terms {
            v += coeff.to_f64().unwrap_or(f64::NAN) * free_vals[*jx];
        }
        x[ix] = v;
    }

    let primal_objective = p.obj_scale
        * p.c
            .iter()
            .zip(it.x.iter())
            .map(|(c, xv)| c * xv)
            .sum::<f64>()
        + p.obj_const;
    let dual_objective = p.obj_scale * best_cert + p.obj_const;

    let mut worst = f64::INFINITY;
    for block in &instance.psd_blocks {
        if block.dim() == 0 {
            continue;
        }
        let mtx = block.evaluate(|ix| {
            BigRational::from_float(x[ix]).unwrap_or_else(BigRational::zero)
        });
        worst = worst.min(min_eigenvalue(&mtx).unwrap_or(f64::NEG_INFINITY));
    }
    if !worst.is_finite() {
        worst = 0.0;
    }

    SolveReport {
        primal_objective,
        dual_objective,
        status,
        iterations,
        max_block_min_eigenvalue: worst,
        x,
    }
}
