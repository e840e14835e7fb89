//! Dense two-phase simplex over exact rationals.
//!
//! Bland's rule makes the pivot sequence deterministic and cycling-free, and
//! exact arithmetic means the optimum, the certificate of infeasibility, and
//! the unboundedness verdict are all rigorous. The problems solved here are
//! tiny (tens of rows), so a dense rational tableau is the simplest thing
//! that is obviously correct.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{LpProblem, Relation};
use crate::sdp::VariableKey;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value at the optimum; `None` unless `Optimal`.
    pub value: Option<BigRational>,
    pub point: BTreeMap<VariableKey, BigRational>,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        debug_assert!(!piv.is_zero());
        for x in self.rows[r].iter_mut() {
            *x /= &piv;
        }
        self.rhs[r] /= &piv;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                let delta = &factor * &self.rows[r][j];
                self.rows[i][j] -= delta;
            }
            let delta = &factor * &self.rhs[r];
            self.rhs[i] -= delta;
        }
        self.basis[r] = c;
    }

    /// Reduced costs and objective value for minimising `cost`.
    fn reduced(&self, cost: &[BigRational]) -> (Vec<BigRational>, BigRational) {
        let mut red = cost.to_vec();
        let mut val = BigRational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                let delta = &cost[b] * &self.rows[r][j];
                red[j] -= delta;
            }
            val += &cost[b] * &self.rhs[r];
        }
        (red, val)
    }

    /// Minimise `cost` with Bland's rule; `allowed` masks columns that may
    /// enter. Returns `None` on unboundedness.
    fn minimize(&mut self, cost: &[BigRational], allowed: &[bool]) -> Option<BigRational> {
        loop {
            let (red, val) = self.reduced(cost);
            let entering = (0..self.ncols)
                .find(|&j| allowed[j] && red[j].is_negative() && !self.basis.contains(&j));
            let Some(col) = entering else {
                return Some(val);
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][col].is_positive() {
                    let ratio = &self.rhs[r] / &self.rows[r][col];
                    let better = match &leave {
                        None => true,
                        Some((lr, lv)) => {
                            ratio < *lv || (ratio == *lv && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return None; // cost decreases without bound
            };
            self.pivot(row, col);
        }
    }
}

/// Solve `p` (maximise) exactly. Variable lower bounds are zero; upper
/// bounds from `p.upper_bounds` become explicit rows.
pub fn solve_lp(p: &LpProblem) -> LpSolution {
    let vars = &p.variables;
    let index: BTreeMap<VariableKey, usize> =
        vars.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let nv = vars.len();

    // Gather rows: (dense coeffs, relation, rhs).
    let mut rows: Vec<(Vec<BigRational>, Relation, BigRational)> = Vec::new();
    for c in &p.constraints {
        let mut dense = vec![BigRational::zero(); nv];
        for (k, v) in &c.coeffs {
            let Some(&ix) = index.get(k) else {
                panic!("constraint references undeclared variable {k}");
            };
            dense[ix] = v.clone();
        }
        rows.push((dense, c.relation, c.rhs.clone()));
    }
    for (k, hi) in &p.upper_bounds {
        let mut dense = vec![BigRational::zero(); nv];
        dense[index[k]] = BigRational::one();
        rows.push((dense, Relation::Le, hi.clone()));
    }

    let m = rows.len();
    // Normalise to nonnegative right-hand sides.
    for (coeffs, rel, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
            *rhs = -rhs.clone();
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Eq => Relation::Eq,
                Relation::Ge => Relation::Le,
            };
        }
    }

    // Column layout: structural | slack/surplus | artificial.
    let nslack = rows
        .iter()
        .filter(|(_, rel, _)| !matches!(rel, Relation::Eq))
        .count();
    let nart = rows
        .iter()
        .filter(|(_, rel, _)| matches!(rel, Relation::Eq | Relation::Ge))
        .count();
    let ncols = nv + nslack + nart;

    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        ncols,
    };
    let mut art_cols: Vec<usize> = Vec::new();
    let mut next_slack = nv;
    let mut next_art = nv + nslack;
    for (coeffs, rel, rhs) in rows {
        let mut full = coeffs;
        full.resize(ncols, BigRational::zero());
        let basic = match rel {
            Relation::Le => {
                full[next_slack] = BigRational::one();
                next_slack += 1;
                next_slack - 1
            }
            Relation::Ge => {
                full[next_slack] = -BigRational::one();
                next_slack += 1;
                full[next_art] = BigRational::one();
                art_cols.push(next_art);
                next_art += 1;
                next_art - 1
            }
            Relation::Eq => {
                full[next_art] = BigRational::one();
                art_cols.push(next_art);
                next_art += 1;
                next_art - 1
            }
        };
        t.rows.push(full);
        t.rhs.push(rhs);
        t.basis.push(basic);
    }

    let allowed_all = vec![true; ncols];
    // Phase 1: minimise the artificial sum.
    if !art_cols.is_empty() {
        let mut cost = vec![BigRational::zero(); ncols];
        for &c in &art_cols {
            cost[c] = BigRational::one();
        }
        let w = t
            .minimize(&cost, &allowed_all)
            .expect("artificial objective is bounded below by zero");
        if w.is_positive() {
            return LpSolution {
                status: LpStatus::Infeasible,
                value: None,
                point: BTreeMap::new(),
            };
        }
        // Drive leftover artificials out of the basis so phase 2 cannot
        // silently lift an equality row; all-zero rows are redundant.
        let mut r = 0;
        while r < t.rows.len() {
            if art_cols.contains(&t.basis[r]) {
                debug_assert!(t.rhs[r].is_zero());
                let pivot_col = (0..nv + nslack).find(|&j| !t.rows[r][j].is_zero());
                match pivot_col {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2: artificials may not re-enter.
    let mut allowed = allowed_all;
    for &c in &art_cols {
        allowed[c] = false;
    }
    let mut cost = vec![BigRational::zero(); ncols];
    for (k, v) in &p.objective {
        if let Some(&ix) = index.get(k) {
            cost[ix] = -v.clone(); // maximise = minimise the negation
        }
    }
    let Some(val) = t.minimize(&cost, &allowed) else {
        return LpSolution {
            status: LpStatus::Unbounded,
            value: None,
            point: BTreeMap::new(),
        };
    };

    let mut point = BTreeMap::new();
    for (r, &b) in t.basis.iter().enumerate() {
        if b < nv {
            point.insert(vars[b], t.rhs[r].clone());
        }
    }
    for k in vars {
        point.entry(*k).or_insert_with(BigRational::zero);
    }
    LpSolution {
        status: LpStatus::Optimal,
        value: Some(-val),
        point,
    }
}
