//! Exact two-phase simplex over `{x : A x ≤ b, E x = f}` with free `x`.
//!
//! Every inequality row gets a slack `s_i ≥ 0`. The free variables are pivoted
//! into the basis first (equality rows preferred) and their rows are then
//! ignored by the ratio test, so the simplex proper runs over the slacks.
//! Entering and leaving variables follow Bland's rule.
//!
//! [`Lp`] keeps its tableau between calls: after the feasibility phase any
//! number of objectives can be optimized from the current basis, and
//! equality rows can be appended (the DFS in integer enumeration relies on
//! both).

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::HPolyhedron;
use crate::error::{check_dim, Result};
use crate::linalg::{dot, QVector};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Outcome of an LP. For `Optimal` the witness is an optimal point, for
/// `Unbounded` it is a ray of the feasible region improving the objective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: Option<Rational>,
    pub witness: Option<QVector>,
}

impl LpResult {
    fn infeasible() -> Self {
        LpResult { status: LpStatus::Infeasible, value: None, witness: None }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Dual multipliers: `y ≥ 0` for inequality rows and free `w` for equality rows.
///
/// For a maximization `Aᵀy + Eᵀw = c` and `bᵀy + fᵀw` equals the optimum;
/// for a minimization `−Aᵀy + Eᵀw = c` and `−bᵀy + fᵀw` equals the optimum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub y: QVector,
    pub w: QVector,
}

impl DualCertificate {
    /// Exact check against the polyhedron, objective, and claimed optimum.
    pub fn verify(&self, p: &HPolyhedron, c: &[Rational], sense: Sense, value: &Rational) -> bool {
        if self.y.len() != p.n_ineq() || self.w.len() != p.n_eq() || c.len() != p.ambient_dim() {
            return false;
        }
        if self.y.iter().any(Rational::is_negative) {
            return false;
        }
        let sign = match sense {
            Sense::Max => Rational::from_integer(1),
            Sense::Min => Rational::from_integer(-1),
        };
        let ay = p.ineq_lhs().left_mul_vec(&self.y).scale(&sign);
        let ew = p.eq_lhs().left_mul_vec(&self.w);
        if ay.add(&ew).0 != c {
            return false;
        }
        let dual_value = &sign * dot(&self.y, p.ineq_rhs()) + dot(&self.w, p.eq_rhs());
        &dual_value == value
    }
}

const NONE: usize = usize::MAX;

/// Reusable simplex tableau for one polyhedron.
#[derive(Clone)]
pub struct Lp {
    d: usize,
    m: usize,
    ncols: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    free_row: Vec<bool>,
    row_of_x: Vec<Option<usize>>,
    feasible: bool,
    poly: HPolyhedron,
    last_dual: Option<(Vec<Rational>, Sense, QVector)>,
}

struct Objective {
    coef: Vec<Rational>,
    rhs: Rational,
}

enum SimplexEnd {
    Optimal,
    Unbounded(usize),
}

impl Lp {
    pub fn new(p: &HPolyhedron) -> Lp {
        let d = p.ambient_dim();
        let m = p.n_ineq();
        let ncols = d + m;
        let mut rows = Vec::with_capacity(m + p.n_eq());
        let mut rhs = Vec::with_capacity(m + p.n_eq());
        let mut basis = Vec::with_capacity(m + p.n_eq());
        for i in 0..m {
            let mut r = vec![Rational::zero(); ncols];
            r[..d].clone_from_slice(p.ineq_lhs().row(i));
            r[d + i] = Rational::from_integer(1);
            rows.push(r);
            rhs.push(p.ineq_rhs()[i].clone());
            basis.push(d + i);
        }
        for i in 0..p.n_eq() {
            let mut r = vec![Rational::zero(); ncols];
            r[..d].clone_from_slice(p.eq_lhs().row(i));
            rows.push(r);
            rhs.push(p.eq_rhs()[i].clone());
            basis.push(NONE);
        }
        let nrows = rows.len();
        let mut lp = Lp {
            d,
            m,
            ncols,
            rows,
            rhs,
            basis,
            free_row: vec![false; nrows],
            row_of_x: vec![None; d],
            feasible: true,
            poly: p.clone(),
            last_dual: None,
        };
        lp.pivot_free_columns();
        lp.restore_feasibility();
        lp
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    pub fn polyhedron(&self) -> &HPolyhedron {
        &self.poly
    }

    fn pivot_free_columns(&mut self) {
        for j in 0..self.d {
            let unassigned = (0..self.rows.len()).find(|&r| self.basis[r] == NONE && !self.rows[r][j].is_zero());
            let r = unassigned.or_else(|| {
                (0..self.rows.len()).find(|&r| !self.free_row[r] && self.basis[r] != NONE && !self.rows[r][j].is_zero())
            });
            if let Some(r) = r {
                self.pivot(r, j, None);
                self.free_row[r] = true;
                self.row_of_x[j] = Some(r);
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize, mut obj: Option<&mut Objective>) {
        let inv = self.rows[r][c].recip();
        if inv != Rational::from_integer(1) {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let nz: Vec<usize> = (0..self.ncols).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let (before, rest) = self.rows.split_at_mut(r);
        let (prow, after) = rest.split_first_mut().unwrap();
        let prhs = self.rhs[r].clone();
        for (i, row) in before.iter_mut().enumerate().chain(after.iter_mut().enumerate().map(|(k, x)| (k + r + 1, x))) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
            if !prhs.is_zero() {
                self.rhs[i] -= &f * &prhs;
            }
        }
        if let Some(o) = obj.as_deref_mut() {
            if !o.coef[c].is_zero() {
                let f = o.coef[c].clone();
                for &j in &nz {
                    o.coef[j] -= &f * &prow[j];
                }
                o.rhs -= &f * &prhs;
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule simplex maximizing `z` where `z + Σ coef_k v_k = rhs`.
    /// Free columns never enter.
    fn simplex(&mut self, obj: &mut Objective) -> SimplexEnd {
        loop {
            let Some(k) = (self.d..self.ncols).find(|&k| obj.coef[k].is_negative()) else {
                return SimplexEnd::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if self.free_row[r] || !self.rows[r][k].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.rows[r][k];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return SimplexEnd::Unbounded(k),
                Some((r, _)) => self.pivot(r, k, Some(obj)),
            }
        }
    }

    /// Phase one over the rows that have no feasible basic variable.
    fn restore_feasibility(&mut self) {
        if !self.feasible {
            return;
        }
        // Equality rows left without a basic variable have zero free-column entries.
        let mut drop = Vec::new();
        for r in 0..self.rows.len() {
            if self.basis[r] == NONE && self.rows[r].iter().all(Zero::is_zero) {
                if self.rhs[r].is_zero() {
                    drop.push(r);
                } else {
                    self.feasible = false;
                    return;
                }
            }
        }
        self.remove_rows(&drop);
        let need: Vec<usize> = (0..self.rows.len())
            .filter(|&r| !self.free_row[r] && (self.basis[r] == NONE || self.rhs[r].is_negative()))
            .collect();
        if need.is_empty() {
            return;
        }
        let real_cols = self.ncols;
        for &r in &need {
            if self.rhs[r].is_negative() {
                for x in self.rows[r].iter_mut() {
                    if !x.is_zero() {
                        *x = -&*x;
                    }
                }
                self.rhs[r] = -&self.rhs[r];
            }
            for row in self.rows.iter_mut() {
                row.push(Rational::zero());
            }
            self.rows[r][self.ncols] = Rational::from_integer(1);
            self.basis[r] = self.ncols;
            self.ncols += 1;
        }
        let mut obj = Objective { coef: vec![Rational::zero(); self.ncols], rhs: Rational::zero() };
        for k in real_cols..self.ncols {
            obj.coef[k] = Rational::from_integer(1);
        }
        for &r in &need {
            for k in 0..self.ncols {
                if !self.rows[r][k].is_zero() {
                    obj.coef[k] -= &self.rows[r][k];
                }
            }
            obj.rhs -= &self.rhs[r];
        }
        match self.simplex(&mut obj) {
            SimplexEnd::Optimal => {}
            SimplexEnd::Unbounded(_) => unreachable!("phase one objective is bounded above by zero"),
        }
        if obj.rhs.is_negative() {
            self.feasible = false;
            return;
        }
        let mut drop = Vec::new();
        for r in 0..self.rows.len() {
            if self.basis[r] < real_cols {
                continue;
            }
            match (self.d..real_cols).find(|&k| !self.rows[r][k].is_zero()) {
                Some(k) => self.pivot(r, k, None),
                None => drop.push(r),
            }
        }
        self.remove_rows(&drop);
        for row in self.rows.iter_mut() {
            row.truncate(real_cols);
        }
        self.ncols = real_cols;
    }

    fn remove_rows(&mut self, drop: &[usize]) {
        if drop.is_empty() {
            return;
        }
        let mut keep = vec![true; self.rows.len()];
        for &r in drop {
            keep[r] = false;
        }
        let mut idx = 0;
        self.rows.retain(|_| {
            idx += 1;
            keep[idx - 1]
        });
        retain_mask(&mut self.rhs, &keep);
        retain_mask(&mut self.basis, &keep);
        retain_mask(&mut self.free_row, &keep);
        self.row_of_x = vec![None; self.d];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.d {
                self.row_of_x[b] = Some(r);
            }
        }
    }

    /// Current basic solution.
    pub fn point(&self) -> QVector {
        (0..self.d)
            .map(|j| self.row_of_x[j].map_or_else(Rational::zero, |r| self.rhs[r].clone()))
            .collect()
    }

    /// x-part of the direction obtained by raising nonbasic column `k` by one.
    fn ray_for(&self, k: usize, sign: &Rational) -> QVector {
        (0..self.d)
            .map(|j| {
                if j == k {
                    sign.clone()
                } else {
                    self.row_of_x[j].map_or_else(Rational::zero, |r| -(&self.rows[r][k] * sign))
                }
            })
            .collect()
    }

    /// Optimize from the current basis.
    pub fn optimize(&mut self, c: &[Rational], sense: Sense) -> LpResult {
        assert_eq!(c.len(), self.d, "objective dimension mismatch");
        self.last_dual = None;
        if !self.feasible {
            return LpResult::infeasible();
        }
        let cc: Vec<Rational> = match sense {
            Sense::Max => c.to_vec(),
            Sense::Min => c.iter().map(|x| -x).collect(),
        };
        let mut obj = Objective { coef: vec![Rational::zero(); self.ncols], rhs: Rational::zero() };
        for j in 0..self.d {
            obj.coef[j] = -&cc[j];
        }
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if obj.coef[b].is_zero() {
                continue;
            }
            let f = obj.coef[b].clone();
            for k in 0..self.ncols {
                if !self.rows[r][k].is_zero() {
                    obj.coef[k] -= &f * &self.rows[r][k];
                }
            }
            obj.rhs -= &f * &self.rhs[r];
        }
        for j in 0..self.d {
            if self.row_of_x[j].is_none() && !obj.coef[j].is_zero() {
                let sign = Rational::from_integer(if obj.coef[j].is_negative() { 1 } else { -1 });
                let ray = self.ray_for(j, &sign);
                return LpResult { status: LpStatus::Unbounded, value: None, witness: Some(ray) };
            }
        }
        match self.simplex(&mut obj) {
            SimplexEnd::Unbounded(k) => {
                let ray = self.ray_for(k, &Rational::from_integer(1));
                LpResult { status: LpStatus::Unbounded, value: None, witness: Some(ray) }
            }
            SimplexEnd::Optimal => {
                let value = match sense {
                    Sense::Max => obj.rhs.clone(),
                    Sense::Min => -&obj.rhs,
                };
                let y: Vec<Rational> = (0..self.m).map(|i| obj.coef[self.d + i].clone()).collect();
                self.last_dual = Some((y, sense, QVector(cc)));
                LpResult { status: LpStatus::Optimal, value: Some(value), witness: Some(self.point()) }
            }
        }
    }

    /// Dual multipliers for the most recent optimal `optimize` call.
    pub fn dual_certificate(&self) -> Option<DualCertificate> {
        let (y, sense, cc) = self.last_dual.as_ref()?;
        let y = QVector(y.clone());
        let residual = cc.sub(&self.poly.ineq_lhs().left_mul_vec(&y));
        let w = if self.poly.n_eq() == 0 {
            if !residual.is_zero() {
                return None;
            }
            QVector::default()
        } else {
            self.poly.eq_lhs().transpose().solve(&residual)?
        };
        let w = match sense {
            Sense::Max => w,
            Sense::Min => w.neg(),
        };
        Some(DualCertificate { y, w })
    }

    /// Intersect with the hyperplane `a·x = f`, keeping the tableau warm.
    pub fn add_equality(&mut self, a: &[Rational], f: Rational) {
        assert_eq!(a.len(), self.d, "equality dimension mismatch");
        self.poly.add_eq(a, f.clone());
        self.last_dual = None;
        if !self.feasible {
            return;
        }
        let mut row = vec![Rational::zero(); self.ncols];
        row[..self.d].clone_from_slice(a);
        let mut rhs = f;
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if row[b].is_zero() {
                continue;
            }
            let g = row[b].clone();
            for k in 0..self.ncols {
                if !self.rows[r][k].is_zero() {
                    row[k] -= &g * &self.rows[r][k];
                }
            }
            rhs -= &g * &self.rhs[r];
        }
        let new_r = self.rows.len();
        let lineal = (0..self.d).find(|&j| self.row_of_x[j].is_none() && !row[j].is_zero());
        self.rows.push(row);
        self.rhs.push(rhs);
        self.basis.push(NONE);
        self.free_row.push(false);
        if let Some(j) = lineal {
            self.pivot(new_r, j, None);
            self.free_row[new_r] = true;
            self.row_of_x[j] = Some(new_r);
            return;
        }
        self.restore_feasibility();
    }

    /// Intersect with the halfspace `a·x ≤ b` (rebuilds the tableau).
    pub fn add_inequality(&mut self, a: &[Rational], b: Rational) {
        let mut p = self.poly.clone();
        p.add_ineq(a, b);
        *self = Lp::new(&p);
    }
}

fn retain_mask<T>(v: &mut Vec<T>, keep: &[bool]) {
    let mut i = 0;
    v.retain(|_| {
        i += 1;
        keep[i - 1]
    });
}

/// Solve `max/min c·x` over `P`.
pub fn lp_solve(c: &[Rational], sense: Sense, p: &HPolyhedron) -> Result<LpResult> {
    check_dim("objective length", p.ambient_dim(), c.len())?;
    Ok(Lp::new(p).optimize(c, sense))
}
