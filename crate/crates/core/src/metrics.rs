//! Approximation metrics between nested polytopes: relative distance, the
//! maximization and minimization LP gaps, and squared Hausdorff distance.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::exactgeom::{contains_point, hull, lp_solve, min_sq_distance_to_polytope, HPolyhedron, LpStatus, Sense, VPolytope};
use crate::linalg::{dot, QVector};
use crate::rational::Rational;

/// A nonnegative rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtValue {
    Finite(Rational),
    Infinite,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtValue::Finite(r) => Some(r),
            ExtValue::Infinite => None,
        }
    }

    /// `self ≤ r` for a finite bound `r`.
    pub fn le(&self, r: &Rational) -> bool {
        self.finite().is_some_and(|x| x <= r)
    }
}

impl From<Rational> for ExtValue {
    fn from(r: Rational) -> Self {
        ExtValue::Finite(r)
    }
}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a.cmp(b),
            (ExtValue::Finite(_), ExtValue::Infinite) => Ordering::Less,
            (ExtValue::Infinite, ExtValue::Finite(_)) => Ordering::Greater,
            (ExtValue::Infinite, ExtValue::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(r) => write!(f, "{r}"),
            ExtValue::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtValue {
    type Err = crate::rational::ParseRationalError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.trim() == "inf" {
            Ok(ExtValue::Infinite)
        } else {
            Ok(ExtValue::Finite(s.parse()?))
        }
    }
}

impl Serialize for ExtValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An LP gap together with the direction and the pair of points realizing it.
///
/// For a finite value the ratio recomputed from the witnesses equals
/// `1 + value`; for `Infinite` the direction separates the two optima from zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapResult {
    pub value: ExtValue,
    pub witness_direction: QVector,
    /// `(point of A, point of B)` attaining the optima of the witness direction.
    pub witness_points: (QVector, QVector),
}

fn require_bounded(v: &VPolytope, what: &'static str) -> Result<()> {
    if v.is_bounded() {
        Ok(())
    } else {
        Err(Error::Unbounded(what))
    }
}

fn require_nested(a: &VPolytope, b: &VPolytope) -> Result<()> {
    check_dim("nested polytopes", a.ambient_dim, b.ambient_dim)?;
    require_bounded(a, "inner polytope")?;
    require_bounded(b, "outer polytope")?;
    for x in &a.vertices {
        if !contains_point(b, x)? {
            return Err(Error::Precondition(format!("inner polytope is not contained in outer polytope: vertex {x}")));
        }
    }
    Ok(())
}

fn require_orthant(v: &VPolytope) -> Result<()> {
    if v.vertices.iter().flat_map(|x| x.iter()).any(Rational::is_negative) {
        return Err(Error::Precondition("LP gaps need polytopes in the nonnegative orthant".into()));
    }
    Ok(())
}

/// Smallest `λ` with `b ∈ (1+λ)A − λA`, over multipliers on the vertices of `A`.
fn rdist_at(a: &[QVector], b: &[Rational]) -> Result<ExtValue> {
    let n = a.len();
    let d = b.len();
    let nv = 2 * n + 1;
    let lam = 2 * n;
    let mut p = HPolyhedron::universe(nv);
    for j in 0..nv {
        let mut row = QVector::zeros(nv);
        row[j] = -Rational::one();
        p.add_ineq(&row, Rational::zero());
    }
    let mut mu = QVector::zeros(nv);
    let mut nu = QVector::zeros(nv);
    for i in 0..n {
        mu[i] = Rational::one();
        nu[n + i] = Rational::one();
    }
    mu[lam] = -Rational::one();
    nu[lam] = -Rational::one();
    p.add_eq(&mu, Rational::one());
    p.add_eq(&nu, Rational::zero());
    for k in 0..d {
        let mut row = QVector::zeros(nv);
        for i in 0..n {
            row[i] = a[i][k].clone();
            row[n + i] = -a[i][k].clone();
        }
        p.add_eq(&row, b[k].clone());
    }
    let r = lp_solve(&QVector::unit(nv, lam), Sense::Min, &p)?;
    Ok(match r.status {
        LpStatus::Optimal => ExtValue::Finite(r.value.expect("optimal")),
        LpStatus::Infeasible => ExtValue::Infinite,
        LpStatus::Unbounded => unreachable!("λ is bounded below by zero"),
    })
}

/// Relative distance `inf{λ ≥ 0 : B ⊆ (1+λ)A − λA}` for `A ⊆ B`.
///
/// The set `(1+λ)A − λA` is convex, so it suffices to cover the vertices of
/// `B`; each vertex costs one LP over multipliers on the vertices of `A`.
pub fn rdist(a: &VPolytope, b: &VPolytope) -> Result<ExtValue> {
    if b.is_empty() {
        return Ok(ExtValue::zero());
    }
    if a.is_empty() {
        return Ok(ExtValue::Infinite);
    }
    require_nested(a, b)?;
    let mut best = ExtValue::zero();
    for x in &b.vertices {
        if a.vertices.contains(x) {
            continue;
        }
        let v = rdist_at(&a.vertices, x)?;
        if v > best {
            best = v;
        }
        if best == ExtValue::Infinite {
            break;
        }
    }
    Ok(best)
}

/// Relative distance from its definition as a supremum over projections onto
/// lines: `sup_c (c·b − max_A c) / (max_A c − min_A c)` over vertices `b` of `B`.
///
/// The ratio is positively homogeneous in `c`, so bounding the denominator by
/// one turns each vertex into a single LP over `(c, t_max, t_min)`; an
/// unbounded LP means `b` leaves the affine hull of `A`.
pub fn rdist_by_projections(a: &VPolytope, b: &VPolytope) -> Result<ExtValue> {
    if b.is_empty() {
        return Ok(ExtValue::zero());
    }
    if a.is_empty() {
        return Ok(ExtValue::Infinite);
    }
    require_nested(a, b)?;
    let d = a.ambient_dim;
    let (tmax, tmin) = (d, d + 1);
    let mut p = HPolyhedron::universe(d + 2);
    for x in &a.vertices {
        let mut hi: QVector = x.0.clone().into();
        hi.push(-Rational::one());
        hi.push(Rational::zero());
        p.add_ineq(&hi, Rational::zero());
        let mut lo: QVector = x.neg();
        lo.push(Rational::zero());
        lo.push(Rational::one());
        p.add_ineq(&lo, Rational::zero());
    }
    let mut width = QVector::zeros(d + 2);
    width[tmax] = Rational::one();
    width[tmin] = -Rational::one();
    p.add_ineq(&width, Rational::one());
    let mut best = ExtValue::zero();
    for x in &b.vertices {
        let mut c: QVector = x.0.clone().into();
        c.push(-Rational::one());
        c.push(Rational::zero());
        let r = lp_solve(&c, Sense::Max, &p)?;
        let v = match r.status {
            LpStatus::Optimal => ExtValue::Finite(r.value.expect("optimal")),
            LpStatus::Unbounded => ExtValue::Infinite,
            LpStatus::Infeasible => unreachable!("c = 0 is feasible"),
        };
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// [`rdist`] for H-described inputs.
pub fn rdist_h(a: &HPolyhedron, b: &HPolyhedron) -> Result<ExtValue> {
    let va = crate::exactgeom::vertices(a)?;
    let vb = crate::exactgeom::vertices(b)?;
    rdist(&va, &vb)
}

fn argmax<'a>(pts: &'a [QVector], c: &[Rational]) -> &'a QVector {
    pts.iter().max_by(|x, y| dot(c, x).cmp(&dot(c, y))).expect("non-empty")
}

fn argmin<'a>(pts: &'a [QVector], c: &[Rational]) -> &'a QVector {
    pts.iter().min_by(|x, y| dot(c, x).cmp(&dot(c, y))).expect("non-empty")
}

fn gap_preconditions(a: &VPolytope, b: &VPolytope) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("polytope passed to an LP gap"));
    }
    require_nested(a, b)?;
    require_orthant(b)
}

/// `sup_{c ≥ 0} max_B c / max_A c − 1` (at least zero), with a witness.
///
/// The gap is infinite exactly when some vertex of `B` has support on a
/// coordinate where every vertex of `A` vanishes. Otherwise, for each vertex
/// `w` of `B` the LP `max c·w s.t. c·a ≤ 1 for a ∈ V(A), c ≥ 0` is bounded
/// and its optimum is the best ratio among directions maximized by `w`.
pub fn lp_gap_max(a: &VPolytope, b: &VPolytope) -> Result<GapResult> {
    gap_preconditions(a, b)?;
    let d = a.ambient_dim;
    let zero_coords: Vec<usize> = (0..d).filter(|&j| a.vertices.iter().all(|x| x[j].is_zero())).collect();
    for w in &b.vertices {
        if zero_coords.iter().any(|&j| !w[j].is_zero()) {
            let mut c = QVector::zeros(d);
            for &j in &zero_coords {
                c[j] = Rational::one();
            }
            let pa = argmax(&a.vertices, &c).clone();
            return Ok(GapResult { value: ExtValue::Infinite, witness_direction: c, witness_points: (pa, w.clone()) });
        }
    }
    let mut p = HPolyhedron::universe(d);
    for j in 0..d {
        p.add_ineq(&QVector::unit(d, j).neg(), Rational::zero());
    }
    for x in &a.vertices {
        p.add_ineq(x, Rational::one());
    }
    let mut best: Option<(Rational, QVector, QVector)> = None;
    for w in &b.vertices {
        let r = lp_solve(w, Sense::Max, &p)?;
        assert_eq!(r.status, LpStatus::Optimal, "bounded by the support argument");
        let v = r.value.expect("optimal");
        if best.as_ref().is_none_or(|(bv, _, _)| &v > bv) {
            best = Some((v, r.witness.expect("point"), w.clone()));
        }
    }
    let (v, c, w) = best.expect("B has a vertex");
    if v <= Rational::one() {
        let pa = argmax(&a.vertices, &c).clone();
        return Ok(GapResult { value: ExtValue::zero(), witness_direction: c, witness_points: (pa, w) });
    }
    let pa = argmax(&a.vertices, &c).clone();
    Ok(GapResult { value: ExtValue::Finite(v - Rational::one()), witness_direction: c, witness_points: (pa, w) })
}

/// `sup_{c ≥ 0} min_A c / min_B c − 1` (at least zero), with a witness.
///
/// Infinite exactly when some vertex `w` of `B` has a support that contains
/// the support of no vertex of `A`: then the indicator of the complement of
/// `supp(w)` has `min_B = 0 < min_A`. Otherwise each vertex `w*` of `B`
/// anchors the LP `max ρ s.t. c·a ≥ ρ (a ∈ V(A)), c·w ≥ 1 (w ∈ V(B)),
/// c·w* = 1, c ≥ 0`.
pub fn lp_gap_min(a: &VPolytope, b: &VPolytope) -> Result<GapResult> {
    gap_preconditions(a, b)?;
    let d = a.ambient_dim;
    let support = |x: &QVector| -> Vec<bool> { x.iter().map(|v| !v.is_zero()).collect() };
    for w in &b.vertices {
        let sw = support(w);
        let covered = a.vertices.iter().any(|x| support(x).iter().zip(&sw).all(|(&sa, &sb)| !sa || sb));
        if !covered {
            let c: QVector = sw.iter().map(|&s| if s { Rational::zero() } else { Rational::one() }).collect();
            let pa = argmin(&a.vertices, &c).clone();
            return Ok(GapResult { value: ExtValue::Infinite, witness_direction: c, witness_points: (pa, w.clone()) });
        }
    }
    let rho = d;
    let mut base = HPolyhedron::universe(d + 1);
    for j in 0..d {
        base.add_ineq(&QVector::unit(d + 1, j).neg(), Rational::zero());
    }
    for x in &a.vertices {
        let mut row = x.neg();
        row.push(Rational::one());
        base.add_ineq(&row, Rational::zero());
    }
    for w in &b.vertices {
        let mut row = w.neg();
        row.push(Rational::zero());
        base.add_ineq(&row, -Rational::one());
    }
    let mut best: Option<(Rational, QVector, QVector)> = None;
    for w in &b.vertices {
        let mut anchor: QVector = w.0.clone().into();
        anchor.push(Rational::zero());
        let p = base.clone().with_eq(&anchor, Rational::one());
        let r = lp_solve(&QVector::unit(d + 1, rho), Sense::Max, &p)?;
        if r.status != LpStatus::Optimal {
            // Infeasible anchors: w is never the minimizer of a normalized c.
            assert_ne!(r.status, LpStatus::Unbounded, "bounded by the support argument");
            continue;
        }
        let v = r.value.expect("optimal");
        if best.as_ref().is_none_or(|(bv, _, _)| &v > bv) {
            let mut c = r.witness.expect("point");
            c.pop();
            best = Some((v, c, w.clone()));
        }
    }
    let Some((v, c, w)) = best else {
        // Only possible when every vertex of B is zero, i.e. A = B = {0}.
        let c = QVector::zeros(d);
        let points = (a.vertices[0].clone(), b.vertices[0].clone());
        return Ok(GapResult { value: ExtValue::zero(), witness_direction: c, witness_points: points });
    };
    let pa = argmin(&a.vertices, &c).clone();
    let value = if v <= Rational::one() { Rational::zero() } else { v - Rational::one() };
    Ok(GapResult { value: ExtValue::Finite(value), witness_direction: c, witness_points: (pa, w) })
}

/// Squared Hausdorff distance of `A ⊆ B`: the largest squared distance from a
/// vertex of `B` to `A`.
pub fn hausdorff_sq(a: &VPolytope, b: &VPolytope) -> Result<Rational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("polytope passed to hausdorff_sq"));
    }
    require_nested(a, b)?;
    let ha = hull(&a.vertices)?;
    let mut best = Rational::zero();
    for x in &b.vertices {
        if a.vertices.contains(x) {
            continue;
        }
        let v = min_sq_distance_to_polytope(x, &ha, &a.vertices)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}
