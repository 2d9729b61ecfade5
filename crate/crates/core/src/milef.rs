//! Mixed-integer linear extended formulations, their fibers and hulls, the
//! recursive slicing into affine subspaces, disjunctive unions, and the
//! conversion into approximate linear extended formulations.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::caps::caps;
use crate::error::{check_dim, Error, Result};
use crate::exactgeom::{
    contains_point, intersect, irredundant, project_bounded, project_with_vertices, prune_to_vertices, vertices, AffineMap,
    HPolyhedron, Lp, LpStatus, Sense, VPolytope,
};
use crate::lattice::{candidate_directions, flt_bound, for_each_fiber, integer_images, unimodular_completion};
use crate::linalg::{dot, QMatrix, QVector};
use crate::metrics::{rdist, ExtValue};
use crate::rational::Rational;

/// `P = conv(π(Q ∩ σ⁻¹(ℤᵏ)))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MilefJson")]
pub struct Milef {
    #[serde(rename = "Q")]
    pub q: HPolyhedron,
    pub sigma: AffineMap,
    pub pi: AffineMap,
}

#[derive(Deserialize)]
struct MilefJson {
    #[serde(rename = "Q")]
    q: HPolyhedron,
    sigma: AffineMap,
    pi: AffineMap,
}

impl TryFrom<MilefJson> for Milef {
    type Error = Error;
    fn try_from(j: MilefJson) -> Result<Milef> {
        Milef::new(j.q, j.sigma, j.pi)
    }
}

impl Milef {
    pub fn new(q: HPolyhedron, sigma: AffineMap, pi: AffineMap) -> Result<Milef> {
        check_dim("integer map source", q.ambient_dim(), sigma.source_dim())?;
        check_dim("projection source", q.ambient_dim(), pi.source_dim())?;
        Ok(Milef { q, sigma, pi })
    }

    /// Dimension `ℓ` of the lifted space.
    pub fn ell(&self) -> usize {
        self.q.ambient_dim()
    }

    /// Number `k` of integrality constraints.
    pub fn k(&self) -> usize {
        self.sigma.target_dim()
    }

    /// Dimension `d` of the target space.
    pub fn d(&self) -> usize {
        self.pi.target_dim()
    }

    /// `(m, k)` with `m` the inequality row count of `Q` (an upper bound on its facets).
    pub fn complexity(&self) -> (usize, usize) {
        (self.q.n_ineq(), self.k())
    }
}

/// `Q ∩ σ⁻¹(z)`.
pub fn fiber(m: &Milef, z: &[Rational]) -> Result<HPolyhedron> {
    check_dim("fiber index", m.k(), z.len())?;
    let mut f = m.q.clone();
    for i in 0..m.k() {
        f.add_eq(m.sigma.matrix.row(i), &z[i] - &m.sigma.offset[i]);
    }
    Ok(f)
}

/// Vertices of `conv(Q ∩ σ⁻¹(ℤᵏ))` in the lifted space.
pub fn mixed_integer_hull(m: &Milef) -> Result<VPolytope> {
    hull_in_lifted_space(&m.q, &m.sigma)
}

fn hull_in_lifted_space(q: &HPolyhedron, sigma: &AffineMap) -> Result<VPolytope> {
    let mut pts = Vec::new();
    for_each_fiber(q, sigma, |_, lp| {
        let v = vertices(lp.polyhedron())?;
        if !v.is_bounded() {
            return Err(Error::Unbounded("fiber of a mixed-integer formulation"));
        }
        pts.extend(v.vertices);
        Ok(())
    })?;
    VPolytope::from_points(q.ambient_dim(), prune_to_vertices(&pts)?)
}

/// Vertices of `π(conv(Q ∩ σ⁻¹(ℤᵏ)))`, computed fiber by fiber in the target space.
pub fn mixed_integer_hull_image(m: &Milef) -> Result<VPolytope> {
    let mut pts = Vec::new();
    for_each_fiber(&m.q, &m.sigma, |_, lp| {
        let (_, v) = project_bounded(lp, &m.pi).map_err(|e| match e {
            Error::Unbounded(_) => Error::Unbounded("fiber of a mixed-integer formulation"),
            e => e,
        })?;
        pts.extend(v.vertices);
        Ok(())
    })?;
    VPolytope::from_points(m.d(), prune_to_vertices(&pts)?)
}

/// Affine subspaces of `R^ℓ`, each an equality-only H-description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceFamily {
    pub ambient_dim: usize,
    pub subspaces: Vec<HPolyhedron>,
}

impl SubspaceFamily {
    pub fn new(ambient_dim: usize, subspaces: Vec<HPolyhedron>) -> Result<Self> {
        for h in &subspaces {
            check_dim("family member", ambient_dim, h.ambient_dim())?;
            if h.n_ineq() > 0 {
                return Err(Error::Precondition("family members must be affine subspaces".into()));
            }
        }
        Ok(SubspaceFamily { ambient_dim, subspaces })
    }

    pub fn whole_space(ambient_dim: usize) -> Self {
        SubspaceFamily { ambient_dim, subspaces: vec![HPolyhedron::universe(ambient_dim)] }
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }
}

/// `conv(⋃ parts)` as the projection of a lifted polyhedron.
///
/// Variables are one copy `xⁱ` of the space per part followed by weights `λ`;
/// part `i` contributes `Aᵢxⁱ ≤ λᵢbᵢ`, `Eᵢxⁱ = λᵢfᵢ` and `λᵢ ≥ 0`, and
/// `Σλ = 1`. The returned map sends the lifted point to `Σ xⁱ`.
pub fn balas_union(parts: &[HPolyhedron]) -> Result<(HPolyhedron, AffineMap)> {
    let Some(first) = parts.first() else {
        return Err(Error::Precondition("union of an empty list of polyhedra".into()));
    };
    let l = first.ambient_dim();
    let t = parts.len();
    for p in parts {
        check_dim("union part", l, p.ambient_dim())?;
        require_bounded_nonempty(p)?;
    }
    let n = t * l + t;
    let mut ext = HPolyhedron::universe(n);
    for (i, p) in parts.iter().enumerate() {
        let lam = t * l + i;
        for r in 0..p.n_ineq() {
            let mut row = QVector::zeros(n);
            row[i * l..(i + 1) * l].clone_from_slice(p.ineq_lhs().row(r));
            row[lam] = -p.ineq_rhs()[r].clone();
            ext.add_ineq(&row, Rational::zero());
        }
        for r in 0..p.n_eq() {
            let mut row = QVector::zeros(n);
            row[i * l..(i + 1) * l].clone_from_slice(p.eq_lhs().row(r));
            row[lam] = -p.eq_rhs()[r].clone();
            ext.add_eq(&row, Rational::zero());
        }
        ext.add_ineq(&QVector::unit(n, lam).neg(), Rational::zero());
    }
    let mut sum = QVector::zeros(n);
    for i in 0..t {
        sum[t * l + i] = Rational::one();
    }
    ext.add_eq(&sum, Rational::one());
    let mut proj = QMatrix::zeros(l, n);
    for i in 0..t {
        for j in 0..l {
            proj[(j, i * l + j)] = Rational::one();
        }
    }
    Ok((ext, AffineMap::linear(proj)))
}

fn require_bounded_nonempty(p: &HPolyhedron) -> Result<()> {
    let mut lp = Lp::new(p);
    if !lp.is_feasible() {
        return Err(Error::Precondition("union parts must be non-empty; drop empty parts first".into()));
    }
    for j in 0..p.ambient_dim() {
        let e = QVector::unit(p.ambient_dim(), j);
        for sense in [Sense::Max, Sense::Min] {
            if lp.optimize(&e, sense).status == LpStatus::Unbounded {
                return Err(Error::Unsupported(
                    "union of unbounded polyhedra: the lifted formulation only describes the closure of the hull".into(),
                ));
            }
        }
    }
    Ok(())
}

/// One elimination step: the level sets of `v·σ` through the integer points
/// of `σ(D)`, and the map `τ` with one fewer integer constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceStep {
    pub direction: QVector,
    /// Values `v·z` over the integer points `z` of `σ(D)`, ascending.
    pub levels: Vec<Rational>,
    pub family: SubspaceFamily,
    pub tau: AffineMap,
    /// True when `σ(D)` has no integer point (the mixed-integer hull is empty).
    pub hull_empty: bool,
    /// `rdist(D_σ, D)` at the time of the step.
    pub measured_rdist: ExtValue,
    /// `1 + ((1+δ')/δ')·flt(k)` for the measured `δ'`, when positive.
    pub count_bound: Option<Rational>,
    pub warning: Option<String>,
}

fn count_bound(measured: &ExtValue, k: usize) -> Option<Rational> {
    match measured {
        ExtValue::Infinite => Some(Rational::one() + flt_bound(k)),
        ExtValue::Finite(d) if d.is_positive() => Some(Rational::one() + (Rational::one() + d) / d * flt_bound(k)),
        ExtValue::Finite(_) => None,
    }
}

/// `D_σ` and `rdist(D_σ, D)`.
fn measure(d: &HPolyhedron, sigma: &AffineMap) -> Result<(VPolytope, ExtValue)> {
    let ds = hull_in_lifted_space(d, sigma)?;
    let dv = vertices(d)?;
    if !dv.is_bounded() {
        return Err(Error::Unsupported("unbounded polyhedron in slicing".into()));
    }
    let r = rdist(&ds, &dv)?;
    Ok((ds, r))
}

/// Slice `D` along the level sets of one integer direction of `σ`.
///
/// The direction minimizes the number of levels among primitive `v` with
/// `‖v‖∞ ≤ v_max` (ties by [`crate::lattice::direction_order`]).
pub fn slice_once(d: &HPolyhedron, sigma: &AffineMap, delta: &Rational, v_max: i64) -> Result<SliceStep> {
    if !delta.is_positive() {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    if sigma.target_dim() == 0 {
        return Err(Error::Precondition("slicing needs at least one integer constraint".into()));
    }
    let (_, measured) = measure(d, sigma)?;
    slice_step(d, sigma, v_max, measured)
}

fn slice_step(d: &HPolyhedron, sigma: &AffineMap, v_max: i64, measured: ExtValue) -> Result<SliceStep> {
    let k = sigma.target_dim();
    let l = d.ambient_dim();
    let zs: Vec<QVector> = integer_images(d, sigma)?.into_iter().map(|(z, _)| z).collect();
    let bound = count_bound(&measured, k);
    let mut best: Option<(QVector, Vec<Rational>)> = None;
    if !zs.is_empty() {
        for v in candidate_directions(k, v_max) {
            let mut levels: Vec<Rational> = zs.iter().map(|z| dot(&v, z)).collect();
            levels.sort();
            levels.dedup();
            if best.as_ref().is_none_or(|(_, b)| levels.len() < b.len()) {
                let done = levels.len() == 1;
                best = Some((v, levels));
                if done {
                    break;
                }
            }
        }
    }
    let hull_empty = best.is_none();
    let (v, levels) = best.unwrap_or_else(|| (QVector::unit(k, 0), Vec::new()));
    let u = unimodular_completion(&v)?;
    let phi = AffineMap::linear(u.matrix().select_rows(&(1..k).collect::<Vec<_>>()));
    let tau = phi.compose(sigma)?;
    let a = sigma.matrix.left_mul_vec(&v);
    let shift = dot(&v, &sigma.offset);
    let subspaces = levels
        .iter()
        .map(|i| {
            let h = HPolyhedron::universe(l);
            if a.is_zero() {
                h
            } else {
                h.with_eq(&a, i - &shift)
            }
        })
        .collect();
    let warning = match &bound {
        Some(b) if Rational::from(levels.len()) > *b => Some(format!(
            "{} levels exceed the elimination bound {b}; no direction within v_max = {v_max} certifies it",
            levels.len()
        )),
        _ => None,
    };
    Ok(SliceStep {
        direction: v,
        levels,
        family: SubspaceFamily::new(l, subspaces)?,
        tau,
        hull_empty,
        measured_rdist: measured,
        count_bound: bound,
        warning,
    })
}

/// One call of the slicing recursion, kept for auditing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRecord {
    pub depth: usize,
    pub domain: HPolyhedron,
    pub sigma: AffineMap,
    pub measured_rdist: ExtValue,
    pub direction: QVector,
    pub level_count: usize,
    pub count_bound: Option<Rational>,
    pub warning: Option<String>,
}

/// Output of [`slice_family`] together with the exact checks run on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceCertificate {
    pub family: SubspaceFamily,
    pub delta: Rational,
    /// Every integer point `z` of `σ(D)` has `σ⁻¹(z)` inside some member.
    pub fiber_cover_checked: bool,
    /// `D_σ ⊆ D_𝓗 ⊆ D`.
    pub sandwich_checked: bool,
    /// `rdist(D_σ, D_𝓗)`.
    pub rdist_achieved: ExtValue,
    pub theoretical_size_bound: Rational,
    pub steps: Vec<SliceRecord>,
}

impl SliceCertificate {
    pub fn holds(&self) -> bool {
        self.fiber_cover_checked && self.sandwich_checked && self.rdist_achieved.le(&self.delta)
    }
}

/// `∏_{i=1..k} (1 + ((1+δ)/δ)·flt(i))`.
pub fn family_size_bound(k: usize, delta: &Rational) -> Rational {
    let f = (Rational::one() + delta) / delta;
    (1..=k).map(|i| Rational::one() + &f * flt_bound(i)).product()
}

/// `(m+1)·∏_{i=1..k} (1 + ((1+δ)/δ)·flt(i))`.
pub fn lef_size_bound(m: usize, k: usize, delta: &Rational) -> Rational {
    Rational::from(m + 1) * family_size_bound(k, delta)
}

/// Recursive slicing of `D` until every piece has a mixed-integer hull within
/// relative distance `δ`, followed by exact checks of the result.
pub fn slice_family(d: &HPolyhedron, sigma: &AffineMap, delta: &Rational) -> Result<SliceCertificate> {
    if !delta.is_positive() {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    check_dim("integer map source", d.ambient_dim(), sigma.source_dim())?;
    let l = d.ambient_dim();
    let mut out = Vec::new();
    let mut steps = Vec::new();
    slice_rec(d, sigma, delta, HPolyhedron::universe(l), 0, &mut out, &mut steps)?;
    let family = SubspaceFamily::new(l, out)?;

    let ds = hull_in_lifted_space(d, sigma)?;
    let mut pts = Vec::new();
    for h in &family.subspaces {
        let v = vertices(&intersect(d, h)?)?;
        if !v.is_bounded() {
            return Err(Error::Unsupported("unbounded polyhedron in slicing".into()));
        }
        pts.extend(v.vertices);
    }
    let dh = VPolytope::from_points(l, prune_to_vertices(&pts)?)?;
    let mut sandwich = dh.vertices.iter().all(|x| d.contains(x));
    for x in &ds.vertices {
        if !sandwich {
            break;
        }
        sandwich = contains_point(&dh, x)?;
    }
    let rdist_achieved = if sandwich { rdist(&ds, &dh)? } else { ExtValue::Infinite };
    let mut cover = true;
    for (z, _) in integer_images(d, sigma)? {
        if !family.subspaces.iter().any(|h| fiber_inside(sigma, &z, h)) {
            cover = false;
            break;
        }
    }
    Ok(SliceCertificate {
        family,
        delta: delta.clone(),
        fiber_cover_checked: cover,
        sandwich_checked: sandwich,
        rdist_achieved,
        theoretical_size_bound: family_size_bound(sigma.target_dim(), delta),
        steps,
    })
}

/// Whether the affine subspace `σ⁻¹(z)` lies in `h`: each equation of `h` must
/// be a combination `w` of the rows of `σ` with matching right-hand side.
fn fiber_inside(sigma: &AffineMap, z: &[Rational], h: &HPolyhedron) -> bool {
    let rhs = QVector(z.to_vec()).sub(&sigma.offset);
    let mt = sigma.matrix.transpose();
    (0..h.n_eq()).all(|r| {
        let e = h.eq_lhs().row(r);
        if sigma.target_dim() == 0 {
            return e.iter().all(Zero::is_zero) && h.eq_rhs()[r].is_zero();
        }
        match mt.solve(e) {
            Some(w) => dot(&w, &rhs) == h.eq_rhs()[r],
            None => false,
        }
    })
}

fn slice_rec(
    d: &HPolyhedron,
    sigma: &AffineMap,
    delta: &Rational,
    prefix: HPolyhedron,
    depth: usize,
    out: &mut Vec<HPolyhedron>,
    steps: &mut Vec<SliceRecord>,
) -> Result<()> {
    if sigma.target_dim() == 0 {
        out.push(prefix);
        return Ok(());
    }
    let (_, measured) = measure(d, sigma)?;
    if measured.le(delta) {
        out.push(prefix);
        return Ok(());
    }
    let step = slice_step(d, sigma, caps().v_max, measured)?;
    steps.push(SliceRecord {
        depth,
        domain: d.clone(),
        sigma: sigma.clone(),
        measured_rdist: step.measured_rdist.clone(),
        direction: step.direction.clone(),
        level_count: step.levels.len(),
        count_bound: step.count_bound.clone(),
        warning: step.warning.clone(),
    });
    for h in &step.family.subspaces {
        let next = intersect(d, h)?;
        let mut pre = prefix.clone();
        for r in 0..h.n_eq() {
            pre.add_eq(h.eq_lhs().row(r), h.eq_rhs()[r].clone());
        }
        slice_rec(&next, &step.tau, delta, pre, depth + 1, out, steps)?;
    }
    Ok(())
}

/// Numbers reported by [`milef_to_lef`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefReport {
    pub delta: Rational,
    pub epsilon: Rational,
    pub family_size: usize,
    pub slice_count: usize,
    /// Inequality rows of the returned polyhedron.
    pub inequality_count: usize,
    /// Inequality rows after redundancy removal.
    pub irredundant_count: usize,
    /// `Σ (facets of slice + 1)` over the non-empty slices.
    pub slice_budget: usize,
    pub theoretical_bound: Rational,
    /// `C ⊆ proj(lef)` with `C` the target polytope.
    pub contains_target: bool,
    /// `rdist(C, proj(lef))`.
    pub rdist_achieved: ExtValue,
    /// `ε + δ + 2εδ`.
    pub rdist_bound: Rational,
    pub target_vertices: VPolytope,
    pub image_vertices: VPolytope,
}

impl LefReport {
    pub fn holds(&self) -> bool {
        self.contains_target && self.rdist_achieved.le(&self.rdist_bound) && self.irredundant_count <= self.slice_budget
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefResult {
    pub lef: HPolyhedron,
    pub proj: AffineMap,
    pub report: LefReport,
    pub certificate: SliceCertificate,
}

/// Turn a MILEF into a linear extended formulation whose image is within
/// relative distance `ε + δ + 2εδ` of the target, where `ε` is the caller's
/// bound for the input formulation itself.
pub fn milef_to_lef(m: &Milef, delta: &Rational, epsilon: &Rational) -> Result<LefResult> {
    if epsilon.is_negative() {
        return Err(Error::Precondition("epsilon must be nonnegative".into()));
    }
    let cert = slice_family(&m.q, &m.sigma, delta)?;
    let mut slices = Vec::new();
    let mut budget = 0;
    for h in &cert.family.subspaces {
        let s = intersect(&m.q, h)?;
        if !Lp::new(&s).is_feasible() {
            continue;
        }
        let s = irredundant(&s);
        budget += s.n_ineq() + 1;
        slices.push(s);
    }
    if slices.is_empty() {
        return Err(Error::Empty("mixed-integer hull"));
    }
    let (lef, proj) = if slices.len() == 1 {
        (slices[0].clone(), m.pi.clone())
    } else {
        let (ext, b) = balas_union(&slices)?;
        (ext, m.pi.compose(&b)?)
    };
    let irr = irredundant(&lef).n_ineq();
    let target = mixed_integer_hull(m)?.map(&m.pi)?;
    let target = VPolytope::from_points(m.d(), prune_to_vertices(&target.vertices)?)?;
    let (image, image_vertices) = project_with_vertices(&lef, &proj)?;
    let contains_target = target.vertices.iter().all(|x| image.contains(x));
    let rdist_achieved = if contains_target { rdist(&target, &image_vertices)? } else { ExtValue::Infinite };
    let two = Rational::from_integer(2);
    let report = LefReport {
        delta: delta.clone(),
        epsilon: epsilon.clone(),
        family_size: cert.family.len(),
        slice_count: slices.len(),
        inequality_count: lef.n_ineq(),
        irredundant_count: irr,
        slice_budget: budget,
        theoretical_bound: lef_size_bound(m.q.n_ineq(), m.k(), delta),
        contains_target,
        rdist_achieved,
        rdist_bound: epsilon + delta + two * epsilon * delta,
        target_vertices: target,
        image_vertices,
    };
    Ok(LefResult { lef, proj, report, certificate: cert })
}

/// The MILEF `(Q ∩ H, σ, τ₂∘π)` of a projected face, where `H` is the zero
/// set of `φ∘π` and `φ ≥ 0` on the target polytope.
///
/// The sign condition is checked on every vertex of the mixed-integer hull.
pub fn restrict_to_face(m: &Milef, phi: &AffineMap, tau2: &AffineMap) -> Result<Milef> {
    if phi.target_dim() != 1 {
        return Err(Error::Precondition("face functional must map to R^1".into()));
    }
    let psi = phi.compose(&m.pi)?;
    let new_pi = tau2.compose(&m.pi)?;
    for x in &mixed_integer_hull(m)?.vertices {
        let val = psi.apply(x);
        if val[0].is_negative() {
            return Err(Error::Precondition(format!(
                "face functional is negative ({}) at the hull vertex {}",
                val[0],
                m.pi.apply(x)
            )));
        }
    }
    let mut q = m.q.clone();
    q.add_eq(psi.matrix.row(0), -psi.offset[0].clone());
    Milef::new(q, m.sigma.clone(), new_pi)
}
