//! H↔V conversion, projection, intersection, redundancy removal, distances.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};

use super::dd::cone_generators;
use super::lp::{Lp, LpStatus, Sense};
use super::{normalize_row, AffineMap, HPolyhedron, VPolytope};
use crate::caps::caps;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, QMatrix, QVector};
use crate::rational::Rational;

/// Affine hull of a non-empty polyhedron: `{x0 + Σ u_j n_j}`, equivalently the
/// equality system `eq_lhs x = eq_rhs` in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct AffineHull {
    pub point: QVector,
    /// One direction per free coordinate; direction `j` has a one at `free[j]`.
    pub directions: Vec<QVector>,
    pub free: Vec<usize>,
    pub eq_lhs: QMatrix,
    pub eq_rhs: QVector,
    /// Inequality rows of the input that hold with equality on the whole set.
    pub implicit_rows: Vec<usize>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Coordinates of `x` (assumed in the hull) in the direction basis.
    pub fn coords(&self, x: &[Rational]) -> QVector {
        self.free.iter().map(|&j| x[j].clone()).collect()
    }

    pub fn lift(&self, u: &[Rational]) -> QVector {
        let mut x = self.point.clone();
        for (uj, n) in u.iter().zip(&self.directions) {
            if uj.is_zero() {
                continue;
            }
            for (xi, ni) in x.iter_mut().zip(n.iter()) {
                if !ni.is_zero() {
                    *xi += uj * ni;
                }
            }
        }
        x
    }
}

fn hull_from_equalities(d: usize, lhs: &QMatrix, rhs: &QVector) -> Option<(QMatrix, QVector, Vec<usize>, QVector, Vec<QVector>)> {
    let aug_rows: Vec<QVector> = (0..lhs.nrows())
        .map(|i| {
            let mut r = lhs.row_vec(i);
            r.push(rhs[i].clone());
            r
        })
        .collect();
    let aug = QMatrix::from_rows(&aug_rows, d + 1);
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&d) {
        return None;
    }
    let k = pivots.len();
    let eq_rows: Vec<QVector> = (0..k).map(|i| QVector(r.row(i)[..d].to_vec())).collect();
    let eq_lhs = QMatrix::from_rows(&eq_rows, d);
    let eq_rhs: QVector = (0..k).map(|i| r[(i, d)].clone()).collect();
    let mut is_pivot = vec![false; d];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..d).filter(|&j| !is_pivot[j]).collect();
    let mut point = QVector::zeros(d);
    for (i, &p) in pivots.iter().enumerate() {
        point[p] = eq_rhs[i].clone();
    }
    let directions = free
        .iter()
        .map(|&f| {
            let mut v = QVector::zeros(d);
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(i, f)];
            }
            v
        })
        .collect();
    Some((eq_lhs, eq_rhs, free, point, directions))
}

/// Inequality rows that are tight on all of `P` (P must be feasible).
fn implicit_equalities(p: &HPolyhedron) -> Vec<usize> {
    let d = p.ambient_dim();
    let m = p.n_ineq();
    if m == 0 {
        return Vec::new();
    }
    // Variables (x, t): a_i x + t_i ≤ b_i, 0 ≤ t_i ≤ 1.
    let mut aux = HPolyhedron::universe(d + m);
    for i in 0..m {
        let mut a = p.ineq_lhs().row_vec(i);
        a.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        aux.add_ineq(&a, p.ineq_rhs()[i].clone());
        let mut lo = QVector::zeros(d + m);
        lo[d + i] = -Rational::one();
        aux.add_ineq(&lo, Rational::zero());
        let mut hi = QVector::zeros(d + m);
        hi[d + i] = Rational::one();
        aux.add_ineq(&hi, Rational::one());
    }
    for i in 0..p.n_eq() {
        let mut a = p.eq_lhs().row_vec(i);
        a.extend(std::iter::repeat_n(Rational::zero(), m));
        aux.add_eq(&a, p.eq_rhs()[i].clone());
    }
    let mut lp = Lp::new(&aux);
    let mut open: Vec<bool> = (0..m).map(|i| !p.ineq_lhs().row(i).iter().all(Zero::is_zero)).collect();
    let mut implicit: Vec<usize> = (0..m).filter(|&i| !open[i] && p.ineq_rhs()[i].is_zero()).collect();
    loop {
        if !open.iter().any(|&o| o) {
            break;
        }
        let mut c = QVector::zeros(d + m);
        for i in 0..m {
            if open[i] {
                c[d + i] = Rational::one();
            }
        }
        let r = lp.optimize(&c, Sense::Max);
        let x = r.witness.expect("bounded auxiliary LP");
        let mut progressed = false;
        for i in 0..m {
            if open[i] && x[d + i].is_positive() {
                open[i] = false;
                progressed = true;
            }
        }
        if !progressed {
            implicit.extend((0..m).filter(|&i| open[i]));
            break;
        }
        // Any point strictly inside row i proves it is not implicit; also
        // release rows already strict at the current point.
        let xs = QVector(x[..d].to_vec());
        let sl = p.slacks(&xs);
        for i in 0..m {
            if open[i] && sl[i].is_positive() {
                open[i] = false;
            }
        }
    }
    implicit.sort_unstable();
    implicit
}

/// Affine hull of `P`, or `None` when `P` is empty.
pub fn affine_hull(p: &HPolyhedron) -> Option<AffineHull> {
    if p.has_trivial_infeasibility() || !Lp::new(p).is_feasible() {
        return None;
    }
    let implicit = implicit_equalities(p);
    let d = p.ambient_dim();
    let mut lhs = p.eq_lhs().clone();
    let mut rhs = p.eq_rhs().clone();
    for &i in &implicit {
        lhs.push_row(p.ineq_lhs().row(i));
        rhs.push(p.ineq_rhs()[i].clone());
    }
    let (eq_lhs, eq_rhs, free, point, directions) =
        hull_from_equalities(d, &lhs, &rhs).expect("feasible system has a consistent affine hull");
    Some(AffineHull { point, directions, free, eq_lhs, eq_rhs, implicit_rows: implicit })
}

pub fn is_empty(p: &HPolyhedron) -> bool {
    p.has_trivial_infeasibility() || !Lp::new(p).is_feasible()
}

/// Vertices and extreme rays of `P`.
///
/// When `P` has a lineality space the output is still a valid
/// `conv + cone` description: the points are vertices of `P ∩ L⊥`-type
/// sections and each lineality direction appears as a pair of opposite rays.
pub fn vertices(p: &HPolyhedron) -> Result<VPolytope> {
    let d = p.ambient_dim();
    let Some(aff) = affine_hull(p) else {
        return Ok(VPolytope::empty(d));
    };
    let r = aff.dim();
    let cap = caps().vertex_dim;
    if r > cap {
        return Err(Error::ResourceCap { what: "vertex enumeration dimension", requested: r as u128, limit: cap as u128 });
    }
    if r == 0 {
        return VPolytope::new(d, vec![aff.point], Vec::new());
    }
    let implicit: HashSet<usize> = aff.implicit_rows.iter().copied().collect();
    // Cone rows in (u, t): (b − a·x0) t − (a N) u ≥ 0, plus t ≥ 0.
    let mut rows = Vec::new();
    for i in 0..p.n_ineq() {
        if implicit.contains(&i) {
            continue;
        }
        let a = p.ineq_lhs().row(i);
        let an: Vec<Rational> = aff.directions.iter().map(|n| dot(a, n)).collect();
        let beta = &p.ineq_rhs()[i] - dot(a, &aff.point);
        if an.iter().all(Zero::is_zero) {
            continue;
        }
        let mut row: QVector = an.iter().map(|x| -x).collect();
        row.push(beta);
        rows.push(row);
    }
    let mut t_row = QVector::zeros(r + 1);
    t_row[r] = Rational::one();
    rows.push(t_row);
    let (rays, lineality) = cone_generators(&rows, r + 1);
    let mut verts = Vec::new();
    let mut out_rays = Vec::new();
    let dir = |u: &[Rational]| -> QVector {
        let mut x = QVector::zeros(d);
        for (uj, n) in u.iter().zip(&aff.directions) {
            if !uj.is_zero() {
                x = x.add(&n.scale(uj));
            }
        }
        x
    };
    for y in &rays {
        let t = &y[r];
        if t.is_positive() {
            let u: Vec<Rational> = y[..r].iter().map(|c| c / t).collect();
            verts.push(aff.lift(&u));
        } else {
            out_rays.push(dir(&y[..r]));
        }
    }
    for l in &lineality {
        let v = dir(&l[..r]);
        out_rays.push(v.clone());
        out_rays.push(v.neg());
    }
    if verts.is_empty() {
        // Only possible with lineality: P is a union of lines through the affine hull point.
        verts.push(aff.point.clone());
    }
    VPolytope::new(d, verts, out_rays)
}

/// Canonical irredundant H-description of `conv(points)`.
pub fn hull(points: &[QVector]) -> Result<HPolyhedron> {
    let d = points.first().map_or(0, |p| p.len());
    hull_with_rays(d, points, &[])
}

/// Canonical irredundant H-description of `conv(points) + cone(rays)`.
///
/// Equalities are in reduced row echelon form scaled to coprime integers;
/// inequalities are supported on the free coordinates of that echelon form,
/// scaled to coprime integers, and sorted.
pub fn hull_with_rays(d: usize, points: &[QVector], rays: &[QVector]) -> Result<HPolyhedron> {
    if points.is_empty() {
        return Err(Error::Empty("point set for hull"));
    }
    for p in points.iter().chain(rays) {
        check_dim("hull input point", d, p.len())?;
    }
    let p0 = &points[0];
    let mut dirs: Vec<QVector> = points[1..].iter().map(|p| p.sub(p0)).collect();
    dirs.extend(rays.iter().cloned());
    let normals = if dirs.is_empty() { QMatrix::identity(d).rows_iter().map(|r| QVector(r.to_vec())).collect() } else { QMatrix::from_rows(&dirs, d).nullspace() };
    let eq_l = QMatrix::from_rows(&normals, d);
    let eq_r: QVector = normals.iter().map(|a| a.dot(p0)).collect();
    let (eq_lhs, eq_rhs, free, _, _) = hull_from_equalities(d, &eq_l, &eq_r).expect("points satisfy their own affine hull");
    let mut out = HPolyhedron::universe(d);
    for i in 0..eq_lhs.nrows() {
        let (a, b) = normalize_row(eq_lhs.row(i), &eq_rhs[i]);
        out.add_eq(&a, b);
    }
    let r = free.len();
    if r == 0 {
        return Ok(out);
    }
    // Polar cone over (a, β) in free coordinates: β − a·u ≥ 0, −a·ray ≥ 0.
    let mut rows: Vec<QVector> = Vec::new();
    let mut seen = HashSet::new();
    for p in points {
        let mut row: QVector = free.iter().map(|&j| -&p[j]).collect();
        row.push(Rational::one());
        if seen.insert(row.clone()) {
            rows.push(row);
        }
    }
    for ray in rays {
        let mut row: QVector = free.iter().map(|&j| -&ray[j]).collect();
        row.push(Rational::zero());
        if seen.insert(row.clone()) {
            rows.push(row);
        }
    }
    let (gens, lineality) = cone_generators(&rows, r + 1);
    debug_assert!(lineality.is_empty());
    let mut ineqs: Vec<(QVector, Rational)> = Vec::new();
    for g in gens {
        if g[..r].iter().all(Zero::is_zero) {
            continue;
        }
        let mut a = QVector::zeros(d);
        for (k, &j) in free.iter().enumerate() {
            a[j] = g[k].clone();
        }
        ineqs.push(normalize_row(&a, &g[r]));
    }
    ineqs.sort();
    ineqs.dedup();
    for (a, b) in ineqs {
        out.add_ineq(&a, b);
    }
    Ok(out)
}

/// `P ∩ S`.
pub fn intersect(p: &HPolyhedron, s: &HPolyhedron) -> Result<HPolyhedron> {
    check_dim("intersection", p.ambient_dim(), s.ambient_dim())?;
    let mut out = p.clone();
    for i in 0..s.n_ineq() {
        out.add_ineq(s.ineq_lhs().row(i), s.ineq_rhs()[i].clone());
    }
    for i in 0..s.n_eq() {
        out.add_eq(s.eq_lhs().row(i), s.eq_rhs()[i].clone());
    }
    Ok(out)
}

/// The canonical empty polyhedron `{x : 0 ≤ −1}`.
pub(crate) fn empty_polyhedron(d: usize) -> HPolyhedron {
    HPolyhedron::universe(d).with_ineq(&QVector::zeros(d), -Rational::one())
}

/// Same set with implicit equalities moved to equality rows, redundant
/// inequalities removed, and independent equality rows.
pub fn irredundant(p: &HPolyhedron) -> HPolyhedron {
    let d = p.ambient_dim();
    let Some(aff) = affine_hull(p) else {
        return empty_polyhedron(d);
    };
    let implicit: HashSet<usize> = aff.implicit_rows.iter().copied().collect();
    let mut out = HPolyhedron::universe(d);
    for i in 0..aff.eq_lhs.nrows() {
        let (a, b) = normalize_row(aff.eq_lhs.row(i), &aff.eq_rhs[i]);
        out.add_eq(&a, b);
    }
    let mut kept: Vec<(QVector, Rational)> = Vec::new();
    let mut seen = HashSet::new();
    for i in 0..p.n_ineq() {
        if implicit.contains(&i) {
            continue;
        }
        let (a, b) = normalize_row(p.ineq_lhs().row(i), &p.ineq_rhs()[i]);
        if a.is_zero() || !seen.insert((a.clone(), b.clone())) {
            continue;
        }
        kept.push((a, b));
    }
    let mut i = 0;
    while i < kept.len() {
        let mut q = out.clone();
        for (k, (a, b)) in kept.iter().enumerate() {
            if k != i {
                q.add_ineq(a, b.clone());
            }
        }
        let (a, b) = &kept[i];
        let r = Lp::new(&q).optimize(a, Sense::Max);
        let redundant = r.status == LpStatus::Optimal && r.value.as_ref().is_some_and(|v| v <= b);
        if redundant {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    for (a, b) in kept {
        out.add_ineq(&a, b);
    }
    out
}

/// Membership of `x` in `conv(V) + cone(R)` by an LP over the multipliers.
pub fn contains_point(v: &VPolytope, x: &[Rational]) -> Result<bool> {
    check_dim("membership point", v.ambient_dim, x.len())?;
    if v.is_empty() {
        return Ok(false);
    }
    if v.vertices.iter().any(|p| p.0 == x) {
        return Ok(true);
    }
    let nv = v.vertices.len();
    let n = nv + v.rays.len();
    let mut p = HPolyhedron::universe(n);
    for k in 0..n {
        let mut a = QVector::zeros(n);
        a[k] = -Rational::one();
        p.add_ineq(&a, Rational::zero());
    }
    let ones: QVector = (0..n).map(|k| if k < nv { Rational::one() } else { Rational::zero() }).collect();
    p.add_eq(&ones, Rational::one());
    for i in 0..v.ambient_dim {
        let row: QVector = v.vertices.iter().chain(&v.rays).map(|g| g[i].clone()).collect();
        p.add_eq(&row, x[i].clone());
    }
    Ok(Lp::new(&p).is_feasible())
}

/// True if `p` is the unique maximizer of `c` among `points`.
fn unique_max(points: &[QVector], idx: usize, c: &[Rational]) -> bool {
    let v = dot(c, &points[idx]);
    points.iter().enumerate().all(|(k, q)| k == idx || dot(c, q) < v)
}

/// The subset of `points` that are vertices of their convex hull, sorted.
pub fn prune_to_vertices(points: &[QVector]) -> Result<Vec<QVector>> {
    let mut pts: Vec<QVector> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(pts);
    }
    let d = pts[0].len();
    let n = pts.len();
    if d <= 5 && n > 4 * d {
        let h = hull(&pts)?;
        return Ok(vertices_by_tight_rank(&h, &pts));
    }
    let centroid: QVector = (0..d)
        .map(|j| pts.iter().map(|p| p[j].clone()).sum::<Rational>() / Rational::from(n))
        .collect();
    let mut keep = Vec::new();
    for i in 0..n {
        let p = &pts[i];
        let binary_probe: QVector = p.iter().map(|x| x + x - Rational::one()).collect();
        if unique_max(&pts, i, &p.sub(&centroid)) || unique_max(&pts, i, &binary_probe) {
            keep.push(p.clone());
            continue;
        }
        let others: Vec<QVector> = pts.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, q)| q.clone()).collect();
        let v = VPolytope { ambient_dim: d, vertices: others, rays: Vec::new() };
        if !contains_point(&v, p)? {
            keep.push(p.clone());
        }
    }
    Ok(keep)
}

/// Vertices of `conv(points)` given its H-description: points whose tight
/// inequality normals reach the dimension of the hull.
fn vertices_by_tight_rank(h: &HPolyhedron, points: &[QVector]) -> Vec<QVector> {
    let dim = h.ambient_dim() - h.n_eq();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert(p.clone()) {
            continue;
        }
        let tight: Vec<QVector> = (0..h.n_ineq())
            .filter(|&i| dot(h.ineq_lhs().row(i), p) == h.ineq_rhs()[i])
            .map(|i| h.ineq_lhs().row_vec(i))
            .collect();
        let rank = if tight.is_empty() {
            0
        } else {
            let mut m = QMatrix::from_rows(&tight, h.ambient_dim());
            for i in 0..h.n_eq() {
                m.push_row(h.eq_lhs().row(i));
            }
            m.rank() - h.n_eq()
        };
        if rank == dim {
            out.push(p.clone());
        }
    }
    out
}

/// Exact image `f(P)` together with its vertices (and rays when unbounded).
pub fn project_with_vertices(p: &HPolyhedron, f: &AffineMap) -> Result<(HPolyhedron, VPolytope)> {
    check_dim("projection source", p.ambient_dim(), f.source_dim())?;
    let dt = f.target_dim();
    let mut lp = Lp::new(p);
    if !lp.is_feasible() {
        return Ok((empty_polyhedron(dt), VPolytope::empty(dt)));
    }
    match project_bounded(&mut lp, f) {
        Ok(r) => Ok(r),
        Err(Error::Unbounded(_)) => {
            let v = vertices(p)?;
            let img = v.map(f)?;
            let h = hull_with_rays(dt, &img.vertices, &img.rays)?;
            let hv = vertices(&h)?;
            Ok((h, hv))
        }
        Err(e) => Err(e),
    }
}

/// Exact image `f(P)`.
pub fn project(p: &HPolyhedron, f: &AffineMap) -> Result<HPolyhedron> {
    Ok(project_with_vertices(p, f)?.0)
}

/// Image of a bounded polyhedron computed with a linear optimization oracle
/// in the target space: the affine hull is grown until every candidate normal
/// is constant, then facets of the current hull are certified one by one.
pub(crate) fn project_bounded(lp: &mut Lp, f: &AffineMap) -> Result<(HPolyhedron, VPolytope)> {
    let dt = f.target_dim();
    let mut oracle = |c: &[Rational]| -> Result<(Rational, QVector)> {
        let obj = f.matrix.left_mul_vec(c);
        let r = lp.optimize(&obj, Sense::Max);
        match r.status {
            LpStatus::Optimal => {
                let y = f.apply(r.witness.as_ref().expect("optimal point"));
                Ok((dot(c, &y), y))
            }
            LpStatus::Unbounded => Err(Error::Unbounded("projected polyhedron")),
            LpStatus::Infeasible => unreachable!("feasibility established before projection"),
        }
    };
    let (_, p0) = oracle(&QVector::zeros(dt))?;
    let mut pts = vec![p0.clone()];
    let mut dirs: Vec<QVector> = Vec::new();
    'grow: loop {
        let normals = if dirs.is_empty() {
            (0..dt).map(|i| QVector::unit(dt, i)).collect()
        } else {
            QMatrix::from_rows(&dirs, dt).nullspace()
        };
        for a in &normals {
            let base = a.dot(&p0);
            let (hi, y) = oracle(a)?;
            if hi > base {
                dirs.push(y.sub(&p0));
                pts.push(y);
                continue 'grow;
            }
            let (lo, y) = oracle(&a.neg())?;
            if -lo < base {
                dirs.push(y.sub(&p0));
                pts.push(y);
                continue 'grow;
            }
        }
        break;
    }
    let mut verified: HashSet<(QVector, Rational)> = HashSet::new();
    loop {
        let h = hull(&pts)?;
        let mut added = false;
        for i in 0..h.n_ineq() {
            let key = (h.ineq_lhs().row_vec(i), h.ineq_rhs()[i].clone());
            if verified.contains(&key) {
                continue;
            }
            let (val, y) = oracle(&key.0)?;
            if val > key.1 {
                if !pts.contains(&y) {
                    pts.push(y);
                    added = true;
                }
            } else {
                verified.insert(key);
            }
        }
        if !added {
            let verts = vertices_by_tight_rank(&h, &pts);
            let v = VPolytope::new(dt, verts, Vec::new())?;
            return Ok((h, v));
        }
    }
}

/// Exact squared Euclidean distance from `x` to a non-empty bounded polyhedron.
pub fn min_sq_distance(x: &[Rational], p: &HPolyhedron) -> Result<Rational> {
    check_dim("distance query", p.ambient_dim(), x.len())?;
    if p.contains(x) {
        return Ok(Rational::zero());
    }
    let v = vertices(p)?;
    if v.is_empty() {
        return Err(Error::Empty("polyhedron in distance query"));
    }
    if !v.is_bounded() {
        return Err(Error::Unbounded("polyhedron in distance query"));
    }
    min_sq_distance_to_polytope(x, p, &v.vertices)
}

/// Distance to `conv(verts)`; `p` is an H-description of the same set used
/// for exact membership of candidate projections.
pub(crate) fn min_sq_distance_to_polytope(x: &[Rational], p: &HPolyhedron, verts: &[QVector]) -> Result<Rational> {
    if verts.len() == 1 {
        return Ok(QVector(x.to_vec()).sub(&verts[0]).norm_sq());
    }
    let h = hull(verts)?;
    let n = verts.len();
    let facet_sets: Vec<BTreeSet<usize>> = (0..h.n_ineq())
        .map(|i| (0..n).filter(|&k| dot(h.ineq_lhs().row(i), &verts[k]) == h.ineq_rhs()[i]).collect())
        .collect();
    let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut queue: Vec<BTreeSet<usize>> = vec![(0..n).collect()];
    while let Some(face) = queue.pop() {
        if face.is_empty() || !faces.insert(face.clone()) {
            continue;
        }
        for s in &facet_sets {
            let sub: BTreeSet<usize> = face.intersection(s).copied().collect();
            if sub.len() < face.len() && !faces.contains(&sub) {
                queue.push(sub);
            }
        }
    }
    let xv = QVector(x.to_vec());
    let mut best: Option<Rational> = None;
    for face in &faces {
        let idx: Vec<usize> = face.iter().copied().collect();
        let q0 = &verts[idx[0]];
        let dirs: Vec<QVector> = idx[1..].iter().map(|&k| verts[k].sub(q0)).collect();
        let proj = if dirs.is_empty() {
            q0.clone()
        } else {
            let (r, piv) = QMatrix::from_rows(&dirs, x.len()).rref();
            let basis: Vec<QVector> = (0..piv.len()).map(|i| r.row_vec(i)).collect();
            let k = basis.len();
            let mut gram = QMatrix::zeros(k, k);
            for a in 0..k {
                for b in 0..k {
                    gram[(a, b)] = basis[a].dot(&basis[b]);
                }
            }
            let rhs: Vec<Rational> = basis.iter().map(|b| b.dot(&xv.sub(q0))).collect();
            let lam = gram.solve(&rhs).expect("Gram matrix of a basis is invertible");
            let mut y = q0.clone();
            for (l, b) in lam.iter().zip(&basis) {
                y = y.add(&b.scale(l));
            }
            y
        };
        if !p.contains(&proj) {
            continue;
        }
        let dist = xv.sub(&proj).norm_sq();
        if best.as_ref().is_none_or(|b| dist < *b) {
            best = Some(dist);
        }
    }
    Ok(best.expect("the vertex faces always give feasible candidates"))
}
