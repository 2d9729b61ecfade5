//! Exact polyhedral kernel: H- and V-descriptions, affine maps, LP, and the
//! conversions between them.

mod dd;
mod lp;
mod ops;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, QMatrix, QVector};
use crate::rational::Rational;
use num_traits::Zero;

pub use lp::{lp_solve, DualCertificate, Lp, LpResult, LpStatus, Sense};
pub(crate) use ops::{min_sq_distance_to_polytope, project_bounded};
pub use ops::{
    affine_hull, contains_point, hull, hull_with_rays, intersect, irredundant, is_empty, min_sq_distance,
    project, project_with_vertices, prune_to_vertices, vertices, AffineHull,
};

/// `{x : A x ≤ b, E x = f}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolyhedron {
    ambient_dim: usize,
    ineq_lhs: QMatrix,
    ineq_rhs: QVector,
    eq_lhs: QMatrix,
    eq_rhs: QVector,
}

impl HPolyhedron {
    pub fn new(ineq_lhs: QMatrix, ineq_rhs: QVector, eq_lhs: QMatrix, eq_rhs: QVector, ambient_dim: usize) -> Result<Self> {
        check_dim("inequality matrix columns", ambient_dim, ineq_lhs.ncols())?;
        check_dim("equality matrix columns", ambient_dim, eq_lhs.ncols())?;
        check_dim("inequality right-hand side", ineq_lhs.nrows(), ineq_rhs.len())?;
        check_dim("equality right-hand side", eq_lhs.nrows(), eq_rhs.len())?;
        Ok(HPolyhedron { ambient_dim, ineq_lhs, ineq_rhs, eq_lhs, eq_rhs })
    }

    /// All of `R^d`.
    pub fn universe(d: usize) -> Self {
        HPolyhedron {
            ambient_dim: d,
            ineq_lhs: QMatrix::empty(d),
            ineq_rhs: QVector::default(),
            eq_lhs: QMatrix::empty(d),
            eq_rhs: QVector::default(),
        }
    }

    /// The axis-parallel box `lo ≤ x ≤ hi`.
    pub fn from_box(lo: &[Rational], hi: &[Rational]) -> Self {
        assert_eq!(lo.len(), hi.len(), "box bound length mismatch");
        let d = lo.len();
        let mut p = Self::universe(d);
        for i in 0..d {
            let e = QVector::unit(d, i);
            p.add_ineq(&e.neg(), -&lo[i]);
            p.add_ineq(&e, hi[i].clone());
        }
        p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn ineq_lhs(&self) -> &QMatrix {
        &self.ineq_lhs
    }

    pub fn ineq_rhs(&self) -> &QVector {
        &self.ineq_rhs
    }

    pub fn eq_lhs(&self) -> &QMatrix {
        &self.eq_lhs
    }

    pub fn eq_rhs(&self) -> &QVector {
        &self.eq_rhs
    }

    /// Raw inequality row count (an upper bound on the facet count).
    pub fn n_ineq(&self) -> usize {
        self.ineq_lhs.nrows()
    }

    pub fn n_eq(&self) -> usize {
        self.eq_lhs.nrows()
    }

    pub fn add_ineq(&mut self, a: &[Rational], b: Rational) {
        self.ineq_lhs.push_row(a);
        self.ineq_rhs.push(b);
    }

    pub fn add_eq(&mut self, a: &[Rational], f: Rational) {
        self.eq_lhs.push_row(a);
        self.eq_rhs.push(f);
    }

    pub fn with_ineq(mut self, a: &[Rational], b: Rational) -> Self {
        self.add_ineq(a, b);
        self
    }

    pub fn with_eq(mut self, a: &[Rational], f: Rational) -> Self {
        self.add_eq(a, f);
        self
    }

    /// True when some row reads `0 ≤ negative` or `0 = nonzero`.
    pub fn has_trivial_infeasibility(&self) -> bool {
        let bad_ineq = (0..self.n_ineq())
            .any(|i| self.ineq_lhs.row(i).iter().all(Zero::is_zero) && self.ineq_rhs[i].is_negative());
        let bad_eq =
            (0..self.n_eq()).any(|i| self.eq_lhs.row(i).iter().all(Zero::is_zero) && !self.eq_rhs[i].is_zero());
        bad_ineq || bad_eq
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Rational]) -> bool {
        assert_eq!(x.len(), self.ambient_dim, "point dimension mismatch");
        (0..self.n_ineq()).all(|i| dot(self.ineq_lhs.row(i), x) <= self.ineq_rhs[i])
            && (0..self.n_eq()).all(|i| dot(self.eq_lhs.row(i), x) == self.eq_rhs[i])
    }

    /// Slack `b_i − a_i·x` of every inequality row.
    pub fn slacks(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.n_ineq()).map(|i| &self.ineq_rhs[i] - dot(self.ineq_lhs.row(i), x)).collect()
    }

    /// Preimage under `f`: `{x : f(x) ∈ self}`.
    pub fn preimage(&self, f: &AffineMap) -> Result<HPolyhedron> {
        check_dim("preimage target", self.ambient_dim, f.target_dim())?;
        let d = f.source_dim();
        let mut out = HPolyhedron::universe(d);
        for i in 0..self.n_ineq() {
            let a = self.ineq_lhs.row(i);
            out.add_ineq(&f.matrix.left_mul_vec(a), &self.ineq_rhs[i] - dot(a, &f.offset));
        }
        for i in 0..self.n_eq() {
            let a = self.eq_lhs.row(i);
            out.add_eq(&f.matrix.left_mul_vec(a), &self.eq_rhs[i] - dot(a, &f.offset));
        }
        Ok(out)
    }

    /// Drops the inequality rows at the given (sorted or unsorted) indices.
    pub fn without_ineqs(&self, drop: &[usize]) -> HPolyhedron {
        let keep: Vec<usize> = (0..self.n_ineq()).filter(|i| !drop.contains(i)).collect();
        HPolyhedron {
            ambient_dim: self.ambient_dim,
            ineq_lhs: self.ineq_lhs.select_rows(&keep),
            ineq_rhs: keep.iter().map(|&i| self.ineq_rhs[i].clone()).collect(),
            eq_lhs: self.eq_lhs.clone(),
            eq_rhs: self.eq_rhs.clone(),
        }
    }

    /// Same set with every row scaled to coprime integers.
    pub fn normalized(&self) -> HPolyhedron {
        let mut out = HPolyhedron::universe(self.ambient_dim);
        for i in 0..self.n_ineq() {
            let (a, b) = normalize_row(self.ineq_lhs.row(i), &self.ineq_rhs[i]);
            out.add_ineq(&a, b);
        }
        for i in 0..self.n_eq() {
            let (a, b) = normalize_row(self.eq_lhs.row(i), &self.eq_rhs[i]);
            out.add_eq(&a, b);
        }
        out
    }
}

/// Scale `(a, b)` by a positive factor so all entries are coprime integers.
pub(crate) fn normalize_row(a: &[Rational], b: &Rational) -> (QVector, Rational) {
    let mut all: Vec<Rational> = a.to_vec();
    all.push(b.clone());
    let p = crate::linalg::primitive_direction(&all);
    if p.is_zero() {
        return (QVector(a.to_vec()), b.clone());
    }
    let mut p = p.0;
    let b = p.pop().unwrap();
    (QVector(p), b)
}

#[derive(Serialize, Deserialize)]
struct HPolyhedronJson {
    ambient_dim: usize,
    ineq_lhs: QMatrix,
    ineq_rhs: QVector,
    eq_lhs: QMatrix,
    eq_rhs: QVector,
}

fn fix_cols(m: QMatrix, d: usize) -> QMatrix {
    if m.nrows() == 0 {
        QMatrix::empty(d)
    } else {
        m
    }
}

impl Serialize for HPolyhedron {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HPolyhedronJson {
            ambient_dim: self.ambient_dim,
            ineq_lhs: self.ineq_lhs.clone(),
            ineq_rhs: self.ineq_rhs.clone(),
            eq_lhs: self.eq_lhs.clone(),
            eq_rhs: self.eq_rhs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HPolyhedron {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = HPolyhedronJson::deserialize(d)?;
        let n = raw.ambient_dim;
        HPolyhedron::new(fix_cols(raw.ineq_lhs, n), raw.ineq_rhs, fix_cols(raw.eq_lhs, n), raw.eq_rhs, n)
            .map_err(serde::de::Error::custom)
    }
}

/// `conv(vertices) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VPolytope {
    pub ambient_dim: usize,
    pub vertices: Vec<QVector>,
    pub rays: Vec<QVector>,
}

impl VPolytope {
    pub fn new(ambient_dim: usize, vertices: Vec<QVector>, rays: Vec<QVector>) -> Result<Self> {
        for v in vertices.iter().chain(&rays) {
            check_dim("V-description point", ambient_dim, v.len())?;
        }
        let mut p = VPolytope { ambient_dim, vertices, rays };
        p.canonicalize();
        Ok(p)
    }

    pub fn from_points(ambient_dim: usize, points: Vec<QVector>) -> Result<Self> {
        Self::new(ambient_dim, points, Vec::new())
    }

    pub fn empty(ambient_dim: usize) -> Self {
        VPolytope { ambient_dim, vertices: Vec::new(), rays: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    /// Sort and deduplicate points; rays are scaled to primitive integer directions first.
    pub fn canonicalize(&mut self) {
        self.vertices.sort();
        self.vertices.dedup();
        for r in &mut self.rays {
            *r = r.primitive_direction();
        }
        self.rays.retain(|r| !r.is_zero());
        self.rays.sort();
        self.rays.dedup();
    }

    /// Image under an affine map (not pruned).
    pub fn map(&self, f: &AffineMap) -> Result<VPolytope> {
        check_dim("map source", f.source_dim(), self.ambient_dim)?;
        let vs = self.vertices.iter().map(|v| f.apply(v)).collect();
        let rs = self.rays.iter().map(|r| f.matrix.mul_vec(r)).collect();
        VPolytope::new(f.target_dim(), vs, rs)
    }
}

impl<'de> Deserialize<'de> for VPolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            ambient_dim: usize,
            vertices: Vec<QVector>,
            #[serde(default)]
            rays: Vec<QVector>,
        }
        let raw = Raw::deserialize(d)?;
        VPolytope::new(raw.ambient_dim, raw.vertices, raw.rays).map_err(serde::de::Error::custom)
    }
}

/// `x ↦ M x + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub matrix: QMatrix,
    pub offset: QVector,
}

impl AffineMap {
    pub fn new(matrix: QMatrix, offset: QVector) -> Result<Self> {
        check_dim("affine map offset", matrix.nrows(), offset.len())?;
        Ok(AffineMap { matrix, offset })
    }

    pub fn linear(matrix: QMatrix) -> Self {
        let t = QVector::zeros(matrix.nrows());
        AffineMap { matrix, offset: t }
    }

    pub fn identity(d: usize) -> Self {
        Self::linear(QMatrix::identity(d))
    }

    /// The zero-dimensional map `R^d → R^0`.
    pub fn to_point(d: usize) -> Self {
        Self::linear(QMatrix::empty(d))
    }

    /// Coordinate selection `x ↦ (x_i)_{i ∈ idx}`.
    pub fn coordinates(d: usize, idx: &[usize]) -> Self {
        let mut m = QMatrix::zeros(idx.len(), d);
        for (r, &i) in idx.iter().enumerate() {
            m[(r, i)] = Rational::from_integer(1);
        }
        Self::linear(m)
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &[Rational]) -> QVector {
        self.matrix.mul_vec(x).add(&self.offset)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        check_dim("composition", self.source_dim(), inner.target_dim())?;
        let m = self.matrix.mul(&inner.matrix);
        let t = self.apply(&inner.offset);
        AffineMap::new(m, t)
    }

    /// Row `i` as a one-dimensional map.
    pub fn component(&self, i: usize) -> AffineMap {
        AffineMap { matrix: self.matrix.select_rows(&[i]), offset: QVector(vec![self.offset[i].clone()]) }
    }

    /// Drop the listed output rows.
    pub fn without_rows(&self, drop: &[usize]) -> AffineMap {
        let keep: Vec<usize> = (0..self.target_dim()).filter(|i| !drop.contains(i)).collect();
        AffineMap {
            matrix: self.matrix.select_rows(&keep),
            offset: keep.iter().map(|&i| self.offset[i].clone()).collect(),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.source_dim() == self.target_dim() && self.matrix.rank() == self.source_dim()
    }
}

#[derive(Serialize, Deserialize)]
struct AffineMapJson {
    source_dim: usize,
    matrix: QMatrix,
    offset: QVector,
}

impl Serialize for AffineMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AffineMapJson { source_dim: self.source_dim(), matrix: self.matrix.clone(), offset: self.offset.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AffineMapJson::deserialize(d)?;
        let m = fix_cols(raw.matrix, raw.source_dim);
        if m.ncols() != raw.source_dim {
            return Err(serde::de::Error::custom(Error::DimensionMismatch {
                context: "affine map source_dim",
                expected: raw.source_dim,
                found: m.ncols(),
            }));
        }
        AffineMap::new(m, raw.offset).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn json_round_trip_keeps_empty_shapes() {
        let p = HPolyhedron::universe(3).with_ineq(&[qi(1), qi(0), qi(0)], qi(1));
        let s = serde_json::to_string(&p).unwrap();
        let back: HPolyhedron = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.eq_lhs().ncols(), 3);
        let f = AffineMap::to_point(4);
        let back: AffineMap = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn malformed_shapes_rejected() {
        let bad = r#"{"ambient_dim":2,"ineq_lhs":[["1","0"]],"ineq_rhs":[],"eq_lhs":[],"eq_rhs":[]}"#;
        assert!(serde_json::from_str::<HPolyhedron>(bad).is_err());
        let bad = r#"{"ambient_dim":2,"ineq_lhs":[["1","0"]],"ineq_rhs":["1/0"],"eq_lhs":[],"eq_rhs":[]}"#;
        assert!(serde_json::from_str::<HPolyhedron>(bad).is_err());
    }

    #[test]
    fn compose_and_preimage() {
        let f = AffineMap::new(QMatrix::from_int_rows(&[&[1, 1]], 2), QVector::from_ints(&[1])).unwrap();
        let g = AffineMap::new(QMatrix::from_int_rows(&[&[2]], 1), QVector::from_ints(&[-1])).unwrap();
        let h = g.compose(&f).unwrap();
        assert_eq!(h.apply(&QVector::from_ints(&[1, 2])), QVector::from_ints(&[7]));
        let seg = HPolyhedron::from_box(&[qi(0)], &[qi(1)]);
        let pre = seg.preimage(&f).unwrap();
        assert!(pre.contains(&QVector::from_ints(&[0, -1])));
        assert!(!pre.contains(&QVector::from_ints(&[1, 0])));
    }
}
