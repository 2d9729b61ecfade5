//! Integer-lattice tools: primitive vectors, Hermite normal form, unimodular
//! completion, integer point enumeration, lattice width, flatness bounds.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::caps::caps;
use crate::error::{check_dim, Error, Result};
use crate::exactgeom::{affine_hull, AffineMap, HPolyhedron, Lp, LpStatus, Sense};
use crate::linalg::{primitive_direction, QMatrix, QVector};
use crate::rational::Rational;

fn require_integral(v: &[Rational], what: &'static str) -> Result<()> {
    if v.iter().all(Rational::is_integer) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} must have integer entries")))
    }
}

/// `v / gcd(v)` with the first nonzero entry made positive.
pub fn primitive(v: &[Rational]) -> Result<QVector> {
    require_integral(v, "vector passed to primitive")?;
    if v.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("primitive of the zero vector".into()));
    }
    let p = primitive_direction(v);
    let first_negative = p.iter().find(|x| !x.is_zero()).is_some_and(Rational::is_negative);
    Ok(if first_negative { p.neg() } else { p })
}

pub fn gcd_of(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(&x.numer()))
}

/// Integer square matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct UnimodularMatrix(QMatrix);

impl UnimodularMatrix {
    pub fn new(m: QMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Precondition("unimodular matrix must be square".into()));
        }
        if !m.is_integral() {
            return Err(Error::Precondition("unimodular matrix must be integral".into()));
        }
        let det = m.det();
        if det.abs() != Rational::one() {
            return Err(Error::Precondition(format!("determinant {det} is not ±1")));
        }
        Ok(UnimodularMatrix(m))
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> QMatrix {
        self.0
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        UnimodularMatrix(self.0.inverse().expect("unimodular matrices are invertible"))
    }
}

fn col_combine(m: &mut QMatrix, i: usize, j: usize, a: &Rational, b: &Rational, c: &Rational, d: &Rational) {
    // (col_i, col_j) ← (a col_i + c col_j, b col_i + d col_j)
    for r in 0..m.nrows() {
        let x = m[(r, i)].clone();
        let y = m[(r, j)].clone();
        m[(r, i)] = a * &x + c * &y;
        m[(r, j)] = b * &x + d * &y;
    }
}

fn col_axpy(m: &mut QMatrix, target: usize, src: usize, f: &Rational) {
    for r in 0..m.nrows() {
        let t = f * &m[(r, src)];
        m[(r, target)] -= t;
    }
}

/// Column-style Hermite normal form `H = M U` with `U` unimodular.
///
/// `H` is a lower staircase: each row's pivot lies strictly right of the
/// previous pivot, entries right of a pivot are zero, pivots are positive,
/// and entries left of a pivot lie in `[0, pivot)`.
pub fn hnf(m: &QMatrix) -> Result<(QMatrix, UnimodularMatrix)> {
    if !m.is_integral() {
        return Err(Error::Precondition("HNF input must be integral".into()));
    }
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut h = m.clone();
    let mut u = QMatrix::identity(cols);
    let mut pc = 0;
    for i in 0..rows {
        if pc == cols {
            break;
        }
        for j in pc + 1..cols {
            if h[(i, j)].is_zero() {
                continue;
            }
            let a = h[(i, pc)].numer();
            let b = h[(i, j)].numer();
            let e = a.extended_gcd(&b);
            let g = e.gcd;
            let (s, t) = (Rational::from(e.x), Rational::from(e.y));
            let bg = Rational::from(-(&b / &g));
            let ag = Rational::from(&a / &g);
            col_combine(&mut h, pc, j, &s, &bg, &t, &ag);
            col_combine(&mut u, pc, j, &s, &bg, &t, &ag);
        }
        if h[(i, pc)].is_zero() {
            continue;
        }
        if h[(i, pc)].is_negative() {
            let minus = -Rational::one();
            col_combine(&mut h, pc, pc, &minus, &Rational::zero(), &Rational::zero(), &minus);
            col_combine(&mut u, pc, pc, &minus, &Rational::zero(), &Rational::zero(), &minus);
        }
        let piv = h[(i, pc)].clone();
        for j in 0..pc {
            let qf = (&h[(i, j)] / &piv).floor();
            if !qf.is_zero() {
                col_axpy(&mut h, j, pc, &qf);
                col_axpy(&mut u, j, pc, &qf);
            }
        }
        pc += 1;
    }
    Ok((h, UnimodularMatrix::new(u)?))
}

/// A unimodular matrix whose first row is `v` (which must have gcd 1).
pub fn unimodular_completion(v: &[Rational]) -> Result<UnimodularMatrix> {
    require_integral(v, "vector passed to unimodular_completion")?;
    if v.is_empty() {
        return Err(Error::Precondition("unimodular completion of an empty vector".into()));
    }
    let g = gcd_of(v);
    if !g.is_one() {
        return Err(Error::Precondition(format!(
            "unimodular completion needs gcd 1 but gcd is {g}; call primitive() first"
        )));
    }
    let (_, w) = hnf(&QMatrix::from_rows(&[v], v.len()))?;
    let u = w.inverse();
    debug_assert_eq!(u.matrix().row(0), v);
    Ok(u)
}

/// Integer vectors `z` with `P ∩ σ⁻¹(z) ≠ ∅`, each paired with a point of that fiber.
///
/// Results are in lexicographic order of `z`.
pub fn integer_images(p: &HPolyhedron, sigma: &AffineMap) -> Result<Vec<(QVector, QVector)>> {
    let mut out = Vec::new();
    for_each_fiber(p, sigma, |z, lp| {
        out.push((z.clone(), lp.point()));
        Ok(())
    })?;
    Ok(out)
}

/// Visit every non-empty fiber `P ∩ σ⁻¹(z)`, `z` integral, in lexicographic order.
///
/// Depth-first over the coordinates of `σ`; the range of each coordinate is
/// bounded by two LPs on the current fiber, and each branch adds one equality
/// to a cloned warm tableau. The visitor receives the tableau of the fiber.
pub fn for_each_fiber<F>(p: &HPolyhedron, sigma: &AffineMap, mut visit: F) -> Result<()>
where
    F: FnMut(&QVector, &mut Lp) -> Result<()>,
{
    check_dim("integer map source", p.ambient_dim(), sigma.source_dim())?;
    let mut lp = Lp::new(p);
    if !lp.is_feasible() {
        return Ok(());
    }
    if sigma.target_dim() == 0 {
        return visit(&QVector::default(), &mut lp);
    }
    let mut walk = FiberWalk { sigma, budget: 0, limit: caps().lattice_points, visit: &mut visit };
    walk.dfs(lp, 0, &mut QVector::default())
}

fn coordinate_range(lp: &mut Lp, row: &[Rational], t: &Rational) -> Result<(Rational, Rational)> {
    let lo = lp.optimize(row, Sense::Min);
    let hi = lp.optimize(row, Sense::Max);
    if lo.status == LpStatus::Unbounded || hi.status == LpStatus::Unbounded {
        return Err(Error::Unbounded("integer enumeration range"));
    }
    let lo = (lo.value.expect("optimal") + t).ceil();
    let hi = (hi.value.expect("optimal") + t).floor();
    Ok((lo, hi))
}

struct FiberWalk<'a, F> {
    sigma: &'a AffineMap,
    budget: u64,
    limit: u64,
    visit: &'a mut F,
}

impl<F> FiberWalk<'_, F>
where
    F: FnMut(&QVector, &mut Lp) -> Result<()>,
{
    fn dfs(&mut self, mut lp: Lp, depth: usize, prefix: &mut QVector) -> Result<()> {
        let row = self.sigma.matrix.row(depth);
        let t = &self.sigma.offset[depth];
        let (lo, hi) = coordinate_range(&mut lp, row, t)?;
        let mut val = lo;
        while val <= hi {
            self.budget += 1;
            if self.budget > self.limit {
                return Err(Error::ResourceCap {
                    what: "integer enumeration nodes",
                    requested: self.budget as u128,
                    limit: self.limit as u128,
                });
            }
            let mut child = lp.clone();
            child.add_equality(row, &val - t);
            if child.is_feasible() {
                prefix.push(val.clone());
                if depth + 1 == self.sigma.target_dim() {
                    (self.visit)(prefix, &mut child)?;
                } else {
                    self.dfs(child, depth + 1, prefix)?;
                }
                prefix.pop();
            }
            val += Rational::one();
        }
        Ok(())
    }
}

/// All lattice points of a bounded polyhedron, in lexicographic order.
pub fn integer_points(p: &HPolyhedron) -> Result<Vec<QVector>> {
    let d = p.ambient_dim();
    let mut lp = Lp::new(p);
    if !lp.is_feasible() {
        return Ok(Vec::new());
    }
    let mut volume: u128 = 1;
    for j in 0..d {
        let e = QVector::unit(d, j);
        let (lo, hi) = coordinate_range(&mut lp, &e, &Rational::zero())?;
        let span = if hi < lo { 0 } else { (&hi - &lo + Rational::one()).to_i64().unwrap_or(i64::MAX) as u128 };
        volume = volume.saturating_mul(span);
    }
    let limit = caps().lattice_points as u128;
    if volume > limit {
        return Err(Error::ResourceCap { what: "integer point bounding box", requested: volume, limit });
    }
    Ok(integer_images(p, &AffineMap::identity(d))?.into_iter().map(|(z, _)| z).collect())
}

/// Order used to break ties between directions: smaller ℓ1 norm first, then
/// lexicographically larger first (so `(1,0)` precedes `(0,1)`).
pub fn direction_order(a: &QVector, b: &QVector) -> Ordering {
    let n1 = |v: &QVector| v.iter().map(Rational::abs).sum::<Rational>();
    n1(a).cmp(&n1(b)).then_with(|| b.cmp(a))
}

/// Primitive integer directions with `‖v‖∞ ≤ v_max` and first nonzero entry
/// positive, sorted by [`direction_order`].
pub fn candidate_directions(k: usize, v_max: i64) -> Vec<QVector> {
    let mut out = Vec::new();
    let side = (2 * v_max + 1) as u64;
    let total = side.pow(k as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..k)
            .map(|_| {
                let x = (c % side) as i64 - v_max;
                c /= side;
                x
            })
            .collect();
        let Some(first) = v.iter().find(|&&x| x != 0) else { continue };
        if *first < 0 {
            continue;
        }
        let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g != 1 {
            continue;
        }
        out.push(QVector::from_ints(&v));
    }
    out.sort_by(direction_order);
    out
}

/// A lattice-width witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthCertificate {
    pub direction: QVector,
    pub width: Rational,
    pub max_point: QVector,
    pub min_point: QVector,
    /// True when no integer direction outside the search box can be narrower.
    pub exact: bool,
}

impl WidthCertificate {
    /// Recompute the width from the witnesses and check both lie in `B`.
    pub fn verify(&self, b: &HPolyhedron) -> bool {
        b.contains(&self.max_point)
            && b.contains(&self.min_point)
            && self.direction.dot(&self.max_point) - self.direction.dot(&self.min_point) == self.width
            && gcd_of(&self.direction).is_one()
    }
}

/// Largest `s` such that an axis-parallel cube of half-side `s` fits in `B`.
fn inscribed_cube_half_side(b: &HPolyhedron) -> Rational {
    let k = b.ambient_dim();
    if b.n_eq() > 0 {
        return Rational::zero();
    }
    let mut aux = HPolyhedron::universe(k + 1);
    for i in 0..b.n_ineq() {
        let a = b.ineq_lhs().row(i);
        let mut row: QVector = a.to_vec().into();
        row.push(a.iter().map(Rational::abs).sum());
        aux.add_ineq(&row, b.ineq_rhs()[i].clone());
    }
    let mut c = QVector::zeros(k + 1);
    c[k] = Rational::one();
    match Lp::new(&aux).optimize(&c, Sense::Max) {
        r if r.status == LpStatus::Optimal => r.value.expect("optimal").max(Rational::zero()),
        _ => Rational::zero(),
    }
}

/// Minimum-width primitive direction among `‖v‖∞ ≤ v_max`, with witnesses.
///
/// If `B` is not full-dimensional the primitive integer normal of its affine
/// hull is also a candidate (width zero), which makes the answer exact.
/// Otherwise exactness is certified with an inscribed cube of half-side `s`:
/// every direction outside the box has width at least `2 s (v_max + 1)`.
pub fn lattice_width(b: &HPolyhedron, v_max: i64) -> Result<WidthCertificate> {
    if v_max < 1 {
        return Err(Error::Precondition("v_max must be positive".into()));
    }
    let k = b.ambient_dim();
    if k == 0 {
        return Err(Error::Precondition("lattice width in dimension zero".into()));
    }
    let mut lp = Lp::new(b);
    if !lp.is_feasible() {
        return Err(Error::Empty("body passed to lattice_width"));
    }
    let aff = affine_hull(b).expect("feasible");
    let mut cands = candidate_directions(k, v_max);
    for i in 0..aff.eq_lhs.nrows() {
        let v = primitive(&primitive_direction(aff.eq_lhs.row(i)))?;
        if !cands.contains(&v) {
            cands.push(v);
        }
    }
    let mut best: Option<WidthCertificate> = None;
    for v in cands {
        let hi = lp.optimize(&v, Sense::Max);
        let lo = lp.optimize(&v, Sense::Min);
        if hi.status != LpStatus::Optimal || lo.status != LpStatus::Optimal {
            continue;
        }
        let width = hi.value.expect("optimal") - lo.value.expect("optimal");
        let better = match &best {
            None => true,
            Some(c) => width < c.width || (width == c.width && direction_order(&v, &c.direction) == Ordering::Less),
        };
        if better {
            best = Some(WidthCertificate {
                direction: v,
                width,
                max_point: hi.witness.expect("point"),
                min_point: lo.witness.expect("point"),
                exact: false,
            });
        }
    }
    let mut cert = best.ok_or(Error::Unbounded("body in every candidate direction"))?;
    cert.exact = if cert.width.is_zero() || aff.dim() < k {
        true
    } else {
        let s = inscribed_cube_half_side(b);
        cert.width <= Rational::from_integer(2) * s * Rational::from_integer(v_max + 1)
    };
    Ok(cert)
}

/// Reporting bound on the flatness constant: 1, 11/5, then `⌈k^{5/2}⌉`.
pub fn flt_bound(k: usize) -> Rational {
    match k {
        0 => Rational::zero(),
        1 => Rational::one(),
        2 => Rational::new(11, 5),
        _ => {
            let k5 = BigInt::from(k).pow(5);
            let s = k5.sqrt();
            let s = if &s * &s == k5 { s } else { s + 1 };
            Rational::from_bigint(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::hull;
    use crate::rational::{q, qi};

    fn v(xs: &[i64]) -> QVector {
        QVector::from_ints(xs)
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&v(&[2, 4])).unwrap(), v(&[1, 2]));
        assert_eq!(primitive(&v(&[0, -3, 6])).unwrap(), v(&[0, 1, -2]));
        assert_eq!(primitive(&v(&[6, 10, 15])).unwrap(), v(&[6, 10, 15]));
        assert!(primitive(&v(&[0, 0])).is_err());
        assert!(primitive(&[q(1, 2)]).is_err());
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = hnf(&QMatrix::from_int_rows(&[&[2, 3]], 2)).unwrap();
        assert_eq!(h, QMatrix::from_int_rows(&[&[1, 0]], 2));
        assert_eq!(QMatrix::from_int_rows(&[&[2, 3]], 2).mul(u.matrix()), h);
        let (h, u) = hnf(&QMatrix::identity(3)).unwrap();
        assert_eq!(h, QMatrix::identity(3));
        assert_eq!(u.matrix(), &QMatrix::identity(3));
        let (h, _) = hnf(&QMatrix::from_int_rows(&[&[4, 6]], 2)).unwrap();
        assert_eq!(h, QMatrix::from_int_rows(&[&[2, 0]], 2));
    }

    #[test]
    fn completion_examples() {
        assert_eq!(unimodular_completion(&v(&[1, 0, 0])).unwrap().matrix(), &QMatrix::identity(3));
        for w in [v(&[2, 3]), v(&[6, 10, 15]), v(&[-4, 7, 0, 9])] {
            let u = unimodular_completion(&w).unwrap();
            assert_eq!(u.matrix().row(0), &w[..]);
            assert_eq!(u.matrix().det().abs(), qi(1));
        }
        assert!(unimodular_completion(&v(&[2, 4])).is_err());
    }

    #[test]
    fn integer_point_examples() {
        let seg = HPolyhedron::from_box(&[qi(0)], &[q(5, 2)]);
        assert_eq!(integer_points(&seg).unwrap(), vec![v(&[0]), v(&[1]), v(&[2])]);
        let tri = hull(&[v(&[0, 0]), v(&[2, 0]), v(&[0, 2])]).unwrap();
        assert_eq!(integer_points(&tri).unwrap().len(), 6);
        let empty = HPolyhedron::from_box(&[qi(1)], &[qi(0)]);
        assert!(integer_points(&empty).unwrap().is_empty());
        let ray = HPolyhedron::universe(1).with_ineq(&[qi(-1)], qi(0));
        assert!(matches!(integer_points(&ray), Err(Error::Unbounded(_))));
    }

    #[test]
    fn width_examples() {
        let sq = HPolyhedron::from_box(&[qi(0), qi(0)], &[qi(1), qi(1)]);
        let c = lattice_width(&sq, 3).unwrap();
        assert_eq!((c.direction.clone(), c.width.clone()), (v(&[1, 0]), qi(1)));
        assert!(c.exact && c.verify(&sq));
        let seg = HPolyhedron::from_box(&[qi(0)], &[q(3, 2)]);
        let c = lattice_width(&seg, 5).unwrap();
        assert_eq!((c.direction, c.width), (v(&[1]), q(3, 2)));
        let tri = hull(&[v(&[0, 0]), v(&[3, 0]), v(&[0, 3])]).unwrap();
        let c = lattice_width(&tri, 3).unwrap();
        assert_eq!((c.direction, c.width), (v(&[1, 0]), qi(3)));
    }

    #[test]
    fn flat_body_has_zero_width() {
        let line = hull(&[v(&[0, 0]), v(&[7, 7])]).unwrap();
        let c = lattice_width(&line, 1).unwrap();
        assert_eq!(c.width, qi(0));
        assert!(c.exact);
        let skew = hull(&[v(&[0, 0]), v(&[9, 2])]).unwrap();
        let c = lattice_width(&skew, 1).unwrap();
        assert_eq!(c.width, qi(0));
        assert_eq!(c.direction, v(&[2, -9]));
    }

    #[test]
    fn flatness_table() {
        assert_eq!(flt_bound(1), qi(1));
        assert_eq!(flt_bound(2), q(11, 5));
        assert_eq!(flt_bound(3), qi(16));
        assert_eq!(flt_bound(4), qi(32));
    }
}
