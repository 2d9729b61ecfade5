//! Seeded random instances for property checks and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exactgeom::{prune_to_vertices, AffineMap, HPolyhedron, VPolytope};
use crate::linalg::{QMatrix, QVector};
use crate::rational::Rational;

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[lo, hi]` with denominator dividing `den`.
pub fn rational_in(rng: &mut InstanceRng, lo: i64, hi: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(lo * den..=hi * den), den)
}

pub fn point_in_box(rng: &mut InstanceRng, d: usize, lo: i64, hi: i64, den: i64) -> QVector {
    (0..d).map(|_| rational_in(rng, lo, hi, den)).collect()
}

/// Hull of `n` random points of `[lo, hi]^d` with denominators dividing `den`.
pub fn random_polytope(rng: &mut InstanceRng, d: usize, n: usize, lo: i64, hi: i64, den: i64) -> Result<VPolytope> {
    let pts: Vec<QVector> = (0..n.max(1)).map(|_| point_in_box(rng, d, lo, hi, den)).collect();
    VPolytope::from_points(d, prune_to_vertices(&pts)?)
}

/// `conv(A ∪ extra)` for `extra` random points in `[lo, hi]^d`.
pub fn enlarge(rng: &mut InstanceRng, a: &VPolytope, extra: usize, lo: i64, hi: i64, den: i64) -> Result<VPolytope> {
    let mut pts = a.vertices.clone();
    pts.extend((0..extra).map(|_| point_in_box(rng, a.ambient_dim, lo, hi, den)));
    VPolytope::from_points(a.ambient_dim, prune_to_vertices(&pts)?)
}

/// `A ⊆ B` in `[0, 2]^d`.
pub fn nested_pair(rng: &mut InstanceRng, d: usize) -> Result<(VPolytope, VPolytope)> {
    let n = rng.gen_range(1..=d + 2);
    let a = random_polytope(rng, d, n, 0, 2, 4)?;
    let extra = rng.gen_range(0..=3);
    let b = enlarge(rng, &a, extra, 0, 2, 4)?;
    Ok((a, b))
}

/// `A ⊆ B ⊆ C` in `[0, 2]^d`.
pub fn nested_triple(rng: &mut InstanceRng, d: usize) -> Result<(VPolytope, VPolytope, VPolytope)> {
    let (a, b) = nested_pair(rng, d)?;
    let extra = rng.gen_range(0..=3);
    let c = enlarge(rng, &b, extra, 0, 2, 4)?;
    Ok((a, b, c))
}

fn random_bits(rng: &mut InstanceRng, d: usize) -> Vec<bool> {
    (0..d).map(|_| rng.gen_bool(0.5)).collect()
}

fn leq(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(x, y)| !x || *y)
}

/// A random antichain of `{0,1}^d` made of the maximal (or minimal) elements
/// of a few random vectors.
pub fn random_antichain(rng: &mut InstanceRng, d: usize, maximal: bool) -> Vec<Vec<bool>> {
    let t = rng.gen_range(1..=d + 1);
    let mut s: Vec<Vec<bool>> = (0..t).map(|_| random_bits(rng, d)).collect();
    s.sort();
    s.dedup();
    let below = |a: &[bool], b: &[bool]| if maximal { leq(a, b) } else { leq(b, a) };
    s.iter().filter(|a| !s.iter().any(|b| b != *a && below(a, b))).cloned().collect()
}

fn to_point(bits: &[bool]) -> QVector {
    bits.iter().map(|&b| Rational::from_integer(b as i64)).collect()
}

fn closure(d: usize, generators: &[Vec<bool>], down: bool) -> Result<VPolytope> {
    let pts: Vec<QVector> = (0u32..1 << d)
        .map(|s| (0..d).map(|j| s >> j & 1 == 1).collect::<Vec<bool>>())
        .filter(|x| generators.iter().any(|g| if down { leq(x, g) } else { leq(g, x) }))
        .map(|x| to_point(&x))
        .collect();
    VPolytope::from_points(d, prune_to_vertices(&pts)?)
}

/// Down-closure in `{0,1}^d` of a random antichain, as a 0/1 polytope.
pub fn down_closed(rng: &mut InstanceRng, d: usize) -> Result<VPolytope> {
    let gens = random_antichain(rng, d, true);
    closure(d, &gens, true)
}

/// Up-closure in `{0,1}^d` of a random antichain, as a 0/1 polytope.
pub fn up_closed(rng: &mut InstanceRng, d: usize) -> Result<VPolytope> {
    let gens = random_antichain(rng, d, false);
    closure(d, &gens, false)
}

/// Coordinates equal to 1 on every vertex of `a`.
pub fn fixed_ones(a: &VPolytope) -> Vec<usize> {
    (0..a.ambient_dim).filter(|&j| a.vertices.iter().all(|v| v[j] == Rational::from_integer(1))).collect()
}

/// `conv(A ∪ extra)` with `extra` random points of `[0,1]^d` that agree with
/// `A` on the coordinates fixed to 1, so the dimension is unchanged.
pub fn up_closed_relaxation(rng: &mut InstanceRng, a: &VPolytope, extra: usize) -> Result<VPolytope> {
    let fixed = fixed_ones(a);
    let mut pts = a.vertices.clone();
    for _ in 0..extra {
        let mut p = point_in_box(rng, a.ambient_dim, 0, 1, 4);
        for &j in &fixed {
            p[j] = Rational::from_integer(1);
        }
        pts.push(p);
    }
    VPolytope::from_points(a.ambient_dim, prune_to_vertices(&pts)?)
}

/// An affine map `R^d → R^m` with small integer matrix and rational offset.
pub fn random_affine_map(rng: &mut InstanceRng, d: usize, m: usize) -> AffineMap {
    let mut mat = QMatrix::zeros(m, d);
    for i in 0..m {
        for j in 0..d {
            mat[(i, j)] = rational_in(rng, -2, 2, 1);
        }
    }
    let offset = point_in_box(rng, m, -1, 1, 2);
    AffineMap::new(mat, offset).expect("shapes agree")
}

/// An invertible affine map of `R^d`.
pub fn random_invertible_map(rng: &mut InstanceRng, d: usize) -> AffineMap {
    loop {
        let f = random_affine_map(rng, d, d);
        if f.is_invertible() {
            return f;
        }
    }
}

/// A bounded polytope `Q ⊆ [-5/2, 5/2]^ℓ` cut by a few random integer halfspaces
/// that keep a random point, and an integer map `σ: R^ℓ → R^k`.
pub fn random_milef_domain(rng: &mut InstanceRng, ell: usize, k: usize) -> (HPolyhedron, AffineMap) {
    let half = Rational::new(rng.gen_range(1..=5), 2);
    let lo = vec![-half.clone(); ell];
    let hi = vec![half.clone(); ell];
    let mut q = HPolyhedron::from_box(&lo, &hi);
    let keep = point_in_box(rng, ell, -1, 1, 4).scale(&(&half / Rational::from_integer(2)));
    for _ in 0..rng.gen_range(0..=3) {
        let a: QVector = (0..ell).map(|_| rational_in(rng, -3, 3, 1)).collect();
        if a.is_zero() {
            continue;
        }
        let b = a.dot(&keep) + rational_in(rng, 0, 1, 3);
        q.add_ineq(&a, b);
    }
    let mut sm = QMatrix::zeros(k, ell);
    let mut cols: Vec<usize> = (0..ell).collect();
    cols.shuffle(rng);
    for i in 0..k {
        for j in 0..ell {
            sm[(i, j)] = rational_in(rng, -1, 1, 1);
        }
        sm[(i, cols[i % ell])] = Rational::from_integer(rng.gen_range(1..=2));
    }
    let offset = if rng.gen_bool(0.5) { QVector::zeros(k) } else { point_in_box(rng, k, 0, 1, 2) };
    (q, AffineMap::new(sm, offset).expect("shapes agree"))
}
