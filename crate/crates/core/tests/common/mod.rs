//! Seeded suites shared by the property tests and the acceptance run.
//!
//! Every check recomputes its quantities through a route that does not go
//! through the bookkeeping of the function under test.

#![allow(dead_code)]

use milef_core::exactgeom::{
    contains_point, hull, intersect, irredundant, prune_to_vertices, vertices, AffineMap, HPolyhedron, VPolytope,
};
use milef_core::instances::{self, InstanceRng};
use milef_core::lattice::{flt_bound, integer_images, lattice_width};
use milef_core::metrics::{hausdorff_sq, lp_gap_max, lp_gap_min, rdist, rdist_by_projections, ExtValue};
use milef_core::milef::{fiber, milef_to_lef, mixed_integer_hull, mixed_integer_hull_image, slice_family, Milef};
use milef_core::{QVector, Rational};
use rand::Rng;

#[derive(Debug, Default)]
pub struct Outcome {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn merge(&mut self, other: Outcome) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        match self.failures.first() {
            None => format!("{}/{} checks", self.checked, self.checked),
            Some(f) => format!("{}/{} checks, first failure: {f}", self.checked - self.failures.len(), self.checked),
        }
    }
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn pts(rows: &[&[i64]]) -> Vec<QVector> {
    rows.iter().map(|r| QVector::from_ints(r)).collect()
}

pub fn polytope(points: Vec<QVector>) -> VPolytope {
    let d = points[0].len();
    VPolytope::from_points(d, prune_to_vertices(&points).unwrap()).unwrap()
}

fn fin(x: &ExtValue) -> Option<Rational> {
    x.finite().cloned()
}

/// `(1+λ)A − λA` as a point set (its vertices lie among these points).
fn difference_body(a: &VPolytope, lambda: &Rational) -> VPolytope {
    let one = Rational::from_integer(1);
    let mut out = Vec::new();
    for p in &a.vertices {
        for q in &a.vertices {
            out.push(p.scale(&(&one + lambda)).sub(&q.scale(lambda)));
        }
    }
    VPolytope::from_points(a.ambient_dim, out).unwrap()
}

fn inside(body: &VPolytope, b: &VPolytope) -> bool {
    b.vertices.iter().all(|x| contains_point(body, x).unwrap())
}

/// Set characterization: `B ⊆ (1+r)A − rA` at `r = rdist(A, B)` and not for a smaller `λ`.
pub fn rdist_set_characterization(seed: u64, count: usize) -> Outcome {
    let mut rng = instances::rng(seed);
    let mut out = Outcome::default();
    for i in 0..count {
        let d = 1 + i % 4;
        let (a, b) = instances::nested_pair(&mut rng, d).unwrap();
        let rd = rdist(&a, &b).unwrap();
        let ok = match fin(&rd) {
            Some(x) => {
                let tight = inside(&difference_body(&a, &x), &b);
                let strict = x.is_positive().then(|| !inside(&difference_body(&a, &(&x * r(15, 16))), &b));
                tight && strict.unwrap_or(true)
            }
            None => !inside(&difference_body(&a, &Rational::from_integer(1000)), &b),
        };
        out.record(ok, || format!("set characterization, seed {seed} instance {i}, rdist {rd}"));
    }
    out
}

/// The multiplier LP and the per-vertex projection LP give the same value.
pub fn rdist_two_routes(seed: u64, count: usize) -> Outcome {
    let mut rng = instances::rng(seed);
    let mut out = Outcome::default();
    for i in 0..count {
        let d = 1 + i % 4;
        let (a, b) = instances::nested_pair(&mut rng, d).unwrap();
        let x = rdist(&a, &b).unwrap();
        let y = rdist_by_projections(&a, &b).unwrap();
        out.record(x == y, || format!("rdist routes differ ({x} vs {y}), seed {seed} instance {i}"));
    }
    out
}

fn image(p: &VPolytope, f: &AffineMap) -> VPolytope {
    let m = p.map(f).unwrap();
    polytope_or_empty(m.ambient_dim, m.vertices)
}

fn polytope_or_empty(d: usize, points: Vec<QVector>) -> VPolytope {
    VPolytope::from_points(d, prune_to_vertices(&points).unwrap()).unwrap()
}

/// Affine images never increase `rdist`; invertible maps preserve it.
pub fn rdist_affine_images(seed: u64, count: usize) -> Outcome {
    let mut rng = instances::rng(seed);
    let mut out = Outcome::default();
    for i in 0..count {
        let d = 1 + i % 4;
        let (a, b) = instances::nested_pair(&mut rng, d).unwrap();
        let base = rdist(&a, &b).unwrap();
        let m = rng.gen_range(1..=d);
        let f = instances::random_affine_map(&mut rng, d, m);
        let projected = rdist(&image(&a, &f), &image(&b, &f)).unwrap();
        out.record(projected <= base, || format!("image increased rdist {base} -> {projected}, seed {seed} instance {i}"));
        let g = instances::random_invertible_map(&mut rng, d);
        let moved = rdist(&image(&a, &g), &image(&b, &g)).unwrap();
        out.record(moved == base, || format!("invertible map changed rdist {base} -> {moved}, seed {seed} instance {i}"));
    }
    out
}

fn triangle_ok(ab: &ExtValue, bc: &ExtValue, ac: &ExtValue) -> bool {
    match (fin(ab), fin(bc)) {
        (Some(x), Some(y)) => ac.le(&(&x + &y + Rational::from_integer(2) * &x * &y)),
        _ => true,
    }
}

pub fn rdist_triangle(seed: u64, count: usize) -> Outcome {
    let mut rng = instances::rng(seed);
    let mut out = Outcome::default();
    for i in 0..count {
        let d = 1 + i % 4;
        let (a, b, c) = instances::nested_triple(&mut rng, d).unwrap();
        let (ab, bc, ac) = (rdist(&a, &b).unwrap(), rdist(&b, &c).unwrap(), rdist(&a, &c).unwrap());
        out.record(triangle_ok(&ab, &bc, &ac), || {
            format!("triangle bound fails: rdist(A,C) {ac}, rdist(A,B) {ab}, rdist(B,C) {bc}, seed {seed} instance {i}")
        });
    }
    out
}

pub fn rdist_union(seed: u64, count: usize) -> Outcome {
    let mut rng = instances::rng(seed);
    let mut out = Outcome::default();
    for i in 0..count {
        let d = 1 + i % 3;
        let t = rng.gen_range(1..=3);
        let mut ua = Vec::new();
        let mut ub = Vec::new();
        let mut worst = ExtValue::zero();
        for _ in 0..t {
            let (a, b) = instances::nested_pair(&mut rng, d).unwrap();
            worst = worst.max(rdist(&a, &b).unwrap());
            ua.extend(a.vertices);
            ub.extend(b.vertices);
        }
        let joined = rdist(&polytope_or_empty(d, ua), &polytope_or_empty(d, ub)).unwrap();
        out.record(joined <= worst, || format!("union bound fails: {joined} > {worst}, seed {seed} instance {i}"));
    }
    out
}

/// Down-closed `A`: `rdist(A, B) = gapMax(A, B)` for relaxations in the orthant.
pub fn gap_down_closed(seed: u64, count: usize) -> Outcome {
    let mut rng = instances::rng(seed);
    let mut out = Outcome::default();
    for i in 0..count {
        let d = 1 + i % 4;
        let a = instances::down_closed(&mut rng, d).unwrap();
        let b = if i % 5 == 0 {
            scaled_in_cube(&a, &r(3, 2))
        } else {
            let mut p = a.vertices.clone();
            for _ in 0..rng.gen_range(0..=3) {
                p.push(instances::point_in_box(&mut rng, d, 0, 1, 4).scale(&r(3, 2)));
            }
            polytope_or_empty(d, p)
        };
        let rd = rdist(&a, &b).unwrap();
        let gap = lp_gap_max(&a, &b).unwrap().value;
        out.record(rd == gap, || format!("rdist {rd} != gapMax {gap}, seed {seed} instance {i}"));
    }
    out
}

/// `sA ∩ [0,1]^d` by vertex enumeration.
pub fn scaled_in_cube(a: &VPolytope, s: &Rational) -> VPolytope {
    let d = a.ambient_dim;
    let scaled: Vec<QVector> = a.vertices.iter().map(|v| v.scale(s)).collect();
    let cube = HPolyhedron::from_box(&vec![Rational::from_integer(0); d], &vec![Rational::from_integer(1); d]);
    vertices(&intersect(&hull(&scaled).unwrap(), &cube).unwrap()).unwrap()
}

/// Up-closed 0/1 `A` and a relaxation `B` of the same dimension `d'`:
/// both bounds between `rdist` and `gapMin` for `d' ≥ 2`, and `A = B` for `d' = 1`.
pub fn gap_up_closed(seed: u64, count: usize) -> Outcome {
    let mut rng = instances::rng(seed);
    let mut out = Outcome::default();
    let one = Rational::from_integer(1);
    let mut i = 0;
    while out.checked < 2 * count && i < 50 * count {
        i += 1;
        let d = 2 + i % 3;
        let a = instances::up_closed(&mut rng, d).unwrap();
        let dim = d - instances::fixed_ones(&a).len();
        let extra = rng.gen_range(1..=3);
        let b = instances::up_closed_relaxation(&mut rng, &a, extra).unwrap();
        if dim == 1 {
            out.record(a == b && rdist(&a, &b).unwrap() == ExtValue::zero(), || {
                format!("one-dimensional up-closed pair differs, seed {seed} instance {i}")
            });
            continue;
        }
        if dim == 0 {
            continue;
        }
        let rd = rdist(&a, &b).unwrap();
        let gap = lp_gap_min(&a, &b).unwrap().value;
        let dm1 = Rational::from(dim - 1);
        let rdv = fin(&rd).expect("full-dimensional A has finite rdist");
        // lower bound on rdist
        let lower = match fin(&gap) {
            Some(g) => &g / (&one + &g) / &dm1,
            None => &one / &dm1,
        };
        out.record(rdv >= lower, || format!("rdist {rd} below gapMin bound {lower} (gapMin {gap}, d' {dim}), seed {seed} instance {i}"));
        // lower bound on gapMin
        let ok = if rdv > dm1 {
            true
        } else if rdv == dm1 {
            !gap.is_finite()
        } else {
            let need = &rdv / (&dm1 - &rdv);
            match fin(&gap) {
                Some(g) => g >= need,
                None => true,
            }
        };
        out.record(ok, || format!("gapMin {gap} below rdist bound (rdist {rd}, d' {dim}), seed {seed} instance {i}"));
    }
    out
}

/// `d_H(A, B)² ≤ d·(r/(1+r))²` for `A ⊆ B ⊆ [0,1]^d` with `r = rdist(A, B) ≤ 1`.
pub fn hausdorff(seed: u64, count: usize) -> Outcome {
    let mut rng = instances::rng(seed);
    let mut out = Outcome::default();
    let one = Rational::from_integer(1);
    let mut i = 0;
    while out.checked < 2 * count && i < 20 * count {
        i += 1;
        let d = 1 + i % 4;
        let n = rng.gen_range(1..=d + 2);
        let a = instances::random_polytope(&mut rng, d, n, 0, 1, 4).unwrap();
        let extra = rng.gen_range(0..=2);
        let b = instances::enlarge(&mut rng, &a, extra, 0, 1, 4).unwrap();
        let Some(rd) = fin(&rdist(&a, &b).unwrap()) else { continue };
        if rd > one {
            continue;
        }
        let h = hausdorff_sq(&a, &b).unwrap();
        let t = &rd / (&one + &rd);
        let bound = Rational::from(d) * &t * &t;
        out.record(h <= bound, || format!("Hausdorff² {h} above {bound}, seed {seed} instance {i}"));
        // nearest vertex of A gives an upper bound for each vertex of B
        let crude = b
            .vertices
            .iter()
            .map(|x| a.vertices.iter().map(|y| x.sub(y).norm_sq()).min().unwrap())
            .max()
            .unwrap();
        out.record(h <= crude, || format!("Hausdorff² {h} above the vertex-distance bound {crude}, seed {seed} instance {i}"));
    }
    out
}

/// The pinned worked pair: `A = conv{(1,0),(0,1),(1,1)}`, `B = conv(A ∪ {(1/4,1/4)})`.
pub fn worked_pair() -> Outcome {
    let a = polytope(pts(&[&[1, 0], &[0, 1], &[1, 1]]));
    let mut bp = a.vertices.clone();
    bp.push(QVector(vec![r(1, 4), r(1, 4)]));
    let b = polytope(bp);
    let mut out = Outcome::default();
    let gap = lp_gap_min(&a, &b).unwrap().value;
    out.record(gap == ExtValue::Finite(r(1, 1)), || format!("worked pair gapMin {gap}, expected 1"));
    let rd = rdist(&a, &b).unwrap();
    out.record(rd == ExtValue::Finite(r(1, 2)), || format!("worked pair rdist {rd}, expected 1/2"));
    let rp = rdist_by_projections(&a, &b).unwrap();
    out.record(rp == ExtValue::Finite(r(1, 2)), || format!("worked pair projection rdist {rp}, expected 1/2"));
    let h = hausdorff_sq(&a, &b).unwrap();
    out.record(h == r(1, 8), || format!("worked pair Hausdorff² {h}, expected 1/8"));
    out
}

/// Outcome of slicing one random instance for one `δ`.
pub struct SlicingRun {
    pub slicing: Outcome,
    pub width: Outcome,
}

fn members_containing(family: &[HPolyhedron], x: &[Rational]) -> bool {
    family.iter().any(|h| h.contains(x))
}

/// Slice `(q, σ)` and recheck the family, the sandwich, the distance and the
/// width inequality for every recorded step.
pub fn check_slicing(q: &HPolyhedron, sigma: &AffineMap, delta: &Rational, tag: &str) -> SlicingRun {
    let mut slicing = Outcome::default();
    let mut width = Outcome::default();
    let ell = q.ambient_dim();
    let cert = match slice_family(q, sigma, delta) {
        Ok(c) => c,
        Err(e) => {
            slicing.record(false, || format!("{tag}: slice_family failed: {e}"));
            return SlicingRun { slicing, width };
        }
    };
    let subspaces = &cert.family.subspaces;
    let lifted = Milef::new(q.clone(), sigma.clone(), AffineMap::identity(ell)).unwrap();
    let d_sigma = mixed_integer_hull_image(&lifted).unwrap();

    // fiber cover: every integer fiber lies in one member
    let cover = integer_images(q, sigma).unwrap().iter().all(|(z, _)| {
        let f = vertices(&fiber(&lifted, z).unwrap()).unwrap();
        subspaces.iter().any(|h| f.vertices.iter().all(|x| h.contains(x)))
    });
    slicing.record(cover, || format!("{tag}: fiber cover fails"));

    // D_σ ⊆ D_𝓗 by membership of each hull vertex in a slice
    let sandwich = d_sigma.vertices.iter().all(|x| q.contains(x) && members_containing(subspaces, x));
    slicing.record(sandwich, || format!("{tag}: a vertex of the mixed-integer hull is outside every slice"));

    let mut slice_pts = Vec::new();
    for h in subspaces {
        slice_pts.extend(vertices(&intersect(q, h).unwrap()).unwrap().vertices);
    }
    let d_h = polytope_or_empty(ell, slice_pts);
    let rd = rdist(&d_sigma, &d_h).unwrap();
    slicing.record(rd.le(delta), || format!("{tag}: rdist(D_σ, D_H) = {rd} > δ = {delta}"));
    slicing.record(rd == cert.rdist_achieved, || format!("{tag}: certificate reports {} but recomputed {rd}", cert.rdist_achieved));

    for step in &cert.steps {
        let k = step.sigma.target_dim();
        let Some(dp) = fin(&step.measured_rdist) else { continue };
        if !dp.is_positive() || k > 2 {
            continue;
        }
        let m = Milef::new(step.domain.clone(), step.sigma.clone(), step.sigma.clone()).unwrap();
        let img = mixed_integer_hull_image(&m).unwrap();
        let w = lattice_width(&hull(&img.vertices).unwrap(), 5).unwrap();
        let bound = (Rational::from_integer(1) + &dp) / &dp * flt_bound(k);
        width.record(w.width <= bound, || {
            format!("{tag} depth {}: width {} above {bound} (δ' {dp}, k {k})", step.depth, w.width)
        });
    }
    SlicingRun { slicing, width }
}

/// A random instance with `ℓ ≤ 4`, `k ≤ 2`.
pub fn slicing_instance(rng: &mut InstanceRng, i: usize) -> (HPolyhedron, AffineMap) {
    let ell = 1 + i % 4;
    let k = (1 + (i / 4) % 2).min(ell);
    instances::random_milef_domain(rng, ell, k)
}

pub fn deltas() -> [Rational; 3] {
    [r(1, 1), r(1, 2), r(1, 8)]
}

/// Run the LEF construction and recheck its report through independent routes.
pub fn check_lef(m: &Milef, delta: &Rational, tag: &str) -> Outcome {
    let mut out = Outcome::default();
    let res = match milef_to_lef(m, delta, &Rational::from_integer(0)) {
        Ok(r) => r,
        Err(milef_core::Error::Empty(_)) => {
            out.record(mixed_integer_hull_image(m).unwrap().is_empty(), || format!("{tag}: reported empty hull"));
            return out;
        }
        Err(e) => {
            out.record(false, || format!("{tag}: milef_to_lef failed: {e}"));
            return out;
        }
    };
    let target = mixed_integer_hull_image(m).unwrap();
    out.record(target == res.report.target_vertices, || format!("{tag}: projected and lifted hulls differ"));

    // proj(lef) equals the hull of the projected slices
    let mut slice_img = Vec::new();
    let mut budget = 0;
    for h in &res.certificate.family.subspaces {
        let s = intersect(&m.q, h).unwrap();
        let v = vertices(&s).unwrap();
        if v.is_empty() {
            continue;
        }
        budget += irredundant(&s).n_ineq() + 1;
        slice_img.extend(v.map(&m.pi).unwrap().vertices);
    }
    let image = polytope_or_empty(m.d(), slice_img);
    out.record(image == res.report.image_vertices, || format!("{tag}: projection of the LEF differs from the slice union"));
    let contained = target.vertices.iter().all(|x| contains_point(&image, x).unwrap());
    out.record(contained, || format!("{tag}: target not inside proj(lef)"));
    let rd = rdist(&target, &image).unwrap();
    out.record(rd.le(delta), || format!("{tag}: rdist(C, proj(lef)) = {rd} > δ = {delta}"));
    let irr = irredundant(&res.lef).n_ineq();
    out.record(irr <= budget, || format!("{tag}: {irr} irredundant inequalities above Σ(facets+1) = {budget}"));
    out
}

/// Lifted route for `π(Q_σ)`: hull in the lifted space, then the image.
pub fn lifted_hull_image(m: &Milef) -> VPolytope {
    let v = mixed_integer_hull(m).unwrap().map(&m.pi).unwrap();
    polytope_or_empty(v.ambient_dim, v.vertices)
}
