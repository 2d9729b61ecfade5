mod common;

use common::*;
use milef_core::exactgeom::VPolytope;
use milef_core::instances;
use milef_core::linalg::dot;
use milef_core::metrics::{hausdorff_sq, lp_gap_max, lp_gap_min, rdist, rdist_by_projections, ExtValue};
use milef_core::{Error, QVector, Rational};

fn fin(x: i64, y: i64) -> ExtValue {
    ExtValue::Finite(r(x, y))
}

#[test]
fn rdist_examples() {
    let a = polytope(pts(&[&[0], &[1]]));
    let b = polytope(pts(&[&[0], &[2]]));
    assert_eq!(rdist(&a, &a).unwrap(), ExtValue::zero());
    assert_eq!(rdist(&a, &b).unwrap(), fin(1, 1));
    assert_eq!(rdist_by_projections(&a, &b).unwrap(), fin(1, 1));
    let point = polytope(pts(&[&[0]]));
    assert_eq!(rdist(&point, &a).unwrap(), ExtValue::Infinite);
    assert_eq!(rdist_by_projections(&point, &a).unwrap(), ExtValue::Infinite);
    assert!(matches!(rdist(&b, &a), Err(Error::Precondition(_))));
    let e = VPolytope::empty(1);
    assert_eq!(rdist(&e, &e).unwrap(), ExtValue::zero());
    assert_eq!(rdist(&e, &a).unwrap(), ExtValue::Infinite);
}

#[test]
fn gap_examples() {
    let a = polytope(pts(&[&[0, 0], &[1, 0], &[0, 1]]));
    let b = polytope(pts(&[&[0, 0], &[2, 0], &[0, 1]]));
    assert_eq!(lp_gap_max(&a, &a).unwrap().value, ExtValue::zero());
    assert_eq!(lp_gap_max(&a, &b).unwrap().value, fin(1, 1));
    assert_eq!(lp_gap_min(&b, &b).unwrap().value, ExtValue::zero());
    let shifted = polytope(pts(&[&[-1, 0], &[1, 1]]));
    assert!(lp_gap_max(&shifted, &shifted).is_err());
}

#[test]
fn hausdorff_examples() {
    let a = polytope(pts(&[&[0]]));
    let b = polytope(pts(&[&[0], &[1]]));
    assert_eq!(hausdorff_sq(&b, &b).unwrap(), r(0, 1));
    assert_eq!(hausdorff_sq(&a, &b).unwrap(), r(1, 1));
    assert!(hausdorff_sq(&VPolytope::empty(1), &b).is_err());
}

/// Ratios over a grid of nonnegative directions never exceed the reported gap,
/// and the witness reproduces it.
#[test]
fn gap_max_dominates_direction_grid() {
    let mut rng = instances::rng(404);
    for i in 0..60 {
        let d = 1 + i % 3;
        let a = instances::down_closed(&mut rng, d).unwrap();
        let extra = instances::point_in_box(&mut rng, d, 0, 1, 3).scale(&r(3, 2));
        let mut bp = a.vertices.clone();
        bp.push(extra);
        let b = polytope(bp);
        let g = lp_gap_max(&a, &b).unwrap();
        let one = Rational::from_integer(1);
        let mut c = vec![0i64; d];
        loop {
            let cv: QVector = c.iter().map(|&x| Rational::from_integer(x)).collect();
            let ma = a.vertices.iter().map(|v| dot(&cv, v)).max().unwrap();
            let mb = b.vertices.iter().map(|v| dot(&cv, v)).max().unwrap();
            if ma.is_positive() {
                assert!(g.value >= ExtValue::Finite(&mb / &ma - &one), "instance {i} c {cv}");
            } else if mb.is_positive() {
                assert_eq!(g.value, ExtValue::Infinite, "instance {i} c {cv}");
            }
            let mut j = 0;
            while j < d && c[j] == 3 {
                c[j] = 0;
                j += 1;
            }
            if j == d {
                break;
            }
            c[j] += 1;
        }
        if let ExtValue::Finite(v) = &g.value {
            let (pa, pb) = &g.witness_points;
            let w = &g.witness_direction;
            let (ca, cb) = (dot(w, pa), dot(w, pb));
            if ca.is_positive() {
                assert_eq!(&cb / &ca - &one, v.clone(), "instance {i}");
            }
        }
    }
}

#[test]
fn small_suites() {
    for o in [
        rdist_set_characterization(101, 30),
        rdist_two_routes(102, 30),
        rdist_affine_images(103, 30),
        rdist_triangle(104, 30),
        rdist_union(105, 30),
        gap_down_closed(106, 30),
        gap_up_closed(107, 30),
        hausdorff(108, 30),
        worked_pair(),
    ] {
        assert!(o.passed(), "{}", o.summary());
    }
}
