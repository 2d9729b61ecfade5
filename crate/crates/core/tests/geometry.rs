mod common;

use common::{pts, r};
use milef_core::exactgeom::{
    hull, lp_solve, min_sq_distance, project, prune_to_vertices, vertices, AffineMap, HPolyhedron, LpStatus, Lp, Sense,
};
use milef_core::instances;
use milef_core::{QVector, Rational};
use num_integer::Integer;
use proptest::prelude::*;
use rand::Rng;

fn random_bounded(seed: u64, d: usize) -> HPolyhedron {
    let mut rng = instances::rng(seed);
    let n = rng.gen_range(d + 1..=d + 4);
    let p = instances::random_polytope(&mut rng, d, n, -2, 2, 3).unwrap();
    let mut h = hull(&p.vertices).unwrap();
    // an extra cut through a random point of the polytope
    let a: QVector = (0..d).map(|_| instances::rational_in(&mut rng, -2, 2, 1)).collect();
    if !a.is_zero() {
        let b = p.vertices.iter().map(|v| a.dot(v)).max().unwrap() - Rational::new(1, 2);
        h.add_ineq(&a, b);
    }
    h
}

#[test]
fn hull_vertices_round_trip() {
    for seed in 0..60u64 {
        let d = 1 + (seed as usize) % 5;
        let h = random_bounded(seed, d);
        let v = vertices(&h).unwrap();
        if v.is_empty() {
            continue;
        }
        let again = vertices(&hull(&v.vertices).unwrap()).unwrap();
        assert_eq!(again, v, "seed {seed}");
    }
}

#[test]
fn projection_commutes_with_hull() {
    let mut rng = instances::rng(99);
    for i in 0..40 {
        let d = 1 + i % 4;
        let p = instances::random_polytope(&mut rng, d, d + 3, -2, 2, 2).unwrap();
        let m = rng.gen_range(1..=d);
        let f = instances::random_affine_map(&mut rng, d, m);
        let img = vertices(&project(&hull(&p.vertices).unwrap(), &f).unwrap()).unwrap();
        let mapped: Vec<QVector> = p.vertices.iter().map(|v| f.apply(v)).collect();
        let direct = vertices(&hull(&mapped).unwrap()).unwrap();
        assert_eq!(img, direct, "instance {i}");
        assert_eq!(img.vertices, prune_to_vertices(&mapped).unwrap(), "instance {i}");
    }
}

#[test]
fn projection_examples() {
    let sq = HPolyhedron::from_box(&[r(0, 1), r(0, 1)], &[r(1, 1), r(1, 1)]);
    let seg = project(&sq, &AffineMap::coordinates(2, &[0])).unwrap();
    assert_eq!(vertices(&seg).unwrap().vertices, pts(&[&[0], &[1]]));
    let line = HPolyhedron::from_box(&[r(0, 1)], &[r(1, 1)]);
    let lifted = HPolyhedron::universe(2)
        .with_eq(&[r(2, 1), r(-1, 1)], r(0, 1))
        .with_ineq(&[r(-1, 1), r(0, 1)], r(0, 1))
        .with_ineq(&[r(1, 1), r(0, 1)], r(1, 1));
    let y = project(&lifted, &AffineMap::coordinates(2, &[1])).unwrap();
    assert_eq!(vertices(&y).unwrap().vertices, pts(&[&[0], &[2]]));
    assert_eq!(vertices(&line).unwrap().vertices, pts(&[&[0], &[1]]));
}

#[test]
fn distance_examples() {
    let sq = HPolyhedron::from_box(&[r(0, 1), r(0, 1)], &[r(1, 1), r(1, 1)]);
    assert_eq!(min_sq_distance(&[r(0, 1), r(0, 1)], &sq).unwrap(), r(0, 1));
    assert_eq!(min_sq_distance(&[r(2, 1), r(0, 1)], &sq).unwrap(), r(1, 1));
    let seg = hull(&pts(&[&[0, 0], &[1, 0]])).unwrap();
    assert_eq!(min_sq_distance(&[r(1, 1), r(1, 1)], &seg).unwrap(), r(1, 1));
}

fn lowest_terms(x: &Rational) -> bool {
    let (n, d) = (x.numer(), x.denom());
    d > 0.into() && n.gcd(&d) == 1.into()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_optimum_matches_vertices_and_dual(seed in 0u64..10_000, d in 1usize..4, cs in prop::collection::vec(-3i64..=3, 4)) {
        let h = random_bounded(seed, d);
        let c: Vec<Rational> = cs[..d].iter().map(|&x| Rational::from_integer(x)).collect();
        let res = lp_solve(&c, Sense::Max, &h).unwrap();
        let v = vertices(&h).unwrap();
        if v.is_empty() {
            prop_assert_eq!(res.status, LpStatus::Infeasible);
        } else {
            prop_assert_eq!(res.status, LpStatus::Optimal);
            let best = v.vertices.iter().map(|x| milef_core::linalg::dot(&c, x)).max().unwrap();
            let value = res.value.clone().unwrap();
            prop_assert_eq!(&value, &best);
            prop_assert!(lowest_terms(&value));
            let mut lp = Lp::new(&h);
            let again = lp.optimize(&c, Sense::Max);
            prop_assert_eq!(again.value.as_ref(), Some(&value));
            let cert = lp.dual_certificate().expect("optimal LP has a dual certificate");
            prop_assert!(cert.verify(&h, &c, Sense::Max, &value));
        }
    }

    #[test]
    fn rational_ops_stay_reduced(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let x = Rational::new(a, b);
        let y = Rational::new(c, d);
        for z in [&x + &y, &x - &y, &x * &y, x.floor(), y.ceil(), x.abs()] {
            prop_assert!(lowest_terms(&z));
        }
        if y != Rational::from_integer(0) {
            prop_assert!(lowest_terms(&(&x / &y)));
        }
    }
}
