//! One line per acceptance criterion, `PASS` or `FAIL`, with the tolerance used.
//!
//! All comparisons are exact (tolerance 0). Criterion 6 is a recorded
//! deviation: the literal conic odd-cut matrix is rank deficient, so its line
//! reads FAIL; the test asserts that exact outcome instead of aborting the run.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use milef_core::instances;
use milef_core::metrics::{rdist, ExtValue};
use milef_core::milef::{lef_size_bound, restrict_to_face, mixed_integer_hull_image, Milef};
use milef_core::zoo::{
    bimodularity_check, edge_face, generate, matching_milef, matching_milef_graph, mutate_entry,
    odd_cut_conic_matrix, oracle_vertices, verify_bundle, vjoin_cardinality_face, vjoin_milef, Family, Graph,
};
use milef_core::exactgeom::{AffineMap, VPolytope};
use milef_core::{Error, Rational};

const KNOWN_FAILING: &[usize] = &[6];

struct Line {
    id: usize,
    pass: bool,
    text: String,
}

fn report(lines: &mut Vec<Line>, id: usize, pass: bool, text: String) {
    // Written past the test harness capture so the lines land in the log.
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {id}: {} | {text}", if pass { "PASS" } else { "FAIL" });
    let _ = out.flush();
    lines.push(Line { id, pass, text });
}

fn zoo_equivalence() -> (bool, String) {
    let cases: &[(Family, usize, usize)] = &[
        (Family::Matching, 3, 4),
        (Family::Matching, 4, 10),
        (Family::Matching, 5, 26),
        (Family::Matching, 6, 76),
        (Family::Vjoin, 4, 8),
        (Family::Cut, 3, 4),
        (Family::Cut, 4, 8),
        (Family::OddCut, 4, 4),
        (Family::Tsp, 4, 3),
        (Family::Tsp, 5, 12),
    ];
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for &(f, n, want) in cases {
        let b = generate(f, n).unwrap().with_oracle().unwrap();
        let r = verify_bundle(&b).unwrap();
        let good = r.pass && r.expected_count == want && r.computed_count == want;
        ok &= good;
        parts.push(format!("{f}({n})={}/{}", r.computed_count, want));
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(600);
    (ok, format!("vertex sets equal, tol 0; {}; {:.1}s (limit 600s)", parts.join(" "), t.as_secs_f64()))
}

fn k4_matching() -> Milef {
    matching_milef(4).unwrap().milef
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();

    let (ok, text) = zoo_equivalence();
    report(&mut lines, 1, ok, text);

    // criteria 2 and 4 share the slicing runs
    let mut rng = instances::rng(20_240_601);
    let mut slicing = Outcome::default();
    let mut width = Outcome::default();
    let mut lef = Outcome::default();
    let mut runs = 0;
    let n_inst = 60;
    let mut inst = Vec::new();
    for i in 0..n_inst {
        let (q, sigma) = slicing_instance(&mut rng, i);
        for delta in deltas() {
            let run = check_slicing(&q, &sigma, &delta, &format!("instance {i} δ={delta}"));
            slicing.merge(run.slicing);
            width.merge(run.width);
            runs += 1;
        }
        inst.push((q, sigma));
    }
    report(
        &mut lines,
        2,
        slicing.passed(),
        format!("{n_inst} instances x 3 deltas = {runs} runs, exact (tol 0); {}", slicing.summary()),
    );

    for (i, (q, sigma)) in inst.iter().enumerate() {
        let ell = q.ambient_dim();
        let pi = if i % 2 == 0 { AffineMap::identity(ell) } else { AffineMap::coordinates(ell, &(0..ell.min(2)).collect::<Vec<_>>()) };
        let m = Milef::new(q.clone(), sigma.clone(), pi).unwrap();
        for delta in deltas() {
            lef.merge(check_lef(&m, &delta, &format!("instance {i} δ={delta}")));
        }
    }
    for delta in deltas() {
        lef.merge(check_lef(&k4_matching(), &delta, &format!("K4 matching δ={delta}")));
    }
    report(
        &mut lines,
        3,
        lef.passed(),
        format!("{n_inst} instances + K4 matching, eps = 0, exact (tol 0); {}", lef.summary()),
    );

    let width_ok = width.passed() && width.checked > 0;
    report(
        &mut lines,
        4,
        width_ok,
        format!("width(σ(D_σ)) <= ((1+δ')/δ')·Flt(k), exact, over recorded slicing steps; {}", width.summary()),
    );

    let mut metric = Outcome::default();
    let n = 200;
    let suites: Vec<(&str, Outcome)> = vec![
        ("set characterization", rdist_set_characterization(11, n)),
        ("two rdist routes", rdist_two_routes(12, n)),
        ("affine images", rdist_affine_images(13, n)),
        ("triangle", rdist_triangle(14, n)),
        ("union", rdist_union(15, n)),
        ("down-closed equality", gap_down_closed(16, n)),
        ("up-closed bounds", gap_up_closed(17, n)),
        ("Hausdorff squared", hausdorff(18, n)),
        ("worked pair", worked_pair()),
        ("empty conventions", empty_conventions()),
    ];
    let mut counts = Vec::new();
    for (name, o) in suites {
        counts.push(format!("{name} {}", o.checked));
        metric.merge(o);
    }
    report(
        &mut lines,
        5,
        metric.passed(),
        format!("exact (tol 0), seeds 11-18, {n} instances per suite; checks: {}; {}", counts.join(", "), metric.summary()),
    );

    let start = Instant::now();
    let literal = bimodularity_check(&odd_cut_conic_matrix(4, false));
    let pointed = bimodularity_check(&odd_cut_conic_matrix(4, true)).unwrap();
    let (mutated, at) = mutate_entry(&odd_cut_conic_matrix(4, true), 2, 3).unwrap();
    let mutated = bimodularity_check(&mutated).unwrap();
    let t = start.elapsed();
    let literal_text = match &literal {
        Ok(r) => format!("literal matrix max |subdet| {} over {} subsets", r.max_abs_subdet, r.subsets),
        Err(e) => format!("literal matrix rejected: {e}"),
    };
    let literal_ok = matches!(&literal, Ok(r) if r.is_bimodular);
    let supplementary = pointed.is_bimodular && !mutated.is_bimodular && !mutated.witness.is_empty();
    report(
        &mut lines,
        6,
        literal_ok && supplementary && t < Duration::from_secs(300),
        format!(
            "bound |subdet| <= 2; {literal_text}; supplementary pointed variant: max {} over {} subsets ({}), \
             entry {:?} 2->3: max {} witness rows {:?} ({}); {:.1}s (limit 300s)",
            pointed.max_abs_subdet,
            pointed.subsets,
            if pointed.is_bimodular { "bimodular" } else { "not bimodular" },
            at,
            mutated.max_abs_subdet,
            mutated.witness,
            if mutated.is_bimodular { "bimodular" } else { "rejected" },
            t.as_secs_f64()
        ),
    );
    assert!(matches!(literal, Err(Error::Precondition(_))), "literal conic matrix outcome changed");
    assert!(supplementary, "pointed conic matrix outcome changed");

    let (ok, text) = face_restrictions();
    report(&mut lines, 7, ok, text);

    let (ok, text) = size_formula();
    report(&mut lines, 8, ok, text);

    let unexpected: Vec<usize> = lines.iter().filter(|l| !l.pass && !KNOWN_FAILING.contains(&l.id)).map(|l| l.id).collect();
    for l in lines.iter().filter(|l| !l.pass) {
        eprintln!("criterion {} detail: {}", l.id, l.text);
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}

fn empty_conventions() -> Outcome {
    let mut out = Outcome::default();
    let e = VPolytope::empty(2);
    let b = polytope(pts(&[&[0, 0], &[1, 0]]));
    out.record(rdist(&e, &e).unwrap() == ExtValue::zero(), || "rdist(∅,∅) != 0".into());
    out.record(rdist(&e, &b).unwrap() == ExtValue::Infinite, || "rdist(∅,B) != inf".into());
    out
}

fn face_restrictions() -> (bool, String) {
    let vj = vjoin_milef(4).unwrap();
    let (phi, tau2) = vjoin_cardinality_face(4);
    let pm = restrict_to_face(&vj.milef, &phi, &tau2).unwrap();
    let got = mixed_integer_hull_image(&pm).unwrap();
    let lifted = lifted_hull_image(&pm);
    let want = oracle_vertices(Family::PerfectMatching, 4).unwrap();
    let first = got == want && lifted == want && want.vertices.len() == 3;

    let g = Graph::complete(4);
    let mut all = true;
    let mut sizes = Vec::new();
    for e in 0..g.m() {
        let (phi, tau2) = edge_face(4, e);
        let sub = restrict_to_face(&matching_milef(4).unwrap().milef, &phi, &tau2).unwrap();
        let got = mixed_integer_hull_image(&sub).unwrap();
        let h = g.without_edge(e);
        let oracle = milef_core::zoo::matchings(&h).unwrap();
        let want = VPolytope::from_points(h.m(), oracle).unwrap();
        let direct = mixed_integer_hull_image(&matching_milef_graph(&h).unwrap()).unwrap();
        all &= got == want && direct == want;
        sizes.push(format!("{}/{}", got.vertices.len(), want.vertices.len()));
    }
    (
        first && all,
        format!(
            "vertex sets equal, tol 0; V-join(4) with 1ᵀx = 2: {} vertices (oracle 3); matching(4) with x_e = 0, computed/oracle per edge: {}",
            got.vertices.len(),
            sizes.join(" ")
        ),
    )
}

fn size_formula() -> (bool, String) {
    // closed form recomputed from scratch: (m+1)·∏_{i≤k} (1 + ((1+δ)/δ)·flt(i))
    fn flt(i: usize) -> Rational {
        match i {
            1 => Rational::from_integer(1),
            2 => Rational::new(11, 5),
            _ => {
                let k5 = (i as u64).pow(5);
                let mut s = (k5 as f64).sqrt() as u64;
                while s * s < k5 {
                    s += 1;
                }
                while s > 0 && (s - 1) * (s - 1) >= k5 {
                    s -= 1;
                }
                Rational::from_integer(s as i64)
            }
        }
    }
    let triples: [(usize, usize, (i64, i64)); 20] = [
        (1, 0, (1, 1)),
        (3, 1, (1, 1)),
        (3, 1, (1, 2)),
        (4, 1, (1, 8)),
        (5, 2, (1, 1)),
        (5, 2, (1, 2)),
        (6, 2, (1, 8)),
        (7, 2, (1, 10)),
        (8, 3, (1, 1)),
        (9, 3, (1, 2)),
        (10, 3, (1, 8)),
        (12, 4, (1, 1)),
        (15, 4, (1, 3)),
        (20, 1, (2, 3)),
        (20, 2, (3, 7)),
        (24, 5, (1, 2)),
        (30, 6, (1, 4)),
        (40, 2, (5, 1)),
        (50, 3, (1, 100)),
        (64, 8, (1, 16)),
    ];
    let mut bad = Vec::new();
    for (m, k, (p, q)) in triples {
        let d = Rational::new(p, q);
        let f = (Rational::from_integer(1) + &d) / &d;
        let mut want = Rational::from(m + 1);
        for i in 1..=k {
            want = want * (Rational::from_integer(1) + &f * flt(i));
        }
        if lef_size_bound(m, k, &d) != want {
            bad.push((m, k, d));
        }
    }
    (bad.is_empty(), format!("20 pinned (m,k,δ) triples, exact (tol 0); mismatches {bad:?}"))
}
