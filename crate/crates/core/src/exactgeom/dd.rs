//! Double description method for `{y : H y ≥ 0}`.
//!
//! The lineality space is split off first, so the incremental phase always
//! works on a pointed cone. Adjacency of two rays is decided by the
//! combinatorial test on their zero sets, guarded by the rank lower bound.

use num_traits::Zero;

use crate::linalg::{dot, primitive_direction, QMatrix, QVector};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    z: QVector,
    zeros: Bits,
}

/// Extreme rays and a lineality basis of `{y ∈ R^n : h·y ≥ 0 for h in rows}`.
///
/// Rays are primitive integer vectors in lexicographic order.
pub(crate) fn cone_generators(rows: &[QVector], n: usize) -> (Vec<QVector>, Vec<QVector>) {
    let h = QMatrix::from_rows(rows, n);
    let lineality: Vec<QVector> = h.nullspace().into_iter().map(|v| v.primitive_direction()).collect();
    let (r, pivots) = h.rref();
    let rank = pivots.len();
    if rank == 0 {
        return (Vec::new(), lineality);
    }
    // y = Rᵀ z parametrizes the row space, on which the cone is pointed.
    let basis: Vec<QVector> = (0..rank).map(|i| r.row_vec(i)).collect();
    let g: Vec<QVector> = rows.iter().map(|hr| basis.iter().map(|b| dot(hr, b)).collect()).collect();
    let zs = pointed_rays(&g, rank);
    let mut out: Vec<QVector> = zs
        .into_iter()
        .map(|z| {
            let mut y = QVector::zeros(n);
            for (zi, b) in z.iter().zip(&basis) {
                if zi.is_zero() {
                    continue;
                }
                for (yj, bj) in y.iter_mut().zip(b.iter()) {
                    if !bj.is_zero() {
                        *yj += zi * bj;
                    }
                }
            }
            y.primitive_direction()
        })
        .collect();
    out.sort();
    out.dedup();
    (out, lineality)
}

/// Extreme rays of a pointed cone `{z ∈ R^r : g·z ≥ 0}` whose rows have rank `r`.
fn pointed_rays(g: &[QVector], r: usize) -> Vec<QVector> {
    let m = g.len();
    // Greedy choice of r independent rows for the initial simplicial cone.
    let mut chosen = Vec::with_capacity(r);
    let mut echelon: Vec<(usize, QVector)> = Vec::new();
    for (i, row) in g.iter().enumerate() {
        if chosen.len() == r {
            break;
        }
        let mut v = row.clone();
        for (p, e) in &echelon {
            if !v[*p].is_zero() {
                let f = &v[*p] / &e[*p];
                v = v.sub(&e.scale(&f));
            }
        }
        if let Some(p) = (0..r).find(|&j| !v[j].is_zero()) {
            echelon.push((p, v));
            chosen.push(i);
        }
    }
    assert_eq!(chosen.len(), r, "cone rows do not have full rank");
    let b = QMatrix::from_rows(&chosen.iter().map(|&i| g[i].clone()).collect::<Vec<_>>(), r);
    let binv = b.inverse().expect("independent rows");
    let mut rays: Vec<Ray> = (0..r)
        .map(|j| {
            let z = primitive_direction(&binv.column(j));
            let mut zeros = Bits::new(m);
            for &i in &chosen {
                if dot(&g[i], &z).is_zero() {
                    zeros.set(i);
                }
            }
            Ray { z, zeros }
        })
        .collect();
    let mut is_chosen = vec![false; m];
    for &i in &chosen {
        is_chosen[i] = true;
    }
    for (i, row) in g.iter().enumerate() {
        if is_chosen[i] {
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|ray| dot(row, &ray.z)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, ray) in rays.iter_mut().enumerate() {
                if vals[k].is_zero() {
                    ray.zeros.set(i);
                }
            }
            continue;
        }
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if (common.count() as usize) + 2 < r {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(t, ray)| t != p && t != q && ray.zeros.contains(&common));
                if blocked {
                    continue;
                }
                let z = rays[q].z.scale(&vals[p]).sub(&rays[p].z.scale(&vals[q]));
                let z = z.primitive_direction();
                let mut zeros = common;
                zeros.set(i);
                fresh.push(Ray { z, zeros });
            }
        }
        let mut next = Vec::with_capacity(rays.len() - neg.len() + fresh.len());
        for (k, mut ray) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                ray.zeros.set(i);
            }
            next.push(ray);
        }
        next.extend(fresh);
        rays = next;
    }
    rays.into_iter().map(|r| r.z).collect()
}
