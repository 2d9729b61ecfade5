//! Exhaustive maximal-minor sweep for bimodularity.
//!
//! Row subsets are visited depth first in lexicographic order while an
//! echelon basis of the chosen rows is maintained modulo the Mersenne prime
//! `2^61 − 1`; a prefix that is already dependent is pruned, since every
//! completion of it has determinant zero. The product of the pivots is the
//! determinant up to sign, and it is lifted to an integer exactly whenever
//! the Hadamard bound of the matrix stays below `p/2`. Larger matrices fall
//! back to exact rational determinants.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::caps::caps;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::Rational;

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn inv(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, P - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

fn residue(x: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let r = ((x % &p) + &p) % &p;
    u64::try_from(r).expect("reduced modulo p")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimodularityReport {
    pub rows: usize,
    pub cols: usize,
    /// Number of square row selections covered by the sweep.
    pub subsets: u128,
    pub max_abs_subdet: Rational,
    pub is_bimodular: bool,
    /// Lexicographically first row selection attaining the maximum.
    pub witness: Vec<usize>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Largest absolute `cols × cols` minor of a full-column-rank integer matrix.
pub fn bimodularity_check(m: &QMatrix) -> Result<BimodularityReport> {
    if !m.is_integral() {
        return Err(Error::Precondition("bimodularity needs an integer matrix".into()));
    }
    let (rows, cols) = (m.nrows(), m.ncols());
    let rank = m.rank();
    if rank < cols {
        let null = m.nullspace().into_iter().next().map(|v| v.primitive_direction());
        return Err(Error::Precondition(format!(
            "matrix has column rank {rank} < {cols} columns; null vector {}",
            null.map(|v| v.to_string()).unwrap_or_default()
        )));
    }
    let subsets = binomial(rows, cols);
    let limit = caps().bimod_subsets as u128;
    if subsets > limit {
        return Err(Error::ResourceCap { what: "bimodularity row selections", requested: subsets, limit });
    }
    let ints: Vec<Vec<BigInt>> = (0..rows).map(|i| m.row(i).iter().map(|x| x.numer()).collect()).collect();
    let mut norms: Vec<BigInt> = ints.iter().map(|r| r.iter().map(|x| x * x).sum()).collect();
    norms.sort_by(|a, b| b.cmp(a));
    let hadamard_sq: BigInt = norms.iter().take(cols).product();
    let half = BigInt::from(P / 2);
    let (max, witness) = if hadamard_sq < &half * &half {
        let res: Vec<Vec<u64>> = ints.iter().map(|r| r.iter().map(residue).collect()).collect();
        let mut s = Sweep { res: &res, cols, stack: Vec::new(), chosen: Vec::new(), best: 0, witness: Vec::new() };
        s.dfs(0, 1);
        (Rational::from(BigInt::from(s.best)), s.witness)
    } else {
        exact_sweep(m)
    };
    let is_bimodular = max <= Rational::from_integer(2);
    Ok(BimodularityReport { rows, cols, subsets, max_abs_subdet: max, is_bimodular, witness })
}

struct Sweep<'a> {
    res: &'a [Vec<u64>],
    cols: usize,
    /// `(pivot column, inverse of pivot, reduced row)`.
    stack: Vec<(usize, u64, Vec<u64>)>,
    chosen: Vec<usize>,
    best: u64,
    witness: Vec<usize>,
}

impl Sweep<'_> {
    fn dfs(&mut self, next: usize, prod: u64) {
        let depth = self.chosen.len();
        if depth == self.cols {
            let v = if prod > P / 2 { P - prod } else { prod };
            if v > self.best || self.witness.is_empty() {
                self.best = v;
                self.witness = self.chosen.clone();
            }
            return;
        }
        let last = self.res.len() - (self.cols - depth);
        for r in next..=last {
            let mut row = self.res[r].clone();
            for (pc, pinv, srow) in &self.stack {
                if row[*pc] == 0 {
                    continue;
                }
                let f = mul(row[*pc], *pinv);
                for (x, y) in row.iter_mut().zip(srow) {
                    if *y != 0 {
                        *x = sub(*x, mul(f, *y));
                    }
                }
            }
            let Some(pc) = row.iter().position(|&x| x != 0) else { continue };
            let piv = row[pc];
            self.stack.push((pc, inv(piv), row));
            self.chosen.push(r);
            self.dfs(r + 1, mul(prod, piv));
            self.chosen.pop();
            self.stack.pop();
        }
    }
}

fn exact_sweep(m: &QMatrix) -> (Rational, Vec<usize>) {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut best = Rational::zero();
    let mut witness = Vec::new();
    let mut idx: Vec<usize> = (0..cols).collect();
    loop {
        let d = m.select_rows(&idx).det().abs();
        if d > best || witness.is_empty() {
            best = d;
            witness = idx.clone();
        }
        let Some(i) = (0..cols).rev().find(|&i| idx[i] < rows - cols + i) else { break };
        idx[i] += 1;
        for j in i + 1..cols {
            idx[j] = idx[j - 1] + 1;
        }
    }
    (best, witness)
}

/// The first entry whose absolute value is `from`, replaced by `to` with the same sign.
pub fn mutate_entry(m: &QMatrix, from: i64, to: i64) -> Option<(QMatrix, (usize, usize))> {
    let target = Rational::from_integer(from);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)].abs() == target {
                let mut out = m.clone();
                let sign = if m[(i, j)].is_negative() { -BigInt::one() } else { BigInt::one() };
                out[(i, j)] = Rational::from_bigint(sign * BigInt::from(to));
                return Some((out, (i, j)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn tiny_matrices() {
        let r = bimodularity_check(&QMatrix::from_int_rows(&[&[2]], 1)).unwrap();
        assert_eq!((r.max_abs_subdet, r.is_bimodular), (qi(2), true));
        let r = bimodularity_check(&QMatrix::from_int_rows(&[&[3]], 1)).unwrap();
        assert_eq!((r.max_abs_subdet, r.is_bimodular), (qi(3), false));
        assert!(bimodularity_check(&QMatrix::from_int_rows(&[&[1, 1], &[2, 2]], 2)).is_err());
    }

    #[test]
    fn cycle_incidence_is_unimodular() {
        let m = QMatrix::from_int_rows(
            &[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
            3,
        );
        let r = bimodularity_check(&m).unwrap();
        assert_eq!(r.max_abs_subdet, qi(1));
        assert_eq!(r.subsets, 20);
    }

    #[test]
    fn modular_and_exact_sweeps_agree() {
        let m = QMatrix::from_int_rows(
            &[&[2, 1, 0], &[1, -1, 3], &[0, 1, 1], &[4, 0, -1], &[1, 1, 1], &[-2, 5, 0]],
            3,
        );
        let r = bimodularity_check(&m).unwrap();
        let (best, w) = exact_sweep(&m);
        assert_eq!(r.max_abs_subdet, best);
        assert_eq!(r.witness, w);
    }
}
