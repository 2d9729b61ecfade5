//! Dense exact vectors and matrices.

use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

/// A dense vector of rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QVector(pub Vec<Rational>);

impl QVector {
    pub fn zeros(n: usize) -> Self {
        QVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        QVector(xs.iter().map(|&x| Rational::from_integer(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        dot(&self.0, other)
    }

    pub fn add(&self, other: &[Rational]) -> QVector {
        assert_eq!(self.len(), other.len(), "vector dimension mismatch");
        QVector(self.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &[Rational]) -> QVector {
        assert_eq!(self.len(), other.len(), "vector dimension mismatch");
        QVector(self.iter().zip(other).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> QVector {
        QVector(self.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.iter().all(Rational::is_integer)
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(&self.0)
    }

    /// Positive multiple of `self` with coprime integer entries (zero stays zero).
    pub fn primitive_direction(&self) -> QVector {
        primitive_direction(&self.0)
    }
}

impl Deref for QVector {
    type Target = Vec<Rational>;
    fn deref(&self) -> &Vec<Rational> {
        &self.0
    }
}

impl DerefMut for QVector {
    fn deref_mut(&mut self) -> &mut Vec<Rational> {
        &mut self.0
    }
}

impl AsRef<[Rational]> for QVector {
    fn as_ref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(v: Vec<Rational>) -> Self {
        QVector(v)
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len(), "vector dimension mismatch");
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Positive multiple of `v` with coprime integer entries (zero stays zero).
pub fn primitive_direction(v: &[Rational]) -> QVector {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(&x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return QVector::zeros(v.len());
    }
    ints.into_iter().map(|x| Rational::from_bigint(x / &g)).collect()
}

/// Dense row-major rational matrix with explicit shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Build from rows; every row must have length `cols`.
    pub fn from_rows<R: AsRef<[Rational]>>(rows: &[R], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "matrix row length mismatch");
            data.extend_from_slice(r);
        }
        QMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_int_rows(rows: &[&[i64]], cols: usize) -> Self {
        let rs: Vec<QVector> = rows.iter().map(|r| QVector::from_ints(r)).collect();
        Self::from_rows(&rs, cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Rational] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> QVector {
        QVector(self.row(i).to_vec())
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn push_row(&mut self, r: &[Rational]) {
        assert_eq!(r.len(), self.cols, "matrix row length mismatch");
        self.data.extend_from_slice(r);
        self.rows += 1;
    }

    pub fn remove_row(&mut self, i: usize) {
        self.data.drain(i * self.cols..(i + 1) * self.cols);
        self.rows -= 1;
    }

    pub fn select_rows(&self, idx: &[usize]) -> QMatrix {
        let rs: Vec<&[Rational]> = idx.iter().map(|&i| self.row(i)).collect();
        Self::from_rows(&rs, self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        QMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        QMatrix { rows: self.rows, cols, data }
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `vᵀ M`.
    pub fn left_mul_vec(&self, v: &[Rational]) -> QVector {
        assert_eq!(v.len(), self.rows, "vector-matrix dimension mismatch");
        let mut out = QVector::zeros(self.cols);
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += c * a;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut m = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let r = other.left_mul_vec(self.row(i));
            m.row_mut(i).clone_from_slice(&r);
        }
        m
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Rational::is_integer)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].recip();
            for x in m.row_mut(r) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            let pivot_row = m.row(r).to_vec();
            let nz: Vec<usize> = (0..m.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                let row = m.row_mut(i);
                for &j in &nz {
                    row[j] -= &f * &pivot_row[j];
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : Mx = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = QVector::zeros(self.cols);
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(i, f)];
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `Mx = b` (free variables set to zero), or `None`.
    pub fn solve(&self, b: &[Rational]) -> Option<QVector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let aug = self.hstack(&QMatrix::from_rows(&b.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>(), 1));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = QVector::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let (r, pivots) = self.hstack(&QMatrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(r.select_cols(&idx))
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(i, j)] -= t;
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Canonical copy with zero columns; used to fix the shape of empty matrices.
    pub fn empty(cols: usize) -> QMatrix {
        QMatrix::zeros(0, cols)
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", QVector(self.row(i).to_vec()))?;
        }
        write!(f, "]")
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[Rational]> = self.rows_iter().collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    /// Column count is taken from the first row; an empty matrix has zero
    /// columns until the containing object fixes its shape.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<Rational>> = Vec::deserialize(deserializer)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(QMatrix::from_rows(&rows, cols))
    }
}

/// Exact integer-valued helper: `|x|` for an integral rational as a BigInt.
pub fn int_abs(x: &Rational) -> BigInt {
    x.numer().abs()
}
