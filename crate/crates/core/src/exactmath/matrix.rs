//! Dense matrices over a ring context, with determinants and minors.

use itertools::Itertools;

use super::ring::{EuclideanRing, Field, Ring};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(rows * cols, data.len(), "entry count mismatch");
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, x: E) -> Self {
        Matrix { rows, cols, data: vec![x; rows * cols] }
    }

    /// Builds from row vectors; `cols` is used when there are no rows.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(cols, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: E) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &all)
    }

    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in stack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::filled(rows, cols, ring.zero())
}

pub fn diagonal<R: Ring>(ring: &R, d: &[R::Elem]) -> Matrix<R::Elem> {
    Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { ring.zero() })
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.cols(), b.rows(), "shape mismatch in product");
    let mut out = zeros(ring, a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let x = a.get(i, k);
            if ring.is_zero(x) {
                continue;
            }
            for j in 0..b.cols() {
                let y = b.get(k, j);
                if !ring.is_zero(y) {
                    let s = ring.add(out.get(i, j), &ring.mul(x, y));
                    out.set(i, j, s);
                }
            }
        }
    }
    out
}

pub fn mat_add<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| ring.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_scale<R: Ring>(ring: &R, c: &R::Elem, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.map(|x| ring.mul(c, x))
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .zip(v)
                .fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)))
        })
        .collect()
}

pub fn vec_mat<R: Ring>(ring: &R, v: &[R::Elem], a: &Matrix<R::Elem>) -> Vec<R::Elem> {
    (0..a.cols())
        .map(|j| {
            (0..a.rows()).fold(ring.zero(), |acc, i| ring.add(&acc, &ring.mul(&v[i], a.get(i, j))))
        })
        .collect()
}

pub fn is_identity<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> bool {
    a.is_square() && *a == identity(ring, a.rows())
}

/// Reduced row echelon form over a field; returns the pivot columns.
pub fn rref<F: Field>(field: &F, a: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !field.is_zero(a.get(i, c))) else { continue };
        a.swap_rows(r, p);
        let inv = field.inv(a.get(r, c));
        for j in c..a.cols() {
            let v = field.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows() {
            if i != r && !field.is_zero(a.get(i, c)) {
                let f = a.get(i, c).clone();
                for j in c..a.cols() {
                    let v = field.sub(a.get(i, j), &field.mul(&f, a.get(r, j)));
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, a: &Matrix<F::Elem>) -> usize {
    rref(field, &mut a.clone()).len()
}

pub fn det<F: Field>(field: &F, a: &Matrix<F::Elem>) -> F::Elem {
    assert!(a.is_square(), "determinant of non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut acc = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !field.is_zero(m.get(i, c))) else { return field.zero() };
        if p != c {
            m.swap_rows(p, c);
            acc = field.neg(&acc);
        }
        let piv = m.get(c, c).clone();
        acc = field.mul(&acc, &piv);
        let inv = field.inv(&piv);
        for i in c + 1..n {
            if field.is_zero(m.get(i, c)) {
                continue;
            }
            let f = field.mul(m.get(i, c), &inv);
            for j in c..n {
                let v = field.sub(m.get(i, j), &field.mul(&f, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    acc
}

pub fn inverse<F: Field>(field: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    assert!(a.is_square(), "inverse of non-square matrix");
    let n = a.rows();
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else if j - n == i {
            field.one()
        } else {
            field.zero()
        }
    });
    let piv = rref(field, &mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    let rows: Vec<usize> = (0..n).collect();
    Some(aug.submatrix(&rows, &cols))
}

/// Solves `x·A = b` for a row vector `x` over a field, if solvable.
pub fn solve_left<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    // x A = b  <=>  Aᵀ xᵀ = bᵀ
    let at = a.transpose();
    let (m, n) = (at.rows(), at.cols());
    let mut aug = Matrix::from_fn(m, n + 1, |i, j| if j < n { at.get(i, j).clone() } else { b[i].clone() });
    let piv = rref(field, &mut aug);
    if piv.last() == Some(&n) {
        return None;
    }
    let mut x = vec![field.zero(); n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug.get(r, n).clone();
    }
    Some(x)
}

/// Determinant over a Euclidean ring by unimodular row elimination.
pub fn det_euclidean<R: EuclideanRing>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
    assert!(a.is_square(), "determinant of non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut sign = ring.one();
    for c in 0..n {
        loop {
            let nonzero: Vec<usize> = (c..n).filter(|&i| !ring.is_zero(m.get(i, c))).collect();
            let Some(&p) = nonzero.iter().min_by(|&&x, &&y| ring.size(m.get(x, c)).cmp(&ring.size(m.get(y, c)))) else {
                return ring.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                sign = ring.neg(&sign);
            }
            let mut done = true;
            for i in c + 1..n {
                if ring.is_zero(m.get(i, c)) {
                    continue;
                }
                let (q, r) = ring.div_rem(m.get(i, c), m.get(c, c));
                for j in c..n {
                    let v = ring.sub(m.get(i, j), &ring.mul(&q, m.get(c, j)));
                    m.set(i, j, v);
                }
                if !ring.is_zero(&r) {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
    }
    (0..n).fold(sign, |acc, i| ring.mul(&acc, m.get(i, i)))
}

/// All `m×m` minors keyed by 1-based index tuples in lexicographic order.
/// When the matrix has exactly `m` rows the key is the column tuple;
/// otherwise it is the row tuple followed by the column tuple.
pub fn minors<F: Field>(field: &F, a: &Matrix<F::Elem>, m: usize) -> Result<Vec<(Vec<usize>, F::Elem)>, Error> {
    if m == 0 || m > a.rows().min(a.cols()) {
        return Err(Error::Dimension(format!("minor size {m} out of range for {}×{}", a.rows(), a.cols())));
    }
    let mut out = Vec::new();
    let row_sets: Vec<Vec<usize>> = (0..a.rows()).combinations(m).collect();
    for rs in &row_sets {
        for cs in (0..a.cols()).combinations(m) {
            let d = det(field, &a.submatrix(rs, &cs));
            let mut key: Vec<usize> = Vec::new();
            if a.rows() != m {
                key.extend(rs.iter().map(|i| i + 1));
            }
            key.extend(cs.iter().map(|j| j + 1));
            out.push((key, d));
        }
    }
    Ok(out)
}
