//! Smith and Hermite normal forms over Euclidean rings, and the submodule
//! operations built on them (saturation, kernels, intersections).

use super::matrix::{identity, Matrix};
use super::ring::EuclideanRing;
use crate::Error;

/// `u · d · v = m` with `u`, `v` invertible and `d` diagonal with
/// normalized entries `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct Snf<E> {
    pub u: Matrix<E>,
    pub d: Matrix<E>,
    pub v: Matrix<E>,
    pub u_inv: Matrix<E>,
    pub v_inv: Matrix<E>,
    pub rank: usize,
}

impl<E: Clone> Snf<E> {
    pub fn invariant_factors(&self) -> Vec<E> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct SnfState<'a, R: EuclideanRing> {
    ring: &'a R,
    d: Matrix<R::Elem>,
    u: Matrix<R::Elem>,
    u_inv: Matrix<R::Elem>,
    v: Matrix<R::Elem>,
    v_inv: Matrix<R::Elem>,
}

impl<R: EuclideanRing> SnfState<'_, R> {
    // row_i += c * row_j on d
    fn row_add(&mut self, i: usize, j: usize, c: &R::Elem) {
        let r = self.ring;
        for k in 0..self.d.cols() {
            let x = r.add(self.d.get(i, k), &r.mul(c, self.d.get(j, k)));
            self.d.set(i, k, x);
        }
        for k in 0..self.u_inv.cols() {
            let x = r.add(self.u_inv.get(i, k), &r.mul(c, self.u_inv.get(j, k)));
            self.u_inv.set(i, k, x);
        }
        for k in 0..self.u.rows() {
            let x = r.sub(self.u.get(k, j), &r.mul(c, self.u.get(k, i)));
            self.u.set(k, j, x);
        }
    }

    // col_i += c * col_j on d
    fn col_add(&mut self, i: usize, j: usize, c: &R::Elem) {
        let r = self.ring;
        for k in 0..self.d.rows() {
            let x = r.add(self.d.get(k, i), &r.mul(c, self.d.get(k, j)));
            self.d.set(k, i, x);
        }
        for k in 0..self.v_inv.rows() {
            let x = r.add(self.v_inv.get(k, i), &r.mul(c, self.v_inv.get(k, j)));
            self.v_inv.set(k, i, x);
        }
        for k in 0..self.v.cols() {
            let x = r.sub(self.v.get(j, k), &r.mul(c, self.v.get(i, k)));
            self.v.set(j, k, x);
        }
    }

    // rows (t, i) ← [[x, y], [p, q]]·(rows t, i), with xq − yp = 1
    fn row_mix(&mut self, t: usize, i: usize, [x, y, p, q]: [&R::Elem; 4]) {
        let r = self.ring;
        let mix = |m: &mut Matrix<R::Elem>| {
            for k in 0..m.cols() {
                let (a, b) = (m.get(t, k).clone(), m.get(i, k).clone());
                m.set(t, k, r.add(&r.mul(x, &a), &r.mul(y, &b)));
                m.set(i, k, r.add(&r.mul(p, &a), &r.mul(q, &b)));
            }
        };
        mix(&mut self.d);
        mix(&mut self.u_inv);
        for k in 0..self.u.rows() {
            let (a, b) = (self.u.get(k, t).clone(), self.u.get(k, i).clone());
            self.u.set(k, t, r.sub(&r.mul(q, &a), &r.mul(p, &b)));
            self.u.set(k, i, r.sub(&r.mul(x, &b), &r.mul(y, &a)));
        }
    }

    // columns (t, j) ← (columns t, j)·[[x, p], [y, q]], with xq − yp = 1
    fn col_mix(&mut self, t: usize, j: usize, [x, y, p, q]: [&R::Elem; 4]) {
        let r = self.ring;
        let mix = |m: &mut Matrix<R::Elem>| {
            for k in 0..m.rows() {
                let (a, b) = (m.get(k, t).clone(), m.get(k, j).clone());
                m.set(k, t, r.add(&r.mul(x, &a), &r.mul(y, &b)));
                m.set(k, j, r.add(&r.mul(p, &a), &r.mul(q, &b)));
            }
        };
        mix(&mut self.d);
        mix(&mut self.v_inv);
        for k in 0..self.v.cols() {
            let (a, b) = (self.v.get(t, k).clone(), self.v.get(j, k).clone());
            self.v.set(t, k, r.sub(&r.mul(q, &a), &r.mul(p, &b)));
            self.v.set(j, k, r.sub(&r.mul(x, &b), &r.mul(y, &a)));
        }
    }

    // Bezout coefficients [x, y, −b/g, a/g] clearing `b` against `a`
    fn bezout(&self, a: &R::Elem, b: &R::Elem) -> [R::Elem; 4] {
        let r = self.ring;
        let (g, x, y) = r.ext_gcd(a, b);
        let p = r.neg(&r.divide_exact(b, &g).expect("gcd divides"));
        let q = r.divide_exact(a, &g).expect("gcd divides");
        [x, y, p, q]
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.d.swap_rows(i, j);
        self.u_inv.swap_rows(i, j);
        self.u.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.d.swap_cols(i, j);
        self.v_inv.swap_cols(i, j);
        self.v.swap_rows(i, j);
    }

    fn row_scale(&mut self, i: usize, unit: &R::Elem) {
        let r = self.ring;
        let inv = r.unit_inverse(unit);
        for k in 0..self.d.cols() {
            let x = r.mul(unit, self.d.get(i, k));
            self.d.set(i, k, x);
        }
        for k in 0..self.u_inv.cols() {
            let x = r.mul(unit, self.u_inv.get(i, k));
            self.u_inv.set(i, k, x);
        }
        for k in 0..self.u.rows() {
            let x = r.mul(&inv, self.u.get(k, i));
            self.u.set(k, i, x);
        }
    }
}

/// Smith normal form with transformation matrices.
pub fn smith_normal_form<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> Snf<R::Elem> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = SnfState {
        ring,
        d: m.clone(),
        u: identity(ring, rows),
        u_inv: identity(ring, rows),
        v: identity(ring, cols),
        v_inv: identity(ring, cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = s.d.get(i, j);
                if ring.is_zero(x) {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| ring.size(x) < ring.size(s.d.get(bi, bj))) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.row_swap(t, pi);
        s.col_swap(t, pj);
        loop {
            for i in t + 1..rows {
                if ring.is_zero(s.d.get(i, t)) {
                    continue;
                }
                if let Some(q) = ring.divide_exact(s.d.get(i, t), s.d.get(t, t)) {
                    s.row_add(i, t, &ring.neg(&q));
                } else {
                    let [x, y, p, q] = s.bezout(s.d.get(t, t), s.d.get(i, t));
                    s.row_mix(t, i, [&x, &y, &p, &q]);
                }
            }
            let mut changed = false;
            for j in t + 1..cols {
                if ring.is_zero(s.d.get(t, j)) {
                    continue;
                }
                if let Some(q) = ring.divide_exact(s.d.get(t, j), s.d.get(t, t)) {
                    s.col_add(j, t, &ring.neg(&q));
                } else {
                    let [x, y, p, q] = s.bezout(s.d.get(t, t), s.d.get(t, j));
                    s.col_mix(t, j, [&x, &y, &p, &q]);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !ring.divides(s.d.get(t, t), s.d.get(i, j)));
            match bad {
                Some((i, _)) => {
                    s.row_add(t, i, &ring.one());
                }
                None => break,
            }
        }
        let (_, unit) = ring.normalize(s.d.get(t, t));
        let inv = ring.unit_inverse(&unit);
        s.row_scale(t, &inv);
        t += 1;
    }
    Snf { u: s.u, d: s.d, v: s.v, u_inv: s.u_inv, v_inv: s.v_inv, rank: t }
}

/// Echelon form of the column span: column `j` has its first nonzero entry
/// (a normalized pivot) in row `p_j` with `p_0 < p_1 < …`, entries of a pivot
/// row to the left of the pivot are reduced modulo it, and zero columns are
/// dropped. Lower triangular for a full-rank square input.
pub fn hnf_columns<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut c = 0;
    for i in 0..rows {
        if c == cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in c..cols {
                let x = a.get(i, j);
                if !ring.is_zero(x) && best.is_none_or(|b| ring.size(x) < ring.size(a.get(i, b))) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            a.swap_cols(c, b);
            let mut clean = true;
            for j in c + 1..cols {
                if ring.is_zero(a.get(i, j)) {
                    continue;
                }
                let (q, r) = ring.div_rem(a.get(i, j), a.get(i, c));
                col_axpy(ring, &mut a, j, c, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if c < cols && !ring.is_zero(a.get(i, c)) {
            let (_, unit) = ring.normalize(a.get(i, c));
            let inv = ring.unit_inverse(&unit);
            for k in 0..rows {
                let x = ring.mul(&inv, a.get(k, c));
                a.set(k, c, x);
            }
            for j in 0..c {
                let (q, _) = ring.div_rem(a.get(i, j), a.get(i, c));
                if !ring.is_zero(&q) {
                    col_axpy(ring, &mut a, j, c, &ring.neg(&q));
                }
            }
            c += 1;
        }
    }
    let keep: Vec<usize> = (0..c).collect();
    let all: Vec<usize> = (0..rows).collect();
    a.submatrix(&all, &keep)
}

fn col_axpy<R: EuclideanRing>(ring: &R, a: &mut Matrix<R::Elem>, dst: usize, src: usize, c: &R::Elem) {
    for k in 0..a.rows() {
        let x = ring.add(a.get(k, dst), &ring.mul(c, a.get(k, src)));
        a.set(k, dst, x);
    }
}

/// Canonical basis (as rows) of the row span; zero rows are dropped.
pub fn hnf_rows<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let h = hnf_columns(ring, &m.transpose()).transpose();
    if h.rows() == 0 {
        Matrix::from_rows(Vec::new(), m.cols())
    } else {
        h
    }
}

/// Basis (rows, canonical form) of the saturation of the row span.
pub fn saturate<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>, Error> {
    let snf = smith_normal_form(ring, m);
    if snf.rank < m.rows() {
        return Err(Error::RankDeficient("dependent rows in saturate".into()));
    }
    Ok(saturated_span(ring, m, &snf))
}

/// Saturation of the row span, allowing dependent rows.
pub fn saturate_span<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let snf = smith_normal_form(ring, m);
    saturated_span(ring, m, &snf)
}

fn saturated_span<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>, snf: &Snf<R::Elem>) -> Matrix<R::Elem> {
    let idx: Vec<usize> = (0..snf.rank).collect();
    let basis = snf.v.select_rows(&idx);
    if basis.rows() == 0 {
        return Matrix::from_rows(Vec::new(), m.cols());
    }
    hnf_rows(ring, &basis)
}

pub fn is_saturated<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> bool {
    let snf = smith_normal_form(ring, m);
    snf.rank == m.rows() && (0..snf.rank).all(|i| ring.is_unit(snf.d.get(i, i)))
}

/// Basis of the left kernel `{x : x·m = 0}`.
pub fn left_kernel<R: EuclideanRing>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let snf = smith_normal_form(ring, m);
    let idx: Vec<usize> = (snf.rank..m.rows()).collect();
    let k = snf.u_inv.select_rows(&idx);
    if k.rows() == 0 {
        Matrix::from_rows(Vec::new(), m.rows())
    } else {
        k
    }
}

/// Basis (rows, canonical form) of the intersection of two row spans.
pub fn intersect_row_spans<R: EuclideanRing>(
    ring: &R,
    a: &Matrix<R::Elem>,
    b: &Matrix<R::Elem>,
) -> Matrix<R::Elem> {
    let n = a.cols();
    if a.rows() == 0 || b.rows() == 0 {
        return Matrix::from_rows(Vec::new(), n);
    }
    let k = left_kernel(ring, &a.stack(b));
    if k.rows() == 0 {
        return Matrix::from_rows(Vec::new(), n);
    }
    let idx: Vec<usize> = (0..a.rows()).collect();
    let coeffs = Matrix::from_fn(k.rows(), a.rows(), |i, j| k.get(i, idx[j]).clone());
    let v = super::matrix::mat_mul(ring, &coeffs, a);
    hnf_rows(ring, &v)
}

/// Completes a basis of a saturated submodule (rows of `w`) to a basis of
/// the ambient free module; the first rows of the result are `w`.
pub fn complete_basis<R: EuclideanRing>(ring: &R, w: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>, Error> {
    let snf = smith_normal_form(ring, w);
    if snf.rank < w.rows() || !(0..snf.rank).all(|i| ring.is_unit(snf.d.get(i, i))) {
        return Err(Error::NotProjective("submodule is not saturated".into()));
    }
    let n = w.cols();
    let mut out = w.clone();
    let tail: Vec<usize> = (w.rows()..n).collect();
    if !tail.is_empty() {
        out = out.stack(&snf.v.select_rows(&tail));
    }
    Ok(out)
}

/// Whether every row of `a` lies in the row span of `b` over the ring.
pub fn row_span_contains<R: EuclideanRing>(ring: &R, b: &Matrix<R::Elem>, a: &Matrix<R::Elem>) -> bool {
    if a.rows() == 0 {
        return true;
    }
    if b.rows() == 0 {
        return (0..a.rows()).all(|i| a.row(i).iter().all(|x| ring.is_zero(x)));
    }
    hnf_rows(ring, &b.stack(a)) == hnf_rows(ring, b)
}
