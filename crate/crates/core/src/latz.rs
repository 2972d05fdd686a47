//! Summands of ℤⁿ with volumes taken from a positive definite form.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactmath::matrix::{det, inverse, mat_mul, rank};
use crate::exactmath::normal_form::{complete_basis, hnf_rows, intersect_row_spans, is_saturated, saturate_span};
use crate::exactmath::{Integers, Matrix, Rational, QQ};
use crate::filtration::{canonical_filtration, FiltrationReport, LatticeOracle, SqVolume};
use crate::Error;

pub const MAX_RANK: usize = 6;

/// A positive definite symmetric form on ℝⁿ with rational Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerProduct {
    gram: Matrix<Rational>,
}

impl InnerProduct {
    pub fn new(gram: Matrix<Rational>) -> Result<Self, Error> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::Dimension("Gram matrix must be square and nonempty".into()));
        }
        let n = gram.rows();
        for i in 0..n {
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        if !is_positive_definite(&gram) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(InnerProduct { gram })
    }

    pub fn identity(n: usize) -> Self {
        InnerProduct { gram: crate::exactmath::matrix::identity(&QQ, n) }
    }

    pub fn diagonal(d: &[Rational]) -> Result<Self, Error> {
        InnerProduct::new(crate::exactmath::matrix::diagonal(&QQ, d))
    }

    pub fn n(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<Rational> {
        &self.gram
    }

    pub fn eval(&self, v: &[BigInt], w: &[BigInt]) -> Rational {
        let n = self.n();
        let mut acc = Rational::zero();
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !w[j].is_zero() {
                    acc = acc + self.gram.get(i, j) * &Rational::integer(&v[i] * &w[j]);
                }
            }
        }
        acc
    }

    /// `λ·s` for a positive rational `λ`.
    pub fn scaled(&self, lambda: &Rational) -> Self {
        assert!(lambda.is_positive(), "scaling by a non-positive factor");
        InnerProduct { gram: self.gram.map(|x| x * lambda) }
    }

    /// The form `(v, w) ↦ s(v·P, w·P)` for an invertible integer matrix `P`
    /// acting on row vectors.
    pub fn pullback(&self, p: &Matrix<BigInt>) -> Self {
        let pq = p.map(|x| Rational::integer(x.clone()));
        let g = mat_mul(&QQ, &mat_mul(&QQ, &pq, &self.gram), &pq.transpose());
        InnerProduct { gram: g }
    }

    /// Gram matrix of the rows of a rational matrix.
    pub fn gram_of(&self, rows: &Matrix<Rational>) -> Matrix<Rational> {
        mat_mul(&QQ, &mat_mul(&QQ, rows, &self.gram), &rows.transpose())
    }
}

fn is_positive_definite(g: &Matrix<Rational>) -> bool {
    (1..=g.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        det(&QQ, &g.submatrix(&idx, &idx)).is_positive()
    })
}

/// A direct summand of ℤⁿ, stored by its canonical basis rows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZSummand {
    basis: Matrix<BigInt>,
}

impl ZSummand {
    /// The summand with the given basis rows, which must be saturated.
    pub fn new(basis: Matrix<BigInt>) -> Result<Self, Error> {
        if basis.rows() > 0 && !is_saturated(&Integers, &basis) {
            return Err(Error::NotProjective("rows do not span a direct summand".into()));
        }
        Ok(ZSummand::from_saturated(basis))
    }

    /// The saturation of the span of the given rows.
    pub fn span(rows: &Matrix<BigInt>) -> Self {
        ZSummand { basis: saturate_span(&Integers, rows) }
    }

    pub fn from_i64_rows(rows: &[&[i64]], n: usize) -> Self {
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), n);
        ZSummand::span(&m)
    }

    fn from_saturated(basis: Matrix<BigInt>) -> Self {
        if basis.rows() == 0 {
            return ZSummand { basis };
        }
        ZSummand { basis: hnf_rows(&Integers, &basis) }
    }

    pub fn zero(n: usize) -> Self {
        ZSummand { basis: Matrix::from_rows(Vec::new(), n) }
    }

    pub fn full(n: usize) -> Self {
        ZSummand { basis: crate::exactmath::matrix::identity(&Integers, n) }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<BigInt> {
        &self.basis
    }

    pub fn rational_basis(&self) -> Matrix<Rational> {
        self.basis.map(|x| Rational::integer(x.clone()))
    }

    pub fn contains(&self, other: &ZSummand) -> bool {
        if other.rank() == 0 {
            return true;
        }
        if other.rank() > self.rank() {
            return false;
        }
        if self.rank() == 0 {
            return false;
        }
        rank(&QQ, &self.rational_basis().stack(&other.rational_basis())) == self.rank()
    }

    pub fn meet(&self, other: &ZSummand) -> ZSummand {
        ZSummand { basis: intersect_row_spans(&Integers, &self.basis, &other.basis) }
    }

    /// The smallest summand containing both.
    pub fn join(&self, other: &ZSummand) -> ZSummand {
        ZSummand::span(&self.basis.stack(&other.basis))
    }

    /// Image under `v ↦ v·P` for an invertible integer matrix `P`.
    pub fn transform(&self, p: &Matrix<BigInt>) -> ZSummand {
        if self.rank() == 0 {
            return self.clone();
        }
        ZSummand::from_saturated(mat_mul(&Integers, &self.basis, p))
    }
}

/// Squared volume `det(s(m_i, m_j))` of a summand.
pub fn gram_logvol(s: &InnerProduct, w: &ZSummand) -> Result<Rational, Error> {
    if w.ambient() != s.n() {
        return Err(Error::Dimension("summand and form have different ranks".into()));
    }
    rational_sq_volume(s, &w.rational_basis())
}

/// Squared volume of the lattice spanned by independent rational rows.
pub fn rational_sq_volume(s: &InnerProduct, rows: &Matrix<Rational>) -> Result<Rational, Error> {
    if rows.rows() == 0 {
        return Ok(Rational::one());
    }
    let d = det(&QQ, &s.gram_of(rows));
    if d.is_zero() {
        return Err(Error::RankDeficient("basis rows are dependent".into()));
    }
    Ok(d)
}

/// A rational `μ > 0` with `G − μI` positive definite.
pub fn certified_min_eigenvalue(s: &InnerProduct) -> Rational {
    let g = s.gram();
    let n = s.n();
    let trace = (0..n).fold(Rational::zero(), |acc, i| acc + g.get(i, i));
    let d = det(&QQ, g);
    // λ_min ≥ det / λ_max^{n−1} ≥ det / tr^{n−1}; halve to make it strict
    let mut mu = d / trace.pow(n as i64 - 1) / Rational::from(2);
    let two = Rational::from(2);
    for _ in 0..64 {
        let cand = &mu * &two;
        let shifted = Matrix::from_fn(n, n, |i, j| if i == j { g.get(i, j) - &cand } else { g.get(i, j).clone() });
        if is_positive_definite(&shifted) {
            mu = cand;
        } else {
            break;
        }
    }
    mu
}

/// All nonzero integer vectors with `s(v, v) ≤ bound`, one of each `±v`
/// pair (last nonzero coordinate positive), sorted by norm then entries.
pub fn short_vectors(s: &InnerProduct, bound: &Rational) -> Vec<Vec<BigInt>> {
    let n = s.n();
    // quadratic completion: s(x,x) = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²
    let mut q: Vec<Vec<Rational>> = (0..n).map(|i| s.gram().row(i).to_vec()).collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[k][l] - &(&q[k][i] * &q[i][l]);
                q[k][l] = v;
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    fn rec(
        i: usize,
        rem: Rational,
        q: &[Vec<Rational>],
        x: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        let n = q.len();
        let c = (i + 1..n).fold(Rational::zero(), |acc, j| acc + &q[i][j] * &Rational::integer(x[j].clone()));
        let t = &rem / &q[i][i];
        let fits = |v: &BigInt| {
            let y = Rational::integer(v.clone()) + &c;
            &y * &y <= t
        };
        let (cf, tf) = (c.to_f64(), t.to_f64().max(0.0).sqrt());
        let mut lo = BigInt::from((-cf - tf).ceil() as i64);
        let mut hi = BigInt::from((-cf + tf).floor() as i64);
        while fits(&(&lo - 1)) {
            lo -= 1;
        }
        while !fits(&lo) && lo <= hi {
            lo += 1;
        }
        while fits(&(&hi + 1)) {
            hi += 1;
        }
        while !fits(&hi) && hi >= lo {
            hi -= 1;
        }
        let mut v = lo;
        while v <= hi {
            let y = Rational::integer(v.clone()) + &c;
            let used = &q[i][i] * &(&y * &y);
            x[i] = v.clone();
            if i == 0 {
                if x.iter().any(|e| !e.is_zero()) {
                    out.push(x.clone());
                }
            } else {
                rec(i - 1, &rem - &used, q, x, out);
            }
            v += 1;
        }
        x[i] = BigInt::zero();
    }
    rec(n - 1, bound.clone(), &q, &mut x, &mut out);
    out.retain(|v| v.iter().rev().find(|e| !e.is_zero()).is_some_and(|e| e.is_positive()));
    let mut keyed: Vec<(Rational, Vec<BigInt>)> = out.into_iter().map(|v| (s.eval(&v, &v), v)).collect();
    keyed.sort();
    keyed.into_iter().map(|(_, v)| v).collect()
}

fn is_primitive(v: &[BigInt]) -> bool {
    use num_integer::Integer;
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x)) == BigInt::from(1)
}

/// LLL-reduced basis of `(ℤⁿ, s)` with δ = 3/4, as the rows of a
/// unimodular matrix.
pub fn lll_basis(s: &InnerProduct) -> Matrix<BigInt> {
    let n = s.n();
    let mut p = Matrix::from_fn(n, n, |i, j| BigInt::from((i == j) as i64));
    let delta = Rational::from_ints(3, 4);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&s.pullback(&p));
            let r = round_half_up(&mu[k][j]);
            if !r.is_zero() {
                for c in 0..n {
                    let v = p.get(k, c) - &r * p.get(j, c);
                    p.set(k, c, v);
                }
            }
        }
        let (mu, b) = gram_schmidt(&s.pullback(&p));
        if b[k] >= (&delta - &(&mu[k][k - 1] * &mu[k][k - 1])) * &b[k - 1] {
            k += 1;
        } else {
            p.swap_rows(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    p
}

fn round_half_up(x: &Rational) -> BigInt {
    (x + &Rational::from_ints(1, 2)).floor()
}

/// Gram–Schmidt coefficients `μ_ij` and squared lengths `|b*_i|²` of the
/// standard basis under `s`.
fn gram_schmidt(s: &InnerProduct) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = s.n();
    let g = s.gram();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut x = g.get(i, j).clone();
            for l in 0..j {
                x = &x - &(&(&mu[i][l] * &mu[j][l]) * &b[l]);
            }
            mu[i][j] = &x / &b[j];
        }
        let mut x = g.get(i, i).clone();
        for l in 0..i {
            x = &x - &(&(&mu[i][l] * &mu[i][l]) * &b[l]);
        }
        b[i] = x;
    }
    (mu, b)
}

/// All summands of rank `m` with squared volume at most `bound`.
pub fn summands_of_rank(s: &InnerProduct, m: usize, bound: &Rational) -> Result<Vec<ZSummand>, Error> {
    let n = s.n();
    if n > MAX_RANK {
        return Err(Error::Scale(format!("rank {n} exceeds the enumeration limit {MAX_RANK}")));
    }
    if m > 0 && m < n {
        let p = lll_basis(s);
        let mut out: Vec<ZSummand> =
            reduced_summands_of_rank(&s.pullback(&p), m, bound)?.into_iter().map(|w| w.transform(&p)).collect();
        out.sort();
        return Ok(out);
    }
    reduced_summands_of_rank(s, m, bound)
}

fn reduced_summands_of_rank(s: &InnerProduct, m: usize, bound: &Rational) -> Result<Vec<ZSummand>, Error> {
    let n = s.n();
    if m == 0 {
        return Ok(if *bound >= Rational::one() { vec![ZSummand::zero(n)] } else { Vec::new() });
    }
    if m == n {
        let full = ZSummand::full(n);
        return Ok(if gram_logvol(s, &full)? <= *bound { vec![full] } else { Vec::new() });
    }
    if !bound.is_positive() {
        return Ok(Vec::new());
    }
    // Minkowski: the successive minima v_1, …, v_m of W satisfy
    // ∏|v_i|² ≤ γ_m^m vol² with γ_m ≤ 1 + m/4, and |v_i|² ≥ μ.
    let mu = certified_min_eigenvalue(s);
    let gamma = Rational::from_ints(4 + m as i64, 4);
    let budget = gamma.pow(m as i64) * bound;
    let l2 = &budget / &mu.pow(m as i64 - 1);
    let vecs: Vec<(Rational, Matrix<BigInt>)> = short_vectors(s, &l2)
        .into_iter()
        .filter(|v| is_primitive(v))
        .map(|v| (s.eval(&v, &v), Matrix::from_rows(vec![v], n)))
        .collect();
    let mut found = BTreeSet::new();
    let mut rows = Matrix::from_rows(Vec::new(), n);
    minima_search(s, &vecs, 0, m, &Rational::one(), &budget, bound, &mut rows, &mut found)?;
    Ok(found.into_iter().collect())
}

/// Depth-first search over norm-sorted independent sequences whose norm
/// product can still stay within `budget`.
#[allow(clippy::too_many_arguments)]
fn minima_search(
    s: &InnerProduct,
    vecs: &[(Rational, Matrix<BigInt>)],
    start: usize,
    m: usize,
    product: &Rational,
    budget: &Rational,
    bound: &Rational,
    rows: &mut Matrix<BigInt>,
    found: &mut BTreeSet<ZSummand>,
) -> Result<(), Error> {
    let k = rows.rows();
    if k == m {
        let w = ZSummand::span(rows);
        if gram_logvol(s, &w)? <= *bound {
            found.insert(w);
        }
        return Ok(());
    }
    for (i, (norm, row)) in vecs.iter().enumerate().skip(start) {
        // the remaining m − k vectors all have norm ≥ this one
        if product * &norm.pow((m - k) as i64) > *budget {
            break;
        }
        let stacked = rows.stack(row);
        if k > 0 && rank(&QQ, &stacked.map(|x| Rational::integer(x.clone()))) != k + 1 {
            continue;
        }
        let saved = std::mem::replace(rows, stacked);
        minima_search(s, vecs, i + 1, m, &(product * norm), budget, bound, rows, found)?;
        *rows = saved;
    }
    Ok(())
}

/// All summands with `ln vol ≤ c`, grouped by rank. The zero summand is
/// always included.
pub fn enumerate_summands(s: &InnerProduct, c: f64) -> Result<Vec<Vec<ZSummand>>, Error> {
    let bound = Rational::from_f64((2.0 * c).exp())
        .ok_or_else(|| Error::OutOfRange(format!("volume bound {c} is not finite")))?;
    enumerate_summands_sq(s, &bound)
}

/// All summands with squared volume at most `bound`, grouped by rank.
pub fn enumerate_summands_sq(s: &InnerProduct, bound: &Rational) -> Result<Vec<Vec<ZSummand>>, Error> {
    let n = s.n();
    let mut out = vec![vec![ZSummand::zero(n)]];
    for m in 1..=n {
        out.push(summands_of_rank(s, m, bound)?);
    }
    Ok(out)
}

/// The summand lattice of ℤⁿ with volumes from `s`.
pub struct ZOracle<'a> {
    s: &'a InnerProduct,
    cache: RefCell<BTreeMap<(usize, Rational), Vec<ZSummand>>>,
}

impl<'a> ZOracle<'a> {
    pub fn new(s: &'a InnerProduct) -> Self {
        ZOracle { s, cache: RefCell::new(BTreeMap::new()) }
    }
}

impl LatticeOracle for ZOracle<'_> {
    type Handle = ZSummand;
    type Height = SqVolume;

    fn top_rank(&self) -> usize {
        self.s.n()
    }
    fn zero(&self) -> ZSummand {
        ZSummand::zero(self.s.n())
    }
    fn top(&self) -> ZSummand {
        ZSummand::full(self.s.n())
    }
    fn rank(&self, w: &ZSummand) -> usize {
        w.rank()
    }
    fn height(&self, w: &ZSummand) -> SqVolume {
        SqVolume(gram_logvol(self.s, w).expect("summands are independent"))
    }
    fn summands_up_to(&self, rank: usize, bound: &SqVolume) -> Result<Vec<ZSummand>, Error> {
        let key = (rank, bound.0.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = summands_of_rank(self.s, rank, &bound.0)?;
        self.cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }
    fn is_below(&self, a: &ZSummand, b: &ZSummand) -> bool {
        b.contains(a)
    }
    fn minimal_summands(&self, rank: usize, bound: &SqVolume) -> Result<Vec<ZSummand>, Error> {
        let n = self.s.n();
        let mut bound = bound.clone();
        if rank > 0 && rank < n {
            // spans of reduced basis vectors bound the minimum from above
            let p = lll_basis(self.s);
            for idx in (0..n).combinations(rank) {
                let h = self.height(&ZSummand::span(&p.select_rows(&idx)));
                bound = bound.min(h);
            }
        }
        let all = self.summands_up_to(rank, &bound)?;
        let Some(min) = all.iter().map(|w| self.height(w)).min() else { return Ok(Vec::new()) };
        Ok(all.into_iter().filter(|w| self.height(w) == min).collect())
    }
    fn summands_above(&self, w: &ZSummand, rank: usize, bound: &SqVolume) -> Result<Vec<ZSummand>, Error> {
        let (n, m) = (self.s.n(), w.rank());
        if rank == n {
            return Ok(if self.height(&self.top()) <= *bound { vec![self.top()] } else { Vec::new() });
        }
        // summands above w are w + Y for summands Y of the quotient, whose
        // form is the Schur complement of s on w
        let full = complete_basis(&Integers, w.basis())?;
        let g = self.s.gram_of(&full.map(|x| Rational::integer(x.clone())));
        let head: Vec<usize> = (0..m).collect();
        let tail: Vec<usize> = (m..n).collect();
        let gww_inv = inverse(&QQ, &g.submatrix(&head, &head)).ok_or(Error::Singular)?;
        let cross = mat_mul(&QQ, &mat_mul(&QQ, &g.submatrix(&tail, &head), &gww_inv), &g.submatrix(&head, &tail));
        let schur = Matrix::from_fn(n - m, n - m, |i, j| g.get(m + i, m + j) - cross.get(i, j));
        let q = InnerProduct::new(schur)?;
        let vw = gram_logvol(self.s, w)?;
        let comp = full.select_rows(&tail);
        Ok(summands_of_rank(&q, rank - m, &(&bound.0 / &vw))?
            .into_iter()
            .map(|y| ZSummand::from_saturated(w.basis().stack(&mat_mul(&Integers, y.basis(), &comp))))
            .collect())
    }
    fn summands_below(&self, w: &ZSummand, rank: usize, bound: &SqVolume) -> Result<Vec<ZSummand>, Error> {
        let restricted = InnerProduct::new(self.s.gram_of(&w.rational_basis()))?;
        Ok(summands_of_rank(&restricted, rank, &bound.0)?
            .into_iter()
            .map(|y| ZSummand::from_saturated(mat_mul(&Integers, y.basis(), w.basis())))
            .collect())
    }
    fn meet(&self, a: &ZSummand, b: &ZSummand) -> ZSummand {
        a.meet(b)
    }
    fn join(&self, a: &ZSummand, b: &ZSummand) -> ZSummand {
        a.join(b)
    }
}

pub fn canonical_filtration_z(s: &InnerProduct) -> Result<FiltrationReport<ZSummand, SqVolume>, Error> {
    if s.n() > MAX_RANK {
        return Err(Error::Scale(format!("rank {} exceeds the enumeration limit {MAX_RANK}", s.n())));
    }
    canonical_filtration(&ZOracle::new(s))
}

/// Exact instability number of a proper nonzero summand.
pub fn c_value_z(s: &InnerProduct, w: &ZSummand) -> Result<crate::exactmath::LogRatio, Error> {
    crate::filtration::c_value(&ZOracle::new(s), w)
}

fn to_dmatrix(s: &InnerProduct) -> DMatrix<f64> {
    let n = s.n();
    DMatrix::from_fn(n, n, |i, j| s.gram().get(i, j).to_f64())
}

/// Riemannian distance `‖log(s₁^{-1/2} s₂ s₁^{-1/2})‖_F` for the metric
/// `g_s(u, v) = tr(s⁻¹ u s⁻¹ v)`; accurate to about 1e-9 at desk scale.
pub fn spd_distance(s1: &InnerProduct, s2: &InnerProduct) -> Result<f64, Error> {
    if s1.n() != s2.n() {
        return Err(Error::Dimension("forms of different rank".into()));
    }
    spd_distance_f64(&to_dmatrix(s1), &to_dmatrix(s2))
}

pub fn spd_distance_f64(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64, Error> {
    let l = a.clone().cholesky().ok_or(Error::NotPositiveDefinite)?.l();
    let li = l.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let m = &li * b * li.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let eig = m.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&x| x <= 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(eig.eigenvalues.iter().map(|x| x.ln().powi(2)).sum::<f64>().sqrt())
}
