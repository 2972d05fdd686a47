//! Volume spaces over F_q[t]: an R-lattice S in F_q(t)ⁿ, where R is the
//! ring of rational functions of degree ≤ 0, and volumes of summands of
//! V = F_q[t]ⁿ measured against S.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::exactmath::matrix::{det, inverse, mat_mul, rank, rref};
use crate::exactmath::normal_form::{complete_basis, hnf_rows, intersect_row_spans, is_saturated, left_kernel, saturate_span};
use crate::exactmath::{EuclideanRing, Field, Fq, FqPolyRing, Matrix, Poly, RatFunc, RatFuncField, Ring};
use crate::filtration::{canonical_plot, FiltrationReport, GradedPoint, LatticeOracle};
use crate::Error;

/// Largest F_q-dimension of a vector space the brute-force oracle will
/// enumerate.
pub const MAX_ENUMERATION_DIM: usize = 16;

/// `(V, S)` with `V = F_q[t]ⁿ` and `S` the R-span of the columns of `basis`.
#[derive(Clone, Debug)]
pub struct VolumeSpace {
    k: RatFuncField,
    basis: Matrix<RatFunc>,
    coords: Matrix<RatFunc>,
}

impl VolumeSpace {
    pub fn new(k: RatFuncField, basis: Matrix<RatFunc>) -> Result<Self, Error> {
        if !basis.is_square() {
            return Err(Error::Dimension("lattice basis must be square".into()));
        }
        let coords = inverse(&k, &basis).ok_or_else(|| Error::RankDeficient("lattice basis is singular".into()))?;
        Ok(VolumeSpace { k, basis, coords })
    }

    /// Parses a matrix of rational-function strings whose columns are the
    /// basis of `S`.
    pub fn parse(q: u64, rows: &[Vec<String>]) -> Result<Self, Error> {
        let k = RatFuncField::over(Fq::new(q)?);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension("lattice basis must be square".into()));
            }
            entries.push(row.iter().map(|s| k.parse(s)).collect::<Result<Vec<_>, _>>()?);
        }
        VolumeSpace::new(k, Matrix::from_rows(entries, n))
    }

    pub fn standard(k: RatFuncField, n: usize) -> Self {
        let id = crate::exactmath::matrix::identity(&k, n);
        VolumeSpace { k, basis: id.clone(), coords: id }
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    pub fn field(&self) -> &RatFuncField {
        &self.k
    }

    pub fn ring(&self) -> &FqPolyRing {
        &self.k.base
    }

    /// Columns are the R-basis of `S`.
    pub fn basis(&self) -> &Matrix<RatFunc> {
        &self.basis
    }

    /// Inverse of the basis matrix: coordinates of a vector in the S-basis.
    pub fn coords(&self) -> &Matrix<RatFunc> {
        &self.coords
    }

    /// `c·S`.
    pub fn scaled(&self, c: &RatFunc) -> Result<Self, Error> {
        VolumeSpace::new(self.k.clone(), self.basis.map(|x| self.k.mul(x, c)))
    }

    /// `φ(S)` for `φ ∈ GL_n(F_q[t])` acting on column vectors.
    pub fn transformed(&self, phi: &Matrix<Poly>) -> Result<Self, Error> {
        let p = phi.map(|x| self.k.from_base(x.clone()));
        VolumeSpace::new(self.k.clone(), mat_mul(&self.k, &p, &self.basis))
    }

    /// A different R-basis of the same `S`, `B·M` for `M ∈ GL_n(R)`.
    pub fn rebased(&self, m: &Matrix<RatFunc>) -> Result<Self, Error> {
        VolumeSpace::new(self.k.clone(), mat_mul(&self.k, &self.basis, m))
    }

    /// Coefficients of the given row vectors in the S-basis, one row each.
    pub fn coefficients(&self, rows: &Matrix<Poly>) -> Matrix<RatFunc> {
        let r = rows.map(|x| self.k.from_base(x.clone()));
        mat_mul(&self.k, &r, &self.coords.transpose())
    }

    fn poly_vec_to_field(&self, v: &[Poly]) -> Vec<RatFunc> {
        v.iter().map(|x| self.k.from_base(x.clone())).collect()
    }
}

/// A direct summand of `F_q[t]ⁿ`, stored by its canonical basis rows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FFSummand {
    basis: Matrix<Poly>,
}

impl FFSummand {
    pub fn new(ring: &FqPolyRing, basis: Matrix<Poly>) -> Result<Self, Error> {
        if basis.rows() == 0 {
            return Ok(FFSummand { basis });
        }
        if !is_saturated(ring, &basis) {
            return Err(Error::NotProjective("rows do not span a direct summand".into()));
        }
        Ok(FFSummand { basis: hnf_rows(ring, &basis) })
    }

    /// Saturation of the span of the given rows.
    pub fn span(ring: &FqPolyRing, rows: &Matrix<Poly>) -> Self {
        FFSummand { basis: saturate_span(ring, rows) }
    }

    pub fn zero(n: usize) -> Self {
        FFSummand { basis: Matrix::from_rows(Vec::new(), n) }
    }

    pub fn full(ring: &FqPolyRing, n: usize) -> Self {
        FFSummand { basis: crate::exactmath::matrix::identity(ring, n) }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<Poly> {
        &self.basis
    }

    pub fn contains(&self, k: &RatFuncField, other: &FFSummand) -> bool {
        if other.rank() == 0 {
            return true;
        }
        if other.rank() > self.rank() {
            return false;
        }
        let a = self.basis.stack(&other.basis).map(|x| k.from_base(x.clone()));
        rank(k, &a) == self.rank()
    }

    pub fn meet(&self, ring: &FqPolyRing, other: &FFSummand) -> FFSummand {
        FFSummand { basis: intersect_row_spans(ring, &self.basis, &other.basis) }
    }

    pub fn join(&self, ring: &FqPolyRing, other: &FFSummand) -> FFSummand {
        FFSummand::span(ring, &self.basis.stack(&other.basis))
    }
}

/// Logarithmic volume of the submodule spanned by independent rows: the
/// largest degree of a maximal minor of their coefficients in the S-basis.
pub fn ff_logvol(vs: &VolumeSpace, rows: &Matrix<Poly>) -> Result<i64, Error> {
    if rows.cols() != vs.n() {
        return Err(Error::Dimension("submodule and volume space have different ranks".into()));
    }
    let m = rows.rows();
    if m == 0 {
        return Ok(0);
    }
    let c = vs.coefficients(rows);
    let k = vs.field();
    crate::exactmath::matrix::minors(k, &c, m)?
        .iter()
        .filter_map(|(_, x)| k.degree(x))
        .max()
        .ok_or_else(|| Error::RankDeficient("submodule rows are dependent".into()))
}

/// Restriction and quotient of a volume space along a summand `W`.
#[derive(Clone, Debug)]
pub struct SubQuotient {
    /// `(W, S ∩ Q⊗W)` in coordinates relative to the rows of `W`.
    pub sub: VolumeSpace,
    /// `(V/W, S/(S ∩ Q⊗W))` in coordinates relative to `complement`.
    pub quotient: VolumeSpace,
    /// Rows completing the basis of `W` to a basis of `V`.
    pub complement: Matrix<Poly>,
    /// Row `j` lies in `S` and maps to basis column `j` of the quotient.
    pub quotient_lifts: Matrix<RatFunc>,
}

pub fn sub_quotient(vs: &VolumeSpace, w: &FFSummand) -> Result<SubQuotient, Error> {
    let k = vs.field();
    let ring = vs.ring();
    let n = vs.n();
    let m = w.rank();
    if w.ambient() != n {
        return Err(Error::Dimension("summand and volume space have different ranks".into()));
    }
    let p = if m == 0 {
        crate::exactmath::matrix::identity(ring, n)
    } else {
        complete_basis(ring, w.basis())?
    };
    let pk = p.map(|x| k.from_base(x.clone()));
    let p_inv = inverse(k, &pk).expect("completed basis is invertible");
    // row j: the j-th S-basis vector in coordinates relative to the rows of P
    let mut g = mat_mul(k, &vs.basis().transpose(), &p_inv);
    let mut used = vec![false; n];
    let mut pivots = Vec::new();
    for c in m..n {
        let piv = (0..n)
            .filter(|&r| !used[r] && !k.is_zero(g.get(r, c)))
            .max_by(|&a, &b| k.degree(g.get(a, c)).cmp(&k.degree(g.get(b, c))).then(b.cmp(&a)))
            .expect("S has full rank");
        used[piv] = true;
        pivots.push(piv);
        for r in 0..n {
            if used[r] || k.is_zero(g.get(r, c)) {
                continue;
            }
            let f = k.div(g.get(r, c), g.get(piv, c));
            for j in 0..n {
                let v = k.sub(g.get(r, j), &k.mul(&f, g.get(piv, j)));
                g.set(r, j, v);
            }
        }
    }
    let sub_rows: Vec<usize> = (0..n).filter(|&r| !used[r]).collect();
    let head: Vec<usize> = (0..m).collect();
    let tail: Vec<usize> = (m..n).collect();
    let sub = VolumeSpace::new(k.clone(), g.submatrix(&sub_rows, &head).transpose())?;
    let quotient = VolumeSpace::new(k.clone(), g.submatrix(&pivots, &tail).transpose())?;
    let lifts = mat_mul(k, &g.select_rows(&pivots), &pk);
    Ok(SubQuotient { sub, quotient, complement: p.select_rows(&tail), quotient_lifts: lifts })
}

fn lcm_of_denominators(k: &RatFuncField, a: &Matrix<RatFunc>) -> Poly {
    a.entries().iter().fold(k.base.one(), |acc, x| k.base.lcm(&acc, &x.den))
}

fn max_row_degrees(k: &RatFuncField, a: &Matrix<RatFunc>) -> Vec<Option<i64>> {
    (0..a.rows()).map(|i| a.row(i).iter().filter_map(|x| k.degree(x)).max()).collect()
}

/// An F_q-basis of `{x ∈ F_q[t]^N : deg (a·x)_i ≤ j for all i}`, where
/// `a_inv` is the inverse of `a`. Basis vectors come from the reduced row
/// echelon form of the coefficient constraints.
pub fn bounded_vectors(
    k: &RatFuncField,
    a: &Matrix<RatFunc>,
    a_inv: &Matrix<RatFunc>,
    j: i64,
) -> Vec<Vec<Poly>> {
    let fq = k.field();
    let n = a.cols();
    let g = lcm_of_denominators(k, a);
    let dg = g.degree().expect("nonzero") as i64;
    let p: Matrix<Poly> = a.map(|x| k.base.divide_exact(&k.base.mul(&x.num, &g), &x.den).expect("common denominator"));
    // x = a_inv · (a x), so deg x_k ≤ j + max deg of row k of a_inv
    let bounds: Vec<Option<usize>> = max_row_degrees(k, a_inv)
        .into_iter()
        .map(|d| d.and_then(|d| usize::try_from(j + d).ok()))
        .collect();
    let mut offsets = Vec::with_capacity(n);
    let mut unknowns = 0usize;
    for b in &bounds {
        offsets.push(unknowns);
        unknowns += b.map_or(0, |d| d + 1);
    }
    if unknowns == 0 {
        return Vec::new();
    }
    // coefficient of t^e in (P x)_i must vanish for e > j + deg g
    let cutoff = j + dg;
    let mut constraints: Vec<Vec<u32>> = Vec::new();
    for i in 0..p.rows() {
        let top = (0..n)
            .filter_map(|c| Some(p.get(i, c).degree()? + bounds[c]?))
            .max();
        let Some(top) = top else { continue };
        for e in (cutoff + 1).max(0)..=top as i64 {
            let e = e as usize;
            let mut row = vec![0u32; unknowns];
            for c in 0..n {
                let Some(b) = bounds[c] else { continue };
                let pc = p.get(i, c);
                for d in 0..=b {
                    if e >= d {
                        row[offsets[c] + d] = pc.coeff(e - d);
                    }
                }
            }
            if row.iter().any(|&x| x != 0) {
                constraints.push(row);
            }
        }
    }
    let mut mat = Matrix::from_rows(constraints, unknowns);
    let pivots = if mat.rows() == 0 { Vec::new() } else { rref(&fq, &mut mat) };
    let free: Vec<usize> = (0..unknowns).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u32; unknowns];
            x[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = fq.neg(*mat.get(r, f));
            }
            (0..n)
                .map(|c| match bounds[c] {
                    None => Poly::zero(),
                    Some(b) => Poly::from_coeffs(x[offsets[c]..=offsets[c] + b].to_vec()),
                })
                .collect()
        })
        .collect()
}

/// A shortest nonzero vector of `V` and its logarithmic volume. The vector
/// is primitive and normalized so its canonical basis row is itself.
pub fn shortest_vector(vs: &VolumeSpace) -> (Vec<Poly>, i64) {
    let k = vs.field();
    let top = max_row_degrees(k, vs.basis()).into_iter().flatten().max().expect("nonempty basis");
    let mut j = -top;
    loop {
        let basis = bounded_vectors(k, vs.coords(), vs.basis(), j);
        if let Some(v) = basis.into_iter().next() {
            let row = hnf_rows(vs.ring(), &Matrix::from_rows(vec![v], vs.n()));
            return (row.row(0).to_vec(), j);
        }
        j += 1;
    }
}

/// Bases `w` of `V` and `b` of `S` (rows) with `w_i = t^{r_i} b_i`.
#[derive(Clone, Debug)]
pub struct DiagonalBasis {
    pub w: Matrix<Poly>,
    pub b: Matrix<RatFunc>,
    pub r: Vec<i64>,
}

pub fn diagonal_basis(vs: &VolumeSpace) -> DiagonalBasis {
    let k = vs.field();
    let ring = vs.ring();
    let n = vs.n();
    if n == 0 {
        return DiagonalBasis { w: Matrix::from_rows(Vec::new(), 0), b: Matrix::from_rows(Vec::new(), 0), r: Vec::new() };
    }
    let (v, r1) = shortest_vector(vs);
    let b1: Vec<RatFunc> = vs.poly_vec_to_field(&v).iter().map(|x| k.mul(x, &k.t_pow(-r1))).collect();
    let mut w_rows = vec![v.clone()];
    let mut b_rows = vec![b1.clone()];
    let mut r = vec![r1];
    if n > 1 {
        let line = FFSummand { basis: Matrix::from_rows(vec![v.clone()], n) };
        let sq = sub_quotient(vs, &line).expect("shortest vectors are primitive");
        let rec = diagonal_basis(&sq.quotient);
        let pivot = b1.iter().position(|x| !k.is_zero(x)).expect("nonzero vector");
        for i in 0..n - 1 {
            let ri = rec.r[i];
            let mut wi = crate::exactmath::matrix::vec_mat(ring, rec.w.row(i), &sq.complement);
            let a = crate::exactmath::matrix::mat_vec(k, sq.quotient.coords(), rec.b.row(i));
            let mut bi = crate::exactmath::matrix::vec_mat(k, &a, &sq.quotient_lifts);
            // w_i − t^{r_i} b_i lies on the line through b_1
            let ti = k.t_pow(ri);
            let wk = vs.poly_vec_to_field(&wi);
            let s = k.div(&k.sub(&wk[pivot], &k.mul(&ti, &bi[pivot])), &b1[pivot]);
            let polypart = k.poly_part(&k.mul(&s, &k.t_pow(-r1)));
            for (x, y) in wi.iter_mut().zip(&v) {
                *x = ring.sub(x, &ring.mul(&polypart, y));
            }
            let s = k.sub(&s, &k.mul(&k.from_base(polypart), &k.t_pow(r1)));
            debug_assert!(ri >= r1);
            let f = k.mul(&s, &k.t_pow(-ri));
            for (x, y) in bi.iter_mut().zip(&b1) {
                *x = k.add(x, &k.mul(&f, y));
            }
            w_rows.push(wi);
            b_rows.push(bi);
            r.push(ri);
        }
    }
    DiagonalBasis { w: Matrix::from_rows(w_rows, n), b: Matrix::from_rows(b_rows, n), r }
}

/// The r-vector and the canonical filtration `⟨w_i : r_i ≤ C⟩`.
pub fn ff_invariants_and_filtration(vs: &VolumeSpace) -> (DiagonalBasis, FiltrationReport<FFSummand, i64>) {
    let d = diagonal_basis(vs);
    let ring = vs.ring();
    let n = vs.n();
    let mut points = vec![GradedPoint { id: FFSummand::zero(n), rank: 0, height: 0i64 }];
    let mut h = 0;
    for m in 1..=n {
        h += d.r[m - 1];
        let idx: Vec<usize> = (0..m).collect();
        points.push(GradedPoint { id: FFSummand::span(ring, &d.w.select_rows(&idx)), rank: m, height: h });
    }
    let report = canonical_plot(&points, n).expect("points at every rank");
    (d, report)
}

/// Instability number of a proper nonzero summand: the smallest slope of
/// the quotient minus the largest slope of the restriction.
pub fn ff_c_value(vs: &VolumeSpace, w: &FFSummand) -> Result<i64, Error> {
    let m = w.rank();
    if m == 0 || m == vs.n() {
        return Err(Error::BoundaryModule);
    }
    let sq = sub_quotient(vs, w)?;
    let out = diagonal_basis(&sq.quotient).r[0];
    let inc = *diagonal_basis(&sq.sub).r.last().expect("nonzero rank");
    Ok(out - inc)
}

/// `k`-th compound matrix: minors indexed by `k`-subsets in lexicographic
/// order.
pub fn compound<F: Field>(field: &F, a: &Matrix<F::Elem>, k: usize) -> Matrix<F::Elem> {
    let rs: Vec<Vec<usize>> = (0..a.rows()).combinations(k).collect();
    let cs: Vec<Vec<usize>> = (0..a.cols()).combinations(k).collect();
    Matrix::from_fn(rs.len(), cs.len(), |i, j| det(field, &a.submatrix(&rs[i], &cs[j])))
}

/// The summand whose Plücker vector is a multiple of `omega`, or `None`
/// if `omega` is not decomposable.
pub fn summand_of_plucker(ring: &FqPolyRing, n: usize, k: usize, omega: &[Poly]) -> Option<FFSummand> {
    if k == n {
        return Some(FFSummand::full(ring, n));
    }
    let small: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let big: Vec<Vec<usize>> = (0..n).combinations(k + 1).collect();
    let index: BTreeMap<&Vec<usize>, usize> = big.iter().enumerate().map(|(i, s)| (s, i)).collect();
    // matrix of v ↦ v ∧ ω
    let mut m = Matrix::filled(n, big.len(), Poly::zero());
    for i in 0..n {
        for (s, om) in small.iter().zip(omega) {
            if om.is_zero() || s.contains(&i) {
                continue;
            }
            let mut u = s.clone();
            u.push(i);
            u.sort_unstable();
            let sign = s.iter().filter(|&&x| x < i).count() % 2 == 1;
            let col = index[&u];
            let term = if sign { ring.neg(om) } else { om.clone() };
            let v = ring.add(m.get(i, col), &term);
            m.set(i, col, v);
        }
    }
    let ker = left_kernel(ring, &m);
    (ker.rows() == k).then(|| FFSummand::span(ring, &ker))
}

fn span_elements(fq: &Fq, basis: &[Vec<Poly>], ring: &FqPolyRing) -> Vec<Vec<Poly>> {
    let d = basis.len();
    let q = fq.size() as usize;
    let mut out = Vec::new();
    for code in 1..q.pow(d as u32) {
        let mut c = code;
        let mut v: Vec<Poly> = vec![Poly::zero(); basis[0].len()];
        for b in basis {
            let a = (c % q) as u32;
            c /= q;
            if a != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = ring.add(x, &ring.scale(y, a));
                }
            }
        }
        out.push(v);
    }
    out
}

/// Brute-force access to the summand lattice of a volume space via
/// Plücker vectors of bounded degree.
pub struct FFOracle<'a> {
    vs: &'a VolumeSpace,
    cache: RefCell<BTreeMap<(usize, i64), Vec<FFSummand>>>,
}

impl<'a> FFOracle<'a> {
    pub fn new(vs: &'a VolumeSpace) -> Self {
        FFOracle { vs, cache: RefCell::new(BTreeMap::new()) }
    }

    fn enumerate(&self, rank: usize, bound: i64) -> Result<Vec<FFSummand>, Error> {
        let vs = self.vs;
        let (k, ring, n) = (vs.field(), vs.ring(), vs.n());
        if rank == 0 {
            return Ok(if bound >= 0 { vec![FFSummand::zero(n)] } else { Vec::new() });
        }
        if rank == n {
            let full = FFSummand::full(ring, n);
            return Ok(if ff_logvol(vs, full.basis())? <= bound { vec![full] } else { Vec::new() });
        }
        let a = compound(k, vs.coords(), rank);
        let a_inv = compound(k, vs.basis(), rank);
        let basis = bounded_vectors(k, &a, &a_inv, bound);
        if basis.len() > MAX_ENUMERATION_DIM {
            return Err(Error::Scale(format!("{}-dimensional search space", basis.len())));
        }
        let mut found = BTreeSet::new();
        if basis.is_empty() {
            return Ok(Vec::new());
        }
        for omega in span_elements(&k.field(), &basis, ring) {
            if let Some(w) = summand_of_plucker(ring, n, rank, &omega) {
                if ff_logvol(vs, w.basis())? <= bound {
                    found.insert(w);
                }
            }
        }
        Ok(found.into_iter().collect())
    }
}

impl LatticeOracle for FFOracle<'_> {
    type Handle = FFSummand;
    type Height = i64;

    fn top_rank(&self) -> usize {
        self.vs.n()
    }
    fn zero(&self) -> FFSummand {
        FFSummand::zero(self.vs.n())
    }
    fn top(&self) -> FFSummand {
        FFSummand::full(self.vs.ring(), self.vs.n())
    }
    fn rank(&self, w: &FFSummand) -> usize {
        w.rank()
    }
    fn height(&self, w: &FFSummand) -> i64 {
        ff_logvol(self.vs, w.basis()).expect("summands are independent")
    }
    fn summands_up_to(&self, rank: usize, bound: &i64) -> Result<Vec<FFSummand>, Error> {
        let key = (rank, *bound);
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.enumerate(rank, *bound)?;
        self.cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }
    fn is_below(&self, a: &FFSummand, b: &FFSummand) -> bool {
        b.contains(self.vs.field(), a)
    }
    fn meet(&self, a: &FFSummand, b: &FFSummand) -> FFSummand {
        a.meet(self.vs.ring(), b)
    }
    fn join(&self, a: &FFSummand, b: &FFSummand) -> FFSummand {
        a.join(self.vs.ring(), b)
    }
}
