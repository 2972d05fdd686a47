//! The localized setting: free `Z[T⁻¹]`-modules with an integral structure
//! `B` (a full `Z_T`-lattice in Qⁿ), the isomorphism `W ↦ W ∩ B` onto
//! summands of the `Z`-lattice `V ∩ B`, localized volumes and c-values, and
//! the factorization `GL_n(Q) = GL_n(Z[T⁻¹])·GL_n(Z_T)`.

use num_bigint::BigInt;

use crate::exactmath::matrix::{det, identity, inverse, mat_mul};
use crate::exactmath::normal_form::{hnf_rows, saturate_span, smith_normal_form};
use crate::exactmath::{
    AwayFromT, EuclideanRing, Field, FqPolyRing, Frac, FractionField, Integers, LogRatio, Matrix, Poly, Rational,
    Ring, TLocalization, QQ,
};
use crate::latff::{ff_c_value, ff_logvol, FFSummand, VolumeSpace};
use crate::latz::{c_value_z, rational_sq_volume, InnerProduct, ZSummand};
use crate::Error;

type FracOf<R> = Frac<<R as Ring>::Elem>;

/// A full-rank `Z_T`-lattice in Qⁿ given by the columns of `basis`.
#[derive(Clone, Debug)]
pub struct IntegralStructure<R: EuclideanRing>
where
    FracOf<R>: Ord,
{
    loc: TLocalization<R>,
    basis: Matrix<FracOf<R>>,
    coords: Matrix<FracOf<R>>,
}

impl<R: EuclideanRing> IntegralStructure<R>
where
    FracOf<R>: Ord,
{
    pub fn new(loc: TLocalization<R>, basis: Matrix<FracOf<R>>) -> Result<Self, Error> {
        if !basis.is_square() {
            return Err(Error::Dimension("integral structure basis must be square".into()));
        }
        let coords = inverse(&loc.frac, &basis).ok_or(Error::Singular)?;
        Ok(IntegralStructure { loc, basis, coords })
    }

    /// `B = Z_Tⁿ`.
    pub fn standard(loc: TLocalization<R>, n: usize) -> Self {
        let id = identity(&loc.frac, n);
        IntegralStructure { loc, basis: id.clone(), coords: id }
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    pub fn localization(&self) -> &TLocalization<R> {
        &self.loc
    }

    pub fn frac(&self) -> &FractionField<R> {
        &self.loc.frac
    }

    pub fn basis(&self) -> &Matrix<FracOf<R>> {
        &self.basis
    }

    /// `c·B`.
    pub fn scaled(&self, c: &FracOf<R>) -> Result<Self, Error> {
        IntegralStructure::new(self.loc.clone(), self.basis.map(|x| self.loc.frac.mul(x, c)))
    }
}

/// A direct summand of `Z[T⁻¹]ⁿ`, stored as the saturated integral lattice
/// `W ∩ Zⁿ` in canonical form; it determines `W` as its `Z[T⁻¹]`-span.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocSummand<E> {
    basis: Matrix<E>,
}

impl<E: Clone> LocSummand<E> {
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }
}

impl<E: Clone + Ord + std::fmt::Debug + std::hash::Hash> LocSummand<E> {
    /// The summand generated by the given rows (any fractions allowed).
    pub fn span<R: EuclideanRing<Elem = E>>(frac: &FractionField<R>, rows: &Matrix<Frac<E>>) -> Self
    where
        Frac<E>: Ord,
    {
        let ring = &frac.base;
        let cleared = Matrix::from_rows(
            (0..rows.rows())
                .map(|i| {
                    let d = rows.row(i).iter().fold(ring.one(), |acc, x| ring.lcm(&acc, &x.den));
                    rows.row(i).iter().map(|x| ring.divide_exact(&ring.mul(&x.num, &d), &x.den).expect("lcm")).collect()
                })
                .collect(),
            rows.cols(),
        );
        LocSummand { basis: saturate_span(ring, &cleared) }
    }

    pub fn zero(n: usize) -> Self {
        LocSummand { basis: Matrix::from_rows(Vec::new(), n) }
    }

    pub fn full<R: EuclideanRing<Elem = E>>(ring: &R, n: usize) -> Self {
        LocSummand { basis: identity(ring, n) }
    }

    pub fn to_frac<R: EuclideanRing<Elem = E>>(&self, frac: &FractionField<R>) -> Matrix<Frac<E>> {
        self.basis.map(|x| frac.from_base(x.clone()))
    }
}

/// Canonical basis rows of the `Z`-lattice spanned by rows of fractions.
pub fn hnf_fractions<R: EuclideanRing>(frac: &FractionField<R>, m: &Matrix<FracOf<R>>) -> Matrix<FracOf<R>>
where
    FracOf<R>: Ord,
{
    let ring = &frac.base;
    let e = m.entries().iter().fold(ring.one(), |acc, x| ring.lcm(&acc, &x.den));
    let e = ring.normalize(&e).0;
    let cleared = m.map(|x| ring.divide_exact(&ring.mul(&x.num, &e), &x.den).expect("lcm"));
    let h = hnf_rows(ring, &cleared);
    h.map(|x| frac.make(x.clone(), e.clone()))
}

/// `Z`-basis (canonical rows) of `W ∩ B`.
pub fn intersect_integral<R: EuclideanRing>(
    w: &LocSummand<R::Elem>,
    b: &IntegralStructure<R>,
) -> Result<Matrix<FracOf<R>>, Error>
where
    FracOf<R>: Ord,
{
    let frac = b.frac();
    let ring = &frac.base;
    if w.ambient() != b.n() {
        return Err(Error::Dimension("summand and integral structure have different ranks".into()));
    }
    if w.rank() == 0 {
        return Ok(Matrix::from_rows(Vec::new(), b.n()));
    }
    // a·W ∈ B  ⟺  a·C ∈ Z_Tⁿ with C the coordinates of W in the B-basis
    let wf = w.to_frac(frac);
    let c = mat_mul(frac, &wf, &b.coords.transpose());
    let d = c.entries().iter().fold(ring.one(), |acc, x| ring.lcm(&acc, &x.den));
    let cl = c.map(|x| ring.divide_exact(&ring.mul(&x.num, &d), &x.den).expect("lcm"));
    let snf = smith_normal_form(ring, &cl);
    // with b = a·U the conditions decouple: b_i ∈ Z[T⁻¹] ∩ (d/d_i)·Z_T
    let rows_u = mat_mul(ring, &snf.u_inv, w.basis());
    let mut rows = Vec::with_capacity(w.rank());
    for i in 0..w.rank() {
        let ratio = frac.make(d.clone(), snf.d.get(i, i).clone());
        let f = frac.make(b.loc.split(&ratio.num).0, b.loc.split(&ratio.den).0);
        rows.push(rows_u.row(i).iter().map(|x| frac.mul(&f, &frac.from_base(x.clone()))).collect());
    }
    Ok(hnf_fractions(frac, &Matrix::from_rows(rows, b.n())))
}

/// Coordinates of rows relative to a basis of the same lattice.
fn relative_coords<R: EuclideanRing>(frac: &FractionField<R>, rows: &Matrix<FracOf<R>>, lattice: &Matrix<FracOf<R>>) -> Matrix<R::Elem>
where
    FracOf<R>: Ord,
{
    let inv = inverse(frac, lattice).expect("lattice basis is invertible");
    mat_mul(frac, rows, &inv).map(|x| {
        assert!(frac.base.is_one(&x.den), "rows lie in the lattice");
        x.num.clone()
    })
}

/// Squared volume of `W ∩ B` under `s`.
pub fn loc_sq_volume(s: &InnerProduct, w: &LocSummand<BigInt>, b: &IntegralStructure<Integers>) -> Result<Rational, Error> {
    rational_sq_volume(s, &intersect_integral(w, b)?)
}

/// Transports `(V ∩ B, s)` to `(Zⁿ, s′)` and `W` to a summand of `Zⁿ`.
pub fn transport_z(s: &InnerProduct, w: &LocSummand<BigInt>, b: &IntegralStructure<Integers>) -> Result<(InnerProduct, ZSummand), Error> {
    let n = b.n();
    let lattice = intersect_integral(&LocSummand::full(&Integers, n), b)?;
    let s2 = InnerProduct::new(s.gram_of(&lattice))?;
    let wb = intersect_integral(w, b)?;
    let wz = if wb.rows() == 0 { ZSummand::zero(n) } else { ZSummand::new(relative_coords(&QQ, &wb, &lattice))? };
    Ok((s2, wz))
}

/// `c_W(s, B) = c_{W∩B}(s)` on the lattice `V ∩ B`.
pub fn loc_c_z(s: &InnerProduct, w: &LocSummand<BigInt>, b: &IntegralStructure<Integers>) -> Result<LogRatio, Error> {
    if w.rank() == 0 || w.rank() == b.n() {
        return Err(Error::BoundaryModule);
    }
    let (s2, wz) = transport_z(s, w, b)?;
    c_value_z(&s2, &wz)
}

/// Transports `(V ∩ B, S)` to a volume space on `F_q[t]ⁿ` and `W` to a
/// summand of it.
pub fn transport_ff(
    vs: &VolumeSpace,
    w: &LocSummand<Poly>,
    b: &IntegralStructure<FqPolyRing>,
) -> Result<(VolumeSpace, FFSummand), Error> {
    let n = b.n();
    let k = vs.field();
    let lattice = intersect_integral(&LocSummand::full(&k.base, n), b)?;
    let lt_inv = inverse(k, &lattice.transpose()).expect("lattice basis is invertible");
    let vs2 = VolumeSpace::new(k.clone(), mat_mul(k, &lt_inv, vs.basis()))?;
    let wb = intersect_integral(w, b)?;
    let wf = if wb.rows() == 0 { FFSummand::zero(n) } else { FFSummand::new(&k.base, relative_coords(k, &wb, &lattice))? };
    Ok((vs2, wf))
}

pub fn loc_logvol_ff(vs: &VolumeSpace, w: &LocSummand<Poly>, b: &IntegralStructure<FqPolyRing>) -> Result<i64, Error> {
    let (vs2, wf) = transport_ff(vs, w, b)?;
    ff_logvol(&vs2, wf.basis())
}

pub fn loc_c_ff(vs: &VolumeSpace, w: &LocSummand<Poly>, b: &IntegralStructure<FqPolyRing>) -> Result<i64, Error> {
    if w.rank() == 0 || w.rank() == b.n() {
        return Err(Error::BoundaryModule);
    }
    let (vs2, wf) = transport_ff(vs, w, b)?;
    ff_c_value(&vs2, &wf)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorMode {
    /// `B ∈ GL_n(Z[T⁻¹])`, `C ∈ GL_n(Z_T)`.
    General,
    /// As above with `det B = det C = 1`; requires `det A = 1`.
    Special,
}

fn is_t_unit<R: EuclideanRing>(loc: &TLocalization<R>, x: &FracOf<R>) -> bool
where
    FracOf<R>: Ord,
{
    let r = &loc.frac.base;
    !r.is_zero(&x.num) && r.is_unit(&loc.split(&x.num).1) && r.is_unit(&loc.split(&x.den).1)
}

/// Whether `m ∈ GL_n(Z[T⁻¹])`.
pub fn in_gl_localized<R: EuclideanRing>(loc: &TLocalization<R>, m: &Matrix<FracOf<R>>) -> bool
where
    FracOf<R>: Ord,
{
    let r = &loc.frac.base;
    m.entries().iter().all(|x| r.is_unit(&loc.split(&x.den).1)) && is_t_unit(loc, &det(&loc.frac, m))
}

/// Whether `m ∈ GL_n(Z_T)`.
pub fn in_gl_away<R: EuclideanRing>(away: &AwayFromT<R>, m: &Matrix<FracOf<R>>) -> bool
where
    FracOf<R>: Ord,
{
    m.entries().iter().all(|x| away.contains(x)) && away.is_unit(&det(&away.frac, m))
}

/// Writes `A = B·C` with `B ∈ GL_n(Z[T⁻¹])` and `C ∈ GL_n(Z_T)`.
pub fn factorize<R: EuclideanRing>(
    loc: &TLocalization<R>,
    a: &Matrix<FracOf<R>>,
    mode: FactorMode,
) -> Result<(Matrix<FracOf<R>>, Matrix<FracOf<R>>), Error>
where
    FracOf<R>: Ord,
{
    let frac = &loc.frac;
    let ring = &frac.base;
    if !a.is_square() {
        return Err(Error::Dimension("matrix must be square".into()));
    }
    let n = a.rows();
    let da = det(frac, a);
    if frac.is_zero(&da) {
        return Err(Error::Singular);
    }
    if mode == FactorMode::Special && !frac.is_one(&da) {
        return Err(Error::Determinant(format!("determinant {} is not 1", frac.render(&da))));
    }
    let m = a.entries().iter().fold(ring.one(), |acc, x| ring.lcm(&acc, &x.den));
    let am = a.map(|x| ring.divide_exact(&ring.mul(&x.num, &m), &x.den).expect("lcm"));
    let snf = smith_normal_form(ring, &am);
    let mut t_part = Vec::with_capacity(n);
    let mut rest = Vec::with_capacity(n);
    for i in 0..n {
        let q = frac.make(snf.d.get(i, i).clone(), m.clone());
        let tp = frac.make(loc.split(&q.num).0, loc.split(&q.den).0);
        rest.push(frac.div(&q, &tp));
        t_part.push(tp);
    }
    let u = snf.u.map(|x| frac.from_base(x.clone()));
    let v = snf.v.map(|x| frac.from_base(x.clone()));
    let mut b = mat_mul(frac, &u, &crate::exactmath::matrix::diagonal(frac, &t_part));
    let mut c = mat_mul(frac, &crate::exactmath::matrix::diagonal(frac, &rest), &v);
    if mode == FactorMode::Special {
        // det B is a unit of the base ring; move it into C
        let db = det(frac, &b);
        let inv = frac.inv(&db);
        for r in 0..n {
            let x = frac.mul(b.get(r, 0), &inv);
            b.set(r, 0, x);
        }
        for j in 0..n {
            let x = frac.mul(c.get(0, j), &db);
            c.set(0, j, x);
        }
    }
    Ok((b, c))
}

/// Writes `A = B·C` with `B ∈ SL_n(Z[T⁻¹])` (or `GL_n`) and `C` in the
/// conjugate `P·SL_n(Z_T)·P⁻¹`. With `P = P′P″` factored as above, the
/// subgroup equals `P′·SL_n(Z_T)·P′⁻¹`, and `P′⁻¹AP′` is factored and
/// conjugated back by `P′`.
pub fn factorize_conjugated<R: EuclideanRing>(
    loc: &TLocalization<R>,
    a: &Matrix<FracOf<R>>,
    p: &Matrix<FracOf<R>>,
    mode: FactorMode,
) -> Result<(Matrix<FracOf<R>>, Matrix<FracOf<R>>), Error>
where
    FracOf<R>: Ord,
{
    let frac = &loc.frac;
    let (p1, _) = factorize(loc, p, FactorMode::General)?;
    let p1_inv = inverse(frac, &p1).ok_or(Error::Singular)?;
    let conj = mat_mul(frac, &mat_mul(frac, &p1_inv, a), &p1);
    let (b, c) = factorize(loc, &conj, mode)?;
    Ok((mat_mul(frac, &mat_mul(frac, &p1, &b), &p1_inv), mat_mul(frac, &mat_mul(frac, &p1, &c), &p1_inv)))
}
