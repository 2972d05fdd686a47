//! Subrings of fraction fields: localizations at a prime, localizations
//! inverting a finite prime set, and the degree-valuation ring of F_q(t).
//! Elements are fractions; all ring operations are those of the field.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::finite_field::Fq;
use super::fraction::{multiplicity, Frac, FractionField};
use super::integers::Integers;
use super::poly::{FqPolyRing, Poly, RatFuncField};
use super::ring::{EuclideanRing, Field, Ring};

/// A subring of a fraction field, sharing its element type.
pub trait Subring: EuclideanRing {
    type Base: EuclideanRing;

    fn fraction_field(&self) -> &FractionField<Self::Base>;

    fn contains(&self, x: &Self::Elem) -> bool;

    fn inv_in_field(&self, x: &Self::Elem) -> Self::Elem;
}

/// A discrete valuation ring with finite residue field.
pub trait Dvr: Subring {
    /// Valuation of a field element; `None` means +∞.
    fn valuation(&self, x: &Self::Elem) -> Option<i64>;
    fn uniformizer_pow(&self, k: i64) -> Self::Elem;
    fn residue_field(&self) -> Fq;
    fn lift_residue(&self, c: u32) -> Self::Elem;
    fn residue(&self, x: &Self::Elem) -> u32;
}

macro_rules! delegate_ring {
    ($frac:ident) => {
        fn zero(&self) -> Self::Elem {
            self.$frac.zero()
        }
        fn one(&self) -> Self::Elem {
            self.$frac.one()
        }
        fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
            self.$frac.add(a, b)
        }
        fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
            self.$frac.sub(a, b)
        }
        fn neg(&self, a: &Self::Elem) -> Self::Elem {
            self.$frac.neg(a)
        }
        fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
            self.$frac.mul(a, b)
        }
        fn from_i64(&self, k: i64) -> Self::Elem {
            self.$frac.from_i64(k)
        }
        fn render(&self, a: &Self::Elem) -> String {
            self.$frac.render(a)
        }
        fn is_zero(&self, a: &Self::Elem) -> bool {
            self.$frac.is_zero(a)
        }
    };
}

/// Residue of `num/den` modulo `m` in the base ring, for `den` coprime to `m`.
fn residue_mod<R: EuclideanRing>(r: &R, num: &R::Elem, den: &R::Elem, m: &R::Elem) -> R::Elem {
    let (_, x, _) = r.ext_gcd(den, m);
    r.div_rem(&r.mul(num, &x), m).1
}

/// The localization of a Euclidean ring at a prime element.
#[derive(Clone, Debug)]
pub struct LocalRing<R: EuclideanRing> {
    pub frac: FractionField<R>,
    pub prime: R::Elem,
}

impl<R: EuclideanRing> LocalRing<R> {
    pub fn new(base: R, prime: R::Elem) -> Self {
        let prime = base.normalize(&prime).0;
        LocalRing { frac: FractionField::new(base), prime }
    }

    fn val(&self, x: &Frac<R::Elem>) -> Option<i64> {
        self.frac.valuation_at(x, &self.prime)
    }
}

impl<R: EuclideanRing> Ring for LocalRing<R>
where
    Frac<R::Elem>: Ord,
{
    type Elem = Frac<R::Elem>;
    delegate_ring!(frac);
}

impl<R: EuclideanRing> EuclideanRing for LocalRing<R>
where
    Frac<R::Elem>: Ord,
{
    type Size = i64;

    fn size(&self, a: &Self::Elem) -> i64 {
        self.val(a).expect("size of zero")
    }

    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        let k = self.val(b).expect("division by zero");
        match self.val(a) {
            None => (self.zero(), self.zero()),
            Some(v) if v >= k => (self.frac.div(a, b), self.zero()),
            Some(_) => {
                let base = &self.frac.base;
                let m = base.pow(&self.prime, k as u64);
                let r = self.frac.from_base(residue_mod(base, &a.num, &a.den, &m));
                let q = self.frac.div(&self.frac.sub(a, &r), b);
                (q, r)
            }
        }
    }

    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        match self.val(a) {
            None => (self.zero(), self.one()),
            Some(v) => {
                let pk = self.frac.from_base(self.frac.base.pow(&self.prime, v as u64));
                let u = self.frac.div(a, &pk);
                (pk, u)
            }
        }
    }

    fn unit_inverse(&self, u: &Self::Elem) -> Self::Elem {
        self.frac.inv(u)
    }
}

impl<R: EuclideanRing> Subring for LocalRing<R>
where
    Frac<R::Elem>: Ord,
{
    type Base = R;

    fn fraction_field(&self) -> &FractionField<R> {
        &self.frac
    }

    fn contains(&self, x: &Self::Elem) -> bool {
        multiplicity(&self.frac.base, &x.den, &self.prime) == 0
    }

    fn inv_in_field(&self, x: &Self::Elem) -> Self::Elem {
        self.frac.inv(x)
    }
}

/// ℤ localized at a prime `p`.
pub type PAdicIntegers = LocalRing<Integers>;

impl PAdicIntegers {
    pub fn at(p: u32) -> Self {
        LocalRing::new(Integers, BigInt::from(p))
    }

    fn p_u32(&self) -> u32 {
        self.prime.to_u32().expect("residue prime fits in u32")
    }
}

impl Dvr for PAdicIntegers {
    fn valuation(&self, x: &Self::Elem) -> Option<i64> {
        self.val(x)
    }

    fn uniformizer_pow(&self, k: i64) -> Self::Elem {
        let pk = self.frac.from_base(self.prime.pow(k.unsigned_abs() as u32));
        if k >= 0 {
            pk
        } else {
            self.frac.inv(&pk)
        }
    }

    fn residue_field(&self) -> Fq {
        Fq::prime(self.p_u32())
    }

    fn lift_residue(&self, c: u32) -> Self::Elem {
        self.frac.from_i64(c as i64)
    }

    fn residue(&self, x: &Self::Elem) -> u32 {
        let r = residue_mod(&Integers, &x.num, &x.den, &self.prime);
        r.to_u32().expect("residue is small")
    }
}

/// The valuation ring `R = {x : deg x ≤ 0}` of the degree valuation on
/// F_q(t); uniformizer `1/t`.
#[derive(Clone, Debug)]
pub struct DegreeValuationRing {
    pub frac: RatFuncField,
}

impl DegreeValuationRing {
    pub fn new(field: Fq) -> Self {
        DegreeValuationRing { frac: RatFuncField::over(field) }
    }
}

impl Ring for DegreeValuationRing {
    type Elem = Frac<Poly>;
    delegate_ring!(frac);
}

impl EuclideanRing for DegreeValuationRing {
    type Size = i64;

    fn size(&self, a: &Self::Elem) -> i64 {
        self.frac.valuation(a).expect("size of zero")
    }

    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        let k = self.frac.valuation(b).expect("division by zero");
        match self.frac.valuation(a) {
            None => (self.zero(), self.zero()),
            Some(v) if v >= k => (self.frac.div(a, b), self.zero()),
            Some(_) => {
                let tk = self.frac.t_pow(k - 1);
                let head = self.frac.poly_part(&self.frac.mul(a, &tk));
                let r = self.frac.div(&self.frac.from_base(head), &tk);
                let q = self.frac.div(&self.frac.sub(a, &r), b);
                (q, r)
            }
        }
    }

    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        match self.frac.valuation(a) {
            None => (self.zero(), self.one()),
            Some(v) => {
                let pk = self.frac.t_pow(-v);
                let u = self.frac.div(a, &pk);
                (pk, u)
            }
        }
    }

    fn unit_inverse(&self, u: &Self::Elem) -> Self::Elem {
        self.frac.inv(u)
    }
}

impl Subring for DegreeValuationRing {
    type Base = FqPolyRing;

    fn fraction_field(&self) -> &RatFuncField {
        &self.frac
    }

    fn contains(&self, x: &Self::Elem) -> bool {
        self.frac.valuation(x).is_none_or(|v| v >= 0)
    }

    fn inv_in_field(&self, x: &Self::Elem) -> Self::Elem {
        self.frac.inv(x)
    }
}

impl Dvr for DegreeValuationRing {
    fn valuation(&self, x: &Self::Elem) -> Option<i64> {
        self.frac.valuation(x)
    }

    fn uniformizer_pow(&self, k: i64) -> Self::Elem {
        self.frac.t_pow(-k)
    }

    fn residue_field(&self) -> Fq {
        self.frac.field()
    }

    fn lift_residue(&self, c: u32) -> Self::Elem {
        self.frac.constant(c)
    }

    fn residue(&self, x: &Self::Elem) -> u32 {
        let (d_num, d_den) = (x.num.degree(), x.den.degree().expect("nonzero"));
        match d_num {
            Some(d) if d == d_den => {
                let f = self.frac.field();
                f.div(x.num.leading(), x.den.leading())
            }
            _ => 0,
        }
    }
}

/// `Z[T⁻¹]`: a Euclidean ring with the primes of a finite set inverted.
#[derive(Clone, Debug)]
pub struct TLocalization<R: EuclideanRing> {
    pub frac: FractionField<R>,
    pub primes: Vec<R::Elem>,
}

impl<R: EuclideanRing> TLocalization<R> {
    pub fn new(base: R, primes: Vec<R::Elem>) -> Self {
        let primes = primes.iter().map(|p| base.normalize(p).0).collect();
        TLocalization { frac: FractionField::new(base), primes }
    }

    /// Splits a nonzero base element into its normalized `T`-part
    /// (with multiplicity) and the remaining cofactor.
    pub fn split(&self, x: &R::Elem) -> (R::Elem, R::Elem) {
        let r = &self.frac.base;
        let mut rest = x.clone();
        let mut tpart = r.one();
        if r.is_zero(x) {
            return (tpart, rest);
        }
        for p in &self.primes {
            while let Some(q) = r.divide_exact(&rest, p) {
                rest = q;
                tpart = r.mul(&tpart, p);
            }
        }
        (tpart, rest)
    }

    fn prime_to_t(&self, x: &R::Elem) -> R::Elem {
        self.frac.base.normalize(&self.split(x).1).0
    }
}

impl<R: EuclideanRing> Ring for TLocalization<R>
where
    Frac<R::Elem>: Ord,
{
    type Elem = Frac<R::Elem>;
    delegate_ring!(frac);
}

impl<R: EuclideanRing> EuclideanRing for TLocalization<R>
where
    Frac<R::Elem>: Ord,
{
    type Size = R::Size;

    fn size(&self, a: &Self::Elem) -> R::Size {
        self.frac.base.size(&self.prime_to_t(&a.num))
    }

    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem) {
        let base = &self.frac.base;
        let b0 = self.prime_to_t(&b.num);
        if base.is_one(&b0) || self.is_zero(a) {
            return (self.frac.div(a, b), self.zero());
        }
        let r = self.frac.from_base(residue_mod(base, &a.num, &a.den, &b0));
        let q = self.frac.div(&self.frac.sub(a, &r), b);
        (q, r)
    }

    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem) {
        if self.is_zero(a) {
            return (self.zero(), self.one());
        }
        let n = self.frac.from_base(self.prime_to_t(&a.num));
        let u = self.frac.div(a, &n);
        (n, u)
    }

    fn unit_inverse(&self, u: &Self::Elem) -> Self::Elem {
        self.frac.inv(u)
    }
}

impl<R: EuclideanRing> Subring for TLocalization<R>
where
    Frac<R::Elem>: Ord,
{
    type Base = R;

    fn fraction_field(&self) -> &FractionField<R> {
        &self.frac
    }

    fn contains(&self, x: &Self::Elem) -> bool {
        self.frac.base.is_unit(&self.split(&x.den).1)
    }

    fn inv_in_field(&self, x: &Self::Elem) -> Self::Elem {
        self.frac.inv(x)
    }
}

/// `Z_T`: the localization inverting every prime outside `T`
/// (membership only; elements have denominators coprime to `T`).
#[derive(Clone, Debug)]
pub struct AwayFromT<R: EuclideanRing> {
    pub frac: FractionField<R>,
    pub primes: Vec<R::Elem>,
}

impl<R: EuclideanRing> AwayFromT<R> {
    pub fn new(base: R, primes: Vec<R::Elem>) -> Self {
        AwayFromT { frac: FractionField::new(base), primes }
    }

    pub fn contains(&self, x: &Frac<R::Elem>) -> bool {
        self.primes.iter().all(|p| multiplicity(&self.frac.base, &x.den, p) == 0)
    }

    pub fn is_unit(&self, x: &Frac<R::Elem>) -> bool {
        !self.frac.base.is_zero(&x.num)
            && self.primes.iter().all(|p| {
                multiplicity(&self.frac.base, &x.den, p) == 0 && multiplicity(&self.frac.base, &x.num, p) == 0
            })
    }
}

/// The `T`-primary part of `z`, with multiplicity, normalized.
pub fn prime_part<R: EuclideanRing>(ring: &R, z: &R::Elem, primes: &[R::Elem]) -> Result<R::Elem, crate::Error> {
    if ring.is_zero(z) {
        return Err(crate::Error::ZeroArgument("prime part of zero".into()));
    }
    let mut rest = z.clone();
    let mut out = ring.one();
    for p in primes {
        let p = ring.normalize(p).0;
        while let Some(q) = ring.divide_exact(&rest, &p) {
            rest = q;
            out = ring.mul(&out, &p);
        }
    }
    Ok(out)
}
