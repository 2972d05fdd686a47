//! Fraction fields of Euclidean rings, with ℚ as the main instance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::integers::Integers;
use super::ring::{EuclideanRing, Field, Ring};
use crate::Error;

/// A reduced fraction `num/den` with normalized denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frac<E> {
    pub num: E,
    pub den: E,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FractionField<R> {
    pub base: R,
}

impl<R: EuclideanRing> FractionField<R> {
    pub fn new(base: R) -> Self {
        FractionField { base }
    }

    /// Builds `num/den` in lowest terms. Panics if `den` is zero.
    pub fn make(&self, num: R::Elem, den: R::Elem) -> Frac<R::Elem> {
        let r = &self.base;
        assert!(!r.is_zero(&den), "zero denominator");
        if r.is_zero(&num) {
            return Frac { num, den: r.one() };
        }
        let g = r.gcd(&num, &den);
        let num = r.divide_exact(&num, &g).expect("gcd divides");
        let den = r.divide_exact(&den, &g).expect("gcd divides");
        let (den, u) = r.normalize(&den);
        let ui = r.unit_inverse(&u);
        Frac { num: r.mul(&num, &ui), den }
    }

    pub fn from_base(&self, a: R::Elem) -> Frac<R::Elem> {
        Frac { num: a, den: self.base.one() }
    }

    pub fn is_integral(&self, x: &Frac<R::Elem>) -> bool {
        self.base.is_one(&x.den)
    }

    /// Valuation at a prime `p` of the base ring; `None` means +∞.
    pub fn valuation_at(&self, x: &Frac<R::Elem>, p: &R::Elem) -> Option<i64> {
        if self.base.is_zero(&x.num) {
            return None;
        }
        Some(multiplicity(&self.base, &x.num, p) as i64 - multiplicity(&self.base, &x.den, p) as i64)
    }
}

/// Exponent of `p` in the nonzero element `a`.
pub fn multiplicity<R: EuclideanRing>(r: &R, a: &R::Elem, p: &R::Elem) -> u64 {
    let mut a = a.clone();
    let mut k = 0;
    while let Some(q) = r.divide_exact(&a, p) {
        a = q;
        k += 1;
    }
    k
}

impl<R: EuclideanRing> Ring for FractionField<R>
where
    Frac<R::Elem>: Ord,
{
    type Elem = Frac<R::Elem>;

    fn zero(&self) -> Self::Elem {
        self.from_base(self.base.zero())
    }
    fn one(&self) -> Self::Elem {
        self.from_base(self.base.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.base;
        if r.is_one(&a.den) && r.is_one(&b.den) {
            return self.from_base(r.add(&a.num, &b.num));
        }
        let num = r.add(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den));
        self.make(num, r.mul(&a.den, &b.den))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Frac { num: self.base.neg(&a.num), den: a.den.clone() }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.base;
        if r.is_one(&a.den) && r.is_one(&b.den) {
            return self.from_base(r.mul(&a.num, &b.num));
        }
        self.make(r.mul(&a.num, &b.num), r.mul(&a.den, &b.den))
    }
    fn from_i64(&self, k: i64) -> Self::Elem {
        self.from_base(self.base.from_i64(k))
    }
    fn render(&self, a: &Self::Elem) -> String {
        let r = &self.base;
        if r.is_one(&a.den) {
            r.render(&a.num)
        } else {
            format!("{}/{}", wrap(r.render(&a.num)), wrap(r.render(&a.den)))
        }
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.num)
    }
}

fn wrap(s: String) -> String {
    if s.chars().skip(1).any(|c| c == '+' || c == '-') {
        format!("({s})")
    } else {
        s
    }
}

impl<R: EuclideanRing> Field for FractionField<R>
where
    Frac<R::Elem>: Ord,
{
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        assert!(!self.is_zero(a), "inverse of zero");
        self.make(a.den.clone(), a.num.clone())
    }
}

/// Exact rational number.
pub type Rational = Frac<BigInt>;
pub type RationalField = FractionField<Integers>;

pub const QQ: RationalField = FractionField { base: Integers };

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Rational {
        QQ.make(num, den)
    }

    pub fn from_ints(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn integer(k: impl Into<BigInt>) -> Rational {
        Frac { num: k.into(), den: BigInt::one() }
    }

    pub fn zero() -> Rational {
        Rational::integer(0)
    }

    pub fn one() -> Rational {
        Rational::integer(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Rational {
        Frac { num: self.num.abs(), den: self.den.clone() }
    }

    pub fn recip(&self) -> Rational {
        QQ.inv(self)
    }

    pub fn pow(&self, e: i64) -> Rational {
        let p = QQ.pow(self, e.unsigned_abs());
        if e < 0 {
            p.recip()
        } else {
            p
        }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.den))
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    /// p-adic valuation; `None` means +∞.
    pub fn valuation(&self, p: &BigInt) -> Option<i64> {
        QQ.valuation_at(self, p)
    }

    pub fn to_f64(&self) -> f64 {
        let (n, d) = (&self.num, &self.den);
        match (n.to_f64(), d.to_f64()) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
            _ => {
                let shift = n.bits().max(d.bits()) as i64 - 60;
                let (n2, d2) = (n >> shift.max(0) as usize, d >> shift.max(0) as usize);
                n2.to_f64().unwrap_or(f64::NAN) / d2.to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    /// Natural logarithm of a positive rational, accurate for huge operands.
    pub fn ln(&self) -> f64 {
        assert!(self.is_positive(), "log of non-positive rational");
        ln_bigint(&self.num) - ln_bigint(&self.den)
    }

    /// Exact rational value of a finite float.
    pub fn from_f64(x: f64) -> Option<Rational> {
        if !x.is_finite() {
            return None;
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant) * sign;
        Some(if e >= 0 {
            Rational::integer(m << e as usize)
        } else {
            Rational::new(m, BigInt::one() << (-e) as usize)
        })
    }
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift as usize).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("invalid rational '{s}'")))
        };
        match s.split_once('/') {
            Some((a, b)) => {
                let d = parse(b)?;
                if d.is_zero() {
                    return Err(Error::ZeroArgument(format!("zero denominator in '{s}'")));
                }
                Ok(Rational::new(parse(a)?, d))
            }
            None => Ok(Rational::integer(parse(s)?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(k: i64) -> Rational {
        Rational::integer(k)
    }
}

impl From<BigInt> for Rational {
    fn from(k: BigInt) -> Rational {
        Rational::integer(k)
    }
}

macro_rules! rational_binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                $f(self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                $f(&self, rhs)
            }
        }
    };
}

rational_binop!(Add, add, |a: &Rational, b: &Rational| QQ.add(a, b));
rational_binop!(Sub, sub, |a: &Rational, b: &Rational| QQ.sub(a, b));
rational_binop!(Mul, mul, |a: &Rational, b: &Rational| QQ.mul(a, b));
rational_binop!(Div, div, |a: &Rational, b: &Rational| QQ.div(a, b));

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        QQ.neg(&self)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        QQ.neg(self)
    }
}
