//! Ring traits. Rings are context objects; elements are plain values.

use std::fmt::Debug;
use std::hash::Hash;

pub trait Ring: Clone + Debug {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, k: i64) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// A Euclidean domain whose remainders are canonical residues, so that
/// reduction modulo a normalized pivot yields a unique representative.
pub trait EuclideanRing: Ring {
    type Size: Ord + Clone + Debug;

    /// Euclidean size of a nonzero element.
    fn size(&self, a: &Self::Elem) -> Self::Size;

    /// `a = q*b + r` with `r` zero or smaller than `b`; `r` depends only on
    /// the class of `a` modulo `b`.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// Splits `a = unit * normal`; for zero returns `(0, 1)`.
    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem);

    fn unit_inverse(&self, u: &Self::Elem) -> Self::Elem;

    fn is_unit(&self, a: &Self::Elem) -> bool {
        !self.is_zero(a) && self.is_one(&self.normalize(a).0)
    }

    fn divide_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(b) {
            return None;
        }
        let (q, r) = self.div_rem(a, b);
        self.is_zero(&r).then_some(q)
    }

    fn divides(&self, b: &Self::Elem, a: &Self::Elem) -> bool {
        if self.is_zero(b) {
            return self.is_zero(a);
        }
        self.is_zero(&self.div_rem(a, b).1)
    }

    /// Returns `(g, x, y)` with `x*a + y*b = g` and `g` normalized.
    fn ext_gcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut x0, mut x1) = (self.one(), self.zero());
        let (mut y0, mut y1) = (self.zero(), self.one());
        while !self.is_zero(&r1) {
            let (q, r) = self.div_rem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let nx = self.sub(&x0, &self.mul(&q, &x1));
            x0 = std::mem::replace(&mut x1, nx);
            let ny = self.sub(&y0, &self.mul(&q, &y1));
            y0 = std::mem::replace(&mut y1, ny);
        }
        let (g, u) = self.normalize(&r0);
        let ui = self.unit_inverse(&u);
        (g, self.mul(&x0, &ui), self.mul(&y0, &ui))
    }

    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !self.is_zero(&b) {
            let r = self.div_rem(&a, &b).1;
            a = std::mem::replace(&mut b, r);
        }
        self.normalize(&a).0
    }

    fn lcm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if self.is_zero(a) || self.is_zero(b) {
            return self.zero();
        }
        let g = self.gcd(a, b);
        let q = self.divide_exact(a, &g).expect("gcd divides");
        self.normalize(&self.mul(&q, b)).0
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}
