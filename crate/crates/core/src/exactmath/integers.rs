//! The ring of rational integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ring::{EuclideanRing, Ring};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_i64(&self, k: i64) -> BigInt {
        BigInt::from(k)
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

impl EuclideanRing for Integers {
    type Size = BigInt;

    fn size(&self, a: &BigInt) -> BigInt {
        a.abs()
    }

    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let m = b.abs();
        let r = a.mod_floor(&m);
        let q = (a - &r) / b;
        (q, r)
    }

    fn normalize(&self, a: &BigInt) -> (BigInt, BigInt) {
        if a.is_negative() {
            (-a, -BigInt::one())
        } else {
            (a.clone(), BigInt::one())
        }
    }

    fn unit_inverse(&self, u: &BigInt) -> BigInt {
        u.clone()
    }

    fn gcd(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a.gcd(b)
    }
}

/// Trial-division primality test.
pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    let two = BigInt::from(2);
    if n.is_multiple_of(&two) {
        return *n == two;
    }
    let mut d = BigInt::from(3);
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    n.sqrt()
}
