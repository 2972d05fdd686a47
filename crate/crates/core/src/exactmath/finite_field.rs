//! Finite fields F_q: prime fields up to 2^16 and table-driven extension
//! fields with q ≤ 256.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::Error;

pub const MAX_PRIME: u32 = 1 << 16;
pub const MAX_EXTENSION_SIZE: u32 = 256;

struct ExtTables {
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
    neg: Vec<u8>,
}

/// Handle to a finite field. Elements are integers `0..q`; for extension
/// fields the base-`p` digits are the coefficients over the prime field.
#[derive(Clone, Copy)]
pub struct Fq {
    p: u32,
    e: u32,
    q: u32,
    ext: Option<&'static ExtTables>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

fn small_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Fq {
    pub fn new(q: u64) -> Result<Fq, Error> {
        let unsupported = || Error::UnsupportedField(q);
        if q < 2 {
            return Err(unsupported());
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q ≥ 2");
        let mut e = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(unsupported());
        }
        if e == 1 {
            if q > MAX_PRIME as u64 {
                return Err(unsupported());
            }
            return Ok(Fq { p: q as u32, e: 1, q: q as u32, ext: None });
        }
        if q > MAX_EXTENSION_SIZE as u64 {
            return Err(unsupported());
        }
        let (p, q) = (p as u32, q as u32);
        Ok(Fq { p, e, q, ext: Some(extension_tables(p, e)) })
    }

    pub fn prime(p: u32) -> Fq {
        assert!(small_prime(p) && p <= MAX_PRIME, "unsupported prime {p}");
        Fq { p, e: 1, q: p, ext: None }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Defining polynomial of an extension field, ascending coefficients.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.ext.map(|t| t.modulus.as_slice())
    }

    pub fn from_i64(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.ext {
            None => {
                let s = a + b;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            Some(t) => t.add[(a * self.q + b) as usize] as u32,
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.ext {
            None => {
                if a == 0 {
                    0
                } else {
                    self.p - a
                }
            }
            Some(t) => t.neg[a as usize] as u32,
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.ext {
            None => ((a as u64 * b as u64) % self.p as u64) as u32,
            Some(t) => t.mul[(a * self.q + b) as usize] as u32,
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in {self:?}");
        match self.ext {
            None => {
                // Fermat: a^(p-2)
                let mut acc = 1u64;
                let mut base = a as u64;
                let m = self.p as u64;
                let mut e = self.p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                acc as u32
            }
            Some(t) => t.inv[a as usize] as u32,
        }
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

fn registry() -> &'static Mutex<HashMap<u32, &'static ExtTables>> {
    static REG: OnceLock<Mutex<HashMap<u32, &'static ExtTables>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn extension_tables(p: u32, e: u32) -> &'static ExtTables {
    let q = p.pow(e);
    let mut reg = registry().lock().expect("field registry poisoned");
    if let Some(t) = reg.get(&q) {
        return t;
    }
    let t: &'static ExtTables = Box::leak(Box::new(build_tables(p, e)));
    reg.insert(q, t);
    t
}

fn digits(mut a: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic `m` over F_p (ascending coefficients).
fn poly_rem_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible_p(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    for d in 1..=e / 2 {
        for code in 0..p.pow(d as u32) {
            let mut f = digits(code, p, d as u32);
            f.push(1);
            if poly_rem_p(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn build_tables(p: u32, e: u32) -> ExtTables {
    let q = p.pow(e);
    let modulus = (0..q)
        .map(|code| {
            let mut m = digits(code, p, e);
            m.push(1);
            m
        })
        .find(|m| is_irreducible_p(m, p))
        .expect("irreducible polynomials exist in every degree");
    let n = q as usize;
    let mut add = vec![0u8; n * n];
    let mut mul = vec![0u8; n * n];
    let mut neg = vec![0u8; n];
    let mut inv = vec![0u8; n];
    for a in 0..q {
        let da = digits(a, p, e);
        neg[a as usize] = undigits(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p) as u8;
        for b in 0..q {
            let db = digits(b, p, e);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[(a * q + b) as usize] = undigits(&s, p) as u8;
            let mut prod = vec![0u32; 2 * e as usize - 1];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let r = poly_rem_p(&prod, &modulus, p);
            let v = undigits(&r, p);
            mul[(a * q + b) as usize] = v as u8;
            if v == 1 {
                inv[a as usize] = b as u8;
            }
        }
    }
    ExtTables { modulus, add, mul, inv, neg }
}

impl super::ring::Ring for Fq {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        Fq::add(self, *a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        Fq::sub(self, *a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        Fq::neg(self, *a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        Fq::mul(self, *a, *b)
    }
    fn from_i64(&self, k: i64) -> u32 {
        Fq::from_i64(self, k)
    }
    fn render(&self, a: &u32) -> String {
        a.to_string()
    }
}

impl super::ring::Field for Fq {
    fn inv(&self, a: &u32) -> u32 {
        Fq::inv(self, *a)
    }
    fn div(&self, a: &u32, b: &u32) -> u32 {
        Fq::div(self, *a, *b)
    }
}
