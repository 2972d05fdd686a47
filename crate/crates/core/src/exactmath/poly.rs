//! Polynomials over F_q and rational functions in F_q(t).

use std::cmp::Ordering;

use super::finite_field::Fq;
use super::fraction::{Frac, FractionField};
use super::ring::{EuclideanRing, Field, Ring};
use crate::Error;

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly(pub Vec<u32>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn from_coeffs(mut c: Vec<u32>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.0.get(k).copied().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FqPolyRing {
    pub field: Fq,
}

impl FqPolyRing {
    pub fn new(field: Fq) -> Self {
        FqPolyRing { field }
    }

    pub fn constant(&self, c: u32) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(&self, c: u32, k: usize) -> Poly {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    pub fn t(&self) -> Poly {
        self.monomial(1, 1)
    }

    pub fn scale(&self, a: &Poly, c: u32) -> Poly {
        let f = self.field;
        Poly::from_coeffs(a.0.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn shift(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&a.0);
        Poly(v)
    }

    /// Monic irreducible test by trial division.
    pub fn is_irreducible(&self, a: &Poly) -> bool {
        let Some(d) = a.degree() else { return false };
        if d == 0 {
            return false;
        }
        let q = self.field.size() as u64;
        for k in 1..=d / 2 {
            let count = q.pow(k as u32);
            for code in 0..count {
                let mut c = Vec::with_capacity(k + 1);
                let mut x = code;
                for _ in 0..k {
                    c.push((x % q) as u32);
                    x /= q;
                }
                c.push(1);
                if self.divides(&Poly(c), a) {
                    return false;
                }
            }
        }
        true
    }
}

impl Ring for FqPolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly(vec![1])
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let f = self.field;
        let n = a.0.len().max(b.0.len());
        Poly::from_coeffs((0..n).map(|i| f.add(a.coeff(i), b.coeff(i))).collect())
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let f = self.field;
        let n = a.0.len().max(b.0.len());
        Poly::from_coeffs((0..n).map(|i| f.sub(a.coeff(i), b.coeff(i))).collect())
    }
    fn neg(&self, a: &Poly) -> Poly {
        let f = self.field;
        Poly(a.0.iter().map(|&x| f.neg(x)).collect())
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = self.field;
        let mut out = vec![0u32; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }
    fn from_i64(&self, k: i64) -> Poly {
        self.constant(self.field.from_i64(k))
    }
    fn render(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (k, &c) in a.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && k > 0 { String::new() } else { c.to_string() };
            let var = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            terms.push(format!("{coef}{var}"));
        }
        terms.join("+")
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
}

impl EuclideanRing for FqPolyRing {
    type Size = usize;

    fn size(&self, a: &Poly) -> usize {
        a.degree().expect("size of zero polynomial")
    }

    fn div_rem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let f = self.field;
        let db = b.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(b.leading());
        let mut r = a.0.clone();
        if r.len() <= db {
            return (Poly::zero(), a.clone());
        }
        let mut q = vec![0u32; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + db], lead_inv);
            q[k] = c;
            if c != 0 {
                for (i, &bc) in b.0.iter().enumerate() {
                    r[k + i] = f.sub(r[k + i], f.mul(c, bc));
                }
            }
        }
        r.truncate(db);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    fn normalize(&self, a: &Poly) -> (Poly, Poly) {
        if a.is_zero() {
            return (Poly::zero(), self.one());
        }
        let lc = a.leading();
        (self.scale(a, self.field.inv(lc)), self.constant(lc))
    }

    fn unit_inverse(&self, u: &Poly) -> Poly {
        self.constant(self.field.inv(u.leading()))
    }
}

pub type RatFunc = Frac<Poly>;
pub type RatFuncField = FractionField<FqPolyRing>;

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num, &self.den).cmp(&(&other.num, &other.den))
    }
}

impl RatFuncField {
    pub fn over(field: Fq) -> Self {
        FractionField::new(FqPolyRing::new(field))
    }

    pub fn field(&self) -> Fq {
        self.base.field
    }

    /// Degree `deg num − deg den`; `None` for zero. Equals `−ν` for the
    /// degree valuation.
    pub fn degree(&self, x: &RatFunc) -> Option<i64> {
        Some(x.num.degree()? as i64 - x.den.degree().expect("nonzero denominator") as i64)
    }

    /// Degree valuation `deg den − deg num`; `None` means +∞.
    pub fn valuation(&self, x: &RatFunc) -> Option<i64> {
        self.degree(x).map(|d| -d)
    }

    pub fn t_pow(&self, k: i64) -> RatFunc {
        let m = self.base.monomial(1, k.unsigned_abs() as usize);
        if k >= 0 {
            self.from_base(m)
        } else {
            self.make(self.base.one(), m)
        }
    }

    pub fn constant(&self, c: u32) -> RatFunc {
        self.from_base(self.base.constant(c))
    }

    /// Polynomial part of the expansion at infinity.
    pub fn poly_part(&self, x: &RatFunc) -> Poly {
        self.base.div_rem(&x.num, &x.den).0
    }

    pub fn parse(&self, s: &str) -> Result<RatFunc, Error> {
        let mut p = ExprParser { src: s.as_bytes(), pos: 0, k: self };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!("trailing input in '{s}'")));
        }
        Ok(v)
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    k: &'a RatFuncField,
}

impl ExprParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at position {} in '{}'",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, Error> {
        let k = self.k;
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                k.neg(&self.term()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = k.add(&acc, &self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = k.sub(&acc, &self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, Error> {
        let k = self.k;
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = k.mul(&acc, &self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if k.is_zero(&d) {
                        return Err(Error::ZeroArgument("division by zero".into()));
                    }
                    acc = k.div(&acc, &d);
                }
                Some(c) if c == b't' || c == b'(' || c.is_ascii_digit() => {
                    acc = k.mul(&acc, &self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, Error> {
        let k = self.k;
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                v
            }
            Some(b't') => {
                self.pos += 1;
                k.t_pow(1)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let q = k.field().size() as u64;
                if n >= q {
                    return Err(self.err("field element out of range"));
                }
                k.constant(n as u32)
            }
            _ => return Err(self.err("expected factor")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ => false,
            };
            self.skip_ws();
            let e = self.integer()? as i64;
            if neg && k.is_zero(&base) {
                return Err(Error::ZeroArgument("negative power of zero".into()));
            }
            let p = k.pow(&base, e as u64);
            return Ok(if neg { k.inv(&p) } else { p });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, Error> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err("expected integer"))
    }
}
