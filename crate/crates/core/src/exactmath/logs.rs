//! Exact numbers of the form `ln(a)/d` with `a` a positive rational.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::fraction::Rational;

/// The real number `ln(ratio) / divisor`.
#[derive(Clone, Debug)]
pub struct LogRatio {
    ratio: Rational,
    divisor: u64,
}

impl LogRatio {
    pub fn new(ratio: Rational, divisor: u64) -> LogRatio {
        assert!(ratio.is_positive(), "logarithm of a non-positive rational");
        assert!(divisor > 0, "zero divisor");
        if ratio == Rational::one() {
            return LogRatio::zero();
        }
        LogRatio { ratio, divisor }
    }

    pub fn zero() -> LogRatio {
        LogRatio { ratio: Rational::one(), divisor: 1 }
    }

    /// `ln(x)` for a positive rational `x`.
    pub fn ln(x: Rational) -> LogRatio {
        LogRatio::new(x, 1)
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn divisor(&self) -> u64 {
        self.divisor
    }

    pub fn is_zero(&self) -> bool {
        self.ratio == Rational::one()
    }

    pub fn is_positive(&self) -> bool {
        self.ratio > Rational::one()
    }

    pub fn is_negative(&self) -> bool {
        self.ratio < Rational::one()
    }

    pub fn neg(&self) -> LogRatio {
        LogRatio::new(self.ratio.recip(), self.divisor)
    }

    pub fn sub(&self, other: &LogRatio) -> LogRatio {
        let g = self.divisor.gcd(&other.divisor);
        let (a, b) = (other.divisor / g, self.divisor / g);
        let r = self.ratio.pow(a as i64) / other.ratio.pow(b as i64);
        LogRatio::new(r, self.divisor / g * other.divisor)
    }

    pub fn add(&self, other: &LogRatio) -> LogRatio {
        self.sub(&other.neg())
    }

    /// Multiplies by the rational `k/m` (`k` may be negative).
    pub fn scale(&self, k: i64, m: u64) -> LogRatio {
        if k == 0 {
            return LogRatio::zero();
        }
        LogRatio::new(self.ratio.pow(k), self.divisor * m)
    }

    pub fn abs(&self) -> LogRatio {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.ratio.ln() / self.divisor as f64
    }

    /// Exact comparison with a rational number. For `θ ≠ 0` the value
    /// `exp(divisor·θ)` is irrational, so refining Taylor bounds terminates.
    pub fn cmp_rational(&self, theta: &Rational) -> Ordering {
        if theta.is_zero() {
            return self.ratio.cmp(&Rational::one());
        }
        let y = theta * &Rational::from(self.divisor as i64);
        let (a, y, flip) = if y.is_negative() { (self.ratio.recip(), -y, true) } else { (self.ratio.clone(), y, false) };
        let mut terms = 2 * y.ceil().to_u64().unwrap_or(u64::MAX / 4) + 8;
        loop {
            let (lo, hi) = exp_bounds(&y, terms);
            let ord = if a < lo {
                Ordering::Less
            } else if a > hi {
                Ordering::Greater
            } else {
                terms *= 2;
                continue;
            };
            return if flip { ord.reverse() } else { ord };
        }
    }

    /// `exp(d·value)` as an exact rational when `divisor | d`.
    pub fn exp_multiple(&self, d: u64) -> Option<Rational> {
        d.is_multiple_of(self.divisor).then(|| self.ratio.pow((d / self.divisor) as i64))
    }
}

/// Rational bounds `lo < exp(y) < hi` for `y > 0` from `terms + 1` Taylor
/// terms; requires `terms + 2 > 2y`.
fn exp_bounds(y: &Rational, terms: u64) -> (Rational, Rational) {
    let mut sum = Rational::one();
    let mut term = Rational::one();
    for j in 1..=terms {
        term = &(&term * y) / &Rational::from(j as i64);
        sum = &sum + &term;
    }
    let next = &(&term * y) / &Rational::from((terms + 1) as i64);
    // geometric bound on the tail, ratio y/(terms + 2) ≤ 1/2
    let hi = &sum + &(&next * &Rational::from(2));
    (sum, hi)
}

impl PartialEq for LogRatio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LogRatio {}

impl PartialOrd for LogRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        let g = self.divisor.gcd(&other.divisor);
        let lhs = self.ratio.pow((other.divisor / g) as i64);
        let rhs = other.ratio.pow((self.divisor / g) as i64);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for LogRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.divisor == 1 {
            write!(f, "ln({})", self.ratio)
        } else {
            write!(f, "ln({})/{}", self.ratio, self.divisor)
        }
    }
}
