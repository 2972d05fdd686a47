//! Exact scalar arithmetic and exact linear algebra over Euclidean rings.
//!
//! Rings are context values implementing [`Ring`]; their elements are plain
//! data. Instances: ℤ ([`Integers`]), F_q[t] ([`FqPolyRing`]), fraction
//! fields ([`FractionField`], giving ℚ and F_q(t)), and the subrings
//! ℤ_(p), the degree-valuation ring of F_q(t), and Z[T⁻¹].

pub mod finite_field;
pub mod fraction;
pub mod integers;
pub mod local;
pub mod logs;
pub mod matrix;
pub mod normal_form;
pub mod poly;
pub mod ring;

pub use finite_field::Fq;
pub use fraction::{Frac, FractionField, Rational, RationalField, QQ};
pub use integers::Integers;
pub use logs::LogRatio;
pub use local::{prime_part, AwayFromT, DegreeValuationRing, Dvr, LocalRing, PAdicIntegers, Subring, TLocalization};
pub use matrix::Matrix;
pub use normal_form::{smith_normal_form, Snf};
pub use poly::{FqPolyRing, Poly, RatFunc, RatFuncField};
pub use ring::{EuclideanRing, Field, Ring};

use num_bigint::BigInt;

/// A place of ℚ or of F_q(t) at which to evaluate a valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// A rational prime.
    Prime(BigInt),
    /// A monic irreducible polynomial of F_q[t].
    PolyPrime(Poly),
    /// The degree place `ν(p/q) = deg q − deg p` of F_q(t).
    Degree,
}

/// A scalar of ℚ or F_q(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rational(Rational),
    Function(RatFuncField, RatFunc),
}

/// Valuation of a scalar at a place; `Ok(None)` means +∞.
pub fn valuation(x: &Scalar, place: &Place) -> Result<Option<i64>, crate::Error> {
    use crate::Error::InvalidPlace;
    match (x, place) {
        (Scalar::Rational(q), Place::Prime(p)) => {
            if !integers::is_prime(p) {
                return Err(InvalidPlace(format!("{p} is not prime")));
            }
            Ok(q.valuation(p))
        }
        (Scalar::Function(k, f), Place::Degree) => Ok(k.valuation(f)),
        (Scalar::Function(k, f), Place::PolyPrime(p)) => {
            if !k.base.is_irreducible(p) || p.leading() != 1 {
                return Err(InvalidPlace(format!("{} is not a monic irreducible", k.base.render(p))));
            }
            Ok(k.valuation_at(f, p))
        }
        _ => Err(InvalidPlace("place does not belong to the scalar's field".into())),
    }
}
