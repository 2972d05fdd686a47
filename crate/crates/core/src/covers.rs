//! Cover systems `{x : c_W(x) > θ}` indexed by nontrivial summands, their
//! membership and core tests, and the orbit representatives of core
//! vertices.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::building::{adjacent, BuildingContext, DegreeBuilding, Vertex};
use crate::exactmath::matrix::{mat_mul, Matrix};
use crate::exactmath::{DegreeValuationRing, FqPolyRing, Integers, LogRatio, Poly, RatFunc, Rational, QQ};
use crate::latff::{diagonal_basis, ff_c_value, ff_invariants_and_filtration, FFSummand, VolumeSpace};
use crate::latz::{c_value_z, canonical_filtration_z, InnerProduct, ZSummand};
use crate::sarith::{intersect_integral, loc_c_ff, loc_c_z, transport_ff, transport_z, IntegralStructure, LocSummand};
use crate::Error;

/// Largest rank for orbit-representative enumeration.
pub const MAX_REPS_RANK: usize = 6;
/// Largest threshold for orbit-representative enumeration.
pub const MAX_REPS_THRESHOLD: u32 = 16;

/// A point of the space acted on.
#[derive(Clone, Debug)]
pub enum CoverPoint {
    /// An inner product on `Rⁿ`.
    Z(InnerProduct),
    /// A point `Σ λᵢ vᵢ` of a simplex of the degree-valuation building.
    Building { ctx: DegreeBuilding, vertices: Vec<Vertex<RatFunc>>, coeffs: Vec<Rational> },
    /// An inner product paired with an integral structure.
    LocalizedZ { s: InnerProduct, b: IntegralStructure<Integers> },
    /// A building vertex paired with an integral structure.
    LocalizedBuilding { ctx: DegreeBuilding, vertex: Vertex<RatFunc>, b: IntegralStructure<FqPolyRing> },
}

/// A nontrivial direct summand indexing a cover set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverSummand {
    Z(ZSummand),
    FF(FFSummand),
    LocalizedZ(LocSummand<BigInt>),
    LocalizedFF(LocSummand<Poly>),
}

impl CoverSummand {
    pub fn rank(&self) -> usize {
        match self {
            CoverSummand::Z(w) => w.rank(),
            CoverSummand::FF(w) => w.rank(),
            CoverSummand::LocalizedZ(w) => w.rank(),
            CoverSummand::LocalizedFF(w) => w.rank(),
        }
    }
}

/// An exact instability number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CValue {
    Log(LogRatio),
    Exact(Rational),
}

impl CValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            CValue::Log(l) => l.to_f64(),
            CValue::Exact(q) => q.to_f64(),
        }
    }
}

/// Threshold `θ = rational + logarithmic`; the logarithmic part is zero
/// except for localized `ℤ` systems.
#[derive(Clone, Debug)]
pub struct CoverSystem {
    pub rational: Rational,
    pub logarithmic: LogRatio,
}

impl CoverSystem {
    pub fn new(theta: Rational) -> Result<Self, Error> {
        if theta.is_negative() {
            return Err(Error::OutOfRange("threshold must be nonnegative".into()));
        }
        Ok(CoverSystem { rational: theta, logarithmic: LogRatio::zero() })
    }

    /// `θ = 0`, for the symmetric space of inner products.
    pub fn symmetric_space() -> Self {
        CoverSystem { rational: Rational::zero(), logarithmic: LogRatio::zero() }
    }

    /// `θ = 4n`, for the building of `F_q(t)`.
    pub fn building(n: usize) -> Self {
        CoverSystem { rational: Rational::from(4 * n as i64), logarithmic: LogRatio::zero() }
    }

    /// `θ = 4n(ln(∏ s) + 1)`.
    pub fn localized_z(n: usize, primes: &[BigInt]) -> Result<Self, Error> {
        let z: BigInt = primes.iter().product();
        if z <= BigInt::from(0) {
            return Err(Error::OutOfRange("primes must be positive".into()));
        }
        let k = 4 * n as i64;
        Ok(CoverSystem { rational: Rational::from(k), logarithmic: LogRatio::ln(Rational::integer(z)).scale(k, 1) })
    }

    /// `θ = 4n(−ν(∏ s) + 1) = 4n(Σ deg s + 1)`.
    pub fn localized_ff(n: usize, primes: &[Poly]) -> Self {
        let deg: usize = primes.iter().map(|p| p.degree().unwrap_or(0)).sum();
        CoverSystem { rational: Rational::from((4 * n * (deg + 1)) as i64), logarithmic: LogRatio::zero() }
    }

    /// `θ + δ`.
    pub fn raised(&self, delta: &Rational) -> Result<Self, Error> {
        let rational = &self.rational + delta;
        if rational.is_negative() && self.logarithmic.is_zero() {
            return Err(Error::OutOfRange("threshold must be nonnegative".into()));
        }
        Ok(CoverSystem { rational, logarithmic: self.logarithmic.clone() })
    }

    /// Whether `c > θ`, exactly.
    pub fn exceeded_by(&self, c: &CValue) -> bool {
        match c {
            CValue::Log(l) => l.sub(&self.logarithmic).cmp_rational(&self.rational) == Ordering::Greater,
            CValue::Exact(q) => {
                if self.logarithmic.is_zero() {
                    *q > self.rational
                } else {
                    LogRatio::zero().sub(&self.logarithmic).cmp_rational(&(&self.rational - q)) == Ordering::Greater
                }
            }
        }
    }
}

/// The volume space `(F_q[t]ⁿ, S)` of a building vertex.
pub fn vertex_volume_space(ctx: &DegreeBuilding, v: &Vertex<RatFunc>) -> Result<VolumeSpace, Error> {
    VolumeSpace::new(ctx.ring.frac.clone(), v.basis().clone())
}

fn check_simplex(ctx: &DegreeBuilding, vertices: &[Vertex<RatFunc>], coeffs: &[Rational]) -> Result<(), Error> {
    if vertices.is_empty() || vertices.len() != coeffs.len() {
        return Err(Error::Dimension("a simplex point needs one coefficient per vertex".into()));
    }
    if coeffs.iter().any(|c| !c.is_positive()) || coeffs.iter().fold(Rational::zero(), |a, c| &a + c) != Rational::one() {
        return Err(Error::OutOfRange("convex coefficients must be positive and sum to 1".into()));
    }
    for (i, v) in vertices.iter().enumerate() {
        if vertices[..i].iter().any(|w| !adjacent(ctx, v, w)) {
            return Err(Error::OutOfRange("simplex vertices must be pairwise adjacent".into()));
        }
    }
    Ok(())
}

/// `c_W(x)` for an arbitrary proper nonzero summand of the matching kind.
pub fn c_at(x: &CoverPoint, w: &CoverSummand) -> Result<CValue, Error> {
    let mismatch = || Error::Dimension("summand does not match the point".into());
    match (x, w) {
        (CoverPoint::Z(s), CoverSummand::Z(w)) => Ok(CValue::Log(c_value_z(s, w)?)),
        (CoverPoint::Building { ctx, vertices, coeffs }, CoverSummand::FF(w)) => {
            check_simplex(ctx, vertices, coeffs)?;
            let mut total = Rational::zero();
            for (v, lambda) in vertices.iter().zip(coeffs) {
                let c = ff_c_value(&vertex_volume_space(ctx, v)?, w)?;
                total = &total + &(lambda * &Rational::from(c));
            }
            Ok(CValue::Exact(total))
        }
        (CoverPoint::LocalizedZ { s, b }, CoverSummand::LocalizedZ(w)) => Ok(CValue::Log(loc_c_z(s, w, b)?)),
        (CoverPoint::LocalizedBuilding { ctx, vertex, b }, CoverSummand::LocalizedFF(w)) => {
            Ok(CValue::Exact(Rational::from(loc_c_ff(&vertex_volume_space(ctx, vertex)?, w, b)?)))
        }
        _ => Err(mismatch()),
    }
}

/// Summands of the canonical filtration at `x` (at each vertex of a
/// simplex) with their c-values; every summand with `c_W(x) > 0` is among
/// them.
fn positive_candidates(x: &CoverPoint) -> Result<Vec<(CoverSummand, CValue)>, Error> {
    match x {
        CoverPoint::Z(s) => Ok(canonical_filtration_z(s)?
            .c_values
            .into_iter()
            .map(|(w, c)| (CoverSummand::Z(w), CValue::Log(c)))
            .collect()),
        CoverPoint::Building { ctx, vertices, coeffs } => {
            check_simplex(ctx, vertices, coeffs)?;
            if vertices.len() == 1 {
                let (_, report) = ff_invariants_and_filtration(&vertex_volume_space(ctx, &vertices[0])?);
                return Ok(report.c_values.into_iter().map(|(w, c)| (CoverSummand::FF(w), CValue::Exact(c))).collect());
            }
            let mut out: Vec<CoverSummand> = Vec::new();
            for v in vertices {
                let (_, report) = ff_invariants_and_filtration(&vertex_volume_space(ctx, v)?);
                for (w, _) in report.c_values {
                    let w = CoverSummand::FF(w);
                    if !out.contains(&w) {
                        out.push(w);
                    }
                }
            }
            out.into_iter().map(|w| Ok((w.clone(), c_at(x, &w)?))).collect()
        }
        CoverPoint::LocalizedZ { s, b } => {
            let n = b.n();
            let (s2, _) = transport_z(s, &LocSummand::full(&Integers, n), b)?;
            let lattice = intersect_integral(&LocSummand::full(&Integers, n), b)?;
            let report = canonical_filtration_z(&s2)?;
            Ok(report
                .c_values
                .into_iter()
                .map(|(w, c)| {
                    let rows = mat_mul(&QQ, &w.rational_basis(), &lattice);
                    (CoverSummand::LocalizedZ(LocSummand::span(&QQ, &rows)), CValue::Log(c))
                })
                .collect())
        }
        CoverPoint::LocalizedBuilding { ctx, vertex, b } => {
            let n = b.n();
            let k = &ctx.ring.frac;
            let vs = vertex_volume_space(ctx, vertex)?;
            let (vs2, _) = transport_ff(&vs, &LocSummand::full(&k.base, n), b)?;
            let lattice = intersect_integral(&LocSummand::full(&k.base, n), b)?;
            let (_, report) = ff_invariants_and_filtration(&vs2);
            Ok(report
                .c_values
                .into_iter()
                .map(|(w, c)| {
                    let rows = mat_mul(k, &w.basis().map(|p| k.from_base(p.clone())), &lattice);
                    (CoverSummand::LocalizedFF(LocSummand::span(k, &rows)), CValue::Exact(c))
                })
                .collect())
        }
    }
}

/// All summands `W` with `c_W(x) > θ`, by increasing rank.
pub fn cover_membership(x: &CoverPoint, sys: &CoverSystem) -> Result<Vec<(CoverSummand, CValue)>, Error> {
    let mut out: Vec<(CoverSummand, CValue)> =
        positive_candidates(x)?.into_iter().filter(|(_, c)| sys.exceeded_by(c)).collect();
    out.sort_by_key(|(w, _)| w.rank());
    Ok(out)
}

/// Whether no cover set contains `x`.
pub fn core_test(x: &CoverPoint, sys: &CoverSystem) -> Result<bool, Error> {
    if let CoverPoint::Building { ctx, vertices, .. } = x {
        if vertices.len() == 1 && sys.logarithmic.is_zero() {
            let r = diagonal_basis(&vertex_volume_space(ctx, &vertices[0])?).r;
            return Ok(core_test_r(&r, &sys.rational));
        }
    }
    Ok(cover_membership(x, sys)?.is_empty())
}

/// Whether every increment of an ascending r-vector is at most `θ`.
pub fn core_test_r(r: &[i64], theta: &Rational) -> bool {
    r.windows(2).all(|w| Rational::from(w[1] - w[0]) <= *theta)
}

/// Shifts an r-vector by a multiple of `(1, …, 1)` so its sum lies in
/// `[0, n − 1]`; this is the effect of rescaling the lattice by a power of t.
pub fn normalize_r(r: &[i64]) -> Vec<i64> {
    if r.is_empty() {
        return Vec::new();
    }
    let k = r.iter().sum::<i64>().div_euclid(r.len() as i64);
    r.iter().map(|x| x - k).collect()
}

/// All ascending integer vectors with increments at most `θ` and sum in
/// `[0, n − 1]`, in lexicographic order.
pub fn core_orbit_reps(n: usize, theta: u32) -> Result<Vec<Vec<i64>>, Error> {
    if n == 0 || n > MAX_REPS_RANK || theta > MAX_REPS_THRESHOLD {
        return Err(Error::Scale(format!("orbit representatives need 1 ≤ n ≤ {MAX_REPS_RANK}, θ ≤ {MAX_REPS_THRESHOLD}")));
    }
    let mut out = Vec::new();
    let mut inc = vec![0i64; n - 1];
    loop {
        // offsets from r₁; the sum window [0, n−1] fixes r₁ uniquely
        let mut offsets = vec![0i64; n];
        for i in 1..n {
            offsets[i] = offsets[i - 1] + inc[i - 1];
        }
        let s: i64 = offsets.iter().sum();
        let r1 = (-s).div_euclid(n as i64) + i64::from((-s).rem_euclid(n as i64) != 0);
        out.push(offsets.iter().map(|o| o + r1).collect::<Vec<i64>>());
        let mut i = 0;
        while i < inc.len() {
            inc[i] += 1;
            if inc[i] <= theta as i64 {
                break;
            }
            inc[i] = 0;
            i += 1;
        }
        if i == inc.len() {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// One-sided test for `x ∈ ⋃𝒲^{−β}`: true when some `c_W(x) > θ + C·β`,
/// which suffices for a `C`-Lipschitz `c_W`.
pub fn thinned_membership(x: &CoverPoint, sys: &CoverSystem, beta: &Rational, lipschitz: &Rational) -> Result<bool, Error> {
    if beta.is_negative() || lipschitz.is_negative() {
        return Err(Error::OutOfRange("β and C must be nonnegative".into()));
    }
    Ok(!cover_membership(x, &sys.raised(&(beta * lipschitz))?)?.is_empty())
}

impl CoverPoint {
    /// The building vertex `x`.
    pub fn vertex(ctx: DegreeBuilding, v: Vertex<RatFunc>) -> Self {
        CoverPoint::Building { ctx, vertices: vec![v], coeffs: vec![Rational::one()] }
    }

    /// The vertex whose volume space has a diagonal basis with the given
    /// r-vector: `S = ⊕ t^{−rᵢ}·R·eᵢ`.
    pub fn diagonal_vertex(q: u64, r: &[i64]) -> Result<Self, Error> {
        let ctx = BuildingContext::new(DegreeValuationRing::new(crate::exactmath::Fq::new(q)?), r.len())?;
        let v = ctx.diagonal_vertex(r)?;
        Ok(CoverPoint::vertex(ctx, v))
    }
}

/// Transforms a summand of `F_q[t]ⁿ` by `g`: rows `w ↦ w·gᵀ`.
pub fn transform_ff_summand(ring: &FqPolyRing, w: &FFSummand, g: &Matrix<Poly>) -> FFSummand {
    FFSummand::span(ring, &mat_mul(ring, w.basis(), &g.transpose()))
}

/// `[g·S]` for a vertex of the degree-valuation building.
pub fn transform_vertex(ctx: &DegreeBuilding, v: &Vertex<RatFunc>, g: &Matrix<Poly>) -> Result<Vertex<RatFunc>, Error> {
    let k = &ctx.ring.frac;
    ctx.act(&g.map(|p| k.from_base(p.clone())), v)
}

