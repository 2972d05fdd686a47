//! JSON encodings of the library's values. Exact scalars are strings or
//! integer arrays; decimals appear only as annotations.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::building::{canonical_vertex, BuildingContext, DegreeBuilding, PAdicBuilding, Vertex};
use crate::covers::{CValue, CoverPoint, CoverSummand, CoverSystem};
use crate::exactmath::{
    DegreeValuationRing, Fq, FqPolyRing, Integers, LogRatio, Matrix, PAdicIntegers, Poly, RatFunc, RatFuncField,
    Rational, Ring, TLocalization, QQ,
};
use crate::filtration::{FiltrationReport, GradedPoint, Height};
use crate::latff::{FFSummand, VolumeSpace};
use crate::latz::{InnerProduct, ZSummand};
use crate::sarith::{IntegralStructure, LocSummand};
use crate::Error;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// A decimal annotation with 12 significant digits.
pub fn decimal(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{x:.11e}").parse::<f64>().map(|y| y.to_string()).unwrap_or_else(|_| x.to_string())
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Error> {
    v.get(key).ok_or_else(|| perr(format!("missing field '{key}'")))
}

pub fn as_usize(v: &Value, what: &str) -> Result<usize, Error> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| perr(format!("{what} must be a nonnegative integer")))
}

pub fn as_i64(v: &Value, what: &str) -> Result<i64, Error> {
    v.as_i64().ok_or_else(|| perr(format!("{what} must be an integer")))
}

pub fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, Error> {
    v.as_array().ok_or_else(|| perr(format!("{what} must be an array")))
}

pub fn usize_field(v: &Value, key: &str) -> Result<usize, Error> {
    as_usize(field(v, key)?, key)
}

// scalars

pub fn rational_to_json(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn rational_from_json(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => n.as_i64().map(Rational::from).ok_or_else(|| perr(format!("{n} is not an integer"))),
        _ => Err(perr("rationals are strings \"p/q\" or integers")),
    }
}

pub fn bigint_to_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(k) => json!(k),
        Err(_) => Value::String(x.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt, Error> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| perr(format!("{n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| perr(format!("invalid integer '{s}'"))),
        _ => Err(perr("integers are numbers or decimal strings")),
    }
}

/// Ascending coefficient array.
pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.0.iter().map(|&c| json!(c)).collect())
}

pub fn poly_from_json(fq: &Fq, v: &Value) -> Result<Poly, Error> {
    let cs = as_array(v, "a polynomial")?
        .iter()
        .map(|c| {
            let c = c.as_u64().ok_or_else(|| perr("polynomial coefficients are integers"))?;
            if c >= fq.size() as u64 {
                return Err(Error::OutOfRange(format!("coefficient {c} not in F_{}", fq.size())));
            }
            Ok(c as u32)
        })
        .collect::<Result<Vec<u32>, Error>>()?;
    Ok(Poly::from_coeffs(cs))
}

pub fn ratfunc_to_json(k: &RatFuncField, x: &RatFunc) -> Value {
    Value::String(k.render(x))
}

pub fn ratfunc_from_json(k: &RatFuncField, v: &Value) -> Result<RatFunc, Error> {
    match v {
        Value::String(s) => k.parse(s),
        Value::Number(n) => {
            let c = n.as_i64().ok_or_else(|| perr(format!("{n} is not an integer")))?;
            Ok(k.from_i64(c))
        }
        _ => Err(perr("rational functions are strings such as \"t^2/(t+1)\"")),
    }
}

pub fn log_to_json(c: &LogRatio) -> Value {
    json!({
        "ln_ratio": rational_to_json(c.ratio()),
        "divisor": c.divisor(),
        "decimal": decimal(c.to_f64()),
    })
}

pub fn log_from_json(v: &Value) -> Result<LogRatio, Error> {
    let ratio = rational_from_json(field(v, "ln_ratio")?)?;
    if !ratio.is_positive() {
        return Err(Error::OutOfRange("ln_ratio must be positive".into()));
    }
    let d = field(v, "divisor")?.as_u64().filter(|&d| d > 0).ok_or_else(|| perr("divisor must be a positive integer"))?;
    Ok(LogRatio::new(ratio, d))
}

/// Human-readable form of `ln(r)/d`, simplified when `exp` of the value is
/// rational.
pub fn log_display(c: &LogRatio) -> String {
    if c.is_zero() {
        return "0".into();
    }
    match exact_root(c.ratio(), c.divisor()) {
        Some(x) => format!("ln({x})"),
        None => format!("ln({})/{}", c.ratio(), c.divisor()),
    }
}

/// `r^{1/d}` when it is rational.
fn exact_root(r: &Rational, d: u64) -> Option<Rational> {
    let d32 = u32::try_from(d).ok()?;
    let num_root = r.num.nth_root(d32);
    let den_root = r.den.nth_root(d32);
    (num_root.pow(d32) == r.num && den_root.pow(d32) == r.den).then(|| Rational::new(num_root, den_root))
}

// matrices

fn nested<E: Clone>(m: &Matrix<E>, f: impl Fn(&E) -> Value) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(&f).collect())).collect())
}

/// `{"ring", "rows", "cols", "entries"}` with row-major entries.
pub fn matrix_to_json<E: Clone>(ring: &str, m: &Matrix<E>, f: impl Fn(&E) -> Value) -> Value {
    json!({ "ring": ring, "rows": m.rows(), "cols": m.cols(), "entries": nested(m, f) })
}

/// A matrix given either as a nested array or as a matrix object.
pub fn matrix_from_json<E: Clone>(
    v: &Value,
    cols_hint: Option<usize>,
    f: impl Fn(&Value) -> Result<E, Error>,
) -> Result<Matrix<E>, Error> {
    let (rows_v, declared) = match v {
        Value::Object(o) => {
            let e = o.get("entries").ok_or_else(|| perr("matrix object without 'entries'"))?;
            let r = o.get("rows").map(|x| as_usize(x, "rows")).transpose()?;
            let c = o.get("cols").map(|x| as_usize(x, "cols")).transpose()?;
            (e, Some((r, c)))
        }
        _ => (v, None),
    };
    let rows = as_array(rows_v, "matrix entries")?;
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        out.push(as_array(r, "a matrix row")?.iter().map(&f).collect::<Result<Vec<E>, Error>>()?);
    }
    let cols = match (out.first(), declared.and_then(|d| d.1), cols_hint) {
        (Some(r), _, _) => r.len(),
        (None, Some(c), _) | (None, None, Some(c)) => c,
        (None, None, None) => 0,
    };
    if out.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension("ragged matrix rows".into()));
    }
    if let Some((r, c)) = declared {
        if r.is_some_and(|r| r != out.len()) || c.is_some_and(|c| c != cols) {
            return Err(Error::Dimension("matrix shape does not match its entries".into()));
        }
    }
    Ok(Matrix::from_rows(out, cols))
}

pub fn rational_matrix_from_json(v: &Value, cols: Option<usize>) -> Result<Matrix<Rational>, Error> {
    matrix_from_json(v, cols, rational_from_json)
}

pub fn rational_matrix_to_json(m: &Matrix<Rational>) -> Value {
    matrix_to_json("Q", m, rational_to_json)
}

pub fn ratfunc_matrix_to_json(k: &RatFuncField, m: &Matrix<RatFunc>) -> Value {
    matrix_to_json(&format!("F_{}(t)", k.field().size()), m, |x| ratfunc_to_json(k, x))
}

pub fn ratfunc_matrix_from_json(k: &RatFuncField, v: &Value, cols: Option<usize>) -> Result<Matrix<RatFunc>, Error> {
    matrix_from_json(v, cols, |x| ratfunc_from_json(k, x))
}

// lattices over ℤ

pub fn inner_product_to_json(s: &InnerProduct) -> Value {
    json!({ "n": s.n(), "gram": nested(s.gram(), rational_to_json) })
}

pub fn inner_product_from_json(v: &Value) -> Result<InnerProduct, Error> {
    let g = rational_matrix_from_json(field(v, "gram")?, None)?;
    if let Some(n) = v.get("n") {
        if as_usize(n, "n")? != g.rows() {
            return Err(Error::Dimension("n does not match the Gram matrix".into()));
        }
    }
    InnerProduct::new(g)
}

pub fn z_summand_to_json(w: &ZSummand) -> Value {
    json!({ "rank": w.rank(), "basis": nested(w.basis(), bigint_to_json) })
}

pub fn z_summand_from_json(v: &Value, n: usize) -> Result<ZSummand, Error> {
    let b = matrix_from_json(field(v, "basis")?, Some(n), bigint_from_json)?;
    if b.cols() != n {
        return Err(Error::Dimension(format!("summand rows must have length {n}")));
    }
    let w = ZSummand::new(b)?;
    check_rank(v, w.rank())?;
    Ok(w)
}

fn check_rank(v: &Value, rank: usize) -> Result<(), Error> {
    match v.get("rank") {
        Some(r) if as_usize(r, "rank")? != rank => Err(Error::Dimension("rank does not match the basis".into())),
        _ => Ok(()),
    }
}

// volume spaces over F_q[t]

pub fn fq_from_json(v: &Value) -> Result<Fq, Error> {
    let q = field(v, "q")?.as_u64().ok_or_else(|| perr("q must be a positive integer"))?;
    Fq::new(q)
}

pub fn volume_space_to_json(vs: &VolumeSpace) -> Value {
    let k = vs.field();
    json!({
        "q": k.field().size(),
        "n": vs.n(),
        "S_basis": nested(vs.basis(), |x| ratfunc_to_json(k, x)),
    })
}

pub fn volume_space_from_json(v: &Value) -> Result<VolumeSpace, Error> {
    let k = RatFuncField::over(fq_from_json(v)?);
    let b = ratfunc_matrix_from_json(&k, field(v, "S_basis")?, None)?;
    if let Some(n) = v.get("n") {
        if as_usize(n, "n")? != b.rows() {
            return Err(Error::Dimension("n does not match S_basis".into()));
        }
    }
    VolumeSpace::new(k, b)
}

pub fn ff_summand_to_json(w: &FFSummand) -> Value {
    json!({ "rank": w.rank(), "basis": nested(w.basis(), poly_to_json) })
}

pub fn ff_summand_from_json(ring: &FqPolyRing, v: &Value, n: usize) -> Result<FFSummand, Error> {
    let b = matrix_from_json(field(v, "basis")?, Some(n), |x| poly_from_json(&ring.field, x))?;
    if b.cols() != n {
        return Err(Error::Dimension(format!("summand rows must have length {n}")));
    }
    let w = FFSummand::new(ring, b)?;
    check_rank(v, w.rank())?;
    Ok(w)
}

// localized data

pub fn z_primes_from_json(v: &Value) -> Result<Vec<BigInt>, Error> {
    let mut ps = as_array(v, "primes")?.iter().map(bigint_from_json).collect::<Result<Vec<_>, _>>()?;
    for p in &ps {
        if !crate::exactmath::integers::is_prime(p) {
            return Err(Error::InvalidPlace(format!("{p} is not prime")));
        }
    }
    ps.sort();
    ps.dedup();
    Ok(ps)
}

pub fn ff_primes_from_json(ring: &FqPolyRing, v: &Value) -> Result<Vec<Poly>, Error> {
    let mut ps = as_array(v, "primes")?.iter().map(|p| poly_from_json(&ring.field, p)).collect::<Result<Vec<_>, _>>()?;
    for p in &ps {
        if p.is_zero() || p.leading() != 1 || !ring.is_irreducible(p) {
            return Err(Error::InvalidPlace(format!("{} is not a monic irreducible", ring.render(p))));
        }
    }
    ps.sort_by_key(|p| p.0.clone());
    ps.dedup();
    Ok(ps)
}

pub fn z_structure_to_json(b: &IntegralStructure<Integers>) -> Value {
    json!({
        "primes": b.localization().primes.iter().map(bigint_to_json).collect::<Vec<_>>(),
        "basis": nested(b.basis(), rational_to_json),
    })
}

pub fn z_structure_from_json(v: &Value) -> Result<IntegralStructure<Integers>, Error> {
    let primes = z_primes_from_json(field(v, "primes")?)?;
    let basis = rational_matrix_from_json(field(v, "basis")?, None)?;
    IntegralStructure::new(TLocalization::new(Integers, primes), basis)
}

pub fn ff_structure_to_json(b: &IntegralStructure<FqPolyRing>) -> Value {
    let k = b.frac();
    json!({
        "q": k.field().size(),
        "primes": b.localization().primes.iter().map(poly_to_json).collect::<Vec<_>>(),
        "basis": nested(b.basis(), |x| ratfunc_to_json(k, x)),
    })
}

pub fn ff_structure_from_json(v: &Value) -> Result<IntegralStructure<FqPolyRing>, Error> {
    let k = RatFuncField::over(fq_from_json(v)?);
    let primes = ff_primes_from_json(&k.base, field(v, "primes")?)?;
    let basis = ratfunc_matrix_from_json(&k, field(v, "basis")?, None)?;
    IntegralStructure::new(TLocalization::new(k.base, primes), basis)
}

pub fn loc_z_summand_to_json(w: &LocSummand<BigInt>) -> Value {
    json!({ "rank": w.rank(), "basis": nested(w.basis(), bigint_to_json) })
}

pub fn loc_z_summand_from_json(v: &Value, n: usize) -> Result<LocSummand<BigInt>, Error> {
    let rows = rational_matrix_from_json(field(v, "basis")?, Some(n))?;
    if rows.cols() != n {
        return Err(Error::Dimension(format!("summand rows must have length {n}")));
    }
    let w = LocSummand::span(&QQ, &rows);
    if w.rank() != rows.rows() {
        return Err(Error::RankDeficient("summand rows are dependent".into()));
    }
    check_rank(v, w.rank())?;
    Ok(w)
}

pub fn loc_ff_summand_to_json(w: &LocSummand<Poly>) -> Value {
    json!({ "rank": w.rank(), "basis": nested(w.basis(), poly_to_json) })
}

pub fn loc_ff_summand_from_json(k: &RatFuncField, v: &Value, n: usize) -> Result<LocSummand<Poly>, Error> {
    let rows = ratfunc_matrix_from_json(k, field(v, "basis")?, Some(n))?;
    if rows.cols() != n {
        return Err(Error::Dimension(format!("summand rows must have length {n}")));
    }
    let w = LocSummand::span(k, &rows);
    if w.rank() != rows.rows() {
        return Err(Error::RankDeficient("summand rows are dependent".into()));
    }
    check_rank(v, w.rank())?;
    Ok(w)
}

// building vertices

/// A building over `Q_p` (`{"p": ..}`) or over the degree place of
/// `F_q(t)` (`{"q": ..}`).
#[derive(Clone, Debug)]
pub enum AnyBuilding {
    PAdic(PAdicBuilding),
    Degree(DegreeBuilding),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyVertex {
    PAdic(Vertex<Rational>),
    Degree(Vertex<RatFunc>),
}

impl AnyBuilding {
    pub fn new(p: Option<u64>, q: Option<u64>, n: usize) -> Result<Self, Error> {
        match (p, q) {
            (Some(p), None) => {
                let p32 = u32::try_from(p).map_err(|_| Error::Scale(format!("prime {p} too large")))?;
                if !crate::exactmath::integers::is_prime(&BigInt::from(p)) {
                    return Err(Error::InvalidPlace(format!("{p} is not prime")));
                }
                Ok(AnyBuilding::PAdic(BuildingContext::new(PAdicIntegers::at(p32), n)?))
            }
            (None, Some(q)) => Ok(AnyBuilding::Degree(BuildingContext::new(DegreeValuationRing::new(Fq::new(q)?), n)?)),
            _ => Err(perr("give exactly one of p (p-adic building) or q (function-field building)")),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyBuilding::PAdic(c) => c.n,
            AnyBuilding::Degree(c) => c.n,
        }
    }

    pub fn vertex_from_json(&self, v: &Value) -> Result<AnyVertex, Error> {
        let b = v.get("basis").unwrap_or(v);
        match self {
            AnyBuilding::PAdic(c) => Ok(AnyVertex::PAdic(canonical_vertex(c, &rational_matrix_from_json(b, None)?)?)),
            AnyBuilding::Degree(c) => {
                Ok(AnyVertex::Degree(canonical_vertex(c, &ratfunc_matrix_from_json(&c.ring.frac, b, None)?)?))
            }
        }
    }

    pub fn vertex_to_json(&self, v: &AnyVertex) -> Value {
        match (self, v) {
            (AnyBuilding::PAdic(c), AnyVertex::PAdic(v)) => {
                json!({ "p": c.residue_size(), "n": c.n, "basis": nested(v.basis(), rational_to_json) })
            }
            (AnyBuilding::Degree(c), AnyVertex::Degree(v)) => {
                let k = &c.ring.frac;
                json!({ "q": c.residue_size(), "n": c.n, "basis": nested(v.basis(), |x| ratfunc_to_json(k, x)) })
            }
            _ => Value::Null,
        }
    }
}

pub fn degree_vertex_to_json(ctx: &DegreeBuilding, v: &Vertex<RatFunc>) -> Value {
    AnyBuilding::Degree(ctx.clone()).vertex_to_json(&AnyVertex::Degree(v.clone()))
}

// filtration reports

pub fn report_to_json<I: Clone, H: Height>(
    r: &FiltrationReport<I, H>,
    id: impl Fn(&I) -> Value,
    height: impl Fn(&H) -> Value,
    slope: impl Fn(&H::Slope) -> Value,
) -> Value {
    let point = |p: &GradedPoint<I, H>| json!({ "rank": p.rank, "id": id(&p.id), "height": height(&p.height) });
    let mut c = Map::new();
    let interior = r.interior_ranks();
    for ((w, s), rank) in r.c_values.iter().zip(interior) {
        c.insert(rank.to_string(), json!({ "summand": id(w), "c": slope(s) }));
    }
    json!({
        "minima": r.minima.iter().map(point).collect::<Vec<_>>(),
        "path": r.path.iter().map(point).collect::<Vec<_>>(),
        "chain": r.chain.iter().map(id).collect::<Vec<_>>(),
        "c_values": Value::Object(c),
    })
}

/// `c = ln(r)/d` for ℤ-side values: the exact pair, its squared ratio
/// `r^{2/d}` when rational, and a decimal annotation.
pub fn z_c_to_json(c: &LogRatio) -> Value {
    let mut o = Map::new();
    o.insert("c".into(), Value::String(log_display(c)));
    o.insert("exact".into(), log_to_json(c));
    if let Some(sq) = c.exp_multiple(2) {
        o.insert("c_sq_ratio".into(), Value::String(format!("{}/{}", sq.num, sq.den)));
    }
    Value::Object(o)
}

pub fn c_value_to_json(c: &CValue) -> Value {
    match c {
        CValue::Log(l) => z_c_to_json(l),
        CValue::Exact(q) => json!({ "c": rational_to_json(q), "decimal": decimal(q.to_f64()) }),
    }
}

// covers

pub fn cover_point_from_json(v: &Value) -> Result<CoverPoint, Error> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| perr("kind must be a string"))?;
    match kind {
        "z" => Ok(CoverPoint::Z(inner_product_from_json(field(v, "s")?)?)),
        "building" => {
            let fq = fq_from_json(v)?;
            let n = usize_field(v, "n")?;
            let ctx = BuildingContext::new(DegreeValuationRing::new(fq), n)?;
            let b = AnyBuilding::Degree(ctx.clone());
            let vs = as_array(field(v, "vertices")?, "vertices")?;
            let mut vertices = Vec::new();
            for x in vs {
                match b.vertex_from_json(x)? {
                    AnyVertex::Degree(x) => vertices.push(x),
                    AnyVertex::PAdic(_) => unreachable!(),
                }
            }
            let coeffs = match v.get("coeffs") {
                Some(c) => as_array(c, "coeffs")?.iter().map(rational_from_json).collect::<Result<Vec<_>, _>>()?,
                None if vertices.len() == 1 => vec![Rational::one()],
                None => return Err(perr("a simplex point needs coeffs")),
            };
            Ok(CoverPoint::Building { ctx, vertices, coeffs })
        }
        "localized-z" => {
            let s = inner_product_from_json(field(v, "s")?)?;
            let b = z_structure_from_json(field(v, "b")?)?;
            if b.n() != s.n() {
                return Err(Error::Dimension("form and integral structure have different ranks".into()));
            }
            Ok(CoverPoint::LocalizedZ { s, b })
        }
        "localized-building" => {
            let b = ff_structure_from_json(field(v, "b")?)?;
            let n = b.n();
            let ctx = BuildingContext::new(DegreeValuationRing::new(b.frac().field()), n)?;
            let vertex = match AnyBuilding::Degree(ctx.clone()).vertex_from_json(field(v, "vertex")?)? {
                AnyVertex::Degree(x) => x,
                AnyVertex::PAdic(_) => unreachable!(),
            };
            Ok(CoverPoint::LocalizedBuilding { ctx, vertex, b })
        }
        other => Err(perr(format!("unknown point kind '{other}'"))),
    }
}

pub fn cover_point_to_json(x: &CoverPoint) -> Value {
    match x {
        CoverPoint::Z(s) => json!({ "kind": "z", "s": inner_product_to_json(s) }),
        CoverPoint::Building { ctx, vertices, coeffs } => json!({
            "kind": "building",
            "q": ctx.residue_size(),
            "n": ctx.n,
            "vertices": vertices.iter().map(|v| degree_vertex_to_json(ctx, v)["basis"].clone()).collect::<Vec<_>>(),
            "coeffs": coeffs.iter().map(rational_to_json).collect::<Vec<_>>(),
        }),
        CoverPoint::LocalizedZ { s, b } => {
            json!({ "kind": "localized-z", "s": inner_product_to_json(s), "b": z_structure_to_json(b) })
        }
        CoverPoint::LocalizedBuilding { ctx, vertex, b } => json!({
            "kind": "localized-building",
            "vertex": degree_vertex_to_json(ctx, vertex)["basis"].clone(),
            "b": ff_structure_to_json(b),
        }),
    }
}

pub fn cover_summand_to_json(w: &CoverSummand) -> Value {
    match w {
        CoverSummand::Z(w) => z_summand_to_json(w),
        CoverSummand::FF(w) => ff_summand_to_json(w),
        CoverSummand::LocalizedZ(w) => loc_z_summand_to_json(w),
        CoverSummand::LocalizedFF(w) => loc_ff_summand_to_json(w),
    }
}

/// The preset threshold of a point's setting, or the given rational.
pub fn cover_system_for(x: &CoverPoint, theta: Option<&Value>) -> Result<CoverSystem, Error> {
    if let Some(t) = theta {
        return CoverSystem::new(rational_from_json(t)?);
    }
    match x {
        CoverPoint::Z(_) => Ok(CoverSystem::symmetric_space()),
        CoverPoint::Building { ctx, .. } => Ok(CoverSystem::building(ctx.n)),
        CoverPoint::LocalizedZ { b, .. } => CoverSystem::localized_z(b.n(), &b.localization().primes),
        CoverPoint::LocalizedBuilding { b, .. } => Ok(CoverSystem::localized_ff(b.n(), &b.localization().primes)),
    }
}

pub fn cover_system_to_json(sys: &CoverSystem) -> Value {
    let mut o = Map::new();
    o.insert("rational".into(), rational_to_json(&sys.rational));
    if !sys.logarithmic.is_zero() {
        o.insert("logarithmic".into(), log_to_json(&sys.logarithmic));
    }
    o.insert("decimal".into(), Value::String(decimal(sys.rational.to_f64() + sys.logarithmic.to_f64())));
    Value::Object(o)
}
