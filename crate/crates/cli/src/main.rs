//! `latred`: JSON in, JSON out front end for latred-core.

use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::Parser;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use latred_core::building::{
    adjacent, apartment_coords, count_chambers_on_edge, label_difference, neighbors, triangulate_point, BuildingContext,
};
use latred_core::covers::{
    core_orbit_reps, core_test, cover_membership, normalize_r, vertex_volume_space, CoverPoint, MAX_REPS_THRESHOLD,
};
use latred_core::exactmath::matrix::{det, mat_mul};
use latred_core::exactmath::{
    AwayFromT, DegreeValuationRing, Fq, Integers, Matrix, Poly, RatFunc, RatFuncField, Rational, Ring, TLocalization, QQ,
};
use latred_core::filtration::{canonical_plot, GradedPoint};
use latred_core::json::*;
use latred_core::latff::{diagonal_basis, ff_c_value, ff_invariants_and_filtration, ff_logvol, VolumeSpace};
use latred_core::latz::{c_value_z, canonical_filtration_z, gram_logvol};
use latred_core::sarith::{factorize, in_gl_away, in_gl_localized, intersect_integral, loc_logvol_ff, loc_sq_volume, FactorMode};
use latred_core::Error;

const VERBS: &[&str] = &[
    "canfilt",
    "volume",
    "cvalue",
    "ff-invariants",
    "diagonal-basis",
    "intersect",
    "loc-volume",
    "factorize",
    "building-neighbors",
    "label-diff",
    "chamber-count",
    "apartment",
    "triangulate",
    "cover-membership",
    "core-test",
    "core-reps",
    "selfcheck",
];

#[derive(Parser, Debug)]
#[command(name = "latred", version, about = "Canonical filtrations, volume spaces, buildings and covers; JSON on stdin and stdout")]
struct Cli {
    /// One of: canfilt, volume, cvalue, ff-invariants, diagonal-basis, intersect, loc-volume, factorize,
    /// building-neighbors, label-diff, chamber-count, apartment, triangulate, cover-membership, core-test,
    /// core-reps, selfcheck. `building neighbors` and `building label-diff` are accepted too.
    verb: String,
    /// Second word of a two-word verb.
    action: Option<String>,
    /// Coefficient side: z (integers), ff (F_q[t]) or plot (canfilt on raw points).
    #[arg(long)]
    ring: Option<String>,
    /// Residue prime of a p-adic building.
    #[arg(long)]
    p: Option<u64>,
    /// Field size of an F_q(t) building.
    #[arg(long)]
    q: Option<u64>,
    /// Rank.
    #[arg(long)]
    n: Option<usize>,
    /// Cover threshold, overriding the setting's preset.
    #[arg(long)]
    theta: Option<String>,
    /// Factorization mode: general or special.
    #[arg(long)]
    mode: Option<String>,
    /// Seed for selfcheck.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multiplier on selfcheck case counts and oracle bounds.
    #[arg(long, default_value_t = 1)]
    scale: usize,
}

enum Failure {
    Validation(String, String),
    Domain(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.kind().into(), e.to_string())
        } else {
            Failure::Domain(e.kind().into(), e.to_string())
        }
    }
}

fn emit(v: &Value) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            emit(&json!({ "error": { "kind": "usage", "message": e.to_string().trim() } }));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok((v, ok)) => {
            emit(&v);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(Failure::Validation(kind, message)) => {
            emit(&json!({ "error": { "kind": kind, "message": message } }));
            ExitCode::from(2)
        }
        Err(Failure::Domain(kind, message)) => {
            emit(&json!({ "error": { "kind": kind, "message": message } }));
            ExitCode::from(3)
        }
    }
}

fn verb_name(cli: &Cli) -> Result<String, Failure> {
    let v = match (cli.verb.as_str(), cli.action.as_deref()) {
        ("building", Some(a)) => format!("building-{a}"),
        ("building", None) => return Err(usage("'building' needs an action such as 'neighbors'")),
        ("label-diff", None) | ("building-label-diff", None) => "label-diff".into(),
        (v, None) => v.to_string(),
        (v, Some(a)) => return Err(usage(&format!("unexpected argument '{a}' after '{v}'"))),
    };
    let v = if v == "building-label-diff" { "label-diff".to_string() } else { v };
    if VERBS.contains(&v.as_str()) {
        Ok(v)
    } else {
        Err(usage(&format!("unknown verb '{v}'")))
    }
}

fn usage(msg: &str) -> Failure {
    Failure::Validation("usage".into(), msg.into())
}

fn read_payload() -> Result<Value, Failure> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).map_err(|e| Failure::Validation("io".into(), e.to_string()))?;
    serde_json::from_str(&s).map_err(|e| Failure::Validation("malformed_json".into(), e.to_string()))
}

fn ring_side(cli: &Cli, default: &str) -> Result<String, Failure> {
    let r = cli.ring.clone().unwrap_or_else(|| default.into());
    match r.as_str() {
        "z" | "ff" | "plot" => Ok(r),
        other => Err(usage(&format!("unknown ring '{other}'; use z or ff"))),
    }
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let verb = verb_name(cli)?;
    if verb == "selfcheck" {
        return Ok(selfcheck(cli.seed, cli.scale.max(1)));
    }
    let payload = read_payload()?;
    let v = match verb.as_str() {
        "canfilt" => canfilt(cli, &payload)?,
        "volume" => volume(cli, &payload)?,
        "cvalue" => cvalue(cli, &payload)?,
        "ff-invariants" => json!({ "r": diagonal_basis(&volume_space_from_json(&payload)?).r }),
        "diagonal-basis" => {
            let vs = volume_space_from_json(&payload)?;
            let d = diagonal_basis(&vs);
            let k = vs.field();
            json!({
                "r": d.r,
                "w": d.w.to_rows().iter().map(|r| r.iter().map(poly_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "b": d.b.to_rows().iter().map(|r| r.iter().map(|x| ratfunc_to_json(k, x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        }
        "intersect" => intersect(cli, &payload)?,
        "loc-volume" => loc_volume(cli, &payload)?,
        "factorize" => factorize_verb(cli, &payload)?,
        "building-neighbors" => building_neighbors(cli, &payload)?,
        "label-diff" => label_diff(cli, &payload)?,
        "chamber-count" => {
            let c = count_chambers_on_edge(usize_field(&payload, "n")?, usize_field(&payload, "r")? as u32, usize_field(&payload, "k")?)?;
            json!({
                "formula": count_json(c.formula),
                "brute_force": c.brute_force.map(count_json),
                "verified": c.verified(),
            })
        }
        "apartment" => {
            let m = as_array(field(&payload, "m")?, "m")?.iter().map(|x| as_i64(x, "m")).collect::<Result<Vec<_>, _>>()?;
            json!({ "coords": apartment_coords(&m).iter().map(rational_to_json).collect::<Vec<_>>() })
        }
        "triangulate" => {
            let x = as_array(field(&payload, "x")?, "x")?.iter().map(rational_from_json).collect::<Result<Vec<_>, _>>()?;
            let d = triangulate_point(&x)?;
            json!({ "points": d.points, "coeffs": d.coeffs.iter().map(rational_to_json).collect::<Vec<_>>() })
        }
        "cover-membership" => {
            let (x, sys) = cover_input(cli, &payload)?;
            let m = cover_membership(&x, &sys)?;
            json!({
                "theta": cover_system_to_json(&sys),
                "members": m.iter().map(|(w, c)| json!({ "summand": cover_summand_to_json(w), "c": c_value_to_json(c) })).collect::<Vec<_>>(),
            })
        }
        "core-test" => {
            let (x, sys) = cover_input(cli, &payload)?;
            let mut out = json!({ "theta": cover_system_to_json(&sys), "core": core_test(&x, &sys)? });
            if let CoverPoint::Building { ctx, vertices, .. } = &x {
                if vertices.len() == 1 {
                    let r = diagonal_basis(&vertex_volume_space(ctx, &vertices[0])?).r;
                    out["r"] = json!(r);
                    out["normalized_r"] = json!(normalize_r(&r));
                }
            }
            out
        }
        "core-reps" => {
            let n = match cli.n {
                Some(n) => n,
                None => usize_field(&payload, "n")?,
            };
            let theta = match (&cli.theta, payload.get("theta")) {
                (Some(t), _) => t.parse::<u32>().map_err(|_| usage("theta must be a nonnegative integer"))?,
                (None, Some(t)) => as_usize(t, "theta")? as u32,
                (None, None) => return Err(usage("core-reps needs theta")),
            };
            if theta > MAX_REPS_THRESHOLD * cli.scale.max(1) as u32 {
                return Err(Error::Scale(format!("θ = {theta} exceeds the bound")).into());
            }
            let reps = core_orbit_reps(n, theta)?;
            json!({ "n": n, "theta": theta, "count": reps.len(), "reps": reps })
        }
        _ => unreachable!("verb list is checked"),
    };
    Ok((v, true))
}

fn count_json(c: u128) -> Value {
    match u64::try_from(c) {
        Ok(x) => json!(x),
        Err(_) => json!(c.to_string()),
    }
}

fn sq_volume_json(v: &Rational) -> Value {
    json!({ "sq_volume": rational_to_json(v), "ln_volume_decimal": decimal(v.ln() / 2.0) })
}

fn canfilt(cli: &Cli, payload: &Value) -> Result<Value, Failure> {
    Ok(match ring_side(cli, "z")?.as_str() {
        "z" => {
            let s = inner_product_from_json(payload)?;
            let rep = canonical_filtration_z(&s)?;
            report_to_json(&rep, z_summand_to_json, |h| sq_volume_json(&h.0), z_c_to_json)
        }
        "ff" => {
            let vs = volume_space_from_json(payload)?;
            let (d, rep) = ff_invariants_and_filtration(&vs);
            let mut out = report_to_json(&rep, ff_summand_to_json, |h| json!(h), rational_to_json);
            out["r"] = json!(d.r);
            out
        }
        _ => {
            let pts = as_array(field(payload, "points")?, "points")?;
            let mut points = Vec::new();
            for (i, p) in pts.iter().enumerate() {
                let id = p.get("id").cloned().unwrap_or(json!(i));
                points.push(GradedPoint { id, rank: usize_field(p, "rank")?, height: rational_from_json(field(p, "height")?)? });
            }
            let top = match payload.get("top_rank") {
                Some(t) => as_usize(t, "top_rank")?,
                None => points.iter().map(|p| p.rank).max().unwrap_or(0),
            };
            let rep = canonical_plot(&points, top)?;
            let mut out = report_to_json(&rep, Value::clone, rational_to_json, rational_to_json);
            out["path_ranks"] = json!(rep.chain_ranks());
            out
        }
    })
}

fn volume(cli: &Cli, payload: &Value) -> Result<Value, Failure> {
    Ok(match ring_side(cli, "z")?.as_str() {
        "z" => {
            let s = inner_product_from_json(field(payload, "s")?)?;
            let w = z_summand_from_json(field(payload, "w")?, s.n())?;
            sq_volume_json(&gram_logvol(&s, &w)?)
        }
        "ff" => {
            let vs = volume_space_from_json(field(payload, "vs")?)?;
            let w = ff_summand_from_json(vs.ring(), field(payload, "w")?, vs.n())?;
            json!({ "logvol": ff_logvol(&vs, w.basis())? })
        }
        _ => return Err(usage("volume takes --ring z or ff")),
    })
}

fn cvalue(cli: &Cli, payload: &Value) -> Result<Value, Failure> {
    Ok(match ring_side(cli, "z")?.as_str() {
        "z" => {
            let s = inner_product_from_json(field(payload, "s")?)?;
            let w = z_summand_from_json(field(payload, "w")?, s.n())?;
            z_c_to_json(&c_value_z(&s, &w)?)
        }
        "ff" => {
            let vs = volume_space_from_json(field(payload, "vs")?)?;
            let w = ff_summand_from_json(vs.ring(), field(payload, "w")?, vs.n())?;
            json!({ "c": ff_c_value(&vs, &w)? })
        }
        _ => return Err(usage("cvalue takes --ring z or ff")),
    })
}

fn intersect(cli: &Cli, payload: &Value) -> Result<Value, Failure> {
    Ok(match ring_side(cli, "z")?.as_str() {
        "z" => {
            let b = z_structure_from_json(field(payload, "b")?)?;
            let w = loc_z_summand_from_json(field(payload, "w")?, b.n())?;
            json!({ "basis": rational_matrix_to_json(&intersect_integral(&w, &b)?)["entries"] })
        }
        "ff" => {
            let b = ff_structure_from_json(field(payload, "b")?)?;
            let w = loc_ff_summand_from_json(b.frac(), field(payload, "w")?, b.n())?;
            json!({ "basis": ratfunc_matrix_to_json(b.frac(), &intersect_integral(&w, &b)?)["entries"] })
        }
        _ => return Err(usage("intersect takes --ring z or ff")),
    })
}

fn loc_volume(cli: &Cli, payload: &Value) -> Result<Value, Failure> {
    Ok(match ring_side(cli, "z")?.as_str() {
        "z" => {
            let s = inner_product_from_json(field(payload, "s")?)?;
            let b = z_structure_from_json(field(payload, "b")?)?;
            let w = loc_z_summand_from_json(field(payload, "w")?, b.n())?;
            sq_volume_json(&loc_sq_volume(&s, &w, &b)?)
        }
        "ff" => {
            let vs = volume_space_from_json(field(payload, "vs")?)?;
            let b = ff_structure_from_json(field(payload, "b")?)?;
            let w = loc_ff_summand_from_json(b.frac(), field(payload, "w")?, b.n())?;
            json!({ "logvol": loc_logvol_ff(&vs, &w, &b)? })
        }
        _ => return Err(usage("loc-volume takes --ring z or ff")),
    })
}

fn factor_mode(cli: &Cli, payload: &Value) -> Result<FactorMode, Failure> {
    let m = cli.mode.clone().or_else(|| payload.get("mode").and_then(Value::as_str).map(String::from));
    match m.as_deref() {
        None | Some("general") => Ok(FactorMode::General),
        Some("special") => Ok(FactorMode::Special),
        Some(other) => Err(usage(&format!("unknown mode '{other}'"))),
    }
}

fn factorize_verb(cli: &Cli, payload: &Value) -> Result<Value, Failure> {
    let mode = factor_mode(cli, payload)?;
    Ok(match ring_side(cli, "z")?.as_str() {
        "z" => {
            let primes = z_primes_from_json(field(payload, "primes")?)?;
            let a = rational_matrix_from_json(field(payload, "a")?, None)?;
            let loc = TLocalization::new(Integers, primes.clone());
            let (b, c) = factorize(&loc, &a, mode)?;
            let away = AwayFromT::new(Integers, primes);
            json!({
                "b": rational_matrix_to_json(&b)["entries"],
                "c": rational_matrix_to_json(&c)["entries"],
                "b_in_gl_localized": in_gl_localized(&loc, &b),
                "c_in_gl_away": in_gl_away(&away, &c),
                "product_matches": mat_mul(&QQ, &b, &c) == a,
            })
        }
        "ff" => {
            let k = RatFuncField::over(fq_from_json(payload)?);
            let primes = ff_primes_from_json(&k.base, field(payload, "primes")?)?;
            let a = ratfunc_matrix_from_json(&k, field(payload, "a")?, None)?;
            let loc = TLocalization::new(k.base, primes.clone());
            let (b, c) = factorize(&loc, &a, mode)?;
            let away = AwayFromT::new(k.base, primes);
            json!({
                "b": ratfunc_matrix_to_json(&k, &b)["entries"],
                "c": ratfunc_matrix_to_json(&k, &c)["entries"],
                "b_in_gl_localized": in_gl_localized(&loc, &b),
                "c_in_gl_away": in_gl_away(&away, &c),
                "product_matches": mat_mul(&k, &b, &c) == a,
            })
        }
        _ => return Err(usage("factorize takes --ring z or ff")),
    })
}

fn building_from(cli: &Cli, payload: &Value, basis: &Value) -> Result<AnyBuilding, Failure> {
    let p = cli.p.or_else(|| payload.get("p").and_then(Value::as_u64));
    let q = cli.q.or_else(|| payload.get("q").and_then(Value::as_u64));
    let rows = basis.get("basis").unwrap_or(basis);
    let n = match cli.n.or_else(|| payload.get("n").and_then(Value::as_u64).map(|x| x as usize)) {
        Some(n) => n,
        None => as_array(rows.get("entries").unwrap_or(rows), "basis")?.len(),
    };
    Ok(AnyBuilding::new(p, q, n)?)
}

fn building_neighbors(cli: &Cli, payload: &Value) -> Result<Value, Failure> {
    let vj = payload.get("vertex").unwrap_or(payload);
    let b = building_from(cli, payload, vj)?;
    let v = b.vertex_from_json(vj)?;
    let list: Vec<Value> = match (&b, &v) {
        (AnyBuilding::PAdic(c), AnyVertex::PAdic(v)) => neighbors(c, v)?
            .into_iter()
            .map(|(u, k)| json!({ "rank": k, "vertex": b.vertex_to_json(&AnyVertex::PAdic(u))["basis"] }))
            .collect(),
        (AnyBuilding::Degree(c), AnyVertex::Degree(v)) => neighbors(c, v)?
            .into_iter()
            .map(|(u, k)| json!({ "rank": k, "vertex": b.vertex_to_json(&AnyVertex::Degree(u))["basis"] }))
            .collect(),
        _ => unreachable!(),
    };
    Ok(json!({ "vertex": b.vertex_to_json(&v), "count": list.len(), "neighbors": list }))
}

fn label_diff(cli: &Cli, payload: &Value) -> Result<Value, Failure> {
    let (j1, j2) = (field(payload, "v1")?, field(payload, "v2")?);
    let b = building_from(cli, payload, j1)?;
    let (v1, v2) = (b.vertex_from_json(j1)?, b.vertex_from_json(j2)?);
    let (k, adj) = match (&b, &v1, &v2) {
        (AnyBuilding::PAdic(c), AnyVertex::PAdic(x), AnyVertex::PAdic(y)) => (label_difference(c, x, y), adjacent(c, x, y)),
        (AnyBuilding::Degree(c), AnyVertex::Degree(x), AnyVertex::Degree(y)) => (label_difference(c, x, y), adjacent(c, x, y)),
        _ => unreachable!(),
    };
    Ok(json!({ "label_difference": k, "adjacent": adj }))
}

fn cover_input(cli: &Cli, payload: &Value) -> Result<(CoverPoint, latred_core::covers::CoverSystem), Failure> {
    let x = cover_point_from_json(payload.get("point").unwrap_or(payload))?;
    let theta = cli.theta.as_ref().map(|t| json!(t)).or_else(|| payload.get("theta").cloned());
    let sys = cover_system_for(&x, theta.as_ref())?;
    Ok((x, sys))
}

// selfcheck

struct Check {
    name: &'static str,
    cases: usize,
    failures: usize,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, cases: 0, failures: 0 }
    }
    fn record(&mut self, ok: bool) {
        self.cases += 1;
        self.failures += usize::from(!ok);
    }
    fn to_json(&self) -> Value {
        json!({ "name": self.name, "cases": self.cases, "failures": self.failures })
    }
}

fn random_entry(g: &mut ChaCha8Rng, k: &RatFuncField, d: usize) -> RatFunc {
    let q = k.field().size();
    let p = Poly::from_coeffs((0..=g.gen_range(0..=d)).map(|_| g.gen_range(0..q)).collect());
    k.mul(&k.from_base(p), &k.t_pow(-(g.gen_range(0..=d) as i64)))
}

fn random_volume_space(g: &mut ChaCha8Rng, k: &RatFuncField, n: usize, d: usize) -> VolumeSpace {
    loop {
        let b = Matrix::from_fn(n, n, |_, _| random_entry(g, k, d));
        if let Ok(vs) = VolumeSpace::new(k.clone(), b) {
            return vs;
        }
    }
}

fn random_rational(g: &mut ChaCha8Rng, bound: i64) -> Rational {
    Rational::from_ints(g.gen_range(-bound..=bound), g.gen_range(1..=bound))
}

fn selfcheck(seed: u64, scale: usize) -> (Value, bool) {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut chambers = Check::new("chamber-count formula against flag enumeration");
    for n in 2..=4 {
        for r in [2, 3] {
            for k in 1..n {
                chambers.record(count_chambers_on_edge(n, r, k).ok().and_then(|c| c.verified()) == Some(true));
            }
        }
    }
    checks.push(chambers);

    let mut tri = Check::new("triangulation reconstructs the point");
    for _ in 0..50 * scale {
        let n = g.gen_range(1..=5);
        let x: Vec<Rational> = (0..n).map(|_| random_rational(&mut g, 9)).collect();
        let ok = triangulate_point(&x).is_ok_and(|d| {
            d.point() == x
                && d.coeffs.iter().all(Rational::is_positive)
                && d.coeffs.iter().fold(Rational::zero(), |a, c| &a + c) == Rational::one()
                && d.points.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| b - a == 0 || b - a == 1))
        });
        tri.record(ok);
    }
    checks.push(tri);

    let mut orbit = Check::new("orbit invariants match volumes and c-values");
    let k = RatFuncField::over(Fq::new(2).expect("F_2"));
    for _ in 0..10 * scale {
        let n = g.gen_range(1..=3);
        let vs = random_volume_space(&mut g, &k, n, 2);
        let (d, rep) = ff_invariants_and_filtration(&vs);
        let id = latred_core::exactmath::matrix::identity(&k.base, n);
        let sum_ok = ff_logvol(&vs, &id).is_ok_and(|v| v == d.r.iter().sum::<i64>());
        let c_ok = rep.c_values.iter().zip(rep.interior_ranks()).all(|((w, c), m)| {
            *c == Rational::from(d.r[m] - d.r[m - 1]) && ff_c_value(&vs, w).is_ok_and(|x| Rational::from(x) == *c)
        });
        orbit.record(sum_ok && c_ok && d.r.windows(2).all(|w| w[0] <= w[1]));
    }
    checks.push(orbit);

    let mut fact = Check::new("factorization into localized and away-from-T parts");
    let primes = vec![BigInt::from(2), BigInt::from(3)];
    let loc = TLocalization::new(Integers, primes.clone());
    let away = AwayFromT::new(Integers, primes);
    for _ in 0..10 * scale {
        let n = g.gen_range(1..=3);
        let a = loop {
            let m = Matrix::from_fn(n, n, |_, _| random_rational(&mut g, 6));
            if !det(&QQ, &m).is_zero() {
                break m;
            }
        };
        fact.record(factorize(&loc, &a, FactorMode::General).is_ok_and(|(b, c)| {
            in_gl_localized(&loc, &b) && in_gl_away(&away, &c) && mat_mul(&QQ, &b, &c) == a
        }));
    }
    checks.push(fact);

    let mut core = Check::new("core test agrees with orbit representatives");
    core.record(core_orbit_reps(2, 1).is_ok_and(|r| r == vec![vec![0, 0], vec![0, 1]]));
    for _ in 0..20 * scale {
        let n = g.gen_range(1..=3);
        let theta = g.gen_range(0..=3u32);
        let ctx = BuildingContext::new(DegreeValuationRing::new(Fq::new(2).expect("F_2")), n).expect("rank ≥ 1");
        let vs = random_volume_space(&mut g, &k, n, 3);
        let ok = (|| -> Result<bool, Error> {
            let v = latred_core::building::canonical_vertex(&ctx, vs.basis())?;
            let r = normalize_r(&diagonal_basis(&vertex_volume_space(&ctx, &v)?).r);
            let sys = latred_core::covers::CoverSystem::new(Rational::from(theta as i64))?;
            Ok(core_test(&CoverPoint::vertex(ctx.clone(), v), &sys)? == core_orbit_reps(n, theta)?.contains(&r))
        })();
        core.record(ok.unwrap_or(false));
    }
    checks.push(core);

    let ok = checks.iter().all(|c| c.failures == 0);
    let v = json!({
        "seed": seed,
        "scale": scale,
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        "ok": ok,
    });
    (v, ok)
}
