#![allow(dead_code)]

use latred_core::exactmath::matrix::{det, identity, mat_mul};
use latred_core::exactmath::{Field, Fq, FqPolyRing, Matrix, Poly, RatFunc, RatFuncField, Rational, Ring};
use latred_core::latff::{bounded_vectors, compound, ff_logvol, sub_quotient, FFSummand, VolumeSpace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_poly(rng: &mut ChaCha8Rng, fq: &Fq, max_deg: usize) -> Poly {
    Poly::from_coeffs((0..=max_deg).map(|_| rng.gen_range(0..fq.size())).collect())
}

/// `p(t)/t^a` with `deg p ≤ d` and `0 ≤ a ≤ d`, so degrees lie in `[−d, d]`.
pub fn random_entry(rng: &mut ChaCha8Rng, k: &RatFuncField, d: usize) -> RatFunc {
    let deg = rng.gen_range(0..=d);
    let p = random_poly(rng, &k.field(), deg);
    k.mul(&k.from_base(p), &k.t_pow(-(rng.gen_range(0..=d) as i64)))
}

pub fn random_volume_space(rng: &mut ChaCha8Rng, k: &RatFuncField, n: usize, d: usize) -> VolumeSpace {
    loop {
        let b = Matrix::from_fn(n, n, |_, _| random_entry(rng, k, d));
        if let Ok(vs) = VolumeSpace::new(k.clone(), b) {
            return vs;
        }
    }
}

/// Product of random elementary matrices over F_q[t].
pub fn random_unimodular(rng: &mut ChaCha8Rng, ring: &FqPolyRing, n: usize, steps: usize, d: usize) -> Matrix<Poly> {
    let mut m = identity(ring, n);
    for _ in 0..steps {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j || n < 2 {
            continue;
        }
        let f = random_poly(rng, &ring.field, d);
        for c in 0..n {
            let v = ring.add(m.get(i, c), &ring.mul(&f, m.get(j, c)));
            m.set(i, c, v);
        }
    }
    m
}

/// Random element of `GL_n(R)`: elementary operations with multipliers of
/// degree ≤ 0.
pub fn random_r_unimodular(rng: &mut ChaCha8Rng, k: &RatFuncField, n: usize, steps: usize) -> Matrix<RatFunc> {
    let mut m = identity(k, n);
    for _ in 0..steps {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j || n < 2 {
            continue;
        }
        let p = random_poly(rng, &k.field(), 2);
        let f = k.mul(&k.from_base(p), &k.t_pow(-2));
        for r in 0..n {
            let v = k.add(m.get(r, i), &k.mul(&f, m.get(r, j)));
            m.set(r, i, v);
        }
    }
    m
}

/// A random saturated summand of the given rank spanned by small vectors.
pub fn random_summand(rng: &mut ChaCha8Rng, ring: &FqPolyRing, n: usize, m: usize, d: usize) -> FFSummand {
    let k = RatFuncField::over(ring.field);
    loop {
        let rows = Matrix::from_fn(m, n, |_, _| random_poly(rng, &ring.field, d));
        let w = FFSummand::span(ring, &rows);
        let rk = latred_core::exactmath::matrix::rank(&k, &rows.map(|x| k.from_base(x.clone())));
        if w.rank() == m && rk == m {
            return w;
        }
    }
}

/// Smallest logarithmic volume of a rank-`r` summand, read off from the
/// smallest nonzero level of the `r`-th exterior power; valid for
/// `r ∈ {0, 1, n−1, n}`, where every Plücker vector is decomposable.
pub fn min_logvol(vs: &VolumeSpace, r: usize) -> i64 {
    let n = vs.n();
    if r == 0 {
        return 0;
    }
    if r == n {
        return ff_logvol(vs, &identity(vs.ring(), n)).unwrap();
    }
    assert!(r == 1 || r + 1 == n, "decomposability is automatic only in rank 1 and corank 1");
    let k = vs.field();
    let a = compound(k, vs.coords(), r);
    let a_inv = compound(k, vs.basis(), r);
    let mut j = -100;
    while bounded_vectors(k, &a, &a_inv, j).is_empty() {
        j += 1;
    }
    j
}

/// `c_W` as the infimum of outgoing minus incoming slopes, computed from
/// per-rank minima of the restriction and the quotient.
pub fn c_by_definition(vs: &VolumeSpace, w: &FFSummand) -> Rational {
    let sq = sub_quotient(vs, w).unwrap();
    let m = w.rank();
    let nq = vs.n() - m;
    let hw = ff_logvol(&sq.sub, &identity(vs.ring(), m)).unwrap();
    let out = (1..=nq)
        .map(|k| Rational::from_ints(min_logvol(&sq.quotient, k), k as i64))
        .min()
        .unwrap();
    let inc = (0..m)
        .map(|j| Rational::from_ints(hw - min_logvol(&sq.sub, j), (m - j) as i64))
        .max()
        .unwrap();
    out - inc
}

/// Degree of the determinant of a square matrix of rational functions.
pub fn det_degree(k: &RatFuncField, a: &Matrix<RatFunc>) -> Option<i64> {
    k.degree(&det(k, a))
}

pub fn poly_to_field(k: &RatFuncField, a: &Matrix<Poly>) -> Matrix<RatFunc> {
    a.map(|x| k.from_base(x.clone()))
}

pub fn field_mul(k: &RatFuncField, a: &Matrix<RatFunc>, b: &Matrix<RatFunc>) -> Matrix<RatFunc> {
    mat_mul(k, a, b)
}

pub fn invert(k: &RatFuncField, x: &RatFunc) -> RatFunc {
    k.inv(x)
}
