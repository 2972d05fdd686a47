//! Local combinatorics of the affine building over a discrete valuation
//! ring: vertices as homothety classes of lattices, neighbors, label
//! differences, chamber counts, apartment coordinates and the standard
//! triangulation of ℝⁿ.

use num_traits::ToPrimitive;

use crate::exactmath::matrix::{det, diagonal, identity, inverse, mat_mul, rank, Matrix};
use crate::exactmath::normal_form::{hnf_columns, smith_normal_form};
use crate::exactmath::{DegreeValuationRing, Dvr, Field, FractionField, Fq, PAdicIntegers, Rational, Ring};
use crate::Error;

/// Largest residue field size for neighbor enumeration.
pub const MAX_RESIDUE_SIZE: u32 = 5;
/// Largest rank for neighbor enumeration.
pub const MAX_NEIGHBOR_RANK: usize = 4;

/// A discrete valuation ring `O` with fraction field `k`, and the rank `n`.
#[derive(Clone, Debug)]
pub struct BuildingContext<D> {
    pub ring: D,
    pub n: usize,
}

pub type PAdicBuilding = BuildingContext<PAdicIntegers>;
pub type DegreeBuilding = BuildingContext<DegreeValuationRing>;

/// A homothety class of `O`-lattices in `kⁿ`, stored as the column Hermite
/// form over `O` of its unique representative `L ⊆ Oⁿ` with `L ⊄ πOⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex<E> {
    basis: Matrix<E>,
}

impl<E> Vertex<E> {
    /// Columns form an `O`-basis of the representative lattice.
    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }
}

impl<D: Dvr> BuildingContext<D>
where
    FractionField<D::Base>: Field<Elem = D::Elem>,
{
    pub fn new(ring: D, n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Dimension("rank must be positive".into()));
        }
        Ok(BuildingContext { ring, n })
    }

    pub fn field(&self) -> &FractionField<D::Base> {
        self.ring.fraction_field()
    }

    pub fn residue_field(&self) -> Fq {
        self.ring.residue_field()
    }

    pub fn residue_size(&self) -> u32 {
        self.residue_field().size()
    }

    pub fn standard_vertex(&self) -> Vertex<D::Elem> {
        Vertex { basis: identity(self.field(), self.n) }
    }

    /// The vertex `[π^{m₁}e₁, …, π^{m_n}e_n]` of the standard apartment.
    pub fn diagonal_vertex(&self, m: &[i64]) -> Result<Vertex<D::Elem>, Error> {
        if m.len() != self.n {
            return Err(Error::Dimension(format!("expected {} exponents", self.n)));
        }
        let d: Vec<D::Elem> = m.iter().map(|&k| self.ring.uniformizer_pow(k)).collect();
        canonical_vertex(self, &diagonal(self.field(), &d))
    }

    /// The vertex `[g·L]`.
    pub fn act(&self, g: &Matrix<D::Elem>, v: &Vertex<D::Elem>) -> Result<Vertex<D::Elem>, Error> {
        canonical_vertex(self, &mat_mul(self.field(), g, &v.basis))
    }
}

/// Canonical representative of the class of the lattice spanned by the
/// columns of `basis`.
pub fn canonical_vertex<D: Dvr>(ctx: &BuildingContext<D>, basis: &Matrix<D::Elem>) -> Result<Vertex<D::Elem>, Error>
where
    FractionField<D::Base>: Field<Elem = D::Elem>,
{
    if basis.rows() != ctx.n || basis.cols() != ctx.n {
        return Err(Error::Dimension(format!("expected a {0}×{0} basis", ctx.n)));
    }
    canonical_from_generators(ctx, basis)
}

fn canonical_from_generators<D: Dvr>(ctx: &BuildingContext<D>, gens: &Matrix<D::Elem>) -> Result<Vertex<D::Elem>, Error>
where
    FractionField<D::Base>: Field<Elem = D::Elem>,
{
    let ring = &ctx.ring;
    let min = gens
        .entries()
        .iter()
        .filter_map(|x| ring.valuation(x))
        .min()
        .ok_or_else(|| Error::RankDeficient("zero lattice".into()))?;
    let shift = ring.uniformizer_pow(-min);
    let scaled = gens.map(|x| ring.mul(&shift, x));
    let h = hnf_columns(ring, &scaled);
    if h.cols() != ctx.n {
        return Err(Error::RankDeficient(format!("generators span rank {} < {}", h.cols(), ctx.n)));
    }
    Ok(Vertex { basis: h })
}

/// All `k`-dimensional subspaces of `κⁿ`, each as its reduced row echelon
/// basis, in a fixed deterministic order.
pub fn subspaces(field: &Fq, n: usize, k: usize) -> Vec<Matrix<u32>> {
    let q = field.size();
    let mut out = Vec::new();
    for pivots in itertools::Itertools::combinations(0..n, k) {
        // free positions: right of the row's pivot, outside pivot columns
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|l| (pivots[l] + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (l, c)))
            .collect();
        let mut digits = vec![0u32; free.len()];
        loop {
            let mut m = Matrix::filled(k, n, 0u32);
            for (l, &p) in pivots.iter().enumerate() {
                m.set(l, p, 1);
            }
            for (&(l, c), &x) in free.iter().zip(&digits) {
                m.set(l, c, x);
            }
            out.push(m);
            // odometer over κ^free
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
    out
}

/// Neighbors of `v` with their label differences `dim U mod n`, one per
/// proper nonzero subspace `U` of `π⁻¹L/L ≅ κⁿ`.
pub fn neighbors<D: Dvr>(ctx: &BuildingContext<D>, v: &Vertex<D::Elem>) -> Result<Vec<(Vertex<D::Elem>, usize)>, Error>
where
    FractionField<D::Base>: Field<Elem = D::Elem>,
{
    let n = ctx.n;
    let r = ctx.residue_size();
    if r > MAX_RESIDUE_SIZE || n > MAX_NEIGHBOR_RANK {
        return Err(Error::Scale(format!(
            "neighbor enumeration needs residue size ≤ {MAX_RESIDUE_SIZE} and n ≤ {MAX_NEIGHBOR_RANK}"
        )));
    }
    let (ring, field) = (&ctx.ring, ctx.field());
    let kappa = ctx.residue_field();
    let inv_pi = ring.uniformizer_pow(-1);
    let mut out = Vec::new();
    for k in 1..n {
        for u in subspaces(&kappa, n, k) {
            let mut gens = Matrix::filled(n, n + k, field.zero());
            for i in 0..n {
                for j in 0..n {
                    gens.set(i, j, v.basis.get(i, j).clone());
                }
            }
            for l in 0..k {
                for i in 0..n {
                    let mut x = field.zero();
                    for j in 0..n {
                        let c = ring.lift_residue(*u.get(l, j));
                        x = field.add(&x, &field.mul(v.basis.get(i, j), &c));
                    }
                    gens.set(i, n + l, field.mul(&inv_pi, &x));
                }
            }
            out.push((canonical_from_generators(ctx, &gens)?, k));
        }
    }
    Ok(out)
}

/// `dim_κ(L₂/L₁) mod n` for representatives `L₁ ⊆ L₂`, read off from the
/// valuation of the determinant of the base change.
pub fn label_difference<D: Dvr>(ctx: &BuildingContext<D>, v1: &Vertex<D::Elem>, v2: &Vertex<D::Elem>) -> usize
where
    FractionField<D::Base>: Field<Elem = D::Elem>,
{
    let field = ctx.field();
    let ratio = field.div(&det(field, &v2.basis), &det(field, &v1.basis));
    let val = ctx.ring.valuation(&ratio).expect("lattice bases are invertible");
    (-val).rem_euclid(ctx.n as i64) as usize
}

/// Valuations of the elementary divisors of the base change from `v1` to
/// `v2`, ascending and shifted to start at 0.
pub fn relative_position<D: Dvr>(ctx: &BuildingContext<D>, v1: &Vertex<D::Elem>, v2: &Vertex<D::Elem>) -> Vec<i64>
where
    FractionField<D::Base>: Field<Elem = D::Elem>,
{
    let (ring, field) = (&ctx.ring, ctx.field());
    let m = mat_mul(field, &inverse(field, &v1.basis).expect("lattice bases are invertible"), &v2.basis);
    let min = m.entries().iter().filter_map(|x| ring.valuation(x)).min().expect("nonzero base change");
    let m = m.map(|x| ring.mul(&ring.uniformizer_pow(-min), x));
    let snf = smith_normal_form(ring, &m);
    let mut v: Vec<i64> = (0..ctx.n).map(|i| ring.valuation(snf.d.get(i, i)).expect("invertible")).collect();
    v.sort();
    v
}

/// Whether two distinct vertices span an edge.
pub fn adjacent<D: Dvr>(ctx: &BuildingContext<D>, v1: &Vertex<D::Elem>, v2: &Vertex<D::Elem>) -> bool
where
    FractionField<D::Base>: Field<Elem = D::Elem>,
{
    v1 != v2 && relative_position(ctx, v1, v2).last() == Some(&1)
}

/// The number of chambers through an edge of label difference `k`, with an
/// exhaustive flag count when `n ≤ 4` and `r ≤ 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberCount {
    pub formula: u128,
    pub brute_force: Option<u128>,
}

impl ChamberCount {
    pub fn verified(&self) -> Option<bool> {
        self.brute_force.map(|b| b == self.formula)
    }
}

fn gaussian_factorial(k: usize, r: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut pow: u128 = 1;
    for _ in 1..=k {
        pow = pow.checked_mul(r)?;
        acc = acc.checked_mul((pow - 1) / (r - 1))?;
    }
    Some(acc)
}

pub fn count_chambers_on_edge(n: usize, r: u32, k: usize) -> Result<ChamberCount, Error> {
    if k == 0 || k >= n {
        return Err(Error::OutOfRange(format!("label difference {k} not in 1..{n}")));
    }
    if r < 2 {
        return Err(Error::OutOfRange("residue field size must be at least 2".into()));
    }
    let overflow = || Error::Scale("chamber count overflows".into());
    let formula = gaussian_factorial(k, r as u128)
        .and_then(|a| gaussian_factorial(n - k, r as u128).and_then(|b| a.checked_mul(b)))
        .ok_or_else(overflow)?;
    let brute_force = if n <= 4 && r <= 3 { Some(count_flags_through(&Fq::new(r as u64)?, n, k)) } else { None };
    Ok(ChamberCount { formula, brute_force })
}

fn contained_in(field: &Fq, a: &Matrix<u32>, b: &Matrix<u32>) -> bool {
    rank(field, &b.stack(a)) == b.rows()
}

/// Complete flags `V₁ ⊂ … ⊂ V_{n−1}` of `κⁿ` with `V_k = ⟨e₁, …, e_k⟩`,
/// counted by enumerating every complete flag.
fn count_flags_through(field: &Fq, n: usize, k: usize) -> u128 {
    let by_dim: Vec<Vec<Matrix<u32>>> = (0..n).map(|d| subspaces(field, n, d)).collect();
    let target = Matrix::from_fn(k, n, |i, j| u32::from(i == j));
    fn walk(field: &Fq, by_dim: &[Vec<Matrix<u32>>], chain: &mut Vec<Matrix<u32>>, k: usize, target: &Matrix<u32>) -> u128 {
        let d = chain.len() + 1;
        if d == by_dim.len() {
            return u128::from(chain[k - 1] == *target);
        }
        let mut total = 0;
        for s in &by_dim[d] {
            if chain.last().is_none_or(|prev| contained_in(field, prev, s)) {
                chain.push(s.clone());
                total += walk(field, by_dim, chain, k, target);
                chain.pop();
            }
        }
        total
    }
    walk(field, &by_dim, &mut Vec::new(), k, &target)
}

/// Orthogonal projection of `m` onto the hyperplane `Σxᵢ = 0`.
pub fn apartment_coords(m: &[i64]) -> Vec<Rational> {
    if m.is_empty() {
        return Vec::new();
    }
    let mean = Rational::from_ints(m.iter().sum(), m.len() as i64);
    m.iter().map(|&x| &Rational::from(x) - &mean).collect()
}

/// `x = Σ μᵢ pᵢ` with `p₀ < … < p_m ≤ p₀ + (1, …, 1)`, `0 < μᵢ ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexDecomposition {
    pub points: Vec<Vec<i64>>,
    pub coeffs: Vec<Rational>,
}

impl SimplexDecomposition {
    /// `Σ μᵢ pᵢ`.
    pub fn point(&self) -> Vec<Rational> {
        let n = self.points.first().map_or(0, Vec::len);
        let mut x = vec![Rational::zero(); n];
        for (p, mu) in self.points.iter().zip(&self.coeffs) {
            for (xi, &pi) in x.iter_mut().zip(p) {
                *xi = &*xi + &(mu * &Rational::from(pi));
            }
        }
        x
    }
}

/// The unique simplex decomposition of `x` in the standard triangulation:
/// floor shift, then one vertex per distinct positive fractional part.
pub fn triangulate_point(x: &[Rational]) -> Result<SimplexDecomposition, Error> {
    let base: Vec<i64> = x
        .iter()
        .map(|xi| xi.floor().to_i64().ok_or_else(|| Error::OutOfRange(format!("coordinate {xi} too large"))))
        .collect::<Result<_, _>>()?;
    let frac: Vec<Rational> = x.iter().zip(&base).map(|(xi, &b)| xi - &Rational::from(b)).collect();
    let mut levels: Vec<Rational> = frac.iter().filter(|f| f.is_positive()).cloned().collect();
    levels.sort_by(|a, b| b.cmp(a));
    levels.dedup();
    let mut points = vec![base.clone()];
    let mut coeffs = vec![&Rational::one() - levels.first().unwrap_or(&Rational::zero())];
    for (i, a) in levels.iter().enumerate() {
        points.push(base.iter().zip(&frac).map(|(&b, f)| b + i64::from(f >= a)).collect());
        coeffs.push(a - levels.get(i + 1).unwrap_or(&Rational::zero()));
    }
    Ok(SimplexDecomposition { points, coeffs })
}

/// Squared length `k − k²/n` of an apartment edge of label difference `k`.
pub fn edge_length_sq(k: usize, n: usize) -> Result<Rational, Error> {
    if k == 0 || k >= n {
        return Err(Error::OutOfRange(format!("label difference {k} not in 1..{n}")));
    }
    let (k, n) = (k as i64, n as i64);
    Ok(Rational::from_ints(k * n - k * k, n))
}

pub fn edge_length(k: usize, n: usize) -> Result<f64, Error> {
    Ok(edge_length_sq(k, n)?.to_f64().sqrt())
}
