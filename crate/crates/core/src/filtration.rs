//! Canonical plots, canonical filtrations and instability numbers for a
//! lattice of summands carrying a rank and a logarithmic volume.

use std::fmt::Debug;

use crate::exactmath::{LogRatio, Rational};
use crate::Error;

/// An exactly comparable logarithmic volume.
pub trait Height: Clone + Debug + Ord {
    type Slope: Clone + Debug + Ord;

    fn zero() -> Self;

    /// `(upper − lower) / gap`.
    fn slope(upper: &Self, lower: &Self, gap: usize) -> Self::Slope;

    /// `outgoing − incoming`.
    fn slope_gap(outgoing: &Self::Slope, incoming: &Self::Slope) -> Self::Slope;

    fn is_positive(s: &Self::Slope) -> bool;

    /// An upper bound for `from + steps·slope`, if one is cheap to get.
    fn shifted(_from: &Self, _slope: &Self::Slope, _steps: i64) -> Option<Self> {
        None
    }
}

impl Height for Rational {
    type Slope = Rational;

    fn zero() -> Self {
        Rational::zero()
    }
    fn slope(upper: &Self, lower: &Self, gap: usize) -> Rational {
        (upper - lower) / Rational::from(gap as i64)
    }
    fn slope_gap(outgoing: &Rational, incoming: &Rational) -> Rational {
        outgoing - incoming
    }
    fn is_positive(s: &Rational) -> bool {
        s.is_positive()
    }
    fn shifted(from: &Self, slope: &Rational, steps: i64) -> Option<Self> {
        Some(from + &(slope * &Rational::from(steps)))
    }
}

impl Height for i64 {
    type Slope = Rational;

    fn zero() -> Self {
        0
    }
    fn slope(upper: &Self, lower: &Self, gap: usize) -> Rational {
        Rational::from_ints(upper - lower, gap as i64)
    }
    fn slope_gap(outgoing: &Rational, incoming: &Rational) -> Rational {
        outgoing - incoming
    }
    fn is_positive(s: &Rational) -> bool {
        s.is_positive()
    }
    fn shifted(from: &Self, slope: &Rational, steps: i64) -> Option<Self> {
        (&Rational::from(*from) + &(slope * &Rational::from(steps))).floor().try_into().ok()
    }
}

/// A logarithmic volume `½·ln(v)` stored through the squared volume `v`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SqVolume(pub Rational);

impl SqVolume {
    pub fn ln_vol(&self) -> LogRatio {
        LogRatio::new(self.0.clone(), 2)
    }
}

impl Height for SqVolume {
    type Slope = LogRatio;

    fn zero() -> Self {
        SqVolume(Rational::one())
    }
    fn slope(upper: &Self, lower: &Self, gap: usize) -> LogRatio {
        LogRatio::new(&upper.0 / &lower.0, 2 * gap as u64)
    }
    fn slope_gap(outgoing: &LogRatio, incoming: &LogRatio) -> LogRatio {
        outgoing.sub(incoming)
    }
    fn is_positive(s: &LogRatio) -> bool {
        s.is_positive()
    }
    fn shifted(from: &Self, slope: &LogRatio, steps: i64) -> Option<Self> {
        // from·exp(2·steps·slope), exact when the power is rational
        let d = 2 * steps.unsigned_abs();
        if let Some(f) = slope.exp_multiple(d) {
            return Some(SqVolume(if steps >= 0 { &from.0 * &f } else { &from.0 / &f }));
        }
        let ln = from.0.ln() + 2.0 * steps as f64 * slope.to_f64();
        let approx = Rational::from_f64((ln.exp() * (1.0 + 1e-6)).max(f64::MIN_POSITIVE))?;
        ln.is_finite().then_some(SqVolume(approx))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoint<I, H> {
    pub id: I,
    pub rank: usize,
    pub height: H,
}

#[derive(Clone, Debug)]
pub struct FiltrationReport<I, H: Height> {
    /// Minimal point of each rank present in the input.
    pub minima: Vec<GradedPoint<I, H>>,
    /// Vertices of the lower convex hull, by increasing rank.
    pub path: Vec<GradedPoint<I, H>>,
    /// Handles of the path vertices, `0 = V₀ < … < V_m = 1`.
    pub chain: Vec<I>,
    /// Instability numbers of the interior chain members.
    pub c_values: Vec<(I, H::Slope)>,
}

impl<I: Clone, H: Height> FiltrationReport<I, H> {
    pub fn chain_ranks(&self) -> Vec<usize> {
        self.path.iter().map(|p| p.rank).collect()
    }

    pub fn interior_ranks(&self) -> Vec<usize> {
        let r = self.chain_ranks();
        r[1..r.len() - 1].to_vec()
    }
}

/// Lower convex hull of the per-rank minima; points on a segment between
/// two other points are omitted. Ties at a rank keep the first point.
pub fn canonical_plot<I: Clone, H: Height>(
    points: &[GradedPoint<I, H>],
    top_rank: usize,
) -> Result<FiltrationReport<I, H>, Error> {
    let mut minima: Vec<Option<GradedPoint<I, H>>> = vec![None; top_rank + 1];
    for p in points {
        if p.rank > top_rank {
            return Err(Error::Dimension(format!("rank {} exceeds top rank {top_rank}", p.rank)));
        }
        let slot = &mut minima[p.rank];
        if slot.as_ref().is_none_or(|m| p.height < m.height) {
            *slot = Some(p.clone());
        }
    }
    match &minima[0] {
        None => return Err(Error::IncompletePlot("missing rank-0 point".into())),
        Some(p) if p.height != H::zero() => {
            return Err(Error::IncompletePlot("rank-0 point must have height 0".into()))
        }
        _ => {}
    }
    if minima[top_rank].is_none() {
        return Err(Error::IncompletePlot(format!("missing rank-{top_rank} point")));
    }
    let minima: Vec<GradedPoint<I, H>> = minima.into_iter().flatten().collect();
    let mut hull: Vec<&GradedPoint<I, H>> = Vec::new();
    for p in &minima {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let s1 = H::slope(&b.height, &a.height, b.rank - a.rank);
            let s2 = H::slope(&p.height, &b.height, p.rank - b.rank);
            if s1 >= s2 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let path: Vec<GradedPoint<I, H>> = hull.into_iter().cloned().collect();
    let c_values = path
        .windows(3)
        .map(|w| {
            let inc = H::slope(&w[1].height, &w[0].height, w[1].rank - w[0].rank);
            let out = H::slope(&w[2].height, &w[1].height, w[2].rank - w[1].rank);
            (w[1].id.clone(), H::slope_gap(&out, &inc))
        })
        .collect();
    let chain = path.iter().map(|p| p.id.clone()).collect();
    Ok(FiltrationReport { minima, path, chain, c_values })
}

/// Access to a lattice of summands satisfying the rank/volume axioms:
/// rank strictly monotone and additive, volume subadditive, finitely many
/// summands below any volume bound, and `0` of rank and volume zero.
pub trait LatticeOracle {
    type Handle: Clone + Debug + Ord;
    type Height: Height;

    fn top_rank(&self) -> usize;
    fn zero(&self) -> Self::Handle;
    fn top(&self) -> Self::Handle;
    fn rank(&self, w: &Self::Handle) -> usize;
    fn height(&self, w: &Self::Handle) -> Self::Height;

    /// All summands of the given rank with height at most `bound`.
    fn summands_up_to(&self, rank: usize, bound: &Self::Height) -> Result<Vec<Self::Handle>, Error>;

    /// Whether `a ⊆ b`.
    fn is_below(&self, a: &Self::Handle, b: &Self::Handle) -> bool;

    fn meet(&self, a: &Self::Handle, b: &Self::Handle) -> Self::Handle;

    fn join(&self, a: &Self::Handle, b: &Self::Handle) -> Self::Handle;

    /// Summands of the given rank containing `w` with height at most `bound`.
    fn summands_above(&self, w: &Self::Handle, rank: usize, bound: &Self::Height) -> Result<Vec<Self::Handle>, Error> {
        Ok(self.summands_up_to(rank, bound)?.into_iter().filter(|x| self.is_below(w, x)).collect())
    }

    /// Summands of the given rank contained in `w` with height at most `bound`.
    fn summands_below(&self, w: &Self::Handle, rank: usize, bound: &Self::Height) -> Result<Vec<Self::Handle>, Error> {
        Ok(self.summands_up_to(rank, bound)?.into_iter().filter(|x| self.is_below(x, w)).collect())
    }

    /// The summands of minimal height among those of the given rank with
    /// height at most `bound` (empty if there are none).
    fn minimal_summands(&self, rank: usize, bound: &Self::Height) -> Result<Vec<Self::Handle>, Error> {
        let all = self.summands_up_to(rank, bound)?;
        let Some(min) = all.iter().map(|w| self.height(w)).min() else { return Ok(Vec::new()) };
        Ok(all.into_iter().filter(|w| self.height(w) == min).collect())
    }
}

fn hull_bound<O: LatticeOracle>(oracle: &O) -> O::Height {
    let top = oracle.height(&oracle.top());
    std::cmp::max(top, O::Height::zero())
}

/// The canonical filtration: the unique summands realizing the vertices of
/// the lower convex hull of the per-rank minima, with their c-values.
pub fn canonical_filtration<O: LatticeOracle>(
    oracle: &O,
) -> Result<FiltrationReport<O::Handle, O::Height>, Error> {
    let n = oracle.top_rank();
    let bound = hull_bound(oracle);
    let zero = oracle.zero();
    let mut points = vec![GradedPoint { id: zero.clone(), rank: 0, height: oracle.height(&zero) }];
    let mut ties: Vec<usize> = Vec::new();
    for k in 1..n {
        let mins = oracle.minimal_summands(k, &bound)?;
        if mins.len() > 1 {
            ties.push(k);
        }
        points.extend(mins.into_iter().map(|w| GradedPoint { rank: k, height: oracle.height(&w), id: w }));
    }
    let top = oracle.top();
    points.push(GradedPoint { id: top.clone(), rank: n, height: oracle.height(&top) });
    let report = canonical_plot(&points, n)?;
    for p in &report.path {
        if ties.contains(&p.rank) {
            return Err(Error::ViolatedUniqueness(p.rank));
        }
    }
    Ok(report)
}

/// The instability number of `w`: the infimum over `W₀ ⊊ w ⊊ W₂` of
/// `slope(W₂, w) − slope(w, W₀)`, evaluated exactly over every comparable
/// summand that can attain it.
pub fn c_value<O: LatticeOracle>(
    oracle: &O,
    w: &O::Handle,
) -> Result<<O::Height as Height>::Slope, Error> {
    let n = oracle.top_rank();
    let m = oracle.rank(w);
    if m == 0 || m == n {
        return Err(Error::BoundaryModule);
    }
    let hw = oracle.height(w);
    let top = oracle.top();
    // Any W₂ beating slope(1, w) has height ≤ max(h(w), h(1)); any W₀
    // beating slope(w, 0) has height ≤ max(0, h(w)).
    let up_bound = std::cmp::max(hw.clone(), oracle.height(&top));
    let down_bound = std::cmp::max(hw.clone(), O::Height::zero());
    let mut outgoing = O::Height::slope(&oracle.height(&top), &hw, n - m);
    for k in m + 1..n {
        let bound = match O::Height::shifted(&hw, &outgoing, (k - m) as i64) {
            Some(b) => std::cmp::min(b, up_bound.clone()),
            None => up_bound.clone(),
        };
        for x in oracle.summands_above(w, k, &bound)? {
            outgoing = outgoing.min(O::Height::slope(&oracle.height(&x), &hw, k - m));
        }
    }
    let mut incoming = O::Height::slope(&hw, &O::Height::zero(), m);
    for j in (1..m).rev() {
        let bound = match O::Height::shifted(&hw, &incoming, -((m - j) as i64)) {
            Some(b) => std::cmp::min(b, down_bound.clone()),
            None => down_bound.clone(),
        };
        for x in oracle.summands_below(w, j, &bound)? {
            incoming = incoming.max(O::Height::slope(&hw, &oracle.height(&x), m - j));
        }
    }
    Ok(O::Height::slope_gap(&outgoing, &incoming))
}
