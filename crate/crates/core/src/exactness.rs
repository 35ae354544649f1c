//! Diagnostics for exactness: how sets and densities evolve under the map.
//!
//! Set images and the transfer operator are computed exactly. Only the power
//! iteration on the Ulam matrix runs in floating point.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::map::PiecewiseLinearMap;
use crate::rational::{to_f64, Rational};

/// Finite union of disjoint subintervals of `[0,1]`, sorted and merged.
///
/// Endpoints carry no open/closed distinction: only Lebesgue measure is
/// ever read from a set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    /// Normalizes arbitrary pairs; each must satisfy `0 ≤ lo ≤ hi ≤ 1`.
    /// Degenerate pairs are dropped, overlapping or touching ones merged.
    pub fn new<I>(intervals: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let zero = Rational::zero();
        let one = Rational::one();
        let mut raw = Vec::new();
        for (lo, hi) in intervals {
            if lo < zero || hi > one || lo > hi {
                return Err(Error::InvalidInterval { lo, hi });
            }
            raw.push((lo, hi));
        }
        Ok(Self::normalized(raw))
    }

    pub fn full() -> Self {
        IntervalSet {
            intervals: vec![(Rational::zero(), Rational::one())],
        }
    }

    fn normalized(mut raw: Vec<(Rational, Rational)>) -> Self {
        raw.retain(|(lo, hi)| lo < hi);
        raw.sort();
        let mut intervals: Vec<(Rational, Rational)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => intervals.push((lo, hi)),
            }
        }
        IntervalSet { intervals }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    /// Number of connected components.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, (lo, hi)| acc + (hi - lo))
    }
}

/// Exact image `f(A)`.
pub fn push_forward_set(map: &PiecewiseLinearMap, set: &IntervalSet) -> IntervalSet {
    let mut images = Vec::new();
    for (lo, hi) in set.intervals() {
        for br in map.branches() {
            let u = lo.max(&br.domain_lo);
            let w = hi.min(&br.domain_hi);
            if u < w {
                images.push((br.apply(u), br.apply(w)));
            }
        }
    }
    IntervalSet::normalized(images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evolution {
    /// `measures[n]` is the measure of `f^n(A)`.
    pub measures: Vec<Rational>,
    /// First `n` with `f^n(A)` of full measure; `None` if the cap was hit first.
    pub n_full: Option<usize>,
    /// The last set computed.
    pub last: IntervalSet,
}

/// Pushes `set` forward until it has measure exactly 1 or `cap` steps have
/// been taken. Hitting the cap is not evidence against exactness.
pub fn evolve_until_full(
    map: &PiecewiseLinearMap,
    set: &IntervalSet,
    cap: usize,
) -> Result<Evolution, Error> {
    let one = Rational::one();
    let mut measure = set.measure();
    if measure.is_zero() {
        return Err(Error::EmptyInput);
    }
    let mut current = set.clone();
    let mut measures = vec![measure.clone()];
    while measure != one && measures.len() <= cap {
        current = push_forward_set(map, &current);
        measure = current.measure();
        measures.push(measure.clone());
    }
    let n_full = (measure == one).then(|| measures.len() - 1);
    Ok(Evolution {
        measures,
        n_full,
        last: current,
    })
}

/// Density that is constant on each cell `(breakpoints[i], breakpoints[i+1])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseConstantDensity {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

impl PiecewiseConstantDensity {
    /// Checks that breakpoints run strictly upward from 0 to 1, values are
    /// non-negative, and the total integral is exactly 1.
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self, Error> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() + 1 {
            return Err(Error::InvalidDensity("need one value per cell"));
        }
        if !breakpoints[0].is_zero() || !breakpoints[breakpoints.len() - 1].is_one() {
            return Err(Error::InvalidDensity("breakpoints must start at 0 and end at 1"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDensity("breakpoints must be strictly increasing"));
        }
        if values.iter().any(|v| v < &Rational::zero()) {
            return Err(Error::InvalidDensity("values must be non-negative"));
        }
        let density = PiecewiseConstantDensity {
            breakpoints,
            values,
        };
        if !density.integral().is_one() {
            return Err(Error::InvalidDensity("integral must equal 1"));
        }
        Ok(density)
    }

    pub fn uniform() -> Self {
        PiecewiseConstantDensity {
            breakpoints: vec![Rational::zero(), Rational::one()],
            values: vec![Rational::one()],
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn integral(&self) -> Rational {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .fold(Rational::zero(), |acc, (w, v)| acc + (&w[1] - &w[0]) * v)
    }

    /// Value on the cell containing `x`; breakpoints belong to the cell on
    /// their left (the first cell also owns 0).
    pub fn value_at(&self, x: &Rational) -> Option<&Rational> {
        if x < &self.breakpoints[0] || x > &self.breakpoints[self.breakpoints.len() - 1] {
            return None;
        }
        let idx = self.breakpoints[1..].partition_point(|b| b < x);
        self.values.get(idx)
    }
}

/// Frobenius–Perron operator applied exactly:
/// `(Pg)(y) = Σ g(x)/slope` over the branch preimages `x` of `y`.
///
/// The result lives on the partition cut by the images of `g`'s breakpoints
/// and of the branch endpoints; adjacent cells with equal values are merged.
pub fn transfer_density(
    map: &PiecewiseLinearMap,
    g: &PiecewiseConstantDensity,
) -> PiecewiseConstantDensity {
    let mut pieces = Vec::new();
    for br in map.branches() {
        let inv_slope = br.slope.recip();
        for (cell, value) in g.breakpoints.windows(2).zip(&g.values) {
            if value.is_zero() {
                continue;
            }
            let u = (&cell[0]).max(&br.domain_lo);
            let w = (&cell[1]).min(&br.domain_hi);
            if u < w {
                pieces.push((br.apply(u), br.apply(w), value * &inv_slope));
            }
        }
    }

    let mut cuts = vec![Rational::zero(), Rational::one()];
    for (lo, hi, _) in &pieces {
        cuts.push(lo.clone());
        cuts.push(hi.clone());
    }
    cuts.sort();
    cuts.dedup();

    let mut diff = vec![Rational::zero(); cuts.len()];
    for (lo, hi, v) in pieces {
        let start = cuts.binary_search(&lo).expect("cut present");
        let end = cuts.binary_search(&hi).expect("cut present");
        diff[start] += &v;
        diff[end] -= v;
    }

    let mut breakpoints = vec![Rational::zero()];
    let mut values: Vec<Rational> = Vec::new();
    let mut running = Rational::zero();
    for (i, d) in diff.into_iter().take(cuts.len() - 1).enumerate() {
        running += d;
        if values.last() == Some(&running) {
            *breakpoints.last_mut().expect("nonempty") = cuts[i + 1].clone();
        } else {
            values.push(running.clone());
            breakpoints.push(cuts[i + 1].clone());
        }
    }
    PiecewiseConstantDensity {
        breakpoints,
        values,
    }
}

/// Row-stochastic Ulam matrix over the uniform partition `{[i/k, (i+1)/k]}`:
/// entry `(i, j)` is the fraction of cell `i` that the map sends into cell `j`.
///
/// Rows are stored sparsely as `(column, value)` pairs with increasing
/// columns and nonzero values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlamMatrix {
    k: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl UlamMatrix {
    /// Builds a matrix from dense rows, checking squareness, non-negativity
    /// and unit row sums.
    pub fn from_dense(rows: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidArgument("matrix must be nonempty"));
        }
        let mut sparse = Vec::with_capacity(k);
        for row in rows {
            if row.len() != k {
                return Err(Error::InvalidArgument("matrix must be square"));
            }
            if row.iter().any(|v| v < &Rational::zero()) {
                return Err(Error::InvalidArgument("matrix entries must be non-negative"));
            }
            let entries: Vec<_> = row
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            if !entries
                .iter()
                .fold(Rational::zero(), |acc, (_, v)| acc + v)
                .is_one()
            {
                return Err(Error::InvalidArgument("matrix rows must sum to 1"));
            }
            sparse.push(entries);
        }
        Ok(UlamMatrix { k, rows: sparse })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.rows[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|pos| self.rows[i][pos].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        self.rows[i]
            .iter()
            .fold(Rational::zero(), |acc, (_, v)| acc + v)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

fn floor_to_usize(r: &Rational) -> usize {
    let f: BigInt = r.floor().to_integer();
    usize::try_from(f).unwrap_or(0)
}

pub fn ulam_matrix(map: &PiecewiseLinearMap, k: usize) -> Result<UlamMatrix, Error> {
    if k < 2 {
        return Err(Error::InvalidArgument("Ulam partition needs at least 2 cells"));
    }
    let kr = Rational::from_integer(BigInt::from(k));
    let cell_edge = |i: usize| Rational::new(BigInt::from(i), BigInt::from(k));
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let (lo, hi) = (cell_edge(i), cell_edge(i + 1));
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for br in map.branches() {
            let u = (&lo).max(&br.domain_lo);
            let w = (&hi).min(&br.domain_hi);
            if u >= w {
                continue;
            }
            let (img_lo, img_hi) = (br.apply(u), br.apply(w));
            let first = floor_to_usize(&(&img_lo * &kr)).min(k - 1);
            // Preimage length of (image ∩ cell j) is overlap/slope; the row is
            // normalized by the cell width 1/k.
            let scale = &kr / &br.slope;
            for j in first..k {
                let (cj_lo, cj_hi) = (cell_edge(j), cell_edge(j + 1));
                if cj_lo >= img_hi {
                    break;
                }
                let a = (&img_lo).max(&cj_lo);
                let b = (&img_hi).min(&cj_hi);
                if a < b {
                    *acc.entry(j).or_insert_with(Rational::zero) += (b - a) * &scale;
                }
            }
        }
        rows.push(acc.into_iter().collect());
    }
    Ok(UlamMatrix { k, rows })
}

/// Floating-point approximation of the invariant density.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDensity {
    /// Probability mass per cell; sums to 1.
    pub masses: Vec<f64>,
    /// Density value per cell, `mass · k`.
    pub values: Vec<f64>,
    /// L1 distance between the last two iterates.
    pub residual: f64,
    pub iterations: usize,
}

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Left fixed vector `πM = π` by power iteration from the uniform vector.
///
/// Stops when the L1 change between successive iterates drops below `tol`.
/// On running out of iterations the last iterate is returned inside
/// [`Error::NotConverged`].
pub fn stationary_density(
    matrix: &UlamMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<StationaryDensity, Error> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let k = matrix.k;
    let rows: Vec<Vec<(usize, f64)>> = matrix
        .rows
        .iter()
        .map(|r| r.iter().map(|(j, v)| (*j, to_f64(v))).collect())
        .collect();
    let mut pi = vec![1.0 / k as f64; k];
    let mut next = vec![0.0; k];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        next.iter_mut().for_each(|x| *x = 0.0);
        for (i, row) in rows.iter().enumerate() {
            let mass = pi[i];
            if mass == 0.0 {
                continue;
            }
            for &(j, w) in row {
                next[j] += mass * w;
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        residual = pi.iter().zip(&next).map(|(a, b)| libm::fabs(a - b)).sum();
        core::mem::swap(&mut pi, &mut next);
        if residual < tol {
            break;
        }
    }
    let values = pi.iter().map(|m| m * k as f64).collect();
    let result = StationaryDensity {
        masses: pi,
        values,
        residual,
        iterations,
    };
    if residual < tol {
        Ok(result)
    } else {
        Err(Error::NotConverged(Box::new(result)))
    }
}
