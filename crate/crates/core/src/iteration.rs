//! Exact iterates `f^N` as ordered tables of affine branches, each tagged
//! with the itinerary word that produced it.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::map::{Label, PiecewiseLinearMap};
use crate::rational::Rational;

/// Largest `N` accepted by [`iterate`].
pub const DEFAULT_ITER_CAP: usize = 64;

/// A maximal affine piece of `f^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterateBranch {
    /// Branch labels visited by `x, f(x), …, f^{N-1}(x)`, in time order.
    pub itinerary: Vec<Label>,
    pub domain_lo: Rational,
    pub domain_hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub slope: Rational,
    pub intercept: Rational,
}

impl IterateBranch {
    pub fn apply(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above_lo = if self.lo_closed {
            x >= &self.domain_lo
        } else {
            x > &self.domain_lo
        };
        let below_hi = if self.hi_closed {
            x <= &self.domain_hi
        } else {
            x < &self.domain_hi
        };
        above_lo && below_hi
    }

    pub fn width(&self) -> Rational {
        &self.domain_hi - &self.domain_lo
    }

    /// Number of occurrences of `label` in the itinerary (`m` for `L`, `n` for `R`).
    pub fn count(&self, label: Label) -> usize {
        self.itinerary.iter().filter(|&&l| l == label).count()
    }

    /// Longest run of consecutive `label` letters in the itinerary.
    pub fn longest_run(&self, label: Label) -> usize {
        longest_run(&self.itinerary, label)
    }
}

pub(crate) fn longest_run(word: &[Label], label: Label) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for &l in word {
        if l == label {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedMap {
    base: PiecewiseLinearMap,
    n: usize,
    branches: Vec<IterateBranch>,
}

impl IteratedMap {
    /// `f^1`: one branch per branch of the base map.
    pub fn from_map(map: &PiecewiseLinearMap) -> Self {
        let branches = map
            .branches()
            .iter()
            .map(|b| IterateBranch {
                itinerary: alloc::vec![b.label],
                domain_lo: b.domain_lo.clone(),
                domain_hi: b.domain_hi.clone(),
                lo_closed: b.lo_closed,
                hi_closed: b.hi_closed,
                slope: b.slope.clone(),
                intercept: b.intercept.clone(),
            })
            .collect();
        IteratedMap {
            base: map.clone(),
            n: 1,
            branches,
        }
    }

    pub fn base(&self) -> &PiecewiseLinearMap {
        &self.base
    }

    /// The iterate's order `N`.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn branches(&self) -> &[IterateBranch] {
        &self.branches
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, Error> {
        self.branches
            .iter()
            .find(|b| b.contains(x))
            .map(|b| b.apply(x))
            .ok_or_else(|| Error::OutOfDomain(x.clone()))
    }

    pub fn min_slope(&self) -> Rational {
        self.branches
            .iter()
            .map(|b| &b.slope)
            .min()
            .cloned()
            .expect("an iterate always has at least one branch")
    }

    /// Longest run of `label` over all stored itineraries.
    pub fn longest_run(&self, label: Label) -> usize {
        self.branches
            .iter()
            .map(|b| b.longest_run(label))
            .max()
            .unwrap_or(0)
    }

    /// Whether every branch has image infimum 0, i.e. `slope·lo + intercept = 0`.
    pub fn branches_touch_zero(&self) -> bool {
        self.branches.iter().all(|b| b.apply(&b.domain_lo).is_zero())
    }
}

impl From<&PiecewiseLinearMap> for IteratedMap {
    fn from(map: &PiecewiseLinearMap) -> Self {
        IteratedMap::from_map(map)
    }
}

/// `outer ∘ inner`, i.e. `f^{a+b}` from `f^a` (outer) and `f^b` (inner).
///
/// Each inner branch is cut at the preimages of the outer breakpoints; the
/// resulting itineraries are the inner word followed by the outer word.
/// Pieces of zero width are dropped.
pub fn compose(outer: &IteratedMap, inner: &IteratedMap) -> Result<IteratedMap, Error> {
    if outer.base != inner.base {
        return Err(Error::BaseMismatch);
    }
    let mut branches = Vec::new();
    for ib in &inner.branches {
        for ob in &outer.branches {
            // The inner piece is increasing, so the preimage of the outer
            // domain is an interval with these endpoints.
            let pre_lo = (&ob.domain_lo - &ib.intercept) / &ib.slope;
            let pre_hi = (&ob.domain_hi - &ib.intercept) / &ib.slope;
            let lo = (&ib.domain_lo).max(&pre_lo).clone();
            let hi = (&ib.domain_hi).min(&pre_hi).clone();
            if lo >= hi {
                continue;
            }
            let lo_closed =
                (lo > ib.domain_lo || ib.lo_closed) && (lo > pre_lo || ob.lo_closed);
            let hi_closed =
                (hi < ib.domain_hi || ib.hi_closed) && (hi < pre_hi || ob.hi_closed);
            let mut itinerary = Vec::with_capacity(ib.itinerary.len() + ob.itinerary.len());
            itinerary.extend_from_slice(&ib.itinerary);
            itinerary.extend_from_slice(&ob.itinerary);
            branches.push(IterateBranch {
                itinerary,
                domain_lo: lo,
                domain_hi: hi,
                lo_closed,
                hi_closed,
                slope: &ob.slope * &ib.slope,
                intercept: &ob.slope * &ib.intercept + &ob.intercept,
            });
        }
    }
    Ok(IteratedMap {
        base: inner.base.clone(),
        n: outer.n + inner.n,
        branches,
    })
}

/// Unbounded sequence `f^1, f^2, …`, each step one composition with `f`.
pub struct Iterates {
    first: IteratedMap,
    current: Option<IteratedMap>,
}

impl Iterates {
    pub fn new(map: &PiecewiseLinearMap) -> Self {
        Iterates {
            first: IteratedMap::from_map(map),
            current: None,
        }
    }
}

impl Iterator for Iterates {
    type Item = IteratedMap;

    fn next(&mut self) -> Option<IteratedMap> {
        let next = match &self.current {
            None => self.first.clone(),
            Some(prev) => compose(&self.first, prev).expect("same base"),
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

/// `f^N` with the default cap of [`DEFAULT_ITER_CAP`].
pub fn iterate(map: &PiecewiseLinearMap, n: usize) -> Result<IteratedMap, Error> {
    iterate_with_cap(map, n, DEFAULT_ITER_CAP)
}

pub fn iterate_with_cap(
    map: &PiecewiseLinearMap,
    n: usize,
    cap: usize,
) -> Result<IteratedMap, Error> {
    if n == 0 || n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    Ok(Iterates::new(map).nth(n - 1).expect("infinite iterator"))
}

pub fn min_slope(im: &IteratedMap) -> Rational {
    im.min_slope()
}

/// Smallest `N ≤ cap` such that every branch of `f^N` has slope strictly
/// greater than 1.
pub fn minimal_expanding_iterate(map: &PiecewiseLinearMap, cap: usize) -> Result<usize, Error> {
    let one = Rational::one();
    let mut best: Option<Rational> = None;
    for im in Iterates::new(map).take(cap) {
        let slope = im.min_slope();
        if slope > one {
            return Ok(im.order());
        }
        if best.as_ref().is_none_or(|b| &slope > b) {
            best = Some(slope);
        }
    }
    Err(Error::NotFoundWithinCap {
        cap,
        best_min_slope: best.unwrap_or_else(Rational::zero),
    })
}
