//! The scalar bounds behind eventual expansion of the map with `a = 0`,
//! `b = -s/p`, `d = 1/p`.
//!
//! A non-expanding branch of `f^N` with `m` expansions and `n` contractions
//! must satisfy `p^m s^n ≤ 1`, which forces a run of at least `⌈n/(m+1)⌉`
//! consecutive contractions. As `N` grows that run length tends to
//! `L = ⌈1 - ln p / ln s⌉`. On the other side, no interval can contract more
//! than `U = j_max + 1` times in a row, where `j_max` is the last `j` with
//! `f^j(1) > 1/p`. The report checks `L > U`.
//!
//! Floors and ceilings of logarithm ratios are found with exact rational
//! power comparisons. The float formulas are only reported.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Param};
use crate::map::{Label, PiecewiseLinearMap};
use crate::rational::{powu, to_f64, Rational};

/// Largest step count accepted by [`orbit_of_one`].
pub const ORBIT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub p: Rational,
    pub s: Rational,
    /// `-ln s / (ln p - ln s)`, floating point.
    pub c: f64,
    /// `⌈1 - ln p / ln s⌉`, the limiting forced run of contractions.
    pub lower_l: usize,
    /// Largest `j` with `s^j (p(1-s)+s) > 1`, i.e. `f^j(1) > 1/p`.
    pub j_max: usize,
    /// `j_max + 1`, the longest possible run of contractions.
    pub upper_u: usize,
    pub inequality_holds: bool,
    /// The float value of `⌊-ln(p(1-s)+s)/ln s⌋` disagrees with `j_max`.
    pub float_floor_discrepancy: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTrace {
    /// `1, f(1), …, f^steps(1)`.
    pub points: Vec<Rational>,
    /// Branch label of each of `points[0..steps]`.
    pub labels: Vec<Label>,
    pub initial_r_run: usize,
}

/// `p^m · s^n`.
pub fn net_expansion(p: &Rational, s: &Rational, m: usize, n: usize) -> Rational {
    powu(p, m) * powu(s, n)
}

/// `⌈n / (m+1)⌉`: the longest run of `R` any word with `m` letters `L` and
/// `n` letters `R` is forced to contain.
pub fn forced_consecutive_contractions(m: usize, n: usize) -> usize {
    n.div_ceil(m + 1)
}

fn check_params(p: &Rational, s: &Rational) -> Result<(), Error> {
    if p <= &Rational::one() {
        return Err(Error::ParamDomain(Param::P));
    }
    if s <= &Rational::zero() || s >= &Rational::one() {
        return Err(Error::ParamDomain(Param::S));
    }
    Ok(())
}

/// Natural log of a positive rational, tolerant of values outside the `f64`
/// range.
fn ln_rational(r: &Rational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(to_f64(&Rational::from_integer(x.clone())));
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    libm::log(to_f64(&Rational::from_integer(top))) + shift as f64 * core::f64::consts::LN_2
}

/// Least `j ≥ 0` with `k · s^j ≤ 1`, for `k > 0` and `0 < s < 1`.
///
/// A float estimate picks the starting point; exact integer comparisons of
/// `numer(k)·numer(s)^j` against `denom(k)·denom(s)^j` settle the answer.
fn least_power_at_most_one(k: &Rational, s: &Rational) -> usize {
    let holds = |j: usize| {
        let lhs = k.numer() * num_traits::pow(s.numer().clone(), j);
        let rhs = k.denom() * num_traits::pow(s.denom().clone(), j);
        lhs <= rhs
    };
    if holds(0) {
        return 0;
    }
    let estimate = ln_rational(k) / -ln_rational(s);
    let mut j = if estimate.is_finite() && estimate > 0.0 {
        libm::ceil(estimate) as usize
    } else {
        1
    };
    j = j.max(1);
    if holds(j) {
        while j > 1 && holds(j - 1) {
            j -= 1;
        }
    } else {
        while !holds(j) {
            j += 1;
        }
    }
    j
}

pub fn bounds_report(p: &Rational, s: &Rational) -> Result<BoundsReport, Error> {
    check_params(p, s)?;
    let one = Rational::one();
    let q = p * (&one - s) + s;
    let lower_l = 1 + least_power_at_most_one(p, s);
    // q > 1, so the least power with q·s^j ≤ 1 is at least 1.
    let j_max = least_power_at_most_one(&q, s) - 1;
    let upper_u = j_max + 1;

    let pf = to_f64(p);
    let sf = to_f64(s);
    let (ln_p, ln_s) = (libm::log(pf), libm::log(sf));
    let c = -ln_s / (ln_p - ln_s);
    let float_floor = libm::floor(-libm::log(pf * (1.0 - sf) + sf) / ln_s);
    let float_floor_discrepancy = float_floor != j_max as f64;

    Ok(BoundsReport {
        p: p.clone(),
        s: s.clone(),
        c,
        lower_l,
        j_max,
        upper_u,
        inequality_holds: lower_l > upper_u,
        float_floor_discrepancy,
    })
}

/// `s^j·x - (s/p)·(1 - s^j)/(1 - s)`: `j` formal applications of the right
/// branch `y ↦ sy - s/p`, with no domain check. A value below `1/p` or
/// outside `[0,1]` means the right branch cannot actually be applied `j`
/// times from `x`.
pub fn right_branch_closed_form(p: &Rational, s: &Rational, j: usize, x: &Rational) -> Rational {
    let one = Rational::one();
    let sj = powu(s, j);
    let geometric = if s == &one {
        Rational::from_integer(BigInt::from(j))
    } else {
        (&one - &sj) / (&one - s)
    };
    &sj * x - (s / p) * geometric
}

pub fn orbit_of_one(map: &PiecewiseLinearMap, steps: usize) -> Result<OrbitTrace, Error> {
    if steps == 0 || steps > ORBIT_CAP {
        return Err(Error::CapExceeded {
            requested: steps,
            cap: ORBIT_CAP,
        });
    }
    let mut points = Vec::with_capacity(steps + 1);
    let mut labels = Vec::with_capacity(steps);
    let mut x = Rational::one();
    for _ in 0..steps {
        let branch = map.branch_at(&x)?;
        let next = branch.apply(&x);
        labels.push(branch.label);
        points.push(core::mem::replace(&mut x, next));
    }
    points.push(x);
    let initial_r_run = labels.iter().take_while(|&&l| l == Label::R).count();
    Ok(OrbitTrace {
        points,
        labels,
        initial_r_run,
    })
}
