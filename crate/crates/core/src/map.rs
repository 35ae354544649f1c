//! Class-F maps: `x ↦ px + a` on `[0, d]`, `x ↦ sx + b` on `(d, 1]`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Param};
use crate::rational::Rational;

/// Branch label: `L` is the expanding branch, `R` the contracting one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    L,
    R,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::L => "L",
            Label::R => "R",
        })
    }
}

/// One affine piece `x ↦ slope·x + intercept` on its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineBranch {
    pub label: Label,
    pub domain_lo: Rational,
    pub domain_hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub slope: Rational,
    pub intercept: Rational,
}

impl AffineBranch {
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
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearMap {
    branches: Vec<AffineBranch>,
    p: Rational,
    s: Rational,
    a: Rational,
    b: Rational,
    d: Rational,
}

impl PiecewiseLinearMap {
    pub fn branches(&self) -> &[AffineBranch] {
        &self.branches
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    /// True when this is the map with `a = 0`, `b = -s/p`, `d = 1/p`.
    pub fn is_paper_family(&self) -> bool {
        self.a.is_zero() && self.d == self.p.recip() && self.b == -(&self.s / &self.p)
    }

    /// The branch whose domain contains `x`, honoring closure flags.
    pub fn branch_at(&self, x: &Rational) -> Result<&AffineBranch, Error> {
        self.branches
            .iter()
            .find(|br| br.contains(x))
            .ok_or_else(|| Error::OutOfDomain(x.clone()))
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, Error> {
        Ok(self.branch_at(x)?.apply(x))
    }

    pub fn label_at(&self, x: &Rational) -> Result<Label, Error> {
        Ok(self.branch_at(x)?.label)
    }
}

/// Builds `f(x) = (px + a)·χ[0,d](x) + (sx + b)·χ(d,1](x)` after checking that
/// `p > 1`, `0 < s < 1`, `0 < d < 1` and that both branches map into `[0,1]`.
pub fn build_class_f_map(
    p: Rational,
    s: Rational,
    a: Rational,
    b: Rational,
    d: Rational,
) -> Result<PiecewiseLinearMap, Error> {
    let zero = Rational::zero();
    let one = Rational::one();
    if p <= one {
        return Err(Error::ParamDomain(Param::P));
    }
    if s <= zero || s >= one {
        return Err(Error::ParamDomain(Param::S));
    }
    if d <= zero || d >= one {
        return Err(Error::ParamDomain(Param::D));
    }
    let left = AffineBranch {
        label: Label::L,
        domain_lo: zero.clone(),
        domain_hi: d.clone(),
        lo_closed: true,
        hi_closed: true,
        slope: p.clone(),
        intercept: a.clone(),
    };
    let right = AffineBranch {
        label: Label::R,
        domain_lo: d.clone(),
        domain_hi: one.clone(),
        lo_closed: false,
        hi_closed: true,
        slope: s.clone(),
        intercept: b.clone(),
    };
    for br in [&left, &right] {
        for x in [&br.domain_lo, &br.domain_hi] {
            let value = br.apply(x);
            if value < zero || value > one {
                return Err(Error::RangeViolation {
                    x: x.clone(),
                    value,
                });
            }
        }
    }
    Ok(PiecewiseLinearMap {
        branches: vec![left, right],
        p,
        s,
        a,
        b,
        d,
    })
}

/// The map with `a = 0`, `b = -s/p` and `d = 1/p`: the left branch is onto
/// and the right branch touches zero at the breakpoint.
pub fn build_paper_map(p: Rational, s: Rational) -> Result<PiecewiseLinearMap, Error> {
    if p <= Rational::one() {
        return Err(Error::ParamDomain(Param::P));
    }
    let b = -(&s / &p);
    let d = p.recip();
    build_class_f_map(p, s, Rational::zero(), b, d)
}

pub fn eval(map: &PiecewiseLinearMap, x: &Rational) -> Result<Rational, Error> {
    map.eval(x)
}
