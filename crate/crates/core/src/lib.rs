//! Exact analysis of two-branch piecewise-linear interval maps.
//!
//! The maps studied here have an expanding branch `x ↦ px + a` on `[0, d]`
//! and a contracting branch `x ↦ sx + b` on `(d, 1]`, with `p > 1` and
//! `0 < s < 1`. Everything that touches map data is carried out in exact
//! rational arithmetic:
//!
//! * [`map`] builds and evaluates maps,
//! * [`iteration`] composes them into iterates with itinerary bookkeeping and
//!   finds the first iterate whose branches are all expanding,
//! * [`bounds`] computes the consecutive-contraction bounds that rule out a
//!   non-expanding iterate,
//! * [`exactness`] pushes interval sets and densities forward and builds the
//!   Ulam discretisation of the transfer operator.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod exactness;
pub mod iteration;
pub mod map;
pub mod rational;

pub use bounds::{
    bounds_report, forced_consecutive_contractions, net_expansion, orbit_of_one,
    right_branch_closed_form, BoundsReport, OrbitTrace,
};
pub use error::Error;
pub use exactness::{
    evolve_until_full, push_forward_set, stationary_density, transfer_density, ulam_matrix,
    Evolution, IntervalSet, PiecewiseConstantDensity, StationaryDensity, UlamMatrix,
};
pub use iteration::{
    compose, iterate, iterate_with_cap, min_slope, minimal_expanding_iterate, IterateBranch,
    IteratedMap, Iterates, DEFAULT_ITER_CAP,
};
pub use map::{build_class_f_map, build_paper_map, eval, AffineBranch, Label, PiecewiseLinearMap};
pub use rational::{parse_rational, Rational};
