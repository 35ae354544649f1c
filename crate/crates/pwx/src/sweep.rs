//! Parameter sweeps over `(p, s)` grids.

use rayon::prelude::*;

use pwx_core::{bounds_report, build_paper_map, minimal_expanding_iterate, Error, Rational};

use crate::format::{decimal_or_fraction, float12};

pub const CSV_HEADER: &str = "p,s,c,lower_L,j_max,upper_U,holds,minimal_N";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: Rational,
    pub s: Rational,
    pub c: f64,
    pub lower_l: usize,
    pub j_max: usize,
    pub upper_u: usize,
    pub inequality_holds: bool,
    /// `None` when no expanding iterate was found within the cap.
    pub minimal_n: Option<usize>,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            decimal_or_fraction(&self.p),
            decimal_or_fraction(&self.s),
            float12(self.c),
            self.lower_l,
            self.j_max,
            self.upper_u,
            self.inequality_holds,
            self.minimal_n.map_or_else(|| "-".to_string(), |n| n.to_string()),
        )
    }
}

/// Outcome of one grid point.
pub type Cell = Result<SweepRow, (Rational, Rational, Error)>;

pub fn sweep_point(p: &Rational, s: &Rational, cap: usize) -> Cell {
    let fail = |e| (p.clone(), s.clone(), e);
    let report = bounds_report(p, s).map_err(fail)?;
    let map = build_paper_map(p.clone(), s.clone()).map_err(fail)?;
    let minimal_n = match minimal_expanding_iterate(&map, cap) {
        Ok(n) => Some(n),
        Err(Error::NotFoundWithinCap { .. }) => None,
        Err(e) => return Err(fail(e)),
    };
    Ok(SweepRow {
        p: report.p,
        s: report.s,
        c: report.c,
        lower_l: report.lower_l,
        j_max: report.j_max,
        upper_u: report.upper_u,
        inequality_holds: report.inequality_holds,
        minimal_n,
    })
}

/// Evaluates the grid p-major, then s, on `workers` threads. The returned
/// order never depends on the worker count.
pub fn sweep(
    p_values: &[Rational],
    s_values: &[Rational],
    cap: usize,
    workers: usize,
) -> Result<Vec<Cell>, rayon::ThreadPoolBuildError> {
    let grid: Vec<(&Rational, &Rational)> = p_values
        .iter()
        .flat_map(|p| s_values.iter().map(move |s| (p, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?;
    Ok(pool.install(|| {
        grid.par_iter()
            .map(|(p, s)| sweep_point(p, s, cap))
            .collect()
    }))
}
