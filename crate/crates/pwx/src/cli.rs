//! `pwx` subcommands.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or validation error,
//! 3 internal invariant violation (a bounds report whose inequality fails).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use pwx_core::exactness::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use pwx_core::rational::{parse_rational, to_f64};
use pwx_core::{
    bounds_report, evolve_until_full, iterate_with_cap, minimal_expanding_iterate, orbit_of_one,
    stationary_density, ulam_matrix, Error as CoreError, IntervalSet, PiecewiseLinearMap, Rational,
    DEFAULT_ITER_CAP,
};

use crate::format::float12;
use crate::mapfile::{parse_mapfile, MapSpec};
use crate::sweep::{sweep, CSV_HEADER};

pub const ITER_CAP_ENV: &str = "PWX_ITER_CAP";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "pwx", version, about = "Exact analysis of two-branch piecewise-linear interval maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Contraction-run bounds L and U for the map with a = 0, b = -s/p, d = 1/p
    Bounds {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Smallest N such that every branch of f^N has slope > 1
    MinN {
        #[command(flatten)]
        map: MapArgs,
        /// Largest N to try [default: PWX_ITER_CAP or 64]
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Branch table of f^N
    Iterate {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long = "n", short = 'n')]
        n: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact forward orbit of x = 1
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Push a union of intervals forward until it has full measure
    Exactness {
        #[command(flatten)]
        map: MapArgs,
        /// Interval `lo,hi`; repeat for a union
        #[arg(long = "interval", required = true)]
        intervals: Vec<String>,
        #[arg(long, default_value_t = 256)]
        cap: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Ulam matrix on k uniform cells and its stationary density
    Ulam {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1024)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Also print the nonzero matrix entries
        #[arg(long)]
        matrix: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Bounds and minimal expanding iterate over a (p, s) grid, as CSV
    Sweep {
        /// Comma-separated p values
        #[arg(long = "p", value_delimiter = ',', num_args = 0..)]
        p: Vec<String>,
        /// Comma-separated s values
        #[arg(long = "s", value_delimiter = ',', num_args = 0..)]
        s: Vec<String>,
        /// Largest N tried per point [default: PWX_ITER_CAP or 64]
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Warn about and skip invalid (p, s) pairs instead of aborting
        #[arg(long)]
        skip_invalid: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Expanding slope (map with a = 0, b = -s/p, d = 1/p)
    #[arg(long, requires = "s", conflicts_with = "map")]
    p: Option<String>,
    /// Contracting slope
    #[arg(long, requires = "p", conflicts_with = "map")]
    s: Option<String>,
    /// Read the map from a .pwmap file
    #[arg(long)]
    map: Option<PathBuf>,
}

impl MapArgs {
    fn spec(&self) -> Result<MapSpec, CliError> {
        match (&self.p, &self.s, &self.map) {
            (_, _, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                parse_mapfile(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
            }
            (Some(p), Some(s), None) => Ok(MapSpec::paper(rational_arg("p", p)?, rational_arg("s", s)?)),
            _ => Err(CliError::Usage("give either --p and --s, or --map".into())),
        }
    }

    fn build(&self) -> Result<(MapSpec, PiecewiseLinearMap), CliError> {
        let spec = self.spec()?;
        let map = spec.to_map()?;
        Ok((spec, map))
    }
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text.trim()).map_err(|e| CliError::Input(format!("--{name} {text}: {e}")))
}

/// Settings taken from the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub iter_cap: usize,
}

impl Settings {
    pub fn from_env_value(value: Option<&str>) -> Result<Self, CliError> {
        let iter_cap = match value {
            None => DEFAULT_ITER_CAP,
            Some(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Input(format!("{ITER_CAP_ENV}={v} is not a positive integer")))?,
        };
        Ok(Settings { iter_cap })
    }
}

/// Entry point used by the binary: reads `PWX_ITER_CAP` and runs `args`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var(ITER_CAP_ENV).ok();
    match Settings::from_env_value(env.as_deref()) {
        Ok(settings) => run_with(args, settings, out, err),
        Err(e) => {
            let _ = writeln!(err, "pwx: {e}");
            e.exit_code()
        }
    }
}

pub fn run_with<I, T>(args: I, settings: Settings, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    match dispatch(cli.command, settings, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "pwx: {e}");
            e.exit_code()
        }
    }
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<(), CliError> {
    let mut text = String::with_capacity(64 * (rows.len() + 1));
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn dispatch(
    command: Command,
    settings: Settings,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Bounds { map, csv } => {
            let (_, f) = map.build()?;
            if !f.is_paper_family() {
                return Err(CliError::Input(
                    "bounds apply only to the family a = 0, b = -s/p, d = 1/p".into(),
                ));
            }
            let r = bounds_report(f.p(), f.s())?;
            writeln!(out, "p={}", r.p)?;
            writeln!(out, "s={}", r.s)?;
            writeln!(out, "c={}", float12(r.c))?;
            writeln!(out, "L={}", r.lower_l)?;
            writeln!(out, "j_max={}", r.j_max)?;
            writeln!(out, "U={}", r.upper_u)?;
            writeln!(out, "holds={}", r.inequality_holds)?;
            writeln!(out, "float_floor_discrepancy={}", r.float_floor_discrepancy)?;
            if let Some(path) = csv {
                let row = format!(
                    "{},{},{},{},{},{},{},{}",
                    r.p,
                    r.s,
                    float12(r.c),
                    r.lower_l,
                    r.j_max,
                    r.upper_u,
                    r.inequality_holds,
                    r.float_floor_discrepancy
                );
                write_csv(
                    &path,
                    "p,s,c,lower_L,j_max,upper_U,holds,float_floor_discrepancy",
                    &[row],
                )?;
            }
            if !r.inequality_holds {
                return Err(CliError::Invariant(format!(
                    "L = {} does not exceed U = {} for p = {}, s = {}",
                    r.lower_l, r.upper_u, r.p, r.s
                )));
            }
        }
        Command::MinN { map, cap, csv } => {
            let (_, f) = map.build()?;
            let cap = cap.unwrap_or(settings.iter_cap);
            let n = minimal_expanding_iterate(&f, cap)?;
            writeln!(out, "{n}")?;
            if let Some(path) = csv {
                let slope = iterate_with_cap(&f, n, n)?.min_slope();
                write_csv(
                    &path,
                    "p,s,minimal_N,min_slope",
                    &[format!("{},{},{n},{slope}", f.p(), f.s())],
                )?;
            }
        }
        Command::Iterate { map, n, csv } => {
            let (_, f) = map.build()?;
            let im = iterate_with_cap(&f, n, settings.iter_cap)?;
            let mut rows = Vec::with_capacity(im.branches().len());
            for b in im.branches() {
                let word: String = b.itinerary.iter().map(|l| l.to_string()).collect();
                writeln!(
                    out,
                    "{word}\t{}{}, {}{}\tslope={}\tintercept={}",
                    if b.lo_closed { '[' } else { '(' },
                    b.domain_lo,
                    b.domain_hi,
                    if b.hi_closed { ']' } else { ')' },
                    b.slope,
                    b.intercept
                )?;
                rows.push(format!(
                    "{word},{},{},{},{},{},{}",
                    b.domain_lo, b.lo_closed, b.domain_hi, b.hi_closed, b.slope, b.intercept
                ));
            }
            writeln!(out, "branches={}", im.branches().len())?;
            writeln!(out, "min_slope={}", im.min_slope())?;
            if let Some(path) = csv {
                write_csv(&path, "itinerary,lo,lo_closed,hi,hi_closed,slope,intercept", &rows)?;
            }
        }
        Command::Orbit { map, steps, csv } => {
            let (_, f) = map.build()?;
            let orbit = orbit_of_one(&f, steps)?;
            let mut rows = Vec::with_capacity(orbit.points.len());
            for (i, x) in orbit.points.iter().enumerate() {
                let label = orbit.labels.get(i).map(|l| l.to_string()).unwrap_or_default();
                writeln!(out, "{i}\t{x}\t{label}")?;
                rows.push(format!("{i},{x},{label}"));
            }
            writeln!(out, "initial_R_run={}", orbit.initial_r_run)?;
            if let Some(path) = csv {
                write_csv(&path, "i,x,label", &rows)?;
            }
        }
        Command::Exactness {
            map,
            intervals,
            cap,
            csv,
        } => {
            let (_, f) = map.build()?;
            let mut pairs = Vec::with_capacity(intervals.len());
            for text in &intervals {
                let (lo, hi) = text
                    .split_once(',')
                    .ok_or_else(|| CliError::Input(format!("--interval {text}: expected `lo,hi`")))?;
                pairs.push((rational_arg("interval", lo)?, rational_arg("interval", hi)?));
            }
            let set = IntervalSet::new(pairs)?;
            let ev = evolve_until_full(&f, &set, cap)?;
            let mut rows = Vec::with_capacity(ev.measures.len());
            for (n, m) in ev.measures.iter().enumerate() {
                writeln!(out, "{n}\t{m}")?;
                rows.push(format!("{n},{m},{}", float12(to_f64(m))));
            }
            match ev.n_full {
                Some(n) => writeln!(out, "n_full={n}")?,
                None => writeln!(out, "n_full=- (not full after {cap} steps)")?,
            }
            if let Some(path) = csv {
                write_csv(&path, "n,measure,measure_float", &rows)?;
            }
        }
        Command::Ulam {
            map,
            k,
            tol,
            max_iter,
            matrix,
            csv,
        } => {
            let (_, f) = map.build()?;
            let m = ulam_matrix(&f, k)?;
            if matrix {
                for i in 0..m.k() {
                    for (j, v) in m.row(i) {
                        writeln!(out, "M[{i},{j}]={v}")?;
                    }
                }
            }
            let (st, converged) = match stationary_density(&m, tol, max_iter) {
                Ok(st) => (st, true),
                Err(CoreError::NotConverged(best)) => {
                    writeln!(
                        err,
                        "pwx: warning: power iteration stopped after {} iterations with residual {}",
                        best.iterations,
                        float12(best.residual)
                    )?;
                    (*best, false)
                }
                Err(e) => return Err(e.into()),
            };
            writeln!(out, "k={k}")?;
            writeln!(out, "iterations={}", st.iterations)?;
            writeln!(out, "residual={}", float12(st.residual))?;
            writeln!(out, "converged={converged}")?;
            let mut rows = Vec::with_capacity(k);
            for (i, (mass, value)) in st.masses.iter().zip(&st.values).enumerate() {
                writeln!(out, "{i}\t{}\t{}", float12(*mass), float12(*value))?;
                rows.push(format!(
                    "{i},{},{},{},{}",
                    Rational::new(i.into(), k.into()),
                    Rational::new((i + 1).into(), k.into()),
                    float12(*mass),
                    float12(*value)
                ));
            }
            if let Some(path) = csv {
                write_csv(&path, "cell,lo,hi,mass,density", &rows)?;
            }
        }
        Command::Sweep {
            p,
            s,
            cap,
            workers,
            skip_invalid,
            csv,
        } => {
            if p.is_empty() || s.is_empty() {
                return Err(CliError::Usage("sweep needs at least one --p and one --s value".into()));
            }
            let ps = p.iter().map(|v| rational_arg("p", v)).collect::<Result<Vec<_>, _>>()?;
            let ss = s.iter().map(|v| rational_arg("s", v)).collect::<Result<Vec<_>, _>>()?;
            let cap = cap.unwrap_or(settings.iter_cap);
            let cells = sweep(&ps, &ss, cap, workers)
                .map_err(|e| CliError::Input(format!("cannot start {workers} workers: {e}")))?;
            let mut rows = Vec::with_capacity(cells.len());
            for cell in cells {
                match cell {
                    Ok(row) => {
                        if !row.inequality_holds {
                            return Err(CliError::Invariant(format!(
                                "L = {} does not exceed U = {} for p = {}, s = {}",
                                row.lower_l, row.upper_u, row.p, row.s
                            )));
                        }
                        rows.push(row.to_csv());
                    }
                    Err((p, s, e)) if skip_invalid => {
                        writeln!(err, "pwx: warning: skipping p = {p}, s = {s}: {e}")?;
                    }
                    Err((p, s, e)) => {
                        return Err(CliError::Input(format!("p = {p}, s = {s}: {e}")));
                    }
                }
            }
            writeln!(out, "{CSV_HEADER}")?;
            for row in &rows {
                writeln!(out, "{row}")?;
            }
            if let Some(path) = csv {
                write_csv(&path, CSV_HEADER, &rows)?;
            }
        }
    }
    Ok(())
}
