//! Property suites: each identity or inequality the library relies on,
//! evaluated on seeded inputs and reported as a pass/fail row.
//!
//! Every check is evaluated at the requested resolution `N` and again at `2N`
//! (when that stays within [`crate::io::MAX_NODES`]); pass/fail uses `N`, the
//! second value shows whether a miss is quadrature error or formula error.

mod checks;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{fmt_f64, RunConfig, Table, MAX_NODES};
use crate::sphere::SphericalGrid;

pub use checks::*;

/// Resolution at which every base tolerance is stated (nodes on S¹).
pub const REFERENCE_GRID: usize = 720;

/// Tolerances as a function of resolution: `base · max(1, (720/N)^order)`.
/// Finer grids never tighten a tolerance below its base value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSchedule {
    pub base: f64,
    /// Convergence order of the controlling quadrature error; 0 for
    /// resolution-independent checks.
    pub order: f64,
}

impl ToleranceSchedule {
    pub const fn fixed(base: f64) -> Self {
        Self { base, order: 0.0 }
    }

    pub const fn new(base: f64, order: f64) -> Self {
        Self { base, order }
    }

    pub fn at(&self, grid: usize) -> f64 {
        let r = REFERENCE_GRID as f64 / grid as f64;
        self.base * r.powf(self.order).max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `observed ≤ tolerance`
    AtMost,
    /// `observed ≥ tolerance`
    AtLeast,
    /// `observed < tolerance`
    Below,
}

impl Relation {
    pub fn holds(self, observed: f64, tol: f64) -> bool {
        match self {
            Relation::AtMost => observed <= tol,
            Relation::AtLeast => observed >= tol,
            Relation::Below => observed < tol,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Below => "<",
        }
    }
}

/// One row of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub name: String,
    /// Name of the identity being exercised, or `plumbing`.
    pub anchor: String,
    pub inputs: String,
    pub grid: usize,
    pub observed: f64,
    /// Same quantity at twice the resolution.
    pub observed_fine: Option<f64>,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip)]
    pub runtime: Duration,
    /// Error text when the check could not be evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{}: {:e} {} {:e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.observed,
            self.relation.symbol(),
            self.tolerance
        )?;
        if let Some(x) = self.observed_fine {
            write!(f, " (2N: {x:e})")?;
        }
        if let Some(e) = &self.error {
            write!(f, " error: {e}")?;
        }
        write!(f, " [{:.2?}]", self.runtime)
    }
}

/// Seed and resolution shared by all checks of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    pub seed: u64,
    /// Nodes on S¹; S² uses [`Context::rings`].
    pub grid: usize,
    /// Also evaluate at `2N`.
    pub convergence: bool,
}

impl Context {
    pub fn new(seed: u64, grid: usize) -> Self {
        Self { seed, grid, convergence: true }
    }

    /// Single-resolution variant.
    pub fn single(seed: u64, grid: usize) -> Self {
        Self { seed, grid, convergence: false }
    }

    /// Ring count on S² matched to `grid`: `grid/24` rounded to an even
    /// number, clamped to `[8, 64]`.
    pub fn rings(&self) -> usize {
        ((self.grid as f64 / 48.0).round() as usize * 2).clamp(8, 64)
    }

    pub fn sphere(&self, dim: usize) -> Result<Arc<SphericalGrid>> {
        SphericalGrid::shared(dim, if dim == 2 { self.grid } else { self.rings() })
    }

    fn refined(&self) -> Option<Self> {
        let g = 2 * self.grid;
        (self.convergence && g <= MAX_NODES).then_some(Self { grid: g, ..*self })
    }
}

/// Static description of a check.
#[derive(Debug, Clone)]
pub struct CheckSpec {
    pub suite: Suite,
    pub name: String,
    pub anchor: &'static str,
    pub inputs: String,
    pub relation: Relation,
    pub schedule: ToleranceSchedule,
}

impl CheckSpec {
    pub fn new(suite: Suite, name: impl Into<String>, anchor: &'static str) -> Self {
        Self {
            suite,
            name: name.into(),
            anchor,
            inputs: String::new(),
            relation: Relation::AtMost,
            schedule: ToleranceSchedule::fixed(0.0),
        }
    }

    pub fn inputs(mut self, s: impl Into<String>) -> Self {
        self.inputs = s.into();
        self
    }

    pub fn at_most(mut self, s: ToleranceSchedule) -> Self {
        self.relation = Relation::AtMost;
        self.schedule = s;
        self
    }

    /// `observed ≥ −tol(N)`.
    pub fn margin(mut self, s: ToleranceSchedule) -> Self {
        self.relation = Relation::AtLeast;
        self.schedule = ToleranceSchedule { base: -s.base, order: s.order };
        self
    }

    pub fn at_least(mut self, value: f64) -> Self {
        self.relation = Relation::AtLeast;
        self.schedule = ToleranceSchedule::fixed(value);
        self
    }

    pub fn below(mut self, bound: f64) -> Self {
        self.relation = Relation::Below;
        self.schedule = ToleranceSchedule::fixed(bound);
        self
    }

    /// Evaluates `metric` at `N` (and `2N`) and builds the report.
    pub fn run<F>(self, ctx: &Context, metric: F) -> CheckReport
    where
        F: Fn(&Context) -> Result<f64>,
    {
        let start = Instant::now();
        let first = metric(ctx);
        let fine = ctx.refined().map(|c| metric(&c).unwrap_or(f64::NAN));
        let tolerance = self.schedule.at(ctx.grid);
        let (observed, error) = match first {
            Ok(x) => (x, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        CheckReport {
            pass: error.is_none() && self.relation.holds(observed, tolerance),
            suite: self.suite,
            name: self.name,
            anchor: self.anchor.to_string(),
            inputs: self.inputs,
            grid: ctx.grid,
            observed,
            observed_fine: fine,
            relation: self.relation,
            tolerance,
            runtime: start.elapsed(),
            error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Transforms,
    Bodies,
    Measures,
    Limits,
    Solver,
    Concentration,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] =
        [Suite::Transforms, Suite::Bodies, Suite::Measures, Suite::Limits, Suite::Solver, Suite::Concentration];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Transforms => "transforms",
            Suite::Bodies => "bodies",
            Suite::Measures => "measures",
            Suite::Limits => "limits",
            Suite::Solver => "solver",
            Suite::Concentration => "concentration",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "unknown suite {s:?}; expected one of transforms, bodies, measures, limits, solver, concentration, all"
                ))
            })
    }
}

/// Runs one suite (or all of them). Rows are ordered by suite, then name.
pub fn run_suite(suite: Suite, ctx: &Context) -> Vec<CheckReport> {
    let mut out = match suite {
        Suite::All => Suite::EACH.into_iter().flat_map(|s| run_suite(s, ctx)).collect(),
        Suite::Transforms => transform_checks(ctx),
        Suite::Bodies => body_checks(ctx),
        Suite::Measures => measure_checks(ctx),
        Suite::Limits => limit_checks(ctx),
        Suite::Solver => solver_checks(ctx),
        Suite::Concentration => concentration_checks(ctx),
    };
    out.sort_by(|a, b| (a.suite, &a.name).cmp(&(b.suite, &b.name)));
    out
}

/// CSV rows; runtimes are left out so reruns compare byte for byte.
pub fn report_table(reports: &[CheckReport]) -> Table {
    let mut t = Table::new(&[
        "suite",
        "check",
        "anchor",
        "inputs",
        "grid",
        "observed",
        "observed_2n",
        "relation",
        "tolerance",
        "pass",
        "error",
    ]);
    for r in reports {
        t.push(vec![
            r.suite.to_string(),
            r.name.clone(),
            r.anchor.clone(),
            r.inputs.clone(),
            r.grid.to_string(),
            fmt_f64(r.observed),
            r.observed_fine.map(fmt_f64).unwrap_or_default(),
            r.relation.symbol().to_string(),
            fmt_f64(r.tolerance),
            r.pass.to_string(),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    t
}

pub fn report_csv(reports: &[CheckReport], config: Option<&RunConfig>) -> Result<String> {
    report_table(reports).to_csv(config)
}

/// Human-readable lines plus a closing count.
pub fn summary(reports: &[CheckReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    s.push_str(&format!("{} checks, {} failed\n", reports.len(), failed));
    s
}
