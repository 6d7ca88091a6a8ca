//! One function per subcommand, each producing a table and the list of
//! computations that failed.

use librate_core::equilibria::{
    collinear_estimates, find_all, locate, triangular_estimate, CollinearMode, Label,
    RefineOptions, TriangularMode,
};
use librate_core::propagate::{integrate, IntegrateOptions, Termination};
use librate_core::report::{self, Cell, Table};
use librate_core::stability::{
    self, critical_mass, critical_mass_series, ClassifyOptions, StabilityReport,
};
use librate_core::sweep::{
    self, c4_curves, equilibrium_locus, stability_region, zvc_grid, Execution, GridSpec,
};
use librate_core::{Error, Model, State, SystemParams};

/// A computation that did not produce a value.
#[derive(Debug)]
pub struct Failure {
    pub context: String,
    pub error: Error,
}

impl Failure {
    fn new(context: impl Into<String>, error: Error) -> Self {
        Failure {
            context: context.into(),
            error,
        }
    }
}

pub struct Outcome {
    pub table: Table,
    pub failures: Vec<Failure>,
}

impl Outcome {
    fn complete(table: Table) -> Self {
        Outcome {
            table,
            failures: Vec::new(),
        }
    }
}

pub type CommandResult = Result<Outcome, Error>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSelection {
    One(Label),
    All,
}

impl PointSelection {
    pub fn labels(self) -> Vec<Label> {
        match self {
            PointSelection::One(l) => vec![l],
            PointSelection::All => Label::ALL.to_vec(),
        }
    }
}

impl std::str::FromStr for PointSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            Ok(PointSelection::All)
        } else {
            s.parse().map(PointSelection::One)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquilibriaSource {
    Refined,
    Estimates {
        triangular: TriangularMode,
        collinear: CollinearMode,
    },
}

pub fn equilibria(
    p: &SystemParams,
    source: EquilibriaSource,
    opts: &RefineOptions,
) -> CommandResult {
    let model = Model::new(*p)?;
    let mut points = Vec::new();
    let mut failures = Vec::new();
    match source {
        EquilibriaSource::Refined => {
            for (label, r) in find_all(&model, opts) {
                match r {
                    Ok(pt) => points.push(pt),
                    Err(e) => failures.push(Failure::new(label.as_str(), e)),
                }
            }
        }
        EquilibriaSource::Estimates {
            triangular,
            collinear,
        } => {
            for (label, r) in [Label::L1, Label::L2, Label::L3]
                .into_iter()
                .zip(collinear_estimates(&model, collinear, None))
            {
                match r {
                    Ok(pt) => points.push(pt),
                    Err(e) => failures.push(Failure::new(label.as_str(), e)),
                }
            }
            for label in [Label::L4, Label::L5] {
                match triangular_estimate(&model, label, triangular) {
                    Ok(pt) => points.push(pt),
                    Err(e) => failures.push(Failure::new(label.as_str(), e)),
                }
            }
        }
    }
    Ok(Outcome {
        table: report::points_table(&points),
        failures,
    })
}

pub fn stability(
    p: &SystemParams,
    points: PointSelection,
    opts: &ClassifyOptions,
    refine: &RefineOptions,
) -> CommandResult {
    let model = Model::new(*p)?;
    let mut reports: Vec<(Label, StabilityReport)> = Vec::new();
    let mut failures = Vec::new();
    for label in points.labels() {
        match locate(&model, label, refine)
            .and_then(|pt| stability::classify_point(&model, &pt, opts))
        {
            Ok(r) => reports.push((label, r)),
            Err(e) => failures.push(Failure::new(label.as_str(), e)),
        }
    }
    Ok(Outcome {
        table: report::stability_table(reports.iter().map(|(l, r)| (l.as_str(), r))),
        failures,
    })
}

pub fn critical(a2: f64, q1_values: &[f64], ks: &[u32], series: bool) -> CommandResult {
    let mut header = vec!["k", "q1", "a2", "K", "mu_k"];
    if series {
        header.extend(["mu_series", "series_in_range"]);
    }
    let mut table = Table::new(header);
    let mut failures = Vec::new();
    for &k in ks {
        for &q1 in q1_values {
            let cm = match critical_mass(k, q1, a2) {
                Ok(cm) => cm,
                Err(e) => {
                    failures.push(Failure::new(
                        format!("k={k} q1={}", report::format_float(q1)),
                        e,
                    ));
                    continue;
                }
            };
            let mut row: Vec<Cell> = vec![
                f64::from(k).into(),
                q1.into(),
                a2.into(),
                cm.big_k.into(),
                cm.mu_k.into(),
            ];
            if series {
                match critical_mass_series(k, a2, 1.0 - q1) {
                    Ok(s) => {
                        row.push(s.mu_k.into());
                        row.push(s.in_range.to_string().into());
                    }
                    Err(_) => {
                        row.push(Cell::Missing);
                        row.push(Cell::Missing);
                    }
                }
            }
            table.push(row);
        }
    }
    Ok(Outcome { table, failures })
}

pub fn zvc(p: &SystemParams, spec: &GridSpec, exec: Execution) -> CommandResult {
    let model = Model::new(*p)?;
    Ok(Outcome::complete(report::grid_table(&zvc_grid(
        &model, spec, exec,
    )?)))
}

pub fn c4(
    p: &SystemParams,
    a2_values: &[f64],
    q1_values: &[f64],
    mode: TriangularMode,
    exec: Execution,
) -> CommandResult {
    Ok(Outcome::complete(report::curves_table(&c4_curves(
        p, a2_values, q1_values, mode, exec,
    )?)))
}

pub fn locus(
    p: &SystemParams,
    q1_values: &[f64],
    opts: &RefineOptions,
    exec: Execution,
) -> CommandResult {
    Ok(Outcome::complete(report::curves_table(&equilibrium_locus(
        p, q1_values, opts, exec,
    )?)))
}

pub fn region(q1_values: &[f64], a2_values: &[f64], ks: &[u32], exec: Execution) -> CommandResult {
    Ok(Outcome::complete(report::curves_table(&stability_region(
        q1_values, a2_values, ks, exec,
    )?)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Start {
    pub from: Option<Label>,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

pub fn trajectory(
    p: &SystemParams,
    start: &Start,
    t_end: f64,
    opts: &IntegrateOptions,
    refine: &RefineOptions,
) -> CommandResult {
    let model = Model::new(*p)?;
    let (x0, y0) = match start.from {
        Some(label) => {
            let pt = locate(&model, label, refine)?;
            (pt.x, pt.y)
        }
        None => (0.0, 0.0),
    };
    let s0 = State::new(x0 + start.x, y0 + start.y, start.vx, start.vy);
    let traj = integrate(&model, s0, t_end, opts)?;
    let mut failures = Vec::new();
    if traj.termination == Termination::NonFinite {
        let t = traj.last().t;
        failures.push(Failure::new(
            "integrate",
            Error::Precondition(format!(
                "state became non-finite after t = {}",
                report::format_float(t)
            )),
        ));
    }
    Ok(Outcome {
        table: report::trajectory_table(&traj),
        failures,
    })
}

/// `n` evenly spaced `q1` values on `[0, 1]`.
pub fn q1_samples(n: usize) -> Vec<f64> {
    sweep::linspace(0.0, 1.0, n)
}
