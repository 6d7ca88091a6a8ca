//! `librate`: equilibria, stability and sweep datasets for the
//! photogravitational restricted three-body problem.

mod commands;
mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use librate_core::equilibria::{CollinearMode, Label, RefineOptions, TriangularMode};
use librate_core::propagate::IntegrateOptions;
use librate_core::report;
use librate_core::stability::{
    ClassifyOptions, CoeffModel, FerrariForm, SolverChoice, DEFAULT_THRESHOLD,
};
use librate_core::sweep::{Execution, GridSpec};
use serde::Deserialize;
use serde_json::json;

use crate::commands::{EquilibriaSource, Failure, Outcome, PointSelection, Start};
use crate::config::{FileConfig, FlagValues};

/// Caps the size of the worker pool used by sweeps.
const THREADS_ENV: &str = "LIBRATE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "librate",
    version,
    about = "Equilibria and linear stability in the photogravitational restricted three-body problem"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Mass ratio of the secondary
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Mass-reduction factor of the radiating primary
    #[arg(long, global = true)]
    q1: Option<f64>,
    /// Oblateness coefficient of the secondary
    #[arg(long, global = true)]
    a2: Option<f64>,
    /// Dimensionless speed of light
    #[arg(long, global = true)]
    cd: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file with mu, q1, a2, cd, format and threads; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RefineArgs {
    /// Residual threshold for Newton refinement
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
}

impl RefineArgs {
    fn options(&self) -> RefineOptions {
        RefineOptions {
            tolerance: self.tolerance,
            max_iterations: self.max_iter,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
struct ExecArgs {
    /// Evaluate on a single thread
    #[arg(long)]
    serial: bool,
}

impl ExecArgs {
    fn execution(&self) -> Execution {
        if self.serial {
            Execution::Serial
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Locate the five equilibrium points
    Equilibria {
        /// Report the closed-form estimates instead of refined points
        #[arg(long)]
        estimates: bool,
        #[arg(long, default_value = "perturbed", value_parser = parse_with::<TriangularMode>)]
        triangular: TriangularMode,
        #[arg(long, default_value = "direct", value_parser = parse_with::<CollinearMode>)]
        collinear: CollinearMode,
        #[command(flatten)]
        refine: RefineArgs,
    },
    /// Characteristic roots and stability class at refined points
    Stability {
        #[arg(long, default_value = "all", value_parser = parse_with::<PointSelection>)]
        point: PointSelection,
        /// auto, no-drag, ferrari or oracle
        #[arg(long, default_value = "auto", value_parser = parse_with::<SolverChoice>)]
        method: SolverChoice,
        /// exact or printed
        #[arg(long, default_value = "exact", value_parser = parse_with::<CoeffModel>)]
        coeffs: CoeffModel,
        /// Bound on |Re| below which a root counts as imaginary
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[command(flatten)]
        refine: RefineArgs,
    },
    /// Critical mass ratios of the resonances omega1 = k omega2
    CriticalMass {
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3, 4, 5])]
        k: Vec<u32>,
        /// q1 values to tabulate; defaults to the global q1
        #[arg(long, value_delimiter = ',')]
        q1_values: Vec<f64>,
        /// Add the linear expansion about q1 = 1, A2 = 0
        #[arg(long)]
        series: bool,
    },
    /// Jacobi constant at rest over a rectangular grid
    Zvc {
        #[arg(long, default_value_t = -1.5, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = -1.5, allow_hyphen_values = true)]
        y_min: f64,
        #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
        y_max: f64,
        #[arg(long, default_value_t = 601)]
        nx: usize,
        #[arg(long, default_value_t = 601)]
        ny: usize,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Jacobi constant at the triangular point along q1
    C4 {
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0])]
        a2_values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.75, 0.5, 0.25, 0.0])]
        q1_values: Vec<f64>,
        #[arg(long, default_value = "perturbed", value_parser = parse_with::<TriangularMode>)]
        mode: TriangularMode,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Refined equilibrium positions along q1
    Locus {
        /// Defaults to 21 evenly spaced values on [0, 1]
        #[arg(long, value_delimiter = ',')]
        q1_values: Vec<f64>,
        #[command(flatten)]
        refine: RefineArgs,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Critical mass curves in the (q1, mu) plane
    Region {
        /// Defaults to 21 evenly spaced values on [0, 1]
        #[arg(long, value_delimiter = ',')]
        q1_values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.02])]
        a2_values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3])]
        k: Vec<u32>,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Integrate a trajectory with fixed-step RK4
    Integrate {
        /// Start relative to this refined equilibrium instead of the origin
        #[arg(long, value_parser = parse_with::<Label>)]
        from: Option<Label>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        vx: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        vy: f64,
        #[arg(long, default_value_t = 100.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 100)]
        record_every: usize,
        #[command(flatten)]
        refine: RefineArgs,
    },
}

fn parse_with<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, String> {
    s.parse()
}

fn or_q1_samples(values: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        commands::q1_samples(21)
    } else {
        values.to_vec()
    }
}

fn error_record(kind: &str, context: Option<&str>, message: &str) -> String {
    let mut v = json!({ "error": kind, "message": message });
    if let Some(c) = context {
        v["context"] = json!(c);
    }
    v.to_string()
}

fn report_failures(failures: &[Failure]) {
    for f in failures {
        eprintln!(
            "{}",
            error_record(f.error.kind(), Some(&f.context), &f.error.to_string())
        );
    }
}

fn configure_threads(from_file: Option<usize>) -> Result<()> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .with_context(|| format!("{THREADS_ENV} must be a positive integer"))?,
        ),
        Err(_) => from_file,
    };
    if let Some(n) = threads {
        anyhow::ensure!(n > 0, "{THREADS_ENV} must be a positive integer");
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn write_output(
    outcome: &Outcome,
    format: Format,
    comment: &str,
    out: Option<&PathBuf>,
) -> Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => outcome.table.write_csv(&mut sink, Some(comment))?,
        Format::Json => {
            eprintln!("# {comment}");
            outcome.table.write_json(&mut sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    let file = match &g.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = FlagValues {
        mu: g.mu,
        q1: g.q1,
        a2: g.a2,
        cd: g.cd,
        format: g.format,
    };
    let eff = config::resolve(&file, &flags)?;
    configure_threads(eff.threads)?;
    let p = eff.params;

    let outcome = match &cli.command {
        Command::Equilibria {
            estimates,
            triangular,
            collinear,
            refine,
        } => {
            let source = if *estimates {
                EquilibriaSource::Estimates {
                    triangular: *triangular,
                    collinear: *collinear,
                }
            } else {
                EquilibriaSource::Refined
            };
            commands::equilibria(&p, source, &refine.options())
        }
        Command::Stability {
            point,
            method,
            coeffs,
            threshold,
            refine,
        } => {
            let opts = ClassifyOptions {
                solver: *method,
                coeffs: *coeffs,
                ferrari: FerrariForm::Consistent,
                threshold: *threshold,
            };
            commands::stability(&p, *point, &opts, &refine.options())
        }
        Command::CriticalMass {
            k,
            q1_values,
            series,
        } => {
            let q1s = if q1_values.is_empty() {
                vec![p.q1]
            } else {
                q1_values.clone()
            };
            commands::critical(p.a2, &q1s, k, *series)
        }
        Command::Zvc {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
            exec,
        } => {
            let spec = GridSpec {
                x_min: *x_min,
                x_max: *x_max,
                y_min: *y_min,
                y_max: *y_max,
                nx: *nx,
                ny: *ny,
            };
            commands::zvc(&p, &spec, exec.execution())
        }
        Command::C4 {
            a2_values,
            q1_values,
            mode,
            exec,
        } => commands::c4(&p, a2_values, q1_values, *mode, exec.execution()),
        Command::Locus {
            q1_values,
            refine,
            exec,
        } => commands::locus(
            &p,
            &or_q1_samples(q1_values),
            &refine.options(),
            exec.execution(),
        ),
        Command::Region {
            q1_values,
            a2_values,
            k,
            exec,
        } => commands::region(&or_q1_samples(q1_values), a2_values, k, exec.execution()),
        Command::Integrate {
            from,
            x,
            y,
            vx,
            vy,
            t_end,
            step,
            record_every,
            refine,
        } => {
            let start = Start {
                from: *from,
                x: *x,
                y: *y,
                vx: *vx,
                vy: *vy,
            };
            let opts = IntegrateOptions {
                step: *step,
                record_every: *record_every,
            };
            commands::trajectory(&p, &start, *t_end, &opts, &refine.options())
        }
    }?;

    write_output(
        &outcome,
        eff.format,
        &report::params_comment(&p),
        g.out.as_ref(),
    )?;
    report_failures(&outcome.failures);
    Ok(outcome.failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let kind = e
                .downcast_ref::<librate_core::Error>()
                .map_or("usage", |c| c.kind());
            eprintln!("{}", error_record(kind, None, &format!("{e:#}")));
            ExitCode::from(2)
        }
    }
}
