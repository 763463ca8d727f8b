//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for invalid input (schema, flags, values),
//! 3 for numerical failure where convergence was required. Diagnostics go to
//! standard error; standard output carries only JSON or CSV.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prescribed_ricci::sweep::{self, SweepAxis, SweepGrid, SweepOptions};
use prescribed_ricci::{
    builtin_space, existence_check, intermediate_subalgebras, maximize_s_on_mt, sigma_table,
    verify_prescribed_ricci, Error, HomogeneousSpace, MetricCoefficients, SolverOptions,
    TensorCoefficients, BUILTIN_NAMES,
};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "prc", version, about = "Prescribed Ricci curvature on homogeneous spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect the built-in spaces.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Decide whether existence of a metric with Ric = cT is guaranteed.
    Check(PointArgs),
    /// Tabulate sigma(k, T) over all intermediate subalgebras.
    Sigma(PointArgs),
    /// Maximize S on M_T and verify Ric = cT at the maximizer.
    Solve(PointArgs),
    /// Evaluate the existence verdict on a grid of tensors.
    Sweep(SweepArgs),
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Args, Debug)]
struct SpaceArgs {
    /// Name of a built-in space.
    #[arg(long, conflicts_with = "space", required_unless_present = "space")]
    builtin: Option<String>,
    /// Path to a JSON space document.
    #[arg(long)]
    space: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            restarts: self.restarts.max(1),
            seed: self.seed,
            ..SolverOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Coefficients z_1,..,z_s of T; rationals such as 2/9 are accepted.
    #[arg(long = "T", value_name = "z1,z2,...")]
    tensor: String,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Base coefficients; swept coordinates are overridden by --grid.
    #[arg(long = "T", value_name = "z1,z2,...")]
    tensor: String,
    /// Axis "i=min:max:steps" (1-based i); at most two.
    #[arg(long = "grid", value_name = "i=min:max:steps")]
    grid: Vec<String>,
    /// Rescale every point so that sum d_i z_i = 1.
    #[arg(long)]
    normalize: bool,
    /// Also solve for the metric at guaranteed points.
    #[arg(long)]
    solve: bool,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs the command line `argv` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Catalog { action } => catalog(action, stdout),
        Command::Check(args) => check(&args, stdout),
        Command::Sigma(args) => sigma(&args, stdout),
        Command::Solve(args) => solve(&args, stdout),
        Command::Sweep(args) => sweep_command(&args, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(stderr, "numerical failure: {msg}");
            EXIT_NUMERICAL
        }
    }
}

fn print_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn load_space(args: &SpaceArgs) -> Result<HomogeneousSpace, Failure> {
    match (&args.builtin, &args.space) {
        (Some(name), _) => Ok(builtin_space(name)?),
        (None, Some(path)) => Ok(HomogeneousSpace::from_path(path)?),
        (None, None) => Err(Failure::Input("one of --builtin or --space is required".into())),
    }
}

fn parse_tensor(text: &str, space: &HomogeneousSpace) -> Result<TensorCoefficients, Failure> {
    let values = text
        .split(',')
        .map(|part| {
            prescribed_ricci::space::parse_rational(part)
                .ok_or_else(|| Failure::Input(format!("--T: cannot parse {part:?}")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if values.len() != space.num_summands() {
        return Err(Failure::Input(format!(
            "--T: {} has {} summands, got {} coefficients",
            space.name(),
            space.num_summands(),
            values.len()
        )));
    }
    Ok(TensorCoefficients::new(values)?)
}

#[derive(Serialize)]
struct CatalogEntry<'a> {
    name: &'a str,
    s: usize,
    d: &'a [u32],
}

fn catalog(action: CatalogAction, out: &mut dyn Write) -> Outcome {
    match action {
        CatalogAction::List => {
            let spaces: Vec<HomogeneousSpace> = BUILTIN_NAMES
                .iter()
                .map(|n| builtin_space(n))
                .collect::<Result<_, _>>()?;
            let entries: Vec<CatalogEntry> = spaces
                .iter()
                .map(|s| CatalogEntry {
                    name: s.name(),
                    s: s.num_summands(),
                    d: s.dims(),
                })
                .collect();
            print_json(&entries, out)
        }
        CatalogAction::Show { name } => print_json(&builtin_space(&name)?.to_document(), out),
    }
}

fn reject_csv(format: Format, command: &str) -> Outcome {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(Failure::Input(format!("{command} only supports --format json"))),
    }
}

fn check(args: &PointArgs, out: &mut dyn Write) -> Outcome {
    reject_csv(args.format, "check")?;
    let space = load_space(&args.space)?;
    let z = parse_tensor(&args.tensor, &space)?;
    let verdict = existence_check(&space, &z, &args.solver.options())?;
    print_json(&verdict, out)
}

#[derive(Serialize)]
struct SigmaTable {
    space: String,
    z: Vec<f64>,
    maximal: Vec<prescribed_ricci::IndexSet>,
    rows: Vec<prescribed_ricci::SigmaResult>,
}

fn sigma(args: &PointArgs, out: &mut dyn Write) -> Outcome {
    let space = load_space(&args.space)?;
    let z = parse_tensor(&args.tensor, &space)?;
    let lattice = intermediate_subalgebras(&space)?;
    let rows = sigma_table(&space, &z, &args.solver.options())?;
    match args.format {
        Format::Json => print_json(
            &SigmaTable {
                space: space.name().to_string(),
                z: z.to_vec(),
                maximal: lattice.maximal,
                rows,
            },
            out,
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| Failure::Input(e.to_string());
            w.write_record(["subalgebra", "maximal", "sigma", "attained", "source", "witness"])
                .map_err(csv_err)?;
            for row in rows {
                let witness = row
                    .witness
                    .as_ref()
                    .map(|w| w.iter().map(|&v| sweep::format_float(v)).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default();
                let source = serde_json::to_value(row.source)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default();
                w.write_record([
                    row.set.to_string(),
                    lattice.maximal.contains(&row.set).to_string(),
                    sweep::format_float(row.value),
                    row.attained.to_string(),
                    source,
                    witness,
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SolveOutput {
    x: Vec<f64>,
    scalar_curvature: f64,
    c: f64,
    residual: f64,
    positive: bool,
    verified: bool,
    iterations: usize,
    first_order_residual: f64,
    stationary_points: Vec<prescribed_ricci::solver::StationaryPoint>,
}

fn solve(args: &PointArgs, out: &mut dyn Write) -> Outcome {
    reject_csv(args.format, "solve")?;
    let space = load_space(&args.space)?;
    let z = parse_tensor(&args.tensor, &space)?;
    let report = maximize_s_on_mt(&space, &z, &args.solver.options())?;
    if !report.converged {
        let hint = report
            .escape
            .as_ref()
            .map(|e| format!("; iterates escape with {} growing (ratio {:.3e})", e.growing, e.ratio))
            .unwrap_or_default();
        return Err(Failure::Numerical(format!(
            "no interior maximum of S on M_T after {} restarts{hint}",
            report.restarts_used
        )));
    }
    let x = MetricCoefficients::new(report.argmax.clone())?;
    let v = verify_prescribed_ricci(&space, &x, &z)?;
    print_json(
        &SolveOutput {
            x: report.argmax,
            scalar_curvature: report.value,
            c: v.c,
            residual: v.residual,
            positive: v.positive,
            verified: v.verified,
            iterations: report.iterations,
            first_order_residual: report.first_order_residual,
            stationary_points: report.stationary_points,
        },
        out,
    )?;
    if v.verified {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "maximizer does not satisfy Ric = cT with c > 0 (c = {}, residual = {:.3e})",
            v.c, v.residual
        )))
    }
}

fn sweep_command(args: &SweepArgs, out: &mut dyn Write) -> Outcome {
    let space = load_space(&args.space)?;
    let base = parse_tensor(&args.tensor, &space)?;
    let axes = args
        .grid
        .iter()
        .map(|g| SweepAxis::parse(g))
        .collect::<Result<Vec<_>, _>>()?;
    let grid = SweepGrid::new(base.to_vec(), axes, args.normalize)?;
    let options = SweepOptions {
        solver: args.solver.options(),
        solve: args.solve,
        workers: args.jobs,
    };
    let rows = sweep::run_sweep(&space, &grid, &options)?;
    match args.format {
        Format::Csv => sweep::write_csv(&rows, space.num_summands(), args.solve, out)?,
        Format::Json => print_json(&rows, out)?,
    }
    Ok(())
}
