//! Command-line front end: solve an equation given as text, as a JSON spec or
//! by catalog id, then tabulate, check or compare the resulting series.
//!
//! Exit codes: 0 on success, 2 for input and usage errors, 3 when the
//! numerics fail (singular recurrence, coefficient overflow).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracle_core::{
    entry, evaluate, parse_equation, residual, solve, spec_from_json, CatalogEntry, CatalogError,
    EquationSpec, ExampleId, FracSeries, ParseError, Reference, SeriesError, SeriesSolution, Sign,
    SolveError,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solve(e) | CliError::Catalog(CatalogError::Solve(e)) if e.is_numerical() => 3,
            CliError::Series(SeriesError::NonFinite { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fracle",
    version,
    about = "Fractional power-series solutions of Lane-Emden type equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the series coefficients and write a solution file.
    Solve(SolveArgs),
    /// Evaluate a solution on a grid of x values.
    Eval(EvalArgs),
    /// Report the residual of the truncated series, order by order.
    Residual(SolveArgs),
    /// Compare a catalog example against its classical solution.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Equation text, e.g. "D2y + (2/x)*Dy + y^3 = 0".
    #[arg(long, conflicts_with_all = ["spec", "example"])]
    pub eq: Option<String>,
    /// JSON equation spec file.
    #[arg(long, conflicts_with = "example")]
    pub spec: Option<PathBuf>,
    /// Catalog example id.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
    pub example: Option<u8>,
    /// Polytropic index for examples 2 and 4.
    #[arg(long, requires = "example")]
    pub n: Option<u32>,
    /// Sign of the y^n term in example 4.
    #[arg(long, value_enum, requires = "example")]
    pub sign: Option<SignArg>,
    /// Fractional order, 0 < alpha <= 1 (default 1, or the spec file's value).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Truncation order M.
    #[arg(long, default_value_t = 30)]
    pub terms: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub y0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dy0: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Solution file written by `solve`, instead of solving again.
    #[arg(long, conflicts_with_all = ["eq", "spec", "example"])]
    pub solution: Option<PathBuf>,
    /// Grid as start:end:step, or a single x.
    #[arg(long, default_value = "0:1:0.1")]
    pub grid: Grid,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Right end of the default grid (defaults to the example's domain).
    #[arg(long)]
    pub xmax: Option<f64>,
    /// Explicit grid, overriding --xmax.
    #[arg(long)]
    pub grid: Option<Grid>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Evenly spaced points `start + i·step` up to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Grid {
    fn new(start: f64, end: f64, step: f64) -> Result<Self, String> {
        if !(start.is_finite() && end.is_finite() && step.is_finite()) {
            return Err("grid values must be finite".into());
        }
        if start < 0.0 {
            return Err(format!("grid start must be >= 0, got {start}"));
        }
        if step <= 0.0 {
            return Err(format!("grid step must be > 0, got {step}"));
        }
        if end < start {
            return Err(format!("grid end {end} is below start {start}"));
        }
        Ok(Grid { start, end, step })
    }

    pub fn points(&self) -> Vec<f64> {
        // The tolerance keeps an end point that is an exact multiple of step.
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad grid number `{t}`"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => {
                let x = num(x)?;
                Grid::new(x, x, 1.0)
            }
            [a, b, c] => Grid::new(num(a)?, num(b)?, num(c)?),
            _ => Err(format!(
                "grid must be start:end:step or a single x, got `{s}`"
            )),
        }
    }
}

/// Solution file written by `solve` and read by `eval --solution`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub alpha: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub coefficients: Vec<f64>,
    pub spec: EquationSpec,
    pub residual_max: f64,
    pub errata: Vec<String>,
}

#[derive(Debug, Serialize)]
struct ResidualFile {
    alpha: f64,
    #[serde(rename = "M")]
    m: usize,
    orders: Vec<usize>,
    residual_coeffs: Vec<f64>,
    max_abs: f64,
    scale: f64,
    relative: f64,
}

#[derive(Debug, Serialize)]
struct CompareRow {
    x: f64,
    y: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff: Option<f64>,
}

#[derive(Debug, Serialize)]
struct CompareFile {
    example: String,
    name: &'static str,
    alpha: f64,
    #[serde(rename = "M")]
    m: usize,
    coefficients: Vec<f64>,
    /// Present at alpha = 1 only.
    #[serde(skip_serializing_if = "Option::is_none")]
    max_abs_diff: Option<f64>,
    /// Present at alpha < 1, where no classical reference exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_max: Option<f64>,
    rows: Vec<CompareRow>,
    errata: Vec<String>,
}

struct Problem {
    spec: EquationSpec,
    entry: Option<CatalogEntry>,
}

impl Problem {
    fn errata(&self) -> Vec<String> {
        self.entry
            .as_ref()
            .map(|e| e.errata.iter().map(|s| s.to_string()).collect())
            .unwrap_or_default()
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn example_id(input: &InputArgs, id: u8) -> ExampleId {
    let mut ex = ExampleId::new(id);
    if let Some(n) = input.n {
        ex = ex.with_n(n);
    }
    if let Some(sign) = input.sign {
        ex = ex.with_sign(match sign {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        });
    }
    ex
}

fn load_problem(input: &InputArgs) -> Result<Problem, CliError> {
    let (mut spec, entry) = if let Some(text) = &input.eq {
        let spec = parse_equation(
            text,
            input.alpha.unwrap_or(1.0),
            input.y0.unwrap_or(0.0),
            input.dy0.unwrap_or(0.0),
        )?;
        (spec, None)
    } else if let Some(path) = &input.spec {
        let spec = spec_from_json(&read(path)?).map_err(|e| CliError::Json {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        (spec, None)
    } else if let Some(id) = input.example {
        let e = entry(example_id(input, id))?;
        (e.spec(input.alpha.unwrap_or(1.0))?, Some(e))
    } else {
        return Err(CliError::Usage(
            "one of --eq, --spec or --example is required".into(),
        ));
    };
    if let Some(a) = input.alpha {
        spec.alpha = a;
    }
    if let Some(y0) = input.y0 {
        spec.y0 = y0;
    }
    if let Some(dy0) = input.dy0 {
        spec.dy0 = dy0;
    }
    Ok(Problem { spec, entry })
}

fn emit(output: &OutputArgs, body: &[u8]) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s.into_bytes()
}

fn csv_bytes<R>(header: &[&str], rows: R) -> Result<Vec<u8>, CliError>
where
    R: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Csv(e.into_error().into()))
}

fn solve_problem(p: &Problem, terms: usize) -> Result<(SeriesSolution, f64), CliError> {
    let sol = solve(&p.spec, terms)?;
    let report = residual(&sol)?;
    Ok((sol, report.max_abs))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Eval(args) => run_eval(args),
        Command::Residual(args) => run_residual(args),
        Command::Compare(args) => run_compare(args),
    }
}

pub fn run_solve(args: &SolveArgs) -> Result<(), CliError> {
    let problem = load_problem(&args.input)?;
    let (sol, residual_max) = solve_problem(&problem, args.input.terms)?;
    let body = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&SolutionFile {
            alpha: sol.spec.alpha,
            m: sol.order(),
            coefficients: sol.coeffs().to_vec(),
            spec: sol.spec.clone(),
            residual_max,
            errata: problem.errata(),
        }),
        Format::Csv => csv_bytes(
            &["m", "coefficient"],
            sol.coeffs()
                .iter()
                .enumerate()
                .map(|(m, a)| vec![m.to_string(), a.to_string()]),
        )?,
    };
    emit(&args.output, &body)
}

pub fn run_eval(args: &EvalArgs) -> Result<(), CliError> {
    let series = match &args.solution {
        Some(path) => {
            let file: SolutionFile =
                serde_json::from_str(&read(path)?).map_err(|e| CliError::Json {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
            FracSeries::new(file.alpha, file.coefficients)?
        }
        None => {
            let problem = load_problem(&args.input)?;
            solve_problem(&problem, args.input.terms)?.0.series
        }
    };
    let rows = args
        .grid
        .points()
        .into_iter()
        .map(|x| Ok((x, evaluate(&series, x)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let body = match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_bytes(
            &["x", "y"],
            rows.iter().map(|(x, y)| vec![x.to_string(), y.to_string()]),
        )?,
        Format::Json => {
            let rows: Vec<CompareRow> = rows
                .iter()
                .map(|&(x, y)| CompareRow {
                    x,
                    y,
                    reference: None,
                    abs_diff: None,
                })
                .collect();
            json_bytes(&rows)
        }
    };
    emit(&args.output, &body)
}

pub fn run_residual(args: &SolveArgs) -> Result<(), CliError> {
    let problem = load_problem(&args.input)?;
    let sol = solve(&problem.spec, args.input.terms)?;
    let report = residual(&sol)?;
    let body = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&ResidualFile {
            alpha: sol.spec.alpha,
            m: sol.order(),
            relative: report.relative(),
            orders: report.orders,
            residual_coeffs: report.residual_coeffs,
            max_abs: report.max_abs,
            scale: report.scale,
        }),
        Format::Csv => csv_bytes(
            &["order", "residual"],
            report
                .orders
                .iter()
                .zip(&report.residual_coeffs)
                .map(|(o, r)| vec![o.to_string(), r.to_string()]),
        )?,
    };
    emit(&args.output, &body)
}

pub fn run_compare(args: &CompareArgs) -> Result<(), CliError> {
    let input = &args.input;
    if input.example.is_none() {
        return Err(CliError::Usage(
            "compare needs a catalog example (--example); other inputs have no reference".into(),
        ));
    }
    if input.y0.is_some() || input.dy0.is_some() {
        return Err(CliError::Usage(
            "compare uses the catalog initial conditions; drop --y0/--dy0".into(),
        ));
    }
    let problem = load_problem(input)?;
    let entry = problem.entry.as_ref().expect("example input has an entry");
    let classical = problem.spec.alpha == 1.0;
    if classical && matches!(entry.reference, Reference::None) {
        return Err(CatalogError::NoReference(entry.example.to_string()).into());
    }
    let (sol, residual_max) = solve_problem(&problem, input.terms)?;

    let grid = match (args.grid, args.xmax) {
        (Some(g), _) => g,
        (None, xmax) => {
            let xmax = xmax.unwrap_or(entry.x_max);
            Grid::new(0.0, xmax, xmax / 10.0)
                .or_else(|_| Grid::new(0.0, 0.0, 1.0))
                .map_err(CliError::Usage)?
        }
    };

    // A truncated reference is compared against the series cut at the same order.
    let series = match entry.reference_order() {
        Some(order) if classical => sol.series.truncated(order + 1),
        _ => sol.series.clone(),
    };
    let mut rows = Vec::new();
    for x in grid.points() {
        let y = evaluate(&series, x)?;
        let reference = if classical {
            Some(entry.classical(x)?)
        } else {
            None
        };
        rows.push(CompareRow {
            x,
            y,
            reference,
            abs_diff: reference.map(|r| (y - r).abs()),
        });
    }
    let max_abs_diff =
        classical.then(|| rows.iter().filter_map(|r| r.abs_diff).fold(0.0, f64::max));
    let report = CompareFile {
        example: entry.example.to_string(),
        name: entry.name,
        alpha: sol.spec.alpha,
        m: sol.order(),
        coefficients: sol.coeffs().to_vec(),
        max_abs_diff,
        residual_max: (!classical).then_some(residual_max),
        rows,
        errata: problem.errata(),
    };
    let body = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&report),
        Format::Csv if classical => csv_bytes(
            &["x", "y", "reference", "abs_diff"],
            report.rows.iter().map(|r| {
                vec![
                    r.x.to_string(),
                    r.y.to_string(),
                    r.reference.unwrap_or(f64::NAN).to_string(),
                    r.abs_diff.unwrap_or(f64::NAN).to_string(),
                ]
            }),
        )?,
        Format::Csv => csv_bytes(
            &["x", "y"],
            report
                .rows
                .iter()
                .map(|r| vec![r.x.to_string(), r.y.to_string()]),
        )?,
    };
    emit(&args.output, &body)
}
