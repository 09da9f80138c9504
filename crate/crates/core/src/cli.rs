//! Command-line front end. [`run`] parses arguments, executes the command and
//! returns the report text and exit code without touching the process.
//!
//! Exit codes: 0 everything passed, 1 some certificate or check failed, 2 usage
//! error, 3 invalid parameters or hypotheses, 4 numerical failure.

use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus::{eval_expr, generate, parse_expr, sharpness_search_with, CorpusKind, CorpusSpec, SearchOptions};
use crate::diffusion::{check_apriori, run as run_diffusion, DiffusionProblem};
use crate::error::Error;
use crate::grid::{Grid, GridFn};
use crate::ineq::{
    sweep, validate_case, Certificate, Family, Field, InequalityCase, Params, SweepOptions, TolerancePolicy,
};
use crate::ops::{self, UnitOrder};
use crate::report::{emit_certificates_csv, emit_csv, emit_envelope, emit_json, emit_table, now_rfc3339, CommandEcho};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PARAM: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "fracineq", version, about = "Fractional operators and inequality certificates on an interval")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a family over a parameter lattice and a function corpus.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Apply one operator to an expression and print the samples.
    #[command(allow_negative_numbers = true)]
    Op(OpArgs),
    /// Search for polynomials maximizing a case's certificate ratio.
    #[command(allow_negative_numbers = true)]
    Sharpness(SharpnessArgs),
    /// Self-convergence study of an operator over a ladder of grids.
    #[command(allow_negative_numbers = true)]
    Converge(ConvergeArgs),
    /// Run the space-fractional diffusion simulator and check its energy decay.
    #[command(allow_negative_numbers = true)]
    Diffuse(DiffuseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpKind {
    RlIntegral,
    Caputo,
    RlDerivative,
    RightRlDerivative,
    HadamardIntegral,
    HadamardDerivative,
}

/// Comma-separated value lists; the lattice is their cross product.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub beta: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub s: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub delta: Vec<f64>,
    /// Weight power (weighted Hardy) or output exponent (Gagliardo-Nirenberg).
    #[arg(long = "gamma-w", visible_alias = "gamma", value_delimiter = ',', allow_hyphen_values = true)]
    pub gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub c: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub d: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub e: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Vec<f64>,
}

impl ParamArgs {
    fn values(&self, f: Field) -> &[f64] {
        match f {
            Field::Alpha => &self.alpha,
            Field::Beta => &self.beta,
            Field::P => &self.p,
            Field::Q => &self.q,
            Field::R => &self.r,
            Field::S => &self.s,
            Field::Delta => &self.delta,
            Field::Gamma => &self.gamma,
            Field::C => &self.c,
            Field::D => &self.d,
            Field::E => &self.e,
            Field::Theta => &self.theta,
        }
    }
}

fn flag_name(f: Field) -> &'static str {
    match f {
        Field::Gamma => "gamma-w",
        other => other.name(),
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    #[arg(long, value_enum)]
    pub out: Option<OutFormat>,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub family: Family,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 1024, value_parser = grid_size)]
    pub n: usize,
    /// `powers:MU,...`, `poly:DEGREE,COUNT,SEED` or `expr:TEXT;TEXT...`
    #[arg(long, default_value = "poly:4,20,0")]
    pub corpus: CorpusArg,
    /// Tolerance floor added to the refinement estimate.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OpArgs {
    #[arg(long, value_enum)]
    pub kind: OpKind,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 64, value_parser = grid_size)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SharpnessArgs {
    #[arg(long)]
    pub family: Family,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 500)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 512, value_parser = grid_size)]
    pub n: usize,
    /// Total degree of the searched polynomials.
    #[arg(long, default_value_t = 4, value_parser = positive)]
    pub degree: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[arg(long, value_enum)]
    pub kind: OpKind,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// Grid ladder; each size must divide the next.
    #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048")]
    pub n: Vec<usize>,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DiffuseArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 256, value_parser = grid_size)]
    pub n: usize,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_final: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Initial data as an expression in `t`; defaults to `t - a`.
    #[arg(long, allow_hyphen_values = true)]
    pub u0: Option<String>,
    #[command(flatten)]
    pub output: OutArgs,
}

fn at_least(s: &str, min: usize) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("`{s}`: {e}"))?;
    if v < min {
        return Err(format!("must be at least {min}"));
    }
    Ok(v)
}

fn grid_size(s: &str) -> Result<usize, String> {
    at_least(s, 2)
}

fn positive(s: &str) -> Result<usize, String> {
    at_least(s, 1)
}

/// Parsed `--corpus` value.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusArg(pub CorpusKind);

impl FromStr for CorpusArg {
    type Err = String;

    fn from_str(s: &str) -> Result<CorpusArg, String> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| format!("expected KIND:VALUES, got `{s}`"))?;
        let numbers = |r: &str| -> Result<Vec<f64>, String> {
            r.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"))).collect()
        };
        match kind {
            "powers" => Ok(CorpusArg(CorpusKind::Powers(numbers(rest)?))),
            "poly" => {
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                let [degree, count, seed] = parts[..] else {
                    return Err(format!("expected poly:DEGREE,COUNT,SEED, got `{s}`"));
                };
                let int = |x: &str| x.parse::<u64>().map_err(|e| format!("`{x}`: {e}"));
                Ok(CorpusArg(CorpusKind::Polynomials {
                    degree: int(degree)? as usize,
                    count: int(count)? as usize,
                    seed: int(seed)?,
                }))
            }
            "expr" => Ok(CorpusArg(CorpusKind::Expressions(rest.split(';').map(|x| x.trim().to_string()).collect()))),
            other => Err(format!("unknown corpus kind `{other}` (expected powers, poly or expr)")),
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: u8, stdout: String) -> Outcome {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn usage(msg: impl Into<String>) -> Outcome {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }

    fn error(err: &Error) -> Outcome {
        Outcome { code: exit_code(err), stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Param { .. } | Error::Hypothesis(_) => EXIT_PARAM,
        Error::Parse { .. } => EXIT_USAGE,
        Error::Domain(_) | Error::Convergence { .. } | Error::Eval(_) | Error::Solve(_) => EXIT_NUMERIC,
    }
}

/// Parse `argv` (including the program name) and execute.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(EXIT_PASS, text)
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let args: Vec<String> = argv.iter().skip(2).map(|s| s.to_string_lossy().into_owned()).collect();
    let echo = |name: &str| CommandEcho { name: name.to_string(), args: args.clone() };
    let result = match &cli.command {
        Command::Verify(a) => verify(a, &echo("verify")),
        Command::Op(a) => op(a, &echo("op")),
        Command::Sharpness(a) => sharpness(a, &echo("sharpness")),
        Command::Converge(a) => converge(a, &echo("converge")),
        Command::Diffuse(a) => diffuse(a, &echo("diffuse")),
    };
    result.unwrap_or_else(|o| o)
}

type Run = Result<Outcome, Outcome>;

fn lift<T>(r: crate::error::Result<T>) -> Result<T, Outcome> {
    r.map_err(|e| Outcome::error(&e))
}

fn timestamp(o: &OutArgs) -> Option<String> {
    (!o.no_timestamp).then(now_rfc3339)
}

/// Cross product of the family's parameter lists, in field order.
fn lattice(family: Family, params: &ParamArgs, a: f64, b: f64) -> Result<Vec<InequalityCase>, Outcome> {
    let active = family.fields();
    for f in Field::ALL {
        let given = !params.values(f).is_empty();
        if active.contains(&f) && !given {
            return Err(Outcome::usage(format!("family {family} requires --{}", flag_name(f))));
        }
        if !active.contains(&f) && given {
            return Err(Outcome::usage(format!("--{} is not used by family {family}", flag_name(f))));
        }
    }
    let mut out = vec![Params::default()];
    for &f in active {
        out = out
            .into_iter()
            .flat_map(|p| {
                params.values(f).iter().map(move |&v| {
                    let mut q = p;
                    f.set(&mut q, Some(v));
                    q
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(|p| InequalityCase::new(family, a, b, p)).collect())
}

fn validate_all(cases: &[InequalityCase]) -> Result<(), Outcome> {
    for c in cases {
        if let Err(e) = validate_case(c) {
            let mut o = Outcome::error(&e);
            o.stderr = format!("error: {e} (family {}, a={}, b={}, {})\n", c.family, c.a, c.b, describe(&c.params));
            return Err(o);
        }
    }
    Ok(())
}

fn describe(p: &Params) -> String {
    Field::ALL.iter().filter_map(|f| f.get(p).map(|v| format!("{}={v}", f.name()))).collect::<Vec<_>>().join(", ")
}

fn certificates_outcome(certs: &[Certificate], echo: &CommandEcho, o: &OutArgs) -> Outcome {
    let text = match o.out.unwrap_or(OutFormat::Json) {
        OutFormat::Json => emit_json(echo, timestamp(o), certs),
        OutFormat::Csv => emit_certificates_csv(certs),
    };
    let code = if certs.iter().all(|c| c.pass) { EXIT_PASS } else { EXIT_FAIL };
    Outcome::ok(code, text)
}

fn verify(args: &VerifyArgs, echo: &CommandEcho) -> Run {
    let cases = lattice(args.family, &args.params, args.a, args.b)?;
    validate_all(&cases)?;
    let grid = lift(Grid::uniform(args.a, args.b, args.n))?;
    let spec = CorpusSpec { kind: args.corpus.0.clone(), grid, vanish_at_a: args.family.requires_vanishing() };
    let corpus = lift(generate(&spec))?;
    let opts =
        SweepOptions { policy: TolerancePolicy { floor: args.tol, richardson: true }, ..SweepOptions::default() };
    let certs = sweep(args.family, &cases, &corpus, &opts).into_iter().collect::<Result<Vec<_>, _>>();
    let certs = lift(certs)?;
    Ok(certificates_outcome(&certs, echo, &args.output))
}

fn sharpness(args: &SharpnessArgs, echo: &CommandEcho) -> Run {
    let cases = lattice(args.family, &args.params, args.a, args.b)?;
    if cases.len() != 1 {
        return Err(Outcome::usage("sharpness takes a single value per parameter"));
    }
    validate_all(&cases)?;
    let opts = SearchOptions {
        n: args.n,
        degree: args.degree,
        policy: TolerancePolicy { floor: args.tol, richardson: true },
        ..SearchOptions::default()
    };
    let res = lift(sharpness_search_with(&cases[0], args.budget, args.seed, &opts))?;
    Ok(certificates_outcome(&[res.certificate], echo, &args.output))
}

fn sample_expr(text: &str, grid: &Grid) -> Result<GridFn, Outcome> {
    let ast = lift(parse_expr(text))?;
    lift(grid.try_sample(|t| eval_expr(&ast, t)))
}

fn apply_op(kind: OpKind, u: &GridFn, alpha: f64) -> crate::error::Result<GridFn> {
    match kind {
        OpKind::RlIntegral => ops::rl_integral(u, alpha),
        OpKind::Caputo => ops::caputo_derivative(u, alpha),
        OpKind::RlDerivative => ops::rl_derivative(u, alpha),
        OpKind::RightRlDerivative => ops::right_rl_derivative(u, alpha),
        OpKind::HadamardIntegral => ops::hadamard_integral(u, alpha),
        OpKind::HadamardDerivative => ops::hadamard_derivative(u, alpha, UnitOrder::Limit),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn table_outcome<R: Serialize>(
    rows: &[R],
    header: &[&str],
    cells: impl Fn(&R) -> Vec<String>,
    echo: &CommandEcho,
    o: &OutArgs,
    default: OutFormat,
) -> Outcome {
    let text = match o.out.unwrap_or(default) {
        OutFormat::Json => emit_envelope(echo, timestamp(o), rows),
        OutFormat::Csv => emit_table(header, rows.iter().map(cells)),
    };
    Outcome::ok(EXIT_PASS, text)
}

#[derive(Serialize)]
struct SampleRow {
    t: f64,
    value: f64,
}

fn op(args: &OpArgs, echo: &CommandEcho) -> Run {
    let grid = lift(Grid::uniform(args.a, args.b, args.n))?;
    let u = sample_expr(&args.expr, &grid)?;
    let v = lift(apply_op(args.kind, &u, args.alpha))?;
    let rows: Vec<SampleRow> =
        grid.nodes().iter().zip(v.samples()).map(|(&t, &value)| SampleRow { t, value }).collect();
    Ok(table_outcome(&rows, &["t", "value"], |r| vec![fmt(r.t), fmt(r.value)], echo, &args.output, OutFormat::Json))
}

#[derive(Serialize)]
struct ConvergeRow {
    n: usize,
    /// Sup-norm difference to the next grid on the coarsest nodes.
    diff: Option<f64>,
    order: Option<f64>,
}

fn converge(args: &ConvergeArgs, echo: &CommandEcho) -> Run {
    let ns = &args.n;
    if ns.len() < 2 || ns[0] < 2 || ns.windows(2).any(|w| w[1] <= w[0] || w[1] % w[0] != 0) {
        return Err(Outcome::usage("--n needs at least two grid sizes, each dividing the next"));
    }
    let n0 = ns[0];
    let mut coarse_values = Vec::new();
    for &n in ns {
        let grid = lift(Grid::uniform(args.a, args.b, n))?;
        let u = sample_expr(&args.expr, &grid)?;
        let v = lift(apply_op(args.kind, &u, args.alpha))?;
        let stride = n / n0;
        coarse_values.push(v.samples().iter().step_by(stride).copied().collect::<Vec<f64>>());
    }
    let diffs: Vec<f64> = coarse_values
        .windows(2)
        .map(|w| w[0].iter().zip(&w[1]).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
        .collect();
    let rows: Vec<ConvergeRow> = ns
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let diff = diffs.get(k).copied();
            let order = match (k.checked_sub(1).and_then(|j| diffs.get(j)), diff) {
                (Some(&prev), Some(cur)) if prev > 0.0 && cur > 0.0 => {
                    Some((prev / cur).ln() / (n as f64 / ns[k - 1] as f64).ln())
                }
                _ => None,
            };
            ConvergeRow { n, diff, order }
        })
        .collect();
    let opt = |v: Option<f64>| v.map(fmt).unwrap_or_default();
    let cells = |r: &ConvergeRow| vec![r.n.to_string(), opt(r.diff), opt(r.order)];
    Ok(table_outcome(&rows, &["n", "diff", "order"], cells, echo, &args.output, OutFormat::Json))
}

#[derive(Serialize)]
struct TraceRow {
    t: f64,
    energy: f64,
    bound: f64,
}

fn diffuse(args: &DiffuseArgs, echo: &CommandEcho) -> Run {
    let grid = lift(Grid::uniform(args.a, args.b, args.n))?;
    let u0 = match &args.u0 {
        Some(text) => sample_expr(text, &grid)?,
        None => grid.sample(|t| t - args.a),
    };
    let u0 = lift(GridFn::vanishing_at_a(grid.clone(), u0.into_samples(), crate::ineq::BOUNDARY_TOL))?;
    let problem = DiffusionProblem { grid, alpha: args.alpha, u0, t_final: args.t_final, dt: args.dt };
    let trace = lift(run_diffusion(&problem))?;
    let report = check_apriori(&trace);
    let text = match args.output.out.unwrap_or(OutFormat::Csv) {
        OutFormat::Csv => emit_csv(&trace),
        OutFormat::Json => {
            let rows: Vec<TraceRow> = trace
                .times
                .iter()
                .zip(&trace.energy)
                .zip(trace.bound())
                .map(|((&t, &energy), bound)| TraceRow { t, energy, bound })
                .collect();
            emit_envelope(echo, timestamp(&args.output), &rows)
        }
    };
    let mut out = Outcome::ok(EXIT_PASS, text);
    if !report.monotone() || !report.bound_holds() {
        out.code = EXIT_FAIL;
        out.stderr = format!(
            "a-priori check failed: energy increases at steps {:?}, bound exceeded at steps {:?}\n",
            report.monotone_violations, report.bound_violations
        );
    }
    Ok(out)
}
