//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 verification mismatch or I/O failure, 2 input
//! or parse errors, 3 degenerate simplex, 4 domain violations.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::integrate::{
    self, IntegralResult, IntegrateError, IntegrationMode, LinearFormPower, RealExponentSum, Sign, WaringDecomposition,
    WaringTerm,
};
use crate::numeric::{format_significant, parse_rational};
use crate::oracle::{self, Xoshiro256};
use crate::poly::{self, rational_to_f64, ParseError, Polynomial};
use crate::simplex::{self, evaluation_point, evaluation_point_real, ScaledSimplex, Simplex, SimplexError};

#[derive(Parser, Debug)]
#[command(name = "simplex-integrate", version, about = "Integrate polynomials over simplices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Xi,
    Gamma,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate a polynomial, a power of a linear form or a Waring-type sum.
    Integrate(IntegrateArgs),
    /// Integrate a sum of monomials with real exponents over the canonical simplex.
    IntegrateReal(RealArgs),
    /// Exact volume of a simplex.
    Volume(VolumeArgs),
    /// List the evaluation points ξ_j.
    Points(PointsArgs),
    /// Compare the engine against the independent oracles.
    Verify(VerifyArgs),
    /// Time the exact, ξ-point and Monte Carlo paths; CSV on stdout.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    #[arg(long)]
    dim: Option<usize>,
    /// Polynomial expression, e.g. "x1 + x1*x2 + x2^2".
    #[arg(long)]
    poly: Option<String>,
    /// Vertex file (n+1 lines of n rational coordinates).
    #[arg(long)]
    vertices: Option<PathBuf>,
    /// Scaled simplex weights z, comma separated.
    #[arg(long)]
    z: Option<String>,
    /// Coefficients of ℓ, comma separated.
    #[arg(long = "linear-form")]
    linear_form: Option<String>,
    #[arg(long)]
    power: Option<u32>,
    /// Waring file: lines of ±1 followed by n rationals.
    #[arg(long)]
    waring: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
}

#[derive(Args, Debug)]
struct RealArgs {
    /// Lines: coefficient then n real exponents.
    #[arg(long = "real-terms")]
    real_terms: PathBuf,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Gamma)]
    mode: Mode,
}

#[derive(Args, Debug)]
struct VolumeArgs {
    #[arg(long)]
    vertices: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args, Debug)]
struct PointsArgs {
    #[arg(long)]
    dim: usize,
    /// List ξ_1 .. ξ_degree.
    #[arg(long)]
    degree: Option<u32>,
    /// A single real degree t for the homogeneous extension.
    #[arg(long = "real-degree", allow_negative_numbers = true)]
    real_degree: Option<f64>,
    /// Also map the points into this simplex.
    #[arg(long)]
    vertices: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    poly: Option<String>,
    #[arg(long = "real-terms")]
    real_terms: Option<PathBuf>,
    #[arg(long)]
    vertices: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long = "max-degree", default_value_t = 8)]
    max_degree: u32,
    #[arg(long = "max-dim", default_value_t = 4)]
    max_dim: usize,
    /// Random polynomials per (degree, n) cell.
    #[arg(long, default_value_t = 3)]
    count: usize,
    /// Monte Carlo samples per polynomial.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Io { .. } | CliError::Mismatch(_) => 1,
            CliError::Simplex(e) => simplex_exit_code(e),
            CliError::Integrate(e) => match e {
                IntegrateError::Simplex(s) => simplex_exit_code(s),
                IntegrateError::DimensionMismatch { .. }
                | IntegrateError::InputFormat { .. }
                | IntegrateError::ExponentCount { .. } => 2,
                IntegrateError::ExponentTooSmall { .. }
                | IntegrateError::MixedDegrees { .. }
                | IntegrateError::NonFinite { .. }
                | IntegrateError::NotApplicable => 4,
            },
        }
    }
}

fn simplex_exit_code(e: &SimplexError) -> u8 {
    match e {
        SimplexError::Degenerate { .. } => 3,
        SimplexError::VertexCount { .. } | SimplexError::CoordinateCount { .. } | SimplexError::VertexFile { .. } => 2,
        SimplexError::Dimension(_) | SimplexError::NonPositiveScale { .. } | SimplexError::UndefinedPoint(_) => 4,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code() as u8;
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{}", rendered);
            } else {
                let _ = write!(err, "{}", rendered);
            }
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Integrate(a) => emit_result(out, format, &integrate_cmd(a)?),
        Command::IntegrateReal(a) => emit_result(out, format, &integrate_real_cmd(a)?),
        Command::Volume(a) => volume_cmd(a, format, out),
        Command::Points(a) => points_cmd(a, format, out),
        Command::Verify(a) => verify_cmd(a, format, out),
        Command::Bench(a) => bench_cmd(a, out),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_simplex(path: &Path) -> Result<Simplex, CliError> {
    Ok(Simplex::parse_vertex_file(&read_file(path)?)?)
}

fn parse_list(s: &str) -> Result<Vec<BigRational>, CliError> {
    s.split(',')
        .map(|v| parse_rational(v).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn require_dim(dim: Option<usize>, what: &str) -> Result<usize, CliError> {
    dim.ok_or_else(|| CliError::Usage(format!("--dim is required with {}", what)))
}

fn check_dim(expected: Option<usize>, found: usize) -> Result<(), CliError> {
    match expected {
        Some(d) if d != found => Err(CliError::Usage(format!("--dim {} does not match input dimension {}", d, found))),
        _ => Ok(()),
    }
}

fn integrate_cmd(a: &IntegrateArgs) -> Result<IntegralResult, CliError> {
    if a.mode == Mode::Gamma {
        return Err(CliError::Usage("--mode gamma applies to integrate-real".into()));
    }
    let sources = [a.poly.is_some(), a.linear_form.is_some(), a.waring.is_some()];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(CliError::Usage(
            "give exactly one of --poly, --linear-form or --waring".into(),
        ));
    }
    if a.z.is_some() && a.vertices.is_some() {
        return Err(CliError::Usage("--z and --vertices are mutually exclusive".into()));
    }
    let domain = a.vertices.as_deref().map(load_simplex).transpose()?;

    if let Some(expr) = &a.poly {
        let n = require_dim(a.dim, "--poly")?;
        simplex::CanonicalSimplex::new(n)?;
        let f = poly::parse(expr, n)?;
        if let Some(z) = &a.z {
            if a.mode == Mode::Xi {
                return Err(CliError::Usage("--z supports only --mode exact".into()));
            }
            let z = ScaledSimplex::new(parse_list(z)?)?;
            return Ok(integrate::integrate_scaled(&f, &z)?);
        }
        return Ok(match (domain, a.mode) {
            (Some(s), Mode::Xi) => integrate::integrate_simplex_xi(&s, &f)?,
            (Some(s), _) => integrate::integrate_simplex(&s, &f)?,
            (None, Mode::Xi) => integrate::integrate_canonical_xi(&f),
            (None, _) => integrate::integrate_canonical_exact(&f),
        });
    }

    if a.mode == Mode::Xi || a.z.is_some() {
        return Err(CliError::Usage(
            "--mode xi and --z apply only to --poly".into(),
        ));
    }
    let power = a
        .power
        .ok_or_else(|| CliError::Usage("--power is required with --linear-form and --waring".into()))?;
    let waring = if let Some(ell) = &a.linear_form {
        let ell = parse_list(ell)?;
        check_dim(a.dim, ell.len())?;
        if domain.is_none() {
            simplex::CanonicalSimplex::new(ell.len())?;
            return Ok(integrate::integrate_linear_form_power(&LinearFormPower::new(ell, power)));
        }
        WaringDecomposition::new(vec![WaringTerm { sign: Sign::Plus, c: ell }], power)
    } else {
        let path = a.waring.as_deref().expect("one source is present");
        WaringDecomposition::parse(&read_file(path)?, power)?
    };
    let n = waring.dimension().expect("parsed decompositions are non-empty");
    check_dim(a.dim, n)?;
    let s = match domain {
        Some(s) => s,
        None => Simplex::canonical(n)?,
    };
    Ok(integrate::integrate_waring(&s, &waring)?)
}

fn integrate_real_cmd(a: &RealArgs) -> Result<IntegralResult, CliError> {
    let f = RealExponentSum::parse(&read_file(&a.real_terms)?, a.dim)?;
    simplex::CanonicalSimplex::new(f.dimension())?;
    match a.mode {
        Mode::Gamma => Ok(integrate::integrate_real_exponents(&f)),
        Mode::Xi => Ok(integrate::integrate_real_exponents_xi(&f)?),
        Mode::Exact => Err(CliError::Usage(
            "real exponents have no exact mode; use --mode gamma or --mode xi".into(),
        )),
    }
}

#[derive(Serialize)]
struct JsonResult {
    exact: Option<String>,
    approx: f64,
    mode: IntegrationMode,
}

fn approx_text(r: &IntegralResult) -> String {
    match r.exact_value() {
        Some(e) => format_significant(e, 17),
        None => format!("{}", r.approx()),
    }
}

fn emit_result(out: &mut dyn Write, format: Format, r: &IntegralResult) -> Result<(), CliError> {
    let text = match format {
        Format::Text => {
            let mut s = String::new();
            if let Some(e) = r.exact_value() {
                s.push_str(&format!("exact: {}\n", e));
            }
            s.push_str(&format!("approx: {}\n", approx_text(r)));
            s
        }
        Format::Json => {
            let j = JsonResult {
                exact: r.exact_value().map(ToString::to_string),
                approx: r.approx(),
                mode: r.mode(),
            };
            format!("{}\n", serde_json::to_string(&j).expect("plain struct serializes"))
        }
    };
    write_out(out, &text)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn volume_cmd(a: &VolumeArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let s = match (&a.vertices, a.dim) {
        (Some(path), dim) => {
            let s = load_simplex(path)?;
            check_dim(dim, s.dimension())?;
            s
        }
        (None, Some(n)) => Simplex::canonical(n)?,
        (None, None) => return Err(CliError::Usage("volume needs --vertices or --dim".into())),
    };
    let r = integrate::integrate_simplex(&s, &Polynomial::one(s.dimension()))?;
    emit_result(out, format, &r)
}

#[derive(Serialize)]
struct JsonPoint {
    degree: f64,
    theta: f64,
    theta_power: Option<String>,
    xi: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi: Option<Vec<f64>>,
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{}", x)).collect();
    format!("({})", parts.join(", "))
}

fn points_cmd(a: &PointsArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let n = a.dim;
    simplex::CanonicalSimplex::new(n)?;
    let s = a.vertices.as_deref().map(load_simplex).transpose()?;
    if let Some(s) = &s {
        check_dim(Some(n), s.dimension())?;
    }
    let points: Vec<(String, simplex::EvaluationPoint)> = match (a.degree, a.real_degree) {
        (Some(t), None) => {
            if t == 0 {
                return Err(CliError::Usage("--degree must be at least 1".into()));
            }
            (1..=t).map(|j| (j.to_string(), evaluation_point(n, j))).collect()
        }
        (None, Some(t)) => vec![(format!("{}", t), evaluation_point_real(n, t)?)],
        _ => return Err(CliError::Usage("give exactly one of --degree or --real-degree".into())),
    };
    let mut text = String::new();
    let mut json = Vec::new();
    for (label, p) in &points {
        let psi = s.as_ref().map(|s| s.from_canonical_f64(p.point()));
        let degree = match p.degree() {
            simplex::PointDegree::Integer(j) => f64::from(j),
            simplex::PointDegree::Real(t) => t,
        };
        match format {
            Format::Text => {
                text.push_str(&format!("xi_{} = {}  theta = {}", label, fmt_vec(p.point()), p.theta()));
                if let Some(tp) = p.theta_power() {
                    text.push_str(&format!("  theta^{} = {}", label, tp));
                }
                if let Some(psi) = &psi {
                    text.push_str(&format!("  psi_{} = {}", label, fmt_vec(psi)));
                }
                text.push('\n');
            }
            Format::Json => json.push(JsonPoint {
                degree,
                theta: p.theta(),
                theta_power: p.theta_power().map(ToString::to_string),
                xi: p.point().to_vec(),
                psi,
            }),
        }
    }
    if format == Format::Json {
        text = format!("{}\n", serde_json::to_string(&json).expect("plain struct serializes"));
    }
    write_out(out, &text)
}

#[derive(Serialize)]
struct JsonVerify {
    engine: String,
    oracle: Option<String>,
    monte_carlo_mean: f64,
    monte_carlo_std_error: f64,
    samples: u64,
    agree: bool,
}

fn verify_cmd(a: &VerifyArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let report = match (&a.poly, &a.real_terms) {
        (Some(expr), None) => {
            let n = require_dim(a.dim, "--poly")?;
            simplex::CanonicalSimplex::new(n)?;
            let f = poly::parse(expr, n)?;
            let s = match &a.vertices {
                Some(p) => load_simplex(p)?,
                None => Simplex::canonical(n)?,
            };
            if s.dimension() != n {
                return Err(IntegrateError::DimensionMismatch {
                    integrand: n,
                    domain: s.dimension(),
                }
                .into());
            }
            let engine = integrate::integrate_simplex(&s, &f)?
                .into_exact()
                .expect("exact path");
            let oracle_value = s.jacobian() * oracle::polynomial_integral_oracle(&s.pullback(&f));
            let mc = oracle::monte_carlo_integral(&s, |x| f.evaluate_f64(x), a.samples, a.seed);
            JsonVerify {
                engine: engine.to_string(),
                agree: engine == oracle_value,
                oracle: Some(oracle_value.to_string()),
                monte_carlo_mean: mc.mean,
                monte_carlo_std_error: mc.std_error,
                samples: mc.samples,
            }
        }
        (None, Some(path)) => {
            if a.vertices.is_some() {
                return Err(CliError::Usage("real exponents are integrated over the canonical simplex only".into()));
            }
            let f = RealExponentSum::parse(&read_file(path)?, a.dim)?;
            let s = Simplex::canonical(f.dimension())?;
            let engine = integrate::integrate_real_exponents(&f).approx();
            let mc = oracle::monte_carlo_integral(&s, |x| f.evaluate(x), a.samples, a.seed);
            JsonVerify {
                engine: format!("{}", engine),
                oracle: None,
                agree: mc.within_sigmas(engine, 4.0),
                monte_carlo_mean: mc.mean,
                monte_carlo_std_error: mc.std_error,
                samples: mc.samples,
            }
        }
        _ => return Err(CliError::Usage("verify needs exactly one of --poly or --real-terms".into())),
    };
    let text = match format {
        Format::Text => {
            let mut s = format!("engine: {}\n", report.engine);
            if let Some(o) = &report.oracle {
                s.push_str(&format!("oracle: {}\n", o));
            }
            s.push_str(&format!(
                "monte-carlo: {} ± {} ({} samples)\nstatus: {}\n",
                report.monte_carlo_mean,
                report.monte_carlo_std_error,
                report.samples,
                if report.agree { "agree" } else { "MISMATCH" }
            ));
            s
        }
        Format::Json => format!("{}\n", serde_json::to_string(&report).expect("plain struct serializes")),
    };
    write_out(out, &text)?;
    if report.agree {
        Ok(())
    } else {
        Err(CliError::Mismatch("engine and oracle disagree".into()))
    }
}

/// Dense polynomial with every monomial of degree `≤ degree` and integer
/// coefficients in `[-10, 10]`.
fn random_dense_polynomial(n: usize, degree: u32, rng: &mut Xoshiro256) -> Polynomial {
    Polynomial::from_terms(
        n,
        poly::monomials_up_to(n, degree)
            .into_iter()
            .map(|alpha| (alpha, BigRational::from_integer(rng.range_i64(-10, 10).into()))),
    )
}

fn bench_cmd(a: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.max_dim == 0 || a.max_dim > simplex::MAX_DIMENSION || a.count == 0 || a.samples == 0 {
        return Err(CliError::Usage(
            "--max-dim must be in 1..=64, --count and --samples at least 1".into(),
        ));
    }
    let mut rng = Xoshiro256::seed_from_u64(a.seed);
    let mut csv = String::from("method,degree,n,nanoseconds,abs_error\n");
    for n in 1..=a.max_dim {
        let s = Simplex::canonical(n)?;
        for degree in 0..=a.max_degree {
            let polys: Vec<Polynomial> = (0..a.count).map(|_| random_dense_polynomial(n, degree, &mut rng)).collect();
            let mut rows = [("exact", 0u128, 0f64), ("xi", 0, 0.0), ("monte-carlo", 0, 0.0)];
            for f in &polys {
                let t = Instant::now();
                let exact = integrate::integrate_canonical_exact(f);
                rows[0].1 += t.elapsed().as_nanos();
                let exact_f = rational_to_f64(exact.exact_value().expect("exact path"));

                let t = Instant::now();
                let xi = integrate::integrate_canonical_xi(f);
                rows[1].1 += t.elapsed().as_nanos();
                rows[1].2 = rows[1].2.max((xi.approx() - exact_f).abs());

                let t = Instant::now();
                let mc = oracle::monte_carlo_integral(&s, |x| f.evaluate_f64(x), a.samples, rng.next_u64());
                rows[2].1 += t.elapsed().as_nanos();
                rows[2].2 = rows[2].2.max((mc.mean - exact_f).abs());
            }
            for (method, ns, err) in rows {
                csv.push_str(&format!("{},{},{},{},{:e}\n", method, degree, n, ns / a.count as u128, err));
            }
        }
    }
    write_out(out, &csv)
}

