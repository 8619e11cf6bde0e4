//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! and returns the process exit status:
//! 0 success, 1 usage error, 2 domain error, 3 budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::chain::{evolve, Distribution, TransitionMatrix};
use crate::complexity::{
    self, aligned_pair, complexity_report, extreme_pairs, lower_constant, max_aligned_alpha,
    pairwise_epsilon, Count, TestingInstance, EXTREME_ALPHA_SAFETY,
};
use crate::error::Error;
use crate::geometry::{self, decay_from_weights};
use crate::montecarlo::{estimate_error_evolved, SimulationReport, BINOMIAL_SWITCH};
use crate::spectral::{spectral_decomposition, SpectralDecomposition};
use crate::zoo::ZooSpec;

/// Largest amount of sampling work a simulation may request: per trial, `n`
/// draws, or `d` binomial draws once `n` exceeds [`BINOMIAL_SWITCH`].
pub const SIMULATION_BUDGET: u64 = 20_000_000_000;

#[derive(Debug, Parser)]
#[command(name = "mixwindow", version, about = "Sample complexity of testing initial distributions of a reversible Markov chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues with their rank by modulus.
    Spectrum(SpectrumArgs),
    /// Distribution after t steps.
    Evolve(EvolveArgs),
    /// Decay and sample-complexity bounds per t.
    Complexity(PairArgs),
    /// Normalized complexity ratio between two pairs per t.
    Window(WindowArgs),
    /// Smallest t at which n samples no longer tell the pair apart.
    Time(TimeArgs),
    /// Monte Carlo error of the likelihood-ratio test.
    Simulate(SimulateArgs),
    /// Example specifications of the built-in chain families.
    ZooList(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ChainArgs {
    /// Inline JSON or a path to a JSON file: a zoo spec, {"type":"explicit","matrix":[[...]]} or a bare matrix.
    #[arg(long)]
    chain: String,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Initial distribution: "stationary", "point:<i>", a vector, or "extreme:[2]|[d]:<alpha|auto>:<+|->".
    #[arg(long)]
    mu: String,
    /// Time steps: "5", "0..10" (inclusive) or "0,2,5".
    #[arg(long, default_value = "0")]
    t: String,
    /// Likelihood-ratio target used to resolve "auto" perturbation sizes.
    #[arg(long)]
    epsilon: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, default_value = "extreme:[2]:auto:+")]
    mu: String,
    #[arg(long, default_value = "extreme:[2]:auto:-")]
    mu_prime: String,
    #[arg(long, default_value = "0")]
    t: String,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct WindowArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// First pair A, the one expected to stay distinguishable.
    #[arg(long, default_value = "extreme:[2]:auto:+")]
    mu: String,
    #[arg(long, default_value = "extreme:[2]:auto:-")]
    mu_prime: String,
    /// Second pair B.
    #[arg(long, default_value = "extreme:[d]:auto:+")]
    nu: String,
    #[arg(long, default_value = "extreme:[d]:auto:-")]
    nu_prime: String,
    #[arg(long, default_value = "0..10")]
    t: String,
    #[arg(long)]
    epsilon: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct TimeArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, default_value = "extreme:[2]:auto:+")]
    mu: String,
    #[arg(long, default_value = "extreme:[2]:auto:-")]
    mu_prime: String,
    /// Sample sizes: "1000", "10..20" or "10,100,1000".
    #[arg(long)]
    n: String,
    /// Crossing level for n·Δ(t); defaults to 8εδ² at the pair's measured ε.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, default_value = "extreme:[2]:auto:+")]
    mu: String,
    #[arg(long, default_value = "extreme:[2]:auto:-")]
    mu_prime: String,
    #[arg(long, default_value = "0")]
    t: String,
    /// Sample sizes; defaults to the upper bound at δ for each t.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0.75)]
    eta: f64,
    #[arg(long, default_value_t = 2000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            CliError::Core(Error::Parse(_) | Error::DimensionMismatch { .. } | Error::InvalidParameter(_)) => 1,
            CliError::Core(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stderr) {
        Ok((text, output)) => match write_output(&text, output.as_ref(), stdout) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn write_output(text: &str, path: Option<&PathBuf>, stdout: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

fn execute(cmd: Command, notes: &mut dyn Write) -> CliResult<(String, Option<PathBuf>)> {
    match cmd {
        Command::Spectrum(a) => Ok((cmd_spectrum(&a)?, a.out.output)),
        Command::Evolve(a) => Ok((cmd_evolve(&a, notes)?, a.out.output)),
        Command::Complexity(a) => Ok((cmd_complexity(&a, notes)?, a.out.output)),
        Command::Window(a) => Ok((cmd_window(&a, notes)?, a.out.output)),
        Command::Time(a) => Ok((cmd_time(&a, notes)?, a.out.output)),
        Command::Simulate(a) => Ok((cmd_simulate(&a, notes)?, a.out.output)),
        Command::ZooList(a) => Ok((cmd_zoo_list(&a)?, a.output)),
    }
}

/// 17 significant digits; non-finite values as `inf`, `-inf`, `nan`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

/// Parses a chain from inline JSON or from a file holding JSON.
pub fn parse_chain(spec: &str) -> crate::error::Result<TransitionMatrix> {
    let trimmed = spec.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("cannot read chain file {spec}: {e}")))?
    };
    parse_chain_json(&text)
}

/// Parses a chain from JSON text: a zoo spec, an explicit matrix object, or a
/// bare array of rows.
pub fn parse_chain_json(text: &str) -> crate::error::Result<TransitionMatrix> {
    let value: Value = serde_json::from_str(text)?;
    match &value {
        Value::Array(_) => Ok(serde_json::from_value::<TransitionMatrix>(value)?),
        Value::Object(map) if map.get("type").and_then(Value::as_str) == Some("explicit") => {
            let rows = map.get("matrix").ok_or_else(|| Error::Parse("explicit chain needs a \"matrix\"".into()))?;
            Ok(serde_json::from_value::<TransitionMatrix>(rows.clone())?)
        }
        _ => serde_json::from_value::<ZooSpec>(value)?.build(),
    }
}

/// Parses "7", "0..10" (inclusive) or "0,2,5".
pub fn parse_range(spec: &str) -> std::result::Result<Vec<u64>, String> {
    let spec = spec.trim();
    if let Some((a, b)) = spec.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b): (u64, u64) = (
            a.trim().parse().map_err(|_| format!("bad range start in {spec:?}"))?,
            b.trim().parse().map_err(|_| format!("bad range end in {spec:?}"))?,
        );
        if a > b {
            return Err(format!("empty range {spec:?}"));
        }
        if b - a > 1_000_000 {
            return Err(format!("range {spec:?} is too long"));
        }
        return Ok((a..=b).collect());
    }
    spec.split(',').map(|x| x.trim().parse::<u64>().map_err(|_| format!("bad integer {x:?} in {spec:?}"))).collect()
}

/// A resolved distribution argument, with the perturbation size when one was chosen.
struct Resolved {
    dist: Distribution,
    alpha: Option<f64>,
}

fn resolve_distribution(spec: &str, s: &SpectralDecomposition, epsilon: Option<f64>) -> CliResult<Resolved> {
    let d = s.dim();
    let spec = spec.trim();
    if spec == "stationary" {
        return Ok(Resolved { dist: s.stationary().clone(), alpha: None });
    }
    if let Some(i) = spec.strip_prefix("point:") {
        let i: usize = i.parse().map_err(|_| usage(format!("bad state in {spec:?}")))?;
        return Ok(Resolved { dist: Distribution::point_mass(d, i)?, alpha: None });
    }
    if let Some(rest) = spec.strip_prefix("extreme:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [which, alpha, sign] = parts[..] else {
            return Err(usage(format!("expected extreme:[2]|[d]:<alpha|auto>:<+|->, got {spec:?}")));
        };
        let index = match which {
            "[2]" => s.second(),
            "[d]" => s.last(),
            _ => return Err(usage(format!("unknown eigenvector {which:?}; use [2] or [d]"))),
        };
        let alpha = if alpha == "auto" {
            let eps = epsilon.ok_or_else(|| usage("\"auto\" perturbation needs --epsilon"))?;
            auto_alpha(s, eps)?
        } else {
            alpha.parse::<f64>().map_err(|_| usage(format!("bad alpha {alpha:?}")))?
        };
        let (plus, minus) = aligned_pair(s, index, alpha)?;
        let dist = match sign {
            "+" => plus,
            "-" => minus,
            _ => return Err(usage(format!("sign must be + or -, got {sign:?}"))),
        };
        return Ok(Resolved { dist, alpha: Some(alpha) });
    }
    let body = spec.trim_start_matches('[').trim_end_matches(']');
    let mass = body
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("bad distribution {spec:?}"))))
        .collect::<CliResult<Vec<f64>>>()?;
    Error::check_dim(d, mass.len())?;
    Ok(Resolved { dist: Distribution::new(mass)?, alpha: None })
}

/// The shared perturbation size of the two extreme pairs at target `eps`.
fn auto_alpha(s: &SpectralDecomposition, eps: f64) -> CliResult<f64> {
    if s.dim() >= 3 {
        Ok(extreme_pairs(s, eps)?.alpha)
    } else {
        Ok(EXTREME_ALPHA_SAFETY * max_aligned_alpha(s, s.second(), eps)?)
    }
}

fn note_alpha(notes: &mut dyn Write, name: &str, r: &Resolved) {
    if let Some(a) = r.alpha {
        let _ = writeln!(notes, "note: {name} alpha = {}", format_float(a));
    }
}

fn chain_and_spectrum(c: &ChainArgs) -> CliResult<(TransitionMatrix, SpectralDecomposition)> {
    let p = parse_chain(&c.chain)?;
    let s = spectral_decomposition(&p)?;
    Ok((p, s))
}

fn times(spec: &str) -> CliResult<Vec<u64>> {
    parse_range(spec).map_err(usage)
}

#[derive(Serialize)]
struct SpectrumRow {
    index: usize,
    eigenvalue: f64,
    abs_rank: usize,
    eigenvector_preview: Vec<f64>,
}

fn cmd_spectrum(a: &SpectrumArgs) -> CliResult<String> {
    let (_, s) = chain_and_spectrum(&a.chain)?;
    let mut rank = vec![0; s.dim()];
    for (r, &i) in s.abs_order().iter().enumerate() {
        rank[i] = r + 1;
    }
    let rows: Vec<SpectrumRow> = (0..s.dim())
        .map(|i| SpectrumRow {
            index: i + 1,
            eigenvalue: s.eigenvalue(i),
            abs_rank: rank[i],
            eigenvector_preview: s.left(i).iter().take(4).copied().collect(),
        })
        .collect();
    match a.out.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("index,eigenvalue,abs_rank\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{}", r.index, format_float(r.eigenvalue), r.abs_rank);
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct EvolveRow {
    t: u64,
    distribution: Vec<f64>,
}

fn cmd_evolve(a: &EvolveArgs, notes: &mut dyn Write) -> CliResult<String> {
    let (p, s) = chain_and_spectrum(&a.chain)?;
    let mu = resolve_distribution(&a.mu, &s, a.epsilon)?;
    note_alpha(notes, "mu", &mu);
    let rows = times(&a.t)?
        .into_iter()
        .map(|t| Ok(EvolveRow { t, distribution: evolve(&mu.dist, &p, t)?.into_vec() }))
        .collect::<CliResult<Vec<_>>>()?;
    match a.out.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("t,state,mass\n");
            for r in &rows {
                for (x, m) in r.distribution.iter().enumerate() {
                    let _ = writeln!(out, "{},{},{}", r.t, x, format_float(*m));
                }
            }
            Ok(out)
        }
    }
}

fn resolve_pair(
    s: &SpectralDecomposition,
    mu: &str,
    mu_prime: &str,
    epsilon: Option<f64>,
    notes: &mut dyn Write,
) -> CliResult<(Distribution, Distribution)> {
    let a = resolve_distribution(mu, s, epsilon)?;
    let b = resolve_distribution(mu_prime, s, epsilon)?;
    note_alpha(notes, "mu", &a);
    note_alpha(notes, "mu_prime", &b);
    Ok((a.dist, b.dist))
}

fn cmd_complexity(a: &PairArgs, notes: &mut dyn Write) -> CliResult<String> {
    let (p, s) = chain_and_spectrum(&a.chain)?;
    let (mu, mu_prime) = resolve_pair(&s, &a.mu, &a.mu_prime, a.epsilon, notes)?;
    let inst = TestingInstance::with_spectrum(p, s, mu, mu_prime, 0)?;
    let eps = inst.epsilon();
    let reports = times(&a.t)?
        .into_iter()
        .map(|t| Ok(complexity_report(&inst.at_time(t), Some(eps), a.delta)?))
        .collect::<CliResult<Vec<_>>>()?;
    match a.out.format {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut out = String::from("t,delta_t,n_upper,n_lower,n_star_scale\n");
            for r in &reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.t,
                    format_float(r.delta_t),
                    r.n_upper,
                    r.n_lower,
                    format_float(r.n_star_scale)
                );
            }
            Ok(out)
        }
    }
}

/// A window value, or the marker for two pairs that are both indistinguishable.
#[derive(Debug, Clone, Copy, PartialEq)]
enum WindowCell {
    Value(f64),
    Undefined,
}

impl WindowCell {
    fn text(self) -> String {
        match self {
            WindowCell::Value(x) => format_float(x),
            WindowCell::Undefined => "undefined".into(),
        }
    }
}

impl Serialize for WindowCell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WindowCell::Value(x) => complexity::serialize_extended(x, s),
            WindowCell::Undefined => s.serialize_str("undefined"),
        }
    }
}

#[derive(Serialize)]
struct WindowRow {
    t: u64,
    delta_a: f64,
    delta_b: f64,
    window: WindowCell,
}

fn cmd_window(a: &WindowArgs, notes: &mut dyn Write) -> CliResult<String> {
    let (_, s) = chain_and_spectrum(&a.chain)?;
    let (mu, mu_prime) = resolve_pair(&s, &a.mu, &a.mu_prime, a.epsilon, notes)?;
    let (nu, nu_prime) = resolve_pair(&s, &a.nu, &a.nu_prime, a.epsilon, notes)?;
    let wa = geometry::mode_weights(&mu, &mu_prime, &s)?;
    let wb = geometry::mode_weights(&nu, &nu_prime, &s)?;
    let rows = times(&a.t)?
        .into_iter()
        .map(|t| {
            let window = match complexity::window_from_weights(&wa, &wb, t) {
                Ok(x) => WindowCell::Value(x),
                Err(Error::Undefined(_)) if t > 0 => WindowCell::Undefined,
                Err(e) => return Err(CliError::Core(e)),
            };
            Ok(WindowRow { t, delta_a: decay_from_weights(&wa, t), delta_b: decay_from_weights(&wb, t), window })
        })
        .collect::<CliResult<Vec<_>>>()?;
    match a.out.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("t,delta_a,delta_b,window\n");
            for r in &rows {
                let _ =
                    writeln!(out, "{},{},{},{}", r.t, format_float(r.delta_a), format_float(r.delta_b), r.window.text());
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct TimeRow {
    n: u64,
    delta_0: f64,
    #[serde(serialize_with = "complexity::serialize_extended")]
    threshold: f64,
    t_star: Count,
}

fn cmd_time(a: &TimeArgs, notes: &mut dyn Write) -> CliResult<String> {
    let (_, s) = chain_and_spectrum(&a.chain)?;
    let (mu, mu_prime) = resolve_pair(&s, &a.mu, &a.mu_prime, a.epsilon, notes)?;
    let weights = geometry::mode_weights(&mu, &mu_prime, &s)?;
    let threshold = match a.threshold {
        Some(x) => x,
        None => {
            let eps = pairwise_epsilon(&mu, &mu_prime, s.stationary())?;
            if eps == 0.0 {
                return Err(CliError::Core(Error::Infeasible(
                    "the pair is not likelihood-ratio bounded; pass --threshold".into(),
                )));
            }
            if !(a.delta > 0.0 && a.delta < 1.0) {
                return Err(usage(format!("delta = {} must lie in (0, 1)", a.delta)));
            }
            lower_constant(eps, a.delta)
        }
    };
    let delta_0 = decay_from_weights(&weights, 0);
    let rows = parse_range(&a.n)
        .map_err(usage)?
        .into_iter()
        .map(|n| Ok(TimeRow { n, delta_0, threshold, t_star: complexity::time_from_weights(&weights, n, threshold)? }))
        .collect::<CliResult<Vec<_>>>()?;
    match a.out.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("n,delta_0,threshold,t_star\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{},{}", r.n, format_float(r.delta_0), format_float(r.threshold), r.t_star);
            }
            Ok(out)
        }
    }
}

fn cmd_simulate(a: &SimulateArgs, notes: &mut dyn Write) -> CliResult<String> {
    let (p, s) = chain_and_spectrum(&a.chain)?;
    let (mu, mu_prime) = resolve_pair(&s, &a.mu, &a.mu_prime, a.epsilon, notes)?;
    let inst = TestingInstance::with_spectrum(p, s, mu, mu_prime, 0)?;
    let eps = inst.epsilon();
    let fixed_n = a.n.as_deref().map(parse_range).transpose().map_err(usage)?;
    let mut reports = Vec::new();
    for t in times(&a.t)? {
        let at = inst.at_time(t);
        let ns = match &fixed_n {
            Some(ns) => ns.clone(),
            None => {
                let bound = if eps > 0.0 {
                    complexity::sample_upper_bound(&at, eps, a.delta)?
                } else {
                    complexity::general_upper_bound(&at, a.delta, a.eta)?
                };
                match bound {
                    Count::Finite(n) => vec![n.max(1)],
                    Count::Infinite => {
                        return Err(CliError::Core(Error::Infeasible(format!(
                            "the pair is indistinguishable at t = {t}; pass --n"
                        ))))
                    }
                }
            }
        };
        let (mu_t, mu_prime_t) = at.evolved()?;
        for n in ns {
            let per_trial = if n > BINOMIAL_SWITCH { mu_t.dim() as u64 } else { n };
            let work = (per_trial as f64) * (a.trials as f64) * 2.0;
            if work > SIMULATION_BUDGET as f64 {
                return Err(CliError::Core(Error::BudgetExceeded { outcomes: work, budget: SIMULATION_BUDGET }));
            }
            let estimate = estimate_error_evolved(&mu_t, &mu_prime_t, n, a.trials, a.seed)?;
            reports.push(SimulationReport { estimate, n, t, seed: a.seed });
        }
    }
    match a.out.format {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut out = String::from("err_mu,err_mu_prime,err_max,trials,ci_halfwidth,n,t,seed\n");
            for r in &reports {
                let e = &r.estimate;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    format_float(e.err_mu),
                    format_float(e.err_mu_prime),
                    format_float(e.err_max),
                    e.trials,
                    format_float(e.ci_halfwidth),
                    r.n,
                    r.t,
                    r.seed
                );
            }
            Ok(out)
        }
    }
}

fn cmd_zoo_list(a: &OutputArgs) -> CliResult<String> {
    let specs = ZooSpec::examples();
    match a.format {
        Format::Json => to_json(&specs),
        Format::Csv => {
            let mut out = String::from("family,spec\n");
            for z in &specs {
                let json = serde_json::to_string(z).map_err(Error::from)?;
                let _ = writeln!(out, "{},\"{}\"", z.family(), json.replace('"', "\"\""));
            }
            Ok(out)
        }
    }
}
