//! Command-line front end.
//!
//! Exit codes: 0 success, 2 flag error, 3 physics-domain error (truncation
//! guard, empty post-selection), 4 acceptance failure, 1 I/O failure.

mod output;

use crate::error::Error;
use crate::fockspace::{coherent_state, DEFAULT_NMAX};
use crate::oracle;
use crate::scenarios::{parse_complex, Config, Pulse, ScenarioSpec, Treatment};
use crate::transforms::{apply_dispersive, apply_eraser, projector_by_name};
use crate::twopath::{condition, pattern, visibility, FreqTag, TwoPathMixture};
use crate::{acceptance, build};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

pub use output::{Format, PatternOutput, SweepRow, TransformEcho, WhichwayOutput};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_FLAG: u8 = 2;
pub const EXIT_PHYSICS: u8 = 3;
pub const EXIT_ACCEPTANCE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "recoil-slits",
    version,
    about = "Double-slit fringes with single trapped atoms as slits",
    after_help = "Config E couples the slits with g (a1† a2 + h.c.): the normal modes are split by \
                  the beat frequency 2g, so a quarter beat period is t = pi / (4 g)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one scenario, apply transforms and write its fringe pattern
    Pattern(PatternArgs),
    /// Visibility against recoil strength, exact and first order
    Sweep(SweepArgs),
    /// Which-way discrimination by projecting onto a coherent state
    Whichway(WhichwayArgs),
    /// Run the acceptance suite and write a JSON summary
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConfigArg {
    A,
    B,
    C1,
    C2,
    D,
    E,
}

impl From<ConfigArg> for Config {
    fn from(c: ConfigArg) -> Self {
        match c {
            ConfigArg::A => Config::A,
            ConfigArg::B => Config::B,
            ConfigArg::C1 => Config::C1,
            ConfigArg::C2 => Config::C2,
            ConfigArg::D => Config::D,
            ConfigArg::E => Config::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PulseArg {
    Short,
    Long,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreatmentArg {
    Exact,
    First,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Slit configuration
    #[arg(long, value_enum, ignore_case = true)]
    pub config: Option<ConfigArg>,
    /// Pulse length relative to the trap period [default: short]
    #[arg(long, value_enum)]
    pub pulse: Option<PulseArg>,
    /// Recoil treatment [default: exact, first for config E]
    #[arg(long, value_enum)]
    pub treatment: Option<TreatmentArg>,
    /// Transverse recoil displacement, real or complex (e.g. 0.3, 0.3i, 0.1-0.2i)
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Longitudinal recoil displacement (config D)
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Scattering amplitude in (0, 0.1] [default: 0.01]
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Spring coupling g between the slits (config E)
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Free evolution time after the pulse (config E)
    #[arg(long = "evolve-time")]
    pub evolve_time: Option<f64>,
    /// Fock levels per mode [default: 16]
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Scenario in key=value form; explicit flags override its entries
    #[arg(long = "spec-file")]
    pub spec_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    /// Rotate the single-excitation markers of two slits by pi/2
    #[arg(long)]
    pub eraser: bool,
    /// Pi phase between the paths for these frequency tags (ELASTIC, SHIFTED, SYM, ANTISYM)
    #[arg(long, value_delimiter = ',')]
    pub dispersive: Vec<String>,
    /// Record the pattern in coincidence with this atomic outcome
    /// (ground, atom1_excited, atom2_excited, single_atom_0, single_atom_1, sym, antisym)
    #[arg(long)]
    pub coincidence: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PatternArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub transforms: TransformArgs,
    /// Detector phases sampled in [0, 2 pi)
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// MIN:MAX:STEPS, STEPS points including both ends
    #[arg(long = "beta-range")]
    pub beta_range: String,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub transforms: TransformArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WhichwayArgs {
    /// Recoil displacement of the two paths, +beta and -beta
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Coherent probe state |delta>
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    /// Fock levels for the simulated overlaps
    #[arg(long, default_value_t = DEFAULT_NMAX)]
    pub nmax: usize,
    /// Target fractional errors for the tradeoff curve
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.5,0.2,0.1,0.05,0.02,0.01,0.001"
    )]
    pub errors: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Multiplies every acceptance tolerance
    #[arg(long = "tolerance-scale", default_value_t = 1.0, hide = true)]
    pub tolerance_scale: f64,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Flag(String),
    Physics(Error),
    Acceptance(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Flag(_) => EXIT_FLAG,
            CliError::Physics(_) => EXIT_PHYSICS,
            CliError::Acceptance(_) => EXIT_ACCEPTANCE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Flag(m) => write!(f, "{m}"),
            CliError::Physics(e) => write!(f, "{e}"),
            CliError::Acceptance(m) => write!(f, "acceptance failed: {m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec { .. }
            | Error::Unsupported(_)
            | Error::UnknownProjector(_)
            | Error::UnknownTag(_)
            | Error::ProjectorMismatch { .. }
            | Error::WrongAtomicSpace(_)
            | Error::NegativeCoupling(_)
            | Error::InvalidArgument(_) => CliError::Flag(e.to_string()),
            other => CliError::Physics(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses arguments, runs the subcommand, reports errors on stderr.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_FLAG } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> CliResult<()> {
    match command {
        Command::Pattern(args) => run_pattern(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Whichway(args) => run_whichway(args),
        Command::Report(args) => run_report(args),
    }
}

fn flag(msg: impl Into<String>) -> CliError {
    CliError::Flag(msg.into())
}

fn complex_flag(name: &str, value: &str) -> CliResult<Complex64> {
    parse_complex(value).map_err(|e| flag(format!("--{name}: {e}")))
}

/// Merges the spec file and explicit flags, then rejects flags the
/// configuration does not use.
pub fn resolve_spec(args: &ScenarioArgs) -> CliResult<ScenarioSpec> {
    let mut spec = match &args.spec_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            ScenarioSpec::from_kv(&text).map_err(|e| flag(format!("--spec-file: {e}")))?
        }
        None => {
            let config = args
                .config
                .ok_or_else(|| flag("--config is required (or give --spec-file)"))?;
            ScenarioSpec::new(config.into())
        }
    };
    if let Some(c) = args.config {
        spec.config = c.into();
    }
    let config = spec.config;
    let only = |name: &str, used: bool, given: bool| -> CliResult<()> {
        if given && !used {
            Err(flag(format!("--{name} is not used by config {config}")))
        } else {
            Ok(())
        }
    };
    only("beta", config != Config::A, args.beta.is_some())?;
    only("alpha", config == Config::D, args.alpha.is_some())?;
    only("coupling", config == Config::E, args.coupling.is_some())?;
    only(
        "evolve-time",
        config == Config::E,
        args.evolve_time.is_some(),
    )?;

    if let Some(p) = args.pulse {
        spec.pulse = match p {
            PulseArg::Short => Pulse::Short,
            PulseArg::Long => Pulse::Long,
        };
    }
    if let Some(t) = args.treatment {
        spec.treatment = match t {
            TreatmentArg::Exact => Treatment::Exact,
            TreatmentArg::First => Treatment::FirstOrder,
        };
    }
    if let Some(b) = &args.beta {
        spec.beta = complex_flag("beta", b)?;
    }
    if let Some(a) = &args.alpha {
        spec.alpha = complex_flag("alpha", a)?;
    }
    if let Some(e) = args.epsilon {
        spec.epsilon = e;
    }
    if let Some(g) = args.coupling {
        spec.coupling_g = g;
    }
    if let Some(t) = args.evolve_time {
        spec.evolve_time = t;
    }
    if let Some(n) = args.nmax {
        spec.nmax = n;
    }
    spec.validate()?;
    Ok(spec)
}

/// Transforms requested on the command line, validated against the config.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformPlan {
    pub eraser: bool,
    pub dispersive: Vec<FreqTag>,
    pub coincidence: Option<String>,
}

impl TransformPlan {
    pub fn from_args(args: &TransformArgs, config: Config) -> CliResult<Self> {
        if args.eraser && !config.has_two_slit_space() {
            return Err(flag(format!(
                "--eraser needs two separate slits (config A, B or E), not {config}"
            )));
        }
        let dispersive = args
            .dispersive
            .iter()
            .map(|t| {
                t.parse::<FreqTag>()
                    .map_err(|e| flag(format!("--dispersive: {e}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Self {
            eraser: args.eraser,
            dispersive,
            coincidence: args.coincidence.clone(),
        })
    }

    pub fn is_identity(&self) -> bool {
        !self.eraser && self.dispersive.is_empty() && self.coincidence.is_none()
    }

    pub fn echo(&self) -> TransformEcho {
        TransformEcho {
            eraser: self.eraser,
            dispersive: self
                .dispersive
                .iter()
                .map(|t| t.as_str().to_string())
                .collect(),
            coincidence: self.coincidence.clone(),
        }
    }

    /// Eraser, then dispersive element, then coincidence projection.
    /// Returns the final mixture and the post-selection probability.
    pub fn apply(&self, m: TwoPathMixture) -> CliResult<(TwoPathMixture, f64)> {
        let mut m = m;
        if self.eraser {
            m = apply_eraser(&m)?;
        }
        if !self.dispersive.is_empty() {
            m = apply_dispersive(&m, &self.dispersive)?;
        }
        match &self.coincidence {
            Some(name) => {
                let projector = projector_by_name(name, m.space())
                    .map_err(|e| flag(format!("--coincidence: {e}")))?;
                let c = condition(&m, &projector)?;
                Ok((c.mixture, c.post_selection_probability))
            }
            None => Ok((m, 1.0)),
        }
    }
}

pub fn run_pattern(args: &PatternArgs) -> CliResult<()> {
    let spec = resolve_spec(&args.scenario)?;
    let plan = TransformPlan::from_args(&args.transforms, spec.config)?;
    let out = pattern_output(&spec, &plan, args.samples)?;
    output::emit(&args.output, &out.render(args.output.format))
}

/// Builds, transforms and scans one scenario.
pub fn pattern_output(
    spec: &ScenarioSpec,
    plan: &TransformPlan,
    samples: usize,
) -> CliResult<PatternOutput> {
    let (m, post_selection_probability) = plan.apply(build(spec)?)?;
    let mut scan = pattern(&m, samples)?;
    scan.condition = plan.coincidence.clone().unwrap_or_else(|| "none".into());
    Ok(PatternOutput {
        spec: *spec,
        transforms: plan.echo(),
        scan,
        post_selection_probability,
    })
}

/// `MIN:MAX:STEPS` with `STEPS` points including both ends.
pub fn parse_beta_range(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || flag(format!("--beta-range: expected MIN:MAX:STEPS, got '{s}'"));
    let [min, max, steps] = parts.as_slice() else {
        return Err(bad());
    };
    let min: f64 = min.trim().parse().map_err(|_| bad())?;
    let max: f64 = max.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if !(min.is_finite() && max.is_finite()) {
        return Err(bad());
    }
    if min < 0.0 {
        return Err(flag("--beta-range: MIN must be >= 0"));
    }
    if steps == 0 || max < min || (steps == 1 && max != min) {
        return Err(flag(format!("--beta-range: empty range '{s}'")));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                max
            } else {
                // snap to 12 decimals so 0:0.3:4 yields 0.1, not 0.09999999999999999
                let v = min + (max - min) * k as f64 / (steps - 1) as f64;
                (v * 1e12).round() / 1e12
            }
        })
        .collect())
}

/// Closed-form unconditioned visibility, when one exists.
fn sweep_oracle(spec: &ScenarioSpec) -> Option<f64> {
    match spec.pulse {
        Pulse::Short => Some(match spec.config {
            Config::A => 1.0,
            Config::B | Config::E => oracle::contrast_b(spec.beta),
            Config::C1 | Config::C2 | Config::D => oracle::contrast_c(spec.beta),
        }),
        Pulse::Long => oracle::longpulse_contrast(spec.config, spec.beta),
    }
}

fn sweep_visibility(spec: &ScenarioSpec, plan: &TransformPlan) -> CliResult<Option<f64>> {
    let m = match build(spec) {
        Ok(m) => m,
        Err(Error::Unsupported(_)) if spec.treatment == Treatment::Exact => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let (m, _) = plan.apply(m)?;
    Ok(Some(visibility(&m)?.visibility))
}

/// One row per recoil value, in input order.
pub fn sweep_rows(
    base: &ScenarioSpec,
    plan: &TransformPlan,
    betas: &[f64],
) -> CliResult<Vec<SweepRow>> {
    betas
        .par_iter()
        .map(|&beta| {
            let spec = base.beta(beta);
            let exact = sweep_visibility(&spec.treatment(Treatment::Exact), plan)?;
            let first = sweep_visibility(&spec.treatment(Treatment::FirstOrder), plan)?;
            let oracle = if plan.is_identity() {
                sweep_oracle(&spec)
            } else {
                None
            };
            let abs_deviation = oracle.and_then(|o| exact.or(first).map(|v| (v - o).abs()));
            Ok(SweepRow {
                beta,
                visibility_exact: exact,
                visibility_first_order: first,
                oracle,
                abs_deviation,
            })
        })
        .collect()
}

pub fn run_sweep(args: &SweepArgs) -> CliResult<()> {
    if args.scenario.beta.is_some() {
        return Err(flag("--beta conflicts with --beta-range"));
    }
    let betas = parse_beta_range(&args.beta_range)?;
    let base = resolve_spec(&args.scenario)?;
    if base.config == Config::A && betas.iter().any(|&b| b != 0.0) {
        return Err(flag("--beta-range is not used by config A beyond beta = 0"));
    }
    let plan = TransformPlan::from_args(&args.transforms, base.config)?;
    let rows = sweep_rows(&base, &plan, &betas)?;
    let text = output::render_sweep(
        &base,
        &plan.echo(),
        &args.beta_range,
        &rows,
        args.output.format,
    );
    output::emit(&args.output, &text)
}

/// Oracle values, truncated-Fock cross-checks and the tradeoff curve.
pub fn whichway_output(
    beta: f64,
    delta: f64,
    nmax: usize,
    errors: &[f64],
) -> CliResult<WhichwayOutput> {
    if !(beta >= 0.0) || !(delta >= 0.0) {
        return Err(flag("--beta and --delta must be non-negative"));
    }
    let w = oracle::whichway_probabilities(beta, delta);
    let probe = coherent_state(Complex64::new(delta, 0.0), nmax)?.vector;
    let plus = coherent_state(Complex64::new(beta, 0.0), nmax)?.vector;
    let minus = coherent_state(Complex64::new(-beta, 0.0), nmax)?.vector;
    let sim_plus = probe.inner(&plus)?.norm_sqr();
    let sim_minus = probe.inner(&minus)?.norm_sqr();
    let curve = if beta > 0.0 {
        oracle::tradeoff_curve(beta, errors)
    } else {
        Vec::new()
    };
    Ok(WhichwayOutput {
        beta,
        delta,
        nmax,
        oracle: w,
        simulated_p_plus: sim_plus,
        simulated_p_minus: sim_minus,
        simulated_ratio: sim_minus / sim_plus,
        curve,
    })
}

pub fn run_whichway(args: &WhichwayArgs) -> CliResult<()> {
    let out = whichway_output(args.beta, args.delta, args.nmax, &args.errors)?;
    output::emit(&args.output, &out.render(args.output.format))
}

pub fn run_report(args: &ReportArgs) -> CliResult<()> {
    if !args.tolerance_scale.is_finite() {
        return Err(flag("--tolerance-scale must be finite"));
    }
    let reports = acceptance::run_all(args.tolerance_scale);
    for r in &reports {
        eprintln!("{}", r.summary_line());
    }
    let text = output::render_report(&reports, args.tolerance_scale);
    let target = OutputArgs {
        format: Format::Json,
        out: args.out.clone(),
    };
    output::emit(&target, &text)?;
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.id.to_string())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Acceptance(format!(
            "criteria {}",
            failed.join(", ")
        )))
    }
}
