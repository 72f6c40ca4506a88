//! Command-line front end: argument parsing, `key = value` config files, the
//! pressure cache, and JSON/CSV artifacts.
//!
//! Flags override the config file, which overrides built-in defaults. The
//! resolved parameters are validated before any work starts and embedded in
//! every artifact, so a run is reproducible from its own output.

pub mod artifact;
pub mod cache;
pub mod config;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::decompose::{decompose, verify_decomposition, Op, DEFAULT_K_MAX};
use crate::dimension::{classify_phi_with, dim_ebc, dim_f_with, ClassifyOptions, PhiFamily, PhiSpec};
use crate::error::{Error, Result};
use crate::geometry::{
    child_sum_check, enumerate_dn, fundamental_interval, gaps, holder_scan, luczak_count, nested_ek_ratio,
    s_table_for, EstimationParams, GapCase, Schedule, DEFAULT_WORD_BUDGET,
};
use crate::pressure::{Alphabet, PressureProblem, SummationMode, DEFAULT_LEAF_BUDGET};
use crate::rational::Rational;

pub use artifact::{Artifact, SCHEMA};
pub use cache::{CacheKey, CacheStatus, PressureCache, CACHE_ENV};
pub use config::ConfigFile;

#[derive(Parser, Debug)]
#[command(name = "cfdim", version, about = "Continued fractions with odd-order quotients 1: decompositions, pressure, geometry, dimension")]
pub struct Cli {
    /// `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for pressure enumeration.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Pressure cache file (default: $CFDIM_CACHE).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Ignore the cache even if one is configured.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Artifact path (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Sum or product decomposition of a rational.
    Decompose {
        #[arg(long)]
        x: Option<Rational>,
        #[arg(long, value_parser = parse_op)]
        op: Option<Op>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Solve f_{n,B}(ρ) = 1.
    Pressure(PressureArgs),
    /// Fundamental intervals and gaps.
    Geometry {
        #[command(subcommand)]
        command: GeometryCmd,
    },
    /// μ child sums and the Hölder scan on a schedule.
    MeasureCheck(MeasureArgs),
    /// dim_H F(B), E(b,c) and the growth classifier.
    Dimension {
        #[command(subcommand)]
        command: DimensionCmd,
    },
    /// Same as `dimension classify`.
    Classify(ClassifyArgs),
    /// Exact S(m,k) and its bound.
    Luczak {
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// R_k for the nested intervals of E(b,c).
    NestedRatio {
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Run the acceptance battery and print a pass/fail table.
    VerifySuite {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct PressureArgs {
    #[arg(long = "B")]
    pub base: Option<Rational>,
    #[arg(long)]
    pub alpha: Option<u64>,
    /// Explicit alphabet, e.g. `{1;3;4}`; overrides --alpha.
    #[arg(long)]
    pub alphabet: Option<Alphabet>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub leaf_budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum GeometryCmd {
    /// Fundamental intervals and gaps for every word up to a depth.
    Gaps(ScheduleArgs),
}

#[derive(Args, Debug)]
pub struct ScheduleArgs {
    #[arg(long = "B")]
    pub base: Option<Rational>,
    #[arg(long)]
    pub alpha: Option<u64>,
    /// Scheduled indices, e.g. `1,3`.
    #[arg(long)]
    pub indices: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub word_budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub k0: Option<usize>,
    /// Depths used for the s_B(α) estimate behind t.
    #[arg(long)]
    pub depths: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum DimensionCmd {
    /// dim F(B) = s_B, estimated along a depth schedule.
    F {
        #[arg(long = "B")]
        base: Option<f64>,
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long)]
        depths: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// dim E(b,c) = 1/(1+b²) with R_k evidence.
    Ebc {
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        k_max: Option<u32>,
    },
    /// Case and dimension of F(φ).
    Classify(ClassifyArgs),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// power | exp | double-exp | super-exp | iterated-exp | table
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "B0")]
    pub big_b0: Option<f64>,
    #[arg(long)]
    pub b0: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
    /// φ(1), φ(2), ... for `--family table`.
    #[arg(long)]
    pub values: Option<String>,
    /// File of φ values (whitespace or comma separated) for `--family table`.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<u64>,
    #[arg(long)]
    pub depths: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub no_surrogate: bool,
}

fn parse_op(s: &str) -> std::result::Result<Op, String> {
    s.parse::<Op>().map_err(|e| e.to_string())
}

/// Fully resolved and validated parameters of one command.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    Decompose { x: Rational, op: Op, k_max: usize },
    Pressure { base: Rational, alphabet: Alphabet, n: usize, tol: f64, mode: SummationMode, leaf_budget: u64 },
    GeometryGaps { base: Rational, alpha: u64, indices: Vec<usize>, depth: usize, word_budget: u64 },
    MeasureCheck {
        base: Rational,
        alpha: u64,
        indices: Vec<usize>,
        depth: usize,
        tol: f64,
        epsilon: f64,
        k0: usize,
        depths: Vec<usize>,
        word_budget: u64,
    },
    DimensionF { base: f64, alpha: u64, depths: Vec<usize>, tol: f64, leaf_budget: u64 },
    DimensionEbc { b: f64, c: f64, k_max: u32 },
    Classify { family: FamilyConfig, alpha: u64, depths: Vec<usize>, tol: f64, surrogate: bool, leaf_budget: u64 },
    Luczak { m: u64, k: u32 },
    NestedRatio { b: f64, c: f64, k: u32 },
    VerifySuite { criteria: Vec<u32> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Pressure { .. } => "pressure",
            Command::GeometryGaps { .. } => "geometry-gaps",
            Command::MeasureCheck { .. } => "measure-check",
            Command::DimensionF { .. } => "dimension-f",
            Command::DimensionEbc { .. } => "dimension-ebc",
            Command::Classify { .. } => "classify",
            Command::Luczak { .. } => "luczak",
            Command::NestedRatio { .. } => "nested-ratio",
            Command::VerifySuite { .. } => "verify-suite",
        }
    }
}

/// Parametric families plus sampled tables, as they appear in a config.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyConfig {
    Power { p: f64 },
    Exp {
        #[serde(rename = "B0")]
        b0: f64,
    },
    DoubleExp { b0: f64, c0: f64 },
    SuperExp { p: f64 },
    IteratedExp { p: f64 },
    Table { values: Vec<f64> },
}

impl FamilyConfig {
    pub fn to_spec(&self) -> PhiSpec {
        let family = match self {
            FamilyConfig::Power { p } => PhiFamily::Power(*p),
            FamilyConfig::Exp { b0 } => PhiFamily::Exponential(*b0),
            FamilyConfig::DoubleExp { b0, c0 } => PhiFamily::DoubleExponential { b0: *b0, c0: *c0 },
            FamilyConfig::SuperExp { p } => PhiFamily::SuperExponential(*p),
            FamilyConfig::IteratedExp { p } => PhiFamily::IteratedExponential(*p),
            FamilyConfig::Table { values } => PhiFamily::Table(values.clone()),
        };
        PhiSpec::new(family)
    }
}

/// What `run` needs: the command plus process-level settings.
///
/// Threads and the cache location are not part of the embedded config: results
/// do not depend on either.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub cache: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig { command, out: None, threads: None, cache: None }
    }

    /// Merges flags, the optional config file, defaults and `CFDIM_CACHE`.
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let cache = if cli.no_cache || file.get::<bool>("no_cache")?.unwrap_or(false) {
            None
        } else {
            cli.cache
                .or(file.get::<PathBuf>("cache")?)
                .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        };
        let threads = cli.threads.or(file.get("threads")?);
        if threads == Some(0) {
            return Err(Error::Config("--threads must be >= 1".into()));
        }
        let out = cli.out.or(file.get("out")?);
        let command = resolve(cli.command, &file)?;
        Ok(RunConfig { command, out, threads, cache })
    }
}

fn list(file: &ConfigFile, cli: Option<String>, key: &str, default: &str) -> Result<Vec<usize>> {
    let raw = file.pick(cli, key, default.to_string())?;
    config::parse_list(&raw)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn above_one(name: &str, v: f64) -> Result<f64> {
    if v > 1.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{name} must exceed 1, got {v}")))
    }
}

fn at_least<T: PartialOrd + std::fmt::Display>(name: &str, v: T, min: T) -> Result<T> {
    if v >= min {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{name} must be >= {min}, got {v}")))
    }
}

fn increasing(name: &str, v: Vec<usize>) -> Result<Vec<usize>> {
    if v.is_empty() || v[0] == 0 || v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!("{name} must be positive and strictly increasing, got {v:?}")));
    }
    Ok(v)
}

fn resolve_schedule(a: ScheduleArgs, f: &ConfigFile) -> Result<(Rational, u64, Vec<usize>, usize, u64)> {
    let base: Rational = f.pick(a.base, "B", Rational::integer(2))?;
    let alpha = f.pick(a.alpha, "alpha", 2)?;
    let indices = increasing("indices", list(f, a.indices, "indices", "1,3")?)?;
    let depth = at_least("depth", f.pick(a.depth, "depth", 3)?, 1)?;
    let budget = f.pick(a.word_budget, "word_budget", DEFAULT_WORD_BUDGET)?;
    // Schedule::new checks n_1 = 1, B > 1, α >= 2.
    Schedule::new(indices.clone(), base.clone(), alpha)?;
    Ok((base, alpha, indices, depth, budget))
}

fn resolve_classify(a: ClassifyArgs, f: &ConfigFile) -> Result<Command> {
    let family_name: String = f.require(a.family, "family")?;
    let need = |v: Option<f64>, key: &str| -> Result<f64> { f.require(v, key) };
    let family = match family_name.as_str() {
        "power" => FamilyConfig::Power { p: positive("p", need(a.p, "p")?)? },
        "exp" | "exponential" => {
            FamilyConfig::Exp { b0: at_least("B0", need(a.big_b0, "B0")?, 1.0)? }
        }
        "double-exp" | "double_exponential" => FamilyConfig::DoubleExp {
            b0: above_one("b0", need(a.b0, "b0")?)?,
            c0: above_one("c0", need(a.c0, "c0")?)?,
        },
        "super-exp" => FamilyConfig::SuperExp { p: above_one("p", need(a.p, "p")?)? },
        "iterated-exp" => FamilyConfig::IteratedExp { p: above_one("p", need(a.p, "p")?)? },
        "table" => {
            let text = match (a.values.or(f.get("values")?), a.table.or(f.get("table")?)) {
                (Some(v), _) => v,
                (None, Some(path)) => std::fs::read_to_string(path)?,
                (None, None) => return Err(Error::Config("table family needs --values or --table".into())),
            };
            let values = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad table value {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            if values.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::Domain("φ must be positive on its horizon".into()));
            }
            FamilyConfig::Table { values }
        }
        other => return Err(Error::Config(format!("unknown family {other:?}"))),
    };
    Ok(Command::Classify {
        family,
        alpha: at_least("alpha", f.pick(a.alpha, "alpha", 10)?, 1)?,
        depths: increasing("depths", list(f, a.depths, "depths", "1,2,3")?)?,
        tol: positive("tol", f.pick(a.tol, "tol", 1e-6)?)?,
        surrogate: !(a.no_surrogate || f.get::<bool>("no_surrogate")?.unwrap_or(false)),
        leaf_budget: f.pick(None, "leaf_budget", DEFAULT_LEAF_BUDGET)?,
    })
}

/// Turns parsed flags into a validated [`Command`].
pub fn resolve(cmd: Cmd, f: &ConfigFile) -> Result<Command> {
    Ok(match cmd {
        Cmd::Decompose { x, op, k_max } => {
            let op = match op {
                Some(op) => op,
                None => f.get::<String>("op")?.map_or(Ok(Op::Sum), |s| s.parse())?,
            };
            Command::Decompose {
                x: f.require(x, "x")?,
                op,
                k_max: at_least("k_max", f.pick(k_max, "k_max", DEFAULT_K_MAX)?, 1)?,
            }
        }
        Cmd::Pressure(a) => {
            let base: Rational = f.require(a.base, "B")?;
            if base <= 1 {
                return Err(Error::Domain(format!("B must exceed 1, got {base}")));
            }
            let alphabet = match a.alphabet.or(f.get("alphabet")?) {
                Some(al) => al,
                None => Alphabet::Bound(at_least("alpha", f.require(a.alpha, "alpha")?, 1)?),
            };
            let exact = a.exact || f.get::<bool>("exact")?.unwrap_or(false);
            Command::Pressure {
                base,
                alphabet,
                n: at_least("n", f.pick(a.n, "n", 1)?, 1)?,
                tol: positive("tol", f.pick(a.tol, "tol", 1e-10)?)?,
                mode: if exact { SummationMode::ExactRational } else { SummationMode::CompensatedFloat },
                leaf_budget: f.pick(a.leaf_budget, "leaf_budget", DEFAULT_LEAF_BUDGET)?,
            }
        }
        Cmd::Geometry { command: GeometryCmd::Gaps(a) } => {
            let (base, alpha, indices, depth, word_budget) = resolve_schedule(a, f)?;
            Command::GeometryGaps { base, alpha, indices, depth, word_budget }
        }
        Cmd::MeasureCheck(a) => {
            let (base, alpha, indices, depth, word_budget) = resolve_schedule(a.schedule, f)?;
            let epsilon = f.pick(a.epsilon, "epsilon", 0.05)?;
            if !(epsilon > 0.0 && epsilon < 0.25) {
                return Err(Error::Domain(format!("epsilon must lie in (0, 1/4), got {epsilon}")));
            }
            let k0 = f.pick(a.k0, "k0", indices.len())?;
            if k0 == 0 || k0 > indices.len() {
                return Err(Error::Domain(format!("k0 must be in 1..={}", indices.len())));
            }
            Command::MeasureCheck {
                base,
                alpha,
                indices,
                depth,
                tol: positive("tol", f.pick(a.tol, "tol", 1e-13)?)?,
                epsilon,
                k0,
                depths: increasing("depths", list(f, a.depths, "depths", "1,2,3")?)?,
                word_budget,
            }
        }
        Cmd::Dimension { command: DimensionCmd::F { base, alpha, depths, tol } } => Command::DimensionF {
            base: above_one("B", f.require(base, "B")?)?,
            alpha: at_least("alpha", f.pick(alpha, "alpha", 10)?, 1)?,
            depths: increasing("depths", list(f, depths, "depths", "1,2,3")?)?,
            tol: positive("tol", f.pick(tol, "tol", 1e-8)?)?,
            leaf_budget: f.pick(None, "leaf_budget", DEFAULT_LEAF_BUDGET)?,
        },
        Cmd::Dimension { command: DimensionCmd::Ebc { b, c, k_max } } => Command::DimensionEbc {
            b: above_one("b", f.require(b, "b")?)?,
            c: above_one("c", f.pick(c, "c", 2.0)?)?,
            k_max: at_least("k_max", f.pick(k_max, "k_max", 8)?, 1)?,
        },
        Cmd::Dimension { command: DimensionCmd::Classify(a) } | Cmd::Classify(a) => resolve_classify(a, f)?,
        Cmd::Luczak { m, k } => Command::Luczak {
            m: at_least("m", f.require(m, "m")?, 1)?,
            k: at_least("k", f.require(k, "k")?, 1)?,
        },
        Cmd::NestedRatio { b, c, k } => Command::NestedRatio {
            b: above_one("b", f.require(b, "b")?)?,
            c: above_one("c", f.require(c, "c")?)?,
            k: at_least("k", f.pick(k, "k", 8)?, 1)?,
        },
        Cmd::VerifySuite { only } => {
            let criteria = match only.or(f.get("only")?) {
                None => crate::verify::ALL.to_vec(),
                Some(s) => config::parse_list::<u32>(&s)?,
            };
            if let Some(bad) = criteria.iter().find(|c| !crate::verify::ALL.contains(c)) {
                return Err(Error::Domain(format!("no acceptance criterion {bad}")));
            }
            Command::VerifySuite { criteria }
        }
    })
}

/// Result of [`run`]: the artifact plus the exit status it implies.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub artifact: Artifact,
    /// Extra text output (CSV for `geometry gaps`).
    pub csv: Option<String>,
    pub exit_code: i32,
}

/// Executes a command without writing anything.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let mut cache = match &cfg.cache {
        Some(p) => Some(PressureCache::open(p)?),
        None => None,
    };
    let mut work = move || dispatch(&cfg.command, cache.as_mut());
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Executes a command and writes its artifacts; returns the exit status.
pub fn run(cfg: &RunConfig) -> Result<i32> {
    let outcome = execute(cfg)?;
    match (&outcome.csv, cfg.out.as_deref()) {
        (Some(csv), Some(path)) => {
            artifact::write_text(Some(path), csv)?;
            outcome.artifact.write(None)?;
        }
        (Some(csv), None) => artifact::write_text(None, csv)?,
        (None, out) => outcome.artifact.write(out)?,
    }
    Ok(outcome.exit_code)
}

/// Process entry point: parse, run, map errors to exit codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match RunConfig::from_cli(cli).and_then(|cfg| run(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command, mut cache: Option<&mut PressureCache>) -> Result<Outcome> {
    let config = serde_json::to_value(cmd).expect("config serializes");
    let done = |result: Value| Ok(Outcome { artifact: Artifact::new(cmd.name(), config.clone(), result), csv: None, exit_code: 0 });
    let mut solve = |p: &PressureProblem, tol: f64| cache::solve_with(cache.as_deref_mut(), p, tol).map(|(s, _)| s);

    match cmd {
        Command::Decompose { x, op, k_max } => {
            let r = decompose(*op, x, *k_max)?;
            let check = verify_decomposition(&r, x, *op);
            if let Some(f) = &check.failure {
                return Err(Error::Invariant(format!("replay failed at step {}: {}", f.step, f.reason)));
            }
            let mut v = r.to_json();
            v["verified_steps"] = json!(check.steps_checked);
            done(v)
        }
        Command::Pressure { base, alphabet, n, tol, mode, leaf_budget } => {
            let p = PressureProblem::new(alphabet.clone(), base.clone(), *n)?
                .with_mode(*mode)
                .with_budget(*leaf_budget);
            let (s, status) = cache::solve_with(cache, &p, *tol)?;
            done(json!({
                "B": artifact::exact(base),
                "alphabet": alphabet.to_string(),
                "n": n,
                "s_value": s.s_value,
                "residual": s.residual,
                "iterations": s.iterations,
                "bracket": [s.bracket.0, s.bracket.1],
                "tolerance": s.tolerance,
                "leaves": s.leaves,
                "mode": s.mode,
                "cache": status,
            }))
        }
        Command::GeometryGaps { base, alpha, indices, depth, word_budget } => {
            let s = Schedule::new(indices.clone(), base.clone(), *alpha)?;
            let (rows, summary) = gap_rows(&s, *depth, *word_budget)?;
            let csv = artifact::csv_with_header(&config, &GAP_COLUMNS, &rows)?;
            Ok(Outcome { artifact: Artifact::new(cmd.name(), config.clone(), summary), csv: Some(csv), exit_code: 0 })
        }
        Command::MeasureCheck { base, alpha, indices, depth, tol, epsilon, k0, depths, word_budget } => {
            let s = Schedule::new(indices.clone(), base.clone(), *alpha)?;
            let table = s_table_for(&s, *tol, &mut solve)?;
            let sums = child_sum_check(&s, &table, *depth, *word_budget)?;
            let sb = dim_f_with(base.to_f64(), *alpha, depths, *tol, DEFAULT_LEAF_BUDGET, &mut solve)?;
            let params = EstimationParams::new(&s, sb.estimate, *epsilon, *k0)?;
            let holder = holder_scan(&s, &table, &params, *depth, *word_budget)?;
            done(json!({
                "s_table": table.iter().map(|(m, v)| json!({"m": m, "s": v})).collect::<Vec<_>>(),
                "level1_total": sums.level1_total,
                "level1_words": sums.level1_words,
                "child_sum_nodes": sums.nodes_checked,
                "child_sum_max_relative_error": sums.max_relative_error,
                "s_B_alpha_estimate": sb.estimate,
                "t": params.t,
                "epsilon": params.epsilon,
                "k0": params.k0,
                "ln_c_I": params.ln_c_i,
                "holder_nodes": holder.nodes,
                "holder_min_margin": holder.min_margin,
                "holder_violations": holder.violations.iter()
                    .map(|(w, r)| json!({"word": w.to_string(), "ratio": r}))
                    .collect::<Vec<_>>(),
            }))
        }
        Command::DimensionF { base, alpha, depths, tol, leaf_budget } => {
            let e = dim_f_with(*base, *alpha, depths, *tol, *leaf_budget, &mut solve)?;
            done(json!({
                "B": e.base,
                "alpha": e.alpha,
                "estimate": e.estimate,
                "uncertainty": e.uncertainty,
                "in_band": e.in_band,
                "per_depth": e.extrapolation.per_depth.iter()
                    .map(|(n, s)| json!({"n": n, "s": s.s_value, "residual": s.residual}))
                    .collect::<Vec<_>>(),
                "trend_holds": e.extrapolation.trend_holds(),
            }))
        }
        Command::DimensionEbc { b, c, k_max } => {
            let d = dim_ebc(*b, *c, *k_max)?;
            done(json!({
                "value": d.value,
                "flagged": d.flagged,
                "evidence": d.evidence.iter().map(|r| json!({"k": r.k, "R": r.ratio, "direct": r.direct, "m_k": r.branch})).collect::<Vec<_>>(),
            }))
        }
        Command::Classify { family, alpha, depths, tol, surrogate, leaf_budget } => {
            let opts = ClassifyOptions {
                alpha: *alpha,
                depths: depths.clone(),
                tol: *tol,
                budget: *leaf_budget,
                surrogate: *surrogate,
            };
            let spec = family.to_spec();
            let spec = match family {
                FamilyConfig::Table { values } => spec.with_horizon(values.len()),
                _ => spec,
            };
            done(classify_phi_with(&spec, &opts, &mut solve)?.to_json())
        }
        Command::Luczak { m, k } => {
            let s = luczak_count(*m, *k)?;
            let count = u64::try_from(s.count).map_or_else(|_| json!(s.count.to_string()), |c| json!(c));
            done(json!({ "m": s.m, "k": s.k, "count": count, "bound": s.bound }))
        }
        Command::NestedRatio { b, c, k } => {
            let r = nested_ek_ratio(*b, *c, *k)?;
            done(json!({
                "b": r.b, "c": r.c, "k": r.k,
                "R": r.ratio, "direct": r.direct, "m_k": r.branch, "limit": r.limit,
            }))
        }
        Command::VerifySuite { criteria } => {
            let reports = crate::verify::run_suite(criteria);
            for r in &reports {
                eprintln!("{}", r.line());
            }
            let all = reports.iter().all(|r| r.passed);
            let out = Outcome {
                artifact: Artifact::new(
                    cmd.name(),
                    config.clone(),
                    json!({ "all_passed": all, "criteria": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>() }),
                ),
                csv: None,
                exit_code: if all { 0 } else { 4 },
            };
            Ok(out)
        }
    }
}

pub const GAP_COLUMNS: [&str; 15] = [
    "word", "depth", "case", "J", "J_f64", "g_left", "g_left_f64", "g_right", "g_right_f64", "g_min",
    "g_min_f64", "ratio", "ratio_f64", "bound", "holds",
];

/// One CSV row per word up to `depth`; `ratio = g̃/|J|` against `2/α` (free
/// next position) or `2` (next position scheduled).
pub fn gap_rows(s: &Schedule, depth: usize, budget: u64) -> Result<(Vec<Vec<String>>, Value)> {
    let (mut rows, mut violations, mut words) = (Vec::new(), 0usize, 0usize);
    let opt = |r: &Option<Rational>| r.as_ref().map_or((String::new(), String::new()), |r| (r.to_string(), r.to_f64().to_string()));
    for n in 1..=depth {
        for w in enumerate_dn(s, n, budget)? {
            let j = fundamental_interval(s, &w);
            let g = gaps(s, &w);
            let bound = match g.case {
                GapCase::Free => Rational::frac(2, s.alpha() as i64),
                GapCase::PreScheduled => Rational::integer(2),
            };
            let ratio = g.g_min.as_ref().map(|m| m / &j.length);
            let holds = ratio.as_ref().map(|r| *r >= bound);
            if holds == Some(false) {
                violations += 1;
            }
            words += 1;
            let (gl, glf) = opt(&g.g_left);
            let (gr, grf) = opt(&g.g_right);
            let (gm, gmf) = opt(&g.g_min);
            let (ra, raf) = opt(&ratio);
            rows.push(vec![
                w.to_string(),
                n.to_string(),
                match g.case { GapCase::Free => "free", GapCase::PreScheduled => "pre_scheduled" }.into(),
                j.length.to_string(),
                j.length.to_f64().to_string(),
                gl, glf, gr, grf, gm, gmf, ra, raf,
                bound.to_string(),
                holds.map_or("n/a".into(), |h| h.to_string()),
            ]);
        }
    }
    Ok((rows, json!({ "words": words, "violations": violations, "columns": GAP_COLUMNS })))
}

/// Reads the data rows of a CSV written by [`artifact::csv_with_header`].
pub fn read_artifact_csv(path: &Path) -> Result<Vec<csv::StringRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::Parse(e.to_string()))?;
    rdr.records().map(|r| r.map_err(|e| Error::Parse(e.to_string()))).collect()
}
