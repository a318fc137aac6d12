//! Command-line front end: flag and config-file parsing, dispatch to the
//! counting, verification, sweep, and moment machinery, and report
//! rendering as pretty text, CSV, or JSON.
//!
//! Every report embeds the tool version, the seed, and the fully
//! resolved configuration. Wall-clock timing goes into pretty and JSON
//! payloads; CSV output keeps timing on the diagnostics stream so that
//! identical configurations produce identical CSV bytes.
//!
//! Exit codes: 0 success, 1 assertion or verification failure, 2
//! configuration error, 3 resource guard tripped.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::counting::{
    count_bruteforce_with, count_spectral_with, predicted_density, BoxSpec, CountError,
    CountOptions, CountResult, SystemSpec,
};
use crate::field::{FieldCtx, FieldError, TableFault};
use crate::sums::{
    acz_quadruple_count_with_cap, fourth_moment, weighted_quadruple_sum, IntervalWeights,
    SumError, DEFAULT_PAIR_CAP,
};
use crate::sweep::{run_sweep, Extra, SweepError, SweepPlan, SweepReport, SweepTarget};
use crate::verify::{run_verify, VerifyError, VerifyPlan, VerifyReport};

/// Environment variable holding the field-table memory cap in bytes.
pub const MEMORY_CAP_ENV: &str = "BOXCONG_MEMORY_CAP";

/// Relative tolerance for the moment identity check.
const MOMENT_TOLERANCE: f64 = 1e-6;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "boxcong",
    version,
    about = "Exact box counts for product and diagonal power congruences, \
             with seeded bound experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Count solutions of a congruence system inside a box.
    Count(CountArgs),
    /// Run the named self-check battery.
    Verify(VerifyArgs),
    /// Sweep a (p, h) grid comparing exact quantities against bounds.
    Sweep(SweepArgs),
    /// Fourth moment and quadruple count side by side.
    Moments(MomentsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Spectral,
    Both,
    Auto,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Brute => "brute",
            MethodArg::Spectral => "spectral",
            MethodArg::Both => "both",
            MethodArg::Auto => "auto",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::Brute, Self::Spectral, Self::Both, Self::Auto]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Pretty,
}

impl FormatArg {
    fn name(self) -> &'static str {
        match self {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
            FormatArg::Pretty => "pretty",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::Csv, Self::Json, Self::Pretty]
            .into_iter()
            .find(|f| f.name() == s)
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Key-value config file; explicit flags override file entries.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Root seed for all randomness.
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on worker threads for the parallel passes.
    #[arg(long)]
    workers: Option<usize>,
    /// Write the report to this path instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Lift the resource guards (box size, kernel cost, pair count).
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Prime modulus.
    #[arg(long)]
    p: Option<u64>,
    /// Number of variables (at least 2).
    #[arg(long)]
    n: Option<usize>,
    /// Number of diagonal constraints.
    #[arg(long)]
    s: Option<usize>,
    /// Product target; defaults to 1.
    #[arg(long)]
    a: Option<u64>,
    /// Diagonal targets: comma-separated, a single value broadcasts.
    #[arg(long)]
    b: Option<String>,
    /// Coefficients: rows split by ';', entries by ','; single row or
    /// entry broadcasts; with s = 1 a comma list is one value per
    /// variable.
    #[arg(long)]
    c: Option<String>,
    /// Exponents: same syntax as --c; required when s > 0.
    #[arg(long)]
    k: Option<String>,
    /// Box starts: comma-separated, a single value broadcasts;
    /// defaults to 0.
    #[arg(long)]
    u: Option<String>,
    /// Box side; defaults to p - 1 (the full box).
    #[arg(long)]
    h: Option<u32>,
    /// Counting engine; auto picks the cheaper one.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Primes for the identity checks: comma-separated.
    #[arg(long)]
    p: Option<String>,
    /// Randomized instances per check.
    #[arg(long)]
    battery: Option<u32>,
    /// Corrupt one field table entry (dlog, add-root, mult-root) to
    /// demonstrate that the battery catches a broken context.
    #[arg(long)]
    fault: Option<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comparison target: chang, wooley, acz, theorem, or weil.
    #[arg(long)]
    target: Option<String>,
    /// Grid of p:h pairs, comma-separated (example: 101:11,1009:32).
    #[arg(long)]
    grid: Option<String>,
    /// Instances per grid point.
    #[arg(long)]
    instances: Option<u32>,
    /// Hypothesis exponent kappa for the chang and theorem targets.
    #[arg(long)]
    kappa: Option<f64>,
    /// Polynomial degree for the chang, wooley, and weil targets.
    #[arg(long)]
    degree: Option<u64>,
    /// Variables per instance for the theorem target.
    #[arg(long)]
    n: Option<usize>,
    /// Diagonal constraints per instance for the theorem target.
    #[arg(long)]
    s: Option<usize>,
    /// Inclusive exponent range for the theorem target (example: 3,7).
    #[arg(long, value_name = "LO,HI")]
    k_range: Option<String>,
    /// Slack exponent in the quadruple-count bound.
    #[arg(long)]
    slack_eps: Option<f64>,
    /// Slack constant in the quadruple-count bound.
    #[arg(long)]
    slack_c: Option<f64>,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Prime modulus.
    #[arg(long)]
    p: Option<u64>,
    /// Interval start; defaults to 0.
    #[arg(long)]
    u: Option<u32>,
    /// Interval length.
    #[arg(long)]
    h: Option<u32>,
    /// Weight choice: "ones" or "random".
    #[arg(long)]
    weights: Option<String>,
}

/// A command failure: exit code, stable machine-readable name, message.
#[derive(Debug)]
struct Failure {
    code: u8,
    name: &'static str,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            name: "ConfigError",
            message: message.into(),
        }
    }

    fn named(code: u8, name: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            name,
            message: message.into(),
        }
    }
}

fn field_failure(e: FieldError) -> Failure {
    let name = match e {
        FieldError::NotPrime(_) => "NotPrime",
        FieldError::TooLarge { .. } => "TooLarge",
        FieldError::IndexOutOfRange { .. } => "IndexOutOfRange",
    };
    let code = if name == "TooLarge" { 3 } else { 2 };
    Failure::named(code, name, e.to_string())
}

fn sum_failure(e: SumError) -> Failure {
    let (code, name) = match &e {
        SumError::SizeGuard { .. } => (3, "SizeGuard"),
        SumError::IntervalOutOfRange { .. } => (2, "IntervalOutOfRange"),
        SumError::IndexOutOfRange { .. } => (2, "IndexOutOfRange"),
        SumError::WeightOutOfRange { .. } => (2, "WeightOutOfRange"),
        SumError::WeightCountMismatch { .. } => (2, "WeightCountMismatch"),
        SumError::Field(f) => return field_failure(f.clone()),
    };
    Failure::named(code, name, e.to_string())
}

fn count_failure(e: CountError) -> Failure {
    let (code, name) = match &e {
        CountError::SizeGuard { .. } => (3, "SizeGuard"),
        CountError::CostGuard { .. } => (3, "CostGuard"),
        CountError::PrecisionLoss { .. } => (1, "PrecisionLoss"),
        CountError::BadShape(_) => (2, "BadShape"),
        CountError::NotAUnit { .. } => (2, "NotAUnit"),
        CountError::ZeroExponent { .. } => (2, "ZeroExponent"),
        CountError::ExponentLadder { .. } => (2, "ExponentLadder"),
        CountError::PowerNotCoprime { .. } => (2, "PowerNotCoprime"),
        CountError::BoxOutOfRange { .. } => (2, "BoxOutOfRange"),
        CountError::DimensionMismatch { .. } => (2, "DimensionMismatch"),
        CountError::Sum(s) => return sum_failure(s.clone()),
    };
    Failure::named(code, name, e.to_string())
}

fn sweep_failure(e: SweepError) -> Failure {
    match e {
        SweepError::Field(f) => field_failure(f),
        SweepError::Sum(s) => sum_failure(s),
        SweepError::Count(c) => count_failure(c),
        SweepError::Bound(b) => Failure::config(b.to_string()),
        SweepError::EmptyGrid => Failure::config(e_to_string(&e)),
        SweepError::ZeroInstances => Failure::config(e_to_string(&e)),
        SweepError::BadGridPoint { .. } => Failure::config(e_to_string(&e)),
        SweepError::TinyPrime { .. } => Failure::config(e_to_string(&e)),
        SweepError::BadExponentRange { .. } => Failure::config(e_to_string(&e)),
    }
}

fn e_to_string<E: std::fmt::Display>(e: &E) -> String {
    e.to_string()
}

fn verify_failure(e: VerifyError) -> Failure {
    match e {
        VerifyError::Field(f) => field_failure(f),
        VerifyError::EmptyBattery => {
            Failure::named(2, "EmptyBattery", e_to_string(&VerifyError::EmptyBattery))
        }
        VerifyError::NoPrimes => {
            Failure::named(2, "NoPrimes", e_to_string(&VerifyError::NoPrimes))
        }
    }
}

/// Entry point for the binary. Parses arguments, runs the command, and
/// maps failures onto the documented exit codes.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Cmd::Count(args) => cmd_count(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Moments(args) => cmd_moments(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}: {}", f.name, f.message);
            ExitCode::from(f.code)
        }
    }
}

// ---------------------------------------------------------------------
// Config file handling and value parsing.

/// A `key = value` config file. Keys are taken as commands resolve
/// them; any leftovers are unknown and rejected.
struct KvFile {
    map: BTreeMap<String, String>,
}

impl KvFile {
    fn empty() -> Self {
        KvFile {
            map: BTreeMap::new(),
        }
    }

    fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::config(format!(
                    "config line {} is not `key = value`: {line:?}",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if map.insert(key.clone(), value).is_some() {
                return Err(Failure::config(format!(
                    "config key {key:?} appears more than once"
                )));
            }
        }
        Ok(KvFile { map })
    }

    fn load_opt(path: Option<&PathBuf>) -> Result<Self, Failure> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::empty()),
        }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn finish(self) -> Result<(), Failure> {
        if self.map.is_empty() {
            Ok(())
        } else {
            let keys: Vec<String> = self.map.keys().map(|k| format!("{k:?}")).collect();
            Err(Failure::config(format!(
                "unknown config keys: {}",
                keys.join(", ")
            )))
        }
    }
}

fn parse_scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Failure> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| Failure::config(format!("cannot parse {key} value {value:?}")))
}

/// Flag wins, then config file, then the default.
fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    file: &mut KvFile,
    key: &str,
) -> Result<Option<T>, Failure> {
    if flag.is_some() {
        file.take(key);
        return Ok(flag);
    }
    match file.take(key) {
        Some(v) => Ok(Some(parse_scalar(key, &v)?)),
        None => Ok(None),
    }
}

fn resolve_string(flag: Option<String>, file: &mut KvFile, key: &str) -> Option<String> {
    if flag.is_some() {
        file.take(key);
        return flag;
    }
    file.take(key)
}

fn parse_list_u64(key: &str, value: &str) -> Result<Vec<u64>, Failure> {
    value
        .split(',')
        .map(|item| parse_scalar::<u64>(key, item))
        .collect()
}

fn parse_rows_u64(key: &str, value: &str) -> Result<Vec<Vec<u64>>, Failure> {
    value
        .split(';')
        .map(|row| parse_list_u64(key, row))
        .collect()
}

fn parse_grid(value: &str) -> Result<Vec<(u64, u32)>, Failure> {
    value
        .split(',')
        .map(|item| {
            let Some((p, h)) = item.split_once(':') else {
                return Err(Failure::config(format!(
                    "grid entry {item:?} is not `p:h`"
                )));
            };
            Ok((parse_scalar::<u64>("grid p", p)?, parse_scalar::<u32>("grid h", h)?))
        })
        .collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool, Failure> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Failure::config(format!(
            "cannot parse {key} value {other:?} as a boolean"
        ))),
    }
}

/// Broadcasts a comma list to an exact length: one value repeats, and
/// anything else must match the length.
fn broadcast_list(key: &str, values: Vec<u64>, len: usize) -> Result<Vec<u64>, Failure> {
    if values.len() == len {
        Ok(values)
    } else if values.len() == 1 {
        Ok(vec![values[0]; len])
    } else {
        Err(Failure::config(format!(
            "{key} needs {len} entries (or one to broadcast), got {}",
            values.len()
        )))
    }
}

/// Broadcasts `;`-separated rows to an `n` by `s` matrix. With a single
/// constraint, a plain comma list of `n` values reads as one value per
/// variable.
fn broadcast_rows(
    key: &str,
    rows: Vec<Vec<u64>>,
    n: usize,
    s: usize,
) -> Result<Vec<Vec<u64>>, Failure> {
    let rows = if rows.len() == n {
        rows
    } else if rows.len() == 1 {
        if s == 1 && rows[0].len() == n {
            rows[0].iter().map(|&x| vec![x]).collect()
        } else {
            vec![rows[0].clone(); n]
        }
    } else {
        return Err(Failure::config(format!(
            "{key} needs {n} rows (or one to broadcast), got {}",
            rows.len()
        )));
    };
    rows.into_iter()
        .map(|row| broadcast_list(key, row, s))
        .collect()
}

// ---------------------------------------------------------------------
// Shared plumbing: common options, contexts, output.

struct Resolved {
    seed: u64,
    workers: Option<usize>,
    out: Option<PathBuf>,
    format: FormatArg,
    force: bool,
}

fn resolve_common(
    common: &CommonArgs,
    file: &mut KvFile,
    default_format: FormatArg,
) -> Result<Resolved, Failure> {
    let seed = resolve(common.seed, file, "seed")?.unwrap_or(1);
    let workers = resolve(common.workers, file, "workers")?;
    let out = match &common.out {
        Some(p) => {
            file.take("out");
            Some(p.clone())
        }
        None => file.take("out").map(PathBuf::from),
    };
    let format = match common.format {
        Some(f) => {
            file.take("format");
            f
        }
        None => match file.take("format") {
            Some(v) => FormatArg::parse(v.trim())
                .ok_or_else(|| Failure::config(format!("unknown format {v:?}")))?,
            None => default_format,
        },
    };
    let force = common.force
        || match file.take("force") {
            Some(v) => parse_bool("force", &v)?,
            None => false,
        };
    if let Some(w) = workers {
        if w == 0 {
            return Err(Failure::config("workers must be at least 1"));
        }
        // The global pool can only be installed once per process; a
        // second configuration attempt with the same size is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    Ok(Resolved {
        seed,
        workers,
        out,
        format,
        force,
    })
}

fn memory_cap_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(MEMORY_CAP_ENV) {
        Ok(v) => {
            let cap = v.trim().parse::<usize>().map_err(|_| {
                Failure::config(format!("cannot parse {MEMORY_CAP_ENV} value {v:?}"))
            })?;
            Ok(Some(cap))
        }
        Err(_) => Ok(None),
    }
}

fn build_ctx(p: u64) -> Result<FieldCtx, Failure> {
    match memory_cap_from_env()? {
        Some(cap) => FieldCtx::with_memory_cap(p, cap).map_err(field_failure),
        None => FieldCtx::new(p).map_err(field_failure),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::config(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// 17 significant digits: enough for exact f64 round trips.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn echo_common(echo: &mut BTreeMap<String, String>, r: &Resolved) {
    echo.insert("seed".into(), r.seed.to_string());
    echo.insert(
        "workers".into(),
        r.workers.map_or("default".into(), |w| w.to_string()),
    );
    echo.insert("format".into(), r.format.name().into());
    echo.insert("force".into(), r.force.to_string());
    if let Some(out) = &r.out {
        echo.insert("out".into(), out.display().to_string());
    }
}

fn csv_header(command: &str, echo: &BTreeMap<String, String>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# boxcong {VERSION}");
    let _ = writeln!(s, "# command = {command}");
    for (k, v) in echo {
        let _ = writeln!(s, "# {k} = {v}");
    }
    s
}

fn pretty_header(command: &str, echo: &BTreeMap<String, String>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "boxcong {VERSION} {command}");
    let _ = writeln!(s, "configuration:");
    for (k, v) in echo {
        let _ = writeln!(s, "  {k} = {v}");
    }
    s
}

fn json_envelope(
    command: &str,
    echo: &BTreeMap<String, String>,
    seed: u64,
    elapsed_ms: f64,
    payload: serde_json::Value,
) -> String {
    let doc = json!({
        "tool": "boxcong",
        "version": VERSION,
        "command": command,
        "seed": seed,
        "config": echo,
        "timing_ms": elapsed_ms,
        "report": payload,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("report serialization");
    text.push('\n');
    text
}

/// CSV values never contain commas except quoted details.
fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

// ---------------------------------------------------------------------
// count

fn cmd_count(args: CountArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let mut file = KvFile::load_opt(args.common.config.as_ref())?;
    let r = resolve_common(&args.common, &mut file, FormatArg::Pretty)?;

    let p = resolve(args.p, &mut file, "p")?
        .ok_or_else(|| Failure::config("count needs --p"))?;
    let n = resolve(args.n, &mut file, "n")?
        .ok_or_else(|| Failure::config("count needs --n"))?;
    let s = resolve(args.s, &mut file, "s")?.unwrap_or(0);
    let a = resolve(args.a, &mut file, "a")?.unwrap_or(1);
    let b_str = resolve_string(args.b, &mut file, "b");
    let c_str = resolve_string(args.c, &mut file, "c");
    let k_str = resolve_string(args.k, &mut file, "k");
    let u_str = resolve_string(args.u, &mut file, "u");
    let h_opt = resolve(args.h, &mut file, "h")?;
    let method = match args.method {
        Some(m) => {
            file.take("method");
            m
        }
        None => match file.take("method") {
            Some(v) => MethodArg::parse(v.trim())
                .ok_or_else(|| Failure::config(format!("unknown method {v:?}")))?,
            None => MethodArg::Auto,
        },
    };
    file.finish()?;

    let ctx = build_ctx(p)?;
    let h = h_opt.unwrap_or(ctx.p() - 1);

    if s == 0 {
        for (name, given) in [("b", &b_str), ("c", &c_str), ("k", &k_str)] {
            if given.is_some() {
                return Err(Failure::config(format!("--{name} given but s = 0")));
            }
        }
    }
    let b = match &b_str {
        Some(v) => broadcast_list("b", parse_list_u64("b", v)?, s)?,
        None => vec![0; s],
    };
    let c = match &c_str {
        Some(v) => broadcast_rows("c", parse_rows_u64("c", v)?, n, s)?,
        None => vec![vec![1; s]; n],
    };
    let k = match &k_str {
        Some(v) => broadcast_rows("k", parse_rows_u64("k", v)?, n, s)?,
        None if s == 0 => vec![Vec::new(); n],
        None => return Err(Failure::config("count needs --k when s > 0")),
    };
    let u: Vec<u32> = match &u_str {
        Some(v) => broadcast_list("u", parse_list_u64("u", v)?, n)?
            .into_iter()
            .map(|x| {
                u32::try_from(x).map_err(|_| Failure::config(format!("u entry {x} too large")))
            })
            .collect::<Result<_, _>>()?,
        None => vec![0; n],
    };

    let sys = SystemSpec::new(&ctx, a, &b, &c, &k).map_err(count_failure)?;
    let bx = BoxSpec::new(&ctx, u.clone(), h).map_err(count_failure)?;

    let mut opts = CountOptions::default();
    if r.force {
        opts.brute_cap = u128::MAX;
        opts.cost_cap = u128::MAX;
    }

    let brute_cost = (u128::from(h)).checked_pow(n as u32).unwrap_or(u128::MAX);
    let spectral_cost = u128::from(ctx.p())
        .checked_pow(s as u32)
        .and_then(|ps| {
            ps.checked_mul(u128::from(ctx.p() - 1))?
                .checked_mul(n as u128)?
                .checked_mul(u128::from(h))
        })
        .unwrap_or(u128::MAX);
    let chosen = match method {
        MethodArg::Auto => {
            if brute_cost <= spectral_cost && brute_cost <= opts.brute_cap {
                MethodArg::Brute
            } else {
                MethodArg::Spectral
            }
        }
        m => m,
    };

    let mut echo = BTreeMap::new();
    echo_common(&mut echo, &r);
    echo.insert("p".into(), p.to_string());
    echo.insert("n".into(), n.to_string());
    echo.insert("s".into(), s.to_string());
    echo.insert("a".into(), a.to_string());
    echo.insert(
        "b".into(),
        b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
    );
    echo.insert("c".into(), rows_echo(&c));
    echo.insert("k".into(), rows_echo(&k));
    echo.insert(
        "u".into(),
        u.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
    );
    echo.insert("h".into(), h.to_string());
    echo.insert("method".into(), method.name().into());
    echo.insert("method_resolved".into(), chosen.name().into());

    let dens = predicted_density(&sys, &bx);

    let mut brute: Option<u64> = None;
    let mut spectral: Option<CountResult> = None;
    match chosen {
        MethodArg::Brute => {
            brute = Some(count_bruteforce_with(&ctx, &sys, &bx, &opts).map_err(count_failure)?);
        }
        MethodArg::Spectral => {
            spectral = Some(count_spectral_with(&ctx, &sys, &bx, &opts).map_err(count_failure)?);
        }
        MethodArg::Both | MethodArg::Auto => {
            brute = Some(count_bruteforce_with(&ctx, &sys, &bx, &opts).map_err(count_failure)?);
            spectral = Some(count_spectral_with(&ctx, &sys, &bx, &opts).map_err(count_failure)?);
        }
    }
    let mismatch = match (&brute, &spectral) {
        (Some(bc), Some(sc)) if *bc != sc.count => Some((*bc, sc.count)),
        _ => None,
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let text = match r.format {
        FormatArg::Pretty => {
            let mut t = pretty_header("count", &echo);
            let _ = writeln!(t, "result:");
            if let Some(bc) = brute {
                let _ = writeln!(t, "  count (brute force) = {bc}");
            }
            if let Some(sc) = &spectral {
                let _ = writeln!(t, "  count (spectral) = {}", sc.count);
                let _ = writeln!(t, "  nonprincipal = {}", fmt_complex(sc.nonprincipal));
                let _ = writeln!(
                    t,
                    "  principal excess = {}",
                    fmt_complex(sc.principal_excess)
                );
                let _ = writeln!(t, "  residual = {}", fmt_float(sc.residual));
                for w in &sc.warnings {
                    let _ = writeln!(t, "  warning: {w}");
                }
            }
            let _ = writeln!(t, "  main term (density, h^n/p^(s+1)) = {}", fmt_float(dens.main_term));
            let _ = writeln!(
                t,
                "  main term (separated, h^n/((p-1)p^s)) = {}",
                fmt_float(dens.separated_term)
            );
            if let Some((bc, sc)) = mismatch {
                let _ = writeln!(t, "  MISMATCH: brute force {bc} != spectral {sc}");
            }
            let _ = writeln!(t, "elapsed: {elapsed_ms:.3} ms");
            t
        }
        FormatArg::Csv => {
            let mut t = csv_header("count", &echo);
            let _ = writeln!(
                t,
                "method,count,main_density,main_separated,nonprincipal_re,nonprincipal_im,principal_excess_re,principal_excess_im,residual"
            );
            if let Some(bc) = brute {
                let _ = writeln!(
                    t,
                    "brute,{bc},{},{},,,,,",
                    fmt_float(dens.main_term),
                    fmt_float(dens.separated_term)
                );
            }
            if let Some(sc) = &spectral {
                let _ = writeln!(
                    t,
                    "spectral,{},{},{},{},{},{},{},{}",
                    sc.count,
                    fmt_float(dens.main_term),
                    fmt_float(dens.separated_term),
                    fmt_float(sc.nonprincipal.re),
                    fmt_float(sc.nonprincipal.im),
                    fmt_float(sc.principal_excess.re),
                    fmt_float(sc.principal_excess.im),
                    fmt_float(sc.residual)
                );
            }
            eprintln!("elapsed: {elapsed_ms:.3} ms");
            t
        }
        FormatArg::Json => {
            let spectral_json = spectral.as_ref().map(|sc| {
                json!({
                    "count": sc.count,
                    "nonprincipal_re": sc.nonprincipal.re,
                    "nonprincipal_im": sc.nonprincipal.im,
                    "principal_excess_re": sc.principal_excess.re,
                    "principal_excess_im": sc.principal_excess.im,
                    "residual": sc.residual,
                    "warnings": sc.warnings,
                })
            });
            json_envelope(
                "count",
                &echo,
                r.seed,
                elapsed_ms,
                json!({
                    "brute_count": brute,
                    "spectral": spectral_json,
                    "main_density": dens.main_term,
                    "main_separated": dens.separated_term,
                    "match": mismatch.is_none(),
                }),
            )
        }
    };
    emit(r.out.as_ref(), &text)?;

    if let Some((bc, sc)) = mismatch {
        return Err(Failure::named(
            1,
            "CountMismatch",
            format!("brute force found {bc} solutions, the spectral engine {sc}"),
        ));
    }
    Ok(())
}

fn rows_echo(rows: &[Vec<u64>]) -> String {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn fmt_complex(z: Complex64) -> String {
    format!("{} + {} i", fmt_float(z.re), fmt_float(z.im))
}

// ---------------------------------------------------------------------
// verify

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let mut file = KvFile::load_opt(args.common.config.as_ref())?;
    let r = resolve_common(&args.common, &mut file, FormatArg::Pretty)?;

    let mut plan = VerifyPlan::new(r.seed);
    if let Some(v) = resolve_string(args.p, &mut file, "p") {
        plan.primes = parse_list_u64("p", &v)?;
    }
    if let Some(battery) = resolve(args.battery, &mut file, "battery")? {
        plan.battery = battery;
    }
    if let Some(v) = resolve_string(args.fault, &mut file, "fault") {
        let f = TableFault::parse(v.trim())
            .ok_or_else(|| Failure::config(format!("unknown fault {v:?}")))?;
        plan.fault = Some(f);
    }
    file.finish()?;

    if memory_cap_from_env()?.is_some() {
        for &p in &plan.primes {
            build_ctx(p)?;
        }
    }

    let mut echo = BTreeMap::new();
    echo_common(&mut echo, &r);
    echo.insert("battery".into(), plan.battery.to_string());
    echo.insert(
        "p".into(),
        plan.primes
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    echo.insert(
        "fault".into(),
        plan.fault.map_or("none".into(), |f| f.name().to_string()),
    );

    let report = run_verify(&plan).map_err(verify_failure)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let text = render_verify(&r, &echo, &report, elapsed_ms);
    emit(r.out.as_ref(), &text)?;

    if report.passed {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        Err(Failure::named(
            1,
            "VerificationFailed",
            format!("{failed} of {} checks failed", report.checks.len()),
        ))
    }
}

fn render_verify(
    r: &Resolved,
    echo: &BTreeMap<String, String>,
    report: &VerifyReport,
    elapsed_ms: f64,
) -> String {
    match r.format {
        FormatArg::Pretty => {
            let mut t = pretty_header("verify", echo);
            let _ = writeln!(t, "checks:");
            for c in &report.checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(t, "  {verdict} {} ({})", c.name, c.detail);
            }
            let _ = writeln!(
                t,
                "overall: {}",
                if report.passed { "PASS" } else { "FAIL" }
            );
            let _ = writeln!(t, "elapsed: {elapsed_ms:.3} ms");
            t
        }
        FormatArg::Csv => {
            let mut t = csv_header("verify", echo);
            let _ = writeln!(t, "name,passed,detail");
            for c in &report.checks {
                let _ = writeln!(
                    t,
                    "{},{},{}",
                    c.name,
                    u8::from(c.passed),
                    csv_quote(&c.detail)
                );
            }
            eprintln!("elapsed: {elapsed_ms:.3} ms");
            t
        }
        FormatArg::Json => json_envelope(
            "verify",
            echo,
            r.seed,
            elapsed_ms,
            serde_json::to_value(report).expect("report serialization"),
        ),
    }
}

// ---------------------------------------------------------------------
// sweep

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let mut file = KvFile::load_opt(args.common.config.as_ref())?;
    let r = resolve_common(&args.common, &mut file, FormatArg::Csv)?;

    let target_str = resolve_string(args.target, &mut file, "target")
        .ok_or_else(|| Failure::config("sweep needs --target"))?;
    let target = SweepTarget::parse(target_str.trim())
        .ok_or_else(|| Failure::config(format!("unknown target {target_str:?}")))?;
    let grid_str = resolve_string(args.grid, &mut file, "grid")
        .ok_or_else(|| Failure::config("sweep needs --grid"))?;
    let grid = parse_grid(&grid_str)?;

    let mut plan = SweepPlan::new(target, &grid, 10, r.seed);
    if let Some(instances) = resolve(args.instances, &mut file, "instances")? {
        plan.instances = instances;
    }
    if let Some(kappa) = resolve(args.kappa, &mut file, "kappa")? {
        plan.kappa = kappa;
    }
    if let Some(degree) = resolve(args.degree, &mut file, "degree")? {
        plan.poly_degree = degree;
    }
    if let Some(n) = resolve(args.n, &mut file, "n")? {
        plan.n = n;
    }
    if let Some(s) = resolve(args.s, &mut file, "s")? {
        plan.s = s;
    }
    if let Some(v) = resolve_string(args.k_range, &mut file, "k-range") {
        let parts = parse_list_u64("k-range", &v)?;
        if parts.len() != 2 {
            return Err(Failure::config("k-range needs exactly two values: lo,hi"));
        }
        plan.k_range = (parts[0], parts[1]);
    }
    if let Some(eps) = resolve(args.slack_eps, &mut file, "slack-eps")? {
        plan.slack_eps = eps;
    }
    if let Some(c) = resolve(args.slack_c, &mut file, "slack-c")? {
        plan.slack_c = c;
    }
    file.finish()?;

    if memory_cap_from_env()?.is_some() {
        for &(p, _) in &plan.grid {
            build_ctx(p)?;
        }
    }

    let mut echo = BTreeMap::new();
    echo_common(&mut echo, &r);
    echo.insert("target".into(), target.name().into());
    echo.insert(
        "grid".into(),
        plan.grid
            .iter()
            .map(|&(p, h)| format!("{p}:{h}"))
            .collect::<Vec<_>>()
            .join(","),
    );
    echo.insert("instances".into(), plan.instances.to_string());
    echo.insert("kappa".into(), fmt_float(plan.kappa));
    echo.insert("degree".into(), plan.poly_degree.to_string());
    echo.insert("n".into(), plan.n.to_string());
    echo.insert("s".into(), plan.s.to_string());
    echo.insert(
        "k-range".into(),
        format!("{},{}", plan.k_range.0, plan.k_range.1),
    );
    echo.insert("slack-eps".into(), fmt_float(plan.slack_eps));
    echo.insert("slack-c".into(), fmt_float(plan.slack_c));

    let report = run_sweep(&plan).map_err(sweep_failure)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let text = render_sweep(&r, &echo, &report, elapsed_ms);
    emit(r.out.as_ref(), &text)
}

fn sweep_csv(echo: &BTreeMap<String, String>, report: &SweepReport) -> String {
    let mut t = csv_header("sweep", echo);
    let extra_cols = report.plan.target.extra_columns();
    let mut header =
        String::from("target,p,h,n,s,seed,exact,bound,ratio,flagged");
    for col in extra_cols {
        header.push(',');
        header.push_str(col);
    }
    let _ = writeln!(t, "{header}");
    for row in &report.rows {
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{},{}",
            report.plan.target.name(),
            row.p,
            row.h,
            row.n,
            row.s,
            row.seed,
            fmt_float(row.exact),
            fmt_float(row.bound),
            fmt_float(row.ratio),
            u8::from(row.flagged)
        );
        for extra in &row.extra {
            line.push(',');
            match extra {
                Extra::Int(v) => {
                    let _ = write!(line, "{v}");
                }
                Extra::Float(v) => line.push_str(&fmt_float(*v)),
            }
        }
        let _ = writeln!(t, "{line}");
    }
    let _ = writeln!(
        t,
        "# rows = {}, flagged = {}",
        report.summary.rows, report.summary.flagged
    );
    let _ = writeln!(
        t,
        "# max_ratio = {}",
        report
            .summary
            .max_ratio
            .map_or("none".into(), fmt_float)
    );
    let _ = writeln!(
        t,
        "# trend_slope = {}",
        report
            .summary
            .trend_slope
            .map_or("none".into(), fmt_float)
    );
    t
}

fn render_sweep(
    r: &Resolved,
    echo: &BTreeMap<String, String>,
    report: &SweepReport,
    elapsed_ms: f64,
) -> String {
    match r.format {
        FormatArg::Csv => {
            eprintln!("elapsed: {elapsed_ms:.3} ms");
            sweep_csv(echo, report)
        }
        FormatArg::Pretty => {
            let mut t = pretty_header("sweep", echo);
            let extra_cols = report.plan.target.extra_columns();
            let _ = writeln!(t, "rows:");
            for row in &report.rows {
                let mut line = format!(
                    "  p={} h={} n={} s={} seed={} exact={:.6e} bound={:.6e} ratio={:.6e} flagged={}",
                    row.p,
                    row.h,
                    row.n,
                    row.s,
                    row.seed,
                    row.exact,
                    row.bound,
                    row.ratio,
                    if row.flagged { "yes" } else { "no" }
                );
                for (name, extra) in extra_cols.iter().zip(&row.extra) {
                    match extra {
                        Extra::Int(v) => {
                            let _ = write!(line, " {name}={v}");
                        }
                        Extra::Float(v) => {
                            let _ = write!(line, " {name}={v:.6e}");
                        }
                    }
                }
                let _ = writeln!(t, "{line}");
            }
            let _ = writeln!(t, "summary:");
            let _ = writeln!(t, "  rows = {}", report.summary.rows);
            let _ = writeln!(t, "  flagged = {}", report.summary.flagged);
            let _ = writeln!(
                t,
                "  max ratio = {}",
                report
                    .summary
                    .max_ratio
                    .map_or("none (all rows flagged)".into(), fmt_float)
            );
            let _ = writeln!(
                t,
                "  trend slope (ln ratio vs ln p) = {}",
                report
                    .summary
                    .trend_slope
                    .map_or("none".into(), fmt_float)
            );
            let _ = writeln!(t, "elapsed: {elapsed_ms:.3} ms");
            t
        }
        FormatArg::Json => json_envelope(
            "sweep",
            echo,
            r.seed,
            elapsed_ms,
            serde_json::to_value(report).expect("report serialization"),
        ),
    }
}

// ---------------------------------------------------------------------
// moments

fn cmd_moments(args: MomentsArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let mut file = KvFile::load_opt(args.common.config.as_ref())?;
    let r = resolve_common(&args.common, &mut file, FormatArg::Pretty)?;

    let p = resolve(args.p, &mut file, "p")?
        .ok_or_else(|| Failure::config("moments needs --p"))?;
    let u = resolve(args.u, &mut file, "u")?.unwrap_or(0);
    let h = resolve(args.h, &mut file, "h")?
        .ok_or_else(|| Failure::config("moments needs --h"))?;
    let weights_str =
        resolve_string(args.weights, &mut file, "weights").unwrap_or_else(|| "ones".into());
    file.finish()?;

    let weights_mode = match weights_str.trim() {
        "ones" => "ones",
        "random" => "random",
        other => {
            return Err(Failure::config(format!(
                "unknown weights mode {other:?} (use ones or random)"
            )))
        }
    };

    let ctx = build_ctx(p)?;
    let wts = if weights_mode == "ones" {
        IntervalWeights::ones(&ctx, u, h).map_err(sum_failure)?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
        let w: Vec<Complex64> = (0..h)
            .map(|_| Complex64::new(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)))
            .collect();
        IntervalWeights::new(&ctx, u, h, w).map_err(sum_failure)?
    };

    let pair_cap = if r.force { u64::MAX } else { DEFAULT_PAIR_CAP };
    let moment = fourth_moment(&ctx, &wts);
    let weighted = weighted_quadruple_sum(&ctx, &wts).map_err(sum_failure)?;
    let count = acz_quadruple_count_with_cap(&ctx, u, h, pair_cap).map_err(sum_failure)?;

    let rhs = f64::from(ctx.p() - 1) * weighted;
    let identity_gap = (moment - rhs).abs() / rhs.abs().max(1.0);
    let ratio = if weighted != 0.0 {
        moment / weighted
    } else {
        f64::NAN
    };
    let passed = identity_gap <= MOMENT_TOLERANCE;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut echo = BTreeMap::new();
    echo_common(&mut echo, &r);
    echo.insert("p".into(), p.to_string());
    echo.insert("u".into(), u.to_string());
    echo.insert("h".into(), h.to_string());
    echo.insert("weights".into(), weights_mode.into());

    let text = match r.format {
        FormatArg::Pretty => {
            let mut t = pretty_header("moments", &echo);
            let _ = writeln!(t, "result:");
            let _ = writeln!(t, "  fourth moment = {}", fmt_float(moment));
            let _ = writeln!(t, "  weighted quadruple sum = {}", fmt_float(weighted));
            let _ = writeln!(t, "  quadruple count (unit weights) = {count}");
            let _ = writeln!(t, "  moment / weighted sum = {}", fmt_float(ratio));
            let _ = writeln!(t, "  expected ratio p - 1 = {}", ctx.p() - 1);
            let _ = writeln!(t, "  identity gap = {}", fmt_float(identity_gap));
            let _ = writeln!(
                t,
                "  identity within {MOMENT_TOLERANCE:.0e}: {}",
                if passed { "yes" } else { "NO" }
            );
            let _ = writeln!(t, "elapsed: {elapsed_ms:.3} ms");
            t
        }
        FormatArg::Csv => {
            let mut t = csv_header("moments", &echo);
            let _ = writeln!(
                t,
                "p,u,h,weights,moment,weighted_sum,quadruple_count,identity_ratio,identity_gap,passed"
            );
            let _ = writeln!(
                t,
                "{p},{u},{h},{weights_mode},{},{},{count},{},{},{}",
                fmt_float(moment),
                fmt_float(weighted),
                fmt_float(ratio),
                fmt_float(identity_gap),
                u8::from(passed)
            );
            eprintln!("elapsed: {elapsed_ms:.3} ms");
            t
        }
        FormatArg::Json => json_envelope(
            "moments",
            &echo,
            r.seed,
            elapsed_ms,
            json!({
                "p": p,
                "u": u,
                "h": h,
                "weights": weights_mode,
                "moment": moment,
                "weighted_sum": weighted,
                "quadruple_count": count,
                "identity_ratio": ratio,
                "identity_gap": identity_gap,
                "passed": passed,
            }),
        ),
    };
    emit(r.out.as_ref(), &text)?;

    if passed {
        Ok(())
    } else {
        Err(Failure::named(
            1,
            "MomentIdentity",
            format!("identity gap {identity_gap:.3e} exceeds {MOMENT_TOLERANCE:.0e}"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    #[test]
    fn grid_strings_parse_and_reject() {
        assert_eq!(
            parse_grid("101:11,1009:32").unwrap(),
            vec![(101, 11), (1009, 32)]
        );
        assert!(parse_grid("101").is_err());
        assert!(parse_grid("101:x").is_err());
        assert!(parse_grid("").is_err());
    }

    #[test]
    fn lists_broadcast_or_match_exactly() {
        assert_eq!(broadcast_list("b", vec![3], 4).unwrap(), vec![3, 3, 3, 3]);
        assert_eq!(broadcast_list("b", vec![1, 2], 2).unwrap(), vec![1, 2]);
        assert!(broadcast_list("b", vec![1, 2], 3).is_err());
        let rows = broadcast_rows("c", vec![vec![1]], 2, 3).unwrap();
        assert_eq!(rows, vec![vec![1, 1, 1], vec![1, 1, 1]]);
        let rows = broadcast_rows("k", vec![vec![3, 5]], 2, 2).unwrap();
        assert_eq!(rows, vec![vec![3, 5], vec![3, 5]]);
        // A single constraint reads a comma list as one value per variable.
        let rows = broadcast_rows("k", vec![vec![3, 4, 5]], 3, 1).unwrap();
        assert_eq!(rows, vec![vec![3], vec![4], vec![5]]);
        assert!(broadcast_rows("k", vec![vec![3], vec![4], vec![5]], 2, 1).is_err());
    }

    #[test]
    fn config_files_parse_and_reject_unknowns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "# a comment").unwrap();
        writeln!(f, "p = 101").unwrap();
        writeln!(f, "grid = 101:11,1009:32").unwrap();
        drop(f);

        let mut kv = KvFile::load(&path).unwrap();
        assert_eq!(kv.take("p").as_deref(), Some("101"));
        assert!(kv.finish().is_err());

        let mut kv = KvFile::load(&path).unwrap();
        kv.take("p");
        kv.take("grid");
        kv.finish().unwrap();
    }

    #[test]
    fn duplicate_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dup.cfg");
        std::fs::write(&path, "p = 7\np = 11\n").unwrap();
        assert!(KvFile::load(&path).is_err());
        let path2 = dir.path().join("bad.cfg");
        std::fs::write(&path2, "just some text\n").unwrap();
        assert!(KvFile::load(&path2).is_err());
    }

    #[test]
    fn floats_serialize_with_seventeen_digits() {
        assert_eq!(fmt_float(2.5), "2.5000000000000000e0");
        assert_eq!(fmt_float(1.0 / 3.0), "3.3333333333333331e-1");
        let x = 0.1 + 0.2;
        let round_trip: f64 = fmt_float(x).parse().unwrap();
        assert_eq!(round_trip, x);
    }

    #[test]
    fn method_and_format_names_round_trip() {
        for m in [
            MethodArg::Brute,
            MethodArg::Spectral,
            MethodArg::Both,
            MethodArg::Auto,
        ] {
            assert_eq!(MethodArg::parse(m.name()), Some(m));
        }
        assert_eq!(MethodArg::parse("fast"), None);
        for f in [FormatArg::Csv, FormatArg::Json, FormatArg::Pretty] {
            assert_eq!(FormatArg::parse(f.name()), Some(f));
        }
        assert_eq!(FormatArg::parse("xml"), None);
    }

    #[test]
    fn csv_quoting_escapes_quotes() {
        assert_eq!(csv_quote("plain"), "\"plain\"");
        assert_eq!(csv_quote("a \"b\" c"), "\"a \"\"b\"\" c\"");
    }

    #[test]
    fn cli_declares_all_documented_flags() {
        use clap::CommandFactory;
        let cmd = Cli::command();
        let subs: Vec<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
        for name in ["count", "verify", "sweep", "moments"] {
            assert!(subs.contains(&name), "missing subcommand {name}");
        }
        let count = cmd.get_subcommands().find(|c| c.get_name() == "count").unwrap();
        let flags: Vec<String> = count
            .get_arguments()
            .filter_map(|a| a.get_long().map(|l| l.to_string()))
            .collect();
        for flag in [
            "p", "n", "s", "a", "b", "c", "k", "u", "h", "method", "seed", "workers", "out",
            "format", "force", "config",
        ] {
            assert!(flags.contains(&flag.to_string()), "missing --{flag}");
        }
    }
}
