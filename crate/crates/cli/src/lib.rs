//! Argument parsing and dispatch for the `cfcolor` binary.
//!
//! Exit codes: 0 success or predicate holds, 1 predicate fails, 2 usage or
//! parse error, 3 internal invariant breach.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use cfcolor_core::construct::{construct, ConstructionMeta};
use cfcolor_core::formulas::{
    chi_kcf_closed, f_scf_bounds, f_scf_closed, f_scf_from_g, g_scf_closed, gk_odd_closed, odd_level_colors,
};
use cfcolor_core::hypergraph::{degeneracy_check, DegeneracyMode, DegeneracyVerdict};
use cfcolor_core::online::{run_experiment, ArrivalKind, ExperimentSpec, StrategyKind};
use cfcolor_core::oracle::{oracle_max_points, oracle_min_colors, recurrence_audit, SearchLimits};
use cfcolor_core::{verify, Coloring, Error, Mode, Predicate};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

/// Caps the rayon worker count when set to a positive integer.
pub const THREADS_ENV: &str = "CFCOLOR_THREADS";

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "cfcolor",
    version,
    about = "Conflict-free colorings of the interval hypergraph H_n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a k-SCF or k-CF coloring of H_n and a JSON metadata line.
    Construct(ConstructArgs),
    /// Check a coloring; exit 1 with the first violating interval if it fails.
    Verify(VerifyArgs),
    /// Exact search: largest n for m colors (--m), or fewest colors for n (--n).
    Oracle(OracleArgs),
    /// Table of certified g_k(m) values against the split upper bounds.
    Audit(AuditArgs),
    /// Online coloring experiments over arrival orders and strategies.
    Online(OnlineArgs),
    /// Evaluate a closed form.
    Formulas(FormulasArgs),
    /// Check q-degeneracy of degree k of H_n over arrival orders.
    Degeneracy(DegeneracyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Kscf,
    Kcf,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Kscf => Mode::Kscf,
            ModeArg::Kcf => Mode::Kcf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredicateArg {
    Kscf,
    Kcf,
    Kpnm,
}

impl From<PredicateArg> for Predicate {
    fn from(p: PredicateArg) -> Predicate {
        match p {
            PredicateArg::Kscf => Predicate::Kscf,
            PredicateArg::Kcf => Predicate::Kcf,
            PredicateArg::Kpnm => Predicate::Kpnm,
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Caps {
    /// Node cap per search.
    #[arg(long, default_value_t = 1_000_000_000)]
    pub max_nodes: u64,
    /// Wall-clock cap per search, in seconds.
    #[arg(long, default_value_t = 600)]
    pub max_seconds: u64,
    /// Search on one thread.
    #[arg(long)]
    pub sequential: bool,
    /// Report elapsed milliseconds (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

impl Caps {
    fn limits(&self) -> Result<SearchLimits, CliError> {
        if self.max_nodes == 0 || self.max_seconds == 0 {
            return Err(CliError::usage("caps must be positive"));
        }
        let limits = SearchLimits {
            max_nodes: self.max_nodes,
            max_time: Some(Duration::from_secs(self.max_seconds)),
            parallel: true,
        };
        Ok(if self.sequential { limits.sequential() } else { limits })
    }
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum, default_value = "kscf")]
    pub mode: ModeArg,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    /// plain: coloring line then metadata line; json: one object.
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
    /// Omit the metadata line in plain output.
    #[arg(long)]
    pub no_meta: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["coloring", "input"])))]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "kscf")]
    pub mode: PredicateArg,
    #[arg(long)]
    pub k: usize,
    /// Inline coloring such as 1,2,3,1.
    pub coloring: Option<String>,
    /// Read the coloring from a file (`-` for standard input). The first line
    /// is the coloring; later lines may be blank or JSON metadata.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("query").required(true).args(["m", "n"])))]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value = "kscf")]
    pub mode: ModeArg,
    #[arg(long)]
    pub k: usize,
    /// Color budget: report the largest n.
    #[arg(long)]
    pub m: Option<usize>,
    /// Point count: report the fewest colors.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub caps: Caps,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m_max: usize,
    #[command(flatten)]
    pub caps: Caps,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct OnlineArgs {
    /// Point counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long)]
    pub k: usize,
    /// sorted, reverse, random, midpoint-first or custom:P1,P2,...
    #[arg(long, default_value = "random")]
    pub order: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "first-fit")]
    pub strategy: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// One row per cell instead of one per trial (csv).
    #[arg(long)]
    pub summary: bool,
    /// Include each trial's final coloring.
    #[arg(long)]
    pub dump_colorings: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("quantity").required(true).args(["chi_kcf", "f_scf", "f_scf_from_g", "g_scf", "g_odd", "bounds"])))]
pub struct FormulasArgs {
    /// floor(log_{k+1} n) + 1 (needs --n, --k).
    #[arg(long)]
    pub chi_kcf: bool,
    /// Fewest k-SCF colors from the logarithmic closed form, k in {2,3} (--n, --k).
    #[arg(long)]
    pub f_scf: bool,
    /// Fewest k-SCF colors as min { m : g_k(m) >= n }, k in {2,3} (--n, --k).
    #[arg(long)]
    pub f_scf_from_g: bool,
    /// g_k(m) for k in {2,3} (--m, --k).
    #[arg(long)]
    pub g_scf: bool,
    /// g_k(k + l(p+1)) = 2^l (k+1) - 1 for odd k (--k, --l).
    #[arg(long)]
    pub g_odd: bool,
    /// Strict real bounds on the fewest k-SCF colors, k >= 2 (--n, --k).
    #[arg(long)]
    pub bounds: bool,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DegeneracyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub q: usize,
    /// Check this many random orders instead of all n! of them.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }

    fn internal(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: msg.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Integrity(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Text to emit and the exit code to return.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

fn ok(text: String) -> Outcome {
    Outcome { text, code: EXIT_OK }
}

fn json_line<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string(value).map_err(|e| CliError::internal(format!("json output: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn csv_text(f: impl FnOnce(&mut Vec<u8>) -> cfcolor_core::Result<()>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    String::from_utf8(buf).map_err(|e| CliError::internal(e.to_string()))
}

fn unsupported(cmd: &str, format: Format) -> CliError {
    CliError::usage(format!("{cmd} does not support --format {format:?}").to_lowercase())
}

/// Sets the global rayon pool size from `CFCOLOR_THREADS`, if present.
pub fn configure_threads(value: Option<String>) -> Result<(), CliError> {
    let Some(raw) = value else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::internal(format!("thread pool: {e}")))
}

/// Runs a parsed command and writes its output.
pub fn execute(cli: Cli) -> Result<u8, CliError> {
    let (outcome, out) = match cli.command {
        Command::Construct(a) => (cmd_construct(&a)?, a.output.out),
        Command::Verify(a) => (cmd_verify(&a)?, a.output.out),
        Command::Oracle(a) => (cmd_oracle(&a)?, a.output.out),
        Command::Audit(a) => (cmd_audit(&a)?, a.output.out),
        Command::Online(a) => (cmd_online(&a)?, a.output.out),
        Command::Formulas(a) => (cmd_formulas(&a)?, a.output.out),
        Command::Degeneracy(a) => (cmd_degeneracy(&a)?, a.output.out),
    };
    match out {
        Some(path) => fs::write(&path, outcome.text.as_bytes())
            .map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::internal(format!("stdout: {e}")))?;
        }
    }
    Ok(outcome.code)
}

#[derive(Serialize)]
struct ConstructJson<'a> {
    #[serde(flatten)]
    meta: ConstructionMeta,
    coloring: &'a Coloring,
}

pub fn cmd_construct(a: &ConstructArgs) -> Result<Outcome, CliError> {
    let built = construct(a.n, a.k, a.mode.into())?;
    let predicate = Mode::from(a.mode).predicate();
    if !verify(&built.coloring, predicate, a.k)?.ok() {
        return Err(CliError::internal(format!(
            "construction for n={} k={} fails {predicate}",
            a.n, a.k
        )));
    }
    match a.format {
        Format::Plain => {
            let mut text = format!("{}\n", built.coloring);
            if !a.no_meta {
                text.push_str(&json_line(&built.meta())?);
            }
            Ok(ok(text))
        }
        Format::Json => Ok(ok(json_line(&ConstructJson {
            meta: built.meta(),
            coloring: &built.coloring,
        })?)),
        Format::Csv => Err(unsupported("construct", a.format)),
    }
}

/// First line is the coloring; anything after must be blank or a JSON line.
fn parse_coloring_text(text: &str) -> Result<Coloring, CliError> {
    let mut lines = text.split('\n');
    let first = lines.next().unwrap_or("");
    for (i, line) in lines.enumerate() {
        let line = line.trim_end_matches('\r');
        if !(line.is_empty() || line.starts_with('{')) {
            return Err(CliError::usage(format!(
                "unexpected content on line {}: {line:?}",
                i + 2
            )));
        }
    }
    Ok(first.parse::<Coloring>()?)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let coloring = match (&a.coloring, &a.input) {
        (Some(inline), None) => inline.parse::<Coloring>()?,
        (None, Some(path)) => {
            let mut text = String::new();
            if path.as_os_str() == "-" {
                io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| CliError::usage(format!("stdin: {e}")))?;
            } else {
                text = fs::read_to_string(path)
                    .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            }
            parse_coloring_text(&text)?
        }
        _ => return Err(CliError::usage("give exactly one of COLORING or --input")),
    };
    let verdict = verify(&coloring, a.mode.into(), a.k)?;
    let report = verdict.report(&coloring);
    let text = match a.format {
        Format::Json => json_line(&report)?,
        Format::Plain => match report.violation {
            None => "ok\n".to_string(),
            Some(iv) => format!("violation {} {}\n", iv.lo(), iv.hi()),
        },
        Format::Csv => return Err(unsupported("verify", a.format)),
    };
    Ok(Outcome {
        text,
        code: if report.ok { EXIT_OK } else { EXIT_FAIL },
    })
}

#[derive(Serialize)]
struct OracleJson {
    schema_version: u32,
    query: &'static str,
    mode: Mode,
    k: usize,
    m: Option<usize>,
    n: Option<usize>,
    value: Option<usize>,
    lower: usize,
    upper: Option<usize>,
    exhausted: bool,
    nodes_explored: u64,
    witness: Option<String>,
    witness_verified: Option<bool>,
    millis: Option<u128>,
}

const ORACLE_CSV_HEADER: &str =
    "query,mode,k,m,n,value,lower,upper,exhausted,nodes_explored,witness,witness_verified,millis";

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn cmd_oracle(a: &OracleArgs) -> Result<Outcome, CliError> {
    let limits = a.caps.limits()?;
    let mode: Mode = a.mode.into();
    let row = match (a.m, a.n) {
        (Some(m), None) => {
            let r = oracle_max_points(a.k, m, mode, &limits)?;
            let verified = r
                .witness
                .as_ref()
                .map(|w| verify(w, mode.predicate(), a.k).map(|v| v.ok()))
                .transpose()?;
            OracleJson {
                schema_version: SCHEMA_VERSION,
                query: "max-points",
                mode,
                k: a.k,
                m: Some(m),
                n: None,
                value: r.exhausted.then_some(r.value),
                lower: r.value,
                upper: r.exhausted.then_some(r.value),
                exhausted: r.exhausted,
                nodes_explored: r.nodes_explored,
                witness: r.witness.as_ref().map(|w| w.to_string()),
                witness_verified: verified,
                millis: a.caps.timing.then_some(r.elapsed.as_millis()),
            }
        }
        (None, Some(n)) => {
            let r = oracle_min_colors(n, a.k, mode, &limits)?;
            let verified = verify(&r.witness, mode.predicate(), a.k)?.ok();
            OracleJson {
                schema_version: SCHEMA_VERSION,
                query: "min-colors",
                mode,
                k: a.k,
                m: None,
                n: Some(n),
                value: r.value(),
                lower: r.lower,
                upper: Some(r.upper),
                exhausted: r.exhausted,
                nodes_explored: r.nodes_explored,
                witness: Some(r.witness.to_string()),
                witness_verified: Some(verified),
                millis: a.caps.timing.then_some(r.elapsed.as_millis()),
            }
        }
        _ => return Err(CliError::usage("give exactly one of --m or --n")),
    };
    if row.witness_verified == Some(false) {
        return Err(CliError::internal("search witness fails verification"));
    }
    let text = match a.format {
        Format::Json => json_line(&row)?,
        Format::Plain => match row.value {
            Some(v) => format!("{v}\n"),
            None => format!("{}..{} (not exhausted)\n", row.lower, opt(&row.upper)),
        },
        Format::Csv => {
            let mut s = String::from(ORACLE_CSV_HEADER);
            s.push('\n');
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},\"{}\",{},{}",
                row.query,
                row.mode,
                row.k,
                opt(&row.m),
                opt(&row.n),
                opt(&row.value),
                row.lower,
                opt(&row.upper),
                row.exhausted,
                row.nodes_explored,
                opt(&row.witness),
                opt(&row.witness_verified),
                opt(&row.millis)
            );
            s
        }
    };
    Ok(ok(text))
}

pub fn cmd_audit(a: &AuditArgs) -> Result<Outcome, CliError> {
    let report = recurrence_audit(a.k, a.m_max, &a.caps.limits()?)?;
    let report = if a.caps.timing { report } else { report.without_timing() };
    let text = match a.format {
        Format::Csv => csv_text(|buf| report.write_csv(buf))?,
        Format::Json => json_line(&report)?,
        Format::Plain => return Err(unsupported("audit", a.format)),
    };
    Ok(ok(text))
}

pub fn cmd_online(a: &OnlineArgs) -> Result<Outcome, CliError> {
    let orders = a
        .order
        .iter()
        .map(|s| s.parse::<ArrivalKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let strategies = a
        .strategy
        .iter()
        .map(|s| s.parse::<StrategyKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let spec = ExperimentSpec {
        n_values: a.n.clone(),
        k: a.k,
        strategies,
        orders,
        trials: a.trials,
        seed: a.seed,
        keep_colorings: a.dump_colorings,
    };
    let report = run_experiment(&spec)?;
    if let Some(bad) = report.rows.iter().find(|r| !r.verified) {
        return Err(CliError::internal(format!(
            "online coloring fails verification in cell {} trial {}",
            bad.cell, bad.trial
        )));
    }
    let text = match a.format {
        Format::Csv if a.summary => csv_text(|buf| report.write_summary_csv(buf))?,
        Format::Csv => csv_text(|buf| report.write_trials_csv(buf))?,
        Format::Json => json_line(&report)?,
        Format::Plain => return Err(unsupported("online", a.format)),
    };
    Ok(ok(text))
}

#[derive(Serialize)]
struct FormulaJson {
    schema_version: u32,
    quantity: &'static str,
    n: Option<u64>,
    k: Option<usize>,
    m: Option<u32>,
    l: Option<u32>,
    value: serde_json::Value,
}

fn need<T: Copy>(v: Option<T>, flag: &str, quantity: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::usage(format!("--{quantity} needs --{flag}")))
}

pub fn cmd_formulas(a: &FormulasArgs) -> Result<Outcome, CliError> {
    let (quantity, value, plain): (&'static str, serde_json::Value, String) = if a.chi_kcf {
        let v = chi_kcf_closed(need(a.n, "n", "chi-kcf")?, need(a.k, "k", "chi-kcf")?)?;
        ("chi-kcf", v.into(), v.to_string())
    } else if a.f_scf {
        let v = f_scf_closed(need(a.n, "n", "f-scf")?, need(a.k, "k", "f-scf")?)?;
        ("f-scf", v.into(), v.to_string())
    } else if a.f_scf_from_g {
        let v = f_scf_from_g(need(a.n, "n", "f-scf-from-g")?, need(a.k, "k", "f-scf-from-g")?)?;
        ("f-scf-from-g", v.into(), v.to_string())
    } else if a.g_scf {
        let v = g_scf_closed(need(a.m, "m", "g-scf")?, need(a.k, "k", "g-scf")?)?;
        ("g-scf", v.into(), v.to_string())
    } else if a.g_odd {
        let k = need(a.k, "k", "g-odd")?;
        let l = need(a.l, "l", "g-odd")?;
        let v = gk_odd_closed(k, l)?;
        let colors = odd_level_colors(k, l);
        (
            "g-odd",
            serde_json::json!({ "m": colors, "g": v }),
            format!("{v}\n# colors m = {colors}"),
        )
    } else {
        let (lo, hi) = f_scf_bounds(need(a.n, "n", "bounds")?, need(a.k, "k", "bounds")?)?;
        ("bounds", serde_json::json!([lo, hi]), format!("{lo} {hi}"))
    };
    let text = match a.format {
        Format::Plain => format!("{plain}\n"),
        Format::Json => json_line(&FormulaJson {
            schema_version: SCHEMA_VERSION,
            quantity,
            n: a.n,
            k: a.k,
            m: a.m,
            l: a.l,
            value,
        })?,
        Format::Csv => return Err(unsupported("formulas", a.format)),
    };
    Ok(ok(text))
}

#[derive(Serialize)]
struct DegeneracyJson<'a> {
    schema_version: u32,
    check: DegeneracyMode,
    #[serde(flatten)]
    verdict: &'a DegeneracyVerdict,
}

pub fn cmd_degeneracy(a: &DegeneracyArgs) -> Result<Outcome, CliError> {
    let mode = match a.samples {
        Some(samples) => DegeneracyMode::Sampled { samples, seed: a.seed },
        None => DegeneracyMode::Exhaustive,
    };
    let verdict = degeneracy_check(a.n, a.k, a.q, mode)?;
    let text = match a.format {
        Format::Json => json_line(&DegeneracyJson {
            schema_version: SCHEMA_VERSION,
            check: mode,
            verdict: &verdict,
        })?,
        Format::Plain => match &verdict.witness {
            None => format!("holds ({} orders)\n", verdict.permutations_checked),
            Some(w) => {
                let order: Vec<String> = w.arrival.as_slice().iter().map(|p| p.to_string()).collect();
                format!("fails at t={} sum={} arrival={}\n", w.t, w.sum, order.join(","))
            }
        },
        Format::Csv => return Err(unsupported("degeneracy", a.format)),
    };
    Ok(Outcome {
        text,
        code: if verdict.holds { EXIT_OK } else { EXIT_FAIL },
    })
}
