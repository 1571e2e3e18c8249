//! Command-line front end: `table`, `verify`, `scan` and `parse`.
//!
//! Exit codes: 0 when nothing failed, 1 when a check or suite failed, 2 for
//! usage and input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::chartable::{character_table, render_text, to_json, verify_orthogonality, CharacterTable};
use crate::groupkit::{build_group, GroupSpec, DEFAULT_SIZE_CAP};
use crate::verify::{
    read_catalog, run_catalog, run_suite, suite_lemma22, GroupContext, Instance, ScanConfig, Status,
    SuiteConfig, SuiteId, TableCache, Verdict,
};

/// Environment variable naming the default table cache directory.
pub const CACHE_ENV: &str = "CHARFORGE_CACHE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "charforge", version, about = "Exact character tables and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
struct CommonOpts {
    /// Largest group order to build.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: usize,
    /// Table cache directory (defaults to $CHARFORGE_CACHE).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the character table of a group.
    Table {
        spec: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Run the exact orthogonality checks; exit 1 if any fails.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run one suite on one group (or, for lemma22, one prime).
    Verify {
        suite: String,
        spec: Option<String>,
        /// Prime for lemma22.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = SuiteConfig::default().sum_bound)]
        sum_bound: usize,
        #[arg(long, default_value_t = SuiteConfig::default().normal_cap)]
        normal_cap: usize,
        /// Instances kept in the output; the rest are counted.
        #[arg(long, default_value_t = SuiteConfig::default().max_recorded)]
        max_recorded: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run suites over every group in a catalog file.
    Scan {
        catalog: PathBuf,
        /// Comma-separated suite ids (default: all).
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = SuiteConfig::default().sum_bound)]
        sum_bound: usize,
        #[arg(long, default_value_t = SuiteConfig::default().normal_cap)]
        normal_cap: usize,
        #[arg(long, default_value_t = SuiteConfig::default().max_recorded)]
        max_recorded: usize,
        /// Primes for lemma22.
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7, 11, 13])]
        primes: Vec<u64>,
        /// Skip the orthogonality checks run on each table before the suites.
        #[arg(long)]
        no_check: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Parse a spec and echo its canonical form.
    Parse { spec: String },
}

/// Usage or input problem; reported on stderr with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Table {
            spec,
            format,
            check,
            common,
        } => cmd_table(&spec, format, check, &common, out, err),
        Command::Verify {
            suite,
            spec,
            p,
            sum_bound,
            normal_cap,
            max_recorded,
            format,
            common,
        } => {
            let cfg = SuiteConfig {
                sum_bound,
                normal_cap,
                max_recorded,
            };
            cmd_verify(&suite, spec.as_deref(), p, &cfg, format, &common, out, err)
        }
        Command::Scan {
            catalog,
            suites,
            jobs,
            report,
            sum_bound,
            normal_cap,
            max_recorded,
            primes,
            no_check,
            common,
        } => {
            let suite = SuiteConfig {
                sum_bound,
                normal_cap,
                max_recorded,
            };
            cmd_scan(&catalog, suites, jobs, report, suite, primes, !no_check, &common, out, err)
        }
        Command::Parse { spec } => cmd_parse(&spec, out),
    };
    match result {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn cache_from(common: &CommonOpts) -> Option<TableCache> {
    common
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .map(TableCache::new)
}

/// Parses, builds and tabulates one group, through the cache when configured.
fn load_table(spec: &str, common: &CommonOpts, err: &mut dyn Write) -> Result<(String, CharacterTable), UsageError> {
    let parsed: GroupSpec = spec.parse()?;
    let canonical = parsed.canonical();
    let group = Arc::new(build_group(&parsed, common.size_cap)?);
    let table = match cache_from(common) {
        Some(cache) => {
            let mut warnings = Vec::new();
            let (t, _) = cache.table(&canonical, group, &mut warnings)?;
            for w in warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            t
        }
        None => character_table(group)?,
    };
    Ok((canonical, table))
}

fn cmd_table(
    spec: &str,
    format: Format,
    check: bool,
    common: &CommonOpts,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, UsageError> {
    let (canonical, table) = load_table(spec, common, err)?;
    match format {
        Format::Text => {
            writeln!(out, "{canonical}")?;
            write!(out, "{}", render_text(&table))?;
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&to_json(&table))?)?,
    }
    if check {
        let report = verify_orthogonality(&table);
        if !report.passed {
            writeln!(err, "check failed: {}", report.failure.unwrap_or_default())?;
            return Ok(EXIT_FAIL);
        }
        writeln!(err, "check passed: {} relations", report.relations_checked)?;
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: &str,
    spec: Option<&str>,
    p: Option<u64>,
    cfg: &SuiteConfig,
    format: Format,
    common: &CommonOpts,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, UsageError> {
    let id: SuiteId = suite.parse()?;
    let verdict = if id == SuiteId::Lemma22 {
        let p = p.ok_or_else(|| UsageError("lemma22 needs --p".into()))?;
        suite_lemma22(p, cfg)?
    } else {
        let spec = spec.ok_or_else(|| UsageError(format!("{id} needs a group spec")))?;
        let (canonical, table) = load_table(spec, common, err)?;
        run_suite(id, &GroupContext::new(canonical, Arc::new(table)), cfg)
    };
    match format {
        Format::Text => write!(out, "{}", render_verdict(&verdict))?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&verdict)?)?,
    }
    Ok(if verdict.status == Status::Fail {
        EXIT_FAIL
    } else {
        EXIT_OK
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    catalog: &PathBuf,
    suites: Option<Vec<String>>,
    jobs: usize,
    report: Option<PathBuf>,
    suite: SuiteConfig,
    primes: Vec<u64>,
    check_tables: bool,
    common: &CommonOpts,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, UsageError> {
    let text = std::fs::read_to_string(catalog)
        .map_err(|e| UsageError(format!("cannot read catalog {}: {e}", catalog.display())))?;
    let suites = match suites {
        Some(list) => list
            .iter()
            .map(|s| s.parse::<SuiteId>())
            .collect::<Result<Vec<_>, _>>()?,
        None => SuiteId::ALL.to_vec(),
    };
    let cfg = ScanConfig {
        suites,
        suite,
        size_cap: common.size_cap,
        jobs,
        cache: cache_from(common),
        lemma22_primes: primes,
        check_tables,
    };
    let result = run_catalog(&read_catalog(&text), &cfg);
    for w in &result.warnings {
        writeln!(err, "warning: {w}")?;
    }
    match report {
        Some(path) => {
            std::fs::write(&path, result.to_json() + "\n")
                .map_err(|e| UsageError(format!("cannot write report {}: {e}", path.display())))?;
            for (name, c) in &result.summary {
                writeln!(
                    out,
                    "{name:<12} pass {:>4}  fail {:>3}  vacuous {:>4}  skipped {:>4}  error {:>3}",
                    c.pass, c.fail, c.vacuous, c.skipped, c.error
                )?;
            }
        }
        None => writeln!(out, "{}", result.to_json())?,
    }
    Ok(result.exit_code())
}

fn cmd_parse(spec: &str, out: &mut dyn Write) -> Result<i32, UsageError> {
    let parsed: GroupSpec = spec.parse()?;
    writeln!(out, "{}", parsed.canonical())?;
    match parsed.kind.order_hint() {
        Some(n) => writeln!(out, "order {n}")?,
        None => writeln!(out, "order unknown until built")?,
    }
    Ok(EXIT_OK)
}

/// Human-readable verdict: a status line, notes, then one line per instance.
pub fn render_verdict(v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}: {}", v.suite, v.spec, v.status);
    if let Some(sev) = v.details.severity {
        let _ = writeln!(s, "  severity: {}", serde_json::to_value(sev).unwrap_or_default().as_str().unwrap_or(""));
    }
    let _ = writeln!(
        s,
        "  instances: {} ({} failing)",
        v.details.instance_count, v.details.failing_count
    );
    for note in &v.details.notes {
        let _ = writeln!(s, "  note: {note}");
    }
    for inst in &v.instances {
        let _ = writeln!(s, "  {}", render_instance(inst));
    }
    s
}

fn render_instance(i: &Instance) -> String {
    let join = |m: &std::collections::BTreeMap<String, serde_json::Value>| {
        m.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    };
    let failed: Vec<&str> = i
        .conclusion
        .iter()
        .filter(|(_, ok)| !**ok)
        .map(|(k, _)| k.as_str())
        .collect();
    let tag = if i.holds { "ok  " } else { "FAIL" };
    let mut line = format!("[{tag}] {} | {}", join(&i.participants), join(&i.hypothesis));
    if !failed.is_empty() {
        let _ = write!(line, " | false: {}", failed.join(", "));
    }
    line
}
