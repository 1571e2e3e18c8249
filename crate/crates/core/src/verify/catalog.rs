//! Catalog scans: many groups, many suites, one report.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chartable::{
    character_table, read_cache_text, verify_orthogonality, write_cache_text, CharacterTable, TableError,
};
use crate::groupkit::{build_group, Group, GroupSpec, DEFAULT_SIZE_CAP};

use super::{run_suite, suite_lemma22, GroupContext, Status, SuiteConfig, SuiteId, Verdict};

/// One non-comment line of a catalog file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    /// 1-based line number in the source file.
    pub line: usize,
    pub text: String,
}

/// Splits a catalog into spec lines; `#` starts a comment.
pub fn read_catalog(text: &str) -> Vec<CatalogEntry> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let body = l.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| CatalogEntry {
                line: i + 1,
                text: body.to_string(),
            })
        })
        .collect()
}

/// On-disk tables keyed by canonical spec.
#[derive(Debug, Clone)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, canonical: &str) -> PathBuf {
        let digest = Sha256::digest(canonical.as_bytes());
        let hex: String = digest[..16].iter().map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{hex}.table"))
    }

    /// A cached table that parses and passes every orthogonality check.
    /// Anything else is reported in `warnings` and treated as a miss.
    pub fn load(&self, canonical: &str, group: &Arc<Group>, warnings: &mut Vec<String>) -> Option<CharacterTable> {
        let path = self.path_for(canonical);
        let text = fs::read_to_string(&path).ok()?;
        match read_cache_text(canonical, group.clone(), &text) {
            Ok(t) => {
                let check = verify_orthogonality(&t);
                if check.passed {
                    Some(t)
                } else {
                    warnings.push(format!(
                        "cache entry {} for {canonical} failed verification ({}); recomputing",
                        path.display(),
                        check.failure.unwrap_or_default()
                    ));
                    None
                }
            }
            Err(e) => {
                warnings.push(format!(
                    "cache entry {} for {canonical} is corrupt ({e}); recomputing",
                    path.display()
                ));
                None
            }
        }
    }

    /// Writes through a temporary file so concurrent readers never see a
    /// partial entry.
    pub fn store(&self, canonical: &str, t: &CharacterTable) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(canonical);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, write_cache_text(canonical, t))?;
        fs::rename(tmp, path)
    }

    /// Cache hit, or a fresh computation stored for next time.
    pub fn table(
        &self,
        canonical: &str,
        group: Arc<Group>,
        warnings: &mut Vec<String>,
    ) -> Result<(CharacterTable, bool), TableError> {
        if let Some(t) = self.load(canonical, &group, warnings) {
            return Ok((t, true));
        }
        let t = character_table(group)?;
        if let Err(e) = self.store(canonical, &t) {
            warnings.push(format!("could not write cache entry for {canonical}: {e}"));
        }
        Ok((t, false))
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub suites: Vec<SuiteId>,
    pub suite: SuiteConfig,
    pub size_cap: usize,
    pub jobs: usize,
    pub cache: Option<TableCache>,
    /// Primes for `lemma22`, which runs once per prime rather than per group.
    pub lemma22_primes: Vec<u64>,
    /// Run the orthogonality checks on every table before the suites.
    pub check_tables: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            suites: SuiteId::ALL.to_vec(),
            suite: SuiteConfig::default(),
            size_cap: DEFAULT_SIZE_CAP,
            jobs: 1,
            cache: None,
            lemma22_primes: vec![3, 5, 7, 11, 13],
            check_tables: false,
        }
    }
}

/// The parts of the configuration that can change verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub suites: Vec<SuiteId>,
    pub sum_bound: usize,
    pub normal_cap: usize,
    pub max_recorded: usize,
    pub size_cap: usize,
    pub lemma22_primes: Vec<u64>,
    pub check_tables: bool,
    pub catalog_entries: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    pub skipped: usize,
    pub error: usize,
}

impl Counts {
    fn add(&mut self, s: Status) {
        match s {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::Vacuous => self.vacuous += 1,
            Status::Skipped => self.skipped += 1,
            Status::Error => self.error += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GroupTiming {
    pub spec: String,
    pub build_ms: f64,
    pub table_ms: f64,
    pub table_cached: bool,
    pub suites_ms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub jobs: usize,
    pub total_ms: f64,
    pub groups: Vec<GroupTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: ReportConfig,
    pub verdicts: Vec<Verdict>,
    pub summary: BTreeMap<String, Counts>,
    pub timings: Timings,
    /// Cache problems and similar; printed, not serialized.
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn fail_count(&self) -> usize {
        self.summary.values().map(|c| c.fail).sum()
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.fail_count() > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report as JSON with the timing section removed, for comparisons.
    pub fn to_json_without_timings(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timings");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

fn ms_since(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

struct GroupOutcome {
    verdicts: Vec<Verdict>,
    timing: GroupTiming,
    warnings: Vec<String>,
}

fn process_entry(entry: &CatalogEntry, cfg: &ScanConfig) -> GroupOutcome {
    let suites: Vec<SuiteId> = cfg.suites.iter().copied().filter(|s| s.is_group_suite()).collect();
    let mut timing = GroupTiming {
        spec: entry.text.clone(),
        ..GroupTiming::default()
    };
    let mut warnings = Vec::new();
    let fail_all = |spec: &str, msg: String, timing: GroupTiming, warnings: Vec<String>| GroupOutcome {
        verdicts: suites.iter().map(|&s| Verdict::error(s, spec, msg.clone())).collect(),
        timing,
        warnings,
    };

    let spec: GroupSpec = match entry.text.parse() {
        Ok(s) => s,
        Err(e) => return fail_all(&entry.text, format!("line {}: {e}", entry.line), timing, warnings),
    };
    let canonical = spec.canonical();
    timing.spec = canonical.clone();

    let start = Instant::now();
    let group = match build_group(&spec, cfg.size_cap) {
        Ok(g) => Arc::new(g),
        Err(e) => return fail_all(&canonical, e.to_string(), timing, warnings),
    };
    group.classes();
    timing.build_ms = ms_since(start);

    let start = Instant::now();
    let table = match &cfg.cache {
        Some(cache) => cache.table(&canonical, group, &mut warnings),
        None => character_table(group).map(|t| (t, false)),
    };
    let table = match table {
        Ok((t, cached)) => {
            timing.table_cached = cached;
            t
        }
        Err(e) => return fail_all(&canonical, e.to_string(), timing, warnings),
    };
    if cfg.check_tables {
        let check = verify_orthogonality(&table);
        if !check.passed {
            let msg = format!("table check failed: {}", check.failure.unwrap_or_default());
            return fail_all(&canonical, msg, timing, warnings);
        }
    }
    timing.table_ms = ms_since(start);

    let ctx = GroupContext::new(canonical, Arc::new(table));
    let verdicts = suites
        .iter()
        .map(|&s| {
            let start = Instant::now();
            let v = run_suite(s, &ctx, &cfg.suite);
            timing.suites_ms.insert(s.name().to_string(), ms_since(start));
            v
        })
        .collect();
    GroupOutcome {
        verdicts,
        timing,
        warnings,
    }
}

/// Runs the configured suites over every entry, `cfg.jobs` groups at a time.
/// Output order follows the catalog regardless of scheduling.
pub fn run_catalog(entries: &[CatalogEntry], cfg: &ScanConfig) -> Report {
    let start = Instant::now();
    let jobs = cfg.jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let outcomes: Vec<GroupOutcome> = pool.install(|| entries.par_iter().map(|e| process_entry(e, cfg)).collect());

    let mut verdicts = Vec::new();
    let mut groups = Vec::new();
    let mut warnings = Vec::new();
    for o in outcomes {
        verdicts.extend(o.verdicts);
        groups.push(o.timing);
        warnings.extend(o.warnings);
    }
    if cfg.suites.contains(&SuiteId::Lemma22) {
        for &p in &cfg.lemma22_primes {
            verdicts.push(
                suite_lemma22(p, &cfg.suite)
                    .unwrap_or_else(|e| Verdict::error(SuiteId::Lemma22, format!("p={p}"), e.to_string())),
            );
        }
    }

    let mut summary: BTreeMap<String, Counts> =
        cfg.suites.iter().map(|s| (s.name().to_string(), Counts::default())).collect();
    for v in &verdicts {
        summary.entry(v.suite.name().to_string()).or_default().add(v.status);
    }
    Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: ReportConfig {
            suites: cfg.suites.clone(),
            sum_bound: cfg.suite.sum_bound,
            normal_cap: cfg.suite.normal_cap,
            max_recorded: cfg.suite.max_recorded,
            size_cap: cfg.size_cap,
            lemma22_primes: cfg.lemma22_primes.clone(),
            check_tables: cfg.check_tables,
            catalog_entries: entries.len(),
        },
        verdicts,
        summary,
        timings: Timings {
            jobs,
            total_ms: ms_since(start),
            groups,
        },
        warnings,
    }
}
