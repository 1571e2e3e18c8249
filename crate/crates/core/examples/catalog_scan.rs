//! Scan a catalog with several workers and summarize the report.
//!
//! cargo run --release --example catalog_scan -- catalog/default.txt 4

use charforge::verify::{read_catalog, run_catalog, ScanConfig, SuiteId, TableCache};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next();
    let jobs = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let text = match &path {
        Some(p) => std::fs::read_to_string(p).expect("readable catalog"),
        None => "cyclic(6)\nquaternion(2)\nheisenberg(3)\nsymmetric(4)\nalternating(4)\n".into(),
    };
    let cache_dir = std::env::temp_dir().join("charforge-example-cache");
    let cfg = ScanConfig {
        suites: vec![SuiteId::TheoremB, SuiteId::TheoremD, SuiteId::Lemma21, SuiteId::TheoremTt],
        jobs,
        cache: Some(TableCache::new(&cache_dir)),
        check_tables: true,
        ..ScanConfig::default()
    };
    let report = run_catalog(&read_catalog(&text), &cfg);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("{:<12} {:>5} {:>5} {:>8} {:>8} {:>6}", "suite", "pass", "fail", "vacuous", "skipped", "error");
    for (suite, c) in &report.summary {
        println!("{suite:<12} {:>5} {:>5} {:>8} {:>8} {:>6}", c.pass, c.fail, c.vacuous, c.skipped, c.error);
    }
    let cached = report.timings.groups.iter().filter(|g| g.table_cached).count();
    println!("{} groups in {} ms, {cached} tables from {}", report.timings.groups.len(), report.timings.total_ms, cache_dir.display());
    std::process::exit(report.exit_code());
}
