//! Exact quadratic Gauss-type sums and their norms.
//!
//! cargo run --example gauss_sums -- 11

use charforge::cyclo::Cyclotomic;
use charforge::verify::{gauss_sum, suite_lemma22, SuiteConfig};

fn main() {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let target = Cyclotomic::from_integer(p as i64);
    for b in 1..p {
        let s = gauss_sum(p, 0, b);
        let norm = s.norm_squared();
        let (re, im) = s.to_complex();
        println!("a = 0, b = {b}: sum = {s}  ~ {re:.4} + {im:.4}i  |sum|^2 = {norm} {}", if norm == target { "ok" } else { "MISMATCH" });
    }
    match suite_lemma22(p, &SuiteConfig::default()) {
        Ok(v) => println!("all pairs for p = {p}: {} ({} instances)", v.status, v.details.instance_count),
        Err(e) => eprintln!("{e}"),
    }
}
