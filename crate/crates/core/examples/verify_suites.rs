//! Run every group suite on one group and print the verdicts.
//!
//! cargo run --example verify_suites -- "extraspecial(5,1,expP)"

use std::sync::Arc;

use charforge::chartable::character_table;
use charforge::cli::render_verdict;
use charforge::groupkit::{build_group, parse_group_spec, DEFAULT_SIZE_CAP};
use charforge::verify::{run_suite, GroupContext, SuiteConfig, SuiteId};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "heisenberg(3)".into());
    let spec = parse_group_spec(&text).expect("valid spec");
    let g = build_group(&spec, DEFAULT_SIZE_CAP).expect("group within the size cap");
    let t = character_table(Arc::new(g)).expect("table");
    let ctx = GroupContext::new(spec.canonical(), Arc::new(t));
    let cfg = SuiteConfig {
        max_recorded: 4,
        ..SuiteConfig::default()
    };
    for id in SuiteId::ALL.into_iter().filter(|id| id.is_group_suite()) {
        println!("{}", render_verdict(&run_suite(id, &ctx, &cfg)));
    }
}
