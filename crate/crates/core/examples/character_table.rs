//! Compute, check and print a character table.
//!
//! cargo run --example character_table -- "quaternion(2)"

use std::sync::Arc;

use charforge::chartable::{character_table, render_text, to_json, verify_orthogonality};
use charforge::groupkit::{build_group, parse_group_spec, DEFAULT_SIZE_CAP};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "symmetric(4)".into());
    let spec = parse_group_spec(&text).expect("valid spec");
    let g = build_group(&spec, DEFAULT_SIZE_CAP).expect("group within the size cap");
    let t = character_table(Arc::new(g)).expect("table");

    print!("{}", render_text(&t));
    println!();
    println!("field: q = {}, exponent e = {}", t.field().q, t.field().e);
    println!("degrees: {:?}", t.degrees());

    let check = verify_orthogonality(&t);
    println!("exact checks: passed = {} ({} relations)", check.passed, check.relations_checked);

    let json = serde_json::to_string(&to_json(&t)).unwrap();
    println!("json: {} bytes", json.len());
}
