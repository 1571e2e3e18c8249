//! Build groups from spec strings and print their basic invariants.
//!
//! cargo run --example group_families -- "heisenberg(3)" "symmetric(4) x cyclic(2)"

use charforge::groupkit::{build_group, center, is_nilpotent, is_p_group, is_solvable, parse_group_spec, DEFAULT_SIZE_CAP};

fn main() {
    let mut specs: Vec<String> = std::env::args().skip(1).collect();
    if specs.is_empty() {
        specs = [
            "cyclic(12)",
            "abelian(2,4)",
            "dihedral(4)",
            "quaternion(2)",
            "semidihedral(4)",
            "extraspecial(3,1,expP2)",
            "heisenberg(3)",
            "alternating(5)",
            "symmetric(3) x cyclic(3)",
            "perm: (1 2 3 4 5), (2 3 5 4)",
        ]
        .map(String::from)
        .to_vec();
    }
    println!("{:<32} {:>6} {:>8} {:>7} {:>7} {:>6} {:>6}", "spec", "order", "classes", "center", "p", "nilp", "solv");
    for text in specs {
        let spec = match parse_group_spec(&text) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{text}: {e}");
                continue;
            }
        };
        let g = match build_group(&spec, DEFAULT_SIZE_CAP) {
            Ok(g) => g,
            Err(e) => {
                eprintln!("{text}: {e}");
                continue;
            }
        };
        let p = is_p_group(&g).map_or("-".to_string(), |p| p.to_string());
        println!(
            "{:<32} {:>6} {:>8} {:>7} {:>7} {:>6} {:>6}",
            spec.canonical(),
            g.order(),
            g.classes().len(),
            center(&g).order,
            p,
            is_nilpotent(&g),
            is_solvable(&g)
        );
    }
}
