use std::sync::Arc;

use super::*;
use crate::charops::{decompose, inner_product, pointwise_product, ClassFunction};
use crate::chartable::character_table;
use crate::cyclo::Cyclotomic;
use crate::groupkit::{build_group, Group, Subgroup, DEFAULT_SIZE_CAP};

fn ctx(spec: &str) -> GroupContext {
    let s: crate::groupkit::GroupSpec = spec.parse().unwrap();
    let g = Arc::new(build_group(&s, DEFAULT_SIZE_CAP).unwrap());
    GroupContext::new(s.canonical(), Arc::new(character_table(g).unwrap()))
}

fn cfg() -> SuiteConfig {
    SuiteConfig::default()
}

fn p_of(inst: &Instance, key: &str) -> u64 {
    inst.participants[key].as_u64().unwrap()
}

#[test]
fn product_table_matches_inner_products() {
    for spec in ["symmetric(3)", "quaternion(2)", "heisenberg(3)", "alternating(4)", "dihedral(5)"] {
        let c = ctx(spec);
        let t = c.table();
        let products = c.products().unwrap();
        for a in 0..t.len() {
            for b in 0..t.len() {
                let prod = pointwise_product(t.character(a), t.character(b));
                assert_eq!(products.row(a, b), decompose(&prod, t).unwrap(), "{spec} {a} {b}");
            }
        }
    }
}

#[test]
fn conjecture_a_examples() {
    let v = suite_conjecture_a(&ctx("cyclic(4)"), &cfg());
    assert_eq!(v.status, Status::Pass);
    assert!(v.instances.iter().all(|i| p_of(i, "m") == 1));

    let c = ctx("heisenberg(3)");
    let v = suite_conjecture_a(&c, &cfg());
    assert_eq!(v.status, Status::Pass);
    // one instance per nontrivial central character
    assert_eq!(v.details.instance_count, 2);
    for inst in &v.instances {
        assert_eq!(p_of(inst, "m"), 3);
        assert_eq!(p_of(inst, "phi"), p_of(inst, "psi"));
        assert!(inst.conclusion["chi_vanishes_off_center"]);
    }
    // the mixed pair decomposes into all nine linears
    let f = c.faithful();
    assert_eq!(f.len(), 2);
    let row = c.products().unwrap().row(f[0], f[1]).to_vec();
    assert_eq!(row.iter().filter(|n| **n == 1).count(), 9);
    assert_eq!(row.iter().sum::<u64>(), 9);
}

#[test]
fn conjecture_a_skips_non_solvable_and_non_cyclic_center() {
    assert_eq!(suite_conjecture_a(&ctx("alternating(5)"), &cfg()).status, Status::Skipped);
    assert_eq!(suite_conjecture_a(&ctx("abelian(2,2)"), &cfg()).status, Status::Skipped);
}

#[test]
fn theorem_b_examples() {
    let v = suite_theorem_b(&ctx("quaternion(2)"), &cfg());
    assert_eq!(v.status, Status::Vacuous);
    assert_eq!(v.details.severity, Some(Severity::Info));
    assert!(v.details.notes.iter().any(|n| n.starts_with("info:")));

    let v = suite_theorem_b(&ctx("heisenberg(3)"), &cfg());
    assert_eq!(v.status, Status::Pass);
    assert!(v.instances.iter().all(|i| p_of(i, "m") == 3 && i.holds));

    let v = suite_theorem_b(&ctx("extraspecial(5,1,expP)"), &cfg());
    assert_eq!(v.status, Status::Pass);
    assert!(v.instances.iter().all(|i| p_of(i, "m") == 5));
    // ten unordered pairs of the four faithful characters, two with trivial central product
    assert_eq!(v.details.instance_count, 8);

    assert_eq!(suite_theorem_b(&ctx("symmetric(3)"), &cfg()).status, Status::Skipped);
}

/// theoremD hypothesis instances for irreducible `φ`, found through inner
/// products alone.
fn theorem_d_oracle(c: &GroupContext) -> Vec<(usize, usize, u64)> {
    let t = c.table();
    let g = t.group();
    let mut out = Vec::new();
    for &phi in c.faithful() {
        for psi in 0..t.len() {
            let prod = pointwise_product(t.character(phi), t.character(psi));
            let mults: Vec<u64> = t
                .characters()
                .iter()
                .map(|x| inner_product(g, &prod, x).unwrap().to_i64().unwrap() as u64)
                .collect();
            let gcd = mults.iter().fold(0, |a, b| num_integer::gcd(a, *b));
            let deg = |m: u64| -> u64 {
                mults.iter().zip(t.degrees()).map(|(n, d)| n / m * d).sum()
            };
            for m in 1..=gcd {
                if gcd % m == 0 && deg(m) <= t.degrees()[psi] {
                    out.push((phi, psi, m));
                }
            }
        }
    }
    out.sort();
    out
}

#[test]
fn theorem_d_matches_oracle_for_irreducible_phi() {
    let one = SuiteConfig {
        sum_bound: 1,
        max_recorded: usize::MAX,
        ..cfg()
    };
    for spec in ["cyclic(6)", "quaternion(2)", "heisenberg(3)", "dihedral(4)", "symmetric(3)", "extraspecial(3,1,expP2)"] {
        let c = ctx(spec);
        let v = suite_theorem_d(&c, &one);
        assert_ne!(v.status, Status::Fail, "{spec}");
        let mut found: Vec<(usize, usize, u64)> = v
            .instances
            .iter()
            .map(|i| {
                let phi = i.participants["phi"].as_array().unwrap()[0].as_u64().unwrap() as usize;
                (phi, p_of(i, "psi") as usize, p_of(i, "m"))
            })
            .collect();
        found.sort();
        assert_eq!(found, theorem_d_oracle(&c), "{spec}");
    }
}

#[test]
fn theorem_d_examples() {
    let v = suite_theorem_d(&ctx("cyclic(5)"), &cfg());
    assert_eq!(v.status, Status::Pass);

    // φ = ψ = χ2 in Q8 has Δ(1) = 4 > 2
    let c = ctx("quaternion(2)");
    let v = suite_theorem_d(&c, &SuiteConfig { sum_bound: 1, ..cfg() });
    assert_eq!(v.status, Status::Vacuous);

    let v = suite_theorem_d(&ctx("heisenberg(3)"), &SuiteConfig { sum_bound: 1, ..cfg() });
    assert_eq!(v.status, Status::Pass);
    for inst in &v.instances {
        assert_eq!(p_of(inst, "m"), 3);
        assert!(inst.conclusion["delta_irreducible"] && inst.conclusion["degrees_equal"]);
    }
}

#[test]
fn theorem_d_reducible_phi() {
    // φ = 2λ for faithful linear λ gives π = 2λψ and m* = 2
    let v = suite_theorem_d(&ctx("cyclic(3)"), &SuiteConfig { max_recorded: 1000, ..cfg() });
    assert_eq!(v.status, Status::Pass);
    let doubled = v
        .instances
        .iter()
        .filter(|i| i.participants["phi"].as_array().unwrap().len() == 2 && p_of(i, "m") == 2)
        .count();
    assert!(doubled > 0);
}

/// All normal subgroups by brute force over element subsets.
fn normal_subgroups_oracle(g: &Group) -> usize {
    let n = g.order();
    assert!(n <= 16);
    let mut count = 0;
    for mask in 0u32..(1 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let inside = |x: usize| mask >> x & 1 == 1;
        let closed = (0..n).all(|a| !inside(a) || (0..n).all(|b| !inside(b) || inside(g.mul(a, b))));
        let normal = (0..n).all(|a| !inside(a) || (0..n).all(|x| inside(g.conjugate(a, x))));
        if closed && normal {
            count += 1;
        }
    }
    count
}

#[test]
fn normal_subgroup_enumeration_is_complete() {
    for spec in ["quaternion(2)", "dihedral(4)", "abelian(2,4)", "symmetric(3)", "quaternion(4)"] {
        let c = ctx(spec);
        let found = normal_subgroups(c.group(), 512);
        assert!(!found.cap_hit);
        assert!(found.subgroups.iter().all(|h: &Subgroup| h.is_normal_in(c.group())));
        assert_eq!(found.subgroups.len(), normal_subgroups_oracle(c.group()), "{spec}");
    }
    let capped = normal_subgroups(ctx("abelian(2,2,2)").group(), 5);
    assert!(capped.cap_hit);
    assert_eq!(capped.subgroups.len(), 5);
}

#[test]
fn lemma21_examples() {
    assert_eq!(suite_lemma21(&ctx("abelian(3,3)"), &cfg()).status, Status::Vacuous);

    let c = ctx("quaternion(2)");
    let v = suite_lemma21(&c, &cfg());
    assert_eq!(v.status, Status::Pass);
    // χ2 with Z = center and each of the three cyclic Y of order 4
    let chi2 = 4;
    let hits = v
        .instances
        .iter()
        .filter(|i| p_of(i, "chi") == chi2 && i.hypothesis["z_order"] == 2 && i.hypothesis["y_order"] == 4)
        .count();
    assert_eq!(hits, 3);

    let v = suite_lemma21(&ctx("heisenberg(3)"), &cfg());
    assert_eq!(v.status, Status::Pass);
    assert_eq!(suite_lemma21(&ctx("symmetric(3)"), &cfg()).status, Status::Skipped);
}

#[test]
fn gauss_sum_examples() {
    let z3 = Cyclotomic::root(3, 1);
    assert_eq!(gauss_sum(3, 0, 1), &Cyclotomic::from_integer(2) + &z3);
    let z5 = |k| Cyclotomic::root(5, k);
    let expected = &(&Cyclotomic::from_integer(2) + &(&z5(1) + &z5(1))) + &z5(3);
    assert_eq!(gauss_sum(5, 0, 1), expected);
    let (re, im) = expected.to_complex();
    assert!((re * re + im * im - 5.0).abs() < 1e-9);
}

#[test]
fn lemma22_suite() {
    for p in [3, 5, 7] {
        let v = suite_lemma22(p, &cfg()).unwrap();
        assert_eq!(v.status, Status::Pass);
        assert_eq!(v.details.instance_count as u64, p * (p - 1));
    }
    assert!(matches!(suite_lemma22(2, &cfg()), Err(VerifyError::Precondition(_))));
    assert!(matches!(suite_lemma22(9, &cfg()), Err(VerifyError::Precondition(_))));
}

#[test]
fn theorem_tt_examples() {
    for spec in ["symmetric(3)", "symmetric(4)", "alternating(4)"] {
        let v = suite_theorem_tt(&ctx(spec), &cfg());
        assert_eq!(v.status, Status::Pass, "{spec}");
    }
    assert_eq!(suite_theorem_tt(&ctx("quaternion(2)"), &cfg()).status, Status::Vacuous);
}

#[test]
fn tally_keeps_failures_under_cap() {
    let mut t = Tally::new(SuiteId::TheoremB, "x", 2);
    t.push(Instance::new().conclude("a", true));
    t.push(Instance::new().conclude("a", true));
    t.push(Instance::new().conclude("a", false));
    let v = t.finish(Severity::EngineError, false);
    assert_eq!(v.status, Status::Fail);
    assert_eq!(v.details.severity, Some(Severity::EngineError));
    assert_eq!(v.instances.len(), 2);
    assert_eq!(v.failing().count(), 1);
    assert_eq!(v.details.instance_count, 3);
}

#[test]
fn corrupted_table_is_caught() {
    // Scaling a character breaks the product decomposition certificate.
    let c = ctx("heisenberg(3)");
    let mut t = c.table().clone();
    let last = t.len() - 1;
    let doubled = t.character(last).scale(&crate::cyclo::Rational::from_integer(2));
    t.characters_mut()[last] = doubled;
    let bad = GroupContext::new("heisenberg(3)", Arc::new(t));
    assert_eq!(suite_theorem_b(&bad, &cfg()).status, Status::Error);
}

#[test]
fn suite_ids_round_trip() {
    for id in SuiteId::ALL {
        assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
        assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.name()));
    }
    assert!("lemma23".parse::<SuiteId>().is_err());
}

#[test]
fn catalog_reading_and_errors() {
    let entries = read_catalog("# comment\n\ncyclic(3)  # trailing\nbogus(1)\n");
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0], CatalogEntry { line: 3, text: "cyclic(3)".into() });

    let cfg = ScanConfig {
        suites: vec![SuiteId::TheoremB, SuiteId::Lemma21],
        ..ScanConfig::default()
    };
    let r = run_catalog(&entries, &cfg);
    assert_eq!(r.verdicts.len(), 4);
    assert_eq!(r.verdicts[2].status, Status::Error);
    assert_eq!(r.exit_code(), 0);
    assert_eq!(r.summary["theoremB"].error, 1);

    let empty = run_catalog(&[], &cfg);
    assert!(empty.verdicts.is_empty());
    assert!(empty.summary.values().all(|c| *c == Counts::default()));
}

#[test]
fn report_is_deterministic_and_round_trips() {
    let entries = read_catalog("cyclic(4)\nquaternion(2)\nsymmetric(3)\nheisenberg(3)\ndihedral(4)\n");
    let one = run_catalog(&entries, &ScanConfig::default());
    let four = run_catalog(&entries, &ScanConfig { jobs: 4, ..ScanConfig::default() });
    assert_eq!(one.to_json_without_timings(), four.to_json_without_timings());
    assert_eq!(one.fail_count(), 0);
    let back: Report = serde_json::from_str(&one.to_json()).unwrap();
    assert_eq!(back, one);
    let total: usize = one
        .summary
        .values()
        .map(|c| c.pass + c.fail + c.vacuous + c.skipped + c.error)
        .sum();
    assert_eq!(total, one.verdicts.len());
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = TableCache::new(dir.path());
    let s: crate::groupkit::GroupSpec = "dihedral(5)".parse().unwrap();
    let g = Arc::new(build_group(&s, DEFAULT_SIZE_CAP).unwrap());
    let mut warnings = Vec::new();
    let (fresh, hit) = cache.table(&s.canonical(), g.clone(), &mut warnings).unwrap();
    assert!(!hit);
    let (again, hit) = cache.table(&s.canonical(), g.clone(), &mut warnings).unwrap();
    assert!(hit && warnings.is_empty());
    assert_eq!(fresh.characters(), again.characters());

    std::fs::write(cache.path_for(&s.canonical()), "charforge-table v1\ngarbage\n").unwrap();
    let (_, hit) = cache.table(&s.canonical(), g, &mut warnings).unwrap();
    assert!(!hit);
    assert_eq!(warnings.len(), 1);
    let _ = ClassFunction::trivial(1);
}
