//! End-to-end acceptance run. Runs without the libtest harness so the
//! per-criterion lines always print; exits nonzero if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use charforge::chartable::{character_table, character_table_with_field, next_field, verify_orthogonality, CharacterTable};
use charforge::cyclo::Cyclotomic;
use charforge::groupkit::{build_group, parse_group_spec, Group, DEFAULT_SIZE_CAP};
use charforge::verify::{
    read_catalog, run_catalog, suite_lemma22, CatalogEntry, Report, ScanConfig, Status, SuiteConfig, SuiteId,
};

const CATALOG: &str = include_str!("../catalog/default.txt");

fn catalog() -> Vec<CatalogEntry> {
    read_catalog(CATALOG)
}

fn table_of(spec: &str) -> CharacterTable {
    let g = build_group(&parse_group_spec(spec).unwrap(), DEFAULT_SIZE_CAP).unwrap();
    character_table(Arc::new(g)).unwrap()
}

fn scan(suites: &[SuiteId], jobs: usize) -> Report {
    let cfg = ScanConfig {
        suites: suites.to_vec(),
        jobs,
        ..ScanConfig::default()
    };
    run_catalog(&catalog(), &cfg)
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).unwrap();
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn criterion_gauss_sums() -> Outcome {
    let cfg = SuiteConfig::default();
    for p in [3u64, 5, 7, 11, 13] {
        let v = suite_lemma22(p, &cfg).map_err(|e| e.to_string())?;
        if v.status != Status::Pass || v.details.instance_count != (p * (p - 1)) as usize {
            return Err(format!("p = {p}: status {} with {} instances", v.status, v.details.instance_count));
        }
        // Independent recomputation as a product of roots of unity.
        let target = Cyclotomic::from_integer(p as i64);
        let zeta = Cyclotomic::root(p as usize, 1);
        for a in 0..p {
            for b in 1..p {
                let eps = pow(&zeta, a);
                let delta = pow(&zeta, b);
                let mut s = Cyclotomic::zero();
                for i in 0..p {
                    s = s + pow(&eps, i) * pow(&delta, i * (i.max(1) - 1) / 2);
                }
                if s.norm_squared() != target {
                    return Err(format!("p = {p}, ({a}, {b}): |sum|^2 = {}", s.norm_squared()));
                }
            }
        }
    }
    Ok("all p(p-1) pairs have |sum|^2 = p for p in {3,5,7,11,13}".into())
}

fn pow(x: &Cyclotomic, k: u64) -> Cyclotomic {
    (0..k).fold(Cyclotomic::one(), |acc, _| acc * x.clone())
}

fn criterion_p_groups() -> Outcome {
    let entries: Vec<CatalogEntry> = catalog()
        .into_iter()
        .filter(|e| {
            let g = build_group(&parse_group_spec(&e.text).unwrap(), DEFAULT_SIZE_CAP).unwrap();
            is_prime_power(g.order())
        })
        .collect();
    let cfg = ScanConfig {
        suites: vec![SuiteId::TheoremB],
        ..ScanConfig::default()
    };
    let report = run_catalog(&entries, &cfg);
    if report.fail_count() > 0 || report.summary.values().any(|c| c.error > 0) {
        return Err(format!("{} fails in {} groups", report.fail_count(), entries.len()));
    }
    let required = [
        ("heisenberg(3)", 3u64),
        ("extraspecial(3,1,expP2)", 3),
        ("extraspecial(5,1,expP)", 5),
        ("extraspecial(7,1,expP)", 7),
    ];
    for (spec, p) in required {
        let canonical = parse_group_spec(spec).unwrap().canonical();
        let v = report
            .verdicts
            .iter()
            .find(|v| v.spec == canonical)
            .ok_or(format!("{spec} missing from the catalog"))?;
        let good = v.instances.iter().any(|inst| {
            let h = |k: &str| inst.hypothesis[k].as_u64().unwrap();
            let order = h("center_order") * p * p;
            inst.holds
                && h("m") == p
                && h("phi_degree") * h("phi_degree") * h("center_order") == order
                && h("psi_degree") * h("psi_degree") * h("center_order") == order
                && inst.conclusion["phi_degree_form"]
                && inst.conclusion["psi_degree_form"]
        });
        if v.status != Status::Pass || !good {
            return Err(format!("{spec}: no instance with m = p and fully ramified participants"));
        }
    }
    Ok(format!("{} p-groups, zero fails, 4 required instances found", entries.len()))
}

fn criterion_tables(tables: &[(String, CharacterTable)]) -> Outcome {
    for (spec, t) in tables {
        let check = verify_orthogonality(t);
        if !check.passed {
            return Err(format!("{spec}: {:?}", check.failure));
        }
    }
    Ok(format!("{} catalog tables pass every exact check", tables.len()))
}

/// Finds a bijection of rows and a class-invariant-preserving bijection of
/// columns carrying `expected` onto the computed table.
fn matches_up_to_order(t: &CharacterTable, expected: &[Vec<Cyclotomic>], invariants: &[(u64, usize)]) -> bool {
    let g = t.group();
    let classes = g.classes();
    let k = classes.len();
    if expected.len() != k || invariants.len() != k {
        return false;
    }
    let actual: Vec<(u64, usize)> = (0..k)
        .map(|j| (g.element_order(classes.reps[j]), classes.sizes[j]))
        .collect();
    let mut perm = vec![usize::MAX; k];
    let mut used = vec![false; k];
    search_columns(0, &mut perm, &mut used, t, expected, invariants, &actual)
}

fn search_columns(
    col: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    t: &CharacterTable,
    expected: &[Vec<Cyclotomic>],
    invariants: &[(u64, usize)],
    actual: &[(u64, usize)],
) -> bool {
    let k = perm.len();
    if col == k {
        let mut taken = vec![false; k];
        return expected.iter().all(|row| {
            let hit = (0..k).find(|&i| !taken[i] && (0..k).all(|j| t.character(i).value(perm[j]) == &row[j]));
            hit.map(|i| taken[i] = true).is_some()
        });
    }
    for j in 0..k {
        if !used[j] && actual[j] == invariants[col] {
            used[j] = true;
            perm[col] = j;
            if search_columns(col + 1, perm, used, t, expected, invariants, actual) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

fn int(n: i64) -> Cyclotomic {
    Cyclotomic::from_integer(n)
}

fn ints(v: &[i64]) -> Vec<Cyclotomic> {
    v.iter().map(|&n| int(n)).collect()
}

fn criterion_golden() -> Outcome {
    for n in 1..=12usize {
        let t = table_of(&format!("cyclic({n})"));
        let g = t.group();
        let gen = *g.generators().first().unwrap_or(&0);
        let classes = g.classes();
        // chi_a(gen^j) = zeta_n^(aj), laid out in class order.
        let mut col_of_power = vec![0usize; n];
        for (j, c) in col_of_power.iter_mut().enumerate() {
            *c = classes.class_of[g.pow(gen, j as u64)];
        }
        for a in 0..n {
            let found = (0..t.len()).any(|i| {
                (0..n).all(|j| t.character(i).value(col_of_power[j]) == &Cyclotomic::root(n, (a * j) as i64))
            });
            if !found {
                return Err(format!("cyclic({n}): missing character {a}"));
            }
        }
        if t.len() != n {
            return Err(format!("cyclic({n}): {} characters", t.len()));
        }
    }
    let s3 = [ints(&[1, 1, 1]), ints(&[1, -1, 1]), ints(&[2, 0, -1])];
    if !matches_up_to_order(&table_of("symmetric(3)"), &s3, &[(1, 1), (2, 3), (3, 2)]) {
        return Err("symmetric(3) differs from the hand table".into());
    }
    // Classes: 1, z, then three classes of order-4 elements (Q8) or
    // two reflection classes and the rotation class (D8).
    let q8 = [
        ints(&[1, 1, 1, 1, 1]),
        ints(&[1, 1, 1, -1, -1]),
        ints(&[1, 1, -1, 1, -1]),
        ints(&[1, 1, -1, -1, 1]),
        ints(&[2, -2, 0, 0, 0]),
    ];
    if !matches_up_to_order(&table_of("quaternion(2)"), &q8, &[(1, 1), (2, 1), (4, 2), (4, 2), (4, 2)]) {
        return Err("Q8 differs from the hand table".into());
    }
    if !matches_up_to_order(&table_of("dihedral(4)"), &q8, &[(1, 1), (2, 1), (4, 2), (2, 2), (2, 2)]) {
        return Err("D8 differs from the hand table".into());
    }
    Ok("cyclic(1..12), S3, Q8 and D8 match hand tables".into())
}

fn criterion_theorem_d() -> Outcome {
    let report = scan(&[SuiteId::TheoremD], 1);
    let n = report.verdicts.len();
    let instances: usize = report.verdicts.iter().map(|v| v.details.instance_count).sum();
    let errors: usize = report.summary.values().map(|c| c.error).sum();
    if report.fail_count() > 0 || errors > 0 {
        return Err(format!("{} fails, {errors} errors", report.fail_count()));
    }
    Ok(format!("{n} groups, {instances} instances, zero fails"))
}

fn criterion_theorem_tt() -> Outcome {
    let entries = read_catalog("symmetric(3)\nsymmetric(4)\nalternating(4)\nalternating(5)\n");
    let cfg = ScanConfig {
        suites: vec![SuiteId::TheoremTt],
        ..ScanConfig::default()
    };
    let report = run_catalog(&entries, &cfg);
    let bad: Vec<&str> = report
        .verdicts
        .iter()
        .filter(|v| matches!(v.status, Status::Fail | Status::Error))
        .map(|v| v.spec.as_str())
        .collect();
    if !bad.is_empty() || report.verdicts.len() != 4 {
        return Err(format!("failing: {bad:?}"));
    }
    Ok("S3, S4, A4, A5 have zero fails".into())
}

fn criterion_determinism() -> Outcome {
    let one = scan(&SuiteId::ALL, 1).to_json_without_timings();
    let four = scan(&SuiteId::ALL, 4).to_json_without_timings();
    if one != four {
        return Err("reports differ between jobs = 1 and jobs = 4".into());
    }
    Ok(format!("jobs 1 and 4 give identical {}-byte reports", one.len()))
}

fn criterion_field_independence(tables: &[(String, CharacterTable)]) -> Outcome {
    let picks = ["heisenberg(3)", "symmetric(4)", "alternating(5)"];
    for spec in picks {
        let canonical = parse_group_spec(spec).unwrap().canonical();
        let (_, t) = tables
            .iter()
            .find(|(s, _)| *s == canonical)
            .ok_or(format!("{spec} missing from the catalog"))?;
        let field = next_field(t.group(), t.field()).map_err(|e| e.to_string())?;
        let q = field.q;
        let again = character_table_with_field(t.group_arc().clone(), field).map_err(|e| e.to_string())?;
        if again.characters() != t.characters() {
            return Err(format!("{spec}: table over q = {q} differs"));
        }
    }
    Ok("heisenberg(3), symmetric(4), alternating(5) agree over the next prime".into())
}

fn main() {
    let started = Instant::now();
    let tables: Vec<(String, CharacterTable)> = catalog()
        .iter()
        .map(|e| {
            let spec = parse_group_spec(&e.text).unwrap();
            let g: Group = build_group(&spec, DEFAULT_SIZE_CAP).unwrap();
            (spec.canonical(), character_table(Arc::new(g)).unwrap())
        })
        .collect();

    let results: Vec<Criterion> = vec![
        ("gauss sums", Box::new(criterion_gauss_sums)),
        ("p-group fully ramified products", Box::new(criterion_p_groups)),
        ("table validity", Box::new(|| criterion_tables(&tables))),
        ("golden tables", Box::new(criterion_golden)),
        ("sums of irreducibles", Box::new(criterion_theorem_d)),
        ("sylow restriction", Box::new(criterion_theorem_tt)),
        ("determinism", Box::new(criterion_determinism)),
        ("field independence", Box::new(|| criterion_field_independence(&tables))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in results.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {} ({name}): PASS in {secs:.1}s: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL in {secs:.1}s: {msg}", i + 1);
            }
        }
    }
    println!("acceptance total {:.1}s", started.elapsed().as_secs_f64());
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
