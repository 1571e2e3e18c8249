use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use serde_json::json;

use crate::charops::{is_irreducible_on, ClassFunction};
use crate::cyclo::{Cyclotomic, Rational};
use crate::gflin::{is_prime, prime_factors};
use crate::groupkit::{normal_closure, subgroup_generated, Group, Subgroup};

use super::{
    GroupContext, Instance, Severity, Status, SuiteConfig, SuiteId, Tally, Verdict, VerifyError,
};

/// Runs a group suite; `lemma22` has no group and yields an error verdict.
pub fn run_suite(id: SuiteId, ctx: &GroupContext, cfg: &SuiteConfig) -> Verdict {
    match id {
        SuiteId::ConjectureA => suite_conjecture_a(ctx, cfg),
        SuiteId::TheoremB => suite_theorem_b(ctx, cfg),
        SuiteId::TheoremD => suite_theorem_d(ctx, cfg),
        SuiteId::Lemma21 => suite_lemma21(ctx, cfg),
        SuiteId::TheoremTt => suite_theorem_tt(ctx, cfg),
        SuiteId::Lemma22 => Verdict::error(id, ctx.spec(), "lemma22 takes a prime, not a group"),
    }
}

fn or_error(id: SuiteId, spec: &str, r: Result<Verdict, VerifyError>) -> Verdict {
    r.unwrap_or_else(|e| Verdict::error(id, spec, e.to_string()))
}

/// Faithful irreducibles whose product is a multiple of one irreducible must
/// both be fully ramified over the center.
pub fn suite_conjecture_a(ctx: &GroupContext, cfg: &SuiteConfig) -> Verdict {
    let id = SuiteId::ConjectureA;
    if ctx.faithful().is_empty() {
        return Verdict::new(id, ctx.spec(), Status::Skipped).note("no faithful irreducible character");
    }
    if !ctx.is_solvable() {
        return Verdict::new(id, ctx.spec(), Status::Skipped).note("group is not solvable");
    }
    let severity = if ctx.is_nilpotent() {
        Severity::EngineError
    } else {
        Severity::ConjectureCounterexample
    };
    or_error(id, ctx.spec(), ramified_products(id, ctx, cfg, severity))
}

/// The same check on p-groups, where it always holds.
pub fn suite_theorem_b(ctx: &GroupContext, cfg: &SuiteConfig) -> Verdict {
    let id = SuiteId::TheoremB;
    let Some(p) = ctx.p_group_prime() else {
        return Verdict::new(id, ctx.spec(), Status::Skipped).note("not a p-group");
    };
    if ctx.faithful().is_empty() {
        return Verdict::new(id, ctx.spec(), Status::Skipped).note("no faithful irreducible character");
    }
    let v = or_error(id, ctx.spec(), ramified_products(id, ctx, cfg, Severity::EngineError));
    v.note(format!("p = {p}"))
}

fn ramified_products(
    id: SuiteId,
    ctx: &GroupContext,
    cfg: &SuiteConfig,
    severity: Severity,
) -> Result<Verdict, VerifyError> {
    let products = ctx.products()?;
    let degrees = ctx.table().degrees();
    let faithful = ctx.faithful();
    let ramified = |i: usize| {
        ctx.fully_ramified(i)
            .map_err(|e| VerifyError::Precondition(format!("χ_{i}: {e}")))
    };
    let mut tally = Tally::new(id, ctx.spec(), cfg.max_recorded);
    let mut informational = 0usize;
    for (pos, &a) in faithful.iter().enumerate() {
        for &b in &faithful[pos..] {
            let (fa, fb) = (ramified(a)?, ramified(b)?);
            let Some((m, c)) = products.single_constituent(a, b) else {
                if fa.holds() && fb.holds() {
                    informational += 1;
                    if informational <= cfg.max_recorded {
                        tally.note(format!(
                            "info: χ_{a}·χ_{b} is not a multiple of an irreducible, \
                             yet both vanish off the center"
                        ));
                    }
                }
                continue;
            };
            let fc = ramified(c)?;
            let mut inst = Instance::new()
                .participant("phi", a)
                .participant("psi", b)
                .participant("chi", c)
                .participant("m", m)
                .hypothesis("m", m)
                .hypothesis("phi_degree", degrees[a])
                .hypothesis("psi_degree", degrees[b])
                .hypothesis("chi_degree", degrees[c])
                .hypothesis("center_order", center_size(ctx.group()))
                .conclude("degree_bookkeeping", m * degrees[c] == degrees[a] * degrees[b])
                .conclude("phi_vanishes_off_center", fa.vanishes_off_center)
                .conclude("phi_degree_form", fa.degree_form)
                .conclude("psi_vanishes_off_center", fb.vanishes_off_center)
                .conclude("psi_degree_form", fb.degree_form);
            // Forced by the two above; recorded for inspection only.
            inst.conclusion.insert("chi_vanishes_off_center".into(), fc.vanishes_off_center);
            inst.conclusion.insert("chi_degree_form".into(), fc.degree_form);
            tally.push(inst);
        }
    }
    let v = tally.finish(severity, false);
    Ok(mark_info(v, informational))
}

fn mark_info(mut v: Verdict, informational: usize) -> Verdict {
    if informational > 0 && v.details.severity.is_none() {
        v.details.severity = Some(Severity::Info);
    }
    v
}

fn center_size(g: &Group) -> usize {
    g.classes().sizes.iter().filter(|s| **s == 1).count()
}

/// Values and centers of `φ = Σ χ_a`, computed once per candidate.
struct SumCharacter {
    values: Vec<Cyclotomic>,
    /// `Z(φ)` as a class set.
    center: Vec<bool>,
}

impl SumCharacter {
    fn new(ctx: &GroupContext, phi: &[usize]) -> Self {
        if phi.iter().all(|a| *a == phi[0]) {
            let r = Rational::from_integer(phi.len() as i64);
            let chi = ctx.table().character(phi[0]);
            return SumCharacter {
                values: chi.values().iter().map(|v| v.scale(&r)).collect(),
                center: ctx.centers()[phi[0]].clone(),
            };
        }
        let k = ctx.table().len();
        let mut values = vec![Cyclotomic::zero(); k];
        for &a in phi {
            for (v, x) in values.iter_mut().zip(ctx.table().character(a).values()) {
                *v = &*v + x;
            }
        }
        let f = ClassFunction::new(values);
        let norms = f.norms_squared();
        let center = norms.iter().map(|n| *n == norms[0]).collect();
        SumCharacter {
            values: f.values().to_vec(),
            center,
        }
    }
}

/// Nondecreasing tuples of length `1..=bound` over `0..k`.
fn multisets(k: usize, bound: usize) -> Vec<Vec<usize>> {
    fn extend(k: usize, bound: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == bound {
            return;
        }
        let start = cur.last().copied().unwrap_or(0);
        for a in start..k {
            cur.push(a);
            extend(k, bound, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(k, bound, &mut Vec::new(), &mut out);
    out
}

/// Faithful `φ` (sums of at most `sum_bound` irreducibles) times irreducible
/// `ψ`, factored as `m·Δ` with `Δ(1) ≤ ψ(1)`.
pub fn suite_theorem_d(ctx: &GroupContext, cfg: &SuiteConfig) -> Verdict {
    let id = SuiteId::TheoremD;
    if cfg.sum_bound == 0 {
        return Verdict::error(id, ctx.spec(), "sum bound must be at least 1");
    }
    or_error(id, ctx.spec(), theorem_d(ctx, cfg))
}

fn theorem_d(ctx: &GroupContext, cfg: &SuiteConfig) -> Result<Verdict, VerifyError> {
    let id = SuiteId::TheoremD;
    let t = ctx.table();
    let k = t.len();
    let degrees = t.degrees();
    let kernels = ctx.kernels();
    let norms = ctx.norms();
    let central = ctx.central_classes();

    let candidates: Vec<Vec<usize>> = multisets(k, cfg.sum_bound)
        .into_iter()
        .filter(|phi| (1..k).all(|j| !phi.iter().all(|&a| kernels[a][j])))
        .collect();
    if candidates.is_empty() {
        return Ok(Verdict::new(id, ctx.spec(), Status::Skipped)
            .note(format!("no faithful sum of at most {} irreducibles", cfg.sum_bound)));
    }
    let products = ctx.products()?;
    let mut tally = Tally::new(id, ctx.spec(), cfg.max_recorded);
    for phi in &candidates {
        let phi_deg: u64 = phi.iter().map(|&a| degrees[a]).sum();
        let mut sum: Option<SumCharacter> = None;
        for psi in 0..k {
            let pi = products.sum_row(phi, psi);
            let m_star = pi.iter().filter(|n| **n > 0).fold(0u64, |g, n| g.gcd(n));
            for m in (phi_deg..=m_star).filter(|m| m_star % m == 0) {
                let phi_vals = sum.get_or_insert_with(|| SumCharacter::new(ctx, phi));
                let delta: Vec<u64> = pi.iter().map(|n| n / m).collect();
                let delta_deg: u64 = delta.iter().zip(&degrees).map(|(n, d)| n * d).sum();
                let mut nz = delta.iter().enumerate().filter(|(_, n)| **n > 0);
                let irreducible = match (nz.next(), nz.next()) {
                    (Some((c, 1)), None) => Some(c),
                    _ => None,
                };
                let reducible;
                let (delta_vals, delta_norms): (&[Cyclotomic], &[Cyclotomic]) = match irreducible {
                    Some(c) => (t.character(c).values(), &norms[c]),
                    None => {
                        let f = crate::charops::reconstruct(&delta, t);
                        let n = f.norms_squared();
                        reducible = (f, n);
                        (reducible.0.values(), &reducible.1)
                    }
                };
                let psi_vals = t.character(psi).values();
                let norms_match = delta_norms == &norms[psi][..];
                let off_z_phi = (0..k)
                    .filter(|&j| !phi_vals.center[j])
                    .all(|j| phi_vals.values[j].is_zero() && psi_vals[j].is_zero());
                let off_center = (0..k).filter(|&j| !central[j]).all(|j| {
                    phi_vals.values[j].is_zero() && psi_vals[j].is_zero() && delta_vals[j].is_zero()
                });
                let mut inst = Instance::new()
                    .participant("phi", phi.clone())
                    .participant("psi", psi)
                    .participant("delta", json!(delta_repr(&delta, irreducible)))
                    .participant("m", m)
                    .hypothesis("m", m)
                    .hypothesis("m_star", m_star)
                    .hypothesis("phi_degree", phi_deg)
                    .hypothesis("psi_degree", degrees[psi])
                    .hypothesis("delta_degree", delta_deg)
                    .conclude("delta_irreducible", irreducible.is_some())
                    .conclude("delta_degree_equals_psi", delta_deg == degrees[psi])
                    .conclude("norms_match", norms_match)
                    .conclude("phi_psi_vanish_off_z_phi", off_z_phi)
                    .conclude("all_vanish_off_center", off_center);
                if phi.len() == 1 {
                    inst = inst.conclude(
                        "degrees_equal",
                        phi_deg == degrees[psi] && delta_deg == degrees[psi],
                    );
                }
                tally.push(inst);
            }
        }
    }
    Ok(tally
        .finish(Severity::EngineError, false)
        .note(format!("{} faithful candidates for φ", candidates.len())))
}

/// An irreducible `Δ` is named by index, otherwise by its multiplicities.
fn delta_repr(delta: &[u64], irreducible: Option<usize>) -> serde_json::Value {
    match irreducible {
        Some(c) => json!(c),
        None => json!(delta),
    }
}

/// Normal subgroups found by joining normal closures of single elements.
#[derive(Debug, Clone)]
pub struct NormalSubgroups {
    pub subgroups: Vec<Subgroup>,
    /// Class membership of each subgroup.
    pub class_sets: Vec<Vec<bool>>,
    /// True when enumeration stopped at the cap.
    pub cap_hit: bool,
}

pub fn normal_subgroups(g: &Group, cap: usize) -> NormalSubgroups {
    let classes = g.classes();
    let class_set = |h: &Subgroup| -> Vec<bool> {
        classes.reps.iter().map(|&r| h.contains(r)).collect()
    };
    let mut out = NormalSubgroups {
        subgroups: Vec::new(),
        class_sets: Vec::new(),
        cap_hit: false,
    };
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut add = |h: Subgroup, out: &mut NormalSubgroups| -> bool {
        let set = class_set(&h);
        if seen.contains(&set) {
            return true;
        }
        if out.subgroups.len() >= cap {
            out.cap_hit = true;
            return false;
        }
        seen.insert(set.clone());
        out.subgroups.push(h);
        out.class_sets.push(set);
        true
    };
    for &r in &classes.reps {
        if !add(normal_closure(g, &[r]), &mut out) {
            return out;
        }
    }
    let mut i = 0;
    while i < out.subgroups.len() {
        for j in 0..i {
            let (a, b) = (&out.class_sets[i], &out.class_sets[j]);
            if subset(a, b) || subset(b, a) {
                continue;
            }
            let gens: Vec<usize> = out.subgroups[i]
                .generators
                .iter()
                .chain(&out.subgroups[j].generators)
                .copied()
                .collect();
            if !add(subgroup_generated(g, &gens), &mut out) {
                return out;
            }
        }
        i += 1;
    }
    out
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(x, y)| !*x || *y)
}

/// In a p-group, `χ` vanishes on `Y − Z` whenever `Z ⊆ Z(χ)`, `Y ⊄ Z(χ)` and
/// `|Y : Z| = p`.
pub fn suite_lemma21(ctx: &GroupContext, cfg: &SuiteConfig) -> Verdict {
    let id = SuiteId::Lemma21;
    let Some(p) = ctx.p_group_prime() else {
        return Verdict::new(id, ctx.spec(), Status::Skipped).note("not a p-group");
    };
    let g = ctx.group();
    let t = ctx.table();
    let normals = normal_subgroups(g, cfg.normal_cap);
    let n = normals.subgroups.len();
    let mut pairs = Vec::new();
    for y in 0..n {
        for z in 0..n {
            let (ys, zs) = (&normals.subgroups[y], &normals.subgroups[z]);
            if ys.order == zs.order * p as usize && subset(&normals.class_sets[z], &normals.class_sets[y]) {
                pairs.push((z, y));
            }
        }
    }
    let centers = ctx.centers();
    let mut tally = Tally::new(id, ctx.spec(), cfg.max_recorded);
    for chi in 0..t.len() {
        let zc = &centers[chi];
        for &(z, y) in &pairs {
            let (zset, yset) = (&normals.class_sets[z], &normals.class_sets[y]);
            if !subset(zset, zc) || subset(yset, zc) {
                continue;
            }
            let diff: Vec<usize> = (0..t.len()).filter(|&j| yset[j] && !zset[j]).collect();
            let vanishes = diff.iter().all(|&j| t.character(chi).value(j).is_zero());
            tally.push(
                Instance::new()
                    .participant("chi", chi)
                    .participant("z_classes", members(zset))
                    .participant("y_classes", members(yset))
                    .hypothesis("z_order", normals.subgroups[z].order)
                    .hypothesis("y_order", normals.subgroups[y].order)
                    .hypothesis("chi_degree", t.degrees()[chi])
                    .conclude("vanishes_on_y_minus_z", vanishes),
            );
        }
    }
    let mut v = tally.finish(Severity::EngineError, false);
    v.details
        .notes
        .push(format!("{n} normal subgroups, p = {p}"));
    if normals.cap_hit {
        v.details
            .notes
            .push(format!("normal subgroup cap {} reached; enumeration incomplete", cfg.normal_cap));
    }
    v
}

fn members(set: &[bool]) -> Vec<usize> {
    (0..set.len()).filter(|&j| set[j]).collect()
}

/// `Σ_{i<p} ζ_p^{a·i + b·i(i−1)/2}`, exactly.
pub fn gauss_sum(p: u64, a: u64, b: u64) -> Cyclotomic {
    let mut counts = vec![Rational::zero(); p as usize];
    for i in 0..p {
        let tri = (i * i.saturating_sub(1) / 2) % p;
        let exp = ((a % p) * i + (b % p) * tri) % p;
        counts[exp as usize] = &counts[exp as usize] + &Rational::one();
    }
    Cyclotomic::from_power_sum(p as usize, &counts)
}

/// Every sum `Σ ε^i δ^{i(i−1)/2}` with `δ ≠ 1` has norm exactly `p`.
pub fn suite_lemma22(p: u64, cfg: &SuiteConfig) -> Result<Verdict, VerifyError> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(VerifyError::Precondition(format!("p = {p} is not an odd prime")));
    }
    let spec = format!("p={p}");
    let target = Cyclotomic::from_integer(p as i64);
    let mut tally = Tally::new(SuiteId::Lemma22, &spec, cfg.max_recorded);
    for a in 0..p {
        for b in 1..p {
            let s = gauss_sum(p, a, b);
            let norm = s.norm_squared();
            tally.push(
                Instance::new()
                    .participant("epsilon_exponent", a)
                    .participant("delta_exponent", b)
                    .hypothesis("sum", s.to_string())
                    .hypothesis("norm_squared", norm.to_string())
                    .conclude("norm_equals_p", norm == target),
            );
        }
    }
    Ok(tally.finish(Severity::EngineError, false))
}

/// On a non-nilpotent group, no faithful `φ, ψ` with `φψ = mχ` restrict
/// irreducibly, all three, to a Sylow subgroup.
pub fn suite_theorem_tt(ctx: &GroupContext, cfg: &SuiteConfig) -> Verdict {
    let id = SuiteId::TheoremTt;
    if ctx.is_nilpotent() {
        return Verdict::new(id, ctx.spec(), Status::Vacuous).note("group is nilpotent");
    }
    or_error(id, ctx.spec(), theorem_tt(ctx, cfg))
}

fn theorem_tt(ctx: &GroupContext, cfg: &SuiteConfig) -> Result<Verdict, VerifyError> {
    let id = SuiteId::TheoremTt;
    let g = ctx.group();
    let t = ctx.table();
    let products = ctx.products()?;
    let faithful = ctx.faithful();
    let primes = prime_factors(g.order() as u64);
    let mut restricted: HashMap<(usize, u64), bool> = HashMap::new();
    let mut irreducible_on = |chi: usize, p: u64| -> Result<bool, VerifyError> {
        if let Some(r) = restricted.get(&(chi, p)) {
            return Ok(*r);
        }
        let sylow = ctx.sylow(p);
        let r = is_irreducible_on(g, t.character(chi), &sylow)
            .map_err(|e| VerifyError::Precondition(e.to_string()))?;
        restricted.insert((chi, p), r);
        Ok(r)
    };
    let mut tally = Tally::new(id, ctx.spec(), cfg.max_recorded);
    let degrees = t.degrees();
    for (pos, &a) in faithful.iter().enumerate() {
        for &b in &faithful[pos..] {
            let Some((m, c)) = products.single_constituent(a, b) else {
                continue;
            };
            for &p in &primes {
                let flags = [irreducible_on(a, p)?, irreducible_on(b, p)?, irreducible_on(c, p)?];
                let mut inst = Instance::new()
                    .participant("phi", a)
                    .participant("psi", b)
                    .participant("chi", c)
                    .participant("m", m)
                    .hypothesis("p", p)
                    .hypothesis("sylow_order", ctx.sylow(p).order)
                    .hypothesis("phi_degree", degrees[a])
                    .hypothesis("psi_degree", degrees[b])
                    .hypothesis("chi_degree", degrees[c])
                    .conclude("not_all_irreducible_on_sylow", !flags.iter().all(|f| *f));
                for (key, f) in ["phi", "psi", "chi"].iter().zip(flags) {
                    inst.conclusion.insert(format!("{key}_irreducible_on_sylow"), f);
                }
                tally.push(inst);
            }
        }
    }
    let count = tally.verdict.details.instance_count;
    let mut v = tally.finish(Severity::EngineError, true);
    if count == 0 {
        v.details
            .notes
            .push("no faithful pair has a product that is a multiple of an irreducible".into());
    }
    Ok(v)
}
