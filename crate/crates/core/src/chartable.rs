//! Character tables by the Dixon–Schneider method.
//!
//! Class matrices are diagonalized simultaneously over a prime field
//! `F_q` with `q = 1 (mod exp G)`. Each common eigenvector gives the central
//! character `ω_χ`, from which the degree and the values of `χ` mod `q` are
//! recovered; the power maps then lift those values to exact sums of
//! `exp(G)`-th roots of unity.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::charops::{inner_product, ClassFunction};
use crate::cyclo::{l1_norm, reduction_growth, Cyclotomic, Embeddings, Rational};
use crate::gflin::{choose_field, eigen_split_with, field_above, GfError, MatrixGF, PrimeField};
use crate::groupkit::Group;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("no degree squares to {residue} mod {q} (eigenvector {vector})")]
    DegreeRecovery { vector: usize, residue: u64, q: u64 },
    #[error("lift multiplicity {multiplicity} exceeds degree {degree} (class {class}, eigenvector {vector})")]
    Lift {
        vector: usize,
        class: usize,
        multiplicity: u64,
        degree: u64,
    },
    #[error("field q = {q}, e = {e} is unusable for a group of order {order} and exponent {exponent}")]
    BadField { q: u64, e: u64, order: usize, exponent: u64 },
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: Arc<Group>,
    characters: Vec<ClassFunction>,
    field: PrimeField,
    /// Character values mod `q`, row-aligned with `characters`.
    modular: Vec<Vec<u64>>,
}

impl CharacterTable {
    /// Assembles a table without validation; see [`verify_orthogonality`].
    pub fn from_parts(
        group: Arc<Group>,
        characters: Vec<ClassFunction>,
        field: PrimeField,
        modular: Vec<Vec<u64>>,
    ) -> Self {
        CharacterTable {
            group,
            characters,
            field,
            modular,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn characters(&self) -> &[ClassFunction] {
        &self.characters
    }

    pub fn character(&self, i: usize) -> &ClassFunction {
        &self.characters[i]
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn modular(&self) -> &[Vec<u64>] {
        &self.modular
    }

    /// The exponent of the group, which bounds every value's conductor.
    pub fn conductor(&self) -> u64 {
        self.group.exponent()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.characters
            .iter()
            .map(|c| c.degree_u64().expect("character degrees are positive integers"))
            .collect()
    }

    /// Mutable access for fault-injection tests.
    #[doc(hidden)]
    pub fn characters_mut(&mut self) -> &mut Vec<ClassFunction> {
        &mut self.characters
    }
}

/// `(M_i)_{jk} = #{x ∈ C_i : x⁻¹·rep_k ∈ C_j}`, unreduced.
pub fn class_matrix(g: &Group, i: usize) -> MatrixGF {
    let classes = g.classes();
    let k = classes.len();
    let mut entries = vec![0u64; k * k];
    for &x in &classes.members[i] {
        let xi = g.inv(x);
        for (col, &r) in classes.reps.iter().enumerate() {
            let j = classes.class_of[g.mul(xi, r)];
            entries[j * k + col] += 1;
        }
    }
    MatrixGF { dim: k, entries }
}

pub fn class_matrices(g: &Group) -> Vec<MatrixGF> {
    (0..g.classes().len()).map(|i| class_matrix(g, i)).collect()
}

pub fn character_table(g: Arc<Group>) -> Result<CharacterTable, TableError> {
    let field = choose_field(g.exponent(), g.order() as u64)?;
    character_table_with_field(g, field)
}

/// The next valid prime after the one [`character_table`] would use.
pub fn next_field(g: &Group, after: &PrimeField) -> Result<PrimeField, TableError> {
    Ok(field_above(g.exponent(), after.q)?)
}

pub fn character_table_with_field(g: Arc<Group>, field: PrimeField) -> Result<CharacterTable, TableError> {
    let f = field;
    let n = g.order() as u64;
    let e = g.exponent();
    let root = (n as f64).sqrt().floor() as u64;
    if f.e != e || !(f.q - 1).is_multiple_of(e) || f.q <= 2 * root {
        return Err(TableError::BadField {
            q: f.q,
            e: f.e,
            order: g.order(),
            exponent: e,
        });
    }
    let classes = g.classes();
    let k = classes.len();
    let q = f.q;
    let vectors = eigen_split_with(
        k,
        k,
        |i| {
            let m = class_matrix(&g, i);
            MatrixGF::new(k, m.entries, q)
        },
        &f,
    )?;

    let size_inv: Vec<u64> = classes.sizes.iter().map(|s| f.inv(*s as u64 % q)).collect();
    let z_inv = f.inv(f.z);
    let e_inv = f.inv(e % q);
    let mut rows: Vec<(u64, ClassFunction, Vec<u64>)> = Vec::with_capacity(k);
    for (vi, omega) in vectors.iter().enumerate() {
        // Σ_j ω_j ω_j' / |C_j| = |G| / χ(1)²
        let s = (0..k).fold(0, |acc, j| {
            let t = f.mul(f.mul(omega[j], omega[classes.inverse_class[j]]), size_inv[j]);
            f.add(acc, t)
        });
        let residue = f.mul(n % q, f.inv(s));
        let degree = (1..=q / 2)
            .find(|d| f.mul(*d, *d) == residue)
            .ok_or(TableError::DegreeRecovery {
                vector: vi,
                residue,
                q,
            })?;
        let theta: Vec<u64> = (0..k)
            .map(|j| f.mul(f.mul(omega[j], degree), size_inv[j]))
            .collect();
        let mut values = Vec::with_capacity(k);
        for j in 0..k {
            let mut mults = Vec::with_capacity(e as usize);
            for kk in 0..e {
                let step = f.pow(z_inv, kk);
                let mut acc = 0;
                let mut w = 1;
                for s in 0..e {
                    acc = f.add(acc, f.mul(theta[classes.power_class(j, s)], w));
                    w = f.mul(w, step);
                }
                let mu = f.mul(acc, e_inv);
                if mu > degree {
                    return Err(TableError::Lift {
                        vector: vi,
                        class: j,
                        multiplicity: mu,
                        degree,
                    });
                }
                mults.push(Rational::from_integer(mu as i64));
            }
            values.push(Cyclotomic::from_power_sum(e as usize, &mults));
        }
        rows.push((degree, ClassFunction::new(values), theta));
    }
    let e = e as usize;
    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| value_order(&a.1, &b.1, e)));
    let (characters, modular) = rows.into_iter().map(|(_, c, t)| (c, t)).unzip();
    Ok(CharacterTable {
        group: g,
        characters,
        field: f,
        modular,
    })
}

/// Rows with larger values (coefficient-wise lexicographic in `Q(ζ_e)`) first,
/// which puts the trivial character at the top.
fn value_order(a: &ClassFunction, b: &ClassFunction, e: usize) -> Ordering {
    for (x, y) in a.values().iter().zip(b.values()) {
        match y.cmp_in(x, e) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Outcome of the exact self-checks on a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCheck {
    pub passed: bool,
    pub relations_checked: usize,
    /// The first relation that failed, by name.
    pub failure: Option<String>,
}

/// Exact checks: `Σ χ(1)² = |G|`, row and column orthogonality,
/// `χ(g⁻¹) = conj χ(g)`, and that reducing each lifted value mod `q`
/// reproduces the modular value it was lifted from.
pub fn verify_orthogonality(t: &CharacterTable) -> TableCheck {
    let mut checked = 0usize;
    let fail = |name: String, checked| TableCheck {
        passed: false,
        relations_checked: checked,
        failure: Some(name),
    };
    let g = t.group();
    let classes = g.classes();
    let k = classes.len();
    if t.characters.len() != k {
        return fail(format!("count: {} characters for {k} classes", t.characters.len()), 0);
    }

    let degree_sum = t
        .characters
        .iter()
        .fold(Cyclotomic::zero(), |acc, c| &acc + &c.degree().norm_squared());
    checked += 1;
    if degree_sum != Cyclotomic::from_integer(g.order() as i64) {
        return fail(format!("degree-sum: Σ χ(1)² = {degree_sum} ≠ {}", g.order()), checked);
    }

    match orthogonality_by_embeddings(t) {
        Some(Ok(n)) => checked += n,
        Some(Err(name)) => return fail(name, checked),
        None => {
            if let Err((name, n)) = orthogonality_exact(t) {
                return fail(name, checked + n);
            }
            checked += k * (k + 1);
        }
    }

    let conj: Vec<ClassFunction> = t.characters.iter().map(ClassFunction::conjugate).collect();
    for (i, (c, cc)) in t.characters.iter().zip(&conj).enumerate() {
        for j in 0..k {
            checked += 1;
            if *c.value(classes.inverse_class[j]) != *cc.value(j) {
                return fail(format!("inverse-class(χ_{i}, class {j})"), checked);
            }
        }
    }

    let f = &t.field;
    if t.modular.len() != k {
        return fail("lift: modular rows missing".into(), checked);
    }
    for (i, (c, theta)) in t.characters.iter().zip(&t.modular).enumerate() {
        for j in 0..k {
            checked += 1;
            let image = c.value(j).eval_mod(f.q, f.e as usize, f.z);
            if image != theta.get(j).copied() {
                return fail(format!("lift(χ_{i}, class {j})"), checked);
            }
        }
    }

    TableCheck {
        passed: true,
        relations_checked: checked,
        failure: None,
    }
}

/// Row and column orthogonality by direct cyclotomic arithmetic.
/// On failure returns the relation name and how many relations were checked.
fn orthogonality_exact(t: &CharacterTable) -> Result<(), (String, usize)> {
    let g = t.group();
    let classes = g.classes();
    let k = classes.len();
    let mut checked = 0;
    for i in 0..k {
        for j in i..k {
            checked += 1;
            let expected = Rational::from_integer((i == j) as i64);
            match inner_product(g, &t.characters[i], &t.characters[j]) {
                Ok(v) if v == expected => {}
                Ok(v) => return Err((format!("row({i},{j}): [χ_{i}, χ_{j}] = {v}"), checked)),
                Err(e) => return Err((format!("row({i},{j}): {e}"), checked)),
            }
        }
    }
    let conj: Vec<ClassFunction> = t.characters.iter().map(ClassFunction::conjugate).collect();
    for a in 0..k {
        for b in a..k {
            checked += 1;
            let sum: Cyclotomic = t
                .characters
                .iter()
                .zip(&conj)
                .map(|(c, cc)| c.value(a) * cc.value(b))
                .sum();
            let expected = if a == b {
                classes.centralizer_order(a) as i64
            } else {
                0
            };
            if sum != Cyclotomic::from_integer(expected) {
                return Err((format!("column({a},{b}): sum = {sum}, expected {expected}"), checked));
            }
        }
    }
    Ok(())
}

/// The same relations tested in every embedding `Z[ζ_e] → F_Q`, with `Q`
/// above twice a bound on the coefficients of each relation's difference,
/// which makes the test exact (see [`Embeddings`]). `None` when the values
/// are not all integral in `Q(ζ_e)`; the caller then falls back to
/// [`orthogonality_exact`].
fn orthogonality_by_embeddings(t: &CharacterTable) -> Option<Result<usize, String>> {
    let g = t.group();
    let classes = g.classes();
    let k = classes.len();
    let e = t.field.e as usize;
    let l1: Vec<Vec<u64>> = t
        .characters
        .iter()
        .map(|c| c.values().iter().map(l1_norm).collect::<Option<_>>())
        .collect::<Option<_>>()?;
    let m = l1.iter().flatten().copied().max().unwrap_or(0) as u128;
    // Each side is a sum of at most |G| products of two values (rows weight
    // by class size; columns have k ≤ |G| terms), plus a constant ≤ |G|.
    let order = g.order() as u128;
    let bound = reduction_growth(e) as u128 * (m * m + 1) * order;
    if bound >= 1 << 60 {
        return None;
    }
    let f = field_above(e as u64, 2 * bound as u64).ok()?;
    let emb = Embeddings::new(f.q, e, f.z);
    let img: Vec<Vec<Vec<u64>>> = t
        .characters
        .iter()
        .map(|c| c.values().iter().map(|v| emb.images(v)).collect::<Option<_>>())
        .collect::<Option<_>>()?;
    let n = emb.count();
    let sizes: Vec<u64> = classes.sizes.iter().map(|s| *s as u64 % f.q).collect();
    let mut checked = 0;
    for a in 0..k {
        for b in a..k {
            checked += 1;
            let expected = if a == b { g.order() as u64 % f.q } else { 0 };
            for u in 0..n {
                let cu = emb.conj_index(u);
                let s = (0..k).fold(0, |acc, j| {
                    f.add(acc, f.mul(sizes[j], f.mul(img[a][j][u], img[b][j][cu])))
                });
                if s != expected {
                    return Some(Err(format!("row({a},{b}): [χ_{a}, χ_{b}] ≠ {}", (a == b) as u8)));
                }
            }
        }
    }
    for a in 0..k {
        for b in a..k {
            checked += 1;
            let expected = if a == b {
                classes.centralizer_order(a) as u64 % f.q
            } else {
                0
            };
            for u in 0..n {
                let cu = emb.conj_index(u);
                let s = (0..k).fold(0, |acc, i| f.add(acc, f.mul(img[i][a][u], img[i][b][cu])));
                if s != expected {
                    return Some(Err(format!("column({a},{b}): sum ≠ {expected}")));
                }
            }
        }
    }
    Some(Ok(checked))
}

/// Text grid: one column per class (with size and element order), one row per character.
pub fn render_text(t: &CharacterTable) -> String {
    let g = t.group();
    let classes = g.classes();
    let k = classes.len();
    let mut cells: Vec<Vec<String>> = Vec::with_capacity(t.len() + 3);
    let header = |label: &str, f: &dyn Fn(usize) -> String| {
        std::iter::once(label.to_string()).chain((0..k).map(f)).collect::<Vec<_>>()
    };
    cells.push(header("class", &|j| format!("{j}")));
    cells.push(header("size", &|j| classes.sizes[j].to_string()));
    cells.push(header("order", &|j| g.element_order(classes.reps[j]).to_string()));
    for (i, c) in t.characters.iter().enumerate() {
        let mut row = vec![format!("χ{i}")];
        row.extend(c.values().iter().map(Cyclotomic::to_string));
        cells.push(row);
    }
    let widths: Vec<usize> = (0..=k)
        .map(|col| cells.iter().map(|r| r[col].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (ri, row) in cells.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
        if ri == 2 {
            let total: usize = widths.iter().sum::<usize>() + 2 * k;
            writeln!(out, "{}", "-".repeat(total)).unwrap();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ClassJson {
    pub representative: usize,
    pub size: usize,
    pub element_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TableJson {
    pub order: usize,
    pub exponent: u64,
    pub prime: u64,
    pub classes: Vec<ClassJson>,
    pub degrees: Vec<u64>,
    /// Values in the `a0 + a1*z(n)^1 + ...` text form.
    pub characters: Vec<Vec<String>>,
}

pub fn to_json(t: &CharacterTable) -> TableJson {
    let g = t.group();
    let classes = g.classes();
    TableJson {
        order: g.order(),
        exponent: g.exponent(),
        prime: t.field.q,
        classes: (0..classes.len())
            .map(|j| ClassJson {
                representative: classes.reps[j],
                size: classes.sizes[j],
                element_order: g.element_order(classes.reps[j]),
            })
            .collect(),
        degrees: t.degrees(),
        characters: t
            .characters
            .iter()
            .map(|c| c.values().iter().map(Cyclotomic::to_string).collect())
            .collect(),
    }
}

pub const CACHE_FORMAT: &str = "charforge-table v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed table cache at line {line}: {reason}")]
pub struct CacheFormatError {
    pub line: usize,
    pub reason: String,
}

/// Versioned text serialization used by the on-disk cache.
pub fn write_cache_text(spec: &str, t: &CharacterTable) -> String {
    let g = t.group();
    let mut out = String::new();
    writeln!(out, "{CACHE_FORMAT}").unwrap();
    writeln!(out, "spec: {spec}").unwrap();
    writeln!(out, "order: {}", g.order()).unwrap();
    writeln!(out, "classes: {}", t.len()).unwrap();
    writeln!(out, "field: {} {} {}", t.field.q, t.field.e, t.field.z).unwrap();
    for (i, (c, theta)) in t.characters.iter().zip(&t.modular).enumerate() {
        writeln!(out, "char {i}").unwrap();
        let m: Vec<String> = theta.iter().map(u64::to_string).collect();
        writeln!(out, "mod {}", m.join(" ")).unwrap();
        for v in c.values() {
            writeln!(out, "{v}").unwrap();
        }
    }
    out
}

/// Inverse of [`write_cache_text`] for an already-built group. Structural
/// mismatches are errors; the values themselves are checked by the caller.
pub fn read_cache_text(spec: &str, g: Arc<Group>, text: &str) -> Result<CharacterTable, CacheFormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| CacheFormatError {
            line: 0,
            reason: format!("unexpected end of file, expected {what}"),
        })
    };
    let err = |line: usize, reason: String| CacheFormatError { line, reason };
    let (ln, header) = next("header")?;
    if header.trim() != CACHE_FORMAT {
        return Err(err(ln, format!("unsupported header {header:?}")));
    }
    let mut field_of = |key: &str| -> Result<(usize, String), CacheFormatError> {
        let (ln, l) = next(key)?;
        let v = l
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(':'))
            .ok_or_else(|| err(ln, format!("expected {key}")))?;
        Ok((ln, v.trim().to_string()))
    };
    let (ln, s) = field_of("spec")?;
    if s != spec {
        return Err(err(ln, format!("spec {s:?} does not match {spec:?}")));
    }
    let (ln, order) = field_of("order")?;
    if order.parse::<usize>().ok() != Some(g.order()) {
        return Err(err(ln, "order mismatch".into()));
    }
    let k = g.classes().len();
    let (ln, count) = field_of("classes")?;
    if count.parse::<usize>().ok() != Some(k) {
        return Err(err(ln, "class count mismatch".into()));
    }
    let (ln, fline) = field_of("field")?;
    let nums: Vec<u64> = fline
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| err(ln, "bad field line".into()))?;
    let [q, e, z] = nums[..] else {
        return Err(err(ln, "field needs q e z".into()));
    };
    let field = PrimeField { q, e, z };
    let mut characters = Vec::with_capacity(k);
    let mut modular = Vec::with_capacity(k);
    for i in 0..k {
        let (ln, l) = next("char")?;
        if l.trim() != format!("char {i}") {
            return Err(err(ln, format!("expected char {i}")));
        }
        let (ln, l) = next("mod")?;
        let theta: Vec<u64> = l
            .strip_prefix("mod")
            .ok_or_else(|| err(ln, "expected mod line".into()))?
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| err(ln, "bad modular value".into()))?;
        if theta.len() != k {
            return Err(err(ln, "modular row length mismatch".into()));
        }
        let mut values = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, l) = next("value")?;
            values.push(l.parse::<Cyclotomic>().map_err(|e| err(ln, e.to_string()))?);
        }
        characters.push(ClassFunction::new(values));
        modular.push(theta);
    }
    Ok(CharacterTable {
        group: g,
        characters,
        field,
        modular,
    })
}
