//! Permutation realizations of the named group families.

use std::collections::HashMap;
use std::hash::Hash;

use super::spec::{ExtraspecialVariant, GroupKind};
use super::Perm;

/// Generators acting on `0..degree`.
#[derive(Debug, Clone)]
pub struct PermGens {
    pub degree: usize,
    pub gens: Vec<Perm>,
}

pub fn generators(kind: &GroupKind) -> PermGens {
    match kind {
        GroupKind::Cyclic(n) => cyclic(*n as usize),
        GroupKind::Abelian(ns) => ns
            .iter()
            .map(|n| cyclic(*n as usize))
            .reduce(direct_product)
            .expect("abelian spec has at least one factor"),
        GroupKind::Dihedral(n) => dihedral(*n as usize),
        GroupKind::Quaternion(n) => regular(&dicyclic(*n as usize)),
        GroupKind::Semidihedral(k) => regular(&semidihedral(*k)),
        GroupKind::Extraspecial { p, n, variant } => {
            regular(&extraspecial(*p as usize, *n as usize, *variant))
        }
        GroupKind::Heisenberg(p) => regular(&heisenberg(*p as usize)),
        GroupKind::Symmetric(n) => symmetric(*n as usize),
        GroupKind::Alternating(n) => alternating(*n as usize),
        GroupKind::Perm(gens) => from_cycles(gens),
        GroupKind::Product(a, b) => direct_product(generators(a), generators(b)),
    }
}

fn identity(degree: usize) -> Perm {
    Perm((0..degree as u32).collect())
}

fn cycle_perm(degree: usize, cycle: &[usize]) -> Perm {
    let mut p = identity(degree);
    for (i, &x) in cycle.iter().enumerate() {
        p.0[x] = cycle[(i + 1) % cycle.len()] as u32;
    }
    p
}

fn cyclic(n: usize) -> PermGens {
    let all: Vec<usize> = (0..n).collect();
    PermGens {
        degree: n,
        gens: vec![cycle_perm(n, &all)],
    }
}

fn dihedral(n: usize) -> PermGens {
    let rotation = Perm((0..n).map(|i| ((i + 1) % n) as u32).collect());
    let reflection = Perm((0..n).map(|i| ((n - i) % n) as u32).collect());
    PermGens {
        degree: n,
        gens: vec![rotation, reflection],
    }
}

fn symmetric(n: usize) -> PermGens {
    let gens = match n {
        0 | 1 => vec![identity(n.max(1))],
        2 => vec![cycle_perm(2, &[0, 1])],
        _ => vec![
            cycle_perm(n, &[0, 1]),
            cycle_perm(n, &(0..n).collect::<Vec<_>>()),
        ],
    };
    PermGens {
        degree: n.max(1),
        gens,
    }
}

fn alternating(n: usize) -> PermGens {
    let gens = if n < 3 {
        vec![identity(n.max(1))]
    } else {
        (2..n).map(|i| cycle_perm(n, &[0, 1, i])).collect()
    };
    PermGens {
        degree: n.max(1),
        gens,
    }
}

/// Cycles compose left to right; points are 1-based.
fn from_cycles(gens: &[Vec<Vec<u32>>]) -> PermGens {
    let degree = gens
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .unwrap_or(1) as usize;
    let gens = gens
        .iter()
        .map(|cycles| {
            cycles.iter().fold(identity(degree), |acc, c| {
                let c: Vec<usize> = c.iter().map(|x| *x as usize - 1).collect();
                acc.then(&cycle_perm(degree, &c))
            })
        })
        .collect();
    PermGens { degree, gens }
}

fn direct_product(a: PermGens, b: PermGens) -> PermGens {
    let degree = a.degree + b.degree;
    let shift = a.degree as u32;
    let left = a.gens.into_iter().map(|g| {
        let mut v = g.0;
        v.extend(shift..degree as u32);
        Perm(v)
    });
    let right = b.gens.into_iter().map(|g| {
        let mut v: Vec<u32> = (0..shift).collect();
        v.extend(g.0.iter().map(|x| x + shift));
        Perm(v)
    });
    PermGens {
        degree,
        gens: left.chain(right).collect(),
    }
}

/// A group given by its full multiplication table.
#[derive(Debug, Clone)]
pub(crate) struct SmallGroup {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    gens: Vec<usize>,
    /// Generator of the designated central subgroup of prime order.
    central: usize,
}

impl SmallGroup {
    fn from_fn<T: Clone + Eq + Hash>(
        elements: Vec<T>,
        identity: T,
        gens: &[T],
        central: T,
        mul: impl Fn(&T, &T) -> T,
    ) -> Self {
        let index: HashMap<T, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, x)| (x, i))
            .collect();
        let n = elements.len();
        let mut table = vec![0; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                table[i * n + j] = index[&mul(a, b)];
            }
        }
        SmallGroup {
            order: n,
            mul: table,
            identity: index[&identity],
            gens: gens.iter().map(|g| index[g]).collect(),
            central: index[&central],
        }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }
}

/// Right regular representation: `g` acts by `x ↦ x·g`.
fn regular(g: &SmallGroup) -> PermGens {
    PermGens {
        degree: g.order,
        gens: g
            .gens
            .iter()
            .map(|&s| Perm((0..g.order).map(|x| g.mul(x, s) as u32).collect()))
            .collect(),
    }
}

fn pairs(a: usize, b: usize) -> Vec<(usize, usize)> {
    (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).collect()
}

/// `⟨a, b | a^{2n}, b² = a^n, b a b⁻¹ = a⁻¹⟩`, elements `a^i b^j`.
fn dicyclic(n: usize) -> SmallGroup {
    let m = 2 * n;
    SmallGroup::from_fn(pairs(m, 2), (0, 0), &[(1, 0), (0, 1)], (n, 0), |&(i, j), &(k, l)| {
        if j == 0 {
            ((i + k) % m, l)
        } else if l == 0 {
            ((i + m - k) % m, 1)
        } else {
            ((i + m - k + n) % m, 0)
        }
    })
}

/// `⟨a, b | a^{2^{k-1}}, b², b a b = a^{2^{k-2}-1}⟩`.
fn semidihedral(k: u32) -> SmallGroup {
    let m = 1usize << (k - 1);
    let r = (1usize << (k - 2)) - 1;
    SmallGroup::from_fn(pairs(m, 2), (0, 0), &[(1, 0), (0, 1)], (m / 2, 0), |&(i, j), &(k, l)| {
        let twisted = if j == 0 { k } else { k * r % m };
        ((i + twisted) % m, (j + l) % 2)
    })
}

fn dihedral8() -> SmallGroup {
    SmallGroup::from_fn(pairs(4, 2), (0, 0), &[(1, 0), (0, 1)], (2, 0), |&(i, j), &(k, l)| {
        let twisted = if j == 0 { k } else { (4 - k) % 4 };
        ((i + twisted) % 4, (j + l) % 2)
    })
}

/// Upper unitriangular 3×3 matrices over `F_p`, as `(a, b, c)` for
/// `[[1, a, c], [0, 1, b], [0, 0, 1]]`.
pub(crate) fn heisenberg(p: usize) -> SmallGroup {
    let elements: Vec<(usize, usize, usize)> = (0..p)
        .flat_map(|a| (0..p).flat_map(move |b| (0..p).map(move |c| (a, b, c))))
        .collect();
    SmallGroup::from_fn(
        elements,
        (0, 0, 0),
        &[(1, 0, 0), (0, 1, 0)],
        (0, 0, 1),
        |&(a, b, c), &(x, y, z)| ((a + x) % p, (b + y) % p, (c + z + a * y) % p),
    )
}

/// `⟨a, b | a^{p²}, b^p, b a b⁻¹ = a^{1+p}⟩` for odd `p`.
fn metacyclic_p3(p: usize) -> SmallGroup {
    let m = p * p;
    SmallGroup::from_fn(pairs(m, p), (0, 0), &[(1, 0), (0, 1)], (p, 0), |&(i, j), &(k, l)| {
        let mut twisted = k;
        for _ in 0..j {
            twisted = twisted * (1 + p) % m;
        }
        ((i + twisted) % m, (j + l) % p)
    })
}

/// Central product of blocks, identifying their designated central subgroups
/// (all of order `p`). Elements are `(r_1, ..., r_n, t)` with `r_i` a coset
/// representative in block `i` and `t` the exponent of the shared central
/// generator.
fn central_product(blocks: &[SmallGroup], p: usize) -> SmallGroup {
    struct Decomp {
        reps: Vec<usize>,
        split: Vec<(usize, usize)>,
    }
    let decomps: Vec<Decomp> = blocks
        .iter()
        .map(|b| {
            let mut powers = vec![b.identity];
            for _ in 1..p {
                powers.push(b.mul(*powers.last().unwrap(), b.central));
            }
            let mut split = vec![(usize::MAX, 0); b.order];
            let mut reps = Vec::new();
            // identity first, so its coset has slot 0 and offset 0
            let order = std::iter::once(b.identity).chain((0..b.order).filter(|&x| x != b.identity));
            for x in order {
                if split[x].0 != usize::MAX {
                    continue;
                }
                let slot = reps.len();
                reps.push(x);
                for (t, c) in powers.iter().enumerate() {
                    split[b.mul(x, *c)] = (slot, t);
                }
            }
            Decomp { reps, split }
        })
        .collect();
    let mut elements: Vec<Vec<usize>> = vec![vec![]];
    for d in &decomps {
        elements = elements
            .into_iter()
            .flat_map(|prefix| {
                (0..d.reps.len()).map(move |r| {
                    let mut v = prefix.clone();
                    v.push(r);
                    v
                })
            })
            .collect();
    }
    elements = elements
        .into_iter()
        .flat_map(|prefix| {
            (0..p).map(move |t| {
                let mut v = prefix.clone();
                v.push(t);
                v
            })
        })
        .collect();
    let n = blocks.len();
    let embed = |block: usize, x: usize| -> Vec<usize> {
        let mut v = vec![0; n + 1];
        let (r, t) = decomps[block].split[x];
        v[block] = r;
        v[n] = t;
        v
    };
    let identity = vec![0; n + 1];
    let gens: Vec<Vec<usize>> = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.gens.iter().map(move |&g| (i, g)))
        .map(|(i, g)| embed(i, g))
        .collect();
    let mut central = identity.clone();
    central[n] = 1;
    SmallGroup::from_fn(elements, identity, &gens, central, |x, y| {
        let mut out = Vec::with_capacity(n + 1);
        let mut t = x[n] + y[n];
        for (i, (b, d)) in blocks.iter().zip(&decomps).enumerate() {
            let prod = b.mul(d.reps[x[i]], d.reps[y[i]]);
            let (r, s) = d.split[prod];
            out.push(r);
            t += s;
        }
        out.push(t % p);
        out
    })
}

fn extraspecial(p: usize, n: usize, variant: ExtraspecialVariant) -> SmallGroup {
    let (first, rest) = match variant {
        ExtraspecialVariant::ExpP => (heisenberg(p), heisenberg(p)),
        ExtraspecialVariant::ExpP2 => (metacyclic_p3(p), heisenberg(p)),
        ExtraspecialVariant::Plus => (dihedral8(), dihedral8()),
        ExtraspecialVariant::Minus => (dicyclic(2), dihedral8()),
    };
    let mut blocks = vec![first];
    blocks.extend(std::iter::repeat_n(rest, n - 1));
    central_product(&blocks, p)
}
