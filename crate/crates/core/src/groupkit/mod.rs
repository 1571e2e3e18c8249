//! Finite permutation groups: construction from specs, element enumeration,
//! conjugacy classes, and subgroup machinery.

mod families;
mod spec;
mod subgroups;

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use num_integer::Integer;
use thiserror::Error;

pub use families::{generators, PermGens};
pub use spec::{parse_group_spec, ExtraspecialVariant, GroupKind, GroupSpec, SpecError};
pub use subgroups::{
    center, derived_subgroup, is_nilpotent, is_p_group, is_solvable, normal_closure, normalizer,
    subgroup_generated, sylow_subgroup, Subgroup,
};

pub const DEFAULT_SIZE_CAP: usize = 20_000;

/// Orders up to this bound keep a dense multiplication table.
const DENSE_TABLE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order {order} exceeds the size cap {cap}")]
    OrderExceedsCap { order: u128, cap: usize },
    #[error("closure exceeded the size cap {cap}")]
    ClosureExceedsCap { cap: usize },
    #[error("empty generator set")]
    NoGenerators,
    #[error("size cap must be at least 1")]
    ZeroCap,
    #[error("generator acts on {found} points, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
}

/// A permutation of `0..n`, as the image of each point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x as usize] = i as u32;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

/// A finite group with every element enumerated. Element 0 is the identity.
#[derive(Debug)]
pub struct Group {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Option<Vec<u32>>,
    inverse: Vec<usize>,
    orders: Vec<u64>,
    exponent: u64,
    generators: Vec<usize>,
    classes: OnceLock<ConjugacyClasses>,
}

/// Realizes a spec as a permutation group, refusing anything larger than `size_cap`.
pub fn build_group(spec: &GroupSpec, size_cap: usize) -> Result<Group, GroupError> {
    if size_cap == 0 {
        return Err(GroupError::ZeroCap);
    }
    if let Some(order) = spec.kind.order_hint() {
        if order > size_cap as u128 {
            return Err(GroupError::OrderExceedsCap {
                order,
                cap: size_cap,
            });
        }
    }
    let PermGens { degree, gens } = generators(&spec.kind);
    Group::from_generators(degree, &gens, size_cap)
}

impl Group {
    /// Breadth-first closure of `gens`, discovering `x·g` for each queued `x`
    /// and each generator `g` in order.
    pub fn from_generators(degree: usize, gens: &[Perm], size_cap: usize) -> Result<Group, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        if size_cap == 0 {
            return Err(GroupError::ZeroCap);
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let mut distinct: Vec<&Perm> = Vec::new();
        for g in gens {
            if !g.is_identity() && !distinct.contains(&g) {
                distinct.push(g);
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        // how each element was first reached: (parent, generator slot)
        let mut reached: Vec<(usize, usize)> = vec![(0, 0)];
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < elements.len() {
            let mut row = Vec::with_capacity(distinct.len());
            for (slot, g) in distinct.iter().enumerate() {
                let y = elements[i].then(g);
                let j = match index.get(&y) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= size_cap {
                            return Err(GroupError::ClosureExceedsCap { cap: size_cap });
                        }
                        let j = elements.len();
                        index.insert(y.clone(), j);
                        elements.push(y);
                        reached.push((i, slot));
                        j
                    }
                };
                row.push(j);
            }
            right.push(row);
            i += 1;
        }
        let n = elements.len();
        let table = (n <= DENSE_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                t[a * n] = a as u32;
                for b in 1..n {
                    let (parent, slot) = reached[b];
                    t[a * n + b] = right[t[a * n + parent] as usize][slot] as u32;
                }
            }
            t
        });
        let generators = distinct.iter().map(|g| index[*g]).collect();
        let mut group = Group {
            degree,
            elements,
            index,
            table,
            inverse: Vec::new(),
            orders: Vec::new(),
            exponent: 1,
            generators,
            classes: OnceLock::new(),
        };
        group.inverse = (0..n)
            .map(|x| group.index[&group.elements[x].inverse()])
            .collect();
        group.orders = (0..n)
            .map(|x| {
                let mut k = 1u64;
                let mut y = x;
                while y != 0 {
                    y = group.mul(y, x);
                    k += 1;
                }
                k
            })
            .collect();
        group.exponent = group.orders.iter().fold(1u64, |a, b| a.lcm(b));
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Indices of the (non-identity, distinct) generators used for the closure.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.orders[a]
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = 0;
        let mut base = a;
        let mut k = k % self.orders[a];
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `b⁻¹ a b`.
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inverse[b], a), b)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| {
            self.generators
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| conjugacy_classes(self))
    }
}

/// Conjugacy classes with the power and inverse maps needed downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub class_of: Vec<usize>,
    /// Smallest element index in each class.
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Elements of each class, ascending.
    pub members: Vec<Vec<usize>>,
    pub inverse_class: Vec<usize>,
    /// `power_class[j][s]` is the class of `rep_j^s`, for `s` in `0..exponent`.
    pub power_class: Vec<Vec<usize>>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn power_class(&self, j: usize, s: u64) -> usize {
        let row = &self.power_class[j];
        row[(s % row.len() as u64) as usize]
    }

    /// `|C_G(g)|` for `g` in class `j`.
    pub fn centralizer_order(&self, j: usize) -> usize {
        self.class_of.len() / self.sizes[j]
    }
}

/// Orbits of conjugation by the generators, scanned in ascending element order.
pub fn conjugacy_classes(g: &Group) -> ConjugacyClasses {
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = members.len();
        class_of[x] = c;
        let mut orbit = vec![x];
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            for &s in &g.generators {
                let z = g.conjugate(y, s);
                if class_of[z] == usize::MAX {
                    class_of[z] = c;
                    orbit.push(z);
                    queue.push_back(z);
                }
            }
        }
        orbit.sort_unstable();
        members.push(orbit);
    }
    let reps: Vec<usize> = members.iter().map(|m| m[0]).collect();
    let sizes = members.iter().map(Vec::len).collect();
    let inverse_class = reps.iter().map(|&r| class_of[g.inv(r)]).collect();
    let e = g.exponent();
    let power_class = reps
        .iter()
        .map(|&r| {
            let mut acc = 0;
            (0..e)
                .map(|_| {
                    let c = class_of[acc];
                    acc = g.mul(acc, r);
                    c
                })
                .collect()
        })
        .collect();
    ConjugacyClasses {
        class_of,
        reps,
        sizes,
        members,
        inverse_class,
        power_class,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> Group {
        build_group(&parse_group_spec(s).unwrap(), DEFAULT_SIZE_CAP).unwrap()
    }

    #[test]
    fn trivial_group() {
        let g = build("cyclic(1)");
        assert_eq!(g.order(), 1);
        assert_eq!(g.exponent(), 1);
        assert_eq!(g.classes().len(), 1);
    }

    #[test]
    fn family_orders_and_exponents() {
        let cases = [
            ("quaternion(2)", 8, 4),
            ("heisenberg(3)", 27, 3),
            ("dihedral(4)", 8, 4),
            ("semidihedral(4)", 16, 8),
            ("extraspecial(3,1,expP2)", 27, 9),
            ("extraspecial(2,2,plus)", 32, 4),
            ("extraspecial(2,2,minus)", 32, 4),
            ("extraspecial(3,2,expP)", 243, 3),
            ("symmetric(4)", 24, 12),
            ("alternating(5)", 60, 30),
            ("abelian(2,4)", 8, 4),
            ("symmetric(3) x cyclic(2)", 12, 6),
            ("quaternion(3)", 12, 12),
        ];
        for (s, order, exp) in cases {
            let g = build(s);
            assert_eq!((g.order(), g.exponent()), (order, exp), "{s}");
        }
    }

    #[test]
    fn q8_classes() {
        let g = build("quaternion(2)");
        let mut sizes = g.classes().sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn s3_classes_in_index_order() {
        let g = build("symmetric(3)");
        let c = g.classes();
        assert_eq!(c.len(), 3);
        assert_eq!(c.sizes[0], 1);
        let mut rest = c.sizes[1..].to_vec();
        rest.sort();
        assert_eq!(rest, vec![2, 3]);
    }

    #[test]
    fn cyclic_classes_are_singletons() {
        let g = build("cyclic(7)");
        assert!(g.classes().sizes.iter().all(|&s| s == 1));
        assert_eq!(g.classes().len(), 7);
    }

    #[test]
    fn size_cap_is_enforced_before_and_during_closure() {
        let spec = parse_group_spec("dihedral(999999)").unwrap();
        assert!(matches!(
            build_group(&spec, DEFAULT_SIZE_CAP),
            Err(GroupError::OrderExceedsCap { .. })
        ));
        let spec = parse_group_spec("perm: (1 2 3 4 5 6 7), (1 2)").unwrap();
        assert_eq!(
            build_group(&spec, 100).unwrap_err(),
            GroupError::ClosureExceedsCap { cap: 100 }
        );
        assert_eq!(
            Group::from_generators(3, &[], 10).unwrap_err(),
            GroupError::NoGenerators
        );
    }

    #[test]
    fn deterministic_builds() {
        let a = build("extraspecial(2,2,minus)");
        let b = build("extraspecial(2,2,minus)");
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn sparse_multiplication_matches_dense() {
        let spec = parse_group_spec("symmetric(7)").unwrap();
        let big = build_group(&spec, 6000).unwrap();
        assert!(big.table.is_none());
        let x = 1234;
        let y = 4321;
        assert_eq!(
            big.element(big.mul(x, y)),
            &big.element(x).then(big.element(y))
        );
        assert_eq!(big.mul(x, big.inv(x)), 0);
    }
}
