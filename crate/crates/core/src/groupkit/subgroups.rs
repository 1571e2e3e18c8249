use std::collections::VecDeque;

use super::Group;
use crate::gflin::prime_factors;

/// A subgroup as a membership mask over the parent's element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub member: Vec<bool>,
    pub order: usize,
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn trivial(g: &Group) -> Self {
        subgroup_generated(g, &[])
    }

    pub fn whole(g: &Group) -> Self {
        let mut member = vec![true; g.order()];
        member[0] = true;
        Subgroup {
            member,
            order: g.order(),
            generators: g.generators().to_vec(),
        }
    }

    /// Wraps a mask already known to be a subgroup, picking generators greedily.
    pub fn from_members(g: &Group, member: Vec<bool>) -> Self {
        let mut current = Subgroup::trivial(g);
        for x in 0..member.len() {
            if member[x] && !current.contains(x) {
                let mut gens = current.generators.clone();
                gens.push(x);
                current = subgroup_generated(g, &gens);
            }
        }
        debug_assert_eq!(current.member, member, "mask is not a subgroup");
        current
    }

    pub fn contains(&self, x: usize) -> bool {
        self.member[x]
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.member.len()).filter(|&x| self.member[x]).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.member
            .iter()
            .zip(&other.member)
            .all(|(a, b)| !*a || *b)
    }

    pub fn is_normal_in(&self, g: &Group) -> bool {
        self.generators.iter().all(|&s| {
            g.generators()
                .iter()
                .all(|&a| self.contains(g.conjugate(s, a)))
        })
    }
}

/// `⟨gens⟩`, by closing `{1}` under right multiplication.
pub fn subgroup_generated(g: &Group, gens: &[usize]) -> Subgroup {
    let mut generators: Vec<usize> = Vec::new();
    for &x in gens {
        if x != 0 && !generators.contains(&x) {
            generators.push(x);
        }
    }
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut order = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &s in &generators {
            let y = g.mul(x, s);
            if !member[y] {
                member[y] = true;
                order += 1;
                queue.push_back(y);
            }
        }
    }
    Subgroup {
        member,
        order,
        generators,
    }
}

/// Elements commuting with every generator of `g`.
pub fn center(g: &Group) -> Subgroup {
    let member = (0..g.order())
        .map(|x| g.generators().iter().all(|&s| g.mul(x, s) == g.mul(s, x)))
        .collect();
    Subgroup::from_members(g, member)
}

pub fn normalizer(g: &Group, h: &Subgroup) -> Subgroup {
    let member = (0..g.order())
        .map(|x| h.generators.iter().all(|&s| h.contains(g.conjugate(s, x))))
        .collect();
    Subgroup::from_members(g, member)
}

fn normal_closure_in(g: &Group, seeds: &[usize], ambient: &[usize]) -> Subgroup {
    let mut s = subgroup_generated(g, seeds);
    'grow: loop {
        for &x in &s.generators {
            for &a in ambient {
                let c = g.conjugate(x, a);
                if !s.contains(c) {
                    let mut gens = s.generators.clone();
                    gens.push(c);
                    s = subgroup_generated(g, &gens);
                    continue 'grow;
                }
            }
        }
        return s;
    }
}

/// Smallest normal subgroup of `g` containing `seeds`.
pub fn normal_closure(g: &Group, seeds: &[usize]) -> Subgroup {
    normal_closure_in(g, seeds, g.generators())
}

/// `[H, H]` for a subgroup `H` of `g`.
pub fn derived_subgroup(g: &Group, h: &Subgroup) -> Subgroup {
    let gens = &h.generators;
    let mut commutators = Vec::new();
    for &a in gens {
        for &b in gens {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            commutators.push(c);
        }
    }
    normal_closure_in(g, &commutators, gens)
}

pub fn is_solvable(g: &Group) -> bool {
    let mut h = Subgroup::whole(g);
    loop {
        if h.is_trivial() {
            return true;
        }
        let d = derived_subgroup(g, &h);
        if d.order == h.order {
            return false;
        }
        h = d;
    }
}

/// The prime when `|g|` is a nontrivial prime power.
pub fn is_p_group(g: &Group) -> Option<u64> {
    match prime_factors(g.order() as u64).as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// A Sylow `p`-subgroup, grown from a cyclic `p`-subgroup by adjoining the
/// first `p`-element of the normalizer lying outside the current subgroup.
pub fn sylow_subgroup(g: &Group, p: u64) -> Subgroup {
    let n = g.order();
    let Some(x) = (0..n).find(|&x| g.element_order(x).is_multiple_of(p)) else {
        return Subgroup::trivial(g);
    };
    let seed = g.pow(x, g.element_order(x) / p);
    let mut sylow = subgroup_generated(g, &[seed]);
    loop {
        let norm = normalizer(g, &sylow);
        let next = (0..n).find(|&y| {
            norm.contains(y) && !sylow.contains(y) && is_p_power(g.element_order(y), p)
        });
        match next {
            Some(y) => {
                let mut gens = sylow.generators.clone();
                gens.push(y);
                sylow = subgroup_generated(g, &gens);
            }
            None => return sylow,
        }
    }
}

/// Every Sylow subgroup normal.
pub fn is_nilpotent(g: &Group) -> bool {
    prime_factors(g.order() as u64)
        .into_iter()
        .all(|p| sylow_subgroup(g, p).is_normal_in(g))
}

#[cfg(test)]
mod tests {
    use super::super::{build_group, parse_group_spec, DEFAULT_SIZE_CAP};
    use super::*;

    fn build(s: &str) -> Group {
        build_group(&parse_group_spec(s).unwrap(), DEFAULT_SIZE_CAP).unwrap()
    }

    /// Brute-force center: commutes with every element.
    fn center_oracle(g: &Group) -> usize {
        (0..g.order())
            .filter(|&x| (0..g.order()).all(|y| g.mul(x, y) == g.mul(y, x)))
            .count()
    }

    #[test]
    fn centers() {
        for (s, order) in [("quaternion(2)", 2), ("abelian(2,3)", 6), ("symmetric(3)", 1)] {
            let g = build(s);
            assert_eq!(center(&g).order, order, "{s}");
            assert_eq!(center_oracle(&g), order, "{s}");
        }
    }

    #[test]
    fn generated_subgroups() {
        let g = build("quaternion(2)");
        assert!(subgroup_generated(&g, &[]).is_trivial());
        let z = center(&g);
        let inv = z.elements().into_iter().find(|&x| x != 0).unwrap();
        assert_eq!(subgroup_generated(&g, &[inv]), z);
        let all: Vec<usize> = (0..g.order()).collect();
        assert_eq!(subgroup_generated(&g, &all).order, 8);
    }

    #[test]
    fn normalizers() {
        let g = build("symmetric(3)");
        let whole = Subgroup::whole(&g);
        assert_eq!(normalizer(&g, &whole).order, 6);
        assert_eq!(normalizer(&g, &Subgroup::trivial(&g)).order, 6);
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let h = subgroup_generated(&g, &[t]);
        // brute force: x with x h x⁻¹ = h
        let brute = (0..6)
            .filter(|&x| h.elements().iter().all(|&y| h.contains(g.conjugate(y, x))))
            .count();
        assert_eq!(brute, 2);
        assert_eq!(normalizer(&g, &h).order, 2);
    }

    #[test]
    fn sylow_subgroups() {
        let g = build("symmetric(4)");
        let p = sylow_subgroup(&g, 2);
        assert_eq!(p.order, 8);
        assert!(p.elements().iter().all(|&x| is_p_power(g.element_order(x), 2)));
        assert_eq!(sylow_subgroup(&build("symmetric(3)"), 3).order, 3);
        assert_eq!(sylow_subgroup(&build("heisenberg(3)"), 3).order, 27);
        assert!(sylow_subgroup(&build("cyclic(9)"), 2).is_trivial());
    }

    #[test]
    fn nilpotence_and_solvability() {
        assert!(is_nilpotent(&build("heisenberg(3)")));
        assert!(is_nilpotent(&build("abelian(6)")));
        assert!(!is_nilpotent(&build("symmetric(3)")));
        assert!(is_solvable(&build("symmetric(4)")));
        assert!(!is_solvable(&build("alternating(5)")));
        assert_eq!(is_p_group(&build("quaternion(2)")), Some(2));
        assert_eq!(is_p_group(&build("cyclic(1)")), None);
    }

    #[test]
    fn derived_and_normal_closure() {
        let g = build("symmetric(4)");
        assert_eq!(derived_subgroup(&g, &Subgroup::whole(&g)).order, 12);
        let t = (0..g.order()).find(|&x| g.element_order(x) == 2 && g.classes().sizes[g.classes().class_of[x]] == 6).unwrap();
        assert_eq!(normal_closure(&g, &[t]).order, 24);
    }
}
