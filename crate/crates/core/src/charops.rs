//! Class functions and the character-theoretic predicates built on them.

use std::ops::{Add, Mul};

use thiserror::Error;

use crate::chartable::CharacterTable;
use crate::cyclo::{Cyclotomic, Rational};
use crate::groupkit::{Group, Perm, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("inner product is not rational: {0}")]
    NotRational(String),
    #[error("not a character: multiplicity {multiplicity} of irreducible {index}")]
    NotACharacter { index: usize, multiplicity: String },
    #[error("not irreducible: [f, f] = {0}")]
    NotIrreducible(String),
    #[error("fully ramified forms disagree: vanishing off the center = {vanishing}, degree form = {degree}")]
    RamificationMismatch { vanishing: bool, degree: bool },
    #[error("class function has {found} values, expected {expected}")]
    Length { expected: usize, found: usize },
}

/// Values of a class function, one per conjugacy class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    values: Vec<Cyclotomic>,
}

impl ClassFunction {
    pub fn new(values: Vec<Cyclotomic>) -> Self {
        assert!(!values.is_empty(), "class function on an empty class list");
        ClassFunction { values }
    }

    pub fn trivial(num_classes: usize) -> Self {
        ClassFunction::new(vec![Cyclotomic::one(); num_classes])
    }

    /// `|G|` at the identity, 0 elsewhere.
    pub fn regular(g: &Group) -> Self {
        let mut values = vec![Cyclotomic::zero(); g.classes().len()];
        values[0] = Cyclotomic::from_integer(g.order() as i64);
        ClassFunction::new(values)
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }

    /// The degree as an integer, for genuine characters.
    pub fn degree_u64(&self) -> Option<u64> {
        self.values[0]
            .as_rational()
            .and_then(|r| r.to_i64())
            .and_then(|d| u64::try_from(d).ok())
    }

    pub fn scale(&self, r: &Rational) -> ClassFunction {
        ClassFunction::new(self.values.iter().map(|v| v.scale(r)).collect())
    }

    pub fn conjugate(&self) -> ClassFunction {
        ClassFunction::new(self.values.iter().map(Cyclotomic::conjugate).collect())
    }

    pub fn norms_squared(&self) -> Vec<Cyclotomic> {
        self.values.iter().map(Cyclotomic::norm_squared).collect()
    }
}

impl Add for &ClassFunction {
    type Output = ClassFunction;
    fn add(self, rhs: &ClassFunction) -> ClassFunction {
        assert_eq!(self.len(), rhs.len());
        ClassFunction::new(self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect())
    }
}

impl Mul for &ClassFunction {
    type Output = ClassFunction;
    fn mul(self, rhs: &ClassFunction) -> ClassFunction {
        pointwise_product(self, rhs)
    }
}

fn check_len(g: &Group, f: &ClassFunction) -> Result<(), CharError> {
    let k = g.classes().len();
    if f.len() == k {
        Ok(())
    } else {
        Err(CharError::Length {
            expected: k,
            found: f.len(),
        })
    }
}

/// `(1/|G|) Σ_j |C_j| f(j) conj(h(j))`.
pub fn inner_product(g: &Group, f: &ClassFunction, h: &ClassFunction) -> Result<Rational, CharError> {
    check_len(g, f)?;
    check_len(g, h)?;
    let sizes = &g.classes().sizes;
    let mut acc = Cyclotomic::zero();
    for ((a, b), size) in f.values.iter().zip(&h.values).zip(sizes) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let term = (a * &b.conjugate()).scale(&Rational::from_integer(*size as i64));
        acc = &acc + &term;
    }
    let sum = acc
        .as_rational()
        .ok_or_else(|| CharError::NotRational(acc.to_string()))?;
    Ok(&sum / &Rational::from_integer(g.order() as i64))
}

pub fn pointwise_product(f: &ClassFunction, h: &ClassFunction) -> ClassFunction {
    assert_eq!(f.len(), h.len(), "class functions on different class lists");
    ClassFunction::new(f.values.iter().zip(&h.values).map(|(a, b)| a * b).collect())
}

/// Multiplicity of each irreducible in `f`.
pub fn decompose(f: &ClassFunction, t: &CharacterTable) -> Result<Vec<u64>, CharError> {
    let g = t.group();
    t.characters()
        .iter()
        .enumerate()
        .map(|(i, chi)| {
            let m = inner_product(g, f, chi)?;
            match m.to_i64() {
                Some(v) if v >= 0 => Ok(v as u64),
                _ => Err(CharError::NotACharacter {
                    index: i,
                    multiplicity: m.to_string(),
                }),
            }
        })
        .collect()
}

/// `Σ m_χ χ`.
pub fn reconstruct(multiplicities: &[u64], t: &CharacterTable) -> ClassFunction {
    let k = t.characters().len();
    let mut values = vec![Cyclotomic::zero(); k];
    for (m, chi) in multiplicities.iter().zip(t.characters()) {
        if *m == 0 {
            continue;
        }
        let r = Rational::from_integer(*m as i64);
        for (v, x) in values.iter_mut().zip(chi.values()) {
            *v = &*v + &x.scale(&r);
        }
    }
    ClassFunction::new(values)
}

/// `Some((m, χ))` when `f = m·χ` for a single irreducible `χ`.
pub fn multiple_of_irreducible(
    f: &ClassFunction,
    t: &CharacterTable,
) -> Result<Option<(u64, usize)>, CharError> {
    let mults = decompose(f, t)?;
    let mut nonzero = mults.iter().enumerate().filter(|(_, m)| **m > 0);
    Ok(match (nonzero.next(), nonzero.next()) {
        (Some((i, m)), None) => Some((*m, i)),
        _ => None,
    })
}

fn classes_where(g: &Group, pred: impl Fn(usize) -> bool) -> Subgroup {
    let classes = g.classes();
    let member = classes.class_of.iter().map(|&c| pred(c)).collect();
    Subgroup::from_members(g, member)
}

/// `{g : f(g) = f(1)}`.
pub fn kernel(g: &Group, f: &ClassFunction) -> Subgroup {
    classes_where(g, |c| f.values[c] == f.values[0])
}

/// `{g : |f(g)| = f(1)}`, tested as `f(g)·conj(f(g)) = f(1)²`.
pub fn char_center(g: &Group, f: &ClassFunction) -> Subgroup {
    let deg2 = f.degree().norm_squared();
    let on: Vec<bool> = f.values.iter().map(|v| v.norm_squared() == deg2).collect();
    classes_where(g, |c| on[c])
}

pub fn is_faithful(f: &ClassFunction) -> bool {
    f.values[1..].iter().all(|v| v != f.degree())
}

/// Both equivalent forms of full ramification over `Z(G)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullyRamified {
    pub vanishes_off_center: bool,
    pub degree_form: bool,
}

impl FullyRamified {
    pub fn holds(&self) -> bool {
        self.vanishes_off_center && self.degree_form
    }
}

/// For irreducible `f`: vanishing on `G - Z(G)` and `f(1)² = |G : Z(G)|`.
/// The two forms must agree.
pub fn is_fully_ramified(g: &Group, f: &ClassFunction) -> Result<FullyRamified, CharError> {
    let norm = inner_product(g, f, f)?;
    if !norm.is_one() {
        return Err(CharError::NotIrreducible(norm.to_string()));
    }
    let sizes = &g.classes().sizes;
    let vanishes_off_center = f
        .values
        .iter()
        .zip(sizes)
        .all(|(v, s)| *s == 1 || v.is_zero());
    let z = sizes.iter().filter(|s| **s == 1).count();
    let index = Rational::new((g.order() / z) as i64, 1);
    let degree_form = f.degree().norm_squared().as_rational() == Some(index);
    if vanishes_off_center != degree_form {
        return Err(CharError::RamificationMismatch {
            vanishing: vanishes_off_center,
            degree: degree_form,
        });
    }
    Ok(FullyRamified {
        vanishes_off_center,
        degree_form,
    })
}

/// Same check against the center computed element-wise, for cross-checks.
pub fn vanishes_off(g: &Group, f: &ClassFunction, h: &Subgroup) -> bool {
    let classes = g.classes();
    (0..classes.len()).all(|c| h.contains(classes.reps[c]) || f.values[c].is_zero())
}

/// A class function carried onto a materialized subgroup.
#[derive(Debug)]
pub struct Restriction {
    pub group: Group,
    /// Parent index of each subgroup element.
    pub embedding: Vec<usize>,
    pub values: ClassFunction,
}

/// Materializes `h` as a group and transports `f` onto its classes.
pub fn restrict(g: &Group, f: &ClassFunction, h: &Subgroup) -> Restriction {
    let gens: Vec<_> = if h.generators.is_empty() {
        vec![Perm::identity(g.degree())]
    } else {
        h.generators.iter().map(|&x| g.element(x).clone()).collect()
    };
    let sub = Group::from_generators(g.degree(), &gens, h.order.max(1))
        .expect("subgroup closure stays within its own order");
    let embedding: Vec<usize> = sub
        .elements()
        .iter()
        .map(|p| g.index_of(p).expect("subgroup element lies in the parent"))
        .collect();
    let parent = g.classes();
    let values = sub
        .classes()
        .reps
        .iter()
        .map(|&r| f.values[parent.class_of[embedding[r]]].clone())
        .collect();
    Restriction {
        group: sub,
        embedding,
        values: ClassFunction::new(values),
    }
}

/// `[f_H, f_H]_H = 1`.
pub fn is_irreducible_on(g: &Group, f: &ClassFunction, h: &Subgroup) -> Result<bool, CharError> {
    let r = restrict(g, f, h);
    Ok(inner_product(&r.group, &r.values, &r.values)?.is_one())
}

/// Classes where `f` is exactly zero.
pub fn vanishing_locus(f: &ClassFunction) -> Vec<usize> {
    (0..f.len()).filter(|&j| f.values[j].is_zero()).collect()
}

/// Order of `Z(G)` read off the class sizes.
pub fn center_order(g: &Group) -> usize {
    g.classes().sizes.iter().filter(|s| **s == 1).count()
}
