//! Exact arithmetic in cyclotomic fields.
//!
//! An element of `Q(ζ_n)` is stored as its coefficient vector in the power
//! basis `1, ζ_n, ..., ζ_n^{φ(n)-1}`, i.e. as the remainder of a polynomial in
//! `ζ_n` modulo the cyclotomic polynomial `Φ_n`. That remainder is unique, so
//! two values of the same conductor are equal iff their vectors are equal.
//! Rational values are always stored with conductor 1.

mod embed;
mod rational;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;

pub use embed::{l1_norm, reduction_growth, Embeddings};
pub use rational::{ParseRationalError, Rational};

/// Reduction data for one conductor.
#[derive(Debug)]
struct Basis {
    phi: usize,
    /// `powers[k]` is `ζ_n^k` reduced mod `Φ_n`, as sparse `(index, coeff)` pairs.
    powers: Vec<Vec<(usize, i64)>>,
}

fn basis(n: usize) -> Arc<Basis> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Basis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.read().unwrap().get(&n) {
        return b.clone();
    }
    let b = Arc::new(build_basis(n));
    cache.write().unwrap().entry(n).or_insert(b).clone()
}

fn build_basis(n: usize) -> Basis {
    let poly = cyclotomic_polynomial(n);
    let phi = poly.len() - 1;
    // x^phi = -(c_0 + c_1 x + ... + c_{phi-1} x^{phi-1}) since Φ_n is monic
    let mut powers = Vec::with_capacity(n);
    let mut cur = vec![0i64; phi.max(1)];
    cur[0] = 1;
    for k in 0..n {
        if k > 0 {
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * poly[i];
                }
            }
        }
        powers.push(
            cur.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| (i, *c))
                .collect(),
        );
    }
    Basis { phi, powers }
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial,
/// obtained by dividing `x^n - 1` by `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    static CACHE: OnceLock<RwLock<HashMap<usize, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = divide_monic(&num, &cyclotomic_polynomial(d));
    }
    cache.write().unwrap().insert(n, num.clone());
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0), "inexact cyclotomic division");
    quot
}

/// Euler's totient, as the degree of `Φ_n`.
pub fn totient(n: usize) -> usize {
    basis(n).phi
}

/// An exact element of a cyclotomic field.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: usize,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    /// `ζ_n^k`, with `k` taken mod `n`.
    pub fn root(n: usize, k: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let k = k.rem_euclid(n as i64) as usize;
        let mut full = vec![Rational::zero(); n];
        full[k] = Rational::one();
        Self::reduce_full(n, full)
    }

    /// `Σ c_k ζ_n^k` for a coefficient vector indexed by exponent (`k < n`).
    pub fn from_power_sum(n: usize, coeffs: &[Rational]) -> Self {
        assert!(coeffs.len() <= n, "more exponents than the conductor");
        let mut full = coeffs.to_vec();
        full.resize(n, Rational::zero());
        Self::reduce_full(n, full)
    }

    /// Reduces a length-`n` vector indexed by exponent mod `Φ_n`.
    fn reduce_full(n: usize, full: Vec<Rational>) -> Self {
        debug_assert_eq!(full.len(), n);
        if let Some(ints) = full.iter().map(|c| c.to_i64().map(i128::from)).collect::<Option<Vec<_>>>() {
            if let Some(r) = Self::reduce_full_int(n, ints) {
                return r;
            }
        }
        let b = basis(n);
        let mut out: Vec<Rational> = full[..b.phi].to_vec();
        for (k, c) in full.iter().enumerate().skip(b.phi) {
            if c.is_zero() {
                continue;
            }
            for &(i, p) in &b.powers[k] {
                out[i] = &out[i] + &(c * &Rational::from_integer(p));
            }
        }
        Cyclotomic {
            conductor: n,
            coeffs: out,
        }
        .normalized()
    }

    /// Integer fast path for [`Self::reduce_full`]; `None` on overflow.
    fn reduce_full_int(n: usize, full: Vec<i128>) -> Option<Self> {
        let b = basis(n);
        let mut out: Vec<i128> = full[..b.phi].to_vec();
        for (k, &c) in full.iter().enumerate().skip(b.phi) {
            if c == 0 {
                continue;
            }
            for &(i, p) in &b.powers[k] {
                out[i] = out[i].checked_add(c.checked_mul(p as i128)?)?;
            }
        }
        let coeffs = out
            .into_iter()
            .map(|c| match i64::try_from(c) {
                Ok(v) => Rational::from_integer(v),
                Err(_) => Rational::from_big(num_rational::BigRational::from_integer(c.into())),
            })
            .collect();
        Some(
            Cyclotomic {
                conductor: n,
                coeffs,
            }
            .normalized(),
        )
    }

    fn normalized(mut self) -> Self {
        if self.conductor > 1 && self.coeffs[1..].iter().all(Rational::is_zero) {
            self.coeffs.truncate(1);
            self.conductor = 1;
        }
        self
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    /// Canonical power-basis coefficients (length `φ(conductor)`).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Canonical coefficients in `Q(ζ_n)`. `n` must be a multiple of the conductor.
    pub fn coeffs_in(&self, n: usize) -> Vec<Rational> {
        assert!(
            n.is_multiple_of(self.conductor),
            "conductor {} does not divide {n}",
            self.conductor
        );
        if n == self.conductor {
            return self.coeffs.clone();
        }
        let step = n / self.conductor;
        let mut full = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            full[k * step] = c.clone();
        }
        let lifted = Self::reduce_full(n, full);
        if lifted.conductor == n {
            lifted.coeffs
        } else {
            let mut v = vec![Rational::zero(); totient(n)];
            v[0] = lifted.coeffs[0].clone();
            v
        }
    }

    fn full_in(&self, n: usize) -> Vec<Rational> {
        let mut v = self.coeffs_in(n);
        v.resize(n, Rational::zero());
        v
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Complex conjugation `ζ_n ↦ ζ_n^{-1}`.
    pub fn conjugate(&self) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let mut full = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            full[(n - k) % n] = c.clone();
        }
        Self::reduce_full(n, full)
    }

    /// `a · conj(a)`.
    pub fn norm_squared(&self) -> Self {
        self * &self.conjugate()
    }

    /// Numerical value at `ζ_n = exp(2πi/n)`. Diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let t = std::f64::consts::TAU * k as f64 / n;
            let c = c.to_f64();
            (re + c * t.cos(), im + c * t.sin())
        })
    }

    /// Image under the ring map sending `ζ_e ↦ z` in `Z/qZ`, where `z` has
    /// multiplicative order `e` and the conductor divides `e`. `None` when a
    /// coefficient denominator is divisible by `q`.
    pub fn eval_mod(&self, q: u64, e: usize, z: u64) -> Option<u64> {
        assert!(e.is_multiple_of(self.conductor), "conductor must divide e");
        let zn = crate::gflin::pow_mod(z, (e / self.conductor) as u64, q);
        let mut acc = 0u64;
        let mut pw = 1u64;
        for c in &self.coeffs {
            if !c.is_zero() {
                let term = crate::gflin::mul_mod(c.mod_prime(q)?, pw, q);
                acc = (acc + term) % q;
            }
            pw = crate::gflin::mul_mod(pw, zn, q);
        }
        Some(acc)
    }

    /// Lexicographic comparison of coefficient vectors in `Q(ζ_n)`.
    pub fn cmp_in(&self, other: &Self, n: usize) -> Ordering {
        self.coeffs_in(n).cmp(&other.coeffs_in(n))
    }

    fn combine(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        if self.conductor == other.conductor {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect();
            return Cyclotomic {
                conductor: self.conductor,
                coeffs,
            }
            .normalized();
        }
        let n = self.conductor.lcm(&other.conductor);
        let a = self.coeffs_in(n);
        let b = other.coeffs_in(n);
        Cyclotomic {
            conductor: n,
            coeffs: a.iter().zip(&b).map(|(x, y)| f(x, y)).collect(),
        }
        .normalized()
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        // different conductors can only agree if neither is rational
        if self.is_rational() || other.is_rational() {
            return false;
        }
        let n = self.conductor.lcm(&other.conductor);
        self.coeffs_in(n) == other.coeffs_in(n)
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_rational() {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.is_rational() {
            return self.scale(&rhs.coeffs[0]);
        }
        let n = self.conductor.lcm(&rhs.conductor);
        let a = self.full_in(n);
        let b = rhs.full_in(n);
        if let Some(r) = mul_int(n, &a, &b) {
            return r;
        }
        let mut full = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let k = (i + j) % n;
                full[k] = &full[k] + &(x * y);
            }
        }
        Cyclotomic::reduce_full(n, full)
    }
}

/// Product of two integral coefficient vectors, or `None` if either has a
/// non-integer coefficient or the arithmetic overflows.
fn mul_int(n: usize, a: &[Rational], b: &[Rational]) -> Option<Cyclotomic> {
    let sparse = |v: &[Rational]| -> Option<Vec<(usize, i128)>> {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| x.to_i64().map(|x| (i, x as i128)))
            .collect()
    };
    let (a, b) = (sparse(a)?, sparse(b)?);
    let mut full = vec![0i128; n];
    for &(i, x) in &a {
        for &(j, y) in &b {
            let k = (i + j) % n;
            full[k] = full[k].checked_add(x.checked_mul(y)?)?;
        }
    }
    Cyclotomic::reduce_full_int(n, full)
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_op {
    ($trait:ident, $method:ident) => {
        impl $trait for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| &acc + &x)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(r: Rational) -> Self {
        Cyclotomic::from_rational(r)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_integer(n)
    }
}

/// Renders as `a0 + a1*z(n)^1 + ...`, omitting zero terms.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*z({})^{k}", self.conductor)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid cyclotomic term {term:?}: {reason}")]
pub struct ParseCyclotomicError {
    pub term: String,
    pub reason: &'static str,
}

impl FromStr for Cyclotomic {
    type Err = ParseCyclotomicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut acc = Cyclotomic::zero();
        for raw in s.split('+') {
            let term = raw.trim();
            let err = |reason| ParseCyclotomicError {
                term: term.to_string(),
                reason,
            };
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let value = match term.split_once('*') {
                None if term.starts_with("z(") => parse_root(term).ok_or_else(|| err("bad root"))?,
                None => Cyclotomic::from_rational(
                    term.parse().map_err(|_| err("bad rational"))?,
                ),
                Some((c, root)) => {
                    let c: Rational = c.trim().parse().map_err(|_| err("bad coefficient"))?;
                    parse_root(root.trim())
                        .ok_or_else(|| err("bad root"))?
                        .scale(&c)
                }
            };
            acc = &acc + &value;
        }
        Ok(acc)
    }
}

fn parse_root(s: &str) -> Option<Cyclotomic> {
    let rest = s.strip_prefix("z(")?;
    let (n, rest) = rest.split_once(')')?;
    let n: usize = n.trim().parse().ok()?;
    let k: i64 = match rest.trim().strip_prefix('^') {
        Some(k) => k.trim().parse().ok()?,
        None if rest.trim().is_empty() => 1,
        None => return None,
    };
    (n >= 1).then(|| Cyclotomic::root(n, k))
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    const CONDUCTORS: [usize; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15];

    fn element() -> impl Strategy<Value = Cyclotomic> {
        prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| {
            (prop::collection::vec(-4i64..=4, n), 1i64..=3).prop_map(move |(c, den)| {
                let coeffs: Vec<Rational> = c.iter().map(|v| Rational::new(*v, den)).collect();
                Cyclotomic::from_power_sum(n, &coeffs)
            })
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in element(), b in element(), c in element()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn conjugation(a in element(), b in element()) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
            let (re, im) = a.to_complex();
            let (nr, ni) = a.norm_squared().to_complex();
            prop_assert!((nr - (re * re + im * im)).abs() < 1e-6);
            prop_assert!(ni.abs() < 1e-6);
        }

        #[test]
        fn text_round_trip(a in element()) {
            let back: Cyclotomic = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn reduction_mod_q_is_a_ring_map(a in element(), b in element()) {
            let f = crate::gflin::field_above(2520, 1000).unwrap();
            let ev = |x: &Cyclotomic| x.eval_mod(f.q, 2520, f.z).unwrap();
            prop_assert_eq!(ev(&(&a * &b)), f.mul(ev(&a), ev(&b)));
            prop_assert_eq!(ev(&(&a + &b)), f.add(ev(&a), ev(&b)));
        }
    }
}
