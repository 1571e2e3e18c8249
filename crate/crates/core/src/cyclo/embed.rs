//! Exact zero tests through the complete splitting of `Z[ζ_e]` mod `q`.
//!
//! For a prime `q ≡ 1 (mod e)` the ring `Z[ζ_e]/(q)` is a product of `φ(e)`
//! copies of `F_q`, one per map `ζ_e ↦ z^t` with `gcd(t, e) = 1`. An element
//! whose images all vanish is therefore divisible by `q`, coefficient by
//! coefficient. If in addition its power-basis coefficients are known to lie
//! strictly between `-q/2` and `q/2`, it is zero.

use num_integer::Integer;

use super::{basis, Cyclotomic};
use crate::gflin::{mul_mod, pow_mod};

/// Largest absolute coefficient of `ζ_e^k` (`k < e`) in the power basis.
/// Multiplying an unreduced `L1` bound by this bounds the reduced coefficients.
pub fn reduction_growth(e: usize) -> u64 {
    basis(e)
        .powers
        .iter()
        .flat_map(|p| p.iter().map(|(_, c)| c.unsigned_abs()))
        .max()
        .unwrap_or(1)
        .max(1)
}

/// Sum of absolute coefficients, when every coefficient is an integer.
pub fn l1_norm(x: &Cyclotomic) -> Option<u64> {
    x.coeffs().iter().try_fold(0u64, |acc, c| {
        let v = c.to_i64()?;
        acc.checked_add(v.unsigned_abs())
    })
}

/// The `φ(e)` ring maps `Z[ζ_e] → F_q`.
#[derive(Debug, Clone)]
pub struct Embeddings {
    q: u64,
    e: usize,
    /// `z^t` for each unit `t`.
    roots: Vec<u64>,
    /// Position of the unit `-t`, i.e. the map composed with conjugation.
    conj: Vec<usize>,
}

impl Embeddings {
    /// `z` must have multiplicative order exactly `e` mod the prime `q`.
    pub fn new(q: u64, e: usize, z: u64) -> Self {
        let units: Vec<usize> = (0..e.max(1)).filter(|t| t.gcd(&e) == 1).collect();
        let roots = units.iter().map(|&t| pow_mod(z, t as u64, q)).collect();
        let conj = units
            .iter()
            .map(|&t| {
                let neg = (e - t) % e;
                units.iter().position(|&u| u == neg).unwrap_or(0)
            })
            .collect();
        Embeddings { q, e, roots, conj }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn count(&self) -> usize {
        self.roots.len()
    }

    /// Index of the map `σ ∘ conj` for map index `u`.
    pub fn conj_index(&self, u: usize) -> usize {
        self.conj[u]
    }

    /// Images of `x` under every map; `None` for non-integral coefficients
    /// or a conductor not dividing `e`.
    pub fn images(&self, x: &Cyclotomic) -> Option<Vec<u64>> {
        if !self.e.is_multiple_of(x.conductor()) {
            return None;
        }
        let ints: Vec<i64> = x.coeffs().iter().map(|c| c.to_i64()).collect::<Option<_>>()?;
        let step = (self.e / x.conductor()) as u64;
        let q = self.q;
        let reduced: Vec<u64> = ints.iter().map(|v| (*v as i128).rem_euclid(q as i128) as u64).collect();
        Some(
            self.roots
                .iter()
                .map(|&r| {
                    let zn = pow_mod(r, step, q);
                    let mut acc = 0u64;
                    let mut pw = 1u64;
                    for &c in &reduced {
                        if c != 0 {
                            acc = (acc + mul_mod(c, pw, q)) % q;
                        }
                        pw = mul_mod(pw, zn, q);
                    }
                    acc
                })
                .collect(),
        )
    }
}
