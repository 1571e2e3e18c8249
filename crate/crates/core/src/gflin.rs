//! Prime-field arithmetic and simultaneous eigenspace splitting.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("no prime q = 1 mod {exponent} found within the search cap")]
    NoPrime { exponent: u64 },
    #[error("matrix {matrix} is not diagonalizable on a subspace of dimension {dim}")]
    NotDiagonalizable { matrix: usize, dim: usize },
    #[error("{remaining} subspaces of dimension > 1 remain after all matrices were used")]
    Unsplit { remaining: usize },
    #[error("common eigenvector has zero coordinate at class 0")]
    ZeroLeading,
}

pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `q`.
pub fn inv_mod(a: u64, q: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(q), "zero has no inverse");
    pow_mod(a, q - 2, q)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `Z/qZ` together with a primitive `e`-th root of unity `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub q: u64,
    pub e: u64,
    pub z: u64,
}

impl PrimeField {
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.q)
    }

    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a, self.q)
    }

    pub fn pow(&self, a: u64, k: u64) -> u64 {
        pow_mod(a, k, self.q)
    }
}

const SEARCH_CAP: u64 = 10_000_000;

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Smallest prime `q = 1 (mod e)` with `q > 2·⌊√n⌋`, plus a primitive `e`-th root.
pub fn choose_field(exponent: u64, group_order: u64) -> Result<PrimeField, GfError> {
    field_above(exponent, 2 * isqrt(group_order))
}

/// Smallest prime `q = 1 (mod e)` with `q > lower_exclusive`, plus a primitive `e`-th root.
pub fn field_above(exponent: u64, lower_exclusive: u64) -> Result<PrimeField, GfError> {
    assert!(exponent >= 1);
    let e = exponent;
    // first q = 1 mod e strictly above the bound
    let mut q = (lower_exclusive / e) * e + 1;
    if q <= lower_exclusive {
        q += e;
    }
    for _ in 0..SEARCH_CAP {
        if is_prime(q) {
            let z = primitive_root_of_unity(e, q);
            return Ok(PrimeField { q, e, z });
        }
        q += e;
    }
    Err(GfError::NoPrime { exponent })
}

/// Scans `c = 2, 3, ...` for `c^((q-1)/e)` of exact order `e`.
fn primitive_root_of_unity(e: u64, q: u64) -> u64 {
    let primes = prime_factors(e);
    for c in 2..q.max(3) {
        let w = pow_mod(c, (q - 1) / e, q);
        if primes.iter().all(|r| pow_mod(w, e / r, q) != 1) {
            return w;
        }
    }
    1 % q
}

/// Dense square matrix over `Z/qZ`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGF {
    pub dim: usize,
    pub entries: Vec<u64>,
}

impl MatrixGF {
    pub fn new(dim: usize, entries: Vec<u64>, q: u64) -> Self {
        assert_eq!(entries.len(), dim * dim);
        MatrixGF {
            dim,
            entries: entries.into_iter().map(|x| x % q).collect(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        MatrixGF { dim, entries }
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.dim + c]
    }

    pub fn apply(&self, v: &[u64], f: &PrimeField) -> Vec<u64> {
        (0..self.dim)
            .map(|r| {
                let row = &self.entries[r * self.dim..(r + 1) * self.dim];
                row.iter()
                    .zip(v)
                    .fold(0u64, |acc, (a, b)| f.add(acc, f.mul(*a, *b)))
            })
            .collect()
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<u64>>, f: &PrimeField) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, *p));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<u64>], f: &PrimeField) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, f).len()
}

/// Basis of `{x : A x = 0}` for a `rows × ncols` matrix.
pub fn kernel(rows: &[Vec<u64>], ncols: usize, f: &PrimeField) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, f);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; ncols];
            v[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.sub(0, row[fc]);
            }
            v
        })
        .collect()
}

/// An invariant subspace, kept as an RREF basis so coordinates can be read
/// off the pivot columns.
struct Subspace {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn new(mut basis: Vec<Vec<u64>>, f: &PrimeField) -> Self {
        let pivots = rref(&mut basis, f);
        Subspace { basis, pivots }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Splits into eigenspaces of `m`, scanning eigenvalues upward.
    fn split(&self, m: &MatrixGF, index: usize, f: &PrimeField) -> Result<Vec<Subspace>, GfError> {
        let d = self.dim();
        // images[i][l]: coordinate l of M·b_i
        let images: Vec<Vec<u64>> = self
            .basis
            .iter()
            .map(|b| {
                let mb = m.apply(b, f);
                self.pivots.iter().map(|&p| mb[p]).collect()
            })
            .collect();
        let mut parts = Vec::new();
        let mut found = 0;
        for lambda in 0..f.q {
            // rows of (A^T - λI), A[i][l] = images[i][l]
            let shifted: Vec<Vec<u64>> = (0..d)
                .map(|l| {
                    (0..d)
                        .map(|i| {
                            let a = images[i][l];
                            if i == l { f.sub(a, lambda) } else { a }
                        })
                        .collect()
                })
                .collect();
            let ker = kernel(&shifted, d, f);
            if ker.is_empty() {
                continue;
            }
            found += ker.len();
            let vectors = ker
                .iter()
                .map(|c| {
                    let mut v = vec![0u64; self.basis[0].len()];
                    for (ci, b) in c.iter().zip(&self.basis) {
                        if *ci != 0 {
                            for (x, y) in v.iter_mut().zip(b) {
                                *x = f.add(*x, f.mul(*ci, *y));
                            }
                        }
                    }
                    v
                })
                .collect();
            parts.push(Subspace::new(vectors, f));
            if found == d {
                return Ok(parts);
            }
        }
        Err(GfError::NotDiagonalizable { matrix: index, dim: d })
    }
}

/// Common one-dimensional eigenvectors of pairwise commuting matrices, each
/// scaled so its first coordinate is 1.
pub fn eigen_split(mats: &[MatrixGF], field: &PrimeField) -> Result<Vec<Vec<u64>>, GfError> {
    let dim = mats.first().map_or(1, |m| m.dim);
    eigen_split_with(dim, mats.len(), |i| mats[i].clone(), field)
}

/// As [`eigen_split`], with the matrices produced on demand in index order.
pub fn eigen_split_with(
    dim: usize,
    count: usize,
    mut matrix: impl FnMut(usize) -> MatrixGF,
    field: &PrimeField,
) -> Result<Vec<Vec<u64>>, GfError> {
    let f = field;
    let full = (0..dim)
        .map(|i| {
            let mut v = vec![0u64; dim];
            v[i] = 1;
            v
        })
        .collect();
    let mut spaces = vec![Subspace::new(full, f)];
    for i in 0..count {
        if spaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        let m = matrix(i);
        let mut next = Vec::with_capacity(spaces.len());
        for s in spaces {
            if s.dim() == 1 {
                next.push(s);
            } else {
                next.extend(s.split(&m, i, f)?);
            }
        }
        spaces = next;
    }
    let remaining = spaces.iter().filter(|s| s.dim() > 1).count();
    if remaining > 0 {
        return Err(GfError::Unsplit { remaining });
    }
    spaces
        .into_iter()
        .map(|s| {
            let v = &s.basis[0];
            if v[0] == 0 {
                return Err(GfError::ZeroLeading);
            }
            let inv = f.inv(v[0]);
            Ok(v.iter().map(|x| f.mul(*x, inv)).collect())
        })
        .collect()
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    proptest! {
        #[test]
        fn rank_plus_nullity(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(0u64..7, 36)) {
            let f = field_above(1, 6).unwrap();
            prop_assert_eq!(f.q, 7);
            let m: Vec<Vec<u64>> = (0..rows).map(|r| seed[r * 6..r * 6 + cols].to_vec()).collect();
            let ker = kernel(&m, cols, &f);
            prop_assert_eq!(rank(&m, &f) + ker.len(), cols);
            for v in &ker {
                for row in &m {
                    let dot = row.iter().zip(v).fold(0, |acc, (a, b)| f.add(acc, f.mul(*a, *b)));
                    prop_assert_eq!(dot, 0);
                }
            }
        }
    }
}
