//! Tensor-product multiplicities `[χ_a χ_b, χ_c]` for a whole table.
//!
//! Candidates come from the image of the table in a large prime field, where
//! each multiplicity is a single modular dot product. Every row is then
//! certified exactly: `χ_a χ_b` must equal `Σ_c N_c χ_c` as cyclotomic values,
//! tested through the complete splitting of `Z[ζ_e]` (or by direct arithmetic
//! when some value is not integral).
//! Irreducible characters are linearly independent, so a certified row is the
//! decomposition.

use crate::chartable::CharacterTable;
use crate::cyclo::{l1_norm, reduction_growth, Cyclotomic, Embeddings, Rational};
use crate::gflin::field_above;

use super::VerifyError;

#[derive(Debug, Clone)]
pub struct ProductTable {
    k: usize,
    /// `mults[(a * k + b) * k + c]`, filled for all ordered pairs.
    mults: Vec<u64>,
}

impl ProductTable {
    pub fn build(t: &CharacterTable) -> Result<Self, VerifyError> {
        let g = t.group();
        let classes = g.classes();
        let k = t.len();
        let e = g.exponent();
        let order = g.order() as u64;
        let f = field_above(e, (1u64 << 31).max(4 * order)).map_err(|e| VerifyError::Products(e.to_string()))?;
        let image = |v: &Cyclotomic| {
            v.eval_mod(f.q, e as usize, f.z)
                .ok_or_else(|| VerifyError::Products("value not integral mod q".into()))
        };
        let img: Vec<Vec<u64>> = t
            .characters()
            .iter()
            .map(|c| c.values().iter().map(image).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        let order_inv = f.inv(order % f.q);
        let weight: Vec<u64> = classes
            .sizes
            .iter()
            .map(|s| f.mul(*s as u64, order_inv))
            .collect();
        // conj χ_c(x) = χ_c(x⁻¹)
        let conj: Vec<Vec<u64>> = img
            .iter()
            .map(|row| (0..k).map(|j| row[classes.inverse_class[j]]).collect())
            .collect();

        let mut mults = vec![0u64; k * k * k];
        let degrees = t.degrees();
        let mut prod = vec![0u64; k];
        for a in 0..k {
            for b in a..k {
                for j in 0..k {
                    prod[j] = f.mul(f.mul(img[a][j], img[b][j]), weight[j]);
                }
                for c in 0..k {
                    let n = (0..k).fold(0, |acc, j| f.add(acc, f.mul(prod[j], conj[c][j])));
                    if n > degrees[a] * degrees[b] {
                        return Err(VerifyError::Products(format!(
                            "multiplicity of χ_{c} in χ_{a}χ_{b} out of range"
                        )));
                    }
                    mults[(a * k + b) * k + c] = n;
                    mults[(b * k + a) * k + c] = n;
                }
            }
        }
        let table = ProductTable { k, mults };
        table.certify(t)?;
        Ok(table)
    }

    fn certify(&self, t: &CharacterTable) -> Result<(), VerifyError> {
        match self.certify_by_embeddings(t) {
            Some(r) => r,
            None => self.certify_exact(t),
        }
    }

    /// `χ_a χ_b − Σ N_c χ_c` vanishes in every embedding `Z[ζ_e] → F_Q`, with
    /// `Q` above twice a coefficient bound for that difference: an exact test.
    fn certify_by_embeddings(&self, t: &CharacterTable) -> Option<Result<(), VerifyError>> {
        let k = self.k;
        let e = t.group().exponent() as usize;
        let l1: Vec<Vec<u64>> = t
            .characters()
            .iter()
            .map(|c| c.values().iter().map(l1_norm).collect::<Option<_>>())
            .collect::<Option<_>>()?;
        let m = l1.iter().flatten().copied().max().unwrap_or(0) as u128;
        let d = t.degrees().into_iter().max().unwrap_or(1) as u128;
        let bound = reduction_growth(e) as u128 * (m * m + d * d * m);
        if bound >= 1 << 60 {
            return None;
        }
        let f = field_above(e as u64, 2 * bound as u64).ok()?;
        let emb = Embeddings::new(f.q, e, f.z);
        let img: Vec<Vec<Vec<u64>>> = t
            .characters()
            .iter()
            .map(|c| c.values().iter().map(|v| emb.images(v)).collect::<Option<_>>())
            .collect::<Option<_>>()?;
        for a in 0..k {
            for b in a..k {
                let row = self.row(a, b);
                for j in 0..k {
                    for u in 0..emb.count() {
                        let lhs = f.mul(img[a][j][u], img[b][j][u]);
                        let rhs = row
                            .iter()
                            .enumerate()
                            .filter(|(_, n)| **n > 0)
                            .fold(0, |acc, (c, n)| f.add(acc, f.mul(*n % f.q, img[c][j][u])));
                        if lhs != rhs {
                            return Some(Err(VerifyError::Products(format!(
                                "decomposition of χ_{a}χ_{b} failed exact certification"
                            ))));
                        }
                    }
                }
            }
        }
        Some(Ok(()))
    }

    fn certify_exact(&self, t: &CharacterTable) -> Result<(), VerifyError> {
        let k = self.k;
        let chars = t.characters();
        for a in 0..k {
            for b in a..k {
                let mut rebuilt = vec![Cyclotomic::zero(); k];
                for (c, &n) in self.row(a, b).iter().enumerate() {
                    if n == 0 {
                        continue;
                    }
                    let r = Rational::from_integer(n as i64);
                    for (v, x) in rebuilt.iter_mut().zip(chars[c].values()) {
                        *v = &*v + &x.scale(&r);
                    }
                }
                let exact = chars[a].values().iter().zip(chars[b].values());
                if exact.zip(&rebuilt).any(|((x, y), r)| &(x * y) != r) {
                    return Err(VerifyError::Products(format!(
                        "decomposition of χ_{a}χ_{b} failed exact certification"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn num_characters(&self) -> usize {
        self.k
    }

    /// Multiplicities of every irreducible in `χ_a χ_b`.
    pub fn row(&self, a: usize, b: usize) -> &[u64] {
        let start = (a * self.k + b) * self.k;
        &self.mults[start..start + self.k]
    }

    /// Multiplicities in `(Σ_{a ∈ phi} χ_a) · χ_b`.
    pub fn sum_row(&self, phi: &[usize], b: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.k];
        for &a in phi {
            for (o, n) in out.iter_mut().zip(self.row(a, b)) {
                *o += n;
            }
        }
        out
    }

    /// `Some((m, c))` when `χ_a χ_b = m χ_c`.
    pub fn single_constituent(&self, a: usize, b: usize) -> Option<(u64, usize)> {
        let mut nz = self.row(a, b).iter().enumerate().filter(|(_, n)| **n > 0);
        match (nz.next(), nz.next()) {
            (Some((c, n)), None) => Some((*n, c)),
            _ => None,
        }
    }
}
