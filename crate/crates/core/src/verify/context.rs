use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::charops::{is_fully_ramified, is_faithful, CharError, FullyRamified};
use crate::chartable::CharacterTable;
use crate::cyclo::Cyclotomic;
use crate::groupkit::{is_nilpotent, is_p_group, is_solvable, sylow_subgroup, Group, Subgroup};

use super::{ProductTable, VerifyError};

/// A table plus the derived data the suites share, computed on first use.
pub struct GroupContext {
    spec: String,
    table: Arc<CharacterTable>,
    products: OnceLock<Result<ProductTable, VerifyError>>,
    faithful: OnceLock<Vec<usize>>,
    kernels: OnceLock<Vec<Vec<bool>>>,
    centers: OnceLock<Vec<Vec<bool>>>,
    norms: OnceLock<Vec<Vec<Cyclotomic>>>,
    ramified: OnceLock<Vec<Result<FullyRamified, CharError>>>,
    nilpotent: OnceLock<bool>,
    solvable: OnceLock<bool>,
    sylows: Mutex<HashMap<u64, Arc<Subgroup>>>,
}

impl GroupContext {
    pub fn new(spec: impl Into<String>, table: Arc<CharacterTable>) -> Self {
        GroupContext {
            spec: spec.into(),
            table,
            products: OnceLock::new(),
            faithful: OnceLock::new(),
            kernels: OnceLock::new(),
            centers: OnceLock::new(),
            norms: OnceLock::new(),
            ramified: OnceLock::new(),
            nilpotent: OnceLock::new(),
            solvable: OnceLock::new(),
            sylows: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn group(&self) -> &Group {
        self.table.group()
    }

    pub fn products(&self) -> Result<&ProductTable, VerifyError> {
        self.products
            .get_or_init(|| ProductTable::build(&self.table))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Indices of the faithful irreducibles.
    pub fn faithful(&self) -> &[usize] {
        self.faithful.get_or_init(|| {
            (0..self.table.len())
                .filter(|&i| is_faithful(self.table.character(i)))
                .collect()
        })
    }

    /// Per character, the classes in its kernel.
    pub fn kernels(&self) -> &[Vec<bool>] {
        self.kernels.get_or_init(|| {
            self.table
                .characters()
                .iter()
                .map(|c| c.values().iter().map(|v| v == c.degree()).collect())
                .collect()
        })
    }

    /// `|χ(x)|²` per character and class.
    pub fn norms(&self) -> &[Vec<Cyclotomic>] {
        self.norms
            .get_or_init(|| self.table.characters().iter().map(|c| c.norms_squared()).collect())
    }

    /// Per character, the classes in `Z(χ)`.
    pub fn centers(&self) -> &[Vec<bool>] {
        self.centers.get_or_init(|| {
            self.norms()
                .iter()
                .map(|row| row.iter().map(|n| *n == row[0]).collect())
                .collect()
        })
    }

    pub fn fully_ramified(&self, i: usize) -> Result<FullyRamified, CharError> {
        self.ramified
            .get_or_init(|| {
                self.table
                    .characters()
                    .iter()
                    .map(|c| is_fully_ramified(self.group(), c))
                    .collect()
            })[i]
            .clone()
    }

    pub fn is_nilpotent(&self) -> bool {
        *self.nilpotent.get_or_init(|| is_nilpotent(self.group()))
    }

    pub fn is_solvable(&self) -> bool {
        *self.solvable.get_or_init(|| is_solvable(self.group()))
    }

    pub fn p_group_prime(&self) -> Option<u64> {
        is_p_group(self.group())
    }

    pub fn sylow(&self, p: u64) -> Arc<Subgroup> {
        let mut cache = self.sylows.lock().expect("sylow cache poisoned");
        cache
            .entry(p)
            .or_insert_with(|| Arc::new(sylow_subgroup(self.group(), p)))
            .clone()
    }

    /// Classes of size one.
    pub fn central_classes(&self) -> Vec<bool> {
        self.group().classes().sizes.iter().map(|s| *s == 1).collect()
    }
}
