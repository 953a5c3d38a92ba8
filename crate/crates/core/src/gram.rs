//! Ground-truth Schaper numbers from the Gram matrix of the Specht lattice.
//!
//! The Schaper number `ν_p(λ)` is the least `k` such that some pair of lattice vectors has
//! inner product not divisible by `p^(k+1)`. By bilinearity every inner product of lattice
//! vectors is an integer combination of Gram entries over the standard polytabloid basis, so
//! its valuation is at least the minimum entry valuation, and a basis pair attains that
//! minimum. The Gram matrix is nonsingular over the rationals, so the minimum is finite.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::io::ResultCache;
use crate::partition::Partition;
use crate::polytabloid::{expansion_size, polytabloid};
use crate::tableau::{hook_length_count, standard_tableaux, Tableau};
use crate::valuation::{valuation, Prime, Valuation};

/// Gram matrix of the standard polytabloid basis.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub shape: Partition,
    pub basis: Vec<Tableau>,
    entries: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub shape: Partition,
    pub prime: Prime,
    pub schaper_number: u32,
    pub witness: (Tableau, Tableau),
    pub entry_value: BigInt,
}

/// Checks a shape against the budget; returns `(dimension, terms per polytabloid)`.
pub fn check_budget(shape: &Partition, budget: &Budget) -> Result<(u64, u64)> {
    let dim = hook_length_count(shape);
    let dim = dim.to_u64().unwrap_or(u64::MAX);
    if dim > budget.max_basis {
        return Err(Error::ResourceLimit(format!(
            "{} has {dim} standard tableaux (budget {})",
            shape.compact(),
            budget.max_basis
        )));
    }
    let terms = expansion_size(shape);
    if terms > budget.max_terms {
        return Err(Error::ResourceLimit(format!(
            "{} polytabloids have {terms} terms (budget {})",
            shape.compact(),
            budget.max_terms
        )));
    }
    let ops = (dim.saturating_mul(dim + 1) / 2).saturating_mul(terms.saturating_mul(2));
    if ops > budget.max_ops {
        return Err(Error::ResourceLimit(format!(
            "{} needs about {ops} term operations (budget {})",
            shape.compact(),
            budget.max_ops
        )));
    }
    Ok((dim, terms))
}

pub fn gram_matrix(shape: &Partition, budget: &Budget) -> Result<GramMatrix> {
    check_budget(shape, budget)?;
    let basis: Vec<Tableau> = standard_tableaux(shape).collect();
    let expansions = basis
        .par_iter()
        .map(|t| polytabloid(t, budget))
        .collect::<Result<Vec<_>>>()?;
    let dim = basis.len();
    let upper: Vec<Vec<i128>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            (i..dim)
                .map(|j| expansions[i].inner_product_i128(&expansions[j]))
                .collect()
        })
        .collect();
    drop(expansions);
    let mut entries = vec![vec![BigInt::default(); dim]; dim];
    for (i, row) in upper.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            let j = i + k;
            let v = BigInt::from(v);
            entries[j][i] = v.clone();
            entries[i][j] = v;
        }
    }
    Ok(GramMatrix {
        shape: shape.clone(),
        basis,
        entries,
    })
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// Minimum `p`-adic valuation over nonzero entries, with the first pair `(i, j)`,
    /// `i <= j`, attaining it.
    pub fn min_valuation(&self, p: Prime) -> Option<(u32, usize, usize)> {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                if let Valuation::Finite(v) = valuation(&self.entries[i][j], p) {
                    if best.is_none_or(|(b, _, _)| v < b) {
                        best = Some((v, i, j));
                        if v == 0 {
                            return best;
                        }
                    }
                }
            }
        }
        best
    }

    pub fn schaper(&self, p: Prime) -> OracleResult {
        let (v, i, j) = self
            .min_valuation(p)
            .expect("the Gram matrix of a Specht lattice is nonsingular");
        OracleResult {
            shape: self.shape.clone(),
            prime: p,
            schaper_number: v,
            witness: (self.basis[i].clone(), self.basis[j].clone()),
            entry_value: self.entries[i][j].clone(),
        }
    }
}

pub fn schaper_number(shape: &Partition, p: Prime, budget: &Budget) -> Result<OracleResult> {
    Ok(gram_matrix(shape, budget)?.schaper(p))
}

/// Memoising oracle, optionally backed by an on-disk cache.
pub struct Oracle {
    budget: Budget,
    memo: Mutex<HashMap<(Partition, Prime), OracleResult>>,
    cache: Option<Arc<ResultCache>>,
}

impl Oracle {
    pub fn new(budget: Budget) -> Self {
        Oracle {
            budget,
            memo: Mutex::new(HashMap::new()),
            cache: None,
        }
    }

    pub fn with_cache(budget: Budget, cache: Arc<ResultCache>) -> Self {
        Oracle {
            budget,
            memo: Mutex::new(HashMap::new()),
            cache: Some(cache),
        }
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    fn lookup(&self, shape: &Partition, p: Prime) -> Option<OracleResult> {
        if let Some(hit) = self.memo.lock().unwrap().get(&(shape.clone(), p)) {
            return Some(hit.clone());
        }
        let hit = self.cache.as_ref()?.get(shape, p).ok().flatten()?;
        self.memo
            .lock()
            .unwrap()
            .insert((shape.clone(), p), hit.clone());
        Some(hit)
    }

    fn store(&self, result: &OracleResult) -> Result<()> {
        self.memo
            .lock()
            .unwrap()
            .insert((result.shape.clone(), result.prime), result.clone());
        if let Some(cache) = &self.cache {
            cache.put(result)?;
        }
        Ok(())
    }

    pub fn schaper(&self, shape: &Partition, p: Prime) -> Result<OracleResult> {
        Ok(self.schaper_many(shape, &[p])?.remove(0))
    }

    /// Schaper numbers for several primes from a single Gram matrix.
    pub fn schaper_many(&self, shape: &Partition, primes: &[Prime]) -> Result<Vec<OracleResult>> {
        let cached: Vec<Option<OracleResult>> =
            primes.iter().map(|&p| self.lookup(shape, p)).collect();
        if cached.iter().all(Option::is_some) {
            return Ok(cached.into_iter().flatten().collect());
        }
        let gram = gram_matrix(shape, &self.budget)?;
        let mut out = Vec::with_capacity(primes.len());
        for (&p, hit) in primes.iter().zip(cached) {
            let result = match hit {
                Some(r) => r,
                None => {
                    let r = gram.schaper(p);
                    self.store(&r)?;
                    r
                }
            };
            out.push(result);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_and_sign_representations() {
        let g = gram_matrix(&part("4"), &Budget::default()).unwrap();
        assert_eq!(g.dim(), 1);
        assert_eq!(g.entry(0, 0), &BigInt::from(1));
        let g = gram_matrix(&part("1,1,1,1"), &Budget::default()).unwrap();
        assert_eq!(g.entry(0, 0), &BigInt::from(24));
    }

    #[test]
    fn two_one_gram_is_frozen() {
        // basis 12/3 and 13/2; values from the expansion, checked by hand:
        // e_{12/3} = {12|3} - {23|1}, e_{13/2} = {13|2} - {23|1}
        let g = gram_matrix(&part("2,1"), &Budget::default()).unwrap();
        let got: Vec<Vec<i64>> = g
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect();
        assert_eq!(got, vec![vec![2, 1], vec![1, 2]]);
    }

    #[test]
    fn pinned_schaper_numbers() {
        let b = Budget::default();
        assert_eq!(
            schaper_number(&part("1,1,1,1"), Prime::TWO, &b)
                .unwrap()
                .schaper_number,
            3
        );
        assert_eq!(
            schaper_number(&part("3,2,1"), Prime::TWO, &b)
                .unwrap()
                .schaper_number,
            0
        );
        assert_eq!(
            schaper_number(&part("2,2"), Prime::TWO, &b)
                .unwrap()
                .schaper_number,
            1
        );
    }

    #[test]
    fn witness_attains_minimum() {
        let r = schaper_number(&part("2,2,1"), Prime::TWO, &Budget::default()).unwrap();
        assert_eq!(
            valuation(&r.entry_value, Prime::TWO),
            Valuation::Finite(r.schaper_number)
        );
        let direct = crate::polytabloid::polytabloid_inner_product(
            &r.witness.0,
            &r.witness.1,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(direct, r.entry_value);
    }

    #[test]
    fn over_budget_is_an_error() {
        let tight = Budget {
            max_basis: 3,
            ..Budget::default()
        };
        assert!(matches!(
            schaper_number(&part("3,2,1"), Prime::TWO, &tight),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn oracle_memoises() {
        let oracle = Oracle::new(Budget::default());
        let a = oracle.schaper(&part("2,2,2"), Prime::TWO).unwrap();
        let b = oracle.schaper(&part("2,2,2"), Prime::TWO).unwrap();
        assert_eq!(a, b);
        let both = oracle
            .schaper_many(&part("1,1,1"), &[Prime::TWO, Prime::THREE])
            .unwrap();
        assert_eq!(both[0].schaper_number, 1);
        assert_eq!(both[1].schaper_number, 1);
    }
}
