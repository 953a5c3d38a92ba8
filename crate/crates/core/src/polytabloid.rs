//! Polytabloid expansions `e_t = κ_t {t}` and their inner products.
//!
//! A tabloid is keyed by packing, for every entry `e`, the index of the row holding `e`
//! into a `u128` (`bits` bits per entry). Expansions are kept sorted by key so that inner
//! products are a linear merge.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::tableau::{permutation_sign, Tableau, Tabloid};

/// A sparse integer combination of tabloids of one shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytabloidExpansion {
    shape: Partition,
    bits: u32,
    keys: Vec<u128>,
    coefs: Vec<i64>,
}

fn key_bits(shape: &Partition) -> Result<u32> {
    let rows = shape.len().max(2);
    let bits = usize::BITS - (rows - 1).leading_zeros();
    if shape.size() as u64 * bits as u64 > 128 {
        return Err(Error::ResourceLimit(format!(
            "{} does not fit a packed tabloid key ({} entries x {} bits)",
            shape.compact(),
            shape.size(),
            bits
        )));
    }
    Ok(bits)
}

/// Number of terms of any polytabloid of this shape, `Π_j (λ'_j)!`, saturating at `u64::MAX`.
pub fn expansion_size(shape: &Partition) -> u64 {
    let mut total: u64 = 1;
    for col in shape.conjugate().parts() {
        for k in 2..=*col as u64 {
            total = total.saturating_mul(k);
        }
    }
    total
}

/// All permutations of `0..len` with their signs.
fn signed_permutations(len: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..len).collect();
    // Heap's algorithm: every step is a single transposition.
    let mut c = vec![0usize; len];
    let mut sign = 1i64;
    out.push((perm.clone(), sign));
    let mut i = 0;
    while i < len {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    debug_assert!(out.iter().all(|(p, s)| permutation_sign(p) as i64 == *s));
    out
}

/// The polytabloid `e_t`: one `±1` term per element of the column stabiliser of `t`.
pub fn polytabloid(t: &Tableau, budget: &Budget) -> Result<PolytabloidExpansion> {
    let shape = t.shape().clone();
    let terms = expansion_size(&shape);
    if terms > budget.max_terms {
        return Err(Error::ResourceLimit(format!(
            "polytabloid of {} has {terms} terms (budget {})",
            shape.compact(),
            budget.max_terms
        )));
    }
    let bits = key_bits(&shape)?;
    let conj = shape.conjugate();

    let mut acc: Vec<(u128, i64)> = vec![(0, 1)];
    for (j, &len) in conj.parts().iter().enumerate() {
        let column: Vec<u32> = (1..=len as usize)
            .map(|r| t.get(r, j + 1).unwrap())
            .collect();
        let column_terms: Vec<(u128, i64)> = signed_permutations(len as usize)
            .into_iter()
            .map(|(perm, sign)| {
                // entry column[k] lands in row perm[k]
                let key = column.iter().zip(&perm).fold(0u128, |key, (&e, &row)| {
                    key | ((row as u128) << (bits * (e - 1)))
                });
                (key, sign)
            })
            .collect();
        let mut next = Vec::with_capacity(acc.len() * column_terms.len());
        for &(k, s) in &acc {
            for &(ck, cs) in &column_terms {
                next.push((k | ck, s * cs));
            }
        }
        acc = next;
    }
    acc.sort_unstable_by_key(|&(k, _)| k);
    debug_assert!(acc.windows(2).all(|w| w[0].0 != w[1].0));
    let (keys, coefs) = acc.into_iter().unzip();
    Ok(PolytabloidExpansion {
        shape,
        bits,
        keys,
        coefs,
    })
}

impl PolytabloidExpansion {
    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    fn encode(&self, tabloid: &Tabloid) -> u128 {
        let mut key = 0u128;
        for (r, row) in tabloid.rows().iter().enumerate() {
            for &e in row {
                key |= (r as u128) << (self.bits * (e - 1));
            }
        }
        key
    }

    fn decode(&self, key: u128) -> Tabloid {
        let n = self.shape.size();
        let mask = (1u128 << self.bits) - 1;
        let mut row_of = vec![0usize; n + 1];
        for (e, slot) in row_of.iter_mut().enumerate().skip(1) {
            *slot = ((key >> (self.bits * (e as u32 - 1))) & mask) as usize;
        }
        Tabloid::from_row_assignment(&self.shape, &row_of)
    }

    pub fn coefficient(&self, tabloid: &Tabloid) -> i64 {
        if tabloid.shape() != &self.shape {
            return 0;
        }
        let key = self.encode(tabloid);
        match self.keys.binary_search(&key) {
            Ok(i) => self.coefs[i],
            Err(_) => 0,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Tabloid, i64)> + '_ {
        self.keys
            .iter()
            .zip(&self.coefs)
            .map(|(&k, &c)| (self.decode(k), c))
    }

    /// Exact inner product; the merge accumulates in `i128`.
    pub(crate) fn inner_product_i128(&self, other: &PolytabloidExpansion) -> i128 {
        let (a, b) = (&self.keys, &other.keys);
        let (mut i, mut j) = (0, 0);
        let mut acc: i128 = 0;
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.coefs[i] as i128 * other.coefs[j] as i128;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Number of tabloids appearing in both expansions.
    pub fn common_terms(&self, other: &PolytabloidExpansion) -> usize {
        let (a, b) = (&self.keys, &other.keys);
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// One line per term, `coef<TAB>row1|row2|…`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (tabloid, coef) in self.terms() {
            let _ = writeln!(out, "{coef}\t{tabloid}");
        }
        out
    }
}

pub fn inner_product(a: &PolytabloidExpansion, b: &PolytabloidExpansion) -> Result<BigInt> {
    if a.shape != b.shape {
        return Err(Error::ShapeMismatch(
            a.shape.to_string(),
            b.shape.to_string(),
        ));
    }
    Ok(BigInt::from(a.inner_product_i128(b)))
}

/// `⟨e_s, e_t⟩` for two tableaux of the same shape.
pub fn polytabloid_inner_product(s: &Tableau, t: &Tableau, budget: &Budget) -> Result<BigInt> {
    if s.shape() != t.shape() {
        return Err(Error::ShapeMismatch(
            s.shape().to_string(),
            t.shape().to_string(),
        ));
    }
    inner_product(&polytabloid(s, budget)?, &polytabloid(t, budget)?)
}
