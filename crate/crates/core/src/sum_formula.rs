//! The Schaper sum formula
//!
//! `Σ_{i>=1} [S̄^λ_i : D^μ] = Σ_{(g,h,ν)} ν_p(|g|) (-1)^{l(g)+l(h)+1} [S^ν : D^μ]`
//!
//! over triples where `g` is a hook of `λ`, `h` a hook of `ν ⊳ λ`, and removing the two rim
//! hooks leaves the same partition.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::DecompositionTable;
use crate::partition::{Hook, Partition};
use crate::valuation::{valuation_u64, Prime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookTriple {
    pub g: Hook,
    /// `λ \ g`.
    pub core: Partition,
    /// Leg length of the strip added back to `core` to form `ν`.
    pub h_leg: usize,
    pub nu: Partition,
    pub alpha: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub nu: Partition,
    pub coef: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumFormulaResult {
    pub shape: Partition,
    pub prime: Prime,
    /// Nonzero aggregated coefficients, in reverse lexicographic order of `nu`.
    pub terms: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple: Option<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
}

impl SumFormulaResult {
    pub fn coefficient(&self, nu: &Partition) -> i64 {
        self.terms
            .iter()
            .find(|t| &t.nu == nu)
            .map_or(0, |t| t.coef)
    }
}

impl fmt::Display for SumFormulaResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu = self
            .simple
            .as_ref()
            .map_or_else(|| "μ".to_string(), Partition::compact);
        write!(f, "Σ[S̄^{}_i:D^{mu}] =", self.shape.compact())?;
        if self.terms.is_empty() {
            f.write_str(" 0")?;
        }
        for (k, t) in self.terms.iter().enumerate() {
            let sign = if t.coef < 0 {
                "-"
            } else if k == 0 {
                ""
            } else {
                "+"
            };
            let mag = t.coef.unsigned_abs();
            let mag = if mag == 1 {
                String::new()
            } else {
                mag.to_string()
            };
            write!(f, " {sign}{mag}[S^{}:D^{mu}]", t.nu.compact())?;
        }
        if let Some(v) = self.value {
            write!(f, " = {v}")?;
        }
        Ok(())
    }
}

/// All triples with nonzero coefficient, grouped by hook of `λ` in reading order.
pub fn enumerate_triples(l: &Partition, p: Prime) -> Vec<HookTriple> {
    let mut out = Vec::new();
    for g in l.hooks() {
        let v = valuation_u64(g.length as u64, p);
        if v == 0 {
            continue;
        }
        let core = l.remove_rim_hook(&g).expect("hook of λ");
        for (nu, h_leg) in core.add_rim_hooks(g.length) {
            if !nu.strictly_dominates(l).expect("same size") {
                continue;
            }
            let sign = if (g.leg + h_leg + 1) % 2 == 0 { 1 } else { -1 };
            out.push(HookTriple {
                g,
                core: core.clone(),
                h_leg,
                nu,
                alpha: sign * v as i64,
            });
        }
    }
    out
}

pub fn symbolic_rhs(l: &Partition, p: Prime) -> SumFormulaResult {
    let mut agg: BTreeMap<Partition, i64> = BTreeMap::new();
    for t in enumerate_triples(l, p) {
        *agg.entry(t.nu).or_insert(0) += t.alpha;
    }
    let terms = agg
        .into_iter()
        .rev()
        .filter(|&(_, c)| c != 0)
        .map(|(nu, coef)| Term { nu, coef })
        .collect();
    SumFormulaResult {
        shape: l.clone(),
        prime: p,
        terms,
        simple: None,
        value: None,
        bound: None,
    }
}

/// `Σ a_ν [S^ν : D^μ]`. Entries with `μ` not dominating `ν` are zero by unitriangularity and
/// need not be tabled; every other needed entry must be present.
pub fn numeric_rhs(
    l: &Partition,
    mu: &Partition,
    p: Prime,
    table: &DecompositionTable,
) -> Result<i64> {
    Ok(evaluate(l, mu, p, table)?.value.expect("evaluated"))
}

/// The symbolic right-hand side together with its value at `μ`.
pub fn evaluate(
    l: &Partition,
    mu: &Partition,
    p: Prime,
    table: &DecompositionTable,
) -> Result<SumFormulaResult> {
    if !mu.is_p_regular(p) {
        return Err(Error::NotPRegular(mu.to_string(), p.get()));
    }
    if mu == l {
        return Err(Error::SameShape(l.to_string()));
    }
    if mu.size() != l.size() {
        return Err(Error::SizeMismatch(l.size(), mu.size()));
    }
    if table.prime() != p {
        return Err(Error::Schema(format!(
            "table is for p = {}, not {p}",
            table.prime()
        )));
    }
    let mut result = symbolic_rhs(l, p);
    let mut missing = Vec::new();
    let mut value = 0i64;
    for t in &result.terms {
        if !mu.dominates(&t.nu)? {
            continue;
        }
        match table.get(&t.nu, mu) {
            Some(m) => value += t.coef * m as i64,
            None => missing.push(t.nu.compact()),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingEntry(missing));
    }
    result.simple = Some(mu.clone());
    result.value = Some(value);
    Ok(result)
}

/// `⌊numeric_rhs / ν_p(λ)⌋`, a bound on `[S^λ : D^μ]`.
pub fn improved_upper_bound(
    l: &Partition,
    mu: &Partition,
    p: Prime,
    table: &DecompositionTable,
    schaper: u32,
) -> Result<i64> {
    if schaper == 0 {
        return Err(Error::ZeroSchaper);
    }
    Ok(numeric_rhs(l, mu, p, table)?.div_euclid(schaper as i64))
}

/// `numeric_rhs(λ, λ^r)`: the index of the Schaper layer holding `D^{λ^r}`, so at least
/// `ν_p(λ)`.
pub fn regularisation_layer_check(
    l: &Partition,
    p: Prime,
    table: &DecompositionTable,
) -> Result<i64> {
    if l.is_p_regular(p) {
        return Err(Error::AlreadyRegular(l.to_string(), p.get()));
    }
    numeric_rhs(l, &l.regularise(p), p, table)
}
