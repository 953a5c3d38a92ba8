//! Colouring graphs `G(s, t)` and their admissible colourings.
//!
//! Vertices are the columns of `s` (left) and of `t` (right); entry `l` gives an edge from the
//! column of `l` in `s` to its column in `t`. An admissible colouring gives every edge a row
//! index `r` so that each colour `r` is a perfect matching between the first `λ_r` columns on
//! either side. Colourings correspond to pairs `(u, v)` with `s ~col u ~row v ~col t`, and
//! their signed count is `±⟨e_s, e_t⟩`.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gram::Oracle;
use crate::partition::Partition;
use crate::polytabloid::{polytabloid, polytabloid_inner_product};
use crate::tableau::{permutation_sign, row_permutation_sign, Tableau};
use crate::valuation::{factorial, Prime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringGraph {
    shape: Partition,
    /// `edges[l - 1] = (i, j)`, 1-based columns of `l` in `s` and in `t`.
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleColouring {
    /// Colour (row index, 1-based) of each edge.
    pub colours: Vec<usize>,
    pub sign: i32,
}

pub fn build_graph(s: &Tableau, t: &Tableau) -> Result<ColouringGraph> {
    if !s.is_row_equivalent(t) {
        return Err(Error::NotRowEquivalent);
    }
    let (ps, pt) = (s.positions(), t.positions());
    let edges = ps
        .iter()
        .zip(&pt)
        .skip(1)
        .map(|(&(_, i), &(_, j))| (i + 1, j + 1))
        .collect();
    Ok(ColouringGraph {
        shape: s.shape().clone(),
        edges,
    })
}

impl ColouringGraph {
    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of edges from `s_i` to `t_j`.
    pub fn multiplicity(&self, i: usize, j: usize) -> usize {
        self.edges.iter().filter(|&&e| e == (i, j)).count()
    }

    pub fn max_multiplicity(&self) -> usize {
        let w = self.shape.first() as usize;
        (1..=w)
            .flat_map(|i| (1..=w).map(move |j| (i, j)))
            .map(|(i, j)| self.multiplicity(i, j))
            .max()
            .unwrap_or(0)
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (l, (i, j)) in self.edges.iter().enumerate() {
            let _ = writeln!(out, "edge {}: s_{i} t_{j}", l + 1);
        }
        out
    }

    /// Visits every admissible colouring; returns how many there were.
    pub fn for_each_colouring<F>(&self, budget: &Budget, mut visit: F) -> Result<u64>
    where
        F: FnMut(&[usize], i32),
    {
        let width = self.shape.first() as usize;
        let mut by_left: Vec<Vec<usize>> = vec![Vec::new(); width];
        for (l, &(i, _)) in self.edges.iter().enumerate() {
            by_left[i - 1].push(l);
        }
        let mut search = Search {
            graph: self,
            rows: self.shape.parts().iter().map(|&r| r as usize).collect(),
            by_left,
            colour: vec![0; self.edges.len()],
            right_used: vec![false; width],
            perm: Vec::with_capacity(width),
            signs: Vec::new(),
            count: 0,
            cap: budget.max_colourings,
        };
        search.colour_row(0, &mut visit)?;
        Ok(search.count)
    }

    pub fn enumerate_admissible(&self, budget: &Budget) -> Result<Vec<AdmissibleColouring>> {
        let mut out = Vec::new();
        self.for_each_colouring(budget, |c, sign| {
            out.push(AdmissibleColouring {
                colours: c.to_vec(),
                sign,
            })
        })?;
        Ok(out)
    }

    pub fn count_admissible(&self, budget: &Budget) -> Result<u64> {
        self.for_each_colouring(budget, |_, _| {})
    }

    pub fn signed_sum(&self, budget: &Budget) -> Result<BigInt> {
        let mut sum: i128 = 0;
        self.for_each_colouring(budget, |_, sign| sum += sign as i128)?;
        Ok(BigInt::from(sum))
    }
}

impl fmt::Display for ColouringGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

struct Search<'a> {
    graph: &'a ColouringGraph,
    rows: Vec<usize>,
    by_left: Vec<Vec<usize>>,
    colour: Vec<usize>,
    right_used: Vec<bool>,
    perm: Vec<usize>,
    signs: Vec<i32>,
    count: u64,
    cap: u64,
}

impl Search<'_> {
    fn colour_row<F: FnMut(&[usize], i32)>(&mut self, r: usize, visit: &mut F) -> Result<()> {
        if r == self.rows.len() {
            self.count += 1;
            if self.count > self.cap {
                return Err(Error::ResourceLimit(format!(
                    "more than {} admissible colourings",
                    self.cap
                )));
            }
            let sign = self.signs.iter().product();
            visit(&self.colour, sign);
            return Ok(());
        }
        // edges that only colour r can still reach must fit in row r
        let reach = self.rows.get(r + 1).copied().unwrap_or(0);
        self.match_vertex(r, 0, reach, visit)
    }

    fn match_vertex<F: FnMut(&[usize], i32)>(
        &mut self,
        r: usize,
        i: usize,
        reach: usize,
        visit: &mut F,
    ) -> Result<()> {
        let len = self.rows[r];
        if i == len {
            if !self.forced_edges_done(reach) {
                return Ok(());
            }
            self.signs.push(permutation_sign(&self.perm));
            let saved = std::mem::take(&mut self.right_used);
            self.right_used = vec![false; saved.len()];
            let saved_perm = std::mem::take(&mut self.perm);
            let res = self.colour_row(r + 1, visit);
            self.perm = saved_perm;
            self.right_used = saved;
            self.signs.pop();
            return res;
        }
        for k in 0..self.by_left[i].len() {
            let l = self.by_left[i][k];
            if self.colour[l] != 0 {
                continue;
            }
            let j = self.graph.edges[l].1 - 1;
            if j >= len || self.right_used[j] {
                continue;
            }
            self.colour[l] = r + 1;
            self.right_used[j] = true;
            self.perm.push(j);
            let res = self.match_vertex(r, i + 1, reach, visit);
            self.perm.pop();
            self.right_used[j] = false;
            self.colour[l] = 0;
            res?;
        }
        Ok(())
    }

    /// After row `r` is complete, no uncoloured edge may touch a column `>= reach`.
    fn forced_edges_done(&self, reach: usize) -> bool {
        self.graph
            .edges
            .iter()
            .zip(&self.colour)
            .all(|(&(i, j), &c)| c != 0 || (i <= reach && j <= reach))
    }
}

/// Counts pairs `(u, v)` with `s ~col u ~row v ~col t` directly: distinct column permutations
/// give distinct tabloids, so this is the number of tabloids shared by `e_s` and `e_t`.
pub fn count_tableau_pairs(s: &Tableau, t: &Tableau, budget: &Budget) -> Result<u64> {
    if s.shape() != t.shape() {
        return Err(Error::ShapeMismatch(
            s.shape().to_string(),
            t.shape().to_string(),
        ));
    }
    Ok(polytabloid(s, budget)?.common_terms(&polytabloid(t, budget)?) as u64)
}

pub fn colouring_count_matches_pairs(s: &Tableau, t: &Tableau, budget: &Budget) -> Result<bool> {
    let g = build_graph(s, t)?;
    Ok(g.count_admissible(budget)? == count_tableau_pairs(s, t, budget)?)
}

/// `signed_sum(G(s,t))` against `(-1)^{π_st} ⟨e_s, e_t⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedSumCheck {
    pub signed_sum: BigInt,
    pub sign: i32,
    pub inner_product: BigInt,
}

impl SignedSumCheck {
    pub fn holds(&self) -> bool {
        self.signed_sum == BigInt::from(self.sign) * &self.inner_product
    }
}

pub fn check_signed_sum(s: &Tableau, t: &Tableau, budget: &Budget) -> Result<SignedSumCheck> {
    let g = build_graph(s, t)?;
    Ok(SignedSumCheck {
        signed_sum: g.signed_sum(budget)?,
        sign: row_permutation_sign(s, t)?,
        inner_product: polytabloid_inner_product(s, t, budget)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MEdgeReport {
    pub m: usize,
    pub hat: Partition,
    pub hat_schaper: u32,
    pub divisor: BigInt,
    pub inner_product: BigInt,
}

impl MEdgeReport {
    pub fn holds(&self) -> bool {
        (&self.inner_product % &self.divisor) == BigInt::default()
    }
}

/// With `m` edges from `s_1` to `t_1` and `λ̂` the shape without its first column, checks
/// that `m! p^{ν_p(λ̂)}` divides `⟨e_s, e_t⟩`.
pub fn check_m_edge_divisibility(
    s: &Tableau,
    t: &Tableau,
    p: Prime,
    oracle: &Oracle,
) -> Result<MEdgeReport> {
    let g = build_graph(s, t)?;
    let m = g.multiplicity(1, 1);
    let hat = s.shape().remove_first_column();
    let hat_schaper = oracle.schaper(&hat, p)?.schaper_number;
    let divisor = factorial(m as u64) * BigInt::from(p.get()).pow(hat_schaper);
    let inner_product = polytabloid_inner_product(s, t, oracle.budget())?;
    Ok(MEdgeReport {
        m,
        hat,
        hat_schaper,
        divisor,
        inner_product,
    })
}
