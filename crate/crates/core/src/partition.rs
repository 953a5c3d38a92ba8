//! Integer partitions and the shape-level combinatorics built on them.
//!
//! Rows and columns are 1-based throughout, and reading a row past the last part yields 0.
//! Every window condition elsewhere in the crate is evaluated against this zero padding.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::valuation::{factorial_valuation, Prime};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

/// A cell of a Young diagram together with its arm and leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hook {
    pub row: usize,
    pub col: usize,
    pub arm: usize,
    pub leg: usize,
    pub length: usize,
}

/// `p` consecutive rows `start..start+p` sharing the positive length `length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SingularityWindow {
    pub start: usize,
    pub length: u32,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if let Some(pos) = parts.iter().position(|&x| x == 0) {
            return Err(Error::NotAPartition(format!(
                "zero part at position {}",
                pos + 1
            )));
        }
        if let Some(w) = parts.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(format!(
                "parts increase at position {}: {} < {}",
                w + 1,
                parts[w],
                parts[w + 1]
            )));
        }
        Ok(Partition { parts })
    }

    /// Builds a partition from parts that may contain trailing zeros or be unsorted.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The rectangle `(width^height)`.
    pub fn rectangle(width: u32, height: usize) -> Self {
        if width == 0 {
            return Partition::empty();
        }
        Partition {
            parts: vec![width; height],
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.parts.iter().map(|&x| x as usize).sum()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ_i`, 1-based, zero past the last row (and for `i == 0`).
    pub fn row(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn first(&self) -> u32 {
        self.row(1)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.first() as usize;
        let mut cols = vec![0u32; width];
        for &r in &self.parts {
            for c in cols.iter_mut().take(r as usize) {
                *c += 1;
            }
        }
        Partition { parts: cols }
    }

    /// Length of column `j` (1-based), i.e. `λ'_j`.
    pub fn column(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.parts.iter().take_while(|&&r| r as usize >= j).count()
    }

    fn check_same_size(&self, other: &Partition) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch(self.size(), other.size()));
        }
        Ok(())
    }

    /// Weak dominance `self ⊵ other`: every prefix sum of `self` is at least that of `other`.
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        self.check_same_size(other)?;
        let rows = self.len().max(other.len());
        let (mut a, mut b) = (0u64, 0u64);
        for i in 1..=rows {
            a += self.row(i) as u64;
            b += other.row(i) as u64;
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Strict dominance `self ⊳ other`.
    pub fn strictly_dominates(&self, other: &Partition) -> Result<bool> {
        Ok(self != other && self.dominates(other)?)
    }

    /// `λ ⋆ μ`: the rows of `λ` followed by the rows of `μ`.
    pub fn star(&self, other: &Partition) -> Result<Partition> {
        if let (Some(&last), Some(&first)) = (self.parts.last(), other.parts.first()) {
            if last < first {
                return Err(Error::NotComposable { last, first });
            }
        }
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Ok(Partition { parts })
    }

    /// Rows `from..=to` (1-based, clamped) as a partition of their own.
    pub fn block(&self, from: usize, to: usize) -> Partition {
        let lo = from.max(1) - 1;
        let hi = to.min(self.len());
        if lo >= hi {
            return Partition::empty();
        }
        Partition {
            parts: self.parts[lo..hi].to_vec(),
        }
    }

    pub fn remove_first_column(&self) -> Partition {
        Partition {
            parts: self
                .parts
                .iter()
                .filter(|&&r| r > 1)
                .map(|&r| r - 1)
                .collect(),
        }
    }

    /// `j ↦ z_j`, the number of parts equal to `j`; only nonzero entries.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &r in &self.parts {
            *m.entry(r).or_insert(0) += 1;
        }
        m
    }

    /// Maximal runs of equal parts as `(first row, length, run size)`.
    pub fn runs(&self) -> Vec<(usize, u32, usize)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.parts.len() {
            let mut j = i;
            while j + 1 < self.parts.len() && self.parts[j + 1] == self.parts[i] {
                j += 1;
            }
            out.push((i + 1, self.parts[i], j - i + 1));
            i = j + 1;
        }
        out
    }

    /// Every window of `p` consecutive equal positive rows, overlapping windows included.
    pub fn singularity_windows(&self, p: Prime) -> Vec<SingularityWindow> {
        let p = p.get() as usize;
        (1..=self.len())
            .filter(|&i| i + p - 1 <= self.len() && self.row(i) == self.row(i + p - 1))
            .map(|i| SingularityWindow {
                start: i,
                length: self.row(i),
            })
            .collect()
    }

    /// Maximum number of pairwise disjoint `p`-singularities.
    pub fn count_disjoint_singularities(&self, p: Prime) -> usize {
        self.runs()
            .iter()
            .map(|&(_, _, m)| m / p.get() as usize)
            .sum()
    }

    pub fn is_p_regular(&self, p: Prime) -> bool {
        self.count_disjoint_singularities(p) == 0
    }

    /// The `p`-regularisation: every box slides up its ladder
    /// `{(r - (p-1)k, c + k)}` to the highest free position.
    pub fn regularise(&self, p: Prime) -> Partition {
        let step = p.get() as usize - 1;
        // ladder index of the cell (i, j) is i + (p-1)(j-1)
        let mut ladder_counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &r) in self.parts.iter().enumerate() {
            for j in 0..r as usize {
                *ladder_counts.entry(i + 1 + step * j).or_insert(0) += 1;
            }
        }
        let mut rows: Vec<u32> = Vec::new();
        for (&ladder, &count) in &ladder_counts {
            let top_col = (ladder - 1) / step;
            for k in 0..count {
                let col = top_col - k;
                let row = ladder - step * col;
                if rows.len() < row {
                    rows.resize(row, 0);
                }
                rows[row - 1] += 1;
            }
        }
        Partition::new(rows).expect("regularisation is always a partition")
    }

    pub fn hook(&self, row: usize, col: usize) -> Result<Hook> {
        if row == 0 || col == 0 || self.row(row) < col as u32 {
            return Err(Error::HookOutsideDiagram { row, col });
        }
        let arm = self.row(row) as usize - col;
        let leg = self.column(col) - row;
        Ok(Hook {
            row,
            col,
            arm,
            leg,
            length: arm + leg + 1,
        })
    }

    pub fn hooks(&self) -> Vec<Hook> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size());
        for (i, &r) in self.parts.iter().enumerate() {
            for j in 0..r as usize {
                let arm = r as usize - j - 1;
                let leg = conj.parts[j] as usize - i - 1;
                out.push(Hook {
                    row: i + 1,
                    col: j + 1,
                    arm,
                    leg,
                    length: arm + leg + 1,
                });
            }
        }
        out
    }

    /// Strips the rim hook (border strip) running from the end of row `g.row`
    /// to the foot of column `g.col`.
    pub fn remove_rim_hook(&self, g: &Hook) -> Result<Partition> {
        let hook = self.hook(g.row, g.col)?;
        let bottom = hook.row + hook.leg;
        let mut parts = self.parts.clone();
        for i in hook.row..bottom {
            parts[i - 1] = self.row(i + 1) - 1;
        }
        parts[bottom - 1] = g.col as u32 - 1;
        Ok(Partition::from_unsorted(parts))
    }

    /// Every partition obtained by adding a border strip of `length` boxes to `self`,
    /// with the leg length of the added strip.
    pub fn add_rim_hooks(&self, length: usize) -> Vec<(Partition, usize)> {
        assert!(length >= 1);
        let mut out = Vec::new();
        // top row r of the strip, bottom row b; rows of the result are
        //   ν_r = length + τ_b - (b - r),  ν_j = τ_{j-1} + 1 for r < j <= b.
        for top in 1..=self.len() + 1 {
            for bottom in top..top + length {
                let leg = bottom - top;
                let head = length as i64 + self.row(bottom) as i64 - leg as i64;
                if head < 1 {
                    break;
                }
                let rows = self.len().max(bottom);
                let mut parts: Vec<u32> = (1..=rows).map(|i| self.row(i)).collect();
                parts[top - 1] = head as u32;
                for j in top + 1..=bottom {
                    parts[j - 1] = self.row(j - 1) + 1;
                }
                let Ok(nu) = Partition::new(parts) else {
                    continue;
                };
                let col = self.row(bottom) as usize + 1;
                let Ok(h) = nu.hook(top, col) else { continue };
                if h.length == length
                    && h.leg == leg
                    && nu.remove_rim_hook(&h).ok().as_ref() == Some(self)
                {
                    out.push((nu, leg));
                }
            }
        }
        out
    }

    /// Parses `"8,2,2,1"`, with `"3^4"` shorthand for four parts equal to 3.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let text = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(text);
        let mut parts = Vec::new();
        if text.trim().is_empty() {
            return Ok(Partition::empty());
        }
        for token in text.split(',') {
            let token = token.trim();
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim()),
                None => (token, "1"),
            };
            let base: u32 = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad part {token:?}")))?;
            let exp: usize = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
            if exp == 0 {
                return Err(Error::Parse(format!("zero exponent in {token:?}")));
            }
            parts.extend(std::iter::repeat_n(base, exp));
        }
        Partition::new(parts)
    }

    /// Compact form with exponents, e.g. `(8,2^2,1)`.
    pub fn compact(&self) -> String {
        let body: Vec<String> = self
            .runs()
            .into_iter()
            .map(|(_, len, m)| {
                if m == 1 {
                    len.to_string()
                } else {
                    format!("{len}^{m}")
                }
            })
            .collect();
        format!("({})", body.join(","))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::parse(s)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        f.write_str(&body.join(","))
    }
}

/// James' bounds `ν_p(Π z_j!) <= ν_p(λ) <= ν_p(Π (z_j!)^j)`.
pub fn james_bounds(lambda: &Partition, p: Prime) -> (u32, u32) {
    let mut lower = 0;
    let mut upper = 0;
    for (j, z) in lambda.multiplicities() {
        let v = factorial_valuation(z as u64, p);
        lower += v;
        upper += j * v;
    }
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(part("3,3,3").parts(), &[3, 3, 3]);
        assert!(part("").is_empty());
        assert!(matches!(
            Partition::parse("2,3"),
            Err(Error::NotAPartition(_))
        ));
        assert!(matches!(
            Partition::parse("2,0"),
            Err(Error::NotAPartition(_))
        ));
        assert!(matches!(Partition::parse("2,x"), Err(Error::Parse(_))));
        assert_eq!(part("5^2,4,3^2").parts(), &[5, 5, 4, 3, 3]);
        assert_eq!(part("3^4"), part("3,3,3,3"));
        assert_eq!(part("(8,2,2,1)").to_string(), "8,2,2,1");
        assert_eq!(part("8,2,2,1").compact(), "(8,2^2,1)");
    }

    #[test]
    fn conjugates() {
        assert_eq!(part("3,1").conjugate(), part("2,1,1"));
        assert_eq!(part("1,1,1,1").conjugate(), part("4"));
        assert_eq!(part("4,4,2,2,1").conjugate(), part("5,4,2,2"));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn dominance() {
        assert!(part("4").dominates(&part("2,2")).unwrap());
        let l = part("3,2");
        assert!(l.dominates(&l).unwrap());
        assert!(!l.strictly_dominates(&l).unwrap());
        assert!(!part("3,3").dominates(&part("4,1,1")).unwrap());
        assert!(!part("4,1,1").dominates(&part("3,3")).unwrap());
        assert!(matches!(
            part("3").dominates(&part("2")),
            Err(Error::SizeMismatch(3, 2))
        ));
    }

    #[test]
    fn star_and_columns() {
        assert_eq!(part("3,2").star(&part("2,1")).unwrap(), part("3,2,2,1"));
        assert_eq!(part("3,2").star(&Partition::empty()).unwrap(), part("3,2"));
        assert!(matches!(
            part("2,2").star(&part("3")),
            Err(Error::NotComposable { .. })
        ));
        assert_eq!(part("3,3,3").remove_first_column(), part("2,2,2"));
        assert_eq!(part("1,1,1").remove_first_column(), Partition::empty());
        assert_eq!(part("4,2,1").remove_first_column(), part("3,1"));
    }

    #[test]
    fn multiplicity_maps() {
        let m = part("2,2,1").multiplicities();
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(1, 1), (2, 2)]);
        assert!(Partition::empty().multiplicities().is_empty());
        let m = part("8,2,2,1").multiplicities();
        assert_eq!(
            m.into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (2, 2), (8, 1)]
        );
    }

    #[test]
    fn james() {
        assert_eq!(james_bounds(&part("1,1,1,1"), Prime::TWO), (3, 3));
        assert_eq!(james_bounds(&part("3,2,1"), Prime::TWO), (0, 0));
        assert_eq!(james_bounds(&part("2,2,1"), Prime::TWO), (1, 2));
    }

    #[test]
    fn singularities() {
        assert_eq!(part("2,2,2,2").count_disjoint_singularities(Prime::TWO), 2);
        assert_eq!(part("2,2,2,2").singularity_windows(Prime::TWO).len(), 3);
        assert_eq!(part("8,2,2,1").count_disjoint_singularities(Prime::TWO), 1);
        assert_eq!(
            part("5,5,2,2").count_disjoint_singularities(Prime::THREE),
            0
        );
        assert!(part("5,5,2,2").is_p_regular(Prime::THREE));
    }

    #[test]
    fn regularisation() {
        assert_eq!(part("2,2").regularise(Prime::TWO), part("3,1"));
        assert_eq!(part("5,5,2,2").regularise(Prime::TWO), part("6,4,3,1"));
        assert_eq!(part("1,1,1").regularise(Prime::THREE), part("2,1"));
        assert_eq!(part("3,2,1").regularise(Prime::TWO), part("3,2,1"));
    }

    #[test]
    fn hook_lengths() {
        let hooks = part("2,1").hooks();
        let lengths: Vec<_> = hooks.iter().map(|h| ((h.row, h.col), h.length)).collect();
        assert_eq!(lengths, vec![((1, 1), 3), ((1, 2), 1), ((2, 1), 1)]);
        assert!(matches!(
            part("2,1").hook(2, 2),
            Err(Error::HookOutsideDiagram { .. })
        ));
    }

    #[test]
    fn rim_hooks() {
        let l = part("1,1");
        let g = l.hook(1, 1).unwrap();
        assert_eq!(g.length, 2);
        assert_eq!(l.remove_rim_hook(&g).unwrap(), Partition::empty());
        let added = Partition::empty().add_rim_hooks(2);
        assert_eq!(added, vec![(part("2"), 0), (part("1,1"), 1)]);
        // hook at (1,2) of (3,3,1): strip (1,3),(2,3),(2,2) -> (2,1,1)
        let l = part("3,3,1");
        let g = l.hook(1, 2).unwrap();
        assert_eq!((g.length, g.leg), (3, 1));
        assert_eq!(l.remove_rim_hook(&g).unwrap(), part("2,1,1"));
    }
}
