//! Tableaux, tabloids and standard tableau enumeration.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A bijective filling of a Young diagram with `1..=n`, stored row by row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    shape: Partition,
    entries: Vec<u32>,
}

/// A row-equivalence class of tableaux, each row sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tabloid {
    shape: Partition,
    rows: Vec<Vec<u32>>,
}

impl Tableau {
    pub fn new(shape: Partition, entries: Vec<u32>) -> Result<Self> {
        let n = shape.size();
        if entries.len() != n {
            return Err(Error::ShapeMismatch(
                shape.to_string(),
                format!("{} entries", entries.len()),
            ));
        }
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            let e = e as usize;
            if e == 0 || e > n || seen[e] {
                return Err(Error::NotABijection(n));
            }
            seen[e] = true;
        }
        Ok(Tableau { shape, entries })
    }

    /// Fills the diagram with `1, 2, 3, …` left to right, top to bottom.
    pub fn initial(shape: &Partition) -> Self {
        let entries = (1..=shape.size() as u32).collect();
        Tableau {
            shape: shape.clone(),
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len() as u32).collect())?;
        Tableau::new(shape, rows.into_iter().flatten().collect())
    }

    /// Parses rows joined by `;` with entries joined by `,`, e.g. `"1,2,3;6,4,5;8,9,7"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Tableau::initial(&Partition::empty()));
        }
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| {
                        e.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad tableau entry {e:?}")))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Tableau::from_rows(rows)
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> + '_ {
        let mut start = 0;
        self.shape.parts().iter().map(move |&len| {
            let row = &self.entries[start..start + len as usize];
            start += len as usize;
            row
        })
    }

    /// Entry at the 1-based cell `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Option<u32> {
        if row == 0 || col == 0 || col as u32 > self.shape.row(row) {
            return None;
        }
        let offset: usize = self.shape.parts()[..row - 1]
            .iter()
            .map(|&x| x as usize)
            .sum();
        Some(self.entries[offset + col - 1])
    }

    /// For every entry `e`, the 0-based `(row, col)` of its cell; index 0 unused.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut pos = vec![(0, 0); self.entries.len() + 1];
        for (r, row) in self.rows().enumerate() {
            for (c, &e) in row.iter().enumerate() {
                pos[e as usize] = (r, c);
            }
        }
        pos
    }

    pub fn is_standard(&self) -> bool {
        let rows: Vec<&[u32]> = self.rows().collect();
        let rows_increase = rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        let cols_increase = rows.windows(2).all(|w| {
            w[1].iter()
                .zip(w[0].iter())
                .all(|(lower, upper)| upper < lower)
        });
        rows_increase && cols_increase
    }

    pub fn tabloid(&self) -> Tabloid {
        let rows = self
            .rows()
            .map(|r| {
                let mut r = r.to_vec();
                r.sort_unstable();
                r
            })
            .collect();
        Tabloid {
            shape: self.shape.clone(),
            rows,
        }
    }

    pub fn is_row_equivalent(&self, other: &Tableau) -> bool {
        self.shape == other.shape && self.tabloid() == other.tabloid()
    }

    pub fn is_column_equivalent(&self, other: &Tableau) -> bool {
        if self.shape != other.shape {
            return false;
        }
        let a = self.positions();
        let b = other.positions();
        (1..a.len()).all(|e| a[e].1 == b[e].1)
    }

    /// Applies a row permutation: `perm[r]` is the new order of row `r`'s entries, as
    /// indices into the current row.
    pub fn permute_rows(&self, perms: &[Vec<usize>]) -> Tableau {
        let rows: Vec<Vec<u32>> = self
            .rows()
            .zip(perms)
            .map(|(row, perm)| perm.iter().map(|&k| row[k]).collect())
            .collect();
        Tableau {
            shape: self.shape.clone(),
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Relabels entries, `map[e]` being the new label of `e` (index 0 unused).
    pub fn relabel(&self, map: &[u32]) -> Tableau {
        Tableau {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|&e| map[e as usize]).collect(),
        }
    }
}

impl FromStr for Tableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tableau::parse(s)
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| {
                r.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&rows.join(";"))
    }
}

impl Tabloid {
    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Builds the tabloid whose entry `e` sits in the 0-based row `row_of[e]`.
    pub fn from_row_assignment(shape: &Partition, row_of: &[usize]) -> Tabloid {
        let mut rows = vec![Vec::new(); shape.len()];
        for (e, &r) in row_of.iter().enumerate().skip(1) {
            rows[r].push(e as u32);
        }
        Tabloid {
            shape: shape.clone(),
            rows,
        }
    }
}

impl fmt::Display for Tabloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&rows.join("|"))
    }
}

/// Sign of the permutation `w` with `w(s at cell) = t at cell`; requires `s ~row t`.
pub fn row_permutation_sign(s: &Tableau, t: &Tableau) -> Result<i32> {
    if s.shape != t.shape {
        return Err(Error::ShapeMismatch(
            s.shape.to_string(),
            t.shape.to_string(),
        ));
    }
    if !s.is_row_equivalent(t) {
        return Err(Error::NotRowEquivalent);
    }
    let n = s.size();
    let mut w = vec![0usize; n + 1];
    for (&a, &b) in s.entries.iter().zip(&t.entries) {
        w[a as usize] = b as usize;
    }
    Ok(permutation_sign(
        &w[1..].iter().map(|&x| x - 1).collect::<Vec<_>>(),
    ))
}

/// Sign of a permutation of `0..len` given in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `n! / Π hook lengths`, the number of standard tableaux of shape `λ`.
pub fn hook_length_count(shape: &Partition) -> BigInt {
    let mut num = BigInt::from(1);
    for k in 1..=shape.size() {
        num *= k;
    }
    let den = shape
        .hooks()
        .iter()
        .fold(BigInt::from(1), |acc, h| acc * h.length);
    num / den
}

/// Lazily enumerates standard tableaux in lexicographic order of their row words.
pub struct StandardTableaux {
    shape: Partition,
    // row (0-based) holding entry k + 1
    word: Vec<usize>,
    filled: Vec<u32>,
    started: bool,
    done: bool,
}

pub fn standard_tableaux(shape: &Partition) -> StandardTableaux {
    StandardTableaux {
        shape: shape.clone(),
        word: Vec::with_capacity(shape.size()),
        filled: vec![0; shape.len()],
        started: false,
        done: false,
    }
}

impl StandardTableaux {
    fn can_place(&self, row: usize) -> bool {
        row < self.shape.len()
            && self.filled[row] < self.shape.parts()[row]
            && (row == 0 || self.filled[row - 1] > self.filled[row])
    }

    // Completing a valid prefix greedily never gets stuck: a proper subdiagram of the
    // shape always has an addable cell inside it.
    fn fill_greedy(&mut self) {
        let n = self.shape.size();
        while self.word.len() < n {
            let r = (0..self.shape.len())
                .find(|&r| self.can_place(r))
                .expect("addable cell exists");
            self.filled[r] += 1;
            self.word.push(r);
        }
    }

    fn current(&self) -> Tableau {
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); self.shape.len()];
        for (k, &r) in self.word.iter().enumerate() {
            rows[r].push(k as u32 + 1);
        }
        Tableau {
            shape: self.shape.clone(),
            entries: rows.into_iter().flatten().collect(),
        }
    }
}

impl Iterator for StandardTableaux {
    type Item = Tableau;

    fn next(&mut self) -> Option<Tableau> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_greedy();
            return Some(self.current());
        }
        while let Some(r) = self.word.pop() {
            self.filled[r] -= 1;
            if let Some(next) = (r + 1..self.shape.len()).find(|&q| self.can_place(q)) {
                self.filled[next] += 1;
                self.word.push(next);
                self.fill_greedy();
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}
