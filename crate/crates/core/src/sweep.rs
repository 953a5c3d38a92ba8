//! Exhaustive comparisons of the classifiers against the Gram oracle.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{combined_bounds, ge2, ge3_oddp_necessary, ge3_p2, ge4_p2, Certificate};
use crate::error::{Error, Result};
use crate::gram::{Oracle, OracleResult};
use crate::io::all_partitions_up_to;
use crate::partition::{james_bounds, Partition};
use crate::tableau::Tableau;
use crate::valuation::Prime;

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub shape: Partition,
    pub predicate: bool,
    pub certificate: Option<Certificate>,
    pub schaper: u32,
    /// Witness pair of the oracle; its inner product has valuation `schaper`.
    pub witness: (String, String),
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub prime: Prime,
    pub level: u32,
    pub n_max: u32,
    pub checked: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    pub skipped: Vec<(Partition, String)>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn witness_text(r: &OracleResult) -> (String, String) {
    (r.witness.0.to_string(), r.witness.1.to_string())
}

enum Outcome<T> {
    Done(T),
    Skipped(Partition, String),
}

/// Oracle results for every partition of size `<= n_max`; over-budget shapes are skipped.
fn oracle_all(
    n_max: u32,
    p: Prime,
    oracle: &Oracle,
) -> Result<Vec<Outcome<(Partition, OracleResult)>>> {
    let shapes: Vec<Partition> = all_partitions_up_to(n_max).collect();
    shapes
        .into_par_iter()
        .map(|l| match oracle.schaper(&l, p) {
            Ok(r) => Ok(Outcome::Done((l, r))),
            Err(Error::ResourceLimit(why)) => Ok(Outcome::Skipped(l, why)),
            Err(e) => Err(e),
        })
        .collect()
}

/// Checks one characterisation level against the oracle for all `λ ⊢ n <= n_max`.
///
/// Level 2 is Fayers' iff at any prime; levels 3 and 4 at `p = 2` are iffs. At odd `p` and
/// level 3 only the proved directions are checked: the oracle being at least 3 forces some
/// condition, and a proved certificate forces the oracle to be at least 3. Unproved
/// certificates are counted as agreeing.
pub fn verify_characterisation(
    n_max: u32,
    p: Prime,
    level: u32,
    oracle: &Oracle,
) -> Result<SweepReport> {
    let predicate = |l: &Partition| -> Result<Option<Certificate>> {
        Ok(match (level, p.get()) {
            (2, _) => ge2(l, p),
            (3, 2) => ge3_p2(l),
            (4, 2) => ge4_p2(l),
            (3, _) => ge3_oddp_necessary(l, p)?,
            _ => {
                return Err(Error::Unsupported(format!(
                    "no characterisation of level {level} at p = {p}"
                )))
            }
        })
    };
    predicate(&Partition::empty())?;
    let mut report = SweepReport {
        prime: p,
        level,
        n_max,
        checked: 0,
        agreements: 0,
        disagreements: Vec::new(),
        skipped: Vec::new(),
    };
    for outcome in oracle_all(n_max, p, oracle)? {
        let (l, r) = match outcome {
            Outcome::Done(x) => x,
            Outcome::Skipped(l, why) => {
                report.skipped.push((l, why));
                continue;
            }
        };
        report.checked += 1;
        let cert = predicate(&l)?;
        let high = r.schaper_number >= level;
        // an unproved certificate makes no claim either way
        let agrees = match &cert {
            None => !high,
            Some(c) if c.proved => high,
            Some(_) => true,
        };
        if agrees {
            report.agreements += 1;
        } else {
            report.disagreements.push(Disagreement {
                shape: l,
                predicate: cert.is_some(),
                certificate: cert,
                schaper: r.schaper_number,
                witness: witness_text(&r),
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureRow {
    pub shape: Partition,
    pub condition: Option<Certificate>,
    pub schaper: u32,
}

impl ConjectureRow {
    /// A condition holds but the Schaper number is below 3.
    pub fn is_counterexample(&self) -> bool {
        self.condition.is_some() && self.schaper < 3
    }

    /// No condition holds but the Schaper number is at least 3; contradicts a proved theorem.
    pub fn is_contradiction(&self) -> bool {
        self.condition.is_none() && self.schaper >= 3
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub prime: Prime,
    pub n_max: u32,
    pub rows: Vec<ConjectureRow>,
    pub skipped: Vec<(Partition, String)>,
}

impl ConjectureReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &ConjectureRow> {
        self.rows.iter().filter(|r| r.is_counterexample())
    }

    pub fn contradictions(&self) -> impl Iterator<Item = &ConjectureRow> {
        self.rows.iter().filter(|r| r.is_contradiction())
    }
}

/// Tabulates (odd-`p` condition holds, oracle >= 3) over `λ ⊢ n <= n_max`.
pub fn check_conjecture(n_max: u32, p: Prime, oracle: &Oracle) -> Result<ConjectureReport> {
    if !p.is_odd() {
        return Err(Error::NotOddPrime(p.get()));
    }
    let mut report = ConjectureReport {
        prime: p,
        n_max,
        rows: Vec::new(),
        skipped: Vec::new(),
    };
    for outcome in oracle_all(n_max, p, oracle)? {
        match outcome {
            Outcome::Done((l, r)) => report.rows.push(ConjectureRow {
                condition: ge3_oddp_necessary(&l, p)?,
                shape: l,
                schaper: r.schaper_number,
            }),
            Outcome::Skipped(l, why) => report.skipped.push((l, why)),
        }
    }
    Ok(report)
}

/// Violations of James' bounds, star-split superadditivity, first-column removal and the
/// combined classifier bounds, for one shape.
pub fn structural_violations(l: &Partition, p: Prime, oracle: &Oracle) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let v = oracle.schaper(l, p)?.schaper_number;
    let (lo, hi) = james_bounds(l, p);
    if !(lo <= v && v <= hi) {
        out.push(format!("{}: James bounds {lo}..{hi} miss {v}", l.compact()));
    }
    for k in 1..l.len() {
        let (a, b) = (l.block(1, k), l.block(k + 1, l.len()));
        let sum = oracle.schaper(&a, p)?.schaper_number + oracle.schaper(&b, p)?.schaper_number;
        if v < sum {
            out.push(format!(
                "{}: {} ⋆ {} gives {sum} > {v}",
                l.compact(),
                a.compact(),
                b.compact()
            ));
        }
    }
    let hat = l.remove_first_column();
    let vh = oracle.schaper(&hat, p)?.schaper_number;
    if v < vh {
        out.push(format!("{}: column removal gives {vh} > {v}", l.compact()));
    }
    let bounds = combined_bounds(l, p);
    if v < bounds.lower || bounds.upper.is_some_and(|u| v > u) {
        out.push(format!(
            "{}: combined bounds {}..{:?} miss {v}",
            l.compact(),
            bounds.lower,
            bounds.upper
        ));
    }
    Ok(out)
}

/// Every tableau row-equivalent to `t`, i.e. every independent reordering of its rows.
pub fn row_class(t: &Tableau) -> Vec<Tableau> {
    let rows: Vec<Vec<u32>> = t.rows().map(|r| r.to_vec()).collect();
    let mut out = vec![Vec::<Vec<u32>>::new()];
    for r in rows {
        let perms = permutations(&r);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.push(p.clone());
                    next
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|rows| Tableau::from_rows(rows).expect("rows of a tableau"))
        .collect()
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;

    #[test]
    fn small_sweeps_agree() {
        let oracle = Oracle::new(Budget::default());
        for (p, level) in [
            (Prime::TWO, 2),
            (Prime::THREE, 2),
            (Prime::TWO, 3),
            (Prime::TWO, 4),
        ] {
            let r = verify_characterisation(6, p, level, &oracle).unwrap();
            assert!(r.ok(), "{p} {level}: {:?}", r.disagreements);
            assert_eq!(r.checked, 1 + 1 + 2 + 3 + 5 + 7 + 11);
        }
    }

    #[test]
    fn bad_level() {
        let oracle = Oracle::new(Budget::default());
        assert!(verify_characterisation(3, Prime::THREE, 4, &oracle).is_err());
        assert!(matches!(
            check_conjecture(3, Prime::TWO, &oracle),
            Err(Error::NotOddPrime(2))
        ));
    }

    #[test]
    fn conjecture_vacuous_at_five() {
        let oracle = Oracle::new(Budget::default());
        let r = check_conjecture(6, Prime::new(5).unwrap(), &oracle).unwrap();
        assert_eq!(r.counterexamples().count(), 0);
        assert_eq!(r.contradictions().count(), 0);
        assert!(r.rows.iter().all(|row| row.condition.is_none()));
    }

    #[test]
    fn row_classes() {
        let t = Tableau::initial(&"3,2,1".parse().unwrap());
        assert_eq!(row_class(&t).len(), 6 * 2);
    }
}
