//! Decomposition tables, the oracle result cache and partition iterators.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gram::OracleResult;
use crate::partition::Partition;
use crate::tableau::Tableau;
use crate::valuation::Prime;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub mult: u64,
    pub note: String,
}

/// Decomposition numbers `[S^ν : D^μ]`. Absent keys are unknown, never zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTable {
    p: Prime,
    entries: BTreeMap<(Partition, Partition), TableEntry>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    p: u32,
    entries: Vec<RawEntry>,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    specht: Vec<u32>,
    simple: Vec<u32>,
    mult: u64,
    #[serde(default)]
    note: String,
}

impl DecompositionTable {
    pub fn new(p: Prime) -> Self {
        DecompositionTable {
            p,
            entries: BTreeMap::new(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(
        &mut self,
        specht: Partition,
        simple: Partition,
        mult: u64,
        note: impl Into<String>,
    ) -> Result<()> {
        if !simple.is_p_regular(self.p) {
            return Err(Error::NotPRegularKey(simple.to_string(), self.p.get()));
        }
        if specht == simple && mult != 1 {
            return Err(Error::Schema(format!(
                "[S^{0}:D^{0}] must be 1, got {mult}",
                simple
            )));
        }
        self.entries.insert(
            (specht, simple),
            TableEntry {
                mult,
                note: note.into(),
            },
        );
        Ok(())
    }

    pub fn get(&self, specht: &Partition, simple: &Partition) -> Option<u64> {
        self.entries
            .get(&(specht.clone(), simple.clone()))
            .map(|e| e.mult)
    }

    pub fn entry(&self, specht: &Partition, simple: &Partition) -> Option<&TableEntry> {
        self.entries.get(&(specht.clone(), simple.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Partition, &TableEntry)> {
        self.entries.iter().map(|((s, d), e)| (s, d, e))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawTable = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let p =
            Prime::new(raw.p).map_err(|_| Error::Schema(format!("p = {} is not prime", raw.p)))?;
        let mut table = DecompositionTable::new(p);
        for e in raw.entries {
            let specht = Partition::new(e.specht).map_err(|e| Error::Schema(e.to_string()))?;
            let simple = Partition::new(e.simple).map_err(|e| Error::Schema(e.to_string()))?;
            if specht.size() != simple.size() {
                return Err(Error::Schema(format!(
                    "{specht} and {simple} have different sizes"
                )));
            }
            table.insert(specht, simple, e.mult, e.note)?;
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        let raw = RawTable {
            p: self.p.get(),
            entries: self
                .entries
                .iter()
                .map(|((s, d), e)| RawEntry {
                    specht: s.parts().to_vec(),
                    simple: d.parts().to_vec(),
                    mult: e.mult,
                    note: e.note.clone(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&raw).expect("table serialises");
        out.push('\n');
        out
    }
}

pub fn load_table(path: impl AsRef<Path>) -> Result<DecompositionTable> {
    DecompositionTable::from_json(&fs::read_to_string(path)?)
}

pub fn save_table(table: &DecompositionTable, path: impl AsRef<Path>) -> Result<()> {
    write_atomically(path.as_ref(), table.to_json().as_bytes())
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Partitions of `n` in reverse lexicographic order, starting from `(n)`.
#[derive(Debug, Clone)]
pub struct PartitionsOf {
    current: Option<Vec<u32>>,
}

pub fn partitions_of(n: u32) -> PartitionsOf {
    PartitionsOf {
        current: Some(if n == 0 { vec![] } else { vec![n] }),
    }
}

impl Iterator for PartitionsOf {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let out = self.current.take()?;
        // next in reverse-lex: lower the last part > 1 by one and redistribute the rest
        let mut parts = out.clone();
        let mut rest = 0u32;
        while let Some(&1) = parts.last() {
            parts.pop();
            rest += 1;
        }
        if let Some(last) = parts.last_mut() {
            *last -= 1;
            let cap = *last;
            rest += 1;
            while rest > 0 {
                let k = rest.min(cap);
                parts.push(k);
                rest -= k;
            }
            self.current = Some(parts);
        }
        Some(Partition::from_unsorted(out))
    }
}

/// Every partition of every `n <= n_max`, by increasing size.
pub fn all_partitions_up_to(n_max: u32) -> impl Iterator<Item = Partition> {
    (0..=n_max).flat_map(partitions_of)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
struct CacheRecord {
    p: u32,
    partition: Vec<u32>,
    schaper: u32,
    witness: [String; 2],
    entry: String,
    checksum: String,
}

impl CacheRecord {
    fn digest(&self) -> String {
        let mut h = Sha256::new();
        let parts: Vec<String> = self.partition.iter().map(u32::to_string).collect();
        h.update(format!(
            "{}|{}|{}|{}|{}|{}",
            self.p,
            parts.join(","),
            self.schaper,
            self.witness[0],
            self.witness[1],
            self.entry
        ));
        hex::encode(h.finalize())
    }

    fn from_result(r: &OracleResult) -> Self {
        let mut rec = CacheRecord {
            p: r.prime.get(),
            partition: r.shape.parts().to_vec(),
            schaper: r.schaper_number,
            witness: [r.witness.0.to_string(), r.witness.1.to_string()],
            entry: r.entry_value.to_string(),
            checksum: String::new(),
        };
        rec.checksum = rec.digest();
        rec
    }

    fn into_result(self) -> Result<OracleResult> {
        if self.digest() != self.checksum {
            return Err(Error::CacheCorrupt("checksum mismatch".into()));
        }
        let bad = |e: Error| Error::CacheCorrupt(e.to_string());
        let shape = Partition::new(self.partition).map_err(bad)?;
        let prime = Prime::new(self.p).map_err(bad)?;
        let s = Tableau::parse(&self.witness[0]).map_err(bad)?;
        let t = Tableau::parse(&self.witness[1]).map_err(bad)?;
        let entry_value = BigInt::from_str(&self.entry)
            .map_err(|e| Error::CacheCorrupt(format!("entry: {e}")))?;
        if s.shape() != &shape || t.shape() != &shape {
            return Err(Error::CacheCorrupt(
                "witness shape differs from partition".into(),
            ));
        }
        Ok(OracleResult {
            shape,
            prime,
            schaper_number: self.schaper,
            witness: (s, t),
            entry_value,
        })
    }
}

type CacheMap = BTreeMap<(Partition, Prime), OracleResult>;

/// File-backed oracle cache: one JSON record per line, each with a sha256 checksum.
///
/// Writers hold an exclusive advisory lock on `<path>.lock`, merge with the current file
/// contents and replace the file atomically, so readers never see a torn file.
#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    map: Mutex<CacheMap>,
    dropped: Mutex<usize>,
}

fn read_cache_file(path: &Path, strict: bool) -> Result<(CacheMap, usize)> {
    let mut map = CacheMap::new();
    let mut dropped = 0;
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((map, 0)),
        Err(e) => return Err(e.into()),
    };
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<CacheRecord>(&line)
            .map_err(|e| Error::CacheCorrupt(e.to_string()))
            .and_then(CacheRecord::into_result);
        match parsed {
            Ok(r) => {
                map.insert((r.shape.clone(), r.prime), r);
            }
            Err(Error::CacheCorrupt(msg)) if strict => {
                return Err(Error::CacheCorrupt(format!("line {}: {msg}", lineno + 1)))
            }
            Err(_) => dropped += 1,
        }
    }
    Ok((map, dropped))
}

impl ResultCache {
    /// Opens (or lazily creates) a cache. Corrupt lines are dropped and counted; they are
    /// purged on the next write.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let (map, dropped) = read_cache_file(&path, false)?;
        Ok(ResultCache {
            path,
            map: Mutex::new(map),
            dropped: Mutex::new(dropped),
        })
    }

    /// Checks every line; fails with `CacheCorrupt` on the first bad one.
    pub fn verify(path: impl AsRef<Path>) -> Result<usize> {
        Ok(read_cache_file(path.as_ref(), true)?.0.len())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn dropped_lines(&self) -> usize {
        *self.dropped.lock().unwrap()
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, shape: &Partition, p: Prime) -> Result<Option<OracleResult>> {
        Ok(self.map.lock().unwrap().get(&(shape.clone(), p)).cloned())
    }

    /// Re-reads the file, picking up other writers' results.
    pub fn reload(&self) -> Result<()> {
        let (map, dropped) = read_cache_file(&self.path, false)?;
        *self.map.lock().unwrap() = map;
        *self.dropped.lock().unwrap() = dropped;
        Ok(())
    }

    pub fn put(&self, result: &OracleResult) -> Result<()> {
        let mut map = self.map.lock().unwrap();
        let mut lock_path = self.path.clone().into_os_string();
        lock_path.push(".lock");
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)?;
        lock.lock()?;
        let (on_disk, _) = read_cache_file(&self.path, false)?;
        for (k, v) in on_disk {
            map.entry(k).or_insert(v);
        }
        map.insert((result.shape.clone(), result.prime), result.clone());
        let mut out = String::new();
        for r in map.values() {
            out.push_str(&serde_json::to_string(&CacheRecord::from_result(r))?);
            out.push('\n');
        }
        write_atomically(&self.path, out.as_bytes())?;
        *self.dropped.lock().unwrap() = 0;
        lock.unlock()?;
        Ok(())
    }
}
