//! Append-only JSONL store of finished searches.
//!
//! One entry per line. Later lines shadow earlier ones with the same key, and
//! lines that fail to parse (a torn write, hand edits) are skipped with a
//! warning.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::search::{ExtremalRecord, SearchStats};

pub const DEFAULT_CACHE_PATH: &str = "turanlab-cache.jsonl";
pub const CACHE_ENV: &str = "TURANLAB_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub predicate: String,
    pub n: usize,
    pub r: usize,
    pub ell: Option<usize>,
}

impl CacheKey {
    pub fn of(record: &ExtremalRecord) -> Self {
        CacheKey {
            predicate: record.predicate.clone(),
            n: record.n,
            r: record.r,
            ell: record.ell,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    #[serde(flatten)]
    pub key: CacheKey,
    pub value: usize,
    pub extremal_classes: usize,
    pub witness_cap_hit: bool,
    pub witnesses: Vec<Hypergraph>,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub stats: SearchStats,
}

impl CacheEntry {
    pub fn from_record(record: &ExtremalRecord) -> Self {
        CacheEntry {
            key: CacheKey::of(record),
            value: record.value,
            extremal_classes: record.extremal_classes,
            witness_cap_hit: record.witness_cap_hit,
            witnesses: record.witnesses.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            stats: record.stats.clone(),
        }
    }

    pub fn to_record(&self) -> ExtremalRecord {
        ExtremalRecord {
            n: self.key.n,
            r: self.key.r,
            predicate: self.key.predicate.clone(),
            ell: self.key.ell,
            value: self.value,
            extremal_classes: self.extremal_classes,
            witnesses: self.witnesses.clone(),
            witness_cap_hit: self.witness_cap_hit,
            stats: self.stats.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    /// `--cache` flag, then `TURANLAB_CACHE`, then the working directory.
    pub fn resolve(flag: Option<&Path>) -> Self {
        match flag {
            Some(p) => Cache::new(p),
            None => Cache::new(
                std::env::var_os(CACHE_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_PATH)),
            ),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Every readable entry in file order.
    pub fn entries(&self) -> Result<Vec<CacheEntry>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheEntry>(&line) {
                Ok(entry) => out.push(entry),
                Err(e) => log::warn!("{}:{}: skipping corrupt cache line ({e})", self.path.display(), i + 1),
            }
        }
        Ok(out)
    }

    pub fn lookup(&self, key: &CacheKey) -> Result<Option<CacheEntry>> {
        Ok(self.entries()?.into_iter().rev().find(|e| &e.key == key))
    }

    pub fn store(&self, entry: &CacheEntry) -> Result<()> {
        let mut line = serde_json::to_string(entry)?;
        line.push('\n');
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        // a torn previous write would otherwise swallow this line
        if file.metadata()?.len() > 0 && !ends_with_newline(&self.path)? {
            line.insert(0, '\n');
        }
        file.write_all(line.as_bytes())?;
        Ok(())
    }
}

fn ends_with_newline(path: &Path) -> Result<bool> {
    use std::io::{Read, Seek, SeekFrom};
    let mut f = File::open(path)?;
    f.seek(SeekFrom::End(-1))?;
    let mut last = [0u8];
    f.read_exact(&mut last)?;
    Ok(last[0] == b'\n')
}
