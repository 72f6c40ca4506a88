//! CSV cache of pressure solutions, keyed by `(B, alphabet, n, tolerance, mode)`.
//!
//! Only exact key matches are returned: a looser or tighter tolerance is a miss.
//! Rows that fail to parse are skipped with a warning.

use std::fs::OpenOptions;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pressure::{solve_s, Alphabet, PressureProblem, PressureSolution, SummationMode};
use crate::rational::Rational;

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "CFDIM_CACHE";

pub const CACHE_COLUMNS: [&str; 8] = ["B", "alphabet", "n", "tolerance", "s_value", "residual", "mode", "leaves"];

#[derive(Clone, Debug, PartialEq)]
pub struct CacheKey {
    pub base: Rational,
    pub alphabet: Alphabet,
    pub depth: usize,
    pub tolerance: f64,
    pub mode: SummationMode,
}

impl CacheKey {
    pub fn new(p: &PressureProblem, tolerance: f64) -> Self {
        CacheKey { base: p.base.clone(), alphabet: p.alphabet.clone(), depth: p.depth, tolerance, mode: p.mode }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RawRow {
    #[serde(rename = "B")]
    base: String,
    alphabet: String,
    n: String,
    tolerance: String,
    s_value: String,
    residual: String,
    mode: String,
    leaves: String,
}

#[derive(Clone, Debug)]
struct Entry {
    key: CacheKey,
    s_value: f64,
    residual: f64,
    leaves: u64,
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Parse(format!("bad float {s:?}")))
}

impl Entry {
    fn from_raw(r: &RawRow) -> Result<Self> {
        let key = CacheKey {
            base: r.base.parse()?,
            alphabet: r.alphabet.parse()?,
            depth: r.n.parse().map_err(|_| Error::Parse(format!("bad depth {:?}", r.n)))?,
            tolerance: parse_f64(&r.tolerance)?,
            mode: r.mode.parse()?,
        };
        let s_value = parse_f64(&r.s_value)?;
        let residual = parse_f64(&r.residual)?;
        if !(0.0..=1.0).contains(&s_value) || !(residual >= 0.0) || !(key.tolerance > 0.0) {
            return Err(Error::Parse("values out of range".into()));
        }
        let leaves = r.leaves.parse().map_err(|_| Error::Parse(format!("bad leaf count {:?}", r.leaves)))?;
        Ok(Entry { key, s_value, residual, leaves })
    }

    fn to_raw(&self) -> RawRow {
        RawRow {
            base: self.key.base.to_string(),
            alphabet: self.key.alphabet.to_string(),
            n: self.key.depth.to_string(),
            tolerance: format!("{:e}", self.key.tolerance),
            s_value: self.s_value.to_string(),
            residual: format!("{:e}", self.residual),
            mode: self.key.mode.name().to_string(),
            leaves: self.leaves.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheStatus {
    Hit,
    Miss,
    Disabled,
}

#[derive(Debug)]
pub struct PressureCache {
    path: PathBuf,
    entries: Vec<Entry>,
    skipped: usize,
}

impl PressureCache {
    /// Reads `path` if it exists; a missing file is an empty cache.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut cache = PressureCache { path, entries: Vec::new(), skipped: 0 };
        if !cache.path.exists() {
            return Ok(cache);
        }
        let mut rdr = csv::ReaderBuilder::new().flexible(true).from_path(&cache.path).map_err(csv_err)?;
        for (i, row) in rdr.deserialize::<RawRow>().enumerate() {
            match row.map_err(csv_err).and_then(|r| Entry::from_raw(&r)) {
                Ok(e) => cache.entries.push(e),
                Err(e) => {
                    log::warn!("{}: skipping corrupt cache row {}: {e}", cache.path.display(), i + 2);
                    cache.skipped += 1;
                }
            }
        }
        Ok(cache)
    }

    /// The cache named by `CFDIM_CACHE`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Self::open(PathBuf::from(p)).map(Some),
            _ => Ok(None),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rows skipped as corrupt when the file was read.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// A cached solution carries no iteration history; its bracket is the
    /// enclosure `s ± tol` implied by the original bisection.
    pub fn lookup(&self, key: &CacheKey) -> Option<PressureSolution> {
        let e = self.entries.iter().find(|e| e.key == *key)?;
        let t = key.tolerance;
        Some(PressureSolution {
            s_value: e.s_value,
            residual: e.residual,
            iterations: 0,
            bracket: ((e.s_value - t).max(0.0), (e.s_value + t).min(1.0)),
            tolerance: t,
            leaves: e.leaves,
            mode: key.mode,
        })
    }

    /// Appends a row (writing the header for a new file).
    pub fn store(&mut self, key: CacheKey, sol: &PressureSolution) -> Result<()> {
        let entry = Entry { key, s_value: sol.s_value, residual: sol.residual, leaves: sol.leaves };
        let fresh = !self.path.exists() || std::fs::metadata(&self.path)?.len() == 0;
        let file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
        w.serialize(entry.to_raw()).map_err(csv_err)?;
        w.flush()?;
        self.entries.push(entry);
        Ok(())
    }

    /// Lookup, else solve and store.
    pub fn solve(&mut self, p: &PressureProblem, tol: f64) -> Result<(PressureSolution, CacheStatus)> {
        let key = CacheKey::new(p, tol);
        if let Some(s) = self.lookup(&key) {
            return Ok((s, CacheStatus::Hit));
        }
        let s = solve_s(p, tol)?;
        self.store(key, &s)?;
        Ok((s, CacheStatus::Miss))
    }
}

/// Solve through `cache` when present.
pub fn solve_with(
    cache: Option<&mut PressureCache>,
    p: &PressureProblem,
    tol: f64,
) -> Result<(PressureSolution, CacheStatus)> {
    match cache {
        Some(c) => c.solve(p, tol),
        None => solve_s(p, tol).map(|s| (s, CacheStatus::Disabled)),
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        k => Error::Parse(format!("csv: {k:?}")),
    }
}
