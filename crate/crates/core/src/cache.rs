//! Memoized b- and c-tables, optionally persisted as JSON.
//!
//! The file maps `"m,r"` (resp. `"j,a"`) to arrays of decimal strings:
//!
//! ```json
//! {"schema": "schmidt-congruence/tables/v1",
//!  "btables": {"1,2": ["1", "2"]},
//!  "ctables": {"0,1": ["0", "1"]}}
//! ```
//!
//! Nothing read from disk is trusted. A loaded table is kept only if it has
//! the right length and passes its degree-bound certificate (plus the
//! `C(t, m)` divisibility for b-tables); since the expansions are unique,
//! a table that passes is the correct one. Anything else is dropped and
//! recomputed on demand.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::Integer;
use crate::error::Result;
use crate::extension::{c_table, CTable};
use crate::linearizer::{b_table, BTable, BasisCombo};

pub const TABLES_SCHEMA: &str = "schmidt-congruence/tables/v1";

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "SCHMIDT_CACHE_DIR";

/// File name used inside the cache directory.
pub const CACHE_FILE_NAME: &str = "tables.json";

#[derive(Debug, Default, Serialize, Deserialize)]
struct TableFile {
    schema: String,
    #[serde(default)]
    btables: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    ctables: BTreeMap<String, Vec<String>>,
}

/// What happened while loading a cache file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub accepted: usize,
    pub rejected: usize,
    /// The file existed but was not a readable table file at all.
    pub unreadable: bool,
}

/// Thread-safe table memo. Concurrent lookups of the same key always yield
/// structurally equal tables.
#[derive(Debug, Default)]
pub struct TableCache {
    btables: RwLock<BTreeMap<(u32, u32), Arc<BTable>>>,
    ctables: RwLock<BTreeMap<(u32, u32), Arc<CTable>>>,
    computed: AtomicU64,
}

impl TableCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of tables computed (rather than found) by this cache.
    pub fn computed(&self) -> u64 {
        self.computed.load(Ordering::Relaxed)
    }

    pub fn b_table(&self, m: u32, r: u32) -> Result<Arc<BTable>> {
        if let Some(t) = self.btables.read().expect("cache lock").get(&(m, r)) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(b_table(m, r)?);
        self.computed.fetch_add(1, Ordering::Relaxed);
        let mut guard = self.btables.write().expect("cache lock");
        Ok(Arc::clone(guard.entry((m, r)).or_insert(table)))
    }

    pub fn c_table(&self, j: u32, a: u32) -> Result<Arc<CTable>> {
        if let Some(t) = self.ctables.read().expect("cache lock").get(&(j, a)) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(c_table(j, a)?);
        self.computed.fetch_add(1, Ordering::Relaxed);
        let mut guard = self.ctables.write().expect("cache lock");
        Ok(Arc::clone(guard.entry((j, a)).or_insert(table)))
    }

    pub fn power_linearize(&self, i: u32, r: u32) -> Result<BasisCombo> {
        Ok(self.b_table(i, r)?.to_combo())
    }

    /// Same result as [`crate::linearizer::tuple_linearize`], drawing the
    /// b-tables from the cache.
    pub fn tuple_linearize(&self, indices: &[u32], r: u32) -> Result<BasisCombo> {
        if indices.is_empty() {
            return Err(crate::error::Error::InvalidParameter(
                "index list must be nonempty".into(),
            ));
        }
        let mut acc = BasisCombo::one();
        for &i in indices {
            acc = acc.mul(&self.power_linearize(i, r)?);
        }
        Ok(acc)
    }

    /// Loads a cache file, keeping only entries that certify. A missing file
    /// gives an empty cache.
    pub fn load(path: &Path) -> Result<(Self, LoadStats)> {
        let cache = TableCache::new();
        let mut stats = LoadStats::default();
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((cache, stats)),
            Err(e) => return Err(e.into()),
        };
        let file: TableFile = match serde_json::from_str(&text) {
            Ok(f) => f,
            Err(_) => {
                stats.unreadable = true;
                return Ok((cache, stats));
            }
        };
        if file.schema != TABLES_SCHEMA {
            stats.unreadable = true;
            return Ok((cache, stats));
        }
        {
            let mut guard = cache.btables.write().expect("cache lock");
            for (key, values) in &file.btables {
                match parse_entry(key, values).and_then(|(m, r, v)| {
                    let t = BTable::from_entries(m, r, v).ok()?;
                    (t.divisibility_holds() && t.certify().passed()).then_some(t)
                }) {
                    Some(t) => {
                        guard.insert((t.m, t.r), Arc::new(t));
                        stats.accepted += 1;
                    }
                    None => stats.rejected += 1,
                }
            }
        }
        {
            let mut guard = cache.ctables.write().expect("cache lock");
            for (key, values) in &file.ctables {
                match parse_entry(key, values).and_then(|(j, a, v)| {
                    let t = CTable::from_entries(j, a, v).ok()?;
                    t.certify().passed().then_some(t)
                }) {
                    Some(t) => {
                        guard.insert((t.j, t.a), Arc::new(t));
                        stats.accepted += 1;
                    }
                    None => stats.rejected += 1,
                }
            }
        }
        Ok((cache, stats))
    }

    /// Writes every table currently held. Keys are sorted, so equal caches
    /// produce identical files.
    pub fn save(&self, path: &Path) -> Result<()> {
        let render = |v: &[Integer]| v.iter().map(Integer::to_string).collect::<Vec<_>>();
        let file = TableFile {
            schema: TABLES_SCHEMA.to_string(),
            btables: self
                .btables
                .read()
                .expect("cache lock")
                .iter()
                .map(|((m, r), t)| (format!("{m},{r}"), render(t.entries())))
                .collect(),
            ctables: self
                .ctables
                .read()
                .expect("cache lock")
                .iter()
                .map(|((j, a), t)| (format!("{j},{a}"), render(t.entries())))
                .collect(),
        };
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
        Ok(())
    }
}

fn parse_entry(key: &str, values: &[String]) -> Option<(u32, u32, Vec<Integer>)> {
    let (a, b) = key.split_once(',')?;
    let a = a.trim().parse().ok()?;
    let b = b.trim().parse().ok()?;
    let v = values
        .iter()
        .map(|s| s.parse().ok())
        .collect::<Option<Vec<Integer>>>()?;
    Some((a, b, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memoizes() {
        let cache = TableCache::new();
        let a = cache.b_table(3, 3).unwrap();
        let b = cache.b_table(3, 3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.computed(), 1);
        assert_eq!(*a, b_table(3, 3).unwrap());
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join(CACHE_FILE_NAME);
        let cache = TableCache::new();
        cache.b_table(2, 2).unwrap();
        cache.b_table(1, 3).unwrap();
        cache.c_table(1, 2).unwrap();
        cache.save(&path).unwrap();

        let (warm, stats) = TableCache::load(&path).unwrap();
        assert_eq!(stats, LoadStats { accepted: 3, rejected: 0, unreadable: false });
        assert_eq!(*warm.b_table(2, 2).unwrap(), b_table(2, 2).unwrap());
        assert_eq!(warm.computed(), 0);

        // b(2,2) = [1, 6, 6] is the only table containing "6"
        let text = fs::read_to_string(&path).unwrap().replace("\"6\"", "\"7\"");
        let text = text.replace("\"btables\": {", "\"btables\": {\n    \"4,2\": [\"1\", \"x\"],");
        fs::write(&path, text).unwrap();
        let (cold, stats) = TableCache::load(&path).unwrap();
        assert_eq!(stats.accepted, 2);
        assert_eq!(stats.rejected, 2);
        assert_eq!(*cold.b_table(2, 2).unwrap(), b_table(2, 2).unwrap());
        assert_eq!(*cold.c_table(1, 2).unwrap(), c_table(1, 2).unwrap());
        assert_eq!(cold.computed(), 1);
    }

    #[test]
    fn garbage_file_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(CACHE_FILE_NAME);
        fs::write(&path, "not json").unwrap();
        let (cache, stats) = TableCache::load(&path).unwrap();
        assert!(stats.unreadable);
        assert_eq!(*cache.b_table(1, 2).unwrap(), b_table(1, 2).unwrap());
        let (_, stats) = TableCache::load(&dir.path().join("missing.json")).unwrap();
        assert_eq!(stats, LoadStats::default());
    }

    #[test]
    fn concurrent_lookups_agree() {
        let cache = TableCache::new();
        let tables: Vec<Arc<BTable>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..8).map(|_| s.spawn(|| cache.b_table(5, 4).unwrap())).collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(tables.windows(2).all(|w| w[0] == w[1]));
    }
}
