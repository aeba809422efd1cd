//! Read-through ζ cache persisted as JSON under `$ZMLAB_CACHE_DIR`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use zmlab_core::specialfn::{DirectZeta, ZetaSource};
use zmlab_core::{Result, C64};

use crate::config::CliError;

pub const CACHE_ENV: &str = "ZMLAB_CACHE_DIR";
const FILE_NAME: &str = "zeta_cache.json";

type Key = (i64, i64);

/// Grid of 1e-6 in Re s and 1e-9 in Im s.
pub fn quantize(s: C64) -> Key {
    ((s.re * 1e6).round() as i64, (s.im * 1e9).round() as i64)
}

pub struct ZetaCache {
    path: PathBuf,
    inner: DirectZeta,
    // the exact s is kept so that a hit is only served for the same point
    map: Mutex<HashMap<Key, (C64, C64)>>,
    hits: AtomicU64,
    misses: AtomicU64,
    loaded: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
    pub loaded: usize,
}

impl ZetaCache {
    /// `None` when the environment variable is unset or empty.
    pub fn from_env() -> std::result::Result<Option<Self>, CliError> {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Self::open(Path::new(&d)).map(Some),
            _ => Ok(None),
        }
    }

    pub fn open(dir: &Path) -> std::result::Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(FILE_NAME);
        let mut map = HashMap::new();
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            // a corrupt cache is discarded rather than trusted
            let rows: Vec<[f64; 4]> = serde_json::from_str(&text).unwrap_or_default();
            for [sr, si, zr, zi] in rows {
                let s = C64::new(sr, si);
                map.entry(quantize(s)).or_insert((s, C64::new(zr, zi)));
            }
        }
        let loaded = map.len();
        Ok(ZetaCache {
            path,
            inner: DirectZeta::default(),
            map: Mutex::new(map),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            loaded,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            entries: self.map.lock().unwrap().len(),
            loaded: self.loaded,
        }
    }

    /// Writes every entry, sorted by key, through a temporary file.
    pub fn save(&self) -> std::result::Result<(), CliError> {
        let map = self.map.lock().unwrap();
        let mut keys: Vec<&Key> = map.keys().collect();
        keys.sort();
        let rows: Vec<[f64; 4]> = keys.iter().map(|k| { let (s, z) = map[k]; [s.re, s.im, z.re, z.im] }).collect();
        let tmp = self.path.with_extension("json.tmp");
        let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", self.path.display()));
        std::fs::write(&tmp, serde_json::to_vec(&rows).expect("cache rows serialize")).map_err(io)?;
        std::fs::rename(&tmp, &self.path).map_err(io)
    }
}

impl ZetaSource for ZetaCache {
    fn zeta(&self, s: C64) -> Result<C64> {
        let key = quantize(s);
        if let Some(&(at, z)) = self.map.lock().unwrap().get(&key) {
            if at.re.to_bits() == s.re.to_bits() && at.im.to_bits() == s.im.to_bits() {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return Ok(z);
            }
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let z = self.inner.zeta(s)?;
        self.map.lock().unwrap().entry(key).or_insert((s, z));
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmpdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("zmlab-cache-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn quantization_grid() {
        assert_eq!(quantize(C64::new(0.5, 1000.0)), (500_000, 1_000_000_000_000));
        assert_ne!(quantize(C64::new(0.5, 1000.0)), quantize(C64::new(0.5, 1000.0 + 2e-9)));
        assert_eq!(quantize(C64::new(0.5, 1000.0)), quantize(C64::new(0.5 + 1e-8, 1000.0)));
    }

    #[test]
    fn hits_survive_a_reload() {
        let d = tmpdir("reload");
        let s = C64::new(0.54, 321.25);
        let fresh = DirectZeta::default().zeta(s).unwrap();
        let c = ZetaCache::open(&d).unwrap();
        assert_eq!(c.zeta(s).unwrap(), fresh);
        assert_eq!(c.zeta(s).unwrap(), fresh);
        assert_eq!((c.stats().hits, c.stats().misses), (1, 1));
        c.save().unwrap();
        let c2 = ZetaCache::open(&d).unwrap();
        assert_eq!(c2.stats().loaded, 1);
        assert_eq!(c2.zeta(s).unwrap(), fresh);
        assert_eq!(c2.stats().hits, 1);
        std::fs::remove_dir_all(&d).unwrap();
    }

    #[test]
    fn colliding_point_is_recomputed() {
        let d = tmpdir("collide");
        let c = ZetaCache::open(&d).unwrap();
        let s = C64::new(0.54, 321.25);
        let near = C64::new(0.54 + 1e-8, 321.25);
        assert_eq!(quantize(s), quantize(near));
        c.zeta(s).unwrap();
        assert_eq!(c.zeta(near).unwrap(), DirectZeta::default().zeta(near).unwrap());
        assert_eq!(c.stats().hits, 0);
        std::fs::remove_dir_all(&d).unwrap();
    }
}
