//! On-disk store for KR q-characters at spectral offset 0.
//!
//! One JSON file per `(series, rank, node, k)`:
//!
//! ```json
//! {"meta":{"series":"A","rank":1,"node":1,"k":1,"format_version":1},
//!  "terms":[[[[1,0,1]],1],[[[1,2,-1]],1]]}
//! ```
//!
//! Terms are listed in canonical monomial order and the JSON is compact, so
//! equal characters give byte-identical files. Writes go to a temporary file
//! in the same directory followed by a rename.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cartan::Series;
use crate::error::{Error, Result};
use crate::qchar::QCharacter;
use crate::ymono::YMonomial;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheMeta {
    pub series: Series,
    pub rank: usize,
    pub node: usize,
    pub k: i64,
    pub format_version: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub meta: CacheMeta,
    pub terms: Vec<(YMonomial, u64)>,
}

impl CacheFile {
    pub fn new(series: Series, rank: usize, node: usize, k: i64, chi: &QCharacter) -> Self {
        CacheFile {
            meta: CacheMeta { series, rank, node, k, format_version: FORMAT_VERSION },
            terms: chi.terms().iter().map(|(m, &c)| (m.clone(), c)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cache files always serialize")
    }

    pub fn into_qchar(self, highest: YMonomial) -> Result<QCharacter> {
        QCharacter::from_terms(highest, self.terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheEntry {
    pub path: PathBuf,
    pub meta: CacheMeta,
    pub monomial_count: usize,
    pub sha256: String,
}

pub fn file_name(series: Series, rank: usize, node: usize, k: i64) -> String {
    format!("{series}{rank}_node{node}_k{k}.json")
}

pub fn entry_path(dir: &Path, series: Series, rank: usize, node: usize, k: i64) -> PathBuf {
    dir.join(file_name(series, rank, node, k))
}

pub fn read(path: &Path) -> Result<Option<CacheFile>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(path, e)),
    };
    let file: CacheFile = serde_json::from_slice(&bytes).map_err(|e| Error::Cache { path: path.to_path_buf(), message: e.to_string() })?;
    if file.meta.format_version != FORMAT_VERSION {
        return Err(Error::Cache { path: path.to_path_buf(), message: format!("unsupported format_version {}", file.meta.format_version) });
    }
    Ok(Some(file))
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = dir.join(format!(
        ".{}.{}.{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("entry"),
        std::process::id(),
        TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// All readable entries of `dir`, sorted by file name. A missing directory is empty.
pub fn list(dir: &Path) -> Result<Vec<CacheEntry>> {
    let rd = match fs::read_dir(dir) {
        Ok(rd) => rd,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(dir, e)),
    };
    let mut paths = Vec::new();
    for entry in rd {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if name.ends_with(".json") && !name.starts_with('.') {
            paths.push(path);
        }
    }
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    for path in paths {
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        let file: CacheFile = serde_json::from_slice(&bytes).map_err(|e| Error::Cache { path: path.clone(), message: e.to_string() })?;
        out.push(CacheEntry { path, monomial_count: file.terms.len(), meta: file.meta, sha256: sha256_hex(&bytes) });
    }
    Ok(out)
}

/// Removes every cache entry (and stray temporaries); returns the number of entries removed.
pub fn clear(dir: &Path) -> Result<usize> {
    let rd = match fs::read_dir(dir) {
        Ok(rd) => rd,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(Error::io(dir, e)),
    };
    let mut removed = 0;
    for entry in rd {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if name.ends_with(".json") || name.ends_with(".tmp") {
            fs::remove_file(entry.path()).map_err(|e| Error::io(entry.path(), e))?;
            if name.ends_with(".json") && !name.starts_with('.') {
                removed += 1;
            }
        }
    }
    Ok(removed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_layout_is_canonical() {
        let chi =
            QCharacter::from_terms("Y[1,0]".parse().unwrap(), [("Y[1,2]^-1".parse().unwrap(), 1), ("Y[1,0]".parse().unwrap(), 1)]).unwrap();
        let file = CacheFile::new(Series::A, 1, 1, 1, &chi);
        assert_eq!(
            file.to_json(),
            r#"{"meta":{"series":"A","rank":1,"node":1,"k":1,"format_version":1},"terms":[[[[1,0,1]],1],[[[1,2,-1]],1]]}"#
        );
        let back: CacheFile = serde_json::from_str(&file.to_json()).unwrap();
        assert_eq!(back.into_qchar("Y[1,0]".parse().unwrap()).unwrap(), chi);
    }

    #[test]
    fn write_list_clear() {
        let dir = tempfile::tempdir().unwrap();
        assert!(list(dir.path()).unwrap().is_empty());
        let chi = QCharacter::single("Y[2,0]".parse().unwrap());
        let path = entry_path(dir.path(), Series::B, 2, 2, 1);
        write_atomic(&path, &CacheFile::new(Series::B, 2, 2, 1, &chi).to_json()).unwrap();
        let entries = list(dir.path()).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].meta.node, 2);
        assert_eq!(entries[0].sha256.len(), 64);
        assert_eq!(read(&path).unwrap().unwrap().terms.len(), 1);
        assert_eq!(clear(dir.path()).unwrap(), 1);
        assert!(list(dir.path()).unwrap().is_empty());
        assert!(read(&path).unwrap().is_none());
    }

    #[test]
    fn bad_version_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.json");
        fs::write(&path, r#"{"meta":{"series":"A","rank":1,"node":1,"k":1,"format_version":99},"terms":[]}"#).unwrap();
        assert!(matches!(read(&path), Err(Error::Cache { .. })));
    }
}
