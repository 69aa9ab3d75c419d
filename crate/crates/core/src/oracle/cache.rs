use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{DimTable, ModuleId};

/// One JSON document per table, named `{n}-{p}-{s}-{module}.json`.
#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: PathBuf,
}

/// `$QFROB_CACHE`, else `$XDG_CACHE_HOME/qfrob`, else `~/.cache/qfrob`.
pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("QFROB_CACHE").filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(p));
    }
    if let Some(p) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return Some(PathBuf::from(p).join("qfrob"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("qfrob"))
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, n: u32, p: u64, s: u32, module: ModuleId) -> PathBuf {
        self.dir.join(format!("{n}-{p}-{s}-{}.json", module.as_str()))
    }

    /// Reads a table; files for other parameters are ignored.
    pub fn load(&self, n: u32, p: u64, s: u32, module: ModuleId) -> Result<Option<DimTable>> {
        let path = self.path(n, p, s, module);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(Error::Cache { path, source }),
        };
        let table: DimTable = serde_json::from_str(&text).map_err(|source| Error::CacheFormat { path, source })?;
        if (table.n, table.p, table.s, table.module) != (n, p, s, module) {
            return Ok(None);
        }
        Ok(Some(table))
    }

    /// Writes through a temporary file and a rename, so readers never see a
    /// partial document. Concurrent writers store identical content.
    pub fn store(&self, table: &DimTable) -> Result<()> {
        let path = self.path(table.n, table.p, table.s, table.module);
        let io = |source| Error::Cache { path: path.clone(), source };
        fs::create_dir_all(&self.dir).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        let body = serde_json::to_string(table).expect("tables always serialize");
        tmp.write_all(body.as_bytes()).map_err(io)?;
        tmp.write_all(b"\n").map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(())
    }
}
