//! Content-addressed storage of serialized results.
//!
//! Each entry is one JSON file named by the request key. Writes go through a
//! temporary file in the same directory followed by a rename, so readers
//! never observe a partial entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::error::CliError;
use crate::request::{sha256_hex, Request, ARTIFACT_VERSION};

pub const DEFAULT_DIR: &str = ".wallx-cache";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(String),
    Miss,
    Corrupt(String),
}

/// Where a payload came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Cache,
    Computed,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into(), version: ARTIFACT_VERSION.into() }
    }

    /// `WALLX_CACHE` if set, otherwise `.wallx-cache` in the working directory.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os("WALLX_CACHE").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR)))
    }

    pub fn with_version(mut self, version: &str) -> Self {
        self.version = version.into();
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, req: &Request) -> PathBuf {
        self.dir.join(format!("{}.json", req.key(&self.version)))
    }

    pub fn get(&self, req: &Request) -> Lookup {
        let path = self.path(req);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(e.to_string()),
        };
        let entry: Value = match serde_json::from_str(&text) {
            Ok(v) => v,
            Err(e) => return Lookup::Corrupt(format!("unreadable entry: {e}")),
        };
        let field = |k: &str| entry.get(k).and_then(Value::as_str);
        let (Some(payload), Some(digest), Some(request)) =
            (field("payload"), field("payload_sha256"), field("request"))
        else {
            return Lookup::Corrupt("entry is missing fields".into());
        };
        if sha256_hex(payload.as_bytes()) != digest {
            return Lookup::Corrupt("payload digest mismatch".into());
        }
        if request != req.canonical() || field("version") != Some(self.version.as_str()) {
            return Lookup::Corrupt("entry belongs to another request".into());
        }
        Lookup::Hit(payload.to_string())
    }

    pub fn put(&self, req: &Request, payload: &str, runtime: Duration) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir)?;
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let entry = json!({
            "version": self.version,
            "request": req.canonical(),
            "created_unix": created,
            "runtime_ms": runtime.as_millis() as u64,
            "payload_sha256": sha256_hex(payload.as_bytes()),
            "payload": payload,
        });
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry).expect("json value").as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(req)).map_err(|e| CliError::Io(e.error))?;
        Ok(())
    }

    /// Serves `req` from the cache, or computes, stores and returns it.
    /// A corrupted entry is reported on stderr and replaced.
    pub fn get_or_compute(
        &self,
        req: &Request,
        compute: impl FnOnce() -> Result<String, CliError>,
    ) -> Result<(String, Source), CliError> {
        match self.get(req) {
            Lookup::Hit(p) => return Ok((p, Source::Cache)),
            Lookup::Corrupt(why) => eprintln!("warning: discarding cache entry {}: {why}", self.path(req).display()),
            Lookup::Miss => {}
        }
        let start = std::time::Instant::now();
        let payload = compute()?;
        if let Err(e) = self.put(req, &payload, start.elapsed()) {
            eprintln!("warning: could not write cache entry: {e}");
        }
        Ok((payload, Source::Computed))
    }
}
