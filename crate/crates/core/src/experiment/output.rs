use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Writes `bytes` to a sibling temp file and renames it over `path`, so a
/// reader never observes a half-written artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Renders into memory with `render`, then writes atomically.
pub fn write_with<F>(path: &Path, render: F) -> Result<PathBuf>
where
    F: FnOnce(&mut Vec<u8>) -> io::Result<()>,
{
    let mut buf = Vec::new();
    render(&mut buf)?;
    write_atomic(path, &buf)?;
    Ok(path.to_path_buf())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub command: String,
    pub experiment: String,
    pub config: Value,
}

/// `manifest.json`: every artifact in an output directory with the
/// configuration that produced it. Keys are file names, sorted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifacts: BTreeMap<String, ManifestEntry>,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("corrupt manifest {}: {e}", path.display()))),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn record(&mut self, file: &Path, entry: ManifestEntry) {
        let key = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.display().to_string());
        self.artifacts.insert(key, entry);
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))?;
        text.push('\n');
        let path = dir.join(MANIFEST_FILE);
        write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }

    /// Loads the directory's manifest, adds `files`, and saves it back.
    pub fn update(dir: &Path, files: &[PathBuf], command: &str, experiment: &str, config: &Value) -> Result<PathBuf> {
        let mut m = Self::load(dir)?;
        for f in files {
            m.record(
                f,
                ManifestEntry {
                    command: command.to_string(),
                    experiment: experiment.to_string(),
                    config: config.clone(),
                },
            );
        }
        m.save(dir)
    }
}
