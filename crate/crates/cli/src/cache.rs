//! Content-addressed store for completed orbit reports.
//!
//! Entries live at `<dir>/<sha256>.json`, keyed by the group and the canonical
//! vector. Anything that fails to parse or does not match its key is ignored.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chamanara_core::orbit::OrbitReport;
use sha2::{Digest, Sha256};

pub fn key(group: &str, canonical_vector: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(group.as_bytes());
    hasher.update(b"\n");
    hasher.update(canonical_vector.as_bytes());
    hex::encode(hasher.finalize())
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

/// A cached complete report, or `None` (with a warning for unusable entries).
pub fn load(dir: &Path, key: &str) -> Option<OrbitReport> {
    let path = entry_path(dir, key);
    let text = match fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return None,
        Err(e) => {
            eprintln!(
                "warning: ignoring unreadable cache entry {}: {e}",
                path.display()
            );
            return None;
        }
    };
    match serde_json::from_str::<OrbitReport>(&text) {
        Ok(report) if report.complete && valid_shape(&report) => Some(report),
        Ok(_) => {
            eprintln!(
                "warning: ignoring inconsistent cache entry {}",
                path.display()
            );
            None
        }
        Err(e) => {
            eprintln!(
                "warning: ignoring corrupt cache entry {}: {e}",
                path.display()
            );
            None
        }
    }
}

fn valid_shape(r: &OrbitReport) -> bool {
    let n = r.vertices.len();
    n == r.order
        && r.p1_edges.len() == n
        && r.p2_edges.len() == n
        && r.p1_edges
            .iter()
            .chain(&r.p2_edges)
            .all(|e| matches!(e, Some(t) if *t < n))
}

/// Writes through a temporary file so readers never see a partial entry.
pub fn store(dir: &Path, key: &str, report: &OrbitReport) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let path = entry_path(dir, key);
    let tmp = dir.join(format!("{key}.json.tmp{}", std::process::id()));
    let text = serde_json::to_string(report).map_err(io::Error::other)?;
    fs::write(&tmp, text)?;
    fs::rename(&tmp, &path)
}
