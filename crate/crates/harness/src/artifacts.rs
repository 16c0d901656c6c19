//! Deterministic artifact emission: CSV tables, binary field snapshots, and
//! the run manifest. Every file is written atomically (temp + rename) and
//! recorded with size and checksum.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use shaken_lattice::grid::GridState;
use shaken_lattice::LatticeConfig;

use crate::config::hex;

/// Collects emitted files; merged single-threaded into the manifest.
pub struct ArtifactSink {
    root: PathBuf,
    files: Mutex<Vec<ManifestEntry>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool_version: &'a str,
    config_hash: &'a str,
    files: &'a [ManifestEntry],
}

impl ArtifactSink {
    pub fn new(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)
            .with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(Self { root, files: Mutex::new(Vec::new()) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Write bytes atomically under the sink root and record them.
    pub fn write(&self, rel_path: &str, bytes: &[u8]) -> Result<()> {
        let final_path = self.root.join(rel_path);
        if let Some(parent) = final_path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = final_path.with_extension(format!(
            "{}.tmp-{}",
            final_path.extension().and_then(|e| e.to_str()).unwrap_or(""),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)
                .with_context(|| format!("creating {}", tmp.display()))?;
            f.write_all(bytes)?;
            f.sync_all().ok();
        }
        fs::rename(&tmp, &final_path)
            .with_context(|| format!("renaming into {}", final_path.display()))?;
        let mut h = Sha256::new();
        h.update(bytes);
        self.files.lock().unwrap().push(ManifestEntry {
            path: rel_path.to_string(),
            bytes: bytes.len() as u64,
            sha256: hex(&h.finalize()),
        });
        Ok(())
    }

    /// Write the manifest (sorted by path) and return its location.
    pub fn finish(self, config_hash: &str) -> Result<PathBuf> {
        let mut files = self.files.into_inner().unwrap();
        files.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            config_hash,
            files: &files,
        };
        let path = self.root.join("manifest.json");
        let bytes = serde_json::to_vec_pretty(&manifest)?;
        let tmp = path.with_extension(format!("json.tmp-{}", std::process::id()));
        fs::write(&tmp, &bytes)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

/// A CSV table accumulated in memory, formatted deterministically.
pub struct CsvTable {
    text: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { text: format!("{}\n", header.join(",")), columns: header.len() }
    }

    pub fn row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.columns, "row width mismatch");
        let mut first = true;
        for v in values {
            if !first {
                self.text.push(',');
            }
            first = false;
            self.text.push_str(&format!("{v:.12e}"));
        }
        self.text.push('\n');
    }

    /// Row with a leading string cell (scheme/tier labels).
    pub fn labeled_row(&mut self, labels: &[&str], values: &[f64]) {
        assert_eq!(labels.len() + values.len(), self.columns, "row width mismatch");
        let mut cells: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        cells.extend(values.iter().map(|v| format!("{v:.12e}")));
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

/// Binary field snapshot.
///
/// Layout (little-endian), exactly 32 header bytes:
///   bytes  0..4   magic "SHKL"
///   bytes  4..8   u32 nx
///   bytes  8..12  u32 ny
///   bytes 12..16  u32 reserved (zero)
///   bytes 16..24  f64 domain half-width (square domains)
///   bytes 24..32  f64 time
/// followed by nx*ny complex samples, row-major with x as the slow index,
/// each sample f64 re then f64 im.
pub fn field_snapshot_bytes(state: &GridState, config: &LatticeConfig) -> Vec<u8> {
    let spec = state.spec;
    let half_width = spec.wells_x as f64 * config.ell;
    let mut out = Vec::with_capacity(32 + 16 * state.psi.len());
    out.extend_from_slice(b"SHKL");
    out.extend_from_slice(&(spec.nx as u32).to_le_bytes());
    out.extend_from_slice(&(spec.ny as u32).to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&half_width.to_le_bytes());
    out.extend_from_slice(&state.time.to_le_bytes());
    for z in &state.psi {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

/// Same layout for a real scalar field (phase maps): magic "SHKR", single
/// f64 per sample.
pub fn real_field_bytes(
    values: &[f64],
    nx: usize,
    ny: usize,
    half_width: f64,
    time: f64,
) -> Vec<u8> {
    assert_eq!(values.len(), nx * ny);
    let mut out = Vec::with_capacity(32 + 8 * values.len());
    out.extend_from_slice(b"SHKR");
    out.extend_from_slice(&(nx as u32).to_le_bytes());
    out.extend_from_slice(&(ny as u32).to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&half_width.to_le_bytes());
    out.extend_from_slice(&time.to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sink_writes_and_manifests() {
        let dir = tempfile::tempdir().unwrap();
        let sink = ArtifactSink::new(dir.path()).unwrap();
        sink.write("a/table.csv", b"x\n1\n").unwrap();
        sink.write("b.json", b"{}").unwrap();
        let manifest_path = sink.finish("deadbeef").unwrap();
        let text = fs::read_to_string(manifest_path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["config_hash"], "deadbeef");
        let files = v["files"].as_array().unwrap();
        assert_eq!(files.len(), 2);
        // sorted by path
        assert_eq!(files[0]["path"], "a/table.csv");
        assert_eq!(files[0]["bytes"], 4);
        assert_eq!(
            fs::read(dir.path().join("a/table.csv")).unwrap(),
            b"x\n1\n".to_vec()
        );
    }

    #[test]
    fn csv_formatting_is_fixed_width() {
        let mut t = CsvTable::new(&["t", "v"]);
        t.row(&[0.5, 1.0 / 3.0]);
        let s = String::from_utf8(t.into_bytes()).unwrap();
        assert_eq!(s, "t,v\n5.000000000000e-1,3.333333333333e-1\n");
    }

    #[test]
    fn snapshot_header_is_32_bytes() {
        use shaken_lattice::grid::{GridSpec, GridState};
        use num_complex::Complex64;
        let config = LatticeConfig::new(3.0).unwrap();
        let spec = GridSpec::new(4, 4, 1, 1).unwrap();
        let state = GridState {
            psi: vec![Complex64::new(1.0, -2.0); 16],
            spec,
            time: 7.5,
        };
        let bytes = field_snapshot_bytes(&state, &config);
        assert_eq!(bytes.len(), 32 + 16 * 16);
        assert_eq!(&bytes[0..4], b"SHKL");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 4);
        assert_eq!(
            f64::from_le_bytes(bytes[24..32].try_into().unwrap()),
            7.5
        );
        assert_eq!(
            f64::from_le_bytes(bytes[32..40].try_into().unwrap()),
            1.0
        );
    }
}
