//! Key-value experiment configs: flag/file merging, validation,
//! canonical fingerprinting.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use fracwave::Error as CoreError;

/// CLI-level failure, mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// exit 1: malformed invocation (unknown/missing keys, bad syntax)
    Usage(String),
    /// exit 2: well-formed but out-of-domain parameters
    Validation(String),
    /// exit 3: numerical failure inside the library
    Numerical(String),
    /// exit 4: filesystem trouble
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_) | CoreError::NotTempered { .. } => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Resolved configuration: a flat, sorted key-value map.
#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    /// Parse a line-oriented `key = value` file.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {} is not `key = value`: '{raw}'",
                    lineno + 1
                )));
            };
            entries.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// Overlay `other` (flags win over file values).
    pub fn overlay(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.entries.insert(key.to_string(), v);
        }
    }

    pub fn set_default(&mut self, key: &str, value: &str) {
        self.entries
            .entry(key.to_string())
            .or_insert_with(|| value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Usage(format!("missing required parameter '{key}'")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| CliError::Usage(format!("parameter '{key}' is not a number: '{raw}'")))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| {
                CliError::Usage(format!("parameter '{key}' is not an integer: '{raw}'"))
            }),
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.get(key), Some("true") | Some("1") | Some("yes"))
    }

    /// Canonical serialization: sorted `key = value` lines.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    /// Stable hash of the canonical serialization.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.canonical().as_bytes());
        let mut out = String::with_capacity(16);
        for b in &digest[..8] {
            let _ = write!(out, "{b:02x}");
        }
        out
    }
}

/// Parse a `lo:hi:count` geometric time grid.
pub fn parse_geom_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "geometric grid must be lo:hi:count, got '{spec}'"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad grid start '{}'", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad grid end '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad grid count '{}'", parts[2])))?;
    if !(lo > 0.0) || !(hi > lo) || count < 2 {
        return Err(CliError::Validation(format!(
            "geometric grid needs 0 < lo < hi and count >= 2, got '{spec}'"
        )));
    }
    let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                hi
            } else {
                lo * ratio.powi(i as i32)
            }
        })
        .collect())
}

/// Parse a comma-separated list of dyadic band exponents, or `lo..hi`.
pub fn parse_bands(spec: &str) -> Result<Vec<i32>, CliError> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: i32 = lo
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad band exponent '{lo}'")))?;
        let hi: i32 = hi
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad band exponent '{hi}'")))?;
        if hi < lo {
            return Err(CliError::Validation(format!("empty band range '{spec}'")));
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad band exponent '{tok}'")))
        })
        .collect()
}

/// Write atomically: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let base = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        base.to_string_lossy(),
        std::process::id()
    ));
    std::fs::write(&tmp, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::Io(format!("cannot move output into place: {e}")))?;
    Ok(())
}
