//! Output files: every CSV starts with a `# cointjump v<version>
//! config-hash=<sha256>` comment line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

pub struct OutDir {
    dir: PathBuf,
    hash: String,
    written: Vec<PathBuf>,
}

impl OutDir {
    pub fn create(dir: &Path, hash: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Validation(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf(), hash: hash.to_string(), written: Vec::new() })
    }

    pub fn header(&self) -> String {
        format!("# cointjump v{} config-hash={}\n", env!("CARGO_PKG_VERSION"), self.hash)
    }

    /// Writes `name` as the header line followed by whatever `body` emits.
    pub fn csv<F>(&mut self, name: &str, body: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut Vec<u8>) -> Result<(), CliError>,
    {
        let mut buf = self.header().into_bytes();
        body(&mut buf)?;
        self.write(name, &buf)
    }

    /// A CSV with the given column names and rows.
    pub fn table(&mut self, name: &str, columns: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        self.csv(name, |buf| {
            let mut w = csv::Writer::from_writer(buf);
            w.write_record(columns)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
            Ok(())
        })
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut buf = serde_json::to_vec_pretty(value)?;
        buf.push(b'\n');
        self.write(name, &buf)
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let mut f = fs::File::create(&path)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
        f.write_all(bytes)?;
        self.written.push(path);
        Ok(())
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

/// Shortest round-trip representation, scientific for very small or large
/// magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
