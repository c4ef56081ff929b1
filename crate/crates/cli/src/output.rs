use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Where results go: a file, or stdout when no path is given.
pub struct Sink {
    path: PathBuf,
    out: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        Ok(match path {
            Some(p) => Sink {
                path: p.to_path_buf(),
                out: Box::new(BufWriter::new(
                    File::create(p).map_err(|e| CliError::io(p, e))?,
                )),
            },
            None => Sink {
                path: PathBuf::from("<stdout>"),
                out: Box::new(BufWriter::new(io::stdout().lock())),
            },
        })
    }

    pub fn write_str(&mut self, s: &str) -> Result<(), CliError> {
        self.out
            .write_all(s.as_bytes())
            .map_err(|e| CliError::io(&self.path, e))
    }

    pub fn json<T: Serialize>(&mut self, value: &T) -> Result<(), CliError> {
        let mut s =
            serde_json::to_string_pretty(value).map_err(|e| CliError::io(&self.path, e.into()))?;
        s.push('\n');
        self.write_str(&s)
    }

    pub fn csv<T: Serialize>(&mut self, rows: &[T]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)
                .map_err(|e| CliError::io(&self.path, e.into()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::io(&self.path, e.into_error()))?;
        self.out
            .write_all(&bytes)
            .map_err(|e| CliError::io(&self.path, e))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out.flush().map_err(|e| CliError::io(&self.path, e))
    }
}
