use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;

use crate::error::{io_context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

/// Resolved global options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Context {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Context {
    /// Writes the primary output to `--out`, or to stdout.
    pub fn emit(&self, content: &str) -> Result<()> {
        match &self.out {
            Some(path) => write_file(path, content),
            None => {
                let mut stdout = io::stdout().lock();
                match stdout.write_all(content.as_bytes()).and_then(|_| stdout.flush()) {
                    Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(io_context("writing stdout")(e)),
                    _ => Ok(()),
                }
            }
        }
    }
}

pub fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_context(format!("creating {}", parent.display())))?;
    }
    fs::write(path, content).map_err(io_context(format!("writing {}", path.display())))
}
