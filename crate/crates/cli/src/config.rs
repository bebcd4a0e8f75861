//! Optional `key = value` run configuration. Keys may sit at the top level or
//! under a table named after the subcommand; the table wins. Command-line
//! flags override both.

use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use toml::{Table, Value};

use crate::error::{io_context, usage, Result};

#[derive(Debug, Default)]
pub struct FileConfig {
    table: Table,
    section: String,
}

impl FileConfig {
    pub fn load(path: Option<&Path>, section: &str) -> Result<Self> {
        match path {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(io_context(format!("reading config {}", p.display())))?;
                Self::parse(&text, section)
            }
            None => Ok(Self { table: Table::new(), section: section.to_string() }),
        }
    }

    pub fn parse(text: &str, section: &str) -> Result<Self> {
        let table = text.parse::<Table>().map_err(|e| usage(format!("config: {e}")))?;
        Ok(Self { table, section: section.to_string() })
    }

    fn raw(&self, key: &str) -> Option<&Value> {
        self.table
            .get(&self.section)
            .and_then(Value::as_table)
            .and_then(|t| t.get(key))
            .or_else(|| self.table.get(key).filter(|v| !v.is_table()))
    }

    /// Reads `key` and parses it as `T`; scalars of any TOML type are accepted.
    pub fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Integer(i) => i.to_string(),
            Value::Float(f) => f.to_string(),
            Value::Boolean(b) => b.to_string(),
            Value::Array(items) => items
                .iter()
                .map(|i| i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string()))
                .collect::<Vec<_>>()
                .join(","),
            other => return Err(usage(format!("config key '{key}' has unsupported value {other}"))),
        };
        text.parse()
            .map(Some)
            .map_err(|e| usage(format!("config key '{key}': invalid value '{text}': {e}")))
    }

    /// Flag value if given, else the config value.
    pub fn or<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}
