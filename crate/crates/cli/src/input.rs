use std::fs;
use std::path::Path;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    /// Exact when every scalar is a string or an integer, float otherwise.
    Auto,
    Exact,
    Float,
}

impl Backend {
    pub fn resolve(self, input: &Input) -> Backend {
        match self {
            Backend::Auto if all_exact(&input.value) => Backend::Exact,
            Backend::Auto => Backend::Float,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Auto => "auto",
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

/// A JSON input file kept as raw bytes (for the digest and line-accurate
/// errors) and as a parsed value (for shape inspection).
pub struct Input {
    pub raw: Vec<u8>,
    pub value: Value,
    name: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let name = path.display().to_string();
        let raw = fs::read(path).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        let value = serde_json::from_slice(&raw).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        Ok(Self { raw, value, name })
    }

    /// Deserializes from the raw bytes, reporting the field path and line on
    /// failure.
    pub fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        let de = &mut serde_json::Deserializer::from_slice(&self.raw);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Input(format!("{}: at {}: {}", self.name, path, e.into_inner()))
        })
    }
}

/// No JSON number with a fractional part or exponent anywhere.
fn all_exact(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(xs) => xs.iter().all(all_exact),
        Value::Object(m) => m.values().all(all_exact),
        _ => true,
    }
}
