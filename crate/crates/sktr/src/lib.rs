//! File formats, reports and a parallel executor around [`sktr_core`].
//!
//! * [`pnml`]: process models.
//! * [`sklog`]: stochastically known logs as CSV or JSON.
//! * [`xes`]: deterministic logs.
//! * [`export`]: alignment, recovery, product and sweep reports.

pub mod exec;
pub mod export;
pub mod pnml;
pub mod sklog;
pub mod time;
pub mod xes;

use std::fs;
use std::path::Path;

use sktr_core::SkTrace;
use thiserror::Error;

pub use sktr_core;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogFormat {
    Csv,
    Json,
    Xes,
}

impl LogFormat {
    /// Guesses from the extension: `.xes`, `.json`/`.skjson`, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("xes") => LogFormat::Xes,
            Some("json") | Some("skjson") => LogFormat::Json,
            _ => LogFormat::Csv,
        }
    }
}

#[derive(Debug, Error)]
pub enum ReadLogError {
    #[error("{path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}")]
    Sk {
        path: String,
        #[source]
        source: sklog::SkLogError,
    },
    #[error("{path}")]
    Xes {
        path: String,
        #[source]
        source: xes::XesError,
    },
}

pub fn parse_log(text: &str, format: LogFormat) -> Result<Vec<SkTrace>, Box<dyn std::error::Error + Send + Sync>> {
    Ok(match format {
        LogFormat::Csv => sklog::parse_sk_csv(text)?,
        LogFormat::Json => sklog::parse_sk_json(text)?,
        LogFormat::Xes => xes::parse_xes(text)?,
    })
}

/// Reads a log in the format implied by its extension.
pub fn read_log(path: &Path) -> Result<Vec<SkTrace>, ReadLogError> {
    let p = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| ReadLogError::Io {
        path: p.clone(),
        source,
    })?;
    match LogFormat::from_path(path) {
        LogFormat::Csv => sklog::parse_sk_csv(&text).map_err(|source| ReadLogError::Sk { path: p, source }),
        LogFormat::Json => sklog::parse_sk_json(&text).map_err(|source| ReadLogError::Sk { path: p, source }),
        LogFormat::Xes => xes::parse_xes(&text).map_err(|source| ReadLogError::Xes { path: p, source }),
    }
}
