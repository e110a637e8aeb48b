//! Run reports and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use serde_json::{Map, Value};

use modvar::spectral::EigenReport;
use modvar::witnesses::{ScanCurve, WitnessResult};

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub version: String,
    pub timestamp: String,
}

impl Provenance {
    /// The timestamp honors `SOURCE_DATE_EPOCH` so that reruns can be
    /// byte-identical.
    pub fn now() -> Result<Self, CliError> {
        let time = match std::env::var("SOURCE_DATE_EPOCH") {
            Ok(raw) => {
                let secs: i64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("SOURCE_DATE_EPOCH is not an integer: `{raw}`")))?;
                DateTime::<Utc>::from_timestamp(secs, 0)
                    .ok_or_else(|| CliError::usage(format!("SOURCE_DATE_EPOCH out of range: {secs}")))?
            }
            Err(_) => Utc::now(),
        };
        Ok(Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: time.to_rfc3339_opts(SecondsFormat::Secs, true),
        })
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub config: Map<String, Value>,
    pub results: Vec<WitnessResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_c: Option<EigenReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanCurve>,
    pub provenance: Provenance,
}

impl RunReport {
    pub fn new(command: Vec<String>, config: Map<String, Value>) -> Result<Self, CliError> {
        Ok(Self { command, config, results: Vec::new(), constant_c: None, scan: None, provenance: Provenance::now()? })
    }

    fn check_finite(&self) -> Result<(), CliError> {
        let mut values: Vec<(String, f64)> = Vec::new();
        for r in &self.results {
            let name = r.criterion.name();
            values.extend([("lhs", r.lhs), ("threshold", r.threshold), ("violation", r.violation)].map(|(k, v)| (format!("{name}.{k}"), v)));
            values.extend(r.components.iter().map(|(k, v)| (format!("{name}.{k}"), *v)));
            values.extend(r.sd.map(|v| (format!("{name}.sd"), v)));
        }
        if let Some(c) = &self.constant_c {
            values.push(("constant_c.c_value".into(), c.c_value));
            values.push(("constant_c.convergence_delta".into(), c.convergence_delta));
        }
        if let Some(s) = &self.scan {
            values.extend(s.violations.iter().map(|v| ("scan.violations".to_string(), *v)));
        }
        match values.into_iter().find(|(_, v)| !v.is_finite()) {
            Some((k, v)) => Err(CliError::usage(format!("non-finite value {v} in `{k}`"))),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        self.check_finite()?;
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::usage(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Flat table: witness results, or the curve / constant when present.
    pub fn to_csv(&self) -> Result<String, CliError> {
        self.check_finite()?;
        let mut out = String::new();
        if let Some(scan) = &self.scan {
            out.push_str("ratio,violation\n");
            for (r, v) in scan.ratios.iter().zip(&scan.violations) {
                let _ = writeln!(out, "{r},{v}");
            }
        } else if let Some(c) = &self.constant_c {
            out.push_str("n_max,c_value,convergence_delta\n");
            let _ = writeln!(out, "{},{},{}", c.n_max, c.c_value, c.convergence_delta);
        } else {
            out.push_str("criterion,pairing,lhs,threshold,violation,sd\n");
            for r in &self.results {
                let pairing = r.pairing.map(|p| p.to_string()).unwrap_or_default();
                let sd = r.sd.map(|v| v.to_string()).unwrap_or_default();
                let _ = writeln!(out, "{},{pairing},{},{},{},{sd}", r.criterion, r.lhs, r.threshold, r.violation);
            }
        }
        Ok(out)
    }
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::io(path, e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
