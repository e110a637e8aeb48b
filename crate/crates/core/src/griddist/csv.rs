//! Coincidence-count CSV files.
//!
//! ```text
//! # kind=near
//! # magnification=3.6
//! rho1_mm,rho2_mm,counts
//! 0.0,0.0,1
//! 0.0,0.1,1
//! 0.1,0.0,1
//! 0.1,0.1,1
//! ```
//!
//! Recognized metadata keys: `kind` (near|far, required), `magnification`
//! (required for near), `focal_mm` and `wavelength_nm` (required for far),
//! `units` (must be `mm`), `flip` (true|false). Rows may appear in any
//! order but must cover the full rectangular grid exactly once.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use super::{CountsMap, DetectorPlane, OpticsConfig};
use crate::error::{Error, Result};

pub const HEADER: &str = "rho1_mm,rho2_mm,counts";

pub fn load_coincidence_csv(path: impl AsRef<Path>) -> Result<CountsMap> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_coincidence_csv(&text)
}

pub fn save_coincidence_csv(path: impl AsRef<Path>, map: &CountsMap) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_coincidence_csv(map)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn parse_coincidence_csv(text: &str) -> Result<CountsMap> {
    let mut meta: HashMap<String, (usize, String)> = HashMap::new();
    let mut header_seen = false;
    let mut rows: Vec<(f64, f64, u64, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                meta.insert(k.trim().to_string(), (line_no, v.trim().to_string()));
            }
            continue;
        }
        if !header_seen {
            let normalized: String = line.split(',').map(str::trim).collect::<Vec<_>>().join(",");
            if normalized != HEADER {
                return Err(Error::Parse { line: line_no, msg: format!("expected header `{HEADER}`") });
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse { line: line_no, msg: format!("expected 3 fields, found {}", fields.len()) });
        }
        let r1 = parse_f64(fields[0], line_no)?;
        let r2 = parse_f64(fields[1], line_no)?;
        if fields[2].starts_with('-') {
            return Err(Error::NegativeCounts { line: line_no });
        }
        let c: u64 = fields[2]
            .parse()
            .map_err(|_| Error::Parse { line: line_no, msg: format!("invalid count `{}`", fields[2]) })?;
        rows.push((r1, r2, c, line_no));
    }
    if !header_seen {
        return Err(Error::Parse { line: 0, msg: format!("missing header `{HEADER}`") });
    }

    let plane = match meta.get("kind") {
        None => return Err(Error::MissingMetadata("kind")),
        Some((_, v)) if v == "near" => DetectorPlane::Near,
        Some((_, v)) if v == "far" => DetectorPlane::Far,
        Some((line, v)) => return Err(Error::Parse { line: *line, msg: format!("unknown kind `{v}`") }),
    };
    if let Some((line, v)) = meta.get("units") {
        if v != "mm" {
            return Err(Error::Parse { line: *line, msg: format!("unsupported units `{v}`") });
        }
    }
    let defaults = OpticsConfig::default();
    let key = |name: &'static str, required: bool, default: f64| -> Result<f64> {
        match meta.get(name) {
            Some((line, v)) => parse_f64(v, *line),
            None if required => Err(Error::MissingMetadata(name)),
            None => Ok(default),
        }
    };
    let near = plane == DetectorPlane::Near;
    let optics = OpticsConfig {
        magnification: key("magnification", near, defaults.magnification)?,
        focal_mm: key("focal_mm", !near, defaults.focal_mm)?,
        wavelength_nm: key("wavelength_nm", !near, defaults.wavelength_nm)?,
    };
    let flip = match meta.get("flip").map(|(l, v)| (*l, v.as_str())) {
        None | Some((_, "false")) => false,
        Some((_, "true")) => true,
        Some((line, v)) => return Err(Error::Parse { line, msg: format!("flip must be true or false, got `{v}`") }),
    };

    let rho1 = sorted_unique(rows.iter().map(|r| r.0));
    let rho2 = sorted_unique(rows.iter().map(|r| r.1));
    let mut counts = Array2::<u64>::zeros((rho1.len(), rho2.len()));
    let mut filled = Array2::<bool>::from_elem((rho1.len(), rho2.len()), false);
    for &(r1, r2, c, line) in &rows {
        let i = rho1.binary_search_by(|v| v.total_cmp(&r1)).expect("value collected above");
        let j = rho2.binary_search_by(|v| v.total_cmp(&r2)).expect("value collected above");
        if filled[[i, j]] {
            return Err(Error::Parse { line, msg: format!("duplicate cell ({r1}, {r2})") });
        }
        filled[[i, j]] = true;
        counts[[i, j]] = c;
    }
    if let Some(((i, j), _)) = filled.indexed_iter().find(|(_, f)| !**f) {
        return Err(Error::IncompleteGrid(format!("no row for cell ({}, {})", rho1[i], rho2[j])));
    }
    Ok(CountsMap::new(rho1, rho2, counts, plane, optics)?.with_flip(flip))
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::Parse { line, msg: format!("invalid number `{s}`") })?;
    if !v.is_finite() {
        return Err(Error::Parse { line, msg: format!("non-finite number `{s}`") });
    }
    Ok(v)
}

fn sorted_unique(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub fn render_coincidence_csv(map: &CountsMap) -> String {
    let o = map.optics();
    let kind = match map.plane() {
        DetectorPlane::Near => "near",
        DetectorPlane::Far => "far",
    };
    let mut out = String::with_capacity(32 * map.counts().len() + 128);
    let _ = writeln!(out, "# kind={kind}");
    let _ = writeln!(out, "# magnification={}", o.magnification);
    let _ = writeln!(out, "# focal_mm={}", o.focal_mm);
    let _ = writeln!(out, "# wavelength_nm={}", o.wavelength_nm);
    let _ = writeln!(out, "# units=mm");
    if map.flip() {
        let _ = writeln!(out, "# flip=true");
    }
    out.push_str(HEADER);
    out.push('\n');
    for (i, r1) in map.rho1().iter().enumerate() {
        for (j, r2) in map.rho2().iter().enumerate() {
            let _ = writeln!(out, "{r1:?},{r2:?},{}", map.counts()[[i, j]]);
        }
    }
    out
}
