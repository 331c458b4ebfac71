//! Institution → coordinate table, read from `institution<TAB>lat<TAB>lng` lines.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lng: f64,
}

pub type GeoTable = BTreeMap<String, GeoPoint>;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeoError {
    #[error("geo table line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

pub fn parse_geo_table(text: &str) -> Result<GeoTable, GeoError> {
    let mut table = GeoTable::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != 3 {
            return Err(GeoError::Malformed { line, reason: format!("expected 3 tab-separated columns, got {}", cols.len()) });
        }
        let coord = |s: &str, what: &str, bound: f64| -> Result<f64, GeoError> {
            let v: f64 = s.trim().parse().map_err(|_| GeoError::Malformed { line, reason: format!("bad {what} `{s}`") })?;
            if !v.is_finite() || v.abs() > bound {
                return Err(GeoError::Malformed { line, reason: format!("{what} {v} out of range") });
            }
            Ok(v)
        };
        let lat = coord(cols[1], "latitude", 90.0)?;
        let lng = coord(cols[2], "longitude", 180.0)?;
        table.insert(cols[0].to_owned(), GeoPoint { lat, lng });
    }
    Ok(table)
}

pub fn format_geo_table(table: &GeoTable) -> String {
    table
        .iter()
        .map(|(inst, p)| format!("{inst}\t{}\t{}\n", p.lat, p.lng))
        .collect()
}
