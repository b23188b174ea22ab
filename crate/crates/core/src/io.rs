//! Shared file helpers: timestamp parsing, lossless number formatting and
//! atomic writes.

use crate::error::{Error, Result};
use chrono::{DateTime, NaiveDate, NaiveDateTime};
use std::io::Write;
use std::path::Path;

/// Parse an ISO-8601 timestamp into seconds since the Unix epoch.
///
/// Accepts RFC 3339 with offset, or naive `YYYY-MM-DDTHH:MM[:SS[.f]]`
/// (space separator allowed, interpreted as UTC), or a bare date.
pub fn parse_timestamp(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(dt.timestamp() as f64 + f64::from(dt.timestamp_subsec_nanos()) * 1e-9);
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            let utc = dt.and_utc();
            return Ok(utc.timestamp() as f64 + f64::from(utc.timestamp_subsec_nanos()) * 1e-9);
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        let utc = d.and_hms_opt(0, 0, 0).expect("midnight").and_utc();
        return Ok(utc.timestamp() as f64);
    }
    Err(Error::invalid(format!("unparseable timestamp '{s}'")))
}

/// Format seconds since epoch as RFC 3339 UTC.
pub fn format_timestamp(t: f64) -> String {
    let secs = t.floor() as i64;
    let nanos = ((t - secs as f64) * 1e9).round().min(999_999_999.0) as u32;
    match DateTime::from_timestamp(secs, nanos) {
        Some(dt) => dt.to_rfc3339_opts(chrono::SecondsFormat::AutoSi, true),
        None => format!("{t}"),
    }
}

/// Numbers in emitted CSVs carry 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::invalid(format!("{what}: cannot parse '{s}' as a number")))
}

/// Write `bytes` to `path` through a sibling temp file and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Render rows of numbers as CSV text with a header.
pub fn numeric_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Read named numeric columns from a CSV with a header row.
pub fn read_columns_csv(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = rdr.headers()?.clone();
    let idx = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| Error::invalid(format!("{}: missing column {n}", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (c, &i) in idx.iter().enumerate() {
            cols[c].push(parse_f64(rec.get(i).unwrap_or(""), &format!("row {} column {}", line + 2, names[c]))?);
        }
    }
    if cols.first().is_none_or(|c| c.is_empty()) {
        return Err(Error::invalid(format!("{}: no data rows", path.display())));
    }
    Ok(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamps() {
        assert_eq!(parse_timestamp("1970-01-01T01:00:00Z").unwrap(), 3600.0);
        assert_eq!(parse_timestamp("1970-01-01 01:00:00").unwrap(), 3600.0);
        assert_eq!(parse_timestamp("1970-01-02").unwrap(), 86400.0);
        assert_eq!(parse_timestamp("1970-01-01T01:00:00+01:00").unwrap(), 0.0);
        assert!(parse_timestamp("yesterday").is_err());
        assert_eq!(parse_timestamp(&format_timestamp(1234567.0)).unwrap(), 1234567.0);
    }

    #[test]
    fn seventeen_digits_roundtrip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
