//! Count-file interchange format (CSV, UTF-8, header row):
//!
//! ```text
//! setting_id, arm, hwp_deg, qwp_deg, idler_hwp_deg, idler_qwp_deg, c_hh, c_hv, c_vh, c_vv
//! ```
//!
//! Two-qubit rows use `arm = both` and all four count columns. Single-qubit
//! rows name the measured arm, put that station's angles in
//! `hwp_deg`/`qwp_deg`, and leave the idler columns and `c_vh`/`c_vv`
//! empty; `c_hh`/`c_hv` then hold the transmitted/reflected counts.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::{CountRecord, StationAngles, TomographySetting};

pub const COUNT_FILE_HEADER: &str =
    "setting_id,arm,hwp_deg,qwp_deg,idler_hwp_deg,idler_qwp_deg,c_hh,c_hv,c_vh,c_vv";

/// Serializes count records to the CSV format.
pub fn write_count_records(path: &Path, records: &[CountRecord]) -> Result<()> {
    let mut out = String::new();
    out.push_str(COUNT_FILE_HEADER);
    out.push('\n');
    for (id, record) in records.iter().enumerate() {
        let s = &record.setting;
        match &s.idler {
            Some(idler) => {
                writeln!(
                    out,
                    "{},both,{:.6},{:.6},{:.6},{:.6},{},{},{},{}",
                    id,
                    s.signal.hwp_deg,
                    s.signal.qwp_deg,
                    idler.hwp_deg,
                    idler.qwp_deg,
                    record.counts[0],
                    record.counts[1],
                    record.counts[2],
                    record.counts[3],
                )
                .expect("writing to string");
            }
            None => {
                writeln!(
                    out,
                    "{},signal,{:.6},{:.6},,,{},{},,",
                    id, s.signal.hwp_deg, s.signal.qwp_deg, record.counts[0], record.counts[1],
                )
                .expect("writing to string");
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Parses a count CSV. Errors carry the offending line number.
pub fn read_count_records(path: &Path) -> Result<Vec<CountRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if normalize(header) == normalize(COUNT_FILE_HEADER) => {}
        Some((_, header)) => {
            return Err(Error::CountFile(format!(
                "line 1: unexpected header {header:?}"
            )))
        }
        None => return Err(Error::CountFile("empty file".into())),
    }

    let mut records = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 10 {
            return Err(Error::CountFile(format!(
                "line {lineno}: expected 10 fields, got {}",
                fields.len()
            )));
        }
        let arm = fields[1];
        let hwp = parse_f64(fields[2], lineno, "hwp_deg")?;
        let qwp = parse_f64(fields[3], lineno, "qwp_deg")?;
        match arm {
            "both" => {
                let idler_hwp = parse_f64(fields[4], lineno, "idler_hwp_deg")?;
                let idler_qwp = parse_f64(fields[5], lineno, "idler_qwp_deg")?;
                let counts = fields[6..10]
                    .iter()
                    .map(|f| parse_u64(f, lineno))
                    .collect::<Result<Vec<u64>>>()?;
                records.push(CountRecord {
                    setting: TomographySetting::two_qubit(
                        StationAngles::new(hwp, qwp),
                        StationAngles::new(idler_hwp, idler_qwp),
                    ),
                    counts,
                });
            }
            "signal" | "idler" => {
                if !fields[8].is_empty() || !fields[9].is_empty() {
                    return Err(Error::CountFile(format!(
                        "line {lineno}: single-qubit rows must leave c_vh/c_vv empty"
                    )));
                }
                let counts = vec![parse_u64(fields[6], lineno)?, parse_u64(fields[7], lineno)?];
                records.push(CountRecord {
                    setting: TomographySetting::single(hwp, qwp),
                    counts,
                });
            }
            other => {
                return Err(Error::CountFile(format!(
                    "line {lineno}: unknown arm {other:?} (expected both, signal or idler)"
                )));
            }
        }
    }
    if records.is_empty() {
        return Err(Error::CountFile("no data rows".into()));
    }
    Ok(records)
}

fn normalize(header: &str) -> String {
    header.replace(' ', "").to_ascii_lowercase()
}

fn parse_f64(field: &str, lineno: usize, name: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::CountFile(format!("line {lineno}: bad {name} value {field:?}")))
}

fn parse_u64(field: &str, lineno: usize) -> Result<u64> {
    field
        .parse()
        .map_err(|_| Error::CountFile(format!("line {lineno}: bad count value {field:?}")))
}
