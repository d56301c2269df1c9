use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CcrError, Result};

pub const CSV_HEADER: [&str; 6] = ["experiment", "params", "defect", "measured", "bound", "pass"];

/// Prefix of skip reasons caused by a memory or size cap.
pub const RESOURCE_SKIP: &str = "resource cap";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped(String),
}

impl Outcome {
    pub fn is_resource_skip(&self) -> bool {
        matches!(self, Outcome::Skipped(r) if r.starts_with(RESOURCE_SKIP))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Pass => f.write_str("true"),
            Outcome::Fail => f.write_str("false"),
            Outcome::Skipped(reason) => write!(f, "skipped: {reason}"),
        }
    }
}

impl FromStr for Outcome {
    type Err = CcrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "true" => Ok(Outcome::Pass),
            "false" => Ok(Outcome::Fail),
            _ => s
                .strip_prefix("skipped: ")
                .map(|r| Outcome::Skipped(r.to_string()))
                .ok_or_else(|| CcrError::InvalidParameter(format!("bad pass field {s:?}"))),
        }
    }
}

/// One measured defect. `params` is a `key=value;key=value` string whose
/// first key is the dimension parameter of the experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectRecord {
    pub experiment: String,
    pub params: String,
    pub defect: String,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
    pub outcome: Outcome,
}

impl DefectRecord {
    /// A measurement; passes iff `measured <= bound` when a bound exists.
    pub fn measured(experiment: &str, params: String, defect: &str, measured: f64, bound: Option<f64>) -> Self {
        let outcome = match bound {
            Some(b) if !(measured <= b) => Outcome::Fail,
            _ => Outcome::Pass,
        };
        Self {
            experiment: experiment.to_string(),
            params,
            defect: defect.to_string(),
            measured: Some(measured),
            bound,
            outcome,
        }
    }

    pub fn skipped(experiment: &str, params: String, defect: &str, reason: String) -> Self {
        Self {
            experiment: experiment.to_string(),
            params,
            defect: defect.to_string(),
            measured: None,
            bound: None,
            outcome: Outcome::Skipped(reason),
        }
    }

    /// `(key, value)` pairs of `params`.
    pub fn param_pairs(&self) -> Vec<(&str, &str)> {
        self.params
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|kv| kv.split_once('=').unwrap_or((kv, "")))
            .collect()
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn parse_optional(field: &str, name: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| CcrError::InvalidParameter(format!("bad {name} field {field:?}")))
}

fn csv_error(e: csv::Error) -> CcrError {
    CcrError::InvalidParameter(format!("csv: {e}"))
}

pub fn write_csv<W: Write>(records: &[DefectRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for r in records {
        w.write_record([
            r.experiment.clone(),
            r.params.clone(),
            r.defect.clone(),
            r.measured.map(format_number).unwrap_or_default(),
            r.bound.map(format_number).unwrap_or_default(),
            r.outcome.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| CcrError::InvalidParameter(format!("write: {e}")))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<DefectRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_error)?;
    if header.iter().ne(CSV_HEADER) {
        return Err(CcrError::InvalidParameter(format!("unexpected csv header {header:?}")));
    }
    rd.records()
        .map(|row| {
            let row = row.map_err(csv_error)?;
            Ok(DefectRecord {
                experiment: row[0].to_string(),
                params: row[1].to_string(),
                defect: row[2].to_string(),
                measured: parse_optional(&row[3], "measured")?,
                bound: parse_optional(&row[4], "bound")?,
                outcome: row[5].parse()?,
            })
        })
        .collect()
}

pub fn write_json<W: Write>(records: &[DefectRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)
        .map_err(|e| CcrError::InvalidParameter(format!("json: {e}")))?;
    writeln!(out).map_err(|e| CcrError::InvalidParameter(format!("write: {e}")))
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<DefectRecord>> {
    serde_json::from_reader(input).map_err(|e| CcrError::InvalidParameter(format!("json: {e}")))
}

/// Reads either format, deciding by the first non-blank character.
pub fn read_records(text: &str) -> Result<Vec<DefectRecord>> {
    if text.trim_start().starts_with('[') {
        read_json(text.as_bytes())
    } else {
        read_csv(text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<DefectRecord> {
        vec![
            DefectRecord::measured("spin", "p=10;k=3".into(), "thm3.1", 0.6000000000000001, Some(0.6 + 1e-10)),
            DefectRecord::measured("weyl", "nu=1024;mu=32;l=0".into(), "thm2.4-group", 0.1, None),
            DefectRecord::measured("clifford", "nu=2".into(), "clifford-anticomm", 1.0, Some(1e-10)),
            DefectRecord::skipped("spin", "p=2;k=3".into(), "thm3.1", "k exceeds p, with, commas".into()),
        ]
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        write_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("experiment,params,defect,measured,bound,pass\n"));
        assert_eq!(read_records(&text).unwrap(), sample());
        assert_eq!(sample()[2].outcome, Outcome::Fail);
    }

    #[test]
    fn json_round_trip() {
        let mut buf = Vec::new();
        write_json(&sample(), &mut buf).unwrap();
        assert_eq!(read_records(std::str::from_utf8(&buf).unwrap()).unwrap(), sample());
    }

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        assert_eq!(format_number(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!("skipped: x".parse::<Outcome>().unwrap(), Outcome::Skipped("x".into()));
        assert!("maybe".parse::<Outcome>().is_err());
    }
}
