//! Reading sampled functions from JSON or two-column CSV.
//!
//! Points must already be strictly increasing; nothing is sorted.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use sobolev_trace::SampledFunction;

use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSamples {
    points: Vec<f64>,
    values: Vec<f64>,
}

pub fn load(path: &Path) -> Result<SampledFunction, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}

pub fn parse_json(text: &str) -> Result<SampledFunction, CliError> {
    let raw: RawSamples =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON input: {e}")))?;
    Ok(SampledFunction::new(raw.points, raw.values)?)
}

/// Records `x,f(x)`; a non-numeric first record is taken as a header.
pub fn parse_csv(text: &str) -> Result<SampledFunction, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("malformed CSV input: {e}")))?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        let parsed = match (record.len(), record.get(0), record.get(1)) {
            (2, Some(x), Some(v)) => x.parse::<f64>().ok().zip(v.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((x, v)) => {
                points.push(x);
                values.push(v);
            }
            None if index == 0 && record.len() == 2 => continue,
            None => {
                return Err(CliError::Input(format!(
                    "line {line}: expected two numeric columns, got {:?}",
                    record.iter().collect::<Vec<_>>()
                )))
            }
        }
    }
    Ok(SampledFunction::new(points, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_header() {
        let s = parse_csv("x,f\n0,1\n0.5, 2\n\n3,-1\n").unwrap();
        assert_eq!(s.points(), &[0.0, 0.5, 3.0]);
        assert_eq!(s.values(), &[1.0, 2.0, -1.0]);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(parse_csv("0,1\nfoo,2\n").is_err());
        assert!(parse_csv("0,1,2\n").is_err());
        assert!(parse_csv("1,0\n0,1\n").is_err());
    }

    #[test]
    fn json_input() {
        let s = parse_json(r#"{"points": [0, 1], "values": [2, 3]}"#).unwrap();
        assert_eq!(s.len(), 2);
        assert!(parse_json(r#"{"points": [0, 1]}"#).is_err());
        assert!(parse_json(r#"{"points": [1, 0], "values": [2, 3]}"#).is_err());
    }
}
