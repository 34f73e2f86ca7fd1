use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::csv_codec;
use crate::error::StoreError;
use crate::model::{PlantRecord, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl Format {
    /// Guesses from a file extension; defaults to JSON.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    /// `line N` for CSV, `record[i]` for JSON.
    pub locator: String,
    pub report: ValidationReport,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportReport {
    pub imported: usize,
    pub rejected: Vec<Rejection>,
    pub warnings: usize,
}

/// A source record after decoding, before validation against the store.
pub type Decoded = (String, Result<PlantRecord, ValidationReport>);

fn single_error(field: &str, message: impl Into<String>) -> ValidationReport {
    let mut r = ValidationReport::default();
    r.error(field, message);
    r
}

/// Splits a source document into records. Structural problems (bad UTF-8,
/// wrong CSV header, non-array JSON) fail the whole source; everything else
/// is reported per record.
pub fn decode_source(source: &[u8], format: Format) -> Result<Vec<Decoded>, StoreError> {
    let text = std::str::from_utf8(source)
        .map_err(|e| StoreError::MalformedSource(format!("not UTF-8: {e}")))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    match format {
        Format::Json => decode_json(text),
        Format::Csv => decode_csv(text),
    }
}

fn decode_json(text: &str) -> Result<Vec<Decoded>, StoreError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| StoreError::MalformedSource(e.to_string()))?;
    let serde_json::Value::Array(items) = value else {
        return Err(StoreError::MalformedSource(
            "expected a top-level array of records".into(),
        ));
    };
    Ok(items
        .into_iter()
        .enumerate()
        .map(|(i, item)| {
            let decoded = serde_json::from_value::<PlantRecord>(item)
                .map_err(|e| single_error("record", e.to_string()));
            (format!("record[{i}]"), decoded)
        })
        .collect())
}

fn decode_csv(text: &str) -> Result<Vec<Decoded>, StoreError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| StoreError::MalformedSource(e.to_string()))?
        .clone();
    let expected: Vec<&str> = csv_codec::headers().collect();
    let width = header.len();
    if width < csv_codec::SURVEY_HEADERS.len()
        || width > expected.len()
        || header.iter().zip(&expected).any(|(a, b)| a.trim() != *b)
    {
        return Err(StoreError::MalformedSource(format!(
            "CSV header must be the first {}..={} of: {}",
            csv_codec::SURVEY_HEADERS.len(),
            expected.len(),
            expected.join(", ")
        )));
    }

    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| StoreError::MalformedSource(e.to_string()))?;
        // csv's own line counter drifts on CRLF input, so count from the
        // offset, which may still sit on the previous line's terminator
        let bytes = text.as_bytes();
        let mut offset = row
            .position()
            .map_or(0, |p| p.byte() as usize)
            .min(bytes.len());
        while offset < bytes.len() && matches!(bytes[offset], b'\r' | b'\n') {
            offset += 1;
        }
        let line = bytes[..offset].iter().filter(|b| **b == b'\n').count() + 1;
        let locator = format!("line {line}");
        if row.len() != width {
            out.push((
                locator,
                Err(single_error(
                    "row",
                    format!("expected {width} fields, found {}", row.len()),
                )),
            ));
            continue;
        }
        let cells: Vec<&str> = row.iter().collect();
        out.push((locator, csv_codec::decode_row(&cells)));
    }
    Ok(out)
}

/// Serializes records in the given order. JSON is the lossless canonical form.
pub fn encode_records<'a>(
    records: impl IntoIterator<Item = &'a PlantRecord>,
    format: Format,
) -> Result<Vec<u8>, StoreError> {
    match format {
        Format::Json => {
            let records: Vec<&PlantRecord> = records.into_iter().collect();
            let mut out = serde_json::to_vec_pretty(&records)
                .map_err(|e| StoreError::StoreUnavailable(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::CRLF)
                .from_writer(Vec::new());
            let csv_err = |e: csv::Error| StoreError::StoreUnavailable(e.to_string());
            writer.write_record(csv_codec::headers()).map_err(csv_err)?;
            for r in records {
                writer
                    .write_record(csv_codec::encode_row(r))
                    .map_err(csv_err)?;
            }
            writer
                .into_inner()
                .map_err(|e| StoreError::StoreUnavailable(e.to_string()))
        }
    }
}
