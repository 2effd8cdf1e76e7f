//! CSV and JSON emission shared by every experiment.
//!
//! CSV output is comma-separated with a header row; JSON output has its
//! object keys sorted. Both are pure functions of their inputs so reports are
//! byte-identical across runs.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};

/// Renders a rational as `numer/denom`, always with an explicit denominator.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serializes rows as CSV with a header row.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(true)
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::Invariant(format!("csv serialization: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Invariant(format!("csv flush: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

/// Pretty JSON with sorted object keys.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json::Value stores objects in a BTreeMap, which sorts the keys.
    let v = serde_json::to_value(value).map_err(|e| Error::Invariant(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Invariant(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
