//! Tensor serialization and atomic file writes.
//!
//! The shared tensor format is a JSON record `{dim, rank, kind, entries}`:
//! rational entries are strings `"p/q"` in lowest terms, float entries are
//! plain JSON numbers (serde emits the shortest round-trip decimal).
//! Component order is the documented row-major order. Non-reduced rationals
//! are accepted on read and normalized.

use crate::error::ParseError;
use crate::scalar::{Rational, ScalarKind};
use crate::tensor::DenseTensor;
use serde_json::Value;
use std::fs;
use std::io::Write;
use std::path::Path;

/// A deserialized tensor of either scalar kind.
#[derive(Debug, Clone, PartialEq)]
pub enum TensorRecord {
    Rational(DenseTensor<Rational>),
    Float64(DenseTensor<f64>),
}

impl TensorRecord {
    pub fn kind(&self) -> ScalarKind {
        match self {
            TensorRecord::Rational(_) => ScalarKind::Rational,
            TensorRecord::Float64(_) => ScalarKind::Float64,
        }
    }
}

pub fn tensor_to_json(t: &TensorRecord) -> Value {
    match t {
        TensorRecord::Rational(t) => serde_json::json!({
            "dim": t.dim(),
            "rank": t.rank(),
            "kind": "rational",
            "entries": t.entries().iter().map(|e| e.to_fraction_string()).collect::<Vec<_>>(),
        }),
        TensorRecord::Float64(t) => serde_json::json!({
            "dim": t.dim(),
            "rank": t.rank(),
            "kind": "float64",
            "entries": t.entries(),
        }),
    }
}

pub fn tensor_from_json(v: &Value) -> Result<TensorRecord, ParseError> {
    let obj = v
        .as_object()
        .ok_or_else(|| ParseError::BadTensorRecord("expected a JSON object".into()))?;
    let get_usize = |key: &str| -> Result<usize, ParseError> {
        obj.get(key)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| ParseError::BadTensorRecord(format!("missing integer field '{key}'")))
    };
    let dim = get_usize("dim")?;
    let rank = get_usize("rank")?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| ParseError::BadTensorRecord("missing string field 'kind'".into()))?;
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::BadTensorRecord("missing array field 'entries'".into()))?;
    match kind {
        "rational" => {
            let parsed: Result<Vec<Rational>, ParseError> = entries
                .iter()
                .map(|e| {
                    e.as_str()
                        .ok_or_else(|| {
                            ParseError::BadTensorRecord(
                                "rational entries must be strings".into(),
                            )
                        })
                        .and_then(Rational::parse)
                })
                .collect();
            let t = DenseTensor::new(dim, rank, parsed?)
                .map_err(|e| ParseError::BadTensorRecord(e.to_string()))?;
            Ok(TensorRecord::Rational(t))
        }
        "float64" => {
            let parsed: Result<Vec<f64>, ParseError> = entries
                .iter()
                .map(|e| {
                    e.as_f64().ok_or_else(|| {
                        ParseError::BadTensorRecord("float entries must be numbers".into())
                    })
                })
                .collect();
            let t = DenseTensor::new(dim, rank, parsed?)
                .map_err(|e| ParseError::BadTensorRecord(e.to_string()))?;
            Ok(TensorRecord::Float64(t))
        }
        other => Err(ParseError::BadTensorRecord(format!(
            "unknown kind '{other}'"
        ))),
    }
}

pub fn read_tensor_file(path: &Path) -> Result<TensorRecord, std::io::Error> {
    let text = fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, ParseError::from(e)))?;
    tensor_from_json(&value)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

pub fn write_tensor_file(path: &Path, t: &TensorRecord) -> Result<(), std::io::Error> {
    let text = serde_json::to_string_pretty(&tensor_to_json(t)).expect("tensor JSON");
    write_atomic(path, text.as_bytes())
}

/// Writes via a temporary file in the same directory followed by a rename,
/// so a failed run never leaves a partial file at the destination.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), std::io::Error> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.write_all(b"\n")?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DenseTensor;

    fn rat(s: &str) -> Rational {
        Rational::parse(s).unwrap()
    }

    #[test]
    fn rational_roundtrip_is_exact() {
        let t = DenseTensor::new(
            2,
            2,
            vec![rat("1/3"), rat("-7/2"), rat("0"), rat("5")],
        )
        .unwrap();
        let rec = TensorRecord::Rational(t.clone());
        let back = tensor_from_json(&tensor_to_json(&rec)).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn float_roundtrip_is_bit_exact() {
        let t = DenseTensor::new(2, 1, vec![0.1, -3.25e-7]).unwrap();
        let rec = TensorRecord::Float64(t);
        let text = serde_json::to_string(&tensor_to_json(&rec)).unwrap();
        let back = tensor_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn non_reduced_rationals_are_normalized() {
        let v = serde_json::json!({
            "dim": 2, "rank": 1, "kind": "rational", "entries": ["2/4", "-6/-8"]
        });
        let TensorRecord::Rational(t) = tensor_from_json(&v).unwrap() else {
            panic!("expected rational kind");
        };
        assert_eq!(t.entries()[0], rat("1/2"));
        assert_eq!(t.entries()[1], rat("3/4"));
    }

    #[test]
    fn malformed_records_are_rejected() {
        for v in [
            serde_json::json!([1, 2, 3]),
            serde_json::json!({"dim": 2, "rank": 1, "kind": "rational", "entries": ["1/0", "1"]}),
            serde_json::json!({"dim": 2, "rank": 1, "kind": "float64", "entries": ["x", 1.0]}),
            serde_json::json!({"dim": 2, "rank": 1, "kind": "rational", "entries": ["1"]}),
            serde_json::json!({"dim": 2, "rank": 1, "kind": "decimal", "entries": [1.0, 2.0]}),
        ] {
            assert!(tensor_from_json(&v).is_err(), "{v}");
        }
    }

    #[test]
    fn truncated_file_is_a_parse_error_with_location() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.json");
        std::fs::write(&path, "{\"dim\": 2, \"rank\": 1,").unwrap();
        let err = read_tensor_file(&path).unwrap_err();
        assert_eq!(err.kind(), std::io::ErrorKind::InvalidData);
        assert!(err.to_string().contains("line"));
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tensor.json");
        let t = DenseTensor::new(3, 1, vec![rat("1/3"), rat("0"), rat("-2/7")]).unwrap();
        write_tensor_file(&path, &TensorRecord::Rational(t.clone())).unwrap();
        let back = read_tensor_file(&path).unwrap();
        assert_eq!(back, TensorRecord::Rational(t));
    }
}
