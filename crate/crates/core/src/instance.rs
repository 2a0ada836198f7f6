//! The JSON instance format.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "periods": [2, 2],
//!   "origins": [
//!     ["0", "0"],
//!     ["1", "1/2"]
//!   ]
//! }
//! ```
//!
//! Rationals are strings in lowest terms (`"-3/2"`, `"0"`, `"2"`); `periods`
//! is `null` for finite instances. [`to_json`] writes exactly this layout, so
//! a canonical file survives a parse/serialize round trip byte for byte.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::packing::CubeSystem;
use crate::scalar::Scalar;

fn field_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

/// Parse an instance file.
pub fn from_json<S: Scalar>(text: &str) -> Result<CubeSystem<S>> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        field_error(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| field_error("document", "expected a JSON object"))?;
    if let Some(key) = obj.keys().find(|k| !matches!(k.as_str(), "dim" | "periods" | "origins")) {
        return Err(field_error(key.clone(), "unknown field"));
    }

    let dim = obj
        .get("dim")
        .ok_or_else(|| field_error("dim", "missing field"))?
        .as_u64()
        .ok_or_else(|| field_error("dim", "expected a non-negative integer"))?;
    if dim == 0 {
        return Err(field_error("dim", "dimension must be positive"));
    }
    let dim = dim as usize;

    let periods = match obj.get("periods") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => {
            if items.len() != dim {
                return Err(field_error(
                    "periods",
                    format!("expected {dim} entries, found {}", items.len()),
                ));
            }
            let periods = items
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.as_i64()
                        .filter(|&p| p >= 2)
                        .ok_or_else(|| field_error(format!("periods[{i}]"), "expected an integer >= 2"))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(periods)
        }
        Some(_) => return Err(field_error("periods", "expected an array or null")),
    };

    let origins = obj
        .get("origins")
        .ok_or_else(|| field_error("origins", "missing field"))?
        .as_array()
        .ok_or_else(|| field_error("origins", "expected an array"))?;
    let origins = origins
        .iter()
        .enumerate()
        .map(|(k, item)| {
            let coords = item
                .as_array()
                .ok_or_else(|| field_error(format!("origins[{k}]"), "expected an array"))?;
            if coords.len() != dim {
                return Err(field_error(
                    format!("origins[{k}]"),
                    format!("expected {dim} coordinates, found {}", coords.len()),
                ));
            }
            coords
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let loc = format!("origins[{k}][{i}]");
                    let text = c
                        .as_str()
                        .ok_or_else(|| field_error(loc.clone(), "expected a rational string such as \"1/2\""))?;
                    S::parse_exact(text).ok_or_else(|| field_error(loc, format!("invalid rational {text:?}")))
                })
                .collect::<Result<Vec<S>>>()
                .map(Point)
        })
        .collect::<Result<Vec<_>>>()?;

    match periods {
        Some(p) => CubeSystem::periodic(dim, origins, p),
        None => CubeSystem::finite(dim, origins),
    }
}

/// Serialize an instance in the canonical layout (trailing newline included).
pub fn to_json<S: Scalar>(system: &CubeSystem<S>) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"dim\": {},\n", system.dim()));
    match system.periods() {
        Some(p) => {
            let items: Vec<String> = p.iter().map(i64::to_string).collect();
            out.push_str(&format!("  \"periods\": [{}],\n", items.join(", ")));
        }
        None => out.push_str("  \"periods\": null,\n"),
    }
    out.push_str("  \"origins\": [");
    for (k, o) in system.origins().iter().enumerate() {
        out.push_str(if k == 0 { "\n    [" } else { ",\n    [" });
        let coords: Vec<String> = o.0.iter().map(|c| format!("\"{c}\"")).collect();
        out.push_str(&coords.join(", "));
        out.push(']');
    }
    if !system.origins().is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    const CANONICAL: &str = "{\n  \"dim\": 2,\n  \"periods\": [2, 2],\n  \"origins\": [\n    [\"0\", \"0\"],\n    [\"1\", \"1/2\"]\n  ]\n}\n";

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let sys = from_json::<BigRational>(CANONICAL).unwrap();
        assert_eq!(to_json(&sys), CANONICAL);
        let finite = "{\n  \"dim\": 1,\n  \"periods\": null,\n  \"origins\": [\n    [\"-3/2\"]\n  ]\n}\n";
        assert_eq!(to_json(&from_json::<BigRational>(finite).unwrap()), finite);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = r#"{"dim": 2, "periods": null, "origins": [["0", "0"], ["1", "1/0"]]}"#;
        match from_json::<BigRational>(bad) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "origins[1][1]"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = r#"{"dim": 2, "periods": [2, 1], "origins": []}"#;
        match from_json::<BigRational>(bad) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "periods[1]"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = "{\"dim\": 2,\n \"origins\": [[\"0\", 0]]}";
        assert!(matches!(from_json::<BigRational>(bad), Err(Error::Parse { .. })));
        let bad = "{\"dim\": 2,\n \"origins\": [[\"0\", ";
        match from_json::<BigRational>(bad) {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        let bad = r#"{"dim": 0, "periods": null, "origins": [[]]}"#;
        assert!(matches!(from_json::<BigRational>(bad), Err(Error::Parse { .. })));
    }
}
