//! Shared parsing for the JSON wire formats.
//!
//! Complex numbers cross the wire as `[re, im]` pairs everywhere; functions
//! in `C(X)` additionally accept plain numbers for real entries.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Metric(#[from] crate::metric::MetricError),
    #[error(transparent)]
    Magic(#[from] crate::magic::MagicError),
    #[error(transparent)]
    Matrix(#[from] crate::matrix::MatrixError),
    #[error(transparent)]
    M2cc(#[from] crate::m2cc::M2ccError),
}

/// Parses a function in `C(X)`: a JSON array whose entries are numbers or
/// `[re, im]` pairs.
pub fn parse_complex_vec(s: &str) -> Result<Vec<Complex64>, ParseError> {
    let value: serde_json::Value = serde_json::from_str(s)?;
    let items = value
        .as_array()
        .ok_or_else(|| ParseError::Schema("expected a JSON array".into()))?;
    items
        .iter()
        .enumerate()
        .map(|(idx, item)| match item {
            serde_json::Value::Number(n) => {
                let re = n.as_f64().ok_or_else(|| {
                    ParseError::Schema(format!("entry {} is not finite", idx + 1))
                })?;
                Ok(Complex64::new(re, 0.0))
            }
            serde_json::Value::Array(pair) if pair.len() == 2 => {
                let part = |k: usize| {
                    pair[k].as_f64().ok_or_else(|| {
                        ParseError::Schema(format!("entry {} is not a number pair", idx + 1))
                    })
                };
                Ok(Complex64::new(part(0)?, part(1)?))
            }
            _ => Err(ParseError::Schema(format!(
                "entry {} must be a number or an [re, im] pair",
                idx + 1
            ))),
        })
        .collect()
}

/// Parses a JSON array of real numbers.
pub fn parse_real_vec(s: &str) -> Result<Vec<f64>, ParseError> {
    Ok(serde_json::from_str(s)?)
}

/// Parses a JSON matrix of booleans (a support relation).
pub fn parse_bool_matrix(s: &str) -> Result<Vec<Vec<bool>>, ParseError> {
    Ok(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_vec_accepts_numbers_and_pairs() {
        let v = parse_complex_vec("[1, [0.5, -2], 3.25]").unwrap();
        assert_eq!(v[0], Complex64::new(1.0, 0.0));
        assert_eq!(v[1], Complex64::new(0.5, -2.0));
        assert_eq!(v[2], Complex64::new(3.25, 0.0));
    }

    #[test]
    fn complex_vec_rejects_other_shapes() {
        assert!(parse_complex_vec("{\"a\": 1}").is_err());
        assert!(parse_complex_vec("[[1, 2, 3]]").is_err());
        assert!(parse_complex_vec("[\"x\"]").is_err());
    }
}
