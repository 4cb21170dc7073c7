//! CSV matrix and vector I/O. Format: one row per line, comma-separated,
//! no header. Values are written with Rust's shortest round-trip float
//! formatting, so save → load → save is bit-stable.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Result, SgepError};
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// Parses a CSV matrix from text. Rejects ragged rows and non-finite values.
pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Mat<T>> {
    let mut rows: Vec<Vec<T>> = vec![];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = vec![];
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| SgepError::CsvParse {
                line: lineno + 1,
                msg: format!("not a number: {:?}", field.trim()),
            })?;
            if !v.is_finite() {
                return Err(SgepError::CsvParse {
                    line: lineno + 1,
                    msg: format!("non-finite value {v}"),
                });
            }
            row.push(crate::scalar::cast::<T>(v));
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(SgepError::CsvParse {
                    line: lineno + 1,
                    msg: format!("expected {} fields, got {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(SgepError::CsvParse { line: 0, msg: "empty input".into() });
    }
    Mat::from_rows(rows)
}

pub fn load_matrix<T: Scalar>(path: impl AsRef<Path>) -> Result<Mat<T>> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

/// Loads a vector stored either as one line of comma-separated values or as
/// one value per line.
pub fn load_vector<T: Scalar>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let m = load_matrix::<T>(path)?;
    if m.nrows() == 1 {
        return Ok((0..m.ncols()).map(|j| m[(0, j)]).collect());
    }
    if m.ncols() == 1 {
        return Ok((0..m.nrows()).map(|i| m[(i, 0)]).collect());
    }
    Err(SgepError::CsvParse {
        line: 0,
        msg: format!("expected a vector, got a {}x{} matrix", m.nrows(), m.ncols()),
    })
}

pub fn matrix_to_csv<T: Scalar>(m: &Mat<T>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", m[(i, j)]);
        }
        out.push('\n');
    }
    out
}

pub fn save_matrix<T: Scalar>(path: impl AsRef<Path>, m: &Mat<T>) -> Result<()> {
    std::fs::write(path, matrix_to_csv(m))?;
    Ok(())
}

pub fn vector_to_csv<T: Scalar>(v: &[T]) -> String {
    let mut out = String::new();
    for (j, x) in v.iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        let _ = write!(out, "{x}");
    }
    out.push('\n');
    out
}

pub fn save_vector<T: Scalar>(path: impl AsRef<Path>, v: &[T]) -> Result<()> {
    std::fs::write(path, vector_to_csv(v))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let m: Mat<f64> = parse_matrix("1,0.25\n-3.5,0.1\n").unwrap();
        assert_eq!(m[(1, 0)], -3.5);
        let csv = matrix_to_csv(&m);
        let m2: Mat<f64> = parse_matrix(&csv).unwrap();
        assert_eq!(m.as_slice(), m2.as_slice());
        assert_eq!(csv, matrix_to_csv(&m2));
    }

    #[test]
    fn parse_rejects_ragged_and_nan() {
        assert!(matches!(
            parse_matrix::<f64>("1,2\n3\n"),
            Err(SgepError::CsvParse { line: 2, .. })
        ));
        assert!(parse_matrix::<f64>("1,NaN\n").is_err());
        assert!(parse_matrix::<f64>("1,inf\n").is_err());
        assert!(parse_matrix::<f64>("1,x\n").is_err());
        assert!(parse_matrix::<f64>("").is_err());
    }

    #[test]
    fn vector_round_trip() {
        let csv = vector_to_csv(&[0.1f64, -2.0, 3.0]);
        assert_eq!(csv, "0.1,-2,3\n");
    }
}
