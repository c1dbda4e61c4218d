//! File formats: headerless CSV for matrices, JSON string arrays for spectra.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces every value bit-for-bit.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::spectrum::{format_complex, parse_complex};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

/// Parse a headerless CSV file into a matrix. Rows are nonempty lines,
/// fields are comma-separated decimal numbers; every row must have the same
/// width and every value must be finite.
pub fn read_matrix_csv(path: &Path) -> Result<Mat> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix_csv(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// CSV parsing on an in-memory string; see [`read_matrix_csv`].
pub fn parse_matrix_csv(text: &str) -> Result<Mat> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (col, field) in line.split(',').enumerate() {
            let field = field.trim();
            let value: f64 = field.parse().map_err(|_| {
                Error::Parse(format!(
                    "line {}, field {}: {field:?} is not a number",
                    lineno + 1,
                    col + 1
                ))
            })?;
            if !value.is_finite() {
                return Err(Error::Parse(format!(
                    "line {}, field {}: {field:?} is not finite",
                    lineno + 1,
                    col + 1
                )));
            }
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse(format!(
                    "line {} has {} fields, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix file has no rows".into()));
    }
    Ok(Mat::from_rows(&rows))
}

/// Write a matrix as headerless CSV with full-precision values.
pub fn write_matrix_csv(path: &Path, m: &Mat) -> Result<()> {
    std::fs::write(path, matrix_to_csv(m))?;
    Ok(())
}

/// CSV text for a matrix; one line per row, trailing newline.
pub fn matrix_to_csv(m: &Mat) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", m[(i, j)]);
        }
        out.push('\n');
    }
    out
}

/// Read a spectrum stored as a JSON array of complex-number strings
/// (e.g. `["1+2i", "-1", "3i"]`).
pub fn read_spectrum_json(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path)?;
    parse_spectrum_json(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// JSON spectrum parsing on an in-memory string; see [`read_spectrum_json`].
pub fn parse_spectrum_json(text: &str) -> Result<Vec<Complex64>> {
    let entries: Vec<String> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("not a JSON string array: {e}")))?;
    entries
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_complex(s).map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("entry {i}: {m}")),
                other => other,
            })
        })
        .collect()
}

/// Write a spectrum as a JSON array of complex-number strings.
pub fn write_spectrum_json(path: &Path, values: &[Complex64]) -> Result<()> {
    let entries: Vec<String> = values.iter().map(|z| format_complex(*z)).collect();
    let text = serde_json::to_string_pretty(&entries).expect("string arrays always serialize");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let m = Mat::from_row_slice(2, 3, &[1.0, -0.5, 1.0 / 3.0, 2e-17, 1e300, -7.25]);
        let text = matrix_to_csv(&m);
        let back = parse_matrix_csv(&text).unwrap();
        assert_eq!(&back, &m);
    }

    #[test]
    fn csv_accepts_whitespace_and_blank_lines() {
        let m = parse_matrix_csv(" 1 , 2 \n\n 3 , 4 \n").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m[(1, 0)], 3.0);
    }

    #[test]
    fn csv_rejects_ragged_rows() {
        let err = parse_matrix_csv("1,2\n3\n").unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "{err}");
    }

    #[test]
    fn csv_rejects_bad_and_nonfinite_fields() {
        assert!(matches!(parse_matrix_csv("1,x\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix_csv("1,inf\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix_csv(""), Err(Error::Parse(_))));
    }

    #[test]
    fn spectrum_json_round_trip() {
        let values = vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, -3.25),
        ];
        let dir = std::env::temp_dir().join("hamspec-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("spectrum.json");
        write_spectrum_json(&path, &values).unwrap();
        let back = read_spectrum_json(&path).unwrap();
        assert_eq!(back, values);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn spectrum_json_error_context() {
        let err = parse_spectrum_json("[\"1+2i\", \"oops\"]").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("entry 1"), "{msg}");
        assert!(matches!(parse_spectrum_json("{}"), Err(Error::Parse(_))));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_matrix_csv(Path::new("/nonexistent/hamspec.csv")).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
        assert_eq!(err.exit_code(), 2);
    }
}
