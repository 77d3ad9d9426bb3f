//! Matrix and vector file formats: JSON arrays-of-arrays, or CSV (row-major,
//! `.` decimal separator, no header). Dimension mismatches are parse errors
//! carrying the file location.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::mat::Mat;

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Read a dense matrix from `.json` (nested arrays) or `.csv`.
pub fn read_matrix(path: &Path) -> Result<Mat> {
    let text = read_file(path)?;
    let is_json = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or(false)
        || text.trim_start().starts_with('[');
    let rows: Vec<Vec<f64>> = if is_json {
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })?
    } else {
        parse_csv(&text, path)?
    };
    if rows.is_empty() {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "empty matrix".into(),
        });
    }
    let width = rows[0].len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                message: format!("row has {} entries, expected {width}", r.len()),
            });
        }
    }
    Mat::from_rows(&rows)
}

fn parse_csv(text: &str, path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                message: format!("cannot parse '{}' as a number", field.trim()),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Read a vector: a one-row or one-column matrix in either format.
pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let m = read_matrix(path)?;
    if m.n_rows() == 1 {
        Ok(m.row(0).to_vec())
    } else if m.n_cols() == 1 {
        Ok(m.col(0))
    } else {
        Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: format!("expected a vector, got {}x{}", m.n_rows(), m.n_cols()),
        })
    }
}

pub fn write_matrix_csv(path: &Path, m: &Mat) -> Result<()> {
    let mut out = String::new();
    for row in m.rows_iter() {
        let fields: Vec<String> = row.iter().map(|v| format!("{:.17e}", v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = Mat::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
        let csv_path = dir.path().join("m.csv");
        write_matrix_csv(&csv_path, &m).unwrap();
        let back = read_matrix(&csv_path).unwrap();
        assert_eq!(back.max_abs_diff(&m), 0.0);

        let json_path = dir.path().join("m.json");
        write_text(&json_path, "[[0.5, 0.5], [0.25, 0.75]]").unwrap();
        let back = read_matrix(&json_path).unwrap();
        assert_eq!(back.max_abs_diff(&m), 0.0);
    }

    #[test]
    fn ragged_rows_are_parse_errors_with_location() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        write_text(&p, "1.0,2.0\n3.0\n").unwrap();
        match read_matrix(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn garbage_fields_are_parse_errors() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad2.csv");
        write_text(&p, "1.0,abc\n").unwrap();
        assert!(matches!(read_matrix(&p), Err(Error::Parse { line: 1, .. })));
    }
}
