//! Plain-text matrix format.
//!
//! ```text
//! rows cols
//! a00 a01 ...
//! ...
//! ```
//!
//! Entries are whitespace separated decimal literals. The writer emits 17
//! significant digits so every `f64` round-trips exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

pub fn parse_matrix<T: Real>(text: &str) -> Result<Matrix<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: hline,
            msg: format!("bad header: {e}"),
        })?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse {
            line: hline,
            msg: "header must be `rows cols`".into(),
        });
    };
    if rows == 0 || cols == 0 {
        return Err(Error::Parse {
            line: hline,
            msg: "dimensions must be positive".into(),
        });
    }

    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (lno, line) = lines.next().ok_or(Error::Parse {
            line: hline + r + 1,
            msg: format!("expected {rows} rows, found {r}"),
        })?;
        let before = data.len();
        for tok in line.split_whitespace() {
            let x: f64 = tok.parse().map_err(|_| Error::Parse {
                line: lno,
                msg: format!("invalid number `{tok}`"),
            })?;
            data.push(T::lit(x));
        }
        if data.len() - before != cols {
            return Err(Error::Parse {
                line: lno,
                msg: format!("expected {cols} entries, found {}", data.len() - before),
            });
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::Parse {
            line: lno,
            msg: "trailing data after the last row".into(),
        });
    }
    Matrix::from_vec(rows, cols, data)
}

pub fn format_matrix<T: Real>(m: &Matrix<T>) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{:.16e}", x.as_f64())).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix<T: Real>(path: impl AsRef<Path>) -> Result<Matrix<T>> {
    parse_matrix(&fs::read_to_string(path)?)
}

pub fn write_matrix<T: Real>(path: impl AsRef<Path>, m: &Matrix<T>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(format_matrix(m).as_bytes())?;
    Ok(())
}

/// Read a vector stored as an `n x 1` or `1 x n` matrix.
pub fn read_vector<T: Real>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let m: Matrix<T> = read_matrix(path)?;
    if m.rows() != 1 && m.cols() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a vector, found a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.into_vec())
}

/// Column-vector form of `v` in the matrix text format.
pub fn format_vector<T: Real>(v: &[T]) -> String {
    format_matrix(&Matrix::from_vec(v.len(), 1, v.to_vec()).expect("nonempty vector"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_simple_matrix() {
        let m: Matrix<f64> = parse_matrix("2 3\n1 2 3\n-4 5.5 6e-3\n").unwrap();
        assert_eq!(m.as_slice(), &[1.0, 2.0, 3.0, -4.0, 5.5, 6e-3]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_matrix::<f64>("2 2\n1 2\n3 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_matrix::<f64>("2 2\n1 2 3\n3 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(parse_matrix::<f64>("2 2\n1 2\n").is_err());
        assert!(parse_matrix::<f64>("1 1\n1\n2\n").is_err());
        assert!(parse_matrix::<f64>("").is_err());
    }

    #[test]
    fn writer_uses_seventeen_significant_digits() {
        let m = Matrix::from_vec(1, 1, vec![0.1f64]).unwrap();
        assert_eq!(format_matrix(&m), "1 1\n1.0000000000000001e-1\n");
    }

    proptest! {
        #[test]
        fn text_format_round_trips_bitwise(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in proptest::collection::vec(-1e300f64..1e300, 25)
        ) {
            let m = Matrix::from_vec(rows, cols, seed[..rows * cols].to_vec()).unwrap();
            let back: Matrix<f64> = parse_matrix(&format_matrix(&m)).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
