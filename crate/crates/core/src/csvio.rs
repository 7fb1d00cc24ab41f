//! Matrix CSV reading and writing.
//!
//! Layout is never guessed: the caller states whether the first row carries
//! column labels and whether the first column carries row labels. Decimal
//! point `.`, separator `,`. With both label kinds present the top-left
//! corner cell is ignored on read and written empty.

use std::io::{Read, Write};

use thiserror::Error;

use crate::matrix::{DenseMatrix, MatrixError};
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row} has {got} fields, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("row {row}, column {col}: cannot parse '{value}' as a number")]
    Parse {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("value at row {row}, column {col} is not representable in the target precision")]
    Unrepresentable { row: usize, col: usize },
    #[error("no data rows found")]
    Empty,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Reads a matrix. `has_header` consumes the first row as column labels;
/// `has_row_labels` consumes the first field of each data row as its label.
pub fn read_matrix<F: Real, R: Read>(
    reader: R,
    has_header: bool,
    has_row_labels: bool,
) -> Result<DenseMatrix<F>, CsvError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);

    let mut col_labels: Option<Vec<String>> = None;
    let mut row_labels: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<F>> = Vec::new();
    let mut expected_fields: Option<usize> = None;

    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        if idx == 0 && has_header {
            let skip = usize::from(has_row_labels);
            col_labels = Some(record.iter().skip(skip).map(str::to_owned).collect());
            continue;
        }

        match expected_fields {
            None => expected_fields = Some(record.len()),
            Some(expected) if record.len() != expected => {
                return Err(CsvError::Ragged {
                    row: idx + 1,
                    expected,
                    got: record.len(),
                });
            }
            _ => {}
        }

        let mut fields = record.iter();
        if has_row_labels {
            row_labels.push(fields.next().unwrap_or("").to_owned());
        }
        let data_row = rows.len();
        let mut values = Vec::with_capacity(record.len());
        for (col, field) in fields.enumerate() {
            let parsed: f64 = field.trim().parse().map_err(|_| CsvError::Parse {
                row: data_row + 1,
                col: col + 1,
                value: field.to_owned(),
            })?;
            let value = F::from_f64(parsed).ok_or(CsvError::Unrepresentable {
                row: data_row + 1,
                col: col + 1,
            })?;
            values.push(value);
        }
        rows.push(values);
    }

    if rows.is_empty() {
        return Err(CsvError::Empty);
    }
    let matrix = DenseMatrix::from_rows(rows)?;
    let row_labels = has_row_labels.then_some(row_labels);
    Ok(matrix.with_labels(row_labels, col_labels)?)
}

/// Writes a matrix; labels are emitted when the matrix carries them.
pub fn write_matrix<F: Real, W: Write>(writer: W, m: &DenseMatrix<F>) -> Result<(), CsvError> {
    let mut wtr = csv::WriterBuilder::new().from_writer(writer);

    if let Some(cols) = m.col_labels() {
        let mut header: Vec<&str> = Vec::with_capacity(cols.len() + 1);
        if m.row_labels().is_some() {
            header.push("");
        }
        header.extend(cols.iter().map(String::as_str));
        wtr.write_record(&header)?;
    }

    for i in 0..m.n_rows() {
        let mut record: Vec<String> = Vec::with_capacity(m.n_cols() + 1);
        if let Some(rows) = m.row_labels() {
            record.push(rows[i].clone());
        }
        record.extend(m.row(i).iter().map(|v| format!("{v}")));
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(m: &DenseMatrix<f64>, header: bool, row_labels: bool) -> DenseMatrix<f64> {
        let mut buf = Vec::new();
        write_matrix(&mut buf, m).unwrap();
        read_matrix(buf.as_slice(), header, row_labels).unwrap()
    }

    #[test]
    fn plain_matrix_roundtrip() {
        let m = DenseMatrix::from_rows(vec![vec![1.5f64, -2.0, 3.25], vec![0.0, 42.0, -0.125]])
            .unwrap();
        let back = roundtrip(&m, false, false);
        assert_eq!(back.values(), m.values());
        assert!(back.row_labels().is_none() && back.col_labels().is_none());
    }

    #[test]
    fn labelled_roundtrip() {
        let m = DenseMatrix::from_rows(vec![vec![1.0f64, 2.0], vec![3.0, 4.0]])
            .unwrap()
            .with_labels(
                Some(vec!["s1".into(), "s2".into()]),
                Some(vec!["topic a".into(), "topic,b".into()]),
            )
            .unwrap();
        let back = roundtrip(&m, true, true);
        assert_eq!(back.values(), m.values());
        assert_eq!(back.row_labels().unwrap(), ["s1", "s2"]);
        assert_eq!(back.col_labels().unwrap(), ["topic a", "topic,b"]);
    }

    #[test]
    fn header_only_and_labels_only() {
        let m = DenseMatrix::from_rows(vec![vec![1.0f64, 2.0]])
            .unwrap()
            .with_labels(None, Some(vec!["a".into(), "b".into()]))
            .unwrap();
        let back = roundtrip(&m, true, false);
        assert_eq!(back.col_labels().unwrap(), ["a", "b"]);

        let m2 = DenseMatrix::from_rows(vec![vec![1.0f64, 2.0]])
            .unwrap()
            .with_labels(Some(vec!["r".into()]), None)
            .unwrap();
        let back2 = roundtrip(&m2, false, true);
        assert_eq!(back2.row_labels().unwrap(), ["r"]);
    }

    #[test]
    fn parse_error_reports_position() {
        let err = read_matrix::<f64, _>("1,2\n3,oops\n".as_bytes(), false, false).unwrap_err();
        match err {
            CsvError::Parse { row, col, value } => {
                assert_eq!((row, col), (2, 2));
                assert_eq!(value, "oops");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = read_matrix::<f64, _>("1,2\n3\n".as_bytes(), false, false).unwrap_err();
        assert!(matches!(err, CsvError::Ragged { .. }));
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(
            read_matrix::<f64, _>("".as_bytes(), false, false),
            Err(CsvError::Empty)
        ));
        assert!(matches!(
            read_matrix::<f64, _>("a,b\n".as_bytes(), true, false),
            Err(CsvError::Empty)
        ));
    }

    #[test]
    fn write_is_deterministic() {
        let m = DenseMatrix::from_rows(vec![vec![0.1f64, 0.2 + 0.1, 5.0]]).unwrap();
        let mut a = Vec::new();
        write_matrix(&mut a, &m).unwrap();
        let mut b = Vec::new();
        write_matrix(&mut b, &m).unwrap();
        assert_eq!(a, b);
    }
}
