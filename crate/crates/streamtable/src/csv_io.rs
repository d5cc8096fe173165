//! Table CSV format.
//!
//! First record: a blank cell (or `row`), then the column labels. Every
//! further record: the row label followed by the c weights. Weights accept
//! integers, `p/q` rationals, and decimals; decimals convert exactly
//! (`0.25` -> `1/4`). Output always uses the canonical `p/q` form, so one
//! parse/write pass normalizes a file and further round trips are
//! byte-stable.

use crate::rational::{self, Rational};
use crate::table::{validate_table, Table, TableError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("CSV parse error at line {line}, column {col}: {reason}")]
    Parse { line: usize, col: usize, reason: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("CSV read error: {0}")]
    Read(#[from] csv::Error),
}

/// Parses a table from CSV text with exact rational weights.
pub fn parse_table_csv(text: &str) -> Result<Table, CsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let header = records
        .next()
        .ok_or(CsvError::Parse { line: 1, col: 1, reason: "empty input".into() })??;
    let mut header_iter = header.iter();
    let corner = header_iter.next().unwrap_or_default();
    if !corner.is_empty() && corner != "row" {
        return Err(CsvError::Parse {
            line: 1,
            col: 1,
            reason: format!("first header cell must be empty or `row`, got `{corner}`"),
        });
    }
    let col_labels: Vec<String> = header_iter.map(str::to_string).collect();
    if col_labels.is_empty() {
        return Err(CsvError::Parse { line: 1, col: 2, reason: "no column labels".into() });
    }

    let mut row_labels = Vec::new();
    let mut grid: Vec<Vec<Rational>> = Vec::new();
    for (idx, record) in records.enumerate() {
        let record = record?;
        let line = idx + 2;
        if record.len() == 1 && record[0].is_empty() {
            continue; // trailing blank line
        }
        let mut fields = record.iter();
        let label = fields
            .next()
            .ok_or(CsvError::Parse { line, col: 1, reason: "missing row label".into() })?;
        row_labels.push(label.to_string());
        let mut row = Vec::with_capacity(col_labels.len());
        for (j, field) in fields.enumerate() {
            let value = rational::parse(field).map_err(|e| CsvError::Parse {
                line,
                col: j + 2,
                reason: e.to_string(),
            })?;
            row.push(value);
        }
        if row.len() != col_labels.len() {
            return Err(CsvError::Parse {
                line,
                col: record.len() + 1,
                reason: format!("expected {} weights, got {}", col_labels.len(), row.len()),
            });
        }
        grid.push(row);
    }
    Ok(validate_table(grid, row_labels, col_labels)?)
}

/// Writes a table in the canonical CSV form.
pub fn write_table_csv(table: &Table) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(table.col_labels().iter().cloned());
    writer.write_record(&header).expect("csv write");
    for i in 0..table.rows() {
        let mut record = vec![table.row_labels()[i].clone()];
        record.extend((0..table.cols()).map(|j| rational::to_string(table.weight(i, j))));
        writer.write_record(&record).expect("csv write");
    }
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
}
