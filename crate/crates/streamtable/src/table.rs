//! Weighted-table data model.
//!
//! A table is an r x c grid of strictly positive rational weights with row
//! and column labels. Every layout operation in the crate consumes a
//! validated [`Table`], so the positivity and shape invariants are enforced
//! once, here.

use crate::rational::{self, Rational};
use num_traits::Signed;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("cell ({row},{col}) has non-positive weight {value}")]
    NonPositiveWeight { row: usize, col: usize, value: String },
    #[error("table needs at least 2 columns, got {cols}")]
    TooFewColumns { cols: usize },
    #[error("table needs at least 1 row")]
    NoRows,
    #[error("ragged row {row}: expected {expected} cells, got {got}")]
    RaggedRow { row: usize, expected: usize, got: usize },
    #[error("{which} label count {got} does not match table dimension {expected}")]
    LabelCountMismatch { which: &'static str, got: usize, expected: usize },
}

/// A strictly positive cell weight (dimensionless area units).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weight(Rational);

impl Weight {
    pub fn new(value: Rational) -> Option<Self> {
        value.is_positive().then_some(Weight(value))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// An r x c grid of positive weights with labels; c >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    rows: usize,
    cols: usize,
    weights: Vec<Weight>, // row-major
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

/// Checks all table invariants and builds the [`Table`]. This is the single
/// entry point: a `Table` value always satisfies them.
pub fn validate_table(
    grid: Vec<Vec<Rational>>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
) -> Result<Table, TableError> {
    let rows = grid.len();
    if rows == 0 {
        return Err(TableError::NoRows);
    }
    let cols = grid[0].len();
    if cols < 2 {
        return Err(TableError::TooFewColumns { cols });
    }
    if row_labels.len() != rows {
        return Err(TableError::LabelCountMismatch {
            which: "row",
            got: row_labels.len(),
            expected: rows,
        });
    }
    if col_labels.len() != cols {
        return Err(TableError::LabelCountMismatch {
            which: "column",
            got: col_labels.len(),
            expected: cols,
        });
    }
    let mut weights = Vec::with_capacity(rows * cols);
    for (i, row) in grid.into_iter().enumerate() {
        if row.len() != cols {
            return Err(TableError::RaggedRow { row: i, expected: cols, got: row.len() });
        }
        for (j, value) in row.into_iter().enumerate() {
            match Weight::new(value.clone()) {
                Some(w) => weights.push(w),
                None => {
                    return Err(TableError::NonPositiveWeight {
                        row: i,
                        col: j,
                        value: rational::to_string(&value),
                    })
                }
            }
        }
    }
    Ok(Table { rows, cols, weights, row_labels, col_labels })
}

impl Table {
    /// Builds a table with generated labels (`r1..`, `c1..`).
    pub fn from_grid(grid: Vec<Vec<Rational>>) -> Result<Table, TableError> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        validate_table(
            grid,
            (1..=rows).map(|i| format!("r{i}")).collect(),
            (1..=cols).map(|j| format!("c{j}")).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn weight(&self, row: usize, col: usize) -> &Rational {
        self.weights[row * self.cols + col].value()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row_sum(&self, row: usize) -> Rational {
        (0..self.cols).map(|j| self.weight(row, j)).sum()
    }

    pub fn total_weight(&self) -> Rational {
        (0..self.rows).map(|i| self.row_sum(i)).sum()
    }

    /// All row sums equal? Gatekeeper for zero-excess packed layouts.
    pub fn has_equal_row_sums(&self) -> bool {
        let first = self.row_sum(0);
        (1..self.rows).all(|i| self.row_sum(i) == first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_i64, ratio};

    fn grid(vals: &[&[i64]]) -> Vec<Vec<Rational>> {
        vals.iter().map(|r| r.iter().map(|&v| from_i64(v)).collect()).collect()
    }

    #[test]
    fn accepts_all_ones() {
        let t = Table::from_grid(grid(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(t.rows(), 2);
        assert_eq!(t.cols(), 2);
        assert_eq!(t.total_weight(), from_i64(4));
    }

    #[test]
    fn rejects_zero_weight() {
        let err = Table::from_grid(grid(&[&[1, 0], &[1, 1]])).unwrap_err();
        assert_eq!(
            err,
            TableError::NonPositiveWeight { row: 0, col: 1, value: "0".into() }
        );
    }

    #[test]
    fn rejects_negative_weight() {
        let err = Table::from_grid(vec![vec![from_i64(1), ratio(-1, 2)]]).unwrap_err();
        assert!(matches!(err, TableError::NonPositiveWeight { row: 0, col: 1, .. }));
    }

    #[test]
    fn rejects_single_column() {
        let err = Table::from_grid(grid(&[&[1], &[1], &[1]])).unwrap_err();
        assert_eq!(err, TableError::TooFewColumns { cols: 1 });
    }

    #[test]
    fn rejects_label_mismatch() {
        let err = validate_table(
            grid(&[&[1, 1]]),
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into()],
        )
        .unwrap_err();
        assert!(matches!(err, TableError::LabelCountMismatch { which: "row", .. }));
    }

    #[test]
    fn rejects_ragged_grid() {
        let err = Table::from_grid(grid(&[&[1, 1], &[1]])).unwrap_err();
        assert!(matches!(err, TableError::RaggedRow { row: 1, .. }));
    }

    #[test]
    fn row_sums() {
        let t = Table::from_grid(grid(&[&[2, 1], &[1, 2]])).unwrap();
        assert!(t.has_equal_row_sums());
        let t2 = Table::from_grid(grid(&[&[2, 1], &[2, 2]])).unwrap();
        assert!(!t2.has_equal_row_sums());
    }
}
