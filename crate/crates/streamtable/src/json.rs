//! Layout JSON schema.
//!
//! ```json
//! {
//!   "rows": 2,
//!   "cols": 2,
//!   "heights": ["1", "1/2"],
//!   "order": [0, 1],
//!   "cells": [
//!     { "row": 0, "col": 0, "left": "0", "right": "3" },
//!     ...
//!   ],
//!   "metrics": { "excess": "0", "splits": 0 }
//! }
//! ```
//!
//! Indices are 0-based; rationals are exact `p/q` strings (`p` when the
//! denominator is 1). `heights[i]` belongs to original row `i`; `order` lists
//! original row indices top band first; cells are row-major by original
//! index. Weights are implied by the geometry (`(right - left) * height`), so
//! a layout document round-trips without a separate table file; labels are
//! not part of the schema and regenerate as `r1..`/`c1..` on load.

use crate::layout::{CellRect, Layout, LayoutError, RowHeights};
use crate::rational::{self, Rational, RationalParseError};
use crate::table::{Table, TableError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid layout JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid rational in layout JSON: {0}")]
    Rational(#[from] RationalParseError),
    #[error("layout JSON is inconsistent: {0}")]
    Table(#[from] TableError),
    #[error("layout JSON is inconsistent: {0}")]
    Layout(#[from] LayoutError),
    #[error("stored {metric} {stored} does not match recomputed value {actual}")]
    MetricMismatch { metric: &'static str, stored: String, actual: String },
    #[error("cell list does not cover every (row, col) exactly once")]
    BadCellList,
}

#[derive(Debug, Serialize, Deserialize)]
struct LayoutDoc {
    rows: usize,
    cols: usize,
    heights: Vec<String>,
    order: Vec<usize>,
    cells: Vec<CellDoc>,
    metrics: MetricsDoc,
}

#[derive(Debug, Serialize, Deserialize)]
struct CellDoc {
    row: usize,
    col: usize,
    left: String,
    right: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct MetricsDoc {
    excess: String,
    splits: usize,
}

/// Serializes a layout to the documented JSON schema (pretty-printed, stable
/// field order, trailing newline).
pub fn layout_to_json(layout: &Layout) -> String {
    let doc = LayoutDoc {
        rows: layout.table().rows(),
        cols: layout.table().cols(),
        heights: layout.heights().as_slice().iter().map(rational::to_string).collect(),
        order: layout.order().to_vec(),
        cells: layout
            .rects()
            .iter()
            .map(|rect| CellDoc {
                row: rect.row,
                col: rect.col,
                left: rational::to_string(&rect.left),
                right: rational::to_string(&rect.right),
            })
            .collect(),
        metrics: MetricsDoc {
            excess: rational::to_string(&layout.excess_area()),
            splits: layout.split_count(),
        },
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("layout serialization");
    text.push('\n');
    text
}

/// Parses and fully revalidates a layout document, including the stored
/// metrics.
pub fn layout_from_json(text: &str) -> Result<Layout, JsonError> {
    let doc: LayoutDoc = serde_json::from_str(text)?;
    let heights: Vec<Rational> =
        doc.heights.iter().map(|s| rational::parse(s)).collect::<Result<_, _>>()?;
    let cell_count = doc.rows.checked_mul(doc.cols).ok_or(JsonError::BadCellList)?;
    if heights.len() != doc.rows || doc.cells.len() != cell_count {
        return Err(JsonError::BadCellList);
    }
    let mut rects: Vec<Option<CellRect>> = vec![None; cell_count];
    let mut grid = vec![vec![Rational::default(); doc.cols]; doc.rows];
    for cell in &doc.cells {
        if cell.row >= doc.rows || cell.col >= doc.cols {
            return Err(JsonError::BadCellList);
        }
        let slot = &mut rects[cell.row * doc.cols + cell.col];
        if slot.is_some() {
            return Err(JsonError::BadCellList);
        }
        let left = rational::parse(&cell.left)?;
        let right = rational::parse(&cell.right)?;
        let height = heights[cell.row].clone();
        grid[cell.row][cell.col] = (&right - &left) * &height;
        *slot = Some(CellRect { row: cell.row, col: cell.col, left, right, height });
    }
    let rects: Vec<CellRect> =
        rects.into_iter().collect::<Option<_>>().ok_or(JsonError::BadCellList)?;
    let table = Table::from_grid(grid)?;
    let heights = RowHeights::new(heights)?;
    let layout = Layout::new(table, heights, doc.order, rects)?;

    let excess = layout.excess_area();
    let stored_excess = rational::parse(&doc.metrics.excess)?;
    if stored_excess != excess {
        return Err(JsonError::MetricMismatch {
            metric: "excess",
            stored: doc.metrics.excess,
            actual: rational::to_string(&excess),
        });
    }
    let splits = layout.split_count();
    if doc.metrics.splits != splits {
        return Err(JsonError::MetricMismatch {
            metric: "splits",
            stored: doc.metrics.splits.to_string(),
            actual: splits.to_string(),
        });
    }
    Ok(layout)
}
