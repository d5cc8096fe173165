//! StreamTable layouts: per-cell rectangles, row bands, and the two
//! aesthetic metrics (excess area and split count).
//!
//! A layout stores the drawn row order, one height per original row, and one
//! rectangle per cell. Row bands are derived from the order and heights, so
//! there is a single source of truth for the y axis. Constructing a [`Layout`]
//! checks every structural invariant:
//!
//! - exact cell areas: `(right - left) * height == weight` (property P2),
//! - cells of a row appear in column order without overlapping,
//! - the first column's left edges and the last column's right edges are
//!   aligned (property P1).

use crate::rational::{self, Rational};
use crate::table::Table;
use num_traits::{Signed, Zero};
use std::cmp::{max, min};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("height of row {row} is not positive")]
    NonPositiveHeight { row: usize },
    #[error("expected {expected} heights, got {got}")]
    HeightCountMismatch { expected: usize, got: usize },
    #[error("row order is not a permutation of 0..{rows}")]
    InvalidOrder { rows: usize },
    #[error("expected {expected} cells, got {got}")]
    CellCountMismatch { expected: usize, got: usize },
    #[error("cell ({row},{col}) has empty x-interval")]
    EmptyInterval { row: usize, col: usize },
    #[error("cell ({row},{col}) area does not equal its weight")]
    AreaMismatch { row: usize, col: usize },
    #[error("cell ({row},{col}) height differs from its row height")]
    HeightMismatch { row: usize, col: usize },
    #[error("cells ({row},{col}) and ({row},{next}) overlap or are out of order")]
    RowOverlap { row: usize, col: usize, next: usize },
    #[error("column {col} edge of row {row} breaks the alignment (property P1)")]
    Misaligned { row: usize, col: usize },
}

/// One positive height per original row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowHeights(Vec<Rational>);

impl RowHeights {
    pub fn new(heights: Vec<Rational>) -> Result<Self, LayoutError> {
        match heights.iter().position(|h| !h.is_positive()) {
            Some(row) => Err(LayoutError::NonPositiveHeight { row }),
            None => Ok(RowHeights(heights)),
        }
    }

    pub fn uniform(rows: usize, height: Rational) -> Result<Self, LayoutError> {
        Self::new(vec![height; rows])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, row: usize) -> &Rational {
        &self.0[row]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    /// Copy with one row's height replaced; `new_height` must be positive.
    pub fn with_height(&self, row: usize, new_height: Rational) -> Result<Self, LayoutError> {
        let mut heights = self.0.clone();
        heights[row] = new_height;
        Self::new(heights)
    }
}

/// Axis-aligned rectangle for one cell: x-interval plus the row height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRect {
    pub row: usize,
    pub col: usize,
    pub left: Rational,
    pub right: Rational,
    pub height: Rational,
}

impl CellRect {
    pub fn width(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn area(&self) -> Rational {
        self.width() * &self.height
    }

    /// Closed-interval intersection test; touching at one x counts.
    pub fn x_touches(&self, other: &CellRect) -> bool {
        max(&self.left, &other.left) <= min(&self.right, &other.right)
    }
}

/// A maximal horizontal gap between consecutive cells within a row band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyRect {
    pub row: usize,
    /// The gap sits between columns `gap_after_col` and `gap_after_col + 1`.
    pub gap_after_col: usize,
    pub left: Rational,
    pub right: Rational,
    pub height: Rational,
}

impl EmptyRect {
    pub fn width(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn area(&self) -> Rational {
        self.width() * &self.height
    }
}

/// A validated StreamTable layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    table: Table,
    heights: RowHeights,
    /// Drawn order, top to bottom: `order[k]` is the original row index of
    /// band `k`.
    order: Vec<usize>,
    rects: Vec<CellRect>, // row-major by original row index
}

impl Layout {
    /// Validates all invariants and builds the layout.
    pub fn new(
        table: Table,
        heights: RowHeights,
        order: Vec<usize>,
        rects: Vec<CellRect>,
    ) -> Result<Self, LayoutError> {
        let (r, c) = (table.rows(), table.cols());
        if heights.len() != r {
            return Err(LayoutError::HeightCountMismatch { expected: r, got: heights.len() });
        }
        let mut seen = vec![false; r];
        for &row in &order {
            if row >= r || seen[row] {
                return Err(LayoutError::InvalidOrder { rows: r });
            }
            seen[row] = true;
        }
        if order.len() != r {
            return Err(LayoutError::InvalidOrder { rows: r });
        }
        if rects.len() != r * c {
            return Err(LayoutError::CellCountMismatch { expected: r * c, got: rects.len() });
        }
        let layout = Layout { table, heights, order, rects };
        layout.check_cells()?;
        Ok(layout)
    }

    fn check_cells(&self) -> Result<(), LayoutError> {
        let (r, c) = (self.table.rows(), self.table.cols());
        for i in 0..r {
            for j in 0..c {
                let rect = self.rect(i, j);
                if rect.row != i || rect.col != j {
                    return Err(LayoutError::CellCountMismatch { expected: r * c, got: 0 });
                }
                if rect.right <= rect.left {
                    return Err(LayoutError::EmptyInterval { row: i, col: j });
                }
                if rect.height != *self.heights.get(i) {
                    return Err(LayoutError::HeightMismatch { row: i, col: j });
                }
                if rect.area() != *self.table.weight(i, j) {
                    return Err(LayoutError::AreaMismatch { row: i, col: j });
                }
                if j + 1 < c && self.rect(i, j + 1).left < rect.right {
                    return Err(LayoutError::RowOverlap { row: i, col: j, next: j + 1 });
                }
            }
            // Property P1 on both outer columns.
            if self.rect(i, 0).left != self.rect(0, 0).left {
                return Err(LayoutError::Misaligned { row: i, col: 0 });
            }
            if self.rect(i, c - 1).right != self.rect(0, c - 1).right {
                return Err(LayoutError::Misaligned { row: i, col: c - 1 });
            }
        }
        Ok(())
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn heights(&self) -> &RowHeights {
        &self.heights
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn rect(&self, row: usize, col: usize) -> &CellRect {
        &self.rects[row * self.table.cols() + col]
    }

    pub fn rects(&self) -> &[CellRect] {
        &self.rects
    }

    /// Shared left edge of the first column (property P1).
    pub fn left_edge(&self) -> &Rational {
        &self.rect(0, 0).left
    }

    /// Shared right edge of the last column (property P1).
    pub fn right_edge(&self) -> &Rational {
        &self.rect(0, self.table.cols() - 1).right
    }

    pub fn width(&self) -> Rational {
        self.right_edge() - self.left_edge()
    }

    pub fn total_height(&self) -> Rational {
        self.heights.total()
    }

    /// y of each band boundary, top to bottom, starting at 0: length r + 1.
    pub fn band_tops(&self) -> Vec<Rational> {
        let mut tops = Vec::with_capacity(self.order.len() + 1);
        let mut y = Rational::zero();
        tops.push(y.clone());
        for &row in &self.order {
            y += self.heights.get(row);
            tops.push(y.clone());
        }
        tops
    }

    /// Bounding-box area minus the sum of the weights. Computed both from the
    /// bounding box and by summing per-row gaps; the two must agree for any
    /// P1-aligned layout and the implementation asserts it.
    pub fn excess_area(&self) -> Rational {
        let bbox = self.width() * self.total_height();
        let by_bbox = bbox - self.table.total_weight();
        let by_gaps: Rational = (0..self.table.rows())
            .map(|i| {
                let gap_width: Rational = (0..self.table.cols() - 1)
                    .map(|j| &self.rect(i, j + 1).left - &self.rect(i, j).right)
                    .sum();
                gap_width * self.heights.get(i)
            })
            .sum();
        assert_eq!(by_bbox, by_gaps, "excess area routes disagree");
        by_bbox
    }

    /// Splits contributed by each consecutive drawn band pair: entry `k`
    /// counts the columns whose x-intervals in bands `k` and `k+1` are
    /// disjoint. Touching at a single x counts as adjacent.
    pub fn split_count_by_pair(&self) -> Vec<usize> {
        let c = self.table.cols();
        self.order
            .windows(2)
            .map(|pair| {
                (0..c)
                    .filter(|&j| !self.rect(pair[0], j).x_touches(self.rect(pair[1], j)))
                    .count()
            })
            .collect()
    }

    /// Total number of splits in the layout.
    pub fn split_count(&self) -> usize {
        self.split_count_by_pair().iter().sum()
    }

    /// Every maximal horizontal gap between consecutive cells of a row band,
    /// sorted by descending area, ties by (row, column). Under property P1
    /// there are no gaps against the outer boundary, so only interior gaps
    /// exist.
    pub fn empty_rectangles(&self) -> Vec<EmptyRect> {
        let (r, c) = (self.table.rows(), self.table.cols());
        let mut gaps = Vec::new();
        for i in 0..r {
            for j in 0..c - 1 {
                let left = self.rect(i, j).right.clone();
                let right = self.rect(i, j + 1).left.clone();
                if right > left {
                    gaps.push(EmptyRect {
                        row: i,
                        gap_after_col: j,
                        left,
                        right,
                        height: self.heights.get(i).clone(),
                    });
                }
            }
        }
        gaps.sort_by(|a, b| {
            b.area()
                .cmp(&a.area())
                .then(a.row.cmp(&b.row))
                .then(a.gap_after_col.cmp(&b.gap_after_col))
        });
        gaps
    }

    /// Scales all heights by `delta` and all x-coordinates by `1/delta`.
    /// Leaves excess area and split count unchanged.
    pub fn scaled(&self, delta: &Rational) -> Result<Layout, LayoutError> {
        assert!(delta.is_positive(), "scale factor must be positive");
        let inv = delta.recip();
        let heights =
            RowHeights::new(self.heights.as_slice().iter().map(|h| h * delta).collect())?;
        let rects = self
            .rects
            .iter()
            .map(|rect| CellRect {
                row: rect.row,
                col: rect.col,
                left: &rect.left * &inv,
                right: &rect.right * &inv,
                height: &rect.height * delta,
            })
            .collect();
        Layout::new(self.table.clone(), heights, self.order.clone(), rects)
    }
}

/// Convenience for tests and callers that assemble layouts by hand: builds
/// the rect grid from per-cell x-intervals given in row-major order.
pub fn layout_from_intervals(
    table: Table,
    heights: RowHeights,
    order: Vec<usize>,
    intervals: Vec<(Rational, Rational)>,
) -> Result<Layout, LayoutError> {
    let c = table.cols();
    let rects = intervals
        .into_iter()
        .enumerate()
        .map(|(idx, (left, right))| CellRect {
            row: idx / c,
            col: idx % c,
            left,
            right,
            height: heights.get(idx / c).clone(),
        })
        .collect();
    Layout::new(table, heights, order, rects)
}

/// Formats a metric value for error messages and logs.
pub fn metric_string(r: &Rational) -> String {
    rational::to_string(r)
}
