//! Greedy StreamTable construction for a fixed row order and fixed row
//! heights: O(rc) time, no splits, minimum excess area.
//!
//! The first column is left-aligned. Each middle stream is placed by running
//! two sweeps — top-to-bottom and bottom-to-top — that push every rectangle as
//! far left as possible while keeping contact with the previously placed one,
//! restarting at the previous stream's boundary whenever contact would force
//! an overlap. The pointwise maximum of the two sweeps is the connected
//! placement with minimal x-coordinates. The last column reuses the middle
//! placement and then shifts right until all right edges align.

use crate::layout::{CellRect, Layout, RowHeights};
use crate::rational::Rational;
use crate::table::Table;
use std::cmp::max;

/// x-coordinates of a stream boundary, one per drawn row band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryChain(Vec<Rational>);

impl BoundaryChain {
    pub fn new(xs: Vec<Rational>) -> Self {
        BoundaryChain(xs)
    }

    pub fn xs(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// How a rectangle's left edge was pinned during the greedy sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Starts exactly at the previous stream's right boundary.
    Root,
    /// Chained to the rectangle in the band above.
    ParentAbove,
    /// Chained to the rectangle in the band below.
    ParentBelow,
}

/// Chosen left edges for one stream, with per-band provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamPlacement {
    pub col: usize,
    pub lefts: Vec<Rational>,
    pub provenance: Vec<Provenance>,
}

impl StreamPlacement {
    pub fn rights(&self, widths: &[Rational]) -> BoundaryChain {
        BoundaryChain(
            self.lefts.iter().zip(widths).map(|(left, width)| left + width).collect(),
        )
    }
}

fn cell_width(table: &Table, heights: &RowHeights, row: usize, col: usize) -> Rational {
    table.weight(row, col) / heights.get(row)
}

fn widths_for_col(
    table: &Table,
    heights: &RowHeights,
    order: &[usize],
    col: usize,
) -> Vec<Rational> {
    order.iter().map(|&row| cell_width(table, heights, row, col)).collect()
}

/// One top-to-bottom sweep: each band's rectangle is placed at the minimum
/// x >= prev_right that keeps its x-interval in contact with the band above;
/// when even prev_right lies beyond the parent's right edge the chain breaks
/// and the rectangle roots at prev_right.
pub fn build_top_pass(prev_right: &BoundaryChain, widths: &[Rational]) -> Vec<Rational> {
    sweep(prev_right.xs(), widths, false)
}

/// Mirror of [`build_top_pass`], sweeping bottom-to-top.
pub fn build_bottom_pass(prev_right: &BoundaryChain, widths: &[Rational]) -> Vec<Rational> {
    sweep(prev_right.xs(), widths, true)
}

fn sweep(prev_right: &[Rational], widths: &[Rational], reverse: bool) -> Vec<Rational> {
    let r = prev_right.len();
    assert_eq!(widths.len(), r);
    let mut lefts = vec![Rational::default(); r];
    let index = |k: usize| if reverse { r - 1 - k } else { k };
    let mut parent: Option<(Rational, Rational)> = None; // (left, right) of previous band
    for k in 0..r {
        let i = index(k);
        let base = &prev_right[i];
        let left = match &parent {
            None => base.clone(),
            Some((p_left, p_right)) => {
                let touch_min = p_left - &widths[i];
                let cand = max(base.clone(), touch_min);
                if cand <= *p_right {
                    cand
                } else {
                    base.clone() // contact broken: new root
                }
            }
        };
        let right = &left + &widths[i];
        parent = Some((left.clone(), right));
        lefts[i] = left;
    }
    lefts
}

fn merge_passes(
    prev_right: &BoundaryChain,
    top: Vec<Rational>,
    bottom: Vec<Rational>,
    col: usize,
) -> StreamPlacement {
    let mut lefts = Vec::with_capacity(top.len());
    let mut provenance = Vec::with_capacity(top.len());
    for (k, (t, b)) in top.into_iter().zip(bottom).enumerate() {
        let from_top = t >= b;
        let left = if from_top { t } else { b };
        provenance.push(if left == prev_right.xs()[k] {
            Provenance::Root
        } else if from_top {
            Provenance::ParentAbove
        } else {
            Provenance::ParentBelow
        });
        lefts.push(left);
    }
    StreamPlacement { col, lefts, provenance }
}

/// Step 1: left-align the first column at x = 0.
pub fn layout_first_column(table: &Table, _heights: &RowHeights) -> StreamPlacement {
    StreamPlacement {
        col: 0,
        lefts: vec![Rational::default(); table.rows()],
        provenance: vec![Provenance::Root; table.rows()],
    }
}

/// Step 2: place a middle stream with minimal x-coordinates and no split.
pub fn layout_middle_stream(
    prev_right: &BoundaryChain,
    col: usize,
    table: &Table,
    heights: &RowHeights,
) -> StreamPlacement {
    let order: Vec<usize> = (0..table.rows()).collect();
    let widths = widths_for_col(table, heights, &order, col);
    middle_stream(prev_right, &widths, col)
}

pub(crate) fn middle_stream(
    prev_right: &BoundaryChain,
    widths: &[Rational],
    col: usize,
) -> StreamPlacement {
    let top = build_top_pass(prev_right, widths);
    let bottom = build_bottom_pass(prev_right, widths);
    merge_passes(prev_right, top, bottom, col)
}

/// Step 3: place the last column as in Step 2, then shift its rectangles
/// rightward until all right edges align at the minimum feasible W.
pub fn layout_last_column(
    prev_right: &BoundaryChain,
    table: &Table,
    heights: &RowHeights,
) -> StreamPlacement {
    let order: Vec<usize> = (0..table.rows()).collect();
    let widths = widths_for_col(table, heights, &order, table.cols() - 1);
    last_column(prev_right, &widths, table.cols() - 1)
}

fn last_column(prev_right: &BoundaryChain, widths: &[Rational], col: usize) -> StreamPlacement {
    let mut placement = middle_stream(prev_right, widths, col);
    let right_edge = placement
        .lefts
        .iter()
        .zip(widths)
        .map(|(left, width)| left + width)
        .max()
        .expect("table has at least one row");
    for (left, width) in placement.lefts.iter_mut().zip(widths) {
        *left = &right_edge - width;
    }
    placement
}

/// Runs the greedy algorithm with the table's own row order.
pub fn greedy_layout(table: &Table, heights: &RowHeights) -> Layout {
    let order: Vec<usize> = (0..table.rows()).collect();
    greedy_layout_with_order(table, heights, &order)
}

/// Runs the greedy algorithm drawing the rows in the given order (a
/// permutation of the original indices, top band first). The result has no
/// split and the minimum excess area achievable for this order and these
/// heights.
pub fn greedy_layout_with_order(table: &Table, heights: &RowHeights, order: &[usize]) -> Layout {
    let (r, c) = (table.rows(), table.cols());
    assert_eq!(heights.len(), r, "one height per row");
    assert_eq!(order.len(), r, "order must cover all rows");
    let mut seen = vec![false; r];
    for &row in order {
        assert!(row < r && !seen[row], "order must be a permutation of 0..{r}");
        seen[row] = true;
    }

    let mut placements: Vec<(StreamPlacement, Vec<Rational>)> = Vec::with_capacity(c);
    let widths0 = widths_for_col(table, heights, order, 0);
    let place0 = StreamPlacement {
        col: 0,
        lefts: vec![Rational::default(); r],
        provenance: vec![Provenance::Root; r],
    };
    let mut prev_right = place0.rights(&widths0);
    placements.push((place0, widths0));
    for j in 1..c {
        let widths = widths_for_col(table, heights, order, j);
        let placement = if j + 1 < c {
            middle_stream(&prev_right, &widths, j)
        } else {
            last_column(&prev_right, &widths, j)
        };
        prev_right = placement.rights(&widths);
        placements.push((placement, widths));
    }

    let mut rects = vec![
        CellRect {
            row: 0,
            col: 0,
            left: Rational::default(),
            right: Rational::default(),
            height: Rational::default(),
        };
        r * c
    ];
    for (placement, widths) in &placements {
        let j = placement.col;
        for (k, &row) in order.iter().enumerate() {
            let left = placement.lefts[k].clone();
            rects[row * c + j] = CellRect {
                row,
                col: j,
                left: left.clone(),
                right: left + &widths[k],
                height: heights.get(row).clone(),
            };
        }
    }

    let layout = Layout::new(table.clone(), heights.clone(), order.to_vec(), rects)
        .expect("greedy construction must satisfy all layout invariants");
    assert_eq!(layout.split_count(), 0, "greedy layout must have no split");
    layout
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_i64, ratio};

    fn rats(vals: &[i64]) -> Vec<Rational> {
        vals.iter().map(|&v| from_i64(v)).collect()
    }

    fn chain(vals: &[i64]) -> BoundaryChain {
        BoundaryChain::new(rats(vals))
    }

    fn table(vals: &[&[i64]]) -> Table {
        Table::from_grid(
            vals.iter().map(|r| r.iter().map(|&v| from_i64(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn first_column_left_aligned() {
        let t = table(&[&[2, 1], &[1, 1]]);
        let h = RowHeights::uniform(2, from_i64(1)).unwrap();
        let p = layout_first_column(&t, &h);
        assert_eq!(p.lefts, rats(&[0, 0]));
        let widths = vec![from_i64(2), from_i64(1)];
        assert_eq!(p.rights(&widths).xs(), rats(&[2, 1]));
    }

    #[test]
    fn first_column_widths_follow_heights() {
        let t = table(&[&[1, 1], &[1, 1], &[1, 1]]);
        let h = RowHeights::new(vec![ratio(1, 2), from_i64(1), from_i64(2)]).unwrap();
        let widths: Vec<Rational> = (0..3).map(|i| t.weight(i, 0) / h.get(i)).collect();
        assert_eq!(widths, vec![from_i64(2), from_i64(1), ratio(1, 2)]);
    }

    #[test]
    fn top_pass_flat_boundary_stays_flat() {
        assert_eq!(build_top_pass(&chain(&[0, 0, 0]), &rats(&[1, 1, 1])), rats(&[0, 0, 0]));
    }

    #[test]
    fn top_pass_roots_and_chains() {
        // Band 2 roots at 3; band 3 must touch [3,4], minimum left >= 0 is 2.
        assert_eq!(build_top_pass(&chain(&[0, 3, 0]), &rats(&[1, 1, 1])), rats(&[0, 3, 2]));
    }

    #[test]
    fn top_pass_touching_at_parent_left() {
        // Band 1 roots at 2 -> [2,3]; band 2 (width 2) touches at x=2 with
        // [0,2], so its minimum left is 0; band 3 then starts at 0 as well.
        assert_eq!(build_top_pass(&chain(&[2, 0, 0]), &rats(&[1, 2, 1])), rats(&[2, 0, 0]));
    }

    #[test]
    fn bottom_pass_mirrors_top() {
        assert_eq!(build_bottom_pass(&chain(&[0, 0, 0]), &rats(&[1, 1, 1])), rats(&[0, 0, 0]));
        assert_eq!(build_bottom_pass(&chain(&[0, 3, 0]), &rats(&[1, 1, 1])), rats(&[2, 3, 0]));
        // Reversing the bands turns a bottom pass into a top pass.
        let top = build_top_pass(&chain(&[0, 3, 0]), &rats(&[1, 1, 1]));
        let mut rev = build_bottom_pass(&chain(&[0, 3, 0]), &rats(&[1, 1, 1]));
        rev.reverse();
        assert_eq!(top, rev);
    }

    #[test]
    fn middle_stream_takes_pointwise_max() {
        let t = table(&[&[1, 1, 1], &[3, 1, 1], &[1, 1, 1]]);
        let h = RowHeights::uniform(3, from_i64(1)).unwrap();
        let prev = chain(&[0, 3, 0]);
        let p = layout_middle_stream(&prev, 1, &t, &h);
        assert_eq!(p.lefts, rats(&[2, 3, 2]));
        assert_eq!(
            p.provenance,
            vec![Provenance::ParentBelow, Provenance::Root, Provenance::ParentAbove]
        );
    }

    #[test]
    fn last_column_right_aligns_at_minimum_width() {
        let t = table(&[&[2, 1], &[1, 2]]);
        let h = RowHeights::uniform(2, from_i64(1)).unwrap();
        let prev = chain(&[2, 1]);
        let p = layout_last_column(&prev, &t, &h);
        assert_eq!(p.lefts, rats(&[2, 1]));
    }

    #[test]
    fn greedy_tiles_a_tight_box() {
        let t = table(&[&[2, 1], &[1, 2]]);
        let h = RowHeights::uniform(2, from_i64(1)).unwrap();
        let layout = greedy_layout(&t, &h);
        assert_eq!(layout.excess_area(), from_i64(0));
        assert_eq!(layout.split_count(), 0);
        assert_eq!(layout.width(), from_i64(3));
    }

    #[test]
    fn single_row_packs_without_excess() {
        let t = table(&[&[3, 1, 4, 1, 5]]);
        let h = RowHeights::uniform(1, from_i64(1)).unwrap();
        let layout = greedy_layout(&t, &h);
        assert_eq!(layout.excess_area(), from_i64(0));
        for j in 0..4 {
            assert_eq!(layout.rect(0, j).right, layout.rect(0, j + 1).left);
        }
    }

    #[test]
    fn two_columns_skip_middle_step() {
        let t = table(&[&[3, 1], &[1, 1]]);
        let h = RowHeights::uniform(2, from_i64(1)).unwrap();
        let layout = greedy_layout(&t, &h);
        assert_eq!(layout.width(), from_i64(4));
        assert_eq!(layout.excess_area(), from_i64(2));
        assert_eq!(layout.split_count(), 0);
    }

    #[test]
    fn greedy_respects_drawn_order() {
        let t = table(&[&[3, 1], &[1, 1]]);
        let h = RowHeights::uniform(2, from_i64(1)).unwrap();
        let layout = greedy_layout_with_order(&t, &h, &[1, 0]);
        assert_eq!(layout.order(), &[1, 0]);
        assert_eq!(layout.excess_area(), from_i64(2));
    }

    #[test]
    fn root_characterization_holds() {
        let t = table(&[&[1, 2, 1], &[4, 1, 2], &[1, 3, 1], &[2, 1, 4]]);
        let h = RowHeights::uniform(4, from_i64(1)).unwrap();
        let layout = greedy_layout(&t, &h);
        assert_eq!(layout.split_count(), 0);
        // Every cell either roots at the previous stream's right boundary or
        // touches the x-interval of an adjacent band.
        for j in 1..3 {
            for i in 0..4 {
                let rect = layout.rect(i, j);
                let rooted = rect.left == layout.rect(i, j - 1).right;
                let touches_neighbor = (i > 0 && rect.x_touches(layout.rect(i - 1, j)))
                    || (i + 1 < 4 && rect.x_touches(layout.rect(i + 1, j)));
                assert!(rooted || touches_neighbor, "cell ({i},{j}) is unchained");
            }
        }
    }
}
