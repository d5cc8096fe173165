//! Row-height selection: initialization policies and the local-improvement
//! heuristic that removes empty rectangles by shrinking row heights.
//!
//! The improvement step works on one empty rectangle `E(i,j)` at a time. All
//! cells (and interior gaps) left of the gap are bundled into prefix
//! rectangles whose areas stay fixed as the row height drops, so each bundle
//! boundary traces a hyperbola `f(l) = A/l`; the suffix side mirrors this.
//! A boundary may slide only until it reaches the adjacent rows' cells in the
//! neighboring stream — those rows do not move — which bounds each hyperbola's
//! validity interval. The gap closes at the height where the prefix and
//! suffix envelopes meet; if that height lies inside every validity interval
//! the shrink is feasible. Accepted shrinks re-run the greedy layout, which
//! is optimal for the new heights, and are kept only when the total excess
//! strictly decreases.

use crate::greedy::greedy_layout;
use crate::layout::{EmptyRect, Layout, RowHeights};
use crate::rational::{self, Rational};
use crate::table::Table;
use num_traits::Signed;
use thiserror::Error;

/// Default iteration cap for [`local_improve`].
pub const DEFAULT_MAX_ITERS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeightError {
    #[error("height policy parameter must be positive, got {0}")]
    NonPositiveParameter(String),
    #[error("explicit height list has {got} entries for {expected} rows")]
    WrongLength { got: usize, expected: usize },
    #[error("height policy must be uniform:R, prop:H, or explicit:R1,R2,...; got `{0}`")]
    BadSpec(String),
}

/// How initial row heights are chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeightPolicy {
    /// Every row gets height delta.
    Uniform(Rational),
    /// Heights proportional to row sums, totalling exactly H.
    ProportionalToRowSum(Rational),
    /// Caller-provided heights.
    Explicit(Vec<Rational>),
}

impl HeightPolicy {
    /// Parses the textual form used by the CLI and FFI:
    /// `uniform:R`, `prop:H`, or `explicit:R1,R2,...`.
    pub fn parse(spec: &str) -> Result<Self, HeightError> {
        let bad = || HeightError::BadSpec(spec.to_string());
        let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
        match kind {
            "uniform" => Ok(HeightPolicy::Uniform(rational::parse(rest).map_err(|_| bad())?)),
            "prop" => {
                Ok(HeightPolicy::ProportionalToRowSum(rational::parse(rest).map_err(|_| bad())?))
            }
            "explicit" => Ok(HeightPolicy::Explicit(
                rest.split(',')
                    .map(|s| rational::parse(s).map_err(|_| bad()))
                    .collect::<Result<_, _>>()?,
            )),
            _ => Err(bad()),
        }
    }
}

/// Builds the initial heights for a table under the policy.
pub fn initial_heights(table: &Table, policy: &HeightPolicy) -> Result<RowHeights, HeightError> {
    let r = table.rows();
    match policy {
        HeightPolicy::Uniform(delta) => {
            if !delta.is_positive() {
                return Err(HeightError::NonPositiveParameter(rational::to_string(delta)));
            }
            Ok(RowHeights::uniform(r, delta.clone()).expect("positive delta"))
        }
        HeightPolicy::ProportionalToRowSum(total) => {
            if !total.is_positive() {
                return Err(HeightError::NonPositiveParameter(rational::to_string(total)));
            }
            let grand = table.total_weight();
            let heights = (0..r).map(|i| table.row_sum(i) * total / &grand).collect();
            Ok(RowHeights::new(heights).expect("positive row sums"))
        }
        HeightPolicy::Explicit(list) => {
            if list.len() != r {
                return Err(HeightError::WrongLength { got: list.len(), expected: r });
            }
            RowHeights::new(list.clone()).map_err(|_| {
                let bad = list.iter().find(|h| !h.is_positive()).expect("some non-positive");
                HeightError::NonPositiveParameter(rational::to_string(bad))
            })
        }
    }
}

/// Which side of the target gap a hyperbola constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapSide {
    Left,
    Right,
}

/// One fixed-area bundle boundary: height `f(l) = area / l`, valid while the
/// boundary position `l` (measured from the row's pinned edge) stays within
/// `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperbola {
    pub side: GapSide,
    pub area: Rational,
    pub lo: Rational,
    pub hi: Rational,
}

/// Feasibility analysis for removing one empty rectangle by shrinking its
/// row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShrinkCandidate {
    pub target: EmptyRect,
    pub hyperbolas: Vec<Hyperbola>,
    pub current_height: Rational,
    /// The gap-closing height, present only when it lies inside every
    /// hyperbola's validity interval and strictly below the current height.
    pub new_height: Option<Rational>,
}

/// Analyzes whether `target` can be removed by shrinking its row's height.
pub fn shrink_candidate(layout: &Layout, target: &EmptyRect) -> ShrinkCandidate {
    let row = target.row;
    let gap_col = target.gap_after_col;
    let cols = layout.table().cols();
    let current_height = layout.heights().get(row).clone();
    let x0 = layout.left_edge().clone();
    let x1 = layout.right_edge().clone();

    // Drawn neighbors of the target row; rows at the boundary have one.
    let band = layout.order().iter().position(|&r| r == row).expect("row is drawn");
    let mut neighbors = Vec::new();
    if band > 0 {
        neighbors.push(layout.order()[band - 1]);
    }
    if band + 1 < layout.order().len() {
        neighbors.push(layout.order()[band + 1]);
    }

    let width = layout.width();
    let mut hyperbolas = Vec::new();

    // Prefix side: bundle boundaries are cell right edges (columns 0..=gap)
    // and the right edges of interior gaps; each may slide right until it
    // hits the neighbors' cells one stream over.
    for col in 0..=gap_col {
        let lo = &layout.rect(row, col).right - &x0;
        let hi = neighbors
            .iter()
            .map(|&nb| &layout.rect(nb, col + 1).right - &x0)
            .min()
            .unwrap_or_else(|| width.clone());
        hyperbolas.push(Hyperbola {
            side: GapSide::Left,
            area: &lo * &current_height,
            lo,
            hi,
        });
        if col < gap_col {
            let gap_lo = &layout.rect(row, col + 1).left - &x0;
            if gap_lo > hyperbolas.last().expect("just pushed").lo {
                let hi = neighbors
                    .iter()
                    .map(|&nb| &layout.rect(nb, col + 1).right - &x0)
                    .min()
                    .unwrap_or_else(|| width.clone());
                hyperbolas.push(Hyperbola {
                    side: GapSide::Left,
                    area: &gap_lo * &current_height,
                    lo: gap_lo,
                    hi,
                });
            }
        }
    }

    // Suffix side, mirrored: boundaries are cell left edges (columns after
    // the gap) and the left edges of interior gaps, sliding left.
    for col in gap_col + 1..cols {
        let lo = &x1 - &layout.rect(row, col).left;
        let hi = neighbors
            .iter()
            .map(|&nb| &x1 - &layout.rect(nb, col - 1).left)
            .min()
            .unwrap_or_else(|| width.clone());
        hyperbolas.push(Hyperbola {
            side: GapSide::Right,
            area: &lo * &current_height,
            lo,
            hi,
        });
        if col > gap_col + 1 {
            let gap_lo = &x1 - &layout.rect(row, col - 1).right;
            if gap_lo > hyperbolas.last().expect("just pushed").lo {
                let hi = neighbors
                    .iter()
                    .map(|&nb| &x1 - &layout.rect(nb, col - 1).left)
                    .min()
                    .unwrap_or_else(|| width.clone());
                hyperbolas.push(Hyperbola {
                    side: GapSide::Right,
                    area: &gap_lo * &current_height,
                    lo: gap_lo,
                    hi,
                });
            }
        }
    }

    // The gap closes where the outermost prefix and suffix boundaries meet:
    // A_left/H + A_right/H = W, i.e. H = (A_left + A_right) / W.
    let prefix_area = (&layout.rect(row, gap_col).right - &x0) * &current_height;
    let suffix_area = (&x1 - &layout.rect(row, gap_col + 1).left) * &current_height;
    let closing_height = (prefix_area + suffix_area) / &width;

    // Valid heights: every bundle must stay within its interval, so
    // H >= area/hi for each hyperbola (H <= current height by construction).
    let feasible = closing_height < current_height
        && hyperbolas.iter().all(|h| closing_height >= &h.area / &h.hi);

    ShrinkCandidate {
        target: target.clone(),
        hyperbolas,
        current_height,
        new_height: feasible.then_some(closing_height),
    }
}

/// One accepted improvement step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImproveStep {
    pub iteration: usize,
    pub row: usize,
    pub gap_after_col: usize,
    pub old_height: Rational,
    pub new_height: Rational,
    pub excess_before: Rational,
    pub excess_after: Rational,
}

/// Iteratively removes empty rectangles, largest first: each iteration picks
/// the largest gap with a feasible shrink, applies the new row height,
/// re-runs the greedy layout, and accepts only strict excess decreases.
/// Stops when no gap improves the layout or after `max_iters` iterations.
pub fn local_improve(
    table: &Table,
    heights: &RowHeights,
    max_iters: usize,
) -> (RowHeights, Layout, Vec<ImproveStep>) {
    let mut heights = heights.clone();
    let mut layout = greedy_layout(table, &heights);
    let mut excess = layout.excess_area();
    let mut log = Vec::new();

    for iteration in 0..max_iters {
        let mut accepted = false;
        for gap in layout.empty_rectangles() {
            let candidate = shrink_candidate(&layout, &gap);
            let Some(new_height) = candidate.new_height else {
                continue;
            };
            let trial_heights = heights
                .with_height(gap.row, new_height.clone())
                .expect("closing height is positive");
            let trial_layout = greedy_layout(table, &trial_heights);
            let trial_excess = trial_layout.excess_area();
            assert!(
                trial_excess <= excess,
                "greedy re-layout after a feasible shrink must not increase excess"
            );
            if trial_excess < excess {
                log.push(ImproveStep {
                    iteration,
                    row: gap.row,
                    gap_after_col: gap.gap_after_col,
                    old_height: heights.get(gap.row).clone(),
                    new_height,
                    excess_before: excess.clone(),
                    excess_after: trial_excess.clone(),
                });
                heights = trial_heights;
                layout = trial_layout;
                excess = trial_excess;
                accepted = true;
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    (heights, layout, log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_i64, ratio};
    use num_traits::Zero;

    fn table(vals: &[&[i64]]) -> Table {
        Table::from_grid(
            vals.iter().map(|r| r.iter().map(|&v| from_i64(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn uniform_heights() {
        let t = table(&[&[1, 1], &[1, 1], &[1, 1]]);
        let h = initial_heights(&t, &HeightPolicy::Uniform(from_i64(1))).unwrap();
        assert_eq!(h.as_slice(), &[from_i64(1), from_i64(1), from_i64(1)]);
    }

    #[test]
    fn proportional_heights_sum_to_total() {
        let t = table(&[&[1, 1], &[2, 2], &[3, 3]]); // row sums 2, 4, 6
        let h = initial_heights(&t, &HeightPolicy::ProportionalToRowSum(from_i64(6))).unwrap();
        assert_eq!(h.as_slice(), &[from_i64(1), from_i64(2), from_i64(3)]);
        assert_eq!(h.total(), from_i64(6));
    }

    #[test]
    fn proportional_heights_exact_split() {
        let t = Table::from_grid(vec![
            vec![from_i64(2), from_i64(1)], // sum 3
            vec![ratio(1, 2), ratio(1, 2)], // sum 1
        ])
        .unwrap();
        let h = initial_heights(&t, &HeightPolicy::ProportionalToRowSum(from_i64(1))).unwrap();
        assert_eq!(h.as_slice(), &[ratio(3, 4), ratio(1, 4)]);
    }

    #[test]
    fn rejects_non_positive_parameters() {
        let t = table(&[&[1, 1]]);
        assert!(matches!(
            initial_heights(&t, &HeightPolicy::Uniform(from_i64(0))),
            Err(HeightError::NonPositiveParameter(_))
        ));
        assert!(matches!(
            initial_heights(&t, &HeightPolicy::ProportionalToRowSum(from_i64(-1))),
            Err(HeightError::NonPositiveParameter(_))
        ));
        assert!(matches!(
            initial_heights(&t, &HeightPolicy::Explicit(vec![from_i64(0)])),
            Err(HeightError::NonPositiveParameter(_))
        ));
        assert!(matches!(
            initial_heights(&t, &HeightPolicy::Explicit(vec![from_i64(1); 2])),
            Err(HeightError::WrongLength { got: 2, expected: 1 })
        ));
    }

    #[test]
    fn shrink_closes_simple_gap() {
        // Greedy on [[3,1],[1,1]] with unit heights leaves a 2x1 gap in row 2;
        // closing it means H = (A_left + A_right) / W = (1 + 1) / 4 = 1/2.
        let t = table(&[&[3, 1], &[1, 1]]);
        let h = RowHeights::uniform(2, from_i64(1)).unwrap();
        let layout = greedy_layout(&t, &h);
        let gaps = layout.empty_rectangles();
        assert_eq!(gaps.len(), 1);
        let candidate = shrink_candidate(&layout, &gaps[0]);
        assert_eq!(candidate.current_height, from_i64(1));
        assert_eq!(candidate.new_height, Some(ratio(1, 2)));
    }

    #[test]
    fn shrink_infeasible_when_neighbors_cap_growth() {
        // Greedy on this table leaves one gap per row (excess 6), but every
        // bundle is capped immediately by the neighboring rows' cells: e.g.
        // row 2's first cell ends at 4 and both neighbors' second cells also
        // end at 4, so no height below the current one is valid.
        let t = table(&[&[1, 1, 4], &[4, 1, 1], &[1, 1, 4]]);
        let h = RowHeights::uniform(3, from_i64(1)).unwrap();
        let layout = greedy_layout(&t, &h);
        assert_eq!(layout.excess_area(), from_i64(6));
        let gaps = layout.empty_rectangles();
        assert_eq!(gaps.len(), 3);
        for gap in &gaps {
            let candidate = shrink_candidate(&layout, gap);
            assert_eq!(candidate.new_height, None, "gap {gap:?} must be infeasible");
        }
        // Consequently the improvement loop keeps the layout unchanged.
        let (heights, improved, log) = local_improve(&t, &h, DEFAULT_MAX_ITERS);
        assert!(log.is_empty());
        assert_eq!(heights, h);
        assert_eq!(improved.excess_area(), from_i64(6));
    }

    #[test]
    fn local_improve_reaches_zero_excess() {
        let t = table(&[&[3, 1], &[1, 1]]);
        let h = RowHeights::uniform(2, from_i64(1)).unwrap();
        let (heights, layout, log) = local_improve(&t, &h, DEFAULT_MAX_ITERS);
        assert!(layout.excess_area().is_zero());
        assert_eq!(heights.as_slice(), &[from_i64(1), ratio(1, 2)]);
        assert!(log.len() <= 2);
        assert_eq!(layout.split_count(), 0);
    }

    #[test]
    fn local_improve_leaves_tight_layout_alone() {
        let t = table(&[&[2, 1], &[1, 2]]);
        let h = RowHeights::uniform(2, from_i64(1)).unwrap();
        let (heights, layout, log) = local_improve(&t, &h, DEFAULT_MAX_ITERS);
        assert!(log.is_empty());
        assert_eq!(heights, h);
        assert!(layout.excess_area().is_zero());
    }

    #[test]
    fn local_improve_excess_never_increases() {
        let t = table(&[&[4, 1, 2], &[1, 3, 1], &[2, 2, 4]]);
        let h = RowHeights::uniform(3, from_i64(1)).unwrap();
        let (_, layout, log) = local_improve(&t, &h, DEFAULT_MAX_ITERS);
        let mut last = greedy_layout(&t, &h).excess_area();
        for step in &log {
            assert_eq!(step.excess_before, last);
            assert!(step.excess_after < step.excess_before);
            last = step.excess_after.clone();
        }
        assert_eq!(layout.excess_area(), last);
        assert_eq!(layout.split_count(), 0);
    }

    #[test]
    fn zero_iteration_budget_is_identity() {
        let t = table(&[&[3, 1], &[1, 1]]);
        let h = RowHeights::uniform(2, from_i64(1)).unwrap();
        let (heights, layout, log) = local_improve(&t, &h, 0);
        assert!(log.is_empty());
        assert_eq!(heights, h);
        assert_eq!(layout.excess_area(), from_i64(2));
    }
}
