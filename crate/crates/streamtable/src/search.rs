//! Row-permutation search for the NP-hard variable-order problems: exhaustive
//! enumeration at desk scale and seeded simulated annealing beyond it.
//!
//! Two objectives exist, matching the two hardness reductions: minimize
//! excess area over no-split layouts (greedy evaluation), or minimize splits
//! over zero-excess packed layouts (which requires all row sums to be equal).

use crate::greedy::greedy_layout_with_order;
use crate::layout::{CellRect, Layout, RowHeights};
use crate::rational::{self, Rational};
use crate::table::Table;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("row order is not a permutation of 0..{rows}")]
    InvalidOrder { rows: usize },
    #[error("{rows} rows exceed the exhaustive-search cap of {cap}")]
    TooManyRows { rows: usize, cap: usize },
    #[error("rows {a} and {b} have different sums ({sum_a} vs {sum_b}); zero-excess packing is impossible")]
    UnequalRowSums { a: usize, b: usize, sum_a: String, sum_b: String },
    #[error("annealing schedule must have positive temperature and cooling in (0,1]")]
    BadSchedule,
}

/// A drawn row order: permutation of the original row indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowOrder(Vec<usize>);

impl RowOrder {
    pub fn new(perm: Vec<usize>, rows: usize) -> Result<Self, SearchError> {
        let mut seen = vec![false; rows];
        if perm.len() != rows {
            return Err(SearchError::InvalidOrder { rows });
        }
        for &p in &perm {
            if p >= rows || seen[p] {
                return Err(SearchError::InvalidOrder { rows });
            }
            seen[p] = true;
        }
        Ok(RowOrder(perm))
    }

    pub fn identity(rows: usize) -> Self {
        RowOrder((0..rows).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Greedy layout with uniform height delta; score = excess area.
    MinExcessNoSplit,
    /// Packed zero-excess layout; score = split count.
    MinSplitsZeroExcess,
}

impl Objective {
    pub fn token(self) -> &'static str {
        match self {
            Objective::MinExcessNoSplit => "min-excess",
            Objective::MinSplitsZeroExcess => "min-splits",
        }
    }
}

/// Score under one objective: exact excess area or integer split count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Score {
    Splits(usize),
    Excess(Rational),
}

impl Score {
    pub fn to_f64(&self) -> f64 {
        match self {
            Score::Splits(s) => *s as f64,
            Score::Excess(e) => e.to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub best_order: RowOrder,
    pub score: Score,
    pub objective: Objective,
    pub evaluations: u64,
    pub optimal: bool,
}

impl Serialize for SearchResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SearchResult", 5)?;
        s.serialize_field("order", self.best_order.as_slice())?;
        match &self.score {
            Score::Splits(v) => s.serialize_field("score", v)?,
            Score::Excess(e) => s.serialize_field("score", &rational::to_string(e))?,
        }
        s.serialize_field("objective", self.objective.token())?;
        s.serialize_field("optimal", &self.optimal)?;
        s.serialize_field("evaluations", &self.evaluations)?;
        s.end()
    }
}

impl SearchResult {
    /// Pretty-printed JSON per the documented schema, with trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("result serialization");
        text.push('\n');
        text
    }
}

fn check_equal_row_sums(table: &Table) -> Result<(), SearchError> {
    let first = table.row_sum(0);
    for i in 1..table.rows() {
        let sum = table.row_sum(i);
        if sum != first {
            return Err(SearchError::UnequalRowSums {
                a: 0,
                b: i,
                sum_a: rational::to_string(&first),
                sum_b: rational::to_string(&sum),
            });
        }
    }
    Ok(())
}

/// Draws the rows in the given order with uniform height `delta`, packing
/// each row's cells consecutively without gaps. Requires equal row sums
/// (property P1 forces equal row widths at zero excess). The result has zero
/// excess area.
pub fn packed_layout(table: &Table, order: &RowOrder, delta: &Rational) -> Result<Layout, SearchError> {
    assert!(delta.is_positive(), "row height must be positive");
    check_equal_row_sums(table)?;
    let (r, c) = (table.rows(), table.cols());
    let heights = RowHeights::uniform(r, delta.clone()).expect("positive height");
    let mut rects = Vec::with_capacity(r * c);
    for i in 0..r {
        let mut x = Rational::zero();
        for j in 0..c {
            let width = table.weight(i, j) / delta;
            let right = &x + &width;
            rects.push(CellRect { row: i, col: j, left: x, right: right.clone(), height: delta.clone() });
            x = right;
        }
    }
    let layout = Layout::new(table.clone(), heights, order.as_slice().to_vec(), rects)
        .expect("packed layout satisfies all invariants when row sums are equal");
    debug_assert!(layout.excess_area().is_zero());
    Ok(layout)
}

/// Scores one order under the objective.
pub fn evaluate_order(
    table: &Table,
    order: &RowOrder,
    delta: &Rational,
    objective: Objective,
) -> Result<Score, SearchError> {
    match objective {
        Objective::MinExcessNoSplit => {
            let heights = RowHeights::uniform(table.rows(), delta.clone()).expect("positive delta");
            let layout = greedy_layout_with_order(table, &heights, order.as_slice());
            Ok(Score::Excess(layout.excess_area()))
        }
        Objective::MinSplitsZeroExcess => {
            let layout = packed_layout(table, order, delta)?;
            Ok(Score::Splits(layout.split_count()))
        }
    }
}

#[derive(Debug, Clone)]
pub struct BruteForceOptions {
    /// Maximum row count for exhaustive search (r! evaluations).
    pub cap: usize,
    /// Evaluate only the lexicographically smaller of each order/reversal
    /// pair. Off by default; enable only after confirming both metrics are
    /// reversal-invariant on the instance family at hand.
    pub reversal_symmetry: bool,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions { cap: 9, reversal_symmetry: false }
    }
}

/// Exhaustive search over all r! row orders. Ties break to the
/// lexicographically smallest permutation; the permutation space is
/// partitioned by first element across worker threads, and the merge is
/// independent of the partitioning.
pub fn brute_force_search(
    table: &Table,
    delta: &Rational,
    objective: Objective,
    options: &BruteForceOptions,
) -> Result<SearchResult, SearchError> {
    let r = table.rows();
    if r > options.cap {
        return Err(SearchError::TooManyRows { rows: r, cap: options.cap });
    }
    if objective == Objective::MinSplitsZeroExcess {
        check_equal_row_sums(table)?;
    }

    struct Branch {
        best: Option<(Score, Vec<usize>)>,
        evaluations: u64,
    }

    let branches: Vec<Branch> = (0..r)
        .into_par_iter()
        .map(|first| {
            let mut branch = Branch { best: None, evaluations: 0 };
            let mut prefix = Vec::with_capacity(r);
            prefix.push(first);
            let mut rest: Vec<usize> = (0..r).filter(|&v| v != first).collect();
            visit_permutations(&mut prefix, &mut rest, &mut |perm| {
                if options.reversal_symmetry && reversed_is_lex_smaller(perm) {
                    return;
                }
                branch.evaluations += 1;
                let order = RowOrder(perm.to_vec());
                let score = evaluate_order(table, &order, delta, objective)
                    .expect("row-sum precondition checked before the search");
                let better = match &branch.best {
                    None => true,
                    Some((best_score, best_perm)) => {
                        score < *best_score || (score == *best_score && perm < best_perm.as_slice())
                    }
                };
                if better {
                    branch.best = Some((score, perm.to_vec()));
                }
            });
            branch
        })
        .collect();

    let mut evaluations = 0;
    let mut best: Option<(Score, Vec<usize>)> = None;
    for branch in branches {
        evaluations += branch.evaluations;
        if let Some((score, perm)) = branch.best {
            let better = match &best {
                None => true,
                Some((bs, bp)) => score < *bs || (score == *bs && perm < *bp),
            };
            if better {
                best = Some((score, perm));
            }
        }
    }
    let (score, perm) = best.expect("at least one permutation");
    Ok(SearchResult {
        best_order: RowOrder(perm),
        score,
        objective,
        evaluations,
        optimal: true,
    })
}

fn visit_permutations(
    prefix: &mut Vec<usize>,
    rest: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if rest.is_empty() {
        f(prefix);
        return;
    }
    // `rest` stays sorted, so completions are visited in lexicographic order.
    for idx in 0..rest.len() {
        let value = rest.remove(idx);
        prefix.push(value);
        visit_permutations(prefix, rest, f);
        prefix.pop();
        rest.insert(idx, value);
    }
}

fn reversed_is_lex_smaller(perm: &[usize]) -> bool {
    perm.iter().rev().lt(perm.iter())
}

/// Annealing schedule; `t0 = None` starts at `max(1, initial score)`.
#[derive(Debug, Clone)]
pub struct AnnealSchedule {
    pub t0: Option<f64>,
    pub cooling: f64,
    pub steps: u64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule { t0: None, cooling: 0.995, steps: 20_000 }
    }
}

/// Seeded simulated annealing over row orders: neighborhood is a 50/50 mix of
/// adjacent transpositions and random pair swaps with standard Metropolis
/// acceptance. Deterministic for a fixed (seed, schedule); returns the best
/// order ever visited, never marked optimal.
pub fn anneal_search(
    table: &Table,
    delta: &Rational,
    objective: Objective,
    seed: u64,
    schedule: &AnnealSchedule,
) -> Result<SearchResult, SearchError> {
    if schedule.cooling <= 0.0 || schedule.cooling > 1.0 || schedule.t0.is_some_and(|t| t <= 0.0) {
        return Err(SearchError::BadSchedule);
    }
    let r = table.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = RowOrder::identity(r);
    let mut current_score = evaluate_order(table, &current, delta, objective)?;
    let mut best = current.clone();
    let mut best_score = current_score.clone();
    let mut evaluations = 1;
    let mut temperature = schedule.t0.unwrap_or_else(|| current_score.to_f64().max(1.0));

    if r >= 2 {
        for _ in 0..schedule.steps {
            let mut candidate = current.clone();
            if rng.random_bool(0.5) {
                let i = rng.random_range(0..r - 1);
                candidate.0.swap(i, i + 1);
            } else {
                let i = rng.random_range(0..r);
                let mut j = rng.random_range(0..r - 1);
                if j >= i {
                    j += 1;
                }
                candidate.0.swap(i, j);
            }
            let candidate_score = evaluate_order(table, &candidate, delta, objective)?;
            evaluations += 1;
            let delta_score = candidate_score.to_f64() - current_score.to_f64();
            let accept = delta_score <= 0.0
                || rng.random::<f64>() < (-delta_score / temperature.max(f64::MIN_POSITIVE)).exp();
            if accept {
                current = candidate;
                current_score = candidate_score;
                if current_score < best_score
                    || (current_score == best_score && current.as_slice() < best.as_slice())
                {
                    best = current.clone();
                    best_score = current_score.clone();
                }
            }
            temperature *= schedule.cooling;
        }
    }

    Ok(SearchResult {
        best_order: best,
        score: best_score,
        objective,
        evaluations,
        optimal: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;

    fn table(vals: &[&[i64]]) -> Table {
        Table::from_grid(
            vals.iter().map(|r| r.iter().map(|&v| from_i64(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn packed_layout_requires_equal_row_sums() {
        let t = table(&[&[1, 2], &[2, 2]]);
        let err = packed_layout(&t, &RowOrder::identity(2), &from_i64(1)).unwrap_err();
        assert!(matches!(err, SearchError::UnequalRowSums { .. }));
    }

    #[test]
    fn packed_layout_single_row() {
        let t = table(&[&[2, 3]]);
        let layout = packed_layout(&t, &RowOrder::identity(1), &from_i64(1)).unwrap();
        assert_eq!(layout.split_count(), 0);
        assert_eq!(layout.excess_area(), from_i64(0));
    }

    #[test]
    fn identity_evaluation_matches_direct_layout() {
        let t = table(&[&[2, 1], &[1, 2]]);
        let score =
            evaluate_order(&t, &RowOrder::identity(2), &from_i64(1), Objective::MinExcessNoSplit)
                .unwrap();
        assert_eq!(score, Score::Excess(from_i64(0)));
    }

    #[test]
    fn brute_force_finds_tight_order() {
        // Rows [1,3] and [3,1] interleave badly; [1,3],[1,3] would tile.
        let t = table(&[&[1, 3], &[3, 1], &[1, 3]]);
        let result = brute_force_search(
            &t,
            &from_i64(1),
            Objective::MinExcessNoSplit,
            &BruteForceOptions::default(),
        )
        .unwrap();
        assert!(result.optimal);
        assert_eq!(result.evaluations, 6);
        let rescored =
            evaluate_order(&t, &result.best_order, &from_i64(1), Objective::MinExcessNoSplit)
                .unwrap();
        assert_eq!(rescored, result.score);
    }

    #[test]
    fn brute_force_ties_break_lexicographically() {
        // Fully symmetric table: every order scores 0; identity must win.
        let t = table(&[&[1, 1], &[1, 1], &[1, 1]]);
        let result = brute_force_search(
            &t,
            &from_i64(1),
            Objective::MinExcessNoSplit,
            &BruteForceOptions::default(),
        )
        .unwrap();
        assert_eq!(result.best_order.as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn brute_force_single_row() {
        let t = table(&[&[2, 3]]);
        let result = brute_force_search(
            &t,
            &from_i64(1),
            Objective::MinExcessNoSplit,
            &BruteForceOptions::default(),
        )
        .unwrap();
        assert_eq!(result.best_order.as_slice(), &[0]);
        assert_eq!(result.score, Score::Excess(from_i64(0)));
        assert_eq!(result.evaluations, 1);
    }

    #[test]
    fn brute_force_row_cap() {
        let t = table(&[&[1, 1], &[1, 1], &[1, 1]]);
        let err = brute_force_search(
            &t,
            &from_i64(1),
            Objective::MinExcessNoSplit,
            &BruteForceOptions { cap: 2, reversal_symmetry: false },
        )
        .unwrap_err();
        assert_eq!(err, SearchError::TooManyRows { rows: 3, cap: 2 });
    }

    #[test]
    fn reversal_symmetry_halves_evaluations_and_agrees() {
        let t = table(&[&[1, 3], &[3, 1], &[2, 2], &[1, 3]]);
        let full = brute_force_search(
            &t,
            &from_i64(1),
            Objective::MinExcessNoSplit,
            &BruteForceOptions::default(),
        )
        .unwrap();
        let pruned = brute_force_search(
            &t,
            &from_i64(1),
            Objective::MinExcessNoSplit,
            &BruteForceOptions { cap: 9, reversal_symmetry: true },
        )
        .unwrap();
        assert_eq!(pruned.score, full.score);
        assert!(pruned.evaluations < full.evaluations);
    }

    #[test]
    fn zero_step_anneal_returns_identity() {
        let t = table(&[&[1, 3], &[3, 1]]);
        let schedule = AnnealSchedule { t0: None, cooling: 0.995, steps: 0 };
        let result =
            anneal_search(&t, &from_i64(1), Objective::MinExcessNoSplit, 1, &schedule).unwrap();
        assert_eq!(result.best_order.as_slice(), &[0, 1]);
        assert_eq!(result.evaluations, 1);
        assert!(!result.optimal);
        let identity_score =
            evaluate_order(&t, &RowOrder::identity(2), &from_i64(1), Objective::MinExcessNoSplit)
                .unwrap();
        assert_eq!(result.score, identity_score);
    }

    #[test]
    fn anneal_propagates_objective_infeasibility() {
        let t = table(&[&[1, 2], &[2, 2]]);
        let err = anneal_search(
            &t,
            &from_i64(1),
            Objective::MinSplitsZeroExcess,
            1,
            &AnnealSchedule::default(),
        )
        .unwrap_err();
        assert!(matches!(err, SearchError::UnequalRowSums { .. }));
    }

    #[test]
    fn anneal_is_deterministic_per_seed() {
        let t = table(&[&[1, 3], &[3, 1], &[2, 2], &[1, 3]]);
        let schedule = AnnealSchedule { t0: None, cooling: 0.99, steps: 500 };
        let a = anneal_search(&t, &from_i64(1), Objective::MinExcessNoSplit, 7, &schedule).unwrap();
        let b = anneal_search(&t, &from_i64(1), Objective::MinExcessNoSplit, 7, &schedule).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn anneal_never_beats_brute_force() {
        let t = table(&[&[1, 3], &[3, 1], &[2, 2], &[1, 3]]);
        let brute = brute_force_search(
            &t,
            &from_i64(1),
            Objective::MinExcessNoSplit,
            &BruteForceOptions::default(),
        )
        .unwrap();
        for seed in 0..5 {
            let annealed = anneal_search(
                &t,
                &from_i64(1),
                Objective::MinExcessNoSplit,
                seed,
                &AnnealSchedule { t0: None, cooling: 0.99, steps: 300 },
            )
            .unwrap();
            assert!(annealed.score >= brute.score);
        }
    }

    #[test]
    fn search_result_serializes_per_schema() {
        let t = table(&[&[1, 1], &[1, 1]]);
        let result = brute_force_search(
            &t,
            &from_i64(1),
            Objective::MinSplitsZeroExcess,
            &BruteForceOptions::default(),
        )
        .unwrap();
        let json = serde_json::to_value(&result).unwrap();
        assert_eq!(json["order"], serde_json::json!([0, 1]));
        assert_eq!(json["score"], serde_json::json!(0));
        assert_eq!(json["objective"], "min-splits");
        assert_eq!(json["optimal"], true);
        assert_eq!(json["evaluations"], 2);
    }
}
