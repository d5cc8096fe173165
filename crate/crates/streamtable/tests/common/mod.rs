//! Shared test support: an exhaustive layout oracle independent of the
//! greedy implementation, random-instance generators, and fixture instances.
//!
//! The oracle exploits the chain structure of no-split placements: in any
//! candidate stream placement, each rectangle either starts at the previous
//! stream's boundary (a root) or hangs off an adjacent row, so the optimal
//! left edges lie in the finite set generated by growing a clamped chain from
//! every possible root, in both directions. The oracle enumerates all
//! combinations of those candidate positions per stream (keeping only
//! connected, non-overlapping vectors), carries every reachable boundary
//! state across streams with exact-duplicate pruning, and right-aligns the
//! last column at the minimum feasible edge. The resulting minimum excess is
//! exact.

#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::max;
use std::collections::BTreeSet;
use streamtable::layout::RowHeights;
use streamtable::rational::{from_i64, ratio, Rational};
use streamtable::reductions::CubicGraph;
use streamtable::table::Table;

/// Candidate left edges per band: the previous boundary itself plus every
/// position reachable by a clamped chain grown from each possible root.
fn candidate_lefts(prev_right: &[Rational], widths: &[Rational]) -> Vec<BTreeSet<Rational>> {
    let r = prev_right.len();
    let mut candidates: Vec<BTreeSet<Rational>> = prev_right.iter().cloned().map(|p| {
        let mut set = BTreeSet::new();
        set.insert(p);
        set
    }).collect();
    for root in 0..r {
        // Chain growing downward from the root.
        let mut pos = prev_right[root].clone();
        candidates[root].insert(pos.clone());
        for i in root + 1..r {
            let parent_right = &pos + &widths[i - 1];
            let cand = max(prev_right[i].clone(), &pos - &widths[i]);
            if cand > parent_right {
                break;
            }
            pos = cand;
            candidates[i].insert(pos.clone());
        }
        // Chain growing upward from the root.
        let mut pos = prev_right[root].clone();
        for i in (0..root).rev() {
            let parent_right = &pos + &widths[i + 1];
            let cand = max(prev_right[i].clone(), &pos - &widths[i]);
            if cand > parent_right {
                break;
            }
            pos = cand;
            candidates[i].insert(pos.clone());
        }
    }
    candidates
}

/// All connected placement vectors assembled from the candidate positions.
fn stream_vectors(prev_right: &[Rational], widths: &[Rational]) -> Vec<Vec<Rational>> {
    let r = prev_right.len();
    let candidates = candidate_lefts(prev_right, widths);
    let mut out = Vec::new();
    let mut chosen: Vec<Rational> = Vec::with_capacity(r);
    fn recurse(
        band: usize,
        r: usize,
        candidates: &[BTreeSet<Rational>],
        prev_right: &[Rational],
        widths: &[Rational],
        chosen: &mut Vec<Rational>,
        out: &mut Vec<Vec<Rational>>,
    ) {
        if band == r {
            out.push(chosen.clone());
            return;
        }
        for cand in &candidates[band] {
            if *cand < prev_right[band] {
                continue;
            }
            if band > 0 {
                let prev = &chosen[band - 1];
                let touch = max(prev, cand)
                    <= std::cmp::min(&(prev + &widths[band - 1]), &(cand + &widths[band]));
                if !touch {
                    continue;
                }
            }
            chosen.push(cand.clone());
            recurse(band + 1, r, candidates, prev_right, widths, chosen, out);
            chosen.pop();
        }
    }
    recurse(0, r, &candidates, prev_right, widths, &mut chosen, &mut out);
    out
}

/// Minimum sum of left edges over all connected placements of one stream.
/// Used to cross-check the two-pass merge.
pub fn oracle_min_left_sum(prev_right: &[Rational], widths: &[Rational]) -> Rational {
    stream_vectors(prev_right, widths)
        .into_iter()
        .map(|v| v.iter().sum::<Rational>())
        .min()
        .expect("at least one connected placement exists")
}

/// Exhaustive minimum excess area over no-split layouts with the given
/// heights and the table's row order.
pub fn oracle_min_excess(table: &Table, heights: &RowHeights) -> Rational {
    let (r, c) = (table.rows(), table.cols());
    let widths: Vec<Vec<Rational>> = (0..c)
        .map(|j| (0..r).map(|i| table.weight(i, j) / heights.get(i)).collect())
        .collect();

    // Stream 1 is pinned: left-aligned at 0.
    let mut states: BTreeSet<Vec<Rational>> = BTreeSet::new();
    states.insert(widths[0].clone());

    for stream_widths in widths.iter().take(c - 1).skip(1) {
        let mut next: BTreeSet<Vec<Rational>> = BTreeSet::new();
        for state in &states {
            for vector in stream_vectors(state, stream_widths) {
                next.insert(
                    vector.iter().zip(stream_widths).map(|(l, w)| l + w).collect(),
                );
            }
        }
        states = next;
    }

    // Last column: right-aligned, so connectivity is free and the minimum
    // shared right edge is max_i(prev_right_i + width_i).
    let last = &widths[c - 1];
    let best_width = states
        .iter()
        .map(|state| {
            state
                .iter()
                .zip(last)
                .map(|(p, w)| p + w)
                .max()
                .expect("nonempty rows")
        })
        .min()
        .expect("at least one boundary state");
    best_width * heights.total() - table.total_weight()
}

/// Deterministic random tables: integer weights in 1..=max_weight.
pub fn random_table(rng: &mut ChaCha8Rng, rows: usize, cols: usize, max_weight: i64) -> Table {
    let grid = (0..rows)
        .map(|_| (0..cols).map(|_| from_i64(rng.random_range(1..=max_weight))).collect())
        .collect();
    Table::from_grid(grid).expect("positive weights")
}

/// Heights drawn from {1/2, 1, 2}.
pub fn random_heights(rng: &mut ChaCha8Rng, rows: usize) -> RowHeights {
    let choices = [ratio(1, 2), from_i64(1), from_i64(2)];
    RowHeights::new((0..rows).map(|_| choices[rng.random_range(0..3)].clone()).collect())
        .expect("positive heights")
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The worked 5-element betweenness instance with satisfying order
/// (3,1,4,2,5).
pub fn example_triples() -> Vec<[i64; 3]> {
    vec![[2, 1, 3], [3, 4, 5], [1, 4, 5], [2, 4, 1], [5, 2, 3]]
}

/// 6-vertex cubic graph containing the Hamiltonian path a-b-c-d-e-f.
pub fn example_cubic_graph() -> CubicGraph {
    CubicGraph::from_edge_list("a b\nb c\nc d\nd e\ne f\na f\nb f\na d\nc e\n").unwrap()
}

pub fn k4() -> CubicGraph {
    CubicGraph::from_edge_list("a b\na c\na d\nb c\nb d\nc d\n").unwrap()
}

/// Two disjoint copies of K4 viewed as one 8-vertex cubic graph: no
/// Hamiltonian path exists.
pub fn disconnected_double_k4() -> CubicGraph {
    CubicGraph::from_edge_list(
        "a b\na c\na d\nb c\nb d\nc d\ne f\ne g\ne h\nf g\nf h\ng h\n",
    )
    .unwrap()
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn recurse(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for idx in 0..rest.len() {
            let v = rest.remove(idx);
            prefix.push(v);
            recurse(prefix, rest, out);
            prefix.pop();
            rest.insert(idx, v);
        }
    }
    let mut out = Vec::new();
    recurse(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}
