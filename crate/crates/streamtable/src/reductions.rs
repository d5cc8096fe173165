//! Hardness-instance generators and certificate checkers.
//!
//! Two constructions turn decision problems into StreamTable optimization
//! instances:
//!
//! - **Betweenness**: a set of ordered triples becomes an r x (4c+1) table
//!   whose rows can be ordered into a no-split layout of excess at most
//!   `r*c*w/12` iff the triples admit a betweenness order. Thin "line"
//!   columns of weight `eps = 1/(r(c+1))` separate the triple groups, and
//!   each triple is realized as three physical columns whose weight split
//!   encodes the row's role (left/centre/right element, or non-member).
//! - **Hamiltonian path in a cubic graph**: each edge becomes three columns
//!   whose weights form an `L` pattern on endpoint rows and the mirrored `R`
//!   pattern elsewhere. A packed zero-excess layout has at most `4(n-1)`
//!   splits iff the row order is a Hamiltonian path.
//!
//! Both generators produce tables with equal row sums, so zero-excess packed
//! layouts exist, and carry their decision threshold alongside the table.

use crate::greedy::{self, BoundaryChain};
use crate::layout::{CellRect, Layout, RowHeights};
use crate::rational::{self, ratio, Rational};
use crate::search::{packed_layout, RowOrder, SearchError};
use crate::table::{validate_table, Table};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid triples: {0}")]
    InvalidTriples(String),
    #[error("triple-column weight must be at least 15, got {0}")]
    WTooSmall(String),
    #[error("weight parameter must be positive")]
    NonPositiveW,
    #[error("graph is not cubic: {0}")]
    NotCubic(String),
    #[error("order is not a valid certificate for this instance")]
    CertificateInvalid,
    #[error("{0}")]
    Search(String),
}

impl From<SearchError> for ReductionError {
    fn from(e: SearchError) -> Self {
        ReductionError::Search(e.to_string())
    }
}

/// A betweenness instance: ordered triples over distinct integer elements.
/// The reduction regime requires at least 5 elements and 5 triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetweennessInstance {
    elements: Vec<i64>, // sorted ascending; row i of the table is elements[i]
    triples: Vec<[i64; 3]>,
}

impl BetweennessInstance {
    pub fn new(triples: Vec<[i64; 3]>) -> Result<Self, ReductionError> {
        let mut elements: BTreeSet<i64> = BTreeSet::new();
        for t in &triples {
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(ReductionError::InvalidTriples(format!(
                    "triple ({},{},{}) repeats an element",
                    t[0], t[1], t[2]
                )));
            }
            elements.extend(t);
        }
        let elements: Vec<i64> = elements.into_iter().collect();
        if elements.len() < 5 || triples.len() < 5 {
            return Err(ReductionError::InvalidTriples(format!(
                "reduction needs at least 5 elements and 5 triples, got {} and {}",
                elements.len(),
                triples.len()
            )));
        }
        Ok(BetweennessInstance { elements, triples })
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn triples(&self) -> &[[i64; 3]] {
        &self.triples
    }

    /// Parses the instance file format: a JSON list of 3-element arrays.
    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let triples: Vec<[i64; 3]> = serde_json::from_str(text)
            .map_err(|e| ReductionError::InvalidTriples(e.to_string()))?;
        Self::new(triples)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string(&self.triples).expect("triples serialize");
        text.push('\n');
        text
    }

    /// Maps an order over element values to a row order of the generated
    /// table.
    pub fn row_order(&self, element_order: &[i64]) -> Result<RowOrder, ReductionError> {
        let index: BTreeMap<i64, usize> =
            self.elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let perm: Vec<usize> = element_order
            .iter()
            .map(|e| index.get(e).copied())
            .collect::<Option<_>>()
            .ok_or_else(|| {
                ReductionError::InvalidTriples("order mentions an unknown element".into())
            })?;
        Ok(RowOrder::new(perm, self.elements.len())?)
    }
}

/// True iff every triple's middle element sits strictly between the two
/// outer elements in `order`. Works on any triple list, independent of the
/// table machinery.
pub fn check_betweenness_certificate(triples: &[[i64; 3]], order: &[i64]) -> bool {
    let pos: BTreeMap<i64, usize> = order.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    if pos.len() != order.len() {
        return false;
    }
    triples.iter().all(|t| {
        match (pos.get(&t[0]), pos.get(&t[1]), pos.get(&t[2])) {
            (Some(&a), Some(&b), Some(&c)) => (a < b && b < c) || (c < b && b < a),
            _ => false,
        }
    })
}

/// Independent brute-force betweenness solver: returns a satisfying element
/// order if one exists. Exponential in the element count; intended for
/// filtering random desk-scale instances.
pub fn betweenness_satisfiable(instance: &BetweennessInstance) -> Option<Vec<i64>> {
    fn recurse(
        chosen: &mut Vec<i64>,
        rest: &mut Vec<i64>,
        triples: &[[i64; 3]],
    ) -> Option<Vec<i64>> {
        if rest.is_empty() {
            if check_betweenness_certificate(triples, chosen) {
                return Some(chosen.clone());
            }
            return None;
        }
        for idx in 0..rest.len() {
            let value = rest.remove(idx);
            chosen.push(value);
            if let Some(found) = recurse(chosen, rest, triples) {
                return Some(found);
            }
            chosen.pop();
            rest.insert(idx, value);
        }
        None
    }
    let mut rest = instance.elements.clone();
    recurse(&mut Vec::new(), &mut rest, &instance.triples)
}

/// An undirected graph in which every vertex has degree exactly 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicGraph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl CubicGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, ReductionError> {
        let n = vertices.len();
        let mut degree = vec![0usize; n];
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(ReductionError::NotCubic(format!("bad edge ({u},{v})")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(ReductionError::NotCubic(format!("duplicate edge ({u},{v})")));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(ReductionError::NotCubic(format!(
                "vertex `{}` has degree {}",
                vertices[v], degree[v]
            )));
        }
        Ok(CubicGraph { vertices, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// Parses the edge-list format: one `u v` pair of vertex names per line;
    /// blank lines and `#` comments ignored. Vertices are numbered in order
    /// of first appearance.
    pub fn from_edge_list(text: &str) -> Result<Self, ReductionError> {
        let mut names: Vec<String> = Vec::new();
        let mut index = BTreeMap::new();
        let mut edges = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (u, v) = match (parts.next(), parts.next(), parts.next()) {
                (Some(u), Some(v), None) => (u, v),
                _ => {
                    return Err(ReductionError::NotCubic(format!(
                        "edge line must be `u v`, got `{line}`"
                    )))
                }
            };
            let mut id = |name: &str| -> usize {
                *index.entry(name.to_string()).or_insert_with(|| {
                    names.push(name.to_string());
                    names.len() - 1
                })
            };
            let (u, v) = (id(u), id(v));
            edges.push((u, v));
        }
        CubicGraph::new(names, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut text = String::new();
        for &(u, v) in &self.edges {
            text.push_str(&format!("{} {}\n", self.vertices[u], self.vertices[v]));
        }
        text
    }

    /// Maps an order over vertex names to a row order of the generated table.
    pub fn row_order(&self, vertex_order: &[String]) -> Result<RowOrder, ReductionError> {
        let index: BTreeMap<&str, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let perm: Vec<usize> = vertex_order
            .iter()
            .map(|v| index.get(v.as_str()).copied())
            .collect::<Option<_>>()
            .ok_or_else(|| ReductionError::NotCubic("order mentions an unknown vertex".into()))?;
        Ok(RowOrder::new(perm, self.vertices.len())?)
    }

    /// Direct brute force over vertex orders; independent of the table
    /// machinery.
    pub fn has_hamiltonian_path(&self) -> bool {
        fn recurse(graph: &CubicGraph, path: &mut Vec<usize>, rest: &mut Vec<usize>) -> bool {
            if rest.is_empty() {
                return true;
            }
            for idx in 0..rest.len() {
                let v = rest[idx];
                if let Some(&last) = path.last() {
                    if !graph.has_edge(last, v) {
                        continue;
                    }
                }
                rest.remove(idx);
                path.push(v);
                if recurse(graph, path, rest) {
                    return true;
                }
                path.pop();
                rest.insert(idx, v);
            }
            false
        }
        let mut rest: Vec<usize> = (0..self.vertices.len()).collect();
        recurse(self, &mut Vec::new(), &mut rest)
    }
}

/// True iff consecutive vertices in `order` are always joined by an edge.
/// `order` must be a permutation of the vertex indices.
pub fn check_hampath_certificate(graph: &CubicGraph, order: &RowOrder) -> bool {
    order.as_slice().windows(2).all(|pair| graph.has_edge(pair[0], pair[1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    Betweenness,
    HamPath,
}

/// The decision threshold carried by a generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    /// Excess area at most this value (betweenness: r*c*w/12).
    Excess(Rational),
    /// Split count at most this value (Hamiltonian path: 4(n-1)).
    Splits(usize),
}

impl Threshold {
    pub fn to_display(&self) -> String {
        match self {
            Threshold::Excess(e) => rational::to_string(e),
            Threshold::Splits(s) => s.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionSource {
    Betweenness(BetweennessInstance),
    HamPath(CubicGraph),
}

/// A generated hardness instance: the table, its provenance, and the exact
/// decision threshold (with uniform row height delta = 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub table: Table,
    pub kind: ReductionKind,
    pub source: ReductionSource,
    pub threshold: Threshold,
    pub delta: Rational,
    pub w: Rational,
}

/// Builds the betweenness table: rows are elements (sorted ascending), and
/// columns interleave line columns with triple groups:
/// `line, (left, mid, right, line) x c`.
pub fn betweenness_to_table(
    instance: &BetweennessInstance,
    w: &Rational,
) -> Result<ReductionInstance, ReductionError> {
    if *w < rational::from_i64(15) {
        return Err(ReductionError::WTooSmall(rational::to_string(w)));
    }
    let r = instance.elements.len();
    let c = instance.triples.len();
    let eps = Rational::new(BigInt::one(), BigInt::from(r * (c + 1)));
    let sixth = w * ratio(1, 6);
    let two_thirds = w * ratio(2, 3);
    let five_twelfths = w * ratio(5, 12);

    let mut col_labels = vec!["s0".to_string()];
    let mut grid: Vec<Vec<Rational>> = vec![vec![eps.clone()]; r];
    for (k, triple) in instance.triples.iter().enumerate() {
        for suffix in ["L", "M", "R"] {
            col_labels.push(format!("t{}{}", k + 1, suffix));
        }
        col_labels.push(format!("s{}", k + 1));
        for (i, row) in grid.iter_mut().enumerate() {
            let e = instance.elements[i];
            let cells: [&Rational; 3] = if e == triple[0] {
                [&two_thirds, &sixth, &sixth]
            } else if e == triple[2] {
                [&sixth, &sixth, &two_thirds]
            } else if e == triple[1] {
                [&sixth, &two_thirds, &sixth]
            } else {
                [&five_twelfths, &sixth, &five_twelfths]
            };
            row.extend(cells.into_iter().cloned());
            row.push(eps.clone());
        }
    }
    let row_labels = instance.elements.iter().map(i64::to_string).collect();
    let table = validate_table(grid, row_labels, col_labels)
        .expect("generated betweenness table is valid by construction");
    assert!(table.has_equal_row_sums(), "betweenness rows must have equal sums");
    let threshold = Rational::from_integer(BigInt::from(r * c)) * w / rational::from_i64(12);
    Ok(ReductionInstance {
        table,
        kind: ReductionKind::Betweenness,
        source: ReductionSource::Betweenness(instance.clone()),
        threshold: Threshold::Excess(threshold),
        delta: Rational::one(),
        w: w.clone(),
    })
}

/// Builds the Hamiltonian-path table: one row per vertex, three columns per
/// edge. Endpoint rows carry the `L` pattern (7w/12, w/12, 4w/12), all other
/// rows the mirrored `R` pattern.
pub fn hampath_to_table(
    graph: &CubicGraph,
    w: &Rational,
) -> Result<ReductionInstance, ReductionError> {
    if !w.is_positive() {
        return Err(ReductionError::NonPositiveW);
    }
    let n = graph.vertex_count();
    let l_group = [w * ratio(7, 12), w * ratio(1, 12), w * ratio(4, 12)];
    let r_group = [w * ratio(4, 12), w * ratio(1, 12), w * ratio(7, 12)];

    let mut col_labels = Vec::with_capacity(3 * graph.edges.len());
    let mut grid: Vec<Vec<Rational>> = vec![Vec::new(); n];
    for &(u, v) in &graph.edges {
        let edge_name = format!("{}-{}", graph.vertices[u], graph.vertices[v]);
        for suffix in ["L", "M", "R"] {
            col_labels.push(format!("{edge_name}{suffix}"));
        }
        for (i, row) in grid.iter_mut().enumerate() {
            let group = if i == u || i == v { &l_group } else { &r_group };
            row.extend(group.iter().cloned());
        }
    }
    let table = validate_table(grid, graph.vertices.clone(), col_labels)
        .expect("generated hampath table is valid by construction");
    assert!(table.has_equal_row_sums(), "hampath rows must have equal sums");
    Ok(ReductionInstance {
        table,
        kind: ReductionKind::HamPath,
        source: ReductionSource::HamPath(graph.clone()),
        threshold: Threshold::Splits(4 * (n - 1)),
        delta: Rational::one(),
        w: w.clone(),
    })
}

impl ReductionInstance {
    /// Checks an order (over row indices) against the source decision
    /// problem.
    pub fn check_certificate(&self, order: &RowOrder) -> bool {
        match &self.source {
            ReductionSource::Betweenness(instance) => {
                let elements: Vec<i64> =
                    order.as_slice().iter().map(|&i| instance.elements[i]).collect();
                check_betweenness_certificate(&instance.triples, &elements)
            }
            ReductionSource::HamPath(graph) => check_hampath_certificate(graph, order),
        }
    }
}

/// Builds the witness layout for a certified order.
///
/// Betweenness: line columns are drawn as vertically aligned strips and each
/// triple group is laid out greedily inside a band of width `w + w/12`; the
/// result has no split and excess exactly `r*c*w/12`. Hamiltonian path: the
/// packed layout, which has zero excess and exactly `4(n-1)` splits.
pub fn certificate_layout(
    instance: &ReductionInstance,
    order: &RowOrder,
) -> Result<Layout, ReductionError> {
    if !instance.check_certificate(order) {
        return Err(ReductionError::CertificateInvalid);
    }
    match &instance.source {
        ReductionSource::Betweenness(_) => betweenness_certificate_layout(instance, order),
        ReductionSource::HamPath(graph) => {
            let layout = packed_layout(&instance.table, order, &instance.delta)?;
            assert_eq!(
                layout.split_count(),
                4 * (graph.vertex_count() - 1),
                "packed certificate layout must hit the threshold exactly"
            );
            Ok(layout)
        }
    }
}

fn betweenness_certificate_layout(
    instance: &ReductionInstance,
    order: &RowOrder,
) -> Result<Layout, ReductionError> {
    let table = &instance.table;
    let (r, cols) = (table.rows(), table.cols());
    let triples = (cols - 1) / 4;
    let band_width = &instance.w + &instance.w / rational::from_i64(12);
    let eps_width = table.weight(0, 0) / &instance.delta;
    let heights = RowHeights::uniform(r, instance.delta.clone()).expect("delta positive");
    let drawn: Vec<usize> = order.as_slice().to_vec();

    let mut rects: Vec<Option<CellRect>> = vec![None; r * cols];
    let mut place = |col: usize, row: usize, left: Rational, width: &Rational| {
        rects[row * cols + col] = Some(CellRect {
            row,
            col,
            left: left.clone(),
            right: left + width,
            height: instance.delta.clone(),
        });
    };

    let mut cursor = Rational::zero();
    for group in 0..=triples {
        // Line column: a vertically aligned strip.
        let line_col = group * 4;
        for &row in &drawn {
            place(line_col, row, cursor.clone(), &eps_width);
        }
        cursor += &eps_width;
        if group == triples {
            break;
        }
        // Triple band: greedy inside [cursor, cursor + band_width], with the
        // third stream right-aligned at the band end so the next line column
        // abuts it.
        let band_end = &cursor + &band_width;
        let cols_in_band = [group * 4 + 1, group * 4 + 2, group * 4 + 3];
        let widths: Vec<Vec<Rational>> = cols_in_band
            .iter()
            .map(|&j| drawn.iter().map(|&row| table.weight(row, j) / &instance.delta).collect())
            .collect();
        let first_lefts = vec![cursor.clone(); r];
        let first_rights =
            BoundaryChain::new(first_lefts.iter().zip(&widths[0]).map(|(l, w)| l + w).collect());
        let mid = greedy::middle_stream(&first_rights, &widths[1], cols_in_band[1]);
        let mid_rights = mid.rights(&widths[1]);
        let last = greedy::middle_stream(&mid_rights, &widths[2], cols_in_band[2]);
        let needed = last
            .lefts
            .iter()
            .zip(&widths[2])
            .map(|(l, w)| l + w)
            .max()
            .expect("band has rows");
        assert!(
            needed <= band_end,
            "certified order must fit each triple group in width w + w/12"
        );
        for (k, &row) in drawn.iter().enumerate() {
            place(cols_in_band[0], row, first_lefts[k].clone(), &widths[0][k]);
            place(cols_in_band[1], row, mid.lefts[k].clone(), &widths[1][k]);
            place(cols_in_band[2], row, &band_end - &widths[2][k], &widths[2][k]);
        }
        cursor = band_end;
    }

    let rects: Vec<CellRect> = rects
        .into_iter()
        .collect::<Option<_>>()
        .expect("all cells placed");
    let layout = Layout::new(table.clone(), heights, drawn, rects)
        .expect("certificate layout satisfies the structural invariants");
    assert_eq!(layout.split_count(), 0, "certificate layout must have no split");
    if let Threshold::Excess(bound) = &instance.threshold {
        assert!(layout.excess_area() <= *bound, "certificate layout exceeds the bound");
    }
    Ok(layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;

    pub fn example_triples() -> Vec<[i64; 3]> {
        vec![[2, 1, 3], [3, 4, 5], [1, 4, 5], [2, 4, 1], [5, 2, 3]]
    }

    fn example_instance() -> ReductionInstance {
        let inst = BetweennessInstance::new(example_triples()).unwrap();
        betweenness_to_table(&inst, &from_i64(15)).unwrap()
    }

    /// 6-vertex cubic graph containing the Hamiltonian path a-b-c-d-e-f.
    pub fn example_cubic_graph() -> CubicGraph {
        CubicGraph::from_edge_list("a b\nb c\nc d\nd e\ne f\na f\nb f\na d\nc e\n").unwrap()
    }

    fn k4() -> CubicGraph {
        CubicGraph::from_edge_list("a b\na c\na d\nb c\nb d\nc d\n").unwrap()
    }

    #[test]
    fn betweenness_table_shape_and_weights() {
        let gen = example_instance();
        let t = &gen.table;
        assert_eq!((t.rows(), t.cols()), (5, 21));
        // Line cells weigh eps = 1/30.
        assert_eq!(*t.weight(0, 0), ratio(1, 30));
        assert_eq!(*t.weight(4, 20), ratio(1, 30));
        // Triple 1 = (2,1,3): element 1 (row 0) is the centre element.
        assert_eq!(*t.weight(0, 1), ratio(5, 2));
        assert_eq!(*t.weight(0, 2), from_i64(10));
        assert_eq!(*t.weight(0, 3), ratio(5, 2));
        // Element 2 (row 1) is the left element.
        assert_eq!(*t.weight(1, 1), from_i64(10));
        assert_eq!(*t.weight(1, 2), ratio(5, 2));
        assert_eq!(*t.weight(1, 3), ratio(5, 2));
        // Element 3 (row 2) is the right element.
        assert_eq!(*t.weight(2, 1), ratio(5, 2));
        assert_eq!(*t.weight(2, 2), ratio(5, 2));
        assert_eq!(*t.weight(2, 3), from_i64(10));
        // Element 4 (row 3) is a non-member: (5w/12, w/6, 5w/12).
        assert_eq!(*t.weight(3, 1), ratio(25, 4));
        assert_eq!(*t.weight(3, 2), ratio(5, 2));
        assert_eq!(*t.weight(3, 3), ratio(25, 4));
        // Threshold r*c*w/12 = 125/4.
        assert_eq!(gen.threshold, Threshold::Excess(ratio(125, 4)));
        assert!(t.has_equal_row_sums());
    }

    #[test]
    fn betweenness_rejects_small_w() {
        let inst = BetweennessInstance::new(example_triples()).unwrap();
        assert!(matches!(
            betweenness_to_table(&inst, &from_i64(14)),
            Err(ReductionError::WTooSmall(_))
        ));
    }

    #[test]
    fn betweenness_rejects_degenerate_triples() {
        assert!(BetweennessInstance::new(vec![[1, 1, 2]; 5]).is_err());
        assert!(BetweennessInstance::new(vec![[1, 2, 3]]).is_err());
    }

    #[test]
    fn certificate_checker_on_triples() {
        assert!(check_betweenness_certificate(&example_triples(), &[3, 1, 4, 2, 5]));
        assert!(!check_betweenness_certificate(&[[1, 2, 3]], &[2, 1, 3]));
        assert!(check_betweenness_certificate(&[[1, 2, 3]], &[1, 2, 3]));
    }

    #[test]
    fn certificate_layout_meets_betweenness_bound() {
        let gen = example_instance();
        let source = match &gen.source {
            ReductionSource::Betweenness(i) => i.clone(),
            _ => unreachable!(),
        };
        let order = source.row_order(&[3, 1, 4, 2, 5]).unwrap();
        let layout = certificate_layout(&gen, &order).unwrap();
        assert_eq!(layout.split_count(), 0);
        assert!(layout.excess_area() <= ratio(125, 4));
    }

    #[test]
    fn certificate_layout_rejects_bad_order() {
        let gen = example_instance();
        let order = RowOrder::new(vec![0, 1, 2, 3, 4], 5).unwrap();
        // (2,1,3) wants element 1 between 2 and 3; ascending order violates it.
        assert!(matches!(
            certificate_layout(&gen, &order),
            Err(ReductionError::CertificateInvalid)
        ));
    }

    #[test]
    fn unsatisfiable_instance_detected() {
        // Contradictory demands on 1,2,3 plus padding triples to reach the
        // regime: (1,2,3) and (2,1,3) cannot both hold.
        let triples = vec![[1, 2, 3], [2, 1, 3], [1, 4, 5], [2, 4, 5], [3, 4, 5], [1, 2, 5]];
        let inst = BetweennessInstance::new(triples).unwrap();
        assert_eq!(betweenness_satisfiable(&inst), None);
        let sat = BetweennessInstance::new(example_triples()).unwrap();
        let order = betweenness_satisfiable(&sat).unwrap();
        assert!(check_betweenness_certificate(sat.triples(), &order));
    }

    #[test]
    fn hampath_table_shape_and_weights() {
        let gen = hampath_to_table(&example_cubic_graph(), &from_i64(12)).unwrap();
        let t = &gen.table;
        assert_eq!((t.rows(), t.cols()), (6, 27));
        assert_eq!(gen.threshold, Threshold::Splits(20));
        assert!(t.has_equal_row_sums());
        // Edge a-b occupies columns 0..3; row a is an endpoint: (7, 1, 4).
        assert_eq!(*t.weight(0, 0), from_i64(7));
        assert_eq!(*t.weight(0, 1), from_i64(1));
        assert_eq!(*t.weight(0, 2), from_i64(4));
        // Row c is not an endpoint of a-b: (4, 1, 7).
        assert_eq!(*t.weight(2, 0), from_i64(4));
        assert_eq!(*t.weight(2, 1), from_i64(1));
        assert_eq!(*t.weight(2, 2), from_i64(7));
    }

    #[test]
    fn k4_instance() {
        let gen = hampath_to_table(&k4(), &from_i64(12)).unwrap();
        assert_eq!((gen.table.rows(), gen.table.cols()), (4, 18));
        assert_eq!(gen.threshold, Threshold::Splits(12));
    }

    #[test]
    fn rejects_non_cubic_graph() {
        let err = CubicGraph::from_edge_list("a b\nb c\nc a\n").unwrap_err();
        assert!(matches!(err, ReductionError::NotCubic(_)));
    }

    #[test]
    fn hampath_certificate_checker() {
        let g = example_cubic_graph();
        let order = g
            .row_order(&["a", "b", "c", "d", "e", "f"].map(String::from))
            .unwrap();
        assert!(check_hampath_certificate(&g, &order));
        let not_path = g
            .row_order(&["a", "c", "b", "d", "e", "f"].map(String::from))
            .unwrap();
        assert!(!check_hampath_certificate(&g, &not_path)); // a-c is not an edge
        // Complete graph: any order works.
        let k4 = k4();
        let any = k4.row_order(&["d", "b", "a", "c"].map(String::from)).unwrap();
        assert!(check_hampath_certificate(&k4, &any));
    }

    #[test]
    fn hampath_certificate_layout_hits_threshold() {
        let g = example_cubic_graph();
        let gen = hampath_to_table(&g, &from_i64(12)).unwrap();
        let order = g
            .row_order(&["a", "b", "c", "d", "e", "f"].map(String::from))
            .unwrap();
        let layout = certificate_layout(&gen, &order).unwrap();
        assert_eq!(layout.split_count(), 20);
        assert_eq!(layout.excess_area(), Rational::zero());
    }

    #[test]
    fn hamiltonian_path_brute_force() {
        assert!(example_cubic_graph().has_hamiltonian_path());
        assert!(k4().has_hamiltonian_path());
        // Two disjoint K4s: cubic, no Hamiltonian path.
        let disconnected = CubicGraph::from_edge_list(
            "a b\na c\na d\nb c\nb d\nc d\ne f\ne g\ne h\nf g\nf h\ng h\n",
        )
        .unwrap();
        assert!(!disconnected.has_hamiltonian_path());
    }

    #[test]
    fn instance_files_round_trip() {
        let inst = BetweennessInstance::new(example_triples()).unwrap();
        let json = inst.to_json();
        assert_eq!(BetweennessInstance::from_json(&json).unwrap(), inst);
        let g = example_cubic_graph();
        let text = g.to_edge_list();
        assert_eq!(CubicGraph::from_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn generated_tables_round_trip_through_csv() {
        use crate::csv_io::{parse_table_csv, write_table_csv};
        let bet = example_instance().table;
        assert_eq!(parse_table_csv(&write_table_csv(&bet)).unwrap(), bet);
        let ham = hampath_to_table(&example_cubic_graph(), &from_i64(12)).unwrap().table;
        assert_eq!(parse_table_csv(&write_table_csv(&ham)).unwrap(), ham);
    }
}
