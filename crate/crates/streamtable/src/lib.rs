//! StreamTable: area-proportional visualization of positively weighted tables.
//!
//! A StreamTable partitions a rectangle into horizontal row stripes, each
//! subdivided into axis-aligned cell rectangles whose areas equal the table's
//! cell weights. Columns read as vertical "streams" across the stripes. Two
//! aesthetics matter: *excess area* (bounding box minus total weight) and
//! *splits* (consecutive cells of a stream whose x-intervals do not touch).
//!
//! The crate provides:
//! - exact rational data model and metrics ([`table`], [`layout`]),
//! - the O(rc) greedy layout that is optimal for fixed row order and heights
//!   ([`greedy`]),
//! - row-height initialization and local improvement plus LP/QCQP/GP model
//!   emitters and a solution validator ([`heights`], [`model`]),
//! - exact and heuristic row-permutation search for the NP-hard variable-order
//!   variants ([`search`]),
//! - generators and certificate checkers for the betweenness and
//!   Hamiltonian-path hardness reductions ([`reductions`]),
//! - CSV/JSON/SVG input and output ([`csv_io`], [`json`], [`svg`]).
//!
//! All weights, coordinates, and metrics are exact `BigRational`s; floating
//! point appears only when rendering.

pub mod csv_io;
pub mod greedy;
pub mod heights;
pub mod json;
pub mod layout;
pub mod model;
pub mod rational;
pub mod reductions;
pub mod search;
pub mod svg;
pub mod table;

pub use layout::{CellRect, EmptyRect, Layout, RowHeights};
pub use rational::Rational;
pub use table::{Table, TableError, Weight};
