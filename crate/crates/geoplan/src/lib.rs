//! Latency-aware planning for geo-distributed storage networks.
//!
//! Given a network's inter-node RTT matrix and a file count k, this
//! crate computes exact latency lower bounds, decides whether a
//! latency-optimal uncoded placement exists (via vertex coloring of the
//! extended nearest-neighbor graph), and synthesizes placements, binary
//! XOR storage codes, or MDS fallbacks, with exact rational latency
//! evaluation throughout.

// Index-based loops over small square matrices stay as-is: the row and
// column positions carry meaning, iterator rewrites obscure them.
#![allow(clippy::needless_range_loop)]

pub mod coloring;
pub mod constructors;
pub mod eval;
pub mod field;
pub mod network;
pub mod nngraph;
pub mod oracle;
pub mod plan;
pub mod rational;
pub mod scheme;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("RTT asymmetric between {0} and {1}")]
    AsymmetricRtt(String, String),
    #[error("nonzero RTT on the diagonal at {0}")]
    NonzeroDiagonal(String),
    #[error("negative RTT between {0} and {1}")]
    NegativeRtt(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("file count k={k} out of range for n={n} nodes")]
    KOutOfRange { k: usize, n: usize },
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("coloring is not proper on the extended graph")]
    NotAProperColoring,
    #[error("coloring has {got} colors, expected {want}")]
    WrongColorCount { got: usize, want: usize },
    #[error("generator matrix is rank deficient")]
    RankDeficient,
    #[error("node {node} has no unique missing file")]
    MissingFileUndefined { node: usize },
    #[error("field too small: need p > {n}, got p = {p}")]
    FieldTooSmall { p: u64, n: usize },
    #[error("file {file} undecodable at node {node}")]
    Undecodable { node: usize, file: usize },
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("coloring search budget exceeded")]
    TimeBudgetExceeded,
    #[error("internal assertion failure: {0}")]
    InternalAssertionFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
