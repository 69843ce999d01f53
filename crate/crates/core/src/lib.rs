//! Succinct representations of labeled ordered trees.
//!
//! The crate stores an `n`-node tree with labels from `[1, σ]` in roughly
//! `n·H₀ + 2n` bits plus measured redundancy and answers the twelve labeled
//! queries (label, depth, level_ancestor, parent, deg, child_rank,
//! child_select, num_descendants, preorder/postorder rank and select) without
//! materializing per-label trees. The building blocks are exposed as their own
//! modules:
//!
//! - [`bitvec`]: binary rank/select dictionaries, Elias-Fano compressed when
//!   sparse.
//! - [`sequence`]: rank/select/access over `[1, σ]` alphabets with zero-order
//!   entropy accounting.
//! - [`bp_tree`]: balanced-parenthesis ordinal trees.
//! - [`weighted_tree`]: ordinal trees with small per-node weight vectors and
//!   prefix/search/argmax queries over the paren-tuple string.
//! - [`decomposition`]: tree covers with two-interval components and the
//!   quotient macro tree.
//! - [`labeled_index`]: the assembled index.
//! - [`oracle`]: brute-force reference implementation and instance generators
//!   used by the verification suites.
//!
//! With the default `parallel` feature, index construction and the
//! verification driver distribute independent work with rayon; disabling the
//! feature keeps a purely sequential build with identical output.

pub mod bitvec;
pub mod bp_tree;
pub mod decomposition;
pub mod labeled_index;
pub mod oracle;
pub mod sequence;
pub mod serial;
pub mod weighted_tree;

pub use bitvec::BitVector;
pub use bp_tree::OrdinalTree;
pub use decomposition::{decompose, macro_tree, verify_decomposition, Decomposition, MacroTree};
pub use labeled_index::{IndexConfig, LabeledTreeIndex};
pub use oracle::PlainTree;
pub use sequence::LabeledSequence;
pub use weighted_tree::{StepFunction, WeightedTree};

/// Node identifier: the node's 1-based preorder rank in its tree.
pub type NodeId = usize;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what}: index {got} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("no such occurrence: requested {j}, only {available} available")]
    NoSuchOccurrence { j: usize, available: usize },
    #[error("unbalanced parentheses at position {pos}")]
    Unbalanced { pos: usize },
    #[error("label {label} out of range [1,{sigma}]")]
    LabelOutOfRange { label: u32, sigma: u32 },
    #[error("weight {value} exceeds bound {bound}")]
    WeightOutOfRange { value: u64, bound: u64 },
    #[error("label {label} is not frequent")]
    NotFrequent { label: u32 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
