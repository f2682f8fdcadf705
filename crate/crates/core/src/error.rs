//! Error types shared by the lattice, block, Heyting and frame layers.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LatticeError {
    /// The input relation is not a partial order (cycle or antisymmetry failure).
    #[error("not a poset: elements `{0}` and `{1}` are in a cycle")]
    NotAPoset(String, String),
    /// Some pair has no unique greatest lower / least upper bound.
    #[error("not a lattice: pair (`{x}`, `{y}`) has no unique {kind}")]
    NotALattice { x: String, y: String, kind: BoundKind },
    /// The supplied orthocomplement map violates one of its laws.
    #[error("bad orthocomplement: {0}")]
    BadPerp(String),
    /// An enumeration exceeded the configured budget.
    #[error("enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    /// Document-level problems (unknown labels, duplicate labels, bad shape).
    #[error("document error: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Glb,
    Lub,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundKind::Glb => write!(f, "greatest lower bound"),
            BoundKind::Lub => write!(f, "least upper bound"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BlockError {
    #[error("lattice is not orthomodular; block decomposition is undefined")]
    NotOrthomodular,
    #[error("block search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    /// Two blocks disagree about an operation on a shared pair.
    #[error("amalgamation conflict: blocks disagree at (`{x}`, `{y}`): {detail}")]
    AmalgamationConflict { x: String, y: String, detail: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HeytingError {
    /// Sections drawn over different block posets were combined.
    #[error("sections belong to different block posets")]
    MixedBase,
    #[error("section enumeration budget of {budget} exceeded ({needed} needed)")]
    BudgetExceeded { budget: u64, needed: u64 },
    #[error("element `{0}` does not belong to block `{1}`")]
    NotInBlock(String, String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("frame enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
}
