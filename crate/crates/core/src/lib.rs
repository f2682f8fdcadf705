//! Exact, desk-scale machinery for contextual quantum logic: finite
//! orthomodular lattices, their Boolean block decompositions, the Heyting
//! algebra of monotone sections over a block poset with its nonlocal
//! implication, and ideal / Bruns–Lakser completions with frame points.
//!
//! Everything is exact: elements are dense ids, orders are bit matrices,
//! and all law checks are exhaustive. Values are immutable after
//! construction, so operations may run concurrently on shared inputs.

pub mod bitset;
pub mod blocks;
pub mod doc;
pub mod error;
pub mod frames;
pub mod heyting;
pub mod lattice;
pub mod samples;

pub use bitset::Bits;
pub use blocks::{
    amalgamate, enumerate_blocks, find_isomorphism, verify_partial_boolean, BlockMode,
    BlockPoset, BooleanBlock, PartialBooleanReport,
};
pub use error::{BlockError, FrameError, HeytingError, LatticeError};
pub use frames::{
    bruns_lakser, check_frame, downset_frame_of_sections, frame_points, ideal_completion,
    BrunsLakser, DownsetFrame, FrameCheck, FramePoint,
};
pub use heyting::{bohrify, sasaki_report, BohrAlgebra, MonotoneSection, SasakiReport};
pub use lattice::{ElemId, FiniteOrtholattice, StructureReport};
