//! Concrete realization of contextual quantum logic over M_n(ℂ):
//! projections with their exact meet/join calculus, Rickart supports,
//! commutative contexts and their refinement poset, Gelfand-spectrum opens,
//! the external Bohr spectrum, daseinisation, density states, trace
//! measures and the Kripke/pairing semantics.
//!
//! Floating complex arithmetic with explicit thresholds throughout; see
//! [`cmatrix::Tol`]. All values are immutable after construction.

pub mod bridge;
pub mod cmatrix;
pub mod context;
pub mod doc;
pub mod error;
pub mod proj;
pub mod semantics;
pub mod spectrum;

pub use bridge::{powerset_isomorphic, ContextBohr};
pub use cmatrix::{CMat, Tol};
pub use context::{context_generate, context_intersection, relative_rickart_check, rickart_in_context, Context, ContextPoset};
pub use error::MatrixError;
pub use proj::{
    commutes, diag_projection, iterated_join, meet_join_via_supports, ortho_sup, positive_part,
    proj_join, proj_meet, proj_meet_iterate, proj_order, proj_perp, rickart_projections,
    support_equivalence, support_positive, support_zero, MatProjection,
};
pub use semantics::{
    classical_truth, kripke_valuation, measure_valuation_bridge, pairing, DensityState,
    MeasureBridge, UpperSet,
};
pub use spectrum::{external_spectrum, spectral_open, spectrum_relations, SpectralOpen, SpectrumFrame};
