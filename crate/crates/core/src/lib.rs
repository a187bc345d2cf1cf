//! Finite-dimensional models of (central) Yang–Mills moduli on a closed
//! orientable surface.
//!
//! The crate works with representation varieties `Hom_X(Γ, G) ⊆ G^{2ℓ}` of the
//! surface group for a handful of compact groups: points on the level set
//! `r(χ) = exp(X)` of the relator map, their twisted cohomology and
//! stabilizers, component invariants, the symplectic pairing on `H¹`, and the
//! Wilson-loop map of a model connection computed with a Magnus integrator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod holonomy;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod rep;
pub mod strata;
pub mod words;

pub use error::{Error, Result};
pub use lie::{haar_sample, inner, AlgebraElement, GroupElement, GroupSpec};
pub use linalg::LinearMap;
pub use words::{evaluate_word, fox_differential, relator_word, Presentation, Word};
pub use rep::{
    cohomology_dims, component_invariant, goldman_pairing, project_to_level_set, residual,
    CentralCharge, CohomologyDims, ComponentInvariant, ProjectOptions, RepPoint, StratumLabel,
};
