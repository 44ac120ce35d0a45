//! Quasibijection categories, Milgram posets and their homology.

pub mod category;
pub mod homology;

use thiserror::Error;

use crate::maps::MapError;
use crate::ordinal::OrdinalError;

pub use category::{
    assert_strict, build_j, build_q, category_to_dot, connected_components, find_isomorphism, poset_to_dot,
    quotient_j, CategoryGraph, CategoryIso, LabeledStructure, MilgramPoset, Morphism, StrictnessCertificate,
};
pub use homology::{
    homology, invariant_factors, nerve, order_complex, smith_normal_form, HomologyGroup, HomologyResult,
    SimplicialComplexData, SmithForm,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasiCatError {
    #[error("{what} exceed limit {limit}")]
    ResourceLimit { what: &'static str, limit: u64 },
    #[error("non-identity endomorphism {morphism} on object {object}")]
    EndoFound { object: usize, morphism: usize },
    #[error("strictness required: {0}")]
    StrictnessRequired(Box<QuasiCatError>),
    #[error("isomorphism check failed: {0}")]
    IsoCheckFailed(String),
    #[error("antisymmetry violated by elements {0} and {1}")]
    AntisymmetryViolation(usize, usize),
    #[error("internal invariant broken: {0}")]
    InvariantBroken(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

impl QuasiCatError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::ResourceLimit { .. } => "RESOURCE_LIMIT",
            Self::EndoFound { .. } => "ENDO_FOUND",
            Self::StrictnessRequired(_) => "STRICTNESS_REQUIRED",
            Self::IsoCheckFailed(_) => "ISO_CHECK_FAILED",
            Self::AntisymmetryViolation(..) => "ANTISYMMETRY_VIOLATION",
            Self::InvariantBroken(_) => "INVARIANT_BROKEN",
            Self::Map(e) => e.code(),
            Self::Ordinal(e) => e.code(),
        }
    }
}
