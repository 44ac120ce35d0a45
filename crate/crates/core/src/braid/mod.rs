//! Braid words, the section `q`, cabling, zig-zags and relation certificates.

pub mod artin;
pub mod section;
pub mod word;
pub mod zigzag;

use thiserror::Error;

use crate::maps::MapError;
use crate::ordinal::OrdinalError;

pub use artin::{artin_diagram_check, ArtinCertificate, Relation};
pub use section::{block_perm, braid_of_quasibijection, cable, q_section};
pub use word::{braid_equal, handle_reduce, is_trivial, BraidWord};
pub use zigzag::{braid_of_zigzag, split_zigzag, Direction, Leg, SplitResult, ZigZag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("generator {generator} out of range for {strands} strands")]
    GeneratorOutOfRange { generator: i32, strands: usize },
    #[error("not a quasibijection of 2-ordinals: {0}")]
    NotQuasibijection(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("diagram broken: {0}")]
    DiagramBroken(String),
    #[error("not block decomposable: {0}")]
    NotBlockDecomposable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("word grew to {length} letters, limit {limit}")]
    ResourceLimit { length: usize, limit: usize },
    #[error("internal invariant broken: {0}")]
    InvariantBroken(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

impl BraidError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::StrandMismatch(..) => "STRAND_MISMATCH",
            Self::LengthMismatch(..) => "LENGTH_MISMATCH",
            Self::GeneratorOutOfRange { .. } => "OUT_OF_RANGE",
            Self::NotQuasibijection(_) => "NOT_QUASIBIJECTION",
            Self::EndpointMismatch(_) => "ENDPOINT_MISMATCH",
            Self::DiagramBroken(_) => "DIAGRAM_BROKEN",
            Self::NotBlockDecomposable(_) => "NOT_BLOCK_DECOMPOSABLE",
            Self::Precondition(_) => "PRECONDITION",
            Self::ResourceLimit { .. } => "RESOURCE_LIMIT",
            Self::InvariantBroken(_) => "INVARIANT_BROKEN",
            Self::Map(e) => e.code(),
            Self::Ordinal(e) => e.code(),
        }
    }
}
