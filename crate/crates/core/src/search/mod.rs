//! Exhaustive search for cover extensions and the Sperner count.

pub mod kkm;
pub mod sperner;

pub use kkm::{
    check_witness, find_extension, recheck, verify_kkm, Certificate, ExtensionProblem, LabelMode,
    PruneRecord, RecheckError, Verdict, DEFAULT_BUDGET,
};
pub use sperner::{sperner_count, SpernerCount};

use crate::cover::CoverError;
use crate::simplicial::{Simplex, TopologyError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("boundary vertex {vertex} has no labels")]
    UnlabelledBoundaryVertex { vertex: VertexId },
    #[error("vertex {vertex} is labelled but not on the boundary")]
    NotBoundaryVertex { vertex: VertexId },
    #[error("boundary cover already has a covering simplex {simplex:?}")]
    BoundaryCovered { simplex: Simplex },
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("vertex {vertex} has label {label} outside its carrier {carrier:?}")]
    NotSperner {
        vertex: VertexId,
        label: usize,
        carrier: Simplex,
    },
    #[error("vertex {vertex} has no carrier")]
    MissingCarrier { vertex: VertexId },
    #[error("carrier {carrier:?} of vertex {vertex} is not a face of the simplex on 0..={dim}")]
    BadCarrier {
        vertex: VertexId,
        carrier: Simplex,
        dim: usize,
    },
    #[error("vertex {vertex} must carry exactly one label")]
    NotSingleton { vertex: VertexId },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}
