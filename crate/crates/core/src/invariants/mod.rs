//! Degree, preimage curves, linking numbers and the Hopf invariant of the PL
//! map induced by a cover.

pub mod degree;
pub mod fiber;
pub mod hopf;
pub mod linking;

pub use degree::{degree, degree_at, regular_value_candidates, DegreeResult, Preimage, RegularValue};
pub use fiber::{preimage_curve, preimage_curve_at, CurveComponent, CurvePoint, PLCurve};
pub use hopf::{hopf_invariant, rational_sphere_point, stereographic_project, ConvexSphere, HopfResult, HopfSetup};
pub use linking::{linking_number, Crossing, LinkingResult};

use crate::cover::CoverError;
use crate::simplicial::{Simplex, TopologyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("source pseudomanifold is not closed")]
    NotClosed,
    #[error("image of simplex {simplex:?} meets the interior of the target simplex")]
    ImageNotInBoundary { simplex: Simplex },
    #[error("source has dimension {source_dim}, expected {expected} for {num_sets} sets")]
    DimensionMismatch {
        source_dim: usize,
        expected: usize,
        num_sets: usize,
    },
    #[error("no generic choice found after {attempts} candidates")]
    GenericityExhausted { attempts: usize },
    #[error("source has no geometric realization")]
    NoRealization,
    #[error("realization is not a star-shaped sphere around the origin: {reason}")]
    BadRealization { reason: String },
    #[error("pole lies on the curve")]
    PoleOnCurve,
    #[error("curves intersect")]
    CurvesIntersect,
    #[error("curve is not a union of closed loops")]
    OpenCurve,
    #[error("no valid projection pole found")]
    NoValidPole,
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}
