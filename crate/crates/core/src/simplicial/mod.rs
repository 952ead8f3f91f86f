//! Complexes, orientations, subdivision, prisms and integral homology.

pub mod complex;
pub mod homology;
pub mod manifold;
pub mod prism;
pub mod realization;
pub mod subdivide;

pub use complex::{build_complex, simplex_facets, sphere_facets, SimplicialComplex, Simplex, VertexId};
pub use homology::{homology, homology_with_limit, HomologyReport};
pub use manifold::{
    boundary_of, induced_sign, oriented_from_facets, validate_oriented, validate_pseudomanifold,
    OrientedPseudomanifold,
};
pub use prism::{prism, Layer, Prism};
pub use realization::GeometricRealization;
pub use subdivide::{barycentric_subdivide, Subdivision};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("complex has no facets")]
    EmptyComplex,
    #[error("facet {index} has dimension {found}, expected {expected}")]
    MixedDimension {
        expected: usize,
        found: usize,
        index: usize,
    },
    #[error("duplicate facet {facet:?}")]
    DuplicateFacet { facet: Simplex },
    #[error("facet {facet:?} repeats a vertex")]
    DegenerateFacet { facet: Simplex },
    #[error("dimension {dim} is too low, need at least {need}")]
    DimensionTooLow { dim: usize, need: usize },
    #[error("requested dimension {requested} exceeds complex dimension {dim}")]
    DimensionTooHigh { requested: usize, dim: usize },
    #[error("face {face:?} lies in {count} facets")]
    NotPseudomanifold { face: Simplex, count: usize },
    #[error("facet graph has {components} components")]
    NotStronglyConnected { components: usize },
    #[error("no coherent orientation exists")]
    NonOrientable,
    #[error("orientations do not cancel across face {face:?}")]
    IncoherentOrientation { face: Simplex },
    #[error("expected a closed pseudomanifold, found {faces} boundary faces")]
    HasBoundary { faces: usize },
    #[error("pseudomanifold has empty boundary")]
    EmptyBoundary,
    #[error("pseudomanifold is not closed")]
    NotClosed,
    #[error("{signs} orientation signs given for {facets} facets")]
    SignCountMismatch { facets: usize, signs: usize },
    #[error("orientation sign at index {index} is not +1 or -1")]
    InvalidSign { index: usize },
    #[error("vertex {vertex} is missing")]
    MissingVertex { vertex: VertexId },
    #[error("barycentric subdivision needs a positive count")]
    ZeroSubdivisions,
    #[error("vertex order repeats a vertex")]
    BadVertexOrder,
    #[error("boundary matrix {rows}x{cols} exceeds the limit {limit}")]
    SizeLimit {
        rows: usize,
        cols: usize,
        limit: usize,
    },
    #[error("vertex {vertex} has no coordinates")]
    MissingCoordinates { vertex: VertexId },
    #[error("coordinates of vertex {vertex} have length {found}, expected {expected}")]
    CoordinateLength {
        vertex: VertexId,
        expected: usize,
        found: usize,
    },
    #[error("facet {facet:?} is affinely degenerate")]
    AffinelyDependent { facet: Simplex },
}
