//! Exact projective plane geometry for arrangements of lines and smooth
//! conics: intersection multiplicities, projective duality, the pencil of
//! conics tangent to four lines, and classification of the singular points of
//! an arrangement as nodes (`A1`) or tacnodes (`A3`).

mod arrangement;
mod conic;
mod curve;
mod intersect;
mod point;

pub use arrangement::{
    classify_arrangement_singularities, AdeType, Arrangement, ArrangementPoint, BezoutEntry, ComponentRef, LocalType,
};
pub use conic::{
    conic_from_matrix, conic_matrix, dual_conic, parametrize_conic, rational_point_on_conic, restriction_is_square, tangent_conic_pencil,
    ConicParametrization, ConicPencil, SquareRestriction,
};
pub use curve::PlaneCurve;
pub use intersect::{component_intersections, intersection_multiplicity};
pub use point::ProjPoint;

use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("point {0} does not lie on {1}")]
    NotOnCurve(String, String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("{0} and {1} share a component through the point: infinite intersection multiplicity")]
    InfiniteMultiplicity(String, String),
    #[error("{0} and {1} have a common component")]
    CommonComponent(String, String),
    #[error("unsupported singularity: {count} branches through {point} ({components})")]
    TriplePoint { point: String, count: usize, components: String },
    #[error("unsupported singularity: {0} and {1} have contact order {2} at {3}")]
    HigherContact(String, String, u32, String),
    #[error("unsupported component {0}: {1}")]
    UnsupportedComponent(String, String),
    #[error("unsupported computation: {0}")]
    Unsupported(String),
    #[error("polynomial vanishes identically on the conic")]
    RamifiedRestriction,
    #[error("Bezout audit failed for {0} and {1}: multiplicities sum to {2}, expected {3}")]
    Bezout(String, String, u32, u32),
    #[error(transparent)]
    Field(#[from] FieldError),
}
