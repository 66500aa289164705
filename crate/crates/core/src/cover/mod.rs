//! Building data of a `Z2^r` cover of the plane branched over reduced curves,
//! the numerical invariants of the cover, its pluricanonical sections split
//! by character, and the intermediate double planes.

mod data;
mod invariants;
mod split;

pub use data::{validate_building_data, BuildingData, RadicalFactor, ValidationReport, Violation};
pub use invariants::{h0_plane, PluriSection};
pub use split::{pullback_split_check, split_component_numerics, DoubleCover, SplitCheck, SplitNumerics};

use thiserror::Error;

use crate::group::{Character, GroupError};
use crate::plane::PlaneError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("invalid building data: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("malformed building data: {0}")]
    Malformed(String),
    #[error("{0} is not an integer")]
    NotIntegral(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("the trivial character {0} has no intermediate double cover")]
    TrivialCharacter(Character),
    #[error("pullback of {0} does not split")]
    NotSplit(String),
    #[error("{0} lies in the branch locus")]
    ConicInBranch(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}
