//! The construction itself: decorated surface, affine copies, assembly over
//! a Cayley ball, and the checks run on the result.

mod assemble;
mod census;
mod decorated;
mod placement;
mod separation;
mod validate;
mod veech;

pub use assemble::{assemble, AssembledSurface};
pub use census::{census_profile, census_table, genus_witness, genus_witness_index, surface_ends_census, GenusWitness, SurfaceEndsCensus};
pub use decorated::{build_buffer, build_decorated, BufferSpec, DecoratedSpec};
pub use placement::{place_negative_marks, PlacementParams};
pub use separation::{check_separation, default_region, SeparationReport, SEPARATION_THRESHOLD};
pub use validate::{validate_gluings, GluingReport, GluingViolation, DEFAULT_INDEX_BOUND};
pub use veech::{
    default_marker_length, marker_set, singularity_marker_check, veech_constraint_check, veech_relabel_check, MarkerReport,
    RelabelReport,
};

use crate::group::GroupError;
use crate::surface::SurfaceError;

#[derive(Debug, Clone, thiserror::Error)]
pub enum PsvError {
    #[error("placement error: {0}")]
    Placement(String),
    #[error("malformed ball: {0}")]
    MalformedBall(String),
    #[error("region error: {0}")]
    Region(String),
    #[error("cut radius {cut} must be below the ball radius {radius}")]
    InvalidCut { cut: usize, radius: usize },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("element is not in the ball")]
    NotInBall,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}
