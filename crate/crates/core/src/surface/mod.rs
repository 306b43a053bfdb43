//! Flat geometry of the assembled surface: sheets, closed-form mark
//! families, slit gluings, geodesics, cone angles and saddle connections.

mod angle;
mod flat;
mod ray;
mod registry;
mod saddle;
mod shape;
mod sheet;
mod trace;

pub use angle::{angle_at, default_probe_radius, ConeReport, ProbeConfig};
pub use flat::{ConeSite, CopyFrame, FlatSurface, GlueMap, POINT_TOL};
pub use registry::GluingRegistry;
pub use saddle::{saddle_connections_from, SaddleConfig, SaddleConnection, SaddleSearch};
pub use trace::{same_point, trace_geodesic, Crossing, GeodesicPath, PathSegment, Termination, TraceConfig};
pub use shape::{family_shape, locate_mark, mark_endpoints, segment_param, side_of, End, MnegTable, Shape};
pub use sheet::{CopyId, Family, MarkRef, SheetId, SheetKind, Side, SurfacePoint};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurfaceError {
    #[error("mark {0} is not admissible")]
    Inadmissible(MarkRef),
    #[error("generator index {0} out of range")]
    UnknownGenerator(usize),
    #[error("copy {0:?} is not materialized")]
    UnknownCopy(CopyId),
    #[error("mark {mark} is unglued: neighbor copy {missing} lies outside the ball")]
    FrontierUnglued { mark: MarkRef, missing: String },
    #[error("mark {0} is glued twice")]
    DuplicateGluing(MarkRef),
    #[error("mark {0} is not a glued slit")]
    NotGlued(MarkRef),
    #[error("point is not in the interior of a slit")]
    NotOnSlit,
    #[error("point is a cone point")]
    AtConePoint,
    #[error("direction is parallel to the slit")]
    Tangential,
    #[error("approach direction disagrees with the recorded slit side")]
    SideMismatch,
    #[error("invalid start: {0}")]
    InvalidStart(String),
    #[error("invalid direction")]
    InvalidDirection,
    #[error("probe radius too large: {0}")]
    ProbeRadius(String),
}
