//! Exact matrix-group machinery: contracting elements, generating sets,
//! Cayley balls and truncated end counts.

mod cayley;
mod contracting;
mod ends;
mod genset;

pub use cayley::{
    assert_no_contracting, enumerate_ball, enumerate_ball_with_budget, word_label, CayleyBall, ContractionReport,
    GroupElement, DEFAULT_VERTEX_BUDGET,
};
pub use contracting::is_contracting;
pub use ends::{ends_estimate, ends_profile, EndsClass, EndsConfig, EndsEstimate, EndsProfile};
pub use genset::GenSet;

use crate::scalar::Rational;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GroupError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("generator {index} has non-positive determinant {det}")]
    Orientation { index: usize, det: Rational },
    #[error("generator {index} is contracting")]
    Contracting { index: usize },
    #[error("empty generating set")]
    Empty,
    #[error("vertex budget {budget} exceeded while enumerating radius {radius} (reached word length {reached})")]
    Truncated {
        budget: usize,
        radius: usize,
        reached: usize,
        partial: Box<CayleyBall>,
    },
    #[error("cut radius {cut} must be below the ball radius {radius}")]
    InvalidCut { cut: usize, radius: usize },
}
