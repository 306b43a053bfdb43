use serde::Serialize;

use crate::group::GroupElement;
use crate::linalg::{Mat2, Vec2};
use crate::scalar::{Rational, Scalar};
use crate::surface::{saddle_connections_from, ConeSite, CopyId, Family, MarkRef, SaddleConfig};

use super::assemble::{hj_check, m_neg};
use super::{AssembledSurface, PsvError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelabelReport {
    pub element: String,
    pub checked: usize,
    /// Pairs whose image copies are not both in the ball.
    pub unverifiable: usize,
    pub failures: Vec<(MarkRef, MarkRef)>,
}

impl RelabelReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that relabeling copies by `g ↦ g̃·g` maps the inter-copy gluings
/// into themselves. Intra-copy rules do not depend on the copy.
pub fn veech_relabel_check(s: &AssembledSurface, element: &Mat2<Rational>) -> Result<RelabelReport, PsvError> {
    let v = s.ball.index_of(element).ok_or(PsvError::NotInBall)?;
    let registry = s.surface.registry();
    let image = |c: CopyId| s.ball.index_of(&(element * s.surface.matrix(c)));
    let mut report = RelabelReport {
        element: s.ball.vertex(v).word_label(),
        checked: 0,
        unverifiable: 0,
        failures: Vec::new(),
    };
    for (a, b) in registry.inter_pairs() {
        let (upper, lower) = if matches!(a.family, Family::HjCheck(_)) { (a, b) } else { (b, a) };
        let j = upper.family.generator().expect("inter-copy marks carry a generator");
        match (image(upper.sheet.copy), image(lower.sheet.copy)) {
            (Some(u), Some(w)) => {
                report.checked += 1;
                let (ua, wb) = (hj_check(u, j), m_neg(w, j));
                if registry.partner(&ua).ok() != Some(wb) {
                    report.failures.push((ua, wb));
                }
            }
            _ => report.unverifiable += 1,
        }
    }
    Ok(report)
}

/// Outgoing saddle-connection marker at `0̃_g`: `g e₂`, `−g e₂` and `3 g e₁`.
pub fn marker_set(g: &Mat2<Rational>) -> Vec<Vec2<Rational>> {
    let mut out = vec![g.col2(), -g.col2(), g.col1().scale(&Rational::from_int(3))];
    out.sort();
    out
}

/// The only enumerated `g` that may be the derivative of an affine
/// diffeomorphism with derivative class `d`: its marker at `0̃_g` must be the
/// image under `d` of the marker at `0̃_Id`, with the same orientation.
pub fn veech_constraint_check(s: &AssembledSurface, d: &Mat2<Rational>) -> Result<Option<GroupElement>, PsvError> {
    let det = d.det();
    if det <= Rational::from_int(0) {
        return Err(PsvError::InvalidMatrix(format!("{d} must have positive determinant")));
    }
    let mut image: Vec<Vec2<Rational>> = marker_set(&Mat2::identity()).iter().map(|v| d * v).collect();
    image.sort();
    Ok(s
        .ball
        .vertices()
        .iter()
        .find(|g| g.matrix.det() > Rational::from_int(0) && marker_set(&g.matrix) == image)
        .cloned())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkerReport {
    pub copy: CopyId,
    pub l_max: f64,
    pub holonomies: Vec<Vec2<Rational>>,
    /// Every holonomy points along `±g e₁` or `±g e₂`.
    pub directions_ok: bool,
    /// Both `g e₂` and `−g e₂` occur.
    pub vertical_realized: bool,
    pub stabilized: bool,
    /// A trace ran out of budget, so the search says nothing.
    pub inconclusive: bool,
    pub passed: bool,
}

/// Default search length `1.5 · max(‖g e₁‖, ‖g e₂‖)`.
pub fn default_marker_length(g: &Mat2<Rational>) -> f64 {
    1.5 * g.col1().to_f64().norm().max(g.col2().to_f64().norm())
}

/// Saddle connections from the branch point `0̃_g` lie along the frame of `g`.
pub fn singularity_marker_check(s: &AssembledSurface, copy: CopyId, l_max: Option<f64>) -> Result<MarkerReport, PsvError> {
    s.surface.frame(copy)?;
    let g = s.surface.matrix(copy).clone();
    let l_max = l_max.unwrap_or_else(|| default_marker_length(&g));
    let start = s.surface.cone_point(&ConeSite::CoverOrigin(copy))?;
    let search = saddle_connections_from(&s.surface, &start, &SaddleConfig::new(l_max))?;
    let holonomies: Vec<Vec2<Rational>> = search.connections.iter().map(|c| c.holonomy.clone()).collect();
    let frame = [g.col1(), -g.col1(), g.col2(), -g.col2()];
    let directions_ok = holonomies.iter().all(|h| frame.iter().any(|f| f.same_direction(h)));
    let vertical_realized = [g.col2(), -g.col2()]
        .iter()
        .all(|f| holonomies.iter().any(|h| f.same_direction(h)));
    let inconclusive = search.budget_exhausted;
    Ok(MarkerReport {
        copy,
        l_max,
        holonomies,
        directions_ok,
        vertical_realized,
        stabilized: search.stabilized,
        inconclusive,
        passed: !inconclusive && directions_ok && vertical_realized,
    })
}
