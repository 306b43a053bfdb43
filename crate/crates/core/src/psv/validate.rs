use serde::Serialize;

use crate::scalar::{Rational, Scalar};
use crate::surface::{Family, FlatSurface, MarkRef, SheetId, SheetKind, SurfaceError};

use super::AssembledSurface;

/// Default number of indices checked per infinite family.
pub const DEFAULT_INDEX_BOUND: u64 = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingViolation {
    pub mark: MarkRef,
    pub partner: MarkRef,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingReport {
    pub index_bound: u64,
    pub pairs_checked: usize,
    pub violations: Vec<GluingViolation>,
}

impl GluingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks one pair: partner involution, exact parallelism and equal length
/// of the developed holonomies. The sign of the holonomy is irrelevant.
fn check_pair(s: &FlatSurface, a: &MarkRef, b: &MarkRef) -> Result<Option<String>, SurfaceError> {
    if s.partner(b)? != *a {
        return Ok(Some("partner is not an involution".into()));
    }
    let (ha, hb) = (s.holonomy(a)?, s.holonomy(b)?);
    if ha.cross(&hb) != Rational::from_int(0) {
        return Ok(Some(format!("holonomies {ha} and {hb} are not parallel")));
    }
    if ha.norm_sq() != hb.norm_sq() {
        return Ok(Some(format!("holonomies {ha} and {hb} differ in length")));
    }
    if ha.norm_sq() == Rational::from_int(0) {
        return Ok(Some("degenerate mark".into()));
    }
    Ok(None)
}

/// Exhaustive gluing check: intra-copy pairs up to `index_bound` per family
/// on every copy, and every inter-copy pair.
pub fn validate_gluings(s: &AssembledSurface, index_bound: u64) -> Result<GluingReport, SurfaceError> {
    let surface = &s.surface;
    let j = surface.num_generators();
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    let mut check = |a: MarkRef, b: MarkRef| -> Result<(), SurfaceError> {
        pairs_checked += 1;
        if let Some(reason) = check_pair(surface, &a, &b)? {
            violations.push(GluingViolation {
                mark: a,
                partner: b,
                reason,
            });
        }
        Ok(())
    };
    for copy in surface.copy_ids() {
        for kind in SheetKind::all(j) {
            for family in Family::on_sheet(kind, j) {
                if !family.is_slit() || family.is_inter_copy() {
                    continue;
                }
                let top = if family.is_singleton() { 1 } else { index_bound };
                for index in 1..=top {
                    let m = MarkRef {
                        sheet: SheetId::new(copy, kind),
                        family,
                        index,
                    };
                    let p = surface.partner(&m)?;
                    if m < p {
                        check(m, p)?;
                    }
                }
            }
        }
    }
    for (a, b) in surface.registry().inter_pairs() {
        check(a, b)?;
    }
    Ok(GluingReport {
        index_bound,
        pairs_checked,
        violations,
    })
}
