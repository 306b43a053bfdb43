use std::collections::BTreeMap;

use super::sheet::{Family, MarkRef, SheetId, SheetKind};
use super::SurfaceError;

/// The pairing of marks that defines the surface.
///
/// Intra-copy pairs follow fixed rules and are never stored; inter-copy
/// pairs are stored in both directions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GluingRegistry {
    inter: BTreeMap<MarkRef, MarkRef>,
}

impl GluingRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Partner under the fixed intra-copy rules, if `m` is glued inside its copy.
    pub fn intra_partner(m: &MarkRef) -> Option<MarkRef> {
        let copy = m.sheet.copy;
        let on = |kind: SheetKind, family: Family, index: u64| MarkRef {
            sheet: SheetId::new(copy, kind),
            family,
            index,
        };
        let i = m.index;
        Some(match (m.sheet.kind, m.family) {
            (SheetKind::Base, Family::M) => on(SheetKind::Cover, Family::Mtilde, i),
            (SheetKind::Cover, Family::Mtilde) => on(SheetKind::Base, Family::M, i),
            (SheetKind::Cover, Family::Ttilde1) => on(SheetKind::Cover, Family::Ttilde2, 1),
            (SheetKind::Cover, Family::Ttilde2) => on(SheetKind::Cover, Family::Ttilde1, 1),
            (SheetKind::Base, Family::Mj(j)) => on(SheetKind::Buffer1(j), Family::McheckJ(j), i),
            (SheetKind::Buffer1(j), Family::McheckJ(_)) => on(SheetKind::Base, Family::Mj(j), i),
            (SheetKind::Buffer1(j), Family::L) => on(SheetKind::Buffer2(j), Family::Lprime, i),
            (SheetKind::Buffer2(j), Family::Lprime) => on(SheetKind::Buffer1(j), Family::L, i),
            _ => return None,
        })
    }

    /// Records an inter-copy pair. Both marks must be inter-copy marks and
    /// not yet glued.
    pub fn insert_inter(&mut self, a: MarkRef, b: MarkRef) -> Result<(), SurfaceError> {
        for m in [&a, &b] {
            m.check()?;
            if !m.family.is_inter_copy() {
                return Err(SurfaceError::Inadmissible(*m));
            }
            if self.inter.contains_key(m) {
                return Err(SurfaceError::DuplicateGluing(*m));
            }
        }
        if a == b {
            return Err(SurfaceError::Inadmissible(a));
        }
        self.inter.insert(a, b);
        self.inter.insert(b, a);
        Ok(())
    }

    /// The unique partner of `m`.
    pub fn partner(&self, m: &MarkRef) -> Result<MarkRef, SurfaceError> {
        m.check()?;
        if !m.family.is_slit() {
            return Err(SurfaceError::NotGlued(*m));
        }
        if let Some(p) = Self::intra_partner(m) {
            return Ok(p);
        }
        self.inter.get(m).copied().ok_or(SurfaceError::FrontierUnglued {
            mark: *m,
            missing: "?".into(),
        })
    }

    pub fn is_glued(&self, m: &MarkRef) -> bool {
        self.partner(m).is_ok()
    }

    /// Inter-copy pairs, each reported once as `(a, b)` with `a < b`.
    pub fn inter_pairs(&self) -> impl Iterator<Item = (MarkRef, MarkRef)> + '_ {
        self.inter.iter().filter(|(a, b)| a < b).map(|(a, b)| (*a, *b))
    }

    pub fn inter_len(&self) -> usize {
        self.inter.len() / 2
    }
}
