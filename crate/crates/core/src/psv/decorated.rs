use crate::group::GenSet;
use crate::linalg::Mat2;
use crate::scalar::Rational;
use crate::surface::{CopyId, Family, GluingRegistry, MarkRef, MnegTable, SheetId, SheetKind};

use super::placement::{place_negative_marks, PlacementParams};
use super::PsvError;

/// The buffer surface for one generator: two planes glued along `L ↔ L′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BufferSpec {
    pub j: usize,
    pub generator: Mat2<Rational>,
    /// `(sheet, families on it)` for both planes.
    pub sheets: [(SheetKind, Vec<Family>); 2],
}

impl BufferSpec {
    /// Intra-buffer partner of `(kind, family, index)`; `None` if unglued here.
    pub fn partner(&self, kind: SheetKind, family: Family, index: u64) -> Option<(SheetKind, Family, u64)> {
        if kind.generator() != Some(self.j) || !matches!(family, Family::L | Family::Lprime) {
            return None;
        }
        intra_partner(kind, family, index)
    }
}

pub fn build_buffer(j: usize, h_j: &Mat2<Rational>) -> BufferSpec {
    BufferSpec {
        j,
        generator: h_j.clone(),
        sheets: [
            (SheetKind::Buffer1(j), vec![Family::McheckJ(j), Family::L]),
            (SheetKind::Buffer2(j), vec![Family::Lprime, Family::HjCheck(j)]),
        ],
    }
}

fn intra_partner(kind: SheetKind, family: Family, index: u64) -> Option<(SheetKind, Family, u64)> {
    let m = MarkRef {
        sheet: SheetId::new(CopyId(0), kind),
        family,
        index,
    };
    GluingRegistry::intra_partner(&m).map(|p| (p.sheet.kind, p.family, p.index))
}

/// One copy of the decorated surface: base, cover and all buffers, with the
/// intra-copy gluings installed and the marks `h_j m̌^{-j}`, `m^{-j}` left open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedSpec {
    pub generators: GenSet,
    pub placement: PlacementParams,
    pub mneg: MnegTable,
    pub buffers: Vec<BufferSpec>,
}

impl DecoratedSpec {
    pub fn sheets(&self) -> Vec<SheetKind> {
        SheetKind::all(self.generators.len())
    }

    pub fn families(&self, kind: SheetKind) -> Vec<Family> {
        Family::on_sheet(kind, self.generators.len())
    }

    /// Partner inside one copy; `None` for unglued or non-slit marks.
    pub fn partner(&self, kind: SheetKind, family: Family, index: u64) -> Option<(SheetKind, Family, u64)> {
        intra_partner(kind, family, index)
    }
}

pub fn build_decorated(h: &GenSet) -> Result<DecoratedSpec, PsvError> {
    let mneg = place_negative_marks(h)?;
    Ok(DecoratedSpec {
        generators: h.clone(),
        placement: PlacementParams::for_generators(h),
        mneg,
        buffers: h.indices().map(|j| build_buffer(j, h.generator(j))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> DecoratedSpec {
        let h = GenSet::validate(&[Mat2::from_ints(1, 2, 0, 1), Mat2::from_ints(1, 0, 2, 1)]).unwrap();
        build_decorated(&h).unwrap()
    }

    #[test]
    fn buffer_gluings() {
        let b = build_buffer(1, &Mat2::rot90());
        assert_eq!(
            b.partner(SheetKind::Buffer1(1), Family::L, 3),
            Some((SheetKind::Buffer2(1), Family::Lprime, 3))
        );
        assert_eq!(b.partner(SheetKind::Buffer2(1), Family::HjCheck(1), 1), None);
        assert_eq!(b.partner(SheetKind::Buffer1(2), Family::L, 3), None);
    }

    #[test]
    fn decorated_gluings() {
        let s = spec();
        assert_eq!(
            s.partner(SheetKind::Cover, Family::Ttilde1, 1),
            Some((SheetKind::Cover, Family::Ttilde2, 1))
        );
        assert_eq!(
            s.partner(SheetKind::Base, Family::Mj(2), 5),
            Some((SheetKind::Buffer1(2), Family::McheckJ(2), 5))
        );
        assert_eq!(s.partner(SheetKind::Buffer2(1), Family::HjCheck(1), 1), None);
        assert_eq!(s.partner(SheetKind::Base, Family::Mneg(3), 1), None);
        assert_eq!(s.sheets().len(), 2 + 2 * 4);
        assert_eq!(s.buffers.len(), 4);
    }
}
