use crate::group::{CayleyBall, GenSet};
use crate::surface::{CopyId, Family, FlatSurface, GluingRegistry, MarkRef, SheetId, SheetKind};

use super::decorated::{build_decorated, DecoratedSpec};
use super::PsvError;

/// The surface glued from one copy of the decorated surface per ball vertex.
///
/// Copy `CopyId(v)` is the copy `S_g` for ball vertex `v`.
#[derive(Clone, Debug)]
pub struct AssembledSurface {
    pub ball: CayleyBall,
    pub decorated: DecoratedSpec,
    pub surface: FlatSurface,
    /// Inter-copy marks whose partner copy is outside the ball.
    pub frontier_unglued: Vec<MarkRef>,
}

pub(crate) fn hj_check(copy: usize, j: usize) -> MarkRef {
    MarkRef {
        sheet: SheetId::new(CopyId(copy), SheetKind::Buffer2(j)),
        family: Family::HjCheck(j),
        index: 1,
    }
}

pub(crate) fn m_neg(copy: usize, j: usize) -> MarkRef {
    MarkRef {
        sheet: SheetId::new(CopyId(copy), SheetKind::Base),
        family: Family::Mneg(j),
        index: 1,
    }
}

/// Glues `h_j m̌^{-j}` on `S_g` to `m^{-j}` on `S_{g·h_j}` for every Cayley
/// edge `(g, g·h_j)` in the ball.
pub fn assemble(ball: &CayleyBall, h: &GenSet) -> Result<AssembledSurface, PsvError> {
    if ball.generators() != h {
        return Err(PsvError::MalformedBall("ball was enumerated over a different generating set".into()));
    }
    if h.contains_identity() {
        return Err(PsvError::MalformedBall("the identity is not allowed as a generator".into()));
    }
    let decorated = build_decorated(h)?;
    let mut registry = GluingRegistry::new();
    for (v, j, w) in ball.edges() {
        if w >= ball.len() {
            return Err(PsvError::MalformedBall(format!("edge ({v}, {j}) leaves the ball")));
        }
        registry.insert_inter(hj_check(v, j), m_neg(w, j))?;
    }
    let mut frontier_unglued = Vec::new();
    for v in 0..ball.len() {
        for j in h.indices() {
            if ball.neighbor(v, j).is_none() {
                frontier_unglued.push(hj_check(v, j));
            }
            if ball.neighbor(v, h.inverse_index(j)).is_none() {
                frontier_unglued.push(m_neg(v, j));
            }
        }
    }
    frontier_unglued.sort();
    let surface = FlatSurface::new(h.clone(), ball.vertices().to_vec(), decorated.mneg.clone(), registry)?;
    Ok(AssembledSurface {
        ball: ball.clone(),
        decorated,
        surface,
        frontier_unglued,
    })
}

impl AssembledSurface {
    pub fn copy_of(&self, m: &crate::linalg::Mat2<crate::scalar::Rational>) -> Option<CopyId> {
        self.ball.index_of(m).map(CopyId)
    }

    pub fn num_generators(&self) -> usize {
        self.ball.generators().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::enumerate_ball;
    use crate::linalg::Mat2;

    #[test]
    fn rotation_cycle() {
        let h = GenSet::validate(&[Mat2::rot90()]).unwrap();
        let ball = enumerate_ball(&h, 4).unwrap();
        let s = assemble(&ball, &h).unwrap();
        assert_eq!(s.surface.num_copies(), 4);
        // Four directed edges per generator of the 4-cycle.
        assert_eq!(s.surface.registry().inter_len(), 8);
        assert!(s.frontier_unglued.is_empty());
        let m = hj_check(0, 1);
        let p = s.surface.partner(&m).unwrap();
        assert_eq!(p.family, Family::Mneg(1));
        assert_eq!(s.surface.matrix(p.sheet.copy), &Mat2::rot90());
    }

    #[test]
    fn parallel_holonomy_across_copies() {
        let h = GenSet::validate(&[Mat2::from_ints(1, 2, 0, 1), Mat2::from_ints(1, 0, 2, 1)]).unwrap();
        let ball = enumerate_ball(&h, 2).unwrap();
        let s = assemble(&ball, &h).unwrap();
        for (a, b) in s.surface.registry().inter_pairs() {
            let (ha, hb) = (s.surface.holonomy(&a).unwrap(), s.surface.holonomy(&b).unwrap());
            assert_eq!(ha, hb);
            let upper = if matches!(a.family, Family::HjCheck(_)) { a } else { b };
            assert_eq!(ha, s.surface.matrix(upper.sheet.copy).col1());
        }
        // Frontier copies miss their outward neighbors.
        assert!(!s.frontier_unglued.is_empty());
        for m in &s.frontier_unglued {
            assert_eq!(ball.word_length(m.sheet.copy.0), 2);
        }
    }

    #[test]
    fn identity_generator_is_malformed() {
        let h = GenSet::validate(&[Mat2::identity()]).unwrap();
        let ball = enumerate_ball(&h, 2).unwrap();
        assert!(matches!(assemble(&ball, &h), Err(PsvError::MalformedBall(_))));
    }

    #[test]
    fn frontier_error_names_missing_copy() {
        let h = GenSet::validate(&[Mat2::diag(crate::scalar::int(2), crate::scalar::int(1))]).unwrap();
        let ball = enumerate_ball(&h, 1).unwrap();
        let s = assemble(&ball, &h).unwrap();
        let v = ball.index_of(h.generator(1)).unwrap();
        match s.surface.partner(&hj_check(v, 1)) {
            Err(crate::surface::SurfaceError::FrontierUnglued { missing, .. }) => assert_eq!(missing, "1.1"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
