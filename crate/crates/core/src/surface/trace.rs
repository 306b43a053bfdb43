use crate::linalg::Vec2;

use super::flat::{FlatSurface, POINT_TOL};
use super::ray::{next_event, Hit};
use super::sheet::{MarkRef, SheetId, SheetKind, SurfacePoint};
use super::SurfaceError;

/// Smallest local displacement accepted between two events.
pub(crate) const MIN_STEP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceConfig {
    /// Developed length at which the trace stops.
    pub max_len: f64,
    /// Maximum number of crossings before giving up.
    pub event_budget: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            max_len: 10.0,
            event_budget: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Termination {
    MaxLength,
    ConePoint(SurfacePoint),
    Budget,
    /// The path reached a mark whose partner copy lies outside the ball.
    Frontier(MarkRef),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Crossing {
    Slit { from: MarkRef, to: MarkRef },
    BranchCut { from_fold: u8, to_fold: u8 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathSegment {
    pub sheet: SheetId,
    pub fold: u8,
    pub from: Vec2<f64>,
    pub to: Vec2<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicPath {
    /// Unit developed direction, shared by every segment.
    pub direction: Vec2<f64>,
    pub segments: Vec<PathSegment>,
    /// `crossings[k]` links `segments[k]` to `segments[k + 1]`.
    pub crossings: Vec<Crossing>,
    pub total_length: f64,
    pub termination: Termination,
}

impl GeodesicPath {
    /// Final position, on the sheet of the last segment.
    pub fn end_point(&self) -> SurfacePoint {
        let last = self.segments.last().expect("paths have at least one segment");
        SurfacePoint::new(last.sheet, last.to.clone()).on_fold(last.fold)
    }
}

fn fold_add(fold: u8, delta: i8) -> u8 {
    (fold as i8 + delta).rem_euclid(3) as u8
}

/// Traces the straight line from `start` in the developed direction
/// `direction` across slits and the branch cut.
pub fn trace_geodesic(
    surface: &FlatSurface,
    start: &SurfacePoint,
    direction: &Vec2<f64>,
    config: &TraceConfig,
) -> Result<GeodesicPath, SurfaceError> {
    surface.check_sheet(start.sheet)?;
    if start.fold >= start.sheet.kind.folds() {
        return Err(SurfaceError::InvalidStart(format!("fold {} on {}", start.fold, start.sheet)));
    }
    let n = direction.norm();
    if !(n.is_finite() && n > 0.0) {
        return Err(SurfaceError::InvalidDirection);
    }
    if surface.is_cone_point(start) {
        return Err(SurfaceError::InvalidStart("start is a cone point".into()));
    }
    let u = direction.scale(&(1.0 / n));
    let mut point = start.clone();
    let mut segments = Vec::new();
    let mut crossings = Vec::new();

    // A point on a slit bank whose direction points across the slit passes
    // through it before moving.
    if let Some((m, _)) = surface.slit_at(&point) {
        if let (Some(bank), Some(towards)) = (point.slit_side, surface.side_towards(&m, &u)?) {
            if bank != towards {
                let crossed = surface.cross_slit(&point, &u)?;
                segments.push(PathSegment {
                    sheet: point.sheet,
                    fold: point.fold,
                    from: point.pos.clone(),
                    to: point.pos.clone(),
                });
                crossings.push(Crossing::Slit {
                    from: m,
                    to: surface.partner(&m)?,
                });
                point = crossed;
            }
        }
    }
    // Points on the branch cut belong to the upper half-plane.
    if point.sheet.kind == SheetKind::Cover && point.pos.y == 0.0 && point.pos.x < 0.0 {
        let local = surface.frame(point.sheet.copy)?.inverse_f.apply(&u);
        if local.y < 0.0 {
            let to = fold_add(point.fold, 1);
            segments.push(PathSegment {
                sheet: point.sheet,
                fold: point.fold,
                from: point.pos.clone(),
                to: point.pos.clone(),
            });
            crossings.push(Crossing::BranchCut {
                from_fold: point.fold,
                to_fold: to,
            });
            point.fold = to;
        }
    }

    let mut travelled = 0.0;
    let mut events = 0usize;
    let termination = loop {
        if events >= config.event_budget {
            break Termination::Budget;
        }
        let frame = surface.frame(point.sheet.copy)?;
        let d = frame.inverse_f.apply(&u);
        let dn = d.norm();
        let remaining = config.max_len - travelled;
        let ev = next_event(surface, point.sheet, point.fold, &point.pos, &d, MIN_STEP / dn, remaining);
        let Some(ev) = ev else {
            let to = &point.pos + &d.scale(&remaining);
            segments.push(PathSegment {
                sheet: point.sheet,
                fold: point.fold,
                from: point.pos.clone(),
                to,
            });
            travelled = config.max_len;
            break Termination::MaxLength;
        };
        segments.push(PathSegment {
            sheet: point.sheet,
            fold: point.fold,
            from: point.pos.clone(),
            to: ev.at.clone(),
        });
        travelled += ev.s;
        events += 1;
        match ev.hit {
            Hit::Cone(_) => {
                break Termination::ConePoint(SurfacePoint::new(point.sheet, ev.at).on_fold(point.fold));
            }
            Hit::Cut(delta) => {
                let to = fold_add(point.fold, delta);
                crossings.push(Crossing::BranchCut {
                    from_fold: point.fold,
                    to_fold: to,
                });
                point = SurfacePoint::new(point.sheet, ev.at).on_fold(to);
            }
            Hit::Slit(m) => {
                let map = match surface.glue_map(&m) {
                    Ok(map) => map,
                    Err(SurfaceError::FrontierUnglued { .. }) => break Termination::Frontier(m),
                    Err(e) => return Err(e),
                };
                crossings.push(Crossing::Slit { from: m, to: map.to });
                point = SurfacePoint::new(map.to.sheet, map.apply(&ev.at));
            }
        }
    };
    Ok(GeodesicPath {
        direction: u,
        segments,
        crossings,
        total_length: travelled,
        termination,
    })
}

/// Whether two points agree up to the float identity tolerance.
pub fn same_point(a: &SurfacePoint, b: &SurfacePoint, tol: f64) -> bool {
    a.sheet == b.sheet && a.fold == b.fold && a.pos.dist(&b.pos) <= tol.max(POINT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{CopyId, Family, SurfaceError};
    use crate::testutil::{rot90, sanov, surface};
    use rand::{Rng, SeedableRng};

    fn base(copy: usize) -> SheetId {
        SheetId::new(CopyId(copy), SheetKind::Base)
    }

    fn cover(copy: usize) -> SheetId {
        SheetId::new(CopyId(copy), SheetKind::Cover)
    }

    fn cfg(max_len: f64) -> TraceConfig {
        TraceConfig {
            max_len,
            event_budget: 1000,
        }
    }

    #[test]
    fn crosses_first_m_mark_into_cover() {
        let s = surface(&rot90(), 3).surface;
        let start = SurfacePoint::new(base(0), Vec2::new(3.5, -1.0));
        let path = trace_geodesic(&s, &start, &Vec2::new(0.0, 1.0), &cfg(3.0)).unwrap();
        assert_eq!(path.termination, Termination::MaxLength);
        assert_eq!(path.segments.len(), 2);
        assert!(path.segments[0].to.dist(&Vec2::new(3.5, 0.0)) < 1e-12);
        match &path.crossings[0] {
            Crossing::Slit { from, to } => {
                assert_eq!((from.family, from.index), (Family::M, 1));
                assert_eq!((to.family, to.index, to.sheet), (Family::Mtilde, 1, cover(0)));
            }
            other => panic!("unexpected {other:?}"),
        }
        let end = path.end_point();
        assert_eq!(end.sheet, cover(0));
        assert!(end.pos.dist(&Vec2::new(3.5, 2.0)) < 1e-12);
        assert!((path.total_length - 3.0).abs() < 1e-12);
    }

    #[test]
    fn free_run_is_one_segment() {
        let s = surface(&rot90(), 3).surface;
        let start = SurfacePoint::new(base(0), Vec2::new(0.0, -0.5));
        let path = trace_geodesic(&s, &start, &Vec2::new(1.0, 0.0), &cfg(50.0)).unwrap();
        assert_eq!(path.segments.len(), 1);
        assert_eq!(path.termination, Termination::MaxLength);
    }

    #[test]
    fn stops_at_slit_endpoint() {
        let s = surface(&rot90(), 3).surface;
        let start = SurfacePoint::new(base(0), Vec2::new(0.0, 0.0));
        let path = trace_geodesic(&s, &start, &Vec2::new(1.0, 0.0), &cfg(50.0)).unwrap();
        match path.termination {
            Termination::ConePoint(p) => assert!(p.pos.dist(&Vec2::new(3.0, 0.0)) < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_cone_start_and_zero_direction() {
        let s = surface(&rot90(), 3).surface;
        let origin = SurfacePoint::new(cover(0), Vec2::zero());
        assert!(matches!(
            trace_geodesic(&s, &origin, &Vec2::new(1.0, 0.0), &cfg(1.0)),
            Err(SurfaceError::InvalidStart(_))
        ));
        let p = SurfacePoint::new(base(0), Vec2::new(0.5, 0.5));
        assert!(matches!(
            trace_geodesic(&s, &p, &Vec2::zero(), &cfg(1.0)),
            Err(SurfaceError::InvalidDirection)
        ));
    }

    #[test]
    fn branch_cut_advances_fold() {
        let s = surface(&rot90(), 3).surface;
        let mut fold = 0;
        for _ in 0..3 {
            let start = SurfacePoint::new(cover(0), Vec2::new(-1.0, 0.5)).on_fold(fold);
            let path = trace_geodesic(&s, &start, &Vec2::new(0.0, -1.0), &cfg(1.0)).unwrap();
            assert_eq!(path.crossings.len(), 1);
            fold = path.end_point().fold;
        }
        assert_eq!(fold, 0);
        let start = SurfacePoint::new(cover(0), Vec2::new(-1.0, -0.5)).on_fold(0);
        let up = trace_geodesic(&s, &start, &Vec2::new(0.0, 1.0), &cfg(1.0)).unwrap();
        assert_eq!(up.end_point().fold, 2);
    }

    #[test]
    fn direction_is_preserved_in_developed_frame() {
        // Crossing into a rotated copy keeps the developed direction; the
        // local direction rotates with the copy matrix.
        let a = surface(&rot90(), 3);
        let s = &a.surface;
        let j = 1;
        // HjCheck on Buffer2(1) of copy Id is glued to Mneg(1) on copy h_1.
        let start = SurfacePoint::new(SheetId::new(CopyId(0), SheetKind::Buffer2(j)), Vec2::new(0.5, 1.5));
        let path = trace_geodesic(s, &start, &Vec2::new(0.0, 1.0), &cfg(1.0)).unwrap();
        let Crossing::Slit { to, .. } = &path.crossings[0] else { panic!() };
        assert_eq!(to.family, Family::Mneg(1));
        let last = path.segments.last().unwrap();
        let local = &last.to - &last.from;
        let developed = s.frame(last.sheet.copy).unwrap().matrix_f.apply(&local);
        assert!(developed.x.abs() < 1e-12 && developed.y > 0.0);
    }

    #[test]
    fn cross_slit_involution_and_reversed_pair() {
        let s = surface(&rot90(), 3).surface;
        let mid = SurfacePoint::new(base(0), Vec2::new(3.5, 0.0));
        let up = Vec2::new(0.0, 1.0);
        let there = s.cross_slit(&mid, &up).unwrap();
        assert_eq!(there.sheet, cover(0));
        let back = s.cross_slit(&there, &Vec2::new(0.0, -1.0)).unwrap();
        assert_eq!(back.sheet, mid.sheet);
        assert!(back.pos.dist(&mid.pos) < 1e-15);

        let t1 = SurfacePoint::new(cover(0), Vec2::new(0.0, 1.25));
        let t2 = s.cross_slit(&t1, &Vec2::new(1.0, 0.0)).unwrap();
        assert!(t2.pos.dist(&Vec2::new(0.0, -1.75)) < 1e-15);
        assert!(matches!(s.cross_slit(&t1, &up), Err(SurfaceError::Tangential)));
        let off = SurfacePoint::new(base(0), Vec2::new(2.5, 0.0));
        assert!(matches!(s.cross_slit(&off, &up), Err(SurfaceError::NotOnSlit)));
    }

    /// Random start on a random sheet, away from every cone point.
    fn random_start(s: &FlatSurface, rng: &mut impl Rng) -> SurfacePoint {
        loop {
            let copy = CopyId(rng.gen_range(0..s.num_copies()));
            let kinds = SheetKind::all(s.num_generators());
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let pos = Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let fold = rng.gen_range(0..kind.folds());
            let p = SurfacePoint::new(SheetId::new(copy, kind), pos).on_fold(fold);
            if s.cones_near(p.sheet, p.fold, &p.pos, 1e-6).is_empty() && s.slit_at(&p).is_none() {
                return p;
            }
        }
    }

    #[test]
    fn traces_are_reversible() {
        let s = surface(&sanov(), 2).surface;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut done = 0;
        while done < 40 {
            let start = random_start(&s, &mut rng);
            let dir = Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
            let fwd = trace_geodesic(&s, &start, &dir, &cfg(15.0)).unwrap();
            if fwd.termination != Termination::MaxLength {
                continue;
            }
            let back = trace_geodesic(&s, &fwd.end_point(), &-dir.clone(), &cfg(15.0)).unwrap();
            let end = back.end_point();
            assert_eq!(end.sheet, start.sheet);
            assert_eq!(end.fold, start.fold);
            assert!(end.pos.dist(&start.pos) < 15.0 * 1e-9, "{:?}", end.pos.dist(&start.pos));
            done += 1;
        }
    }
}
