use std::collections::{BTreeMap, HashMap};

use crate::group::{word_label, GenSet, GroupElement};
use crate::linalg::{Mat2, Vec2};
use crate::scalar::{Rational, Scalar};

use super::registry::GluingRegistry;
use super::shape::{family_shape, locate_mark, side_of, End, MnegTable, Shape};
use super::sheet::{CopyId, Family, MarkRef, SheetId, SheetKind, Side, SurfacePoint};
use super::SurfaceError;

/// Tolerance for point identity in float mode.
pub const POINT_TOL: f64 = 1e-9;

/// One affine copy `S_g`: developed coordinates are `g · local`.
#[derive(Clone, Debug)]
pub struct CopyFrame {
    pub element: GroupElement,
    pub matrix_f: Mat2<f64>,
    pub inverse_f: Mat2<f64>,
}

/// Identification of a slit with its partner, as a map between base charts:
/// `x ↦ dst_anchor + linear · (x − src_anchor)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlueMap<T> {
    pub from: MarkRef,
    pub to: MarkRef,
    pub src_anchor: Vec2<T>,
    pub dst_anchor: Vec2<T>,
    pub linear: Mat2<T>,
    /// Whether the formula orientations of the two marks are opposite.
    pub reversed: bool,
}

impl<T: Scalar> GlueMap<T> {
    pub fn apply(&self, x: &Vec2<T>) -> Vec2<T> {
        &self.dst_anchor + &self.linear.apply(&(x - &self.src_anchor))
    }

    /// Linear part only, for vectors in the base chart.
    pub fn apply_vector(&self, v: &Vec2<T>) -> Vec2<T> {
        self.linear.apply(v)
    }
}

/// A cone point of the surface, named by one of the marks ending there or
/// by the branch point of the cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConeSite {
    MarkEnd { mark: MarkRef, end: End },
    CoverOrigin(CopyId),
}

/// The flat structure of an assembled surface over a finite set of copies.
///
/// Immutable once built; all queries are read-only.
#[derive(Clone, Debug)]
pub struct FlatSurface {
    generators: GenSet,
    mneg: MnegTable,
    copies: Vec<CopyFrame>,
    registry: GluingRegistry,
    overrides: BTreeMap<MarkRef, (Vec2<Rational>, Vec2<Rational>)>,
    slits: HashMap<SheetKind, Vec<(Family, Shape<f64>)>>,
}

impl FlatSurface {
    pub fn new(
        generators: GenSet,
        copies: Vec<GroupElement>,
        mneg: MnegTable,
        registry: GluingRegistry,
    ) -> Result<Self, SurfaceError> {
        if mneg.len() != generators.len() {
            return Err(SurfaceError::UnknownGenerator(mneg.len().max(generators.len())));
        }
        let copies = copies
            .into_iter()
            .map(|element| {
                let matrix_f = element.matrix.to_f64();
                let inverse_f = element.matrix.inverse().expect("group elements are invertible").to_f64();
                CopyFrame {
                    element,
                    matrix_f,
                    inverse_f,
                }
            })
            .collect();
        let j = generators.len();
        let slits = SheetKind::all(j)
            .into_iter()
            .map(|kind| {
                let shapes = Family::on_sheet(kind, j)
                    .into_iter()
                    .filter(|f| f.is_slit())
                    .map(|f| (f, family_shape::<f64>(f, &mneg).expect("table covers every generator")))
                    .collect();
                (kind, shapes)
            })
            .collect();
        Ok(Self {
            generators,
            mneg,
            copies,
            registry,
            overrides: BTreeMap::new(),
            slits,
        })
    }

    pub fn generators(&self) -> &GenSet {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn mneg(&self) -> &MnegTable {
        &self.mneg
    }

    pub fn registry(&self) -> &GluingRegistry {
        &self.registry
    }

    pub fn num_copies(&self) -> usize {
        self.copies.len()
    }

    pub fn copy_ids(&self) -> impl Iterator<Item = CopyId> {
        (0..self.copies.len()).map(CopyId)
    }

    pub fn frame(&self, copy: CopyId) -> Result<&CopyFrame, SurfaceError> {
        self.copies.get(copy.0).ok_or(SurfaceError::UnknownCopy(copy))
    }

    pub fn matrix(&self, copy: CopyId) -> &Mat2<Rational> {
        &self.copies[copy.0].element.matrix
    }

    /// Slit families on a sheet kind, as float shapes.
    pub fn slit_shapes(&self, kind: SheetKind) -> &[(Family, Shape<f64>)] {
        self.slits.get(&kind).map_or(&[], Vec::as_slice)
    }

    /// Checks that a sheet exists in this surface.
    pub fn check_sheet(&self, sheet: SheetId) -> Result<(), SurfaceError> {
        self.frame(sheet.copy)?;
        match sheet.kind.generator() {
            Some(j) if j == 0 || j > self.num_generators() => Err(SurfaceError::UnknownGenerator(j)),
            _ => Ok(()),
        }
    }

    pub fn check_mark(&self, m: &MarkRef) -> Result<(), SurfaceError> {
        m.check()?;
        self.check_sheet(m.sheet)?;
        match m.family.generator() {
            Some(j) if j == 0 || j > self.num_generators() => Err(SurfaceError::UnknownGenerator(j)),
            _ => Ok(()),
        }
    }

    /// Exact base-chart endpoints, honoring injected perturbations.
    pub fn endpoints(&self, m: &MarkRef) -> Result<(Vec2<Rational>, Vec2<Rational>), SurfaceError> {
        self.check_mark(m)?;
        if let Some(e) = self.overrides.get(m) {
            return Ok(e.clone());
        }
        Ok(family_shape::<Rational>(m.family, &self.mneg)
            .ok_or(SurfaceError::UnknownGenerator(m.family.generator().unwrap_or(0)))?
            .segment(m.index))
    }

    pub fn endpoints_f(&self, m: &MarkRef) -> Result<(Vec2<f64>, Vec2<f64>), SurfaceError> {
        let (p, q) = self.endpoints(m)?;
        Ok((p.to_f64(), q.to_f64()))
    }

    /// Holonomy `g · (q − p)` of a mark on copy `g`, exactly.
    pub fn holonomy(&self, m: &MarkRef) -> Result<Vec2<Rational>, SurfaceError> {
        let (p, q) = self.endpoints(m)?;
        Ok(self.matrix(m.sheet.copy).apply(&(&q - &p)))
    }

    /// Test hook: moves one endpoint of a mark (used for fault injection).
    #[doc(hidden)]
    pub fn perturb_endpoint(&mut self, m: MarkRef, end: End, delta: Vec2<Rational>) -> Result<(), SurfaceError> {
        let (mut p, mut q) = self.endpoints(&m)?;
        match end {
            End::Start => p = &p + &delta,
            End::Finish => q = &q + &delta,
        }
        self.overrides.insert(m, (p, q));
        Ok(())
    }

    /// The unique partner of a glued mark.
    pub fn partner(&self, m: &MarkRef) -> Result<MarkRef, SurfaceError> {
        self.check_mark(m)?;
        self.registry.partner(m).map_err(|e| match e {
            SurfaceError::FrontierUnglued { mark, .. } => {
                let mut word = self.copies[mark.sheet.copy.0].element.word.clone();
                match mark.family {
                    Family::HjCheck(j) => word.push(j),
                    Family::Mneg(j) => word.push(self.generators.inverse_index(j)),
                    _ => {}
                }
                SurfaceError::FrontierUnglued {
                    mark,
                    missing: word_label(&word),
                }
            }
            other => other,
        })
    }

    /// Exact gluing map from `m` onto its partner.
    pub fn glue_map_exact(&self, m: &MarkRef) -> Result<GlueMap<Rational>, SurfaceError> {
        let partner = self.partner(m)?;
        let (pa, qa) = self.endpoints(m)?;
        let (pb, qb) = self.endpoints(&partner)?;
        let ma = self.matrix(m.sheet.copy);
        let mb = self.matrix(partner.sheet.copy);
        let va = ma.apply(&(&qa - &pa));
        let vb = mb.apply(&(&qb - &pb));
        let reversed = va.dot(&vb) < Rational::from_int(0);
        let linear = &mb.inverse().expect("invertible") * ma;
        Ok(GlueMap {
            from: *m,
            to: partner,
            src_anchor: pa,
            dst_anchor: if reversed { qb } else { pb },
            linear,
            reversed,
        })
    }

    /// Float gluing map, built from float data for speed.
    pub fn glue_map(&self, m: &MarkRef) -> Result<GlueMap<f64>, SurfaceError> {
        let partner = self.partner(m)?;
        let (pa, qa) = self.endpoints_f(m)?;
        let (pb, qb) = self.endpoints_f(&partner)?;
        let fa = &self.copies[m.sheet.copy.0];
        let fb = &self.copies[partner.sheet.copy.0];
        let va = fa.matrix_f.apply(&(&qa - &pa));
        let vb = fb.matrix_f.apply(&(&qb - &pb));
        let reversed = va.dot(&vb) < 0.0;
        Ok(GlueMap {
            from: *m,
            to: partner,
            src_anchor: pa,
            dst_anchor: if reversed { qb } else { pb },
            linear: &fb.inverse_f * &fa.matrix_f,
            reversed,
        })
    }

    /// The slit whose interior contains the point (marks on the cover live on
    /// fold 0), with the parameter along it.
    pub fn slit_at(&self, point: &SurfacePoint) -> Option<(MarkRef, f64)> {
        if point.fold != 0 {
            return None;
        }
        let (family, index) = locate_mark(point.sheet.kind, &point.pos, self.num_generators(), &self.mneg, &POINT_TOL)?;
        if !family.is_slit() {
            return None;
        }
        let m = MarkRef {
            sheet: point.sheet,
            family,
            index,
        };
        let (p, q) = self.endpoints_f(&m).ok()?;
        let t = super::shape::segment_param(&p, &q, &point.pos);
        let tol = POINT_TOL / p.dist(&q);
        (t > tol && t < 1.0 - tol).then_some((m, t))
    }

    /// Cone points within `radius` (base-chart distance) of `x` on a sheet.
    pub fn cones_near(&self, sheet: SheetId, fold: u8, x: &Vec2<f64>, radius: f64) -> Vec<(ConeSite, Vec2<f64>)> {
        let mut out = Vec::new();
        if sheet.kind == SheetKind::Cover && x.norm() <= radius {
            out.push((ConeSite::CoverOrigin(sheet.copy), Vec2::zero()));
        }
        if fold != 0 {
            return out;
        }
        let lo = Vec2::new(x.x - radius, x.y - radius);
        let hi = Vec2::new(x.x + radius, x.y + radius);
        for (family, shape) in self.slit_shapes(sheet.kind) {
            for (index, end, p) in shape.endpoints_in_box(&lo, &hi) {
                if p.dist(x) <= radius {
                    let mark = MarkRef {
                        sheet,
                        family: *family,
                        index,
                    };
                    out.push((ConeSite::MarkEnd { mark, end }, p));
                }
            }
        }
        out
    }

    /// Exact position of a cone site in its copy's base chart.
    pub fn cone_position(&self, site: &ConeSite) -> Result<(SheetId, Vec2<Rational>), SurfaceError> {
        match site {
            ConeSite::CoverOrigin(c) => {
                self.frame(*c)?;
                Ok((SheetId::new(*c, SheetKind::Cover), Vec2::zero()))
            }
            ConeSite::MarkEnd { mark, end } => {
                let (p, q) = self.endpoints(mark)?;
                Ok((mark.sheet, if *end == End::Start { p } else { q }))
            }
        }
    }

    pub fn cone_point(&self, site: &ConeSite) -> Result<SurfacePoint, SurfaceError> {
        let (sheet, pos) = self.cone_position(site)?;
        Ok(SurfacePoint::new(sheet, pos.to_f64()))
    }

    /// Whether the point coincides with a cone point.
    pub fn is_cone_point(&self, point: &SurfacePoint) -> bool {
        !self.cones_near(point.sheet, point.fold, &point.pos, POINT_TOL).is_empty()
    }

    /// Transfers a point on a slit interior to the partner slit.
    ///
    /// `direction` is the developed direction of travel; it is unchanged by
    /// the crossing since every gluing is a translation.
    pub fn cross_slit(&self, point: &SurfacePoint, direction: &Vec2<f64>) -> Result<SurfacePoint, SurfaceError> {
        if self.is_cone_point(point) {
            return Err(SurfaceError::AtConePoint);
        }
        let (m, _) = self.slit_at(point).ok_or(SurfaceError::NotOnSlit)?;
        let map = self.glue_map(&m)?;
        let (p, q) = self.endpoints_f(&m)?;
        let local = self.copies[m.sheet.copy.0].inverse_f.apply(direction);
        let along = &q - &p;
        let c = along.cross(&local);
        if c.abs() <= 1e-12 * along.norm() * local.norm() {
            return Err(SurfaceError::Tangential);
        }
        // Moving towards the left bank means arriving from the right one.
        let from = if c > 0.0 { Side::Right } else { Side::Left };
        if point.slit_side.is_some_and(|s| s != from) {
            return Err(SurfaceError::SideMismatch);
        }
        let pos = map.apply(&point.pos);
        let (pb, qb) = self.endpoints_f(&map.to)?;
        let local_b = self.copies[map.to.sheet.copy.0].inverse_f.apply(direction);
        let into = if (&qb - &pb).cross(&local_b) > 0.0 {
            Side::Left
        } else {
            Side::Right
        };
        Ok(SurfacePoint {
            sheet: map.to.sheet,
            fold: 0,
            pos,
            slit_side: Some(into),
        })
    }

    /// The side of the slit through `point` a direction moves into.
    pub fn side_towards(&self, m: &MarkRef, direction: &Vec2<f64>) -> Result<Option<Side>, SurfaceError> {
        let (p, q) = self.endpoints_f(m)?;
        let local = self.copies[m.sheet.copy.0].inverse_f.apply(direction);
        Ok(side_of(&Vec2::zero(), &(&q - &p), &local))
    }
}
