use std::f64::consts::TAU;

use crate::linalg::Vec2;
use crate::scalar::Rational;

use super::flat::{FlatSurface, POINT_TOL};
use super::ray::{next_event, Hit};
use super::sheet::{CopyId, SheetId, SurfacePoint};
use super::trace::MIN_STEP;
use super::SurfaceError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeConfig {
    /// Developed probe radius; `None` picks a default from the copy matrices
    /// and shrinks it if the disk turns out to contain another cone point.
    pub radius: Option<f64>,
    /// Chord steps per turn of `2π`.
    pub steps: usize,
    /// Give up after this many turns without closing.
    pub max_laps: u32,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            radius: None,
            steps: 720,
            max_laps: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeReport {
    pub location: SurfacePoint,
    /// Total turning of the probe polygon, in radians.
    pub measured_angle: f64,
    /// Nearest positive multiple `k` of `2π`.
    pub multiplicity: u32,
    pub probe_radius: f64,
}

impl ConeReport {
    /// `2π · k`.
    pub fn expected(&self) -> f64 {
        TAU * self.multiplicity as f64
    }

    pub fn error(&self) -> f64 {
        (self.measured_angle - self.expected()).abs()
    }
}

/// A chart visited by the probe circle: the (possibly virtual) center in
/// that sheet's coordinates, exactly when known.
#[derive(Clone, Debug)]
pub(crate) struct Piece {
    pub sheet: SheetId,
    pub fold: u8,
    pub center: Vec2<f64>,
    pub center_exact: Option<Vec2<Rational>>,
}

#[derive(Clone, Debug)]
pub(crate) struct Sample {
    /// Cumulative polar angle, counting full turns.
    pub phi: f64,
    pub piece: usize,
    pub pos: Vec2<f64>,
}

#[derive(Clone, Debug)]
pub(crate) struct ProbeWalk {
    pub pieces: Vec<Piece>,
    pub samples: Vec<Sample>,
    pub laps: u32,
    pub turning: f64,
    pub radius: f64,
}

/// Walks a developed circle of radius `rho` around `center`, following it
/// across slits and the branch cut until it closes up.
pub(crate) fn probe_walk(
    surface: &FlatSurface,
    center: &SurfacePoint,
    center_exact: Option<Vec2<Rational>>,
    rho: f64,
    steps: usize,
    max_laps: u32,
) -> Result<ProbeWalk, SurfaceError> {
    let dphi = TAU / steps as f64;
    // Offset so the first chord does not start on a mark line through the center.
    let phi0 = 0.371 * dphi;
    let mut pieces = vec![Piece {
        sheet: center.sheet,
        fold: center.fold,
        center: center.pos.clone(),
        center_exact,
    }];
    check_disk(surface, &pieces[0], rho)?;
    let mut cur = 0usize;
    let mut pos = on_circle(surface, &pieces[0], phi0, rho)?;
    let mut samples = vec![Sample {
        phi: phi0,
        piece: 0,
        pos: pos.clone(),
    }];
    let total = steps * max_laps as usize;
    for k in 1..=total {
        let phi = phi0 + k as f64 * dphi;
        (cur, pos) = advance(surface, &mut pieces, cur, pos, phi, rho)?;
        samples.push(Sample {
            phi,
            piece: cur,
            pos: pos.clone(),
        });
        if k % steps == 0 && same_piece(&pieces[cur], &pieces[0]) {
            let laps = (k / steps) as u32;
            let turning = polygon_turning(rho, phi0, dphi, k);
            samples.pop();
            return Ok(ProbeWalk {
                pieces,
                samples,
                laps,
                turning,
                radius: rho,
            });
        }
    }
    Err(SurfaceError::ProbeRadius(format!("probe did not close within {max_laps} turns")))
}

/// Point at polar angle `phi` on the probe circle, in a piece's chart.
fn on_circle(surface: &FlatSurface, piece: &Piece, phi: f64, rho: f64) -> Result<Vec2<f64>, SurfaceError> {
    let inv = &surface.frame(piece.sheet.copy)?.inverse_f;
    Ok(&piece.center + &inv.apply(&Vec2::from_angle(phi).scale(&rho)))
}

/// Moves along the chord from `pos` to the circle point at angle `phi`,
/// switching charts at slits and the branch cut.
pub(crate) fn advance(
    surface: &FlatSurface,
    pieces: &mut Vec<Piece>,
    mut cur: usize,
    mut pos: Vec2<f64>,
    phi: f64,
    rho: f64,
) -> Result<(usize, Vec2<f64>), SurfaceError> {
    let mut target = on_circle(surface, &pieces[cur], phi, rho)?;
    for _ in 0..64 {
        let d = &target - &pos;
        let dn = d.norm();
        let piece = &pieces[cur];
        let ev = next_event(surface, piece.sheet, piece.fold, &pos, &d, MIN_STEP / dn.max(1e-300), 1.0);
        let Some(ev) = ev else {
            return Ok((cur, target));
        };
        match ev.hit {
            Hit::Cone(_) => {
                return Err(SurfaceError::ProbeRadius(format!("probe circle of radius {rho} meets a cone point")))
            }
            Hit::Cut(delta) => {
                let next = Piece {
                    fold: (piece.fold as i8 + delta).rem_euclid(3) as u8,
                    ..piece.clone()
                };
                pos = ev.at;
                cur = push_piece(pieces, next);
            }
            Hit::Slit(m) => {
                let map = surface.glue_map(&m).map_err(|e| match e {
                    SurfaceError::FrontierUnglued { .. } => {
                        SurfaceError::ProbeRadius(format!("probe circle reaches unglued mark {m}"))
                    }
                    e => e,
                })?;
                let exact = match &piece.center_exact {
                    Some(c) => Some(surface.glue_map_exact(&m)?.apply(c)),
                    None => None,
                };
                let next = Piece {
                    sheet: map.to.sheet,
                    fold: 0,
                    center: map.apply(&piece.center),
                    center_exact: exact,
                };
                pos = map.apply(&ev.at);
                let fresh = !pieces.iter().any(|p| same_piece(p, &next));
                cur = push_piece(pieces, next);
                if fresh {
                    check_disk(surface, &pieces[cur], rho)?;
                }
                target = on_circle(surface, &pieces[cur], phi, rho)?;
            }
        }
    }
    Err(SurfaceError::ProbeRadius("probe chord crosses too many slits".into()))
}

fn same_piece(a: &Piece, b: &Piece) -> bool {
    a.sheet == b.sheet && a.fold == b.fold && a.center.dist(&b.center) <= POINT_TOL * (1.0 + a.center.norm())
}

fn push_piece(pieces: &mut Vec<Piece>, piece: Piece) -> usize {
    if let Some(i) = pieces.iter().position(|p| same_piece(p, &piece)) {
        return i;
    }
    pieces.push(piece);
    pieces.len() - 1
}

/// Rejects a probe whose local disk contains a cone point other than the center.
fn check_disk(surface: &FlatSurface, piece: &Piece, rho: f64) -> Result<(), SurfaceError> {
    let inv = &surface.frame(piece.sheet.copy)?.inverse_f;
    let r_local = rho * inv.op_norm() * (1.0 + 1e-9);
    let hit = surface
        .cones_near(piece.sheet, piece.fold, &piece.center, r_local)
        .into_iter()
        .any(|(_, p)| p.dist(&piece.center) > POINT_TOL);
    if hit {
        return Err(SurfaceError::ProbeRadius(format!(
            "disk of radius {rho} around the probe center contains another cone point"
        )));
    }
    Ok(())
}

/// Sum of exterior angles of the developed probe polygon with `k` chords.
fn polygon_turning(rho: f64, phi0: f64, dphi: f64, k: usize) -> f64 {
    let vertex = |i: usize| Vec2::from_angle(phi0 + i as f64 * dphi).scale(&rho);
    let chord = |i: usize| &vertex(i + 1) - &vertex(i);
    (0..k)
        .map(|i| {
            let (a, b) = (chord(i), chord((i + 1) % k));
            a.cross(&b).atan2(a.dot(&b))
        })
        .sum()
}

/// Default developed probe radius on a copy: small enough that the local
/// disk stays within a quarter unit in every chart the circle can enter.
pub fn default_probe_radius(surface: &FlatSurface, copy: CopyId) -> Result<f64, SurfaceError> {
    let g = surface.frame(copy)?.matrix_f.singular_values().0;
    let gens = surface.generators();
    let mut shrink: f64 = 1.0;
    for j in gens.indices() {
        let h = gens.generator(j).to_f64();
        shrink = shrink.min(h.singular_values().0);
        let (p, q) = surface.mneg().get(j).ok_or(SurfaceError::UnknownGenerator(j))?;
        shrink = shrink.min((q - p).to_f64().norm());
    }
    Ok(0.25 * g * shrink)
}

/// Total cone angle at `p`, measured by transporting a probe circle.
pub fn angle_at(surface: &FlatSurface, p: &SurfacePoint, config: &ProbeConfig) -> Result<ConeReport, SurfaceError> {
    surface.check_sheet(p.sheet)?;
    let (mut rho, retries) = match config.radius {
        Some(r) if r > 0.0 && r.is_finite() => (r, 0),
        Some(_) => return Err(SurfaceError::ProbeRadius("radius must be positive".into())),
        None => (default_probe_radius(surface, p.sheet.copy)?, 6),
    };
    let mut attempt = 0;
    let walk = loop {
        match probe_walk(surface, p, None, rho, config.steps, config.max_laps) {
            Err(SurfaceError::ProbeRadius(_)) if attempt < retries => {
                rho *= 0.5;
                attempt += 1;
            }
            other => break other?,
        }
    };
    let multiplicity = (walk.turning / TAU).round().max(1.0) as u32;
    Ok(ConeReport {
        location: p.clone(),
        measured_angle: walk.turning,
        multiplicity,
        probe_radius: walk.radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{Family, MarkRef, SheetKind};
    use crate::testutil::{diag2, rot90, sanov, surface};

    fn at(s: &FlatSurface, copy: usize, kind: SheetKind, x: f64, y: f64) -> ConeReport {
        let p = SurfacePoint::new(SheetId::new(CopyId(copy), kind), Vec2::new(x, y));
        angle_at(s, &p, &ProbeConfig::default()).unwrap()
    }

    #[test]
    fn flat_point() {
        let s = surface(&rot90(), 2).surface;
        let r = at(&s, 0, SheetKind::Base, 1.5, 0.5);
        assert_eq!(r.multiplicity, 1);
        assert!(r.error() < 1e-6);
    }

    #[test]
    fn slit_endpoints_are_four_pi() {
        let s = surface(&sanov(), 1).surface;
        let r = at(&s, 0, SheetKind::Base, 3.0, 0.0);
        assert_eq!(r.multiplicity, 2);
        assert!(r.error() < 1e-6, "{}", r.measured_angle);
        let r = at(&s, 0, SheetKind::Buffer2(1), 1.0, 3.0);
        assert_eq!(r.multiplicity, 2);
    }

    #[test]
    fn cover_origin_is_six_pi() {
        let s = surface(&diag2(), 2).surface;
        for copy in 0..3 {
            let r = at(&s, copy, SheetKind::Cover, 0.0, 0.0);
            assert_eq!(r.multiplicity, 3);
            assert!(r.error() < 1e-6);
        }
    }

    #[test]
    fn inter_copy_endpoint() {
        // Endpoint of h_1 m̌^{-1} on copy Id, glued to m^{-1} on copy h_1.
        let a = surface(&diag2(), 2);
        let m = MarkRef {
            sheet: SheetId::new(CopyId(0), SheetKind::Buffer2(1)),
            family: Family::HjCheck(1),
            index: 1,
        };
        let (p, _) = a.surface.endpoints_f(&m).unwrap();
        let r = at(&a.surface, 0, SheetKind::Buffer2(1), p.x, p.y);
        assert_eq!(r.multiplicity, 2);
        assert!(r.error() < 1e-6);
    }

    #[test]
    fn oversized_probe_is_rejected() {
        let s = surface(&rot90(), 2).surface;
        let p = SurfacePoint::new(SheetId::new(CopyId(0), SheetKind::Base), Vec2::new(3.0, 0.0));
        let cfg = ProbeConfig {
            radius: Some(1.5),
            ..ProbeConfig::default()
        };
        assert!(matches!(angle_at(&s, &p, &cfg), Err(SurfaceError::ProbeRadius(_))));
    }
}
