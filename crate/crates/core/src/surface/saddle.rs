use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::linalg::Vec2;
use crate::scalar::Rational;

use super::angle::{advance, default_probe_radius, probe_walk, ProbeWalk};
use super::flat::{ConeSite, FlatSurface, POINT_TOL};
use super::sheet::SurfacePoint;
use super::trace::{trace_geodesic, Crossing, GeodesicPath, Termination, TraceConfig};
use super::SurfaceError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleConfig {
    /// Longest developed length searched.
    pub l_max: f64,
    /// Angular grid per turn at the first level; doubled at each refinement.
    pub initial_steps: usize,
    /// Finest grid tried before giving up on stabilization.
    pub max_steps: usize,
    pub probe_radius: Option<f64>,
    pub event_budget: usize,
}

impl SaddleConfig {
    pub fn new(l_max: f64) -> Self {
        Self {
            l_max,
            initial_steps: 360,
            max_steps: 5760,
            probe_radius: None,
            event_budget: 2_000,
        }
    }
}

/// A saddle connection leaving the search origin.
#[derive(Clone, Debug, PartialEq)]
pub struct SaddleConnection {
    /// Exact developed holonomy, from start to end.
    pub holonomy: Vec2<Rational>,
    pub length: f64,
    pub end: ConeSite,
    /// Outgoing angle, counted along the full cone angle from the first
    /// probe sample.
    pub start_angle: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaddleSearch {
    pub connections: Vec<SaddleConnection>,
    /// Grid size of the last level run.
    pub steps: usize,
    /// Whether the last two levels found the same connections.
    pub stabilized: bool,
    /// Whether some trace ran out of event budget.
    pub budget_exhausted: bool,
}

impl SaddleSearch {
    /// Holonomies of both orientations of every connection found.
    pub fn holonomy_set(&self) -> Vec<Vec2<Rational>> {
        let mut out: Vec<Vec2<Rational>> = Vec::new();
        for c in &self.connections {
            for v in [c.holonomy.clone(), -c.holonomy.clone()] {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort();
        out
    }
}

type Key = (Vec2<Rational>, ConeSite, i64);

/// Saddle connections of length at most `l_max` from the cone point `c`.
///
/// Rays are shot from every point of an angular grid on a small circle
/// around `c`; cone points passing close to a ray are re-aimed at exactly and
/// confirmed by a second trace, and the holonomy is replayed in exact
/// arithmetic. The grid is refined until two successive levels agree. The
/// result lists what was found, not a proof of completeness.
pub fn saddle_connections_from(
    surface: &FlatSurface,
    c: &SurfacePoint,
    config: &SaddleConfig,
) -> Result<SaddleSearch, SurfaceError> {
    let site = surface
        .cones_near(c.sheet, c.fold, &c.pos, POINT_TOL)
        .into_iter()
        .next()
        .ok_or_else(|| SurfaceError::InvalidStart("not a cone point".into()))?
        .0;
    let (_, exact) = surface.cone_position(&site)?;
    let mut rho = config
        .probe_radius
        .map_or_else(|| default_probe_radius(surface, c.sheet.copy), Ok)?;
    let mut steps = config.initial_steps.max(8);
    let mut previous: Option<BTreeMap<Key, SaddleConnection>> = None;
    loop {
        let walk = loop {
            match probe_walk(surface, c, Some(exact.clone()), rho, steps, 16) {
                Err(SurfaceError::ProbeRadius(_)) if rho > 1e-6 && config.probe_radius.is_none() => rho *= 0.5,
                other => break other?,
            }
        };
        let (found, budget_exhausted) = level(surface, &walk, config)?;
        let stable = previous.as_ref().is_some_and(|p| p.keys().eq(found.keys()));
        if stable || steps * 2 > config.max_steps {
            return Ok(SaddleSearch {
                connections: found.into_values().collect(),
                steps,
                stabilized: stable,
                budget_exhausted,
            });
        }
        previous = Some(found);
        steps *= 2;
    }
}

fn wrap_pi(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

/// One grid level: shoot from every sample, collect near misses, confirm them.
fn level(
    surface: &FlatSurface,
    walk: &ProbeWalk,
    config: &SaddleConfig,
) -> Result<(BTreeMap<Key, SaddleConnection>, bool), SurfaceError> {
    let rho = walk.radius;
    let dphi = TAU / (walk.samples.len() as f64 / walk.laps as f64);
    let reach = config.l_max - rho;
    let trace_cfg = TraceConfig {
        max_len: reach.max(0.0),
        event_budget: config.event_budget,
    };
    let mut budget_exhausted = false;
    let mut aims: Vec<(usize, f64)> = Vec::new();
    for (idx, sample) in walk.samples.iter().enumerate() {
        let piece = &walk.pieces[sample.piece];
        let start = SurfacePoint::new(piece.sheet, sample.pos.clone()).on_fold(piece.fold);
        let u = Vec2::from_angle(sample.phi);
        let path = match trace_geodesic(surface, &start, &u, &trace_cfg) {
            Ok(p) => p,
            Err(SurfaceError::InvalidStart(_)) => continue,
            Err(e) => return Err(e),
        };
        budget_exhausted |= path.termination == Termination::Budget;
        for theta in near_misses(surface, &path, rho, dphi, config.l_max) {
            aims.push((idx, sample.phi + wrap_pi(theta - sample.phi)));
        }
    }
    // Angles along the cone are taken modulo its total angle, measured from
    // the first sample, so aims on either side of the seam coincide.
    let total = walk.laps as f64 * TAU;
    let base = walk.samples[0].phi;
    let reduce = |phi: f64| base + (phi - base).rem_euclid(total);
    aims.sort_by(|a, b| reduce(a.1).total_cmp(&reduce(b.1)));
    aims.dedup_by(|a, b| (reduce(a.1) - reduce(b.1)).abs() < 1e-12);

    let mut found = BTreeMap::new();
    let mut pieces = walk.pieces.clone();
    for (idx, phi) in aims {
        let sample = &walk.samples[idx];
        let Ok((piece_idx, pos)) = advance(surface, &mut pieces, sample.piece, sample.pos.clone(), phi, rho) else {
            continue;
        };
        let piece = pieces[piece_idx].clone();
        let Some(center_exact) = piece.center_exact.clone() else {
            continue;
        };
        let start = SurfacePoint::new(piece.sheet, pos).on_fold(piece.fold);
        let cfg = TraceConfig {
            max_len: reach + 1e-9,
            ..trace_cfg
        };
        let path = match trace_geodesic(surface, &start, &Vec2::from_angle(phi), &cfg) {
            Ok(p) => p,
            Err(SurfaceError::InvalidStart(_)) => continue,
            Err(e) => return Err(e),
        };
        let Termination::ConePoint(end) = &path.termination else {
            continue;
        };
        let Some((site, _)) = surface.cones_near(end.sheet, end.fold, &end.pos, 1e-6).into_iter().next() else {
            continue;
        };
        let holonomy = replay_holonomy(surface, &piece, &center_exact, &path, &site)?;
        let length = holonomy.to_f64().norm();
        if length > config.l_max + 1e-9 {
            continue;
        }
        // The outgoing angle separates connections with equal holonomy
        // leaving on different sheets of the cone.
        let start_angle = reduce(phi);
        let key = (holonomy.clone(), site, (start_angle * 1e6).round() as i64);
        found.entry(key).or_insert(SaddleConnection {
            holonomy,
            length,
            end: site,
            start_angle,
        });
    }
    Ok((found, budget_exhausted))
}

/// Developed angles of cone points passing within one grid step of the ray.
fn near_misses(surface: &FlatSurface, path: &GeodesicPath, rho: f64, dphi: f64, l_max: f64) -> Vec<f64> {
    let u = &path.direction;
    let mut out = Vec::new();
    let mut travelled = rho;
    for seg in &path.segments {
        let Ok(frame) = surface.frame(seg.sheet.copy) else {
            continue;
        };
        let local_len = seg.from.dist(&seg.to);
        let dev_len = frame.matrix_f.apply(&(&seg.to - &seg.from)).norm();
        let width = (l_max * dphi + POINT_TOL) * frame.inverse_f.op_norm();
        let mid = (&seg.from + &seg.to).scale(&0.5);
        for (_, e) in surface.cones_near(seg.sheet, seg.fold, &mid, 0.5 * local_len + width) {
            let dev = &u.scale(&travelled) + &frame.matrix_f.apply(&(&e - &seg.from));
            let along = dev.dot(u);
            let off = u.cross(&dev).abs();
            if along > rho && along <= l_max + 1e-9 && off <= dev.norm() * dphi + POINT_TOL {
                out.push(dev.angle());
            }
        }
        travelled += dev_len;
    }
    out
}

/// Exact developed vector from the search origin to `site`, following the
/// crossings of `path` from the probe piece it starts in.
fn replay_holonomy(
    surface: &FlatSurface,
    piece: &super::angle::Piece,
    center_exact: &Vec2<Rational>,
    path: &GeodesicPath,
    site: &ConeSite,
) -> Result<Vec2<Rational>, SurfaceError> {
    let mut offset = -surface.matrix(piece.sheet.copy).apply(center_exact);
    for crossing in &path.crossings {
        if let Crossing::Slit { from, .. } = crossing {
            let map = surface.glue_map_exact(from)?;
            let ma = surface.matrix(from.sheet.copy);
            let mb = surface.matrix(map.to.sheet.copy);
            offset = &(&offset + &ma.apply(&map.src_anchor)) - &mb.apply(&map.dst_anchor);
        }
    }
    let (sheet, pos) = surface.cone_position(site)?;
    Ok(&surface.matrix(sheet.copy).apply(&pos) + &offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat2;
    use crate::scalar::{int, Rational};
    use crate::surface::{CopyId, SheetId, SheetKind};
    use crate::testutil::{diag2, rot90, sanov, surface};

    fn origin(copy: usize) -> SurfacePoint {
        SurfacePoint::new(SheetId::new(CopyId(copy), SheetKind::Cover), Vec2::zero())
    }

    fn directions_within(found: &SaddleSearch, g: &Mat2<Rational>) -> bool {
        let frame = [g.col1(), g.col2(), -g.col1(), -g.col2()];
        found.connections.iter().all(|c| frame.iter().any(|f| f.same_direction(&c.holonomy)))
    }

    #[test]
    fn branch_point_of_identity_copy() {
        let s = surface(&rot90(), 2).surface;
        let found = saddle_connections_from(&s, &origin(0), &SaddleConfig::new(1.5)).unwrap();
        assert!(found.stabilized);
        let mut hs: Vec<_> = found.connections.iter().map(|c| c.holonomy.clone()).collect();
        hs.sort();
        assert_eq!(hs, vec![Vec2::from_ints(0, -1), Vec2::from_ints(0, 1)]);
        assert!(directions_within(&found, &Mat2::identity()));
    }

    #[test]
    fn seam_angles_are_not_counted_twice() {
        // On the rotated copy one connection leaves exactly along the seam.
        let s = surface(&rot90(), 2).surface;
        let found = saddle_connections_from(&s, &origin(1), &SaddleConfig::new(1.5)).unwrap();
        assert_eq!(found.connections.len(), 2);
    }

    #[test]
    fn longer_search_finds_horizontal_connection() {
        let s = surface(&rot90(), 2).surface;
        let found = saddle_connections_from(&s, &origin(0), &SaddleConfig::new(3.5)).unwrap();
        let hs: Vec<_> = found.connections.iter().map(|c| c.holonomy.clone()).collect();
        assert!(hs.contains(&Vec2::from_ints(3, 0)));
        assert!(directions_within(&found, &Mat2::identity()));
    }

    #[test]
    fn branch_point_of_stretched_copy() {
        let a = surface(&diag2(), 2);
        let g = Mat2::diag(int(2), int(1));
        let v = a.ball.index_of(&g).unwrap();
        let found = saddle_connections_from(&a.surface, &origin(v), &SaddleConfig::new(3.0)).unwrap();
        assert!(directions_within(&found, &g));
        let hs = found.holonomy_set();
        assert!(hs.contains(&Vec2::from_ints(0, 1)) && hs.contains(&Vec2::from_ints(0, -1)));
    }

    #[test]
    fn four_pi_point_connections_come_in_pairs() {
        let s = surface(&sanov(), 1).surface;
        let p = SurfacePoint::new(SheetId::new(CopyId(0), SheetKind::Base), Vec2::new(3.0, 0.0));
        let found = saddle_connections_from(&s, &p, &SaddleConfig::new(1.2)).unwrap();
        let hs = found.holonomy_set();
        assert!(hs.contains(&Vec2::from_ints(1, 0)));
        for v in &hs {
            assert!(hs.contains(&-v.clone()));
        }
    }

    #[test]
    fn non_cone_start_is_rejected() {
        let s = surface(&rot90(), 2).surface;
        let p = SurfacePoint::new(SheetId::new(CopyId(0), SheetKind::Cover), Vec2::new(0.5, 0.5));
        assert!(saddle_connections_from(&s, &p, &SaddleConfig::new(1.0)).is_err());
    }
}
