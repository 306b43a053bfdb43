//! Next-event search for a straight segment on one sheet.
//!
//! Every family is handled in closed form: a row is one line, a stack is a
//! lattice of rows, endpoints are lattices of points. Nothing is enumerated
//! beyond a constant number of candidates per family.

use crate::linalg::Vec2;

use super::flat::{ConeSite, FlatSurface, POINT_TOL};
use super::shape::{End, Shape};
use super::sheet::{Family, MarkRef, SheetId, SheetKind};

/// Directions with `|d.y| ≤ PARALLEL·|d|` are treated as parallel to rows.
const PARALLEL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Hit {
    Slit(MarkRef),
    Cone(ConeSite),
    /// Branch cut of the cover; `+1` crossing downwards, `-1` upwards.
    Cut(i8),
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Event {
    /// Ray parameter: the event point is `p + s·d`.
    pub s: f64,
    pub at: Vec2<f64>,
    pub hit: Hit,
}

struct Search<'a> {
    p: &'a Vec2<f64>,
    d: &'a Vec2<f64>,
    dn: f64,
    s_min: f64,
    s_max: f64,
    events: Vec<Event>,
}

impl Search<'_> {
    fn in_range(&self, s: f64) -> bool {
        s > self.s_min && s <= self.s_max
    }

    fn at(&self, s: f64) -> Vec2<f64> {
        Vec2::new(self.p.x + s * self.d.x, self.p.y + s * self.d.y)
    }

    /// Records a cone hit if the ray passes within tolerance of `e`.
    fn point(&mut self, e: Vec2<f64>, site: ConeSite) {
        let rel = &e - self.p;
        let s = rel.dot(self.d) / (self.dn * self.dn);
        let perp = self.d.cross(&rel).abs() / self.dn;
        if perp <= POINT_TOL && self.in_range(s) {
            self.events.push(Event {
                s,
                at: e,
                hit: Hit::Cone(site),
            });
        }
    }

    /// First point `base + i·step` (`i ≥ 1`) the ray passes within tolerance of.
    fn lattice(&mut self, base: Vec2<f64>, step: Vec2<f64>, site: impl Fn(u64) -> ConeSite) {
        let len = step.norm();
        let u = step.scale(&(1.0 / len));
        let f0 = u.cross(&(self.p - &base));
        let f1 = u.cross(self.d);
        let (mut lo, mut hi) = if f1.abs() < f64::MIN_POSITIVE {
            if f0.abs() > POINT_TOL {
                return;
            }
            (self.s_min, self.s_max)
        } else {
            let a = (-POINT_TOL - f0) / f1;
            let b = (POINT_TOL - f0) / f1;
            (a.min(b), a.max(b))
        };
        lo = lo.max(self.s_min);
        hi = hi.min(self.s_max);
        if lo > hi {
            return;
        }
        let t = |s: f64| u.dot(&(&self.at(s) - &base)) / len;
        let (ta, tb) = (t(lo), t(hi));
        let first = ta.min(tb).ceil().max(1.0);
        let last = ta.max(tb).floor();
        if first > last + 1.0 {
            return;
        }
        // Lattice points are met in order of increasing or decreasing `i`.
        let forward = u.dot(self.d) >= 0.0;
        let i0 = if forward { first } else { last };
        for k in -1i64..=1 {
            let i = i0 + k as f64;
            if i >= 1.0 && i < 9.0e15 {
                let e = &base + &step.scale(&i);
                self.point(e, site(i as u64));
            }
        }
    }

    fn slit(&mut self, s: f64, mark: MarkRef) {
        if self.in_range(s) {
            self.events.push(Event {
                s,
                at: self.at(s),
                hit: Hit::Slit(mark),
            });
        }
    }

    fn shape(&mut self, sheet: SheetId, family: Family, shape: &Shape<f64>) {
        let mark = |index: u64| MarkRef { sheet, family, index };
        let cone = move |end: End| move |i: u64| ConeSite::MarkEnd { mark: mark(i), end };
        let (p, d) = (self.p, self.d);
        let transversal = d.y.abs() > PARALLEL * self.dn;
        match shape {
            Shape::Row { y, offset, period } => {
                self.lattice(Vec2::new(*offset, *y), Vec2::new(*period, 0.0), cone(End::Start));
                self.lattice(Vec2::new(offset + 1.0, *y), Vec2::new(*period, 0.0), cone(End::Finish));
                if transversal {
                    let s = (y - p.y) / d.y;
                    let x = p.x + s * d.x;
                    let i = ((x - offset) / period).floor();
                    let u = x - (offset + period * i);
                    if i >= 1.0 && u > 0.0 && u < 1.0 {
                        self.slit(s, mark(i as u64));
                    }
                }
            }
            Shape::Stack { x0, y0, period } => {
                self.lattice(Vec2::new(*x0, *y0), Vec2::new(0.0, *period), cone(End::Start));
                self.lattice(Vec2::new(x0 + 1.0, *y0), Vec2::new(0.0, *period), cone(End::Finish));
                if !transversal {
                    return;
                }
                let (mut lo, mut hi) = (self.s_min, self.s_max);
                if d.x.abs() > PARALLEL * self.dn {
                    let a = (x0 - p.x) / d.x;
                    let b = (x0 + 1.0 - p.x) / d.x;
                    lo = lo.max(a.min(b));
                    hi = hi.min(a.max(b));
                } else if !(p.x > *x0 && p.x < x0 + 1.0) {
                    return;
                }
                if lo >= hi {
                    return;
                }
                let t = (p.y + lo * d.y - y0) / period;
                let (mut i, step) = if d.y > 0.0 { (t.ceil(), 1.0) } else { (t.floor(), -1.0) };
                for _ in 0..3 {
                    if i < 1.0 {
                        return;
                    }
                    let s = (y0 + period * i - p.y) / d.y;
                    if s > hi {
                        return;
                    }
                    let x = p.x + s * d.x;
                    if s > self.s_min && x > *x0 && x < x0 + 1.0 {
                        self.slit(s, mark(i as u64));
                        return;
                    }
                    i += step;
                }
            }
            Shape::Single { p: a, q: b } => {
                self.point(a.clone(), cone(End::Start)(1));
                self.point(b.clone(), cone(End::Finish)(1));
                let ab = b - a;
                let denom = d.cross(&ab);
                if denom.abs() > PARALLEL * self.dn * ab.norm() {
                    let ap = a - p;
                    let s = ap.cross(&ab) / denom;
                    let t = ap.cross(d) / denom;
                    if t > 0.0 && t < 1.0 {
                        self.slit(s, mark(1));
                    }
                }
            }
        }
    }
}

/// The first event met by `p + s·d` for `s ∈ (s_min, s_max]` on a sheet.
///
/// A cone point within tolerance of the earliest event takes precedence, so
/// a ray through a slit endpoint stops there instead of crossing.
pub(crate) fn next_event(
    surface: &FlatSurface,
    sheet: SheetId,
    fold: u8,
    p: &Vec2<f64>,
    d: &Vec2<f64>,
    s_min: f64,
    s_max: f64,
) -> Option<Event> {
    let dn = d.norm();
    let mut search = Search {
        p,
        d,
        dn,
        s_min,
        s_max,
        events: Vec::new(),
    };
    if sheet.kind == SheetKind::Cover {
        search.point(Vec2::zero(), ConeSite::CoverOrigin(sheet.copy));
        if d.y.abs() > PARALLEL * dn {
            let s = -p.y / d.y;
            let x = p.x + s * d.x;
            if x < -POINT_TOL && search.in_range(s) {
                let delta = if d.y < 0.0 { 1 } else { -1 };
                search.events.push(Event {
                    s,
                    at: Vec2::new(x, 0.0),
                    hit: Hit::Cut(delta),
                });
            }
        }
    }
    if fold == 0 {
        for (family, shape) in surface.slit_shapes(sheet.kind) {
            search.shape(sheet, *family, shape);
        }
    }
    let events = search.events;
    let first = events.iter().map(|e| e.s).fold(f64::INFINITY, f64::min);
    if !first.is_finite() {
        return None;
    }
    let slack = 2.0 * POINT_TOL / dn;
    let cone = events
        .iter()
        .filter(|e| matches!(e.hit, Hit::Cone(_)) && e.s <= first + slack)
        .min_by(|a, b| a.s.total_cmp(&b.s));
    cone.or_else(|| events.iter().find(|e| e.s == first)).cloned()
}
