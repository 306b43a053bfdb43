use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use crate::linalg::{Mat2, Vec2};
use crate::surface::{CopyId, Family, MarkRef, SheetId, SheetKind};

use super::{AssembledSurface, PsvError};

/// Required separation between the two inter-copy families.
pub const SEPARATION_THRESHOLD: f64 = std::f64::consts::FRAC_1_SQRT_2;
const SEPARATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub copy: CopyId,
    /// Half-width of the local box `[−B, B]²` enumerated on every sheet.
    pub region: f64,
    pub lower_bound: f64,
    pub passed: bool,
    /// Marks along a shortest node sequence, from source to target.
    pub path: Vec<String>,
}

fn point_segment(x: &Vec2<f64>, p: &Vec2<f64>, q: &Vec2<f64>) -> f64 {
    let d = q - p;
    let t = ((x - p).dot(&d) / d.norm_sq()).clamp(0.0, 1.0);
    x.dist(&(p + &d.scale(&t)))
}

fn segments_cross(a: (&Vec2<f64>, &Vec2<f64>), b: (&Vec2<f64>, &Vec2<f64>)) -> bool {
    let side = |p: &Vec2<f64>, q: &Vec2<f64>, x: &Vec2<f64>| (q - p).cross(&(x - p));
    let (d1, d2) = (side(a.0, a.1, b.0), side(a.0, a.1, b.1));
    let (d3, d4) = (side(b.0, b.1, a.0), side(b.0, b.1, a.1));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Euclidean distance between two closed segments.
pub(crate) fn segment_distance(a: (&Vec2<f64>, &Vec2<f64>), b: (&Vec2<f64>, &Vec2<f64>)) -> f64 {
    if segments_cross(a, b) {
        return 0.0;
    }
    point_segment(a.0, b.0, b.1)
        .min(point_segment(a.1, b.0, b.1))
        .min(point_segment(b.0, a.0, a.1))
        .min(point_segment(b.1, a.0, a.1))
}

/// Developed distance from a local point to the complement of `[−B, B]²`.
fn exit_distance(x: &Vec2<f64>, b: f64, inv: &Mat2<f64>) -> f64 {
    // The local coordinate x_i has gradient g^{-T} e_i in the developed plane.
    let rows = [Vec2::new(inv.a, inv.b).norm(), Vec2::new(inv.c, inv.d).norm()];
    let coords = [x.x, x.y];
    (0..2)
        .map(|i| ((b - coords[i].abs()) / rows[i]).max(0.0))
        .fold(f64::INFINITY, f64::min)
}

fn in_box(x: &Vec2<f64>, b: f64) -> bool {
    x.x.abs() <= b && x.y.abs() <= b
}

/// Smallest region holding every source and target mark with some margin.
pub fn default_region(s: &AssembledSurface) -> f64 {
    let far = s
        .surface
        .mneg()
        .iter()
        .flat_map(|(p, q)| [p.to_f64(), q.to_f64()])
        .map(|v| v.x.abs().max(v.y.abs()))
        .fold(2.0, f64::max);
    (far + 4.0).max(12.0)
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Certified lower bound on the distance within `S_g` between the marks
/// `h_j m̌^{-j}` and the marks `m^{-j}`.
///
/// Any path between the families passes through a sequence of glued slits;
/// consecutive slits share a sheet, so their developed set distance bounds
/// the length of that stretch. Slits outside the region are merged into one
/// node reached no sooner than the box boundary.
pub fn check_separation(s: &AssembledSurface, copy: CopyId, region: Option<f64>) -> Result<SeparationReport, PsvError> {
    let surface = &s.surface;
    let frame = surface.frame(copy)?;
    let (g, inv) = (&frame.matrix_f, &frame.inverse_f);
    let j = surface.num_generators();
    let b = region.unwrap_or_else(|| default_region(s));

    let mut marks: Vec<MarkRef> = Vec::new();
    for kind in SheetKind::all(j) {
        for (family, shape) in surface.slit_shapes(kind) {
            let lo = Vec2::new(-b, -b);
            let hi = Vec2::new(b, b);
            let mut idx: Vec<u64> = shape.endpoints_in_box(&lo, &hi).into_iter().map(|(i, _, _)| i).collect();
            idx.dedup();
            for index in idx {
                marks.push(MarkRef {
                    sheet: SheetId::new(copy, kind),
                    family: *family,
                    index,
                });
            }
        }
    }
    let is_source = |m: &MarkRef| matches!(m.family, Family::HjCheck(_));
    let is_target = |m: &MarkRef| matches!(m.family, Family::Mneg(_));
    let sources = marks.iter().filter(|m| is_source(m)).count();
    let targets = marks.iter().filter(|m| is_target(m)).count();
    if sources < j || targets < j {
        return Err(PsvError::Region(format!("region {b} does not contain every source and target mark")));
    }
    // Partners of enumerated marks join the graph even when they lie outside.
    let mut index: BTreeMap<MarkRef, usize> = marks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut partner_edges = Vec::new();
    for i in 0..marks.len() {
        let m = marks[i];
        if m.family.is_inter_copy() {
            continue;
        }
        let p = surface.partner(&m)?;
        let k = *index.entry(p).or_insert_with(|| {
            marks.push(p);
            marks.len() - 1
        });
        partner_edges.push((i, k));
    }

    let n = marks.len();
    let outside = n;
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n + 1];
    let mut edge = |u: usize, v: usize, w: f64| {
        adj[u].push((v, w));
        adj[v].push((u, w));
    };
    for (u, v) in partner_edges {
        edge(u, v, 0.0);
    }
    let geometry: Vec<(Vec2<f64>, Vec2<f64>)> = marks
        .iter()
        .map(|m| surface.endpoints_f(m))
        .collect::<Result<_, _>>()?;
    let inside: Vec<bool> = geometry.iter().map(|(p, q)| in_box(p, b) || in_box(q, b)).collect();
    let developed: Vec<(Vec2<f64>, Vec2<f64>)> = geometry.iter().map(|(p, q)| (g.apply(p), g.apply(q))).collect();
    for u in 0..n {
        if !inside[u] {
            edge(u, outside, 0.0);
            continue;
        }
        let (p, q) = &geometry[u];
        edge(u, outside, exit_distance(p, b, inv).min(exit_distance(q, b, inv)));
        for v in (u + 1)..n {
            if inside[v] && marks[v].sheet == marks[u].sheet {
                let (a, c) = (&developed[u], &developed[v]);
                edge(u, v, segment_distance((&a.0, &a.1), (&c.0, &c.1)));
            }
        }
    }

    let mut dist = vec![f64::INFINITY; n + 1];
    let mut prev = vec![usize::MAX; n + 1];
    let mut heap = BinaryHeap::new();
    for u in (0..n).filter(|&u| is_source(&marks[u])) {
        dist[u] = 0.0;
        heap.push(Item(0.0, u));
    }
    let mut reached = None;
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u < n && is_target(&marks[u]) {
            reached = Some(u);
            break;
        }
        for &(v, w) in &adj[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
                prev[v] = u;
                heap.push(Item(d + w, v));
            }
        }
    }
    let (lower_bound, path) = match reached {
        None => (f64::INFINITY, Vec::new()),
        Some(t) => {
            let mut path = Vec::new();
            let mut u = t;
            while u != usize::MAX {
                path.push(if u == outside { "outside region".to_string() } else { marks[u].to_string() });
                u = prev[u];
            }
            path.reverse();
            (dist[t], path)
        }
    };
    Ok(SeparationReport {
        copy,
        region: b,
        lower_bound,
        passed: lower_bound >= SEPARATION_THRESHOLD - SEPARATION_TOL,
        path,
    })
}
