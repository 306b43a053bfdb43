use std::fmt::Write as _;

use crate::group::CayleyBall;
use crate::linalg::Vec2;
use crate::psv::AssembledSurface;
use crate::surface::{family_shape, Family, MarkRef, SheetId, SheetKind, Shape};

use super::IoError;

/// Axis-aligned window of a sheet's base chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Viewport {
    pub lo: Vec2<f64>,
    pub hi: Vec2<f64>,
}

impl Viewport {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self {
            lo: Vec2::new(x0, y0),
            hi: Vec2::new(x1, y1),
        }
    }

    fn contains(&self, p: &Vec2<f64>) -> bool {
        p.x >= self.lo.x && p.x <= self.hi.x && p.y >= self.lo.y && p.y <= self.hi.y
    }
}

/// A window showing the first few members of every family on the sheet.
pub fn default_viewport(s: &AssembledSurface, kind: SheetKind) -> Viewport {
    let j = s.num_generators() as f64;
    match kind {
        SheetKind::Base => {
            let low = s
                .surface
                .mneg()
                .iter()
                .flat_map(|(p, q)| [p.to_f64().y, q.to_f64().y])
                .fold(-2.0, f64::min);
            Viewport::new(-2.0, 16.0, (low - 1.0).floor(), j + 1.0)
        }
        SheetKind::Cover => Viewport::new(-4.0, 12.0, -4.0, 4.0),
        SheetKind::Buffer1(_) => Viewport::new(-2.0, 16.0, -3.0, 3.0),
        SheetKind::Buffer2(_) => Viewport::new(-2.0, 4.0, -1.0, 12.0),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const SCALE: f64 = 40.0;
const MARGIN: f64 = 30.0;

/// SVG drawing of one sheet in its base chart: axes, origin, and every mark
/// meeting the viewport, labeled `family[index]`.
pub fn sheet_svg(s: &AssembledSurface, sheet: SheetId, view: Option<Viewport>) -> Result<String, IoError> {
    s.surface
        .check_sheet(sheet)
        .map_err(|_| IoError::UnknownSheet(format!("{}/{}", sheet.copy.0, sheet.kind)))?;
    let view = view.unwrap_or_else(|| default_viewport(s, sheet.kind));
    if !(view.hi.x > view.lo.x && view.hi.y > view.lo.y) {
        return Err(IoError::Invalid("empty viewport".into()));
    }
    let width = (view.hi.x - view.lo.x) * SCALE + 2.0 * MARGIN;
    let height = (view.hi.y - view.lo.y) * SCALE + 2.0 * MARGIN;
    let px = |p: &Vec2<f64>| ((p.x - view.lo.x) * SCALE + MARGIN, (view.hi.y - p.y) * SCALE + MARGIN);
    let element = s.ball.vertex(sheet.copy.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="16" font-size="13">copy {} ({}) / {}</text>"#,
        escape(&element.word_label()),
        escape(&element.matrix.to_string()),
        sheet.kind
    );
    // Axes through the origin, clipped to the viewport.
    let (ox, oy) = px(&Vec2::new(0.0, 0.0));
    if view.lo.y <= 0.0 && view.hi.y >= 0.0 {
        let (x0, _) = px(&view.lo);
        let (x1, _) = px(&view.hi);
        let _ = writeln!(out, r##"<line x1="{x0:.2}" y1="{oy:.2}" x2="{x1:.2}" y2="{oy:.2}" stroke="#bbb"/>"##);
    }
    if view.lo.x <= 0.0 && view.hi.x >= 0.0 {
        let (_, y0) = px(&view.hi);
        let (_, y1) = px(&view.lo);
        let _ = writeln!(out, r##"<line x1="{ox:.2}" y1="{y0:.2}" x2="{ox:.2}" y2="{y1:.2}" stroke="#bbb"/>"##);
    }
    if view.contains(&Vec2::new(0.0, 0.0)) {
        let origin = if sheet.kind == SheetKind::Cover { "0\u{303}" } else { "0" };
        let _ = writeln!(out, r#"<circle cx="{ox:.2}" cy="{oy:.2}" r="3"/>"#);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{origin}</text>"#, ox + 4.0, oy + 14.0);
    }
    if sheet.kind == SheetKind::Cover && view.lo.x < 0.0 && view.contains(&Vec2::new(0.0, 0.0)) {
        let (x0, _) = px(&view.lo);
        let _ = writeln!(
            out,
            r##"<line x1="{x0:.2}" y1="{oy:.2}" x2="{ox:.2}" y2="{oy:.2}" stroke="#888" stroke-dasharray="4 3"/>"##
        );
    }

    let j = s.num_generators();
    for family in Family::on_sheet(sheet.kind, j) {
        let Some(shape) = family_shape::<f64>(family, s.surface.mneg()) else {
            continue;
        };
        let indices: Vec<u64> = match &shape {
            Shape::Single { p, q } => {
                if view.contains(p) || view.contains(q) {
                    vec![1]
                } else {
                    vec![]
                }
            }
            _ => {
                let mut v: Vec<u64> = shape.endpoints_in_box(&view.lo, &view.hi).into_iter().map(|e| e.0).collect();
                v.dedup();
                v
            }
        };
        let (color, dash) = match (family.is_slit(), family.is_inter_copy()) {
            (false, _) => ("#888", r#" stroke-dasharray="4 3""#),
            (true, true) => ("#c0392b", ""),
            (true, false) => ("#1f5fa8", ""),
        };
        for index in indices {
            let m = MarkRef { sheet, family, index };
            let (p, q) = s.surface.endpoints_f(&m)?;
            let ((x1, y1), (x2, y2)) = (px(&p), px(&q));
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="2"{dash}/>"#
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" fill="{color}">{}[{index}]</text>"#,
                (x1 + x2) / 2.0 + 3.0,
                (y1 + y2) / 2.0 - 4.0,
                escape(&family.label())
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// DOT of the Cayley ball, edges `g → g·h_j` labeled `j`.
pub fn cayley_dot(ball: &CayleyBall) -> String {
    let mut out = String::from("digraph cayley {\n");
    for (v, g) in ball.vertices().iter().enumerate() {
        let _ = writeln!(out, "  v{v} [label=\"{}\"];", g.word_label());
    }
    for (v, j, w) in ball.edges() {
        let _ = writeln!(out, "  v{v} -> v{w} [label=\"{j}\"];");
    }
    out.push_str("}\n");
    out
}

/// DOT of the copies and their inter-copy gluings, one edge per glued pair
/// from the copy carrying `h_j m̌^{-j}` to the copy carrying `m^{-j}`.
pub fn copy_graph_dot(s: &AssembledSurface) -> String {
    let mut out = String::from("digraph copies {\n");
    for (v, g) in s.ball.vertices().iter().enumerate() {
        let _ = writeln!(out, "  c{v} [label=\"{}\"];", g.word_label());
    }
    for (a, b) in s.surface.registry().inter_pairs() {
        let (upper, lower) = if matches!(a.family, Family::HjCheck(_)) { (a, b) } else { (b, a) };
        let j = upper.family.generator().unwrap_or(0);
        let _ = writeln!(out, "  c{} -> c{} [label=\"{j}\"];", upper.sheet.copy.0, lower.sheet.copy.0);
    }
    out.push_str("}\n");
    out
}
