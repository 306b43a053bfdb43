use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use psv_core::group::{
    assert_no_contracting, ends_estimate, ends_profile, enumerate_ball, CayleyBall, ContractionReport, EndsConfig, GenSet,
};
use psv_core::io::{
    cayley_dot, copy_graph_dot, load_generators, manifest_json, path_json, sheet_svg, to_json, write_file, AngleSpot, IoError,
    RunConfig, SurfaceCheckReport,
};
use psv_core::psv::{
    assemble, census_profile, check_separation, singularity_marker_check, validate_gluings, veech_constraint_check,
    veech_relabel_check, AssembledSurface, SurfaceEndsCensus,
};
use psv_core::surface::{
    angle_at, trace_geodesic, ConeSite, CopyId, End, Family, MarkRef, ProbeConfig, SheetId, SheetKind, SurfacePoint,
    TraceConfig,
};
use psv_core::{Mat2Q, Vec2F};

use crate::CliError;

fn generators(cfg: &RunConfig) -> Result<GenSet, CliError> {
    Ok(GenSet::validate(&load_generators(&cfg.group)?)?)
}

fn build(cfg: &RunConfig) -> Result<AssembledSurface, CliError> {
    let h = generators(cfg)?;
    let ball = enumerate_ball(&h, cfg.radius)?;
    Ok(assemble(&ball, &h)?)
}

fn write(cfg: &RunConfig, name: &str, contents: &str) -> Result<(), CliError> {
    let path = cfg.out.join(name);
    write_file(&path, contents)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn copy_by_word(s: &AssembledSurface, word: &str) -> Result<CopyId, CliError> {
    s.ball
        .vertices()
        .iter()
        .position(|g| g.word_label() == word)
        .map(CopyId)
        .ok_or_else(|| CliError::input(format!("no copy with word {word:?} in the ball")))
}

#[derive(Serialize)]
struct VertexOut<'a> {
    word: String,
    matrix: &'a Mat2Q,
}

#[derive(Serialize)]
struct BallOut<'a> {
    radius: usize,
    generators: &'a [Mat2Q],
    vertices: Vec<VertexOut<'a>>,
    edges: Vec<(usize, usize, usize)>,
    contraction: ContractionReport,
}

fn ball_json(ball: &CayleyBall, contraction: ContractionReport) -> Result<String, IoError> {
    to_json(&BallOut {
        radius: ball.radius(),
        generators: ball.generators().generators(),
        vertices: ball
            .vertices()
            .iter()
            .map(|g| VertexOut {
                word: g.word_label(),
                matrix: &g.matrix,
            })
            .collect(),
        edges: ball.edges().collect(),
        contraction,
    })
}

pub fn group_enumerate(cfg: &RunConfig) -> Result<(), CliError> {
    let h = generators(cfg)?;
    let ball = enumerate_ball(&h, cfg.radius)?;
    let contraction = assert_no_contracting(&ball);
    let passed = contraction.passed();
    println!(
        "{} vertices, radius {}, {} generators (closed under inverses)",
        ball.len(),
        ball.radius(),
        h.len()
    );
    write(cfg, "ball.json", &ball_json(&ball, contraction)?)?;
    write(cfg, "cayley.dot", &cayley_dot(&ball))?;
    if passed {
        println!("no contracting element up to radius {}", ball.radius());
        Ok(())
    } else {
        Err(CliError::failed("the ball contains a contracting element; see ball.json"))
    }
}

pub fn group_ends(cfg: &RunConfig) -> Result<(), CliError> {
    let h = generators(cfg)?;
    let ball = enumerate_ball(&h, cfg.radius)?;
    let profile = ends_profile(
        &ball,
        EndsConfig {
            r_max: cfg.r_max,
            ..EndsConfig::default()
        },
    )?;
    println!("{:>4}  {:>10}", "r", "components");
    for (r, c) in &profile.counts {
        println!("{r:>4}  {c:>10}");
    }
    let class = serde_json::to_value(profile.classification).map_err(IoError::from)?;
    println!("classification: {}", class.as_str().unwrap_or("?"));
    write(cfg, "ends.json", &to_json(&profile)?)
}

pub fn surface_build(cfg: &RunConfig) -> Result<(), CliError> {
    let s = build(cfg)?;
    println!(
        "{} copies, {} inter-copy gluings, {} frontier marks unglued",
        s.surface.num_copies(),
        s.surface.registry().inter_len(),
        s.frontier_unglued.len()
    );
    write(cfg, "manifest.json", &manifest_json(&s)?)
}

fn glued_endpoint_candidates(s: &AssembledSurface, copy: CopyId) -> Vec<MarkRef> {
    let j = s.num_generators();
    let mut out = vec![
        MarkRef {
            sheet: SheetId::new(copy, SheetKind::Base),
            family: Family::M,
            index: 1,
        },
        MarkRef {
            sheet: SheetId::new(copy, SheetKind::Cover),
            family: Family::Mtilde,
            index: 2,
        },
    ];
    for k in 1..=j {
        out.push(MarkRef {
            sheet: SheetId::new(copy, SheetKind::Buffer1(k)),
            family: Family::McheckJ(k),
            index: 1,
        });
        out.push(MarkRef {
            sheet: SheetId::new(copy, SheetKind::Buffer2(k)),
            family: Family::Lprime,
            index: 2,
        });
        out.push(MarkRef {
            sheet: SheetId::new(copy, SheetKind::Base),
            family: Family::Mj(k),
            index: 1,
        });
        for m in [
            MarkRef {
                sheet: SheetId::new(copy, SheetKind::Base),
                family: Family::Mneg(k),
                index: 1,
            },
            MarkRef {
                sheet: SheetId::new(copy, SheetKind::Buffer2(k)),
                family: Family::HjCheck(k),
                index: 1,
            },
        ] {
            if s.surface.partner(&m).is_ok() {
                out.push(m);
            }
        }
    }
    out
}

fn spot(s: &AssembledSurface, label: String, p: SurfacePoint, k: f64, tolerance: f64, steps: usize) -> Result<AngleSpot, CliError> {
    let report = angle_at(
        &s.surface,
        &p,
        &ProbeConfig {
            steps,
            ..ProbeConfig::default()
        },
    )?;
    let expected = k * TAU;
    Ok(AngleSpot {
        label,
        expected,
        measured: report.measured_angle,
        tolerance,
        passed: (report.measured_angle - expected).abs() <= tolerance,
    })
}

/// Seeded cone-angle spot checks: glued mark endpoints (4π), branch points
/// (6π) and generic points of the base plane (2π).
fn angle_spots(s: &AssembledSurface, cfg: &RunConfig) -> Result<Vec<AngleSpot>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let copies: Vec<CopyId> = s.surface.copy_ids().collect();
    let mut out = Vec::new();
    for _ in 0..4 {
        let copy = *copies.choose(&mut rng).expect("the ball contains the identity");
        let m = *glued_endpoint_candidates(s, copy).choose(&mut rng).expect("candidates are never empty");
        let end = if rng.gen_bool(0.5) { End::Start } else { End::Finish };
        let (p, q) = s.surface.endpoints_f(&m)?;
        let pos = if end == End::Start { p } else { q };
        out.push(spot(s, format!("{m} {end:?}"), SurfacePoint::new(m.sheet, pos), 2.0, 1e-4, cfg.probe_steps)?);
    }
    for &copy in copies.choose_multiple(&mut rng, 3) {
        let p = s.surface.cone_point(&ConeSite::CoverOrigin(copy))?;
        out.push(spot(s, format!("branch point of copy {}", copy.0), p, 3.0, 1e-4, cfg.probe_steps)?);
    }
    for _ in 0..4 {
        let copy = *copies.choose(&mut rng).expect("the ball contains the identity");
        let pos = Vec2F::new(rng.gen_range(1.2..12.0), rng.gen_range(0.2..0.8));
        let p = SurfacePoint::new(SheetId::new(copy, SheetKind::Base), pos.clone());
        out.push(spot(s, format!("base point ({:.3}, {:.3}) of copy {}", pos.x, pos.y, copy.0), p, 1.0, 1e-6, cfg.probe_steps)?);
    }
    Ok(out)
}

pub fn surface_check(cfg: &RunConfig) -> Result<(), CliError> {
    let s = build(cfg)?;
    let gluings = validate_gluings(&s, cfg.index_bound)?;
    println!(
        "gluings: {} pairs checked, {} violations",
        gluings.pairs_checked,
        gluings.violations.len()
    );
    let copies: Vec<CopyId> = s.surface.copy_ids().collect();
    let separation = copies
        .par_iter()
        .map(|&c| check_separation(&s, c, None))
        .collect::<Result<Vec<_>, _>>()?;
    let worst = separation.iter().map(|r| r.lower_bound).fold(f64::INFINITY, f64::min);
    println!("separation: smallest lower bound {worst:.6} over {} copies", separation.len());
    let angles = angle_spots(&s, cfg)?;
    println!(
        "cone angles: {}/{} spot checks within tolerance",
        angles.iter().filter(|a| a.passed).count(),
        angles.len()
    );
    let marker_copies: Vec<CopyId> = copies.iter().copied().take(2).collect();
    let markers = marker_copies
        .par_iter()
        .map(|&c| singularity_marker_check(&s, c, None))
        .collect::<Result<Vec<_>, _>>()?;
    println!(
        "saddle markers: {}/{} copies pass",
        markers.iter().filter(|m| m.passed).count(),
        markers.len()
    );
    let report = SurfaceCheckReport::new(gluings, separation, angles, markers);
    write(cfg, "report.json", &to_json(&report)?)?;
    if report.passed {
        println!("all checks passed");
        Ok(())
    } else {
        Err(CliError::failed("surface check failed; see report.json"))
    }
}

#[derive(Serialize)]
struct CensusRow {
    #[serde(flatten)]
    census: SurfaceEndsCensus,
    ends_estimate: usize,
}

pub fn surface_ends(cfg: &RunConfig) -> Result<(), CliError> {
    let s = build(cfg)?;
    let mut rows = Vec::new();
    println!("{:>5}  {:>8}  {:>8}  {:>5}  {:>13}", "R_cut", "interior", "frontier", "total", "ends_estimate");
    for census in census_profile(&s)? {
        let est = ends_estimate(&s.ball, census.cut_radius)?.component_count;
        println!(
            "{:>5}  {:>8}  {:>8}  {:>5}  {:>13}",
            census.cut_radius, census.interior_copy_count, census.frontier_component_count, census.total, est
        );
        rows.push(CensusRow {
            census,
            ends_estimate: est,
        });
    }
    write(cfg, "census.json", &to_json(&rows)?)?;
    if rows.iter().all(|r| r.census.frontier_component_count == r.ends_estimate) {
        Ok(())
    } else {
        Err(CliError::failed("census frontier counts disagree with the group end estimates"))
    }
}

pub fn surface_trace(
    cfg: &RunConfig,
    copy: &str,
    sheet: &str,
    (x, y): (f64, f64),
    fold: u8,
    angle: f64,
) -> Result<(), CliError> {
    let s = build(cfg)?;
    let copy = copy_by_word(&s, copy)?;
    let kind = SheetKind::parse(sheet).ok_or_else(|| CliError::from(IoError::UnknownSheet(sheet.to_string())))?;
    let start = SurfacePoint::new(SheetId::new(copy, kind), Vec2F::new(x, y)).on_fold(fold);
    let config = TraceConfig {
        max_len: cfg.max_len,
        event_budget: cfg.event_budget,
    };
    let path = trace_geodesic(&s.surface, &start, &Vec2F::from_angle(angle), &config)?;
    println!(
        "length {:.6}, {} segments, {} crossings, stopped: {:?}",
        path.total_length,
        path.segments.len(),
        path.crossings.len(),
        path.termination
    );
    write(cfg, "trace.json", &path_json(&path)?)
}

#[derive(Serialize)]
struct ConstraintOut {
    matrix: Mat2Q,
    candidate: Option<String>,
}

#[derive(Serialize)]
struct VeechOut {
    relabel: Vec<psv_core::psv::RelabelReport>,
    constraint: Option<ConstraintOut>,
}

pub fn veech_check(cfg: &RunConfig, matrix: Option<&str>) -> Result<(), CliError> {
    let s = build(cfg)?;
    let relabel = s
        .ball
        .vertices()
        .par_iter()
        .map(|g| veech_relabel_check(&s, &g.matrix))
        .collect::<Result<Vec<_>, _>>()?;
    let failures: usize = relabel.iter().map(|r| r.failures.len()).sum();
    let checked: usize = relabel.iter().map(|r| r.checked).sum();
    let unverifiable: usize = relabel.iter().map(|r| r.unverifiable).sum();
    println!(
        "relabeling: {} elements, {checked} pairs checked, {unverifiable} unverifiable, {failures} failures",
        relabel.len()
    );
    let constraint = match matrix {
        None => None,
        Some(text) => {
            let d: Mat2Q = serde_json::from_str(text).map_err(|e| CliError::input(format!("bad matrix: {e}")))?;
            let candidate = veech_constraint_check(&s, &d)?.map(|g| g.word_label());
            println!("derivative candidate for {d}: {}", candidate.as_deref().unwrap_or("none"));
            Some(ConstraintOut { matrix: d, candidate })
        }
    };
    write(cfg, "veech.json", &to_json(&VeechOut { relabel, constraint })?)?;
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::failed("relabeling does not preserve the gluings; see veech.json"))
    }
}

fn svg_name(copy: &str, kind: SheetKind) -> String {
    format!("sheet-{}-{}.svg", copy.replace('.', "_"), kind.label().replace(':', "-"))
}

pub fn render(cfg: &RunConfig, target: &str, copy_word: &str) -> Result<(), CliError> {
    let s = build(cfg)?;
    let graph = |cfg: &RunConfig| write(cfg, "copies.dot", &copy_graph_dot(&s));
    match target {
        "graph" => graph(cfg),
        "all" => {
            let copy = copy_by_word(&s, copy_word)?;
            for kind in SheetKind::all(s.num_generators()) {
                write(cfg, &svg_name(copy_word, kind), &sheet_svg(&s, SheetId::new(copy, kind), None)?)?;
            }
            graph(cfg)
        }
        label => {
            let copy = copy_by_word(&s, copy_word)?;
            let kind = SheetKind::parse(label).ok_or_else(|| IoError::UnknownSheet(label.to_string()))?;
            write(cfg, &svg_name(copy_word, kind), &sheet_svg(&s, SheetId::new(copy, kind), None)?)
        }
    }
}
