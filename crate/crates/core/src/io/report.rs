use serde::Serialize;

use crate::psv::{GluingReport, MarkerReport, SeparationReport};
use crate::surface::{Crossing, GeodesicPath, MarkRef, SheetId, SurfacePoint, Termination};

use super::{to_json, IoError};

#[derive(Serialize)]
struct PointOut {
    sheet: SheetId,
    fold: u8,
    pos: [f64; 2],
}

impl From<&SurfacePoint> for PointOut {
    fn from(p: &SurfacePoint) -> Self {
        Self {
            sheet: p.sheet,
            fold: p.fold,
            pos: [p.pos.x, p.pos.y],
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TerminationOut {
    MaxLength,
    ConePoint { point: PointOut },
    Budget,
    Frontier { mark: MarkRef },
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CrossingOut {
    Slit { from: MarkRef, to: MarkRef },
    BranchCut { from_fold: u8, to_fold: u8 },
}

#[derive(Serialize)]
struct SegmentOut {
    sheet: SheetId,
    fold: u8,
    from: [f64; 2],
    to: [f64; 2],
}

#[derive(Serialize)]
struct PathOut {
    direction: [f64; 2],
    total_length: f64,
    termination: TerminationOut,
    end: PointOut,
    segments: Vec<SegmentOut>,
    crossings: Vec<CrossingOut>,
}

/// JSON tree of a traced path, floats unrounded.
pub fn path_value(path: &GeodesicPath) -> Result<serde_json::Value, IoError> {
    let out = PathOut {
        direction: [path.direction.x, path.direction.y],
        total_length: path.total_length,
        termination: match &path.termination {
            Termination::MaxLength => TerminationOut::MaxLength,
            Termination::ConePoint(p) => TerminationOut::ConePoint { point: p.into() },
            Termination::Budget => TerminationOut::Budget,
            Termination::Frontier(m) => TerminationOut::Frontier { mark: *m },
        },
        end: (&path.end_point()).into(),
        segments: path
            .segments
            .iter()
            .map(|s| SegmentOut {
                sheet: s.sheet,
                fold: s.fold,
                from: [s.from.x, s.from.y],
                to: [s.to.x, s.to.y],
            })
            .collect(),
        crossings: path
            .crossings
            .iter()
            .map(|c| match c {
                Crossing::Slit { from, to } => CrossingOut::Slit { from: *from, to: *to },
                Crossing::BranchCut { from_fold, to_fold } => CrossingOut::BranchCut {
                    from_fold: *from_fold,
                    to_fold: *to_fold,
                },
            })
            .collect(),
    };
    Ok(serde_json::to_value(out)?)
}

/// Path JSON with floats rounded to twelve significant digits.
pub fn path_json(path: &GeodesicPath) -> Result<String, IoError> {
    to_json(&path_value(path)?)
}

/// One cone-angle spot check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleSpot {
    pub label: String,
    pub expected: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Everything `surface check` verifies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceCheckReport {
    pub gluings: GluingReport,
    pub separation: Vec<SeparationReport>,
    pub angles: Vec<AngleSpot>,
    pub markers: Vec<MarkerReport>,
    pub passed: bool,
}

impl SurfaceCheckReport {
    pub fn new(
        gluings: GluingReport,
        separation: Vec<SeparationReport>,
        angles: Vec<AngleSpot>,
        markers: Vec<MarkerReport>,
    ) -> Self {
        // An inconclusive marker search does not count as a failure.
        let passed = gluings.passed()
            && separation.iter().all(|r| r.passed)
            && angles.iter().all(|a| a.passed)
            && markers.iter().all(|m| m.passed || m.inconclusive);
        Self {
            gluings,
            separation,
            angles,
            markers,
            passed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vec2;
    use crate::surface::{trace_geodesic, CopyId, SheetKind, TraceConfig};
    use crate::testutil::{rot90, surface};

    #[test]
    fn path_json_shape() {
        let s = surface(&rot90(), 2);
        let start = SurfacePoint::new(SheetId::new(CopyId(0), SheetKind::Base), Vec2::new(0.5, -0.5));
        let cfg = TraceConfig {
            max_len: 3.0,
            ..TraceConfig::default()
        };
        let path = trace_geodesic(&s.surface, &start, &Vec2::from_angle(1.1), &cfg).unwrap();
        let text = path_json(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["termination"]["kind"], "max_length");
        assert!(v["segments"].as_array().unwrap().len() >= 2);
        assert_eq!(v["crossings"][0]["kind"], "slit");
        assert_eq!(v["total_length"].as_f64().unwrap(), 3.0);
        // Twelve significant digits at most.
        let x = v["direction"][0].as_f64().unwrap();
        assert_eq!(x, super::super::round_sig(1.1f64.cos(), 12));
    }
}
