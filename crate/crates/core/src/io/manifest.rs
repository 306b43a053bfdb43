use serde::{Deserialize, Serialize};

use crate::group::{enumerate_ball, GenSet};
use crate::linalg::Mat2;
use crate::psv::{assemble, AssembledSurface};
use crate::scalar::Rational;
use crate::surface::{CopyId, MarkRef};

use super::IoError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GluingEntry {
    pub from: MarkRef,
    pub to: MarkRef,
}

/// Serialized form of an assembled surface.
///
/// Copies are listed by word length, then lexicographically by word, and
/// marks refer to copies by their position in that list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub group: Vec<Mat2<Rational>>,
    pub radius: usize,
    pub copies: Vec<String>,
    pub gluings: Vec<GluingEntry>,
    pub frontier_unglued: Vec<MarkRef>,
}

pub fn manifest_of(s: &AssembledSurface) -> Manifest {
    let vertices = s.ball.vertices();
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| {
        let (wa, wb) = (&vertices[a].word, &vertices[b].word);
        wa.len().cmp(&wb.len()).then_with(|| wa.cmp(wb))
    });
    let mut position = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let relabel = |mut m: MarkRef| {
        m.sheet.copy = CopyId(position[m.sheet.copy.0]);
        m
    };
    let mut gluings: Vec<GluingEntry> = s
        .surface
        .registry()
        .inter_pairs()
        .map(|(a, b)| {
            let (a, b) = (relabel(a), relabel(b));
            GluingEntry {
                from: a.min(b),
                to: a.max(b),
            }
        })
        .collect();
    gluings.sort();
    let mut frontier_unglued: Vec<MarkRef> = s.frontier_unglued.iter().copied().map(relabel).collect();
    frontier_unglued.sort();
    Manifest {
        group: s.ball.generators().generators().to_vec(),
        radius: s.ball.radius(),
        copies: order.iter().map(|&v| vertices[v].word_label()).collect(),
        gluings,
        frontier_unglued,
    }
}

/// Canonical, byte-stable JSON text of the manifest.
pub fn manifest_json(s: &AssembledSurface) -> Result<String, IoError> {
    let mut out = serde_json::to_string_pretty(&manifest_of(s))?;
    out.push('\n');
    Ok(out)
}

/// Rebuilds the surface described by a manifest and checks that the
/// rebuilt copies and gluings are exactly the ones recorded.
pub fn load_manifest(json: &str) -> Result<AssembledSurface, IoError> {
    let manifest: Manifest = serde_json::from_str(json)?;
    let h = GenSet::validate(&manifest.group)?;
    if h.generators() != manifest.group.as_slice() {
        return Err(IoError::Invalid("group is not closed under inversion".into()));
    }
    let ball = enumerate_ball(&h, manifest.radius)?;
    let s = assemble(&ball, &h)?;
    let rebuilt = manifest_of(&s);
    let mismatch = if rebuilt.copies != manifest.copies {
        Some("copies")
    } else if rebuilt.gluings != manifest.gluings {
        Some("gluings")
    } else if rebuilt.frontier_unglued != manifest.frontier_unglued {
        Some("frontier_unglued")
    } else {
        None
    };
    match mismatch {
        Some(field) => Err(IoError::Invalid(format!("manifest {field} do not match the construction"))),
        None => Ok(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{diag2, rot90, sanov, surface};

    #[test]
    fn round_trip_is_byte_stable() {
        for (h, r) in [(rot90(), 3), (diag2(), 3), (sanov(), 2)] {
            let s = surface(&h, r);
            let text = manifest_json(&s).unwrap();
            let back = load_manifest(&text).unwrap();
            assert_eq!(manifest_json(&back).unwrap(), text);
            let pairs = |a: &AssembledSurface| a.surface.registry().inter_pairs().collect::<Vec<_>>();
            assert_eq!(pairs(&back), pairs(&s));
        }
    }

    #[test]
    fn copies_are_ordered() {
        let m = manifest_of(&surface(&sanov(), 2));
        assert_eq!(&m.copies[..3], &["e", "1", "2"]);
        for w in m.copies.windows(2) {
            let len = |s: &str| if s == "e" { 0 } else { s.split('.').count() };
            assert!(len(&w[0]) <= len(&w[1]));
        }
        assert!(m.gluings.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn tampered_manifest_is_rejected() {
        let s = surface(&rot90(), 3);
        let mut m = manifest_of(&s);
        m.gluings.pop();
        let text = serde_json::to_string(&m).unwrap();
        assert!(matches!(load_manifest(&text), Err(IoError::Invalid(_))));
        assert!(load_manifest("{").is_err());
    }
}
