use std::collections::BTreeMap;

use serde::Serialize;

use crate::surface::{CopyId, Family, MarkRef, SheetId, SheetKind};

use super::{AssembledSurface, PsvError};

/// Truncated end count of the surface at a core radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceEndsCensus {
    pub radius: usize,
    pub cut_radius: usize,
    /// Copies inside the core; each leaves its own complementary component.
    pub interior_copy_count: usize,
    /// Components of the copies at word length `≥ R_cut` reaching the ball frontier.
    pub frontier_component_count: usize,
    pub total: usize,
}

/// Copy adjacency read off the inter-copy gluings of the registry.
fn copy_graph(s: &AssembledSurface) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); s.surface.num_copies()];
    for (a, b) in s.surface.registry().inter_pairs() {
        let (u, v) = (a.sheet.copy.0, b.sheet.copy.0);
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

pub fn surface_ends_census(s: &AssembledSurface, cut: usize) -> Result<SurfaceEndsCensus, PsvError> {
    let radius = s.ball.radius();
    if cut >= radius {
        return Err(PsvError::InvalidCut { cut, radius });
    }
    let len = |v: usize| s.ball.word_length(v);
    let n = s.surface.num_copies();
    let interior_copy_count = (0..n).filter(|&v| len(v) <= cut).count();
    let adj = copy_graph(s);
    let mut seen = vec![false; n];
    let mut frontier_component_count = 0;
    for start in (0..n).filter(|&v| len(v) == radius) {
        if seen[start] {
            continue;
        }
        frontier_component_count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] && len(w) >= cut {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    Ok(SurfaceEndsCensus {
        radius,
        cut_radius: cut,
        interior_copy_count,
        frontier_component_count,
        total: interior_copy_count + frontier_component_count,
    })
}

/// Census for every cut radius `0..R`.
pub fn census_profile(s: &AssembledSurface) -> Result<Vec<SurfaceEndsCensus>, PsvError> {
    (0..s.ball.radius()).map(|r| surface_ends_census(s, r)).collect()
}

/// A glued handle `(L(i), L′(i))` of one copy lying outside a disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusWitness {
    pub copy: CopyId,
    pub j: usize,
    pub index: u64,
    pub l: MarkRef,
    pub l_prime: MarkRef,
}

/// Smallest `i` such that both `L(i)` (at distance `4i + 2` from the origin
/// of its sheet) and `L′(i)` (at distance `2i + 1`) avoid the closed disk of
/// radius `r`.
pub fn genus_witness_index(r: u64) -> u64 {
    // 2i + 1 > r forces 4i + 2 > r as well.
    r.saturating_sub(1) / 2 + 1
}

pub fn genus_witness(s: &AssembledSurface, copy: CopyId, r: u64) -> Result<GenusWitness, PsvError> {
    s.surface.frame(copy)?;
    let j = 1;
    let index = genus_witness_index(r);
    let l = MarkRef {
        sheet: SheetId::new(copy, SheetKind::Buffer1(j)),
        family: Family::L,
        index,
    };
    let l_prime = s.surface.partner(&l)?;
    Ok(GenusWitness {
        copy,
        j,
        index,
        l,
        l_prime,
    })
}

/// Census rows keyed by cut radius, for tables.
pub fn census_table(rows: &[SurfaceEndsCensus]) -> BTreeMap<usize, (usize, usize, usize)> {
    rows.iter()
        .map(|c| (c.cut_radius, (c.interior_copy_count, c.frontier_component_count, c.total)))
        .collect()
}
