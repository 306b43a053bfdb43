use serde::{Deserialize, Serialize};

use super::{CayleyBall, GroupError};

/// Freudenthal–Hopf classes, plus `Undetermined` for truncations that do
/// not settle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndsClass {
    Zero,
    One,
    Two,
    Many,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndsEstimate {
    pub cut_radius: usize,
    pub component_count: usize,
    pub classification: EndsClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EndsConfig {
    /// Largest cut radius examined; `None` means `R − 1`.
    pub r_max: Option<usize>,
    /// Number of trailing cuts that must agree (or strictly grow).
    pub window: usize,
}

impl Default for EndsConfig {
    fn default() -> Self {
        Self {
            r_max: None,
            window: 3,
        }
    }
}

/// Component counts for `r = 1..=r_max` and the resulting class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndsProfile {
    pub radius: usize,
    pub counts: Vec<(usize, usize)>,
    pub classification: EndsClass,
}

/// Number of connected components of the subgraph induced on vertices of
/// word length `≥ r` that reach the frontier sphere `|g| = R`.
///
/// Removing the radius-`(r−1)` ball is the convention under which the
/// rank-two free group gives `4·3^(r−1)` components at cut `r`.
fn frontier_components(ball: &CayleyBall, r: usize) -> usize {
    let n = ball.len();
    let keep = |v: usize| ball.word_length(v) >= r;
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in ball.frontier() {
        if seen[start] || !keep(start) {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for j in ball.generators().indices() {
                if let Some(w) = ball.neighbor(v, j) {
                    if keep(w) && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
    }
    count
}

/// Truncated end count at a single cut radius. The classification is taken
/// from the full profile with default settings.
pub fn ends_estimate(ball: &CayleyBall, r: usize) -> Result<EndsEstimate, GroupError> {
    if r >= ball.radius() {
        return Err(GroupError::InvalidCut {
            cut: r,
            radius: ball.radius(),
        });
    }
    let component_count = frontier_components(ball, r);
    let classification = ends_profile(ball, EndsConfig::default())?.classification;
    Ok(EndsEstimate {
        cut_radius: r,
        component_count,
        classification,
    })
}

pub fn ends_profile(ball: &CayleyBall, config: EndsConfig) -> Result<EndsProfile, GroupError> {
    let radius = ball.radius();
    let r_max = config.r_max.unwrap_or(radius.saturating_sub(1));
    if radius > 0 && r_max >= radius {
        return Err(GroupError::InvalidCut { cut: r_max, radius });
    }
    let counts: Vec<(usize, usize)> = (1..=r_max).map(|r| (r, frontier_components(ball, r))).collect();
    let classification = classify(ball, &counts, config.window.max(2));
    Ok(EndsProfile {
        radius,
        counts,
        classification,
    })
}

fn classify(ball: &CayleyBall, counts: &[(usize, usize)], window: usize) -> EndsClass {
    if ball.is_stabilized() {
        return EndsClass::Zero;
    }
    if counts.len() < window {
        return EndsClass::Undetermined;
    }
    let tail: Vec<usize> = counts[counts.len() - window..].iter().map(|&(_, c)| c).collect();
    if tail.iter().all(|&c| c == tail[0]) {
        match tail[0] {
            1 => EndsClass::One,
            2 => EndsClass::Two,
            _ => EndsClass::Undetermined,
        }
    } else if tail.windows(2).all(|w| w[1] > w[0]) {
        EndsClass::Many
    } else {
        EndsClass::Undetermined
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_ball, GenSet};
    use crate::linalg::Mat2;
    use crate::scalar::int;
    use std::collections::{HashMap, HashSet};

    fn sanov() -> GenSet {
        GenSet::validate(&[Mat2::from_ints(1, 2, 0, 1), Mat2::from_ints(1, 0, 2, 1)]).unwrap()
    }

    /// Independent oracle: components of the 4-regular tree truncated at
    /// depth R after deleting depths < r, built from reduced words alone.
    fn tree_oracle(radius: usize, r: usize) -> usize {
        // letters 0..4, inverse of l is l ^ 1
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..4u8 {
                    if w.last().is_some_and(|&p| p == l ^ 1) {
                        continue;
                    }
                    let mut x: Vec<u8> = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let set: HashSet<Vec<u8>> = words.iter().filter(|w| w.len() >= r).cloned().collect();
        let mut parent: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
        fn root(p: &HashMap<Vec<u8>, Vec<u8>>, w: &[u8]) -> Vec<u8> {
            let mut cur = w.to_vec();
            while let Some(n) = p.get(&cur) {
                cur = n.clone();
            }
            cur
        }
        for w in &set {
            if w.len() > r {
                let up = w[..w.len() - 1].to_vec();
                if set.contains(&up) {
                    let (a, b) = (root(&parent, w), root(&parent, &up));
                    if a != b {
                        parent.insert(a, b);
                    }
                }
            }
        }
        let roots: HashSet<Vec<u8>> = set
            .iter()
            .filter(|w| w.len() == radius)
            .map(|w| root(&parent, w))
            .collect();
        roots.len()
    }

    #[test]
    fn finite_group_has_no_frontier() {
        let h = GenSet::validate(&[Mat2::rot90()]).unwrap();
        let ball = enumerate_ball(&h, 6).unwrap();
        let e = ends_estimate(&ball, 2).unwrap();
        assert_eq!(e.component_count, 0);
        assert_eq!(e.classification, EndsClass::Zero);
    }

    #[test]
    fn infinite_cyclic_has_two() {
        let h = GenSet::validate(&[Mat2::diag(int(2), int(1))]).unwrap();
        let ball = enumerate_ball(&h, 6).unwrap();
        for r in 1..6 {
            assert_eq!(ends_estimate(&ball, r).unwrap().component_count, 2);
        }
        assert_eq!(ends_estimate(&ball, 2).unwrap().classification, EndsClass::Two);
    }

    #[test]
    fn free_group_matches_tree_oracle() {
        let ball = enumerate_ball(&sanov(), 4).unwrap();
        assert_eq!(tree_oracle(4, 1), 4);
        for r in 0..4 {
            assert_eq!(frontier_components(&ball, r), tree_oracle(4, r), "r = {r}");
        }
        assert_eq!(ends_estimate(&ball, 1).unwrap().component_count, 4);
        assert_eq!(ends_estimate(&ball, 1).unwrap().classification, EndsClass::Many);
    }

    #[test]
    fn cut_must_be_inside() {
        let h = GenSet::validate(&[Mat2::diag(int(2), int(1))]).unwrap();
        let ball = enumerate_ball(&h, 3).unwrap();
        assert!(matches!(ends_estimate(&ball, 3), Err(GroupError::InvalidCut { .. })));
    }

    #[test]
    fn short_profiles_are_undetermined() {
        let h = GenSet::validate(&[Mat2::diag(int(2), int(1))]).unwrap();
        let ball = enumerate_ball(&h, 2).unwrap();
        assert_eq!(ends_profile(&ball, EndsConfig::default()).unwrap().classification, EndsClass::Undetermined);
    }
}
