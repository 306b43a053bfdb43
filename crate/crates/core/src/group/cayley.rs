use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::linalg::Mat2;
use crate::scalar::Rational;

use super::{is_contracting, GenSet, GroupError};

pub const DEFAULT_VERTEX_BUDGET: usize = 200_000;

/// A group element together with the shortlex-least word found by BFS.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElement {
    pub matrix: Mat2<Rational>,
    /// 1-based generator indices; the element is `h_{w_1} · h_{w_2} ⋯`.
    pub word: Vec<usize>,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self {
            matrix: Mat2::identity(),
            word: Vec::new(),
        }
    }

    pub fn word_length(&self) -> usize {
        self.word.len()
    }

    pub fn word_label(&self) -> String {
        word_label(&self.word)
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for GroupElement {}

/// `"e"` for the empty word, otherwise the indices joined by dots.
pub fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(ToString::to_string).collect::<Vec<_>>().join(".")
    }
}

/// Word-length ball of radius `R` in `Cay(G, H)`.
///
/// Vertices are stored in BFS order, so vertex 0 is the identity and word
/// lengths are non-decreasing along the vertex list.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    radius: usize,
    generators: GenSet,
    vertices: Vec<GroupElement>,
    index: HashMap<Mat2<Rational>, usize>,
    /// `neighbors[v][j-1]` is the vertex `v · h_j` when it lies in the ball.
    neighbors: Vec<Vec<Option<usize>>>,
}

impl PartialEq for CayleyBall {
    fn eq(&self, other: &Self) -> bool {
        self.radius == other.radius
            && self.generators == other.generators
            && self.vertices.len() == other.vertices.len()
            && self
                .vertices
                .iter()
                .zip(&other.vertices)
                .all(|(a, b)| a.matrix == b.matrix && a.word == b.word)
            && self.neighbors == other.neighbors
    }
}

impl CayleyBall {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn generators(&self) -> &GenSet {
        &self.generators
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, v: usize) -> &GroupElement {
        &self.vertices[v]
    }

    pub fn index_of(&self, m: &Mat2<Rational>) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn word_length(&self, v: usize) -> usize {
        self.vertices[v].word_length()
    }

    /// Neighbor `v · h_j` (1-based `j`) if materialized.
    pub fn neighbor(&self, v: usize, j: usize) -> Option<usize> {
        self.neighbors[v][j - 1]
    }

    /// Directed labelled edges `(g, j)` meaning `g → g·h_j`, both in the ball.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(v, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(k, n)| n.map(|w| (v, k + 1, w)))
        })
    }

    /// Vertices at word length exactly `R`.
    pub fn frontier(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.word_length(v) == self.radius)
    }

    pub fn is_frontier(&self, v: usize) -> bool {
        self.word_length(v) == self.radius
    }

    /// `ball(R) = ball(R − 1)`: no element needs a word of length `R`.
    pub fn is_stabilized(&self) -> bool {
        self.frontier().next().is_none()
    }

    /// Largest word length present (the diameter once stabilized).
    pub fn max_word_length(&self) -> usize {
        self.vertices.last().map_or(0, GroupElement::word_length)
    }

    /// Test hook: inserts an extra vertex with the given word (no edges).
    #[doc(hidden)]
    pub fn inject_vertex(&mut self, element: GroupElement) -> usize {
        let v = self.vertices.len();
        self.index.insert(element.matrix.clone(), v);
        self.vertices.push(element);
        self.neighbors.push(vec![None; self.generators.len()]);
        v
    }
}

pub fn enumerate_ball(h: &GenSet, radius: usize) -> Result<CayleyBall, GroupError> {
    enumerate_ball_with_budget(h, radius, DEFAULT_VERTEX_BUDGET)
}

/// Breadth-first closure of `{Id}` under right multiplication by `H`.
///
/// Generators are tried in index order, so each vertex receives the
/// shortlex-least word among its shortest words.
pub fn enumerate_ball_with_budget(
    h: &GenSet,
    radius: usize,
    budget: usize,
) -> Result<CayleyBall, GroupError> {
    let mut ball = CayleyBall {
        radius,
        generators: h.clone(),
        vertices: Vec::new(),
        index: HashMap::new(),
        neighbors: Vec::new(),
    };
    ball.inject_vertex(GroupElement::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let depth = ball.word_length(v);
        for j in h.indices() {
            let product = &ball.vertices[v].matrix * h.generator(j);
            let w = match ball.index_of(&product) {
                Some(w) => Some(w),
                None if depth < radius => {
                    if ball.len() >= budget {
                        let reached = depth;
                        ball.fill_edges();
                        return Err(GroupError::Truncated {
                            budget,
                            radius,
                            reached,
                            partial: Box::new(ball),
                        });
                    }
                    let mut word = ball.vertices[v].word.clone();
                    word.push(j);
                    let w = ball.inject_vertex(GroupElement {
                        matrix: product,
                        word,
                    });
                    queue.push_back(w);
                    Some(w)
                }
                None => None,
            };
            ball.neighbors[v][j - 1] = w;
        }
    }
    ball.fill_edges();
    Ok(ball)
}

impl CayleyBall {
    /// Records every edge between two vertices already in the ball.
    fn fill_edges(&mut self) {
        for v in 0..self.len() {
            for j in self.generators.indices() {
                if self.neighbors[v][j - 1].is_none() {
                    let product = &self.vertices[v].matrix * self.generators.generator(j);
                    self.neighbors[v][j - 1] = self.index_of(&product);
                }
            }
        }
    }
}

/// Outcome of checking every ball vertex for contraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub checked_radius: usize,
    pub checked: usize,
    /// Words (1-based generator indices) of contracting vertices.
    pub offending: Vec<Vec<usize>>,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.offending.is_empty()
    }
}

/// Radius-`R` certificate only: it says nothing about longer words.
pub fn assert_no_contracting(ball: &CayleyBall) -> ContractionReport {
    let offending = ball
        .vertices()
        .iter()
        .filter(|g| is_contracting(&g.matrix).unwrap_or(false))
        .map(|g| g.word.clone())
        .collect();
    ContractionReport {
        checked_radius: ball.radius(),
        checked: ball.len(),
        offending,
    }
}
