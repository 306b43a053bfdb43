use serde::{Deserialize, Serialize};

use crate::linalg::Mat2;
use crate::scalar::{Rational, Scalar};

use super::{is_contracting, GroupError};

/// Finite generating set `H = {h_1, …, h_J}`, closed under inversion.
///
/// Generator indices are 1-based throughout the crate: the index `j` is the
/// same `j` that positions the mark row `M^j` at height `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSet {
    generators: Vec<Mat2<Rational>>,
    /// `inverse[j-1]` is the 1-based index of `h_j⁻¹`.
    inverse: Vec<usize>,
}

impl GenSet {
    /// Checks orientation and non-contraction, then closes under inversion.
    ///
    /// The raw generators keep their order (duplicates dropped); missing
    /// inverses are appended in the order their originals appear.
    pub fn validate(raw: &[Mat2<Rational>]) -> Result<Self, GroupError> {
        if raw.is_empty() {
            return Err(GroupError::Empty);
        }
        for (i, g) in raw.iter().enumerate() {
            let det = g.det();
            if det <= Rational::from_int(0) {
                return Err(GroupError::Orientation { index: i + 1, det });
            }
            if is_contracting(g)? {
                return Err(GroupError::Contracting { index: i + 1 });
            }
        }
        let mut generators: Vec<Mat2<Rational>> = Vec::new();
        for g in raw {
            if !generators.contains(g) {
                generators.push(g.clone());
            }
        }
        let originals = generators.len();
        for k in 0..originals {
            let inv = generators[k].inverse().expect("positive determinant");
            if !generators.contains(&inv) {
                generators.push(inv);
            }
        }
        // Inverses of non-contracting generators may contract (e.g. 2·Id).
        for (k, g) in generators.iter().enumerate().skip(originals) {
            if is_contracting(g)? {
                return Err(GroupError::Contracting { index: k + 1 });
            }
        }
        let inverse = generators
            .iter()
            .map(|g| {
                let inv = g.inverse().expect("positive determinant");
                generators.iter().position(|h| *h == inv).expect("closed") + 1
            })
            .collect();
        Ok(Self { generators, inverse })
    }

    /// Number of generators `J`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `h_j`, 1-based.
    pub fn generator(&self, j: usize) -> &Mat2<Rational> {
        &self.generators[j - 1]
    }

    pub fn generators(&self) -> &[Mat2<Rational>] {
        &self.generators
    }

    /// Index of `h_j⁻¹`, 1-based.
    pub fn inverse_index(&self, j: usize) -> usize {
        self.inverse[j - 1]
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.generators.len()
    }

    pub fn contains_identity(&self) -> bool {
        self.generators.iter().any(Mat2::is_identity)
    }
}
