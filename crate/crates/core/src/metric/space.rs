use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// A labeled point of a space. The index is the position in the space's
/// point order; labels are pairwise distinct within a space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointId {
    pub index: usize,
    pub label: String,
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("space must contain at least one point")]
    Empty,
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("distance table is {rows}x{cols}, expected {n}x{n}")]
    BadShape { rows: usize, cols: usize, n: usize },
    #[error("negative distance at ({i}, {j})")]
    NegativeDistance { i: usize, j: usize },
    #[error("nonzero diagonal entry at point {0}")]
    NonzeroDiagonal(usize),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("missing distance between `{a}` and `{b}`")]
    MissingDistance { a: String, b: String },
}

/// A finite symmetric-space candidate: points and an exact distance table.
///
/// Construction enforces only what the definition of a symmetric requires of
/// the table shape — nonnegative, finite, zero diagonal. Symmetry itself is a
/// checked axiom, not an assumption, so asymmetric tables are representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    dist: Vec<Vec<BigRational>>,
    by_label: HashMap<String, usize>,
}

impl FiniteSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<BigRational>>) -> Result<Self, SpaceError> {
        let n = labels.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        let mut by_label = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if by_label.insert(l.clone(), i).is_some() {
                return Err(SpaceError::DuplicateLabel(l.clone()));
            }
        }
        if dist.len() != n {
            return Err(SpaceError::BadShape { rows: dist.len(), cols: 0, n });
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(SpaceError::BadShape { rows: dist.len(), cols: row.len(), n });
            }
            for (j, v) in row.iter().enumerate() {
                if v.is_negative() {
                    return Err(SpaceError::NegativeDistance { i, j });
                }
            }
            if !dist[i][i].is_zero() {
                return Err(SpaceError::NonzeroDiagonal(i));
            }
        }
        Ok(FiniteSpace { labels, dist, by_label })
    }

    /// Builds a space from one-sided entries, mirroring each given pair.
    /// This is the symmetric-closure loader: the result always satisfies
    /// symmetry. Unspecified off-diagonal pairs are an error.
    pub fn from_symmetric_entries(
        labels: Vec<String>,
        entries: &[(String, String, BigRational)],
    ) -> Result<Self, SpaceError> {
        let n = labels.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        let mut by_label: HashMap<String, usize> = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if by_label.insert(l.clone(), i).is_some() {
                return Err(SpaceError::DuplicateLabel(l.clone()));
            }
        }
        let mut dist = vec![vec![BigRational::zero(); n]; n];
        let mut given = vec![vec![false; n]; n];
        for (a, b, v) in entries {
            let i = *by_label.get(a).ok_or_else(|| SpaceError::UnknownLabel(a.clone()))?;
            let j = *by_label.get(b).ok_or_else(|| SpaceError::UnknownLabel(b.clone()))?;
            if v.is_negative() {
                return Err(SpaceError::NegativeDistance { i, j });
            }
            if i == j {
                if !v.is_zero() {
                    return Err(SpaceError::NonzeroDiagonal(i));
                }
                continue;
            }
            dist[i][j] = v.clone();
            dist[j][i] = v.clone();
            given[i][j] = true;
            given[j][i] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !given[i][j] {
                    return Err(SpaceError::MissingDistance {
                        a: labels[i].clone(),
                        b: labels[j].clone(),
                    });
                }
            }
        }
        Ok(FiniteSpace { labels, dist, by_label })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn point(&self, index: usize) -> PointId {
        PointId { index, label: self.labels[index].clone() }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.by_label.get(label).copied()
    }

    pub fn dist(&self, i: usize, j: usize) -> &BigRational {
        &self.dist[i][j]
    }

    /// The space with every distance multiplied by a positive rational.
    pub fn scaled(&self, factor: &BigRational) -> FiniteSpace {
        assert!(factor.is_positive(), "scale factor must be positive");
        let dist = self
            .dist
            .iter()
            .map(|row| row.iter().map(|v| v * factor).collect())
            .collect();
        FiniteSpace { labels: self.labels.clone(), dist, by_label: self.by_label.clone() }
    }
}
