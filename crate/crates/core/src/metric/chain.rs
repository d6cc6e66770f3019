use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::Zero;

use super::{FiniteSpace, MetricError};

/// An ordered system of points, by index into a space. Nonempty; regularity
/// (pairwise-distinct entries) is a predicate, not an invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    entries: Vec<usize>,
}

impl Chain {
    /// A chain must contain at least one entry.
    pub fn new(entries: Vec<usize>) -> Option<Chain> {
        if entries.is_empty() {
            None
        } else {
            Some(Chain { entries })
        }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Sum of consecutive distances along the chain. Exact; requires at least
/// two entries.
pub fn chain_length(space: &FiniteSpace, chain: &Chain) -> Result<BigRational, MetricError> {
    if chain.len() < 2 {
        return Err(MetricError::ShortChain { len: chain.len() });
    }
    let n = space.len();
    for &e in chain.entries() {
        if e >= n {
            return Err(MetricError::PointOutOfRange { index: e, size: n });
        }
    }
    let mut total = BigRational::zero();
    for pair in chain.entries().windows(2) {
        total += space.dist(pair[0], pair[1]);
    }
    Ok(total)
}

/// Concatenation `(C;D)`, order preserved. Associative.
pub fn chain_product(c: &Chain, d: &Chain) -> Chain {
    let mut entries = c.entries.clone();
    entries.extend_from_slice(&d.entries);
    Chain { entries }
}

/// True when the entries are pairwise distinct (a regular chain).
pub fn is_regular(chain: &Chain) -> bool {
    let mut seen = HashSet::with_capacity(chain.len());
    chain.entries().iter().all(|e| seen.insert(*e))
}
