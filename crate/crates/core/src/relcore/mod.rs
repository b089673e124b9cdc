//! Extensional relations over finite domains and the procedural relational
//! algebra on them: product, projection, two-column selection, bonding and
//! the boolean operations.

mod domain;
mod json;
mod relation;

pub use domain::{same_domain, DomainSet, ElemId};
pub use json::{RelationFile, RelationLoad};
pub use relation::{all_tuples, bond, Relation, Tuple};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RelError {
    #[error("domain must contain at least one element")]
    EmptyDomain,
    #[error("duplicate domain element {0:?}")]
    DuplicateElement(String),
    #[error("element {0:?} is not in the domain")]
    UnknownElement(String),
    #[error("relations live on different domains")]
    DomainMismatch,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("tuple has length {found}, relation arity is {expected}")]
    TupleLength { expected: usize, found: usize },
    #[error("place {place} out of range for arity {arity}")]
    PlaceOutOfRange { place: usize, arity: usize },
    #[error("place {0} used twice")]
    SamePlace(usize),
    #[error("pluridentity of adicity 0 is undefined")]
    ZeroAdicity,
    #[error("invalid place partition: {0}")]
    BadPartition(String),
    #[error("malformed relation file: {0}")]
    Json(#[from] serde_json::Error),
}

/// A partition of the places `0..arity` into disjoint non-empty blocks.
///
/// Blocks are kept sorted internally and ordered by their smallest place.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlacePartition {
    blocks: Vec<Vec<usize>>,
}

impl PlacePartition {
    pub fn new(arity: usize, blocks: Vec<Vec<usize>>) -> Result<Self, RelError> {
        let mut seen = vec![false; arity];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(RelError::BadPartition("empty block".into()));
            }
            for &p in b {
                if p >= arity {
                    return Err(RelError::PlaceOutOfRange { place: p, arity });
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(RelError::BadPartition(format!("place {p} appears twice")));
                }
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(RelError::BadPartition(format!("place {p} is not covered")));
        }
        if blocks.len() < 2 {
            return Err(RelError::BadPartition("need at least two blocks".into()));
        }
        blocks.sort();
        Ok(Self { blocks })
    }

    /// The two-block cut `{places} | rest`.
    pub fn bipartition(arity: usize, first: &[usize]) -> Result<Self, RelError> {
        let rest: Vec<usize> = (0..arity).filter(|p| !first.contains(p)).collect();
        Self::new(arity, vec![first.to_vec(), rest])
    }

    /// All bipartitions of `0..arity`, each listed once with place 0 in the
    /// first block, in increasing order of the first block's bitmask.
    pub fn all_bipartitions(arity: usize) -> Vec<PlacePartition> {
        if arity < 2 {
            return Vec::new();
        }
        let full = (1u64 << arity) - 1;
        (0..full)
            .filter(|mask| mask & 1 == 1)
            .map(|mask| {
                let first: Vec<usize> = (0..arity).filter(|p| mask >> p & 1 == 1).collect();
                Self::bipartition(arity, &first).expect("mask is a proper subset")
            })
            .collect()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn arity(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}
