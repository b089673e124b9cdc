use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{DomainSet, RelError, Relation};

/// On-disk form of a relation:
/// `{"name": str, "domain": [str,...], "arity": int, "tuples": [[str,...],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RelationFile {
    pub name: String,
    pub domain: Vec<String>,
    pub arity: usize,
    pub tuples: Vec<Vec<String>>,
}

/// A parsed relation plus the number of duplicate rows that were dropped.
#[derive(Debug, Clone)]
pub struct RelationLoad {
    pub relation: Relation,
    pub duplicates: usize,
}

impl RelationFile {
    pub fn from_relation(r: &Relation) -> Self {
        Self {
            name: r.name().to_string(),
            domain: r.domain().elements().to_vec(),
            arity: r.arity(),
            tuples: r.named_tuples(),
        }
    }

    /// Validates and converts. Duplicate rows are dropped with a warning;
    /// entries outside the domain are an error.
    pub fn into_relation(self) -> Result<RelationLoad, RelError> {
        let domain = DomainSet::new(self.domain.iter().cloned())?;
        self.into_relation_on(&domain)
    }

    /// Same as [`RelationFile::into_relation`] but the file's domain must
    /// equal `domain`; the returned relation shares that handle.
    pub fn into_relation_on(self, domain: &Arc<DomainSet>) -> Result<RelationLoad, RelError> {
        if self.domain.as_slice() != domain.elements() {
            return Err(RelError::DomainMismatch);
        }
        let rows = self.tuples.len();
        let relation = Relation::from_names(self.name, domain.clone(), self.arity, self.tuples)?;
        let duplicates = rows - relation.len();
        if duplicates > 0 {
            log::warn!(
                "relation {}: dropped {duplicates} duplicate tuple(s)",
                relation.name()
            );
        }
        Ok(RelationLoad { relation, duplicates })
    }
}

impl Relation {
    pub fn from_json(text: &str) -> Result<RelationLoad, RelError> {
        let file: RelationFile = serde_json::from_str(text)?;
        file.into_relation()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RelationFile::from_relation(self)).expect("plain data serializes")
    }
}
