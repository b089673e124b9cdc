use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::RelError;

/// Index of an element inside its [`DomainSet`].
pub type ElemId = u32;

/// A finite, ordered universe of discourse.
///
/// Element names are opaque. The order in which they were given fixes the
/// canonical tuple order of every relation over the domain.
#[derive(Clone)]
pub struct DomainSet {
    elements: Vec<String>,
    index: HashMap<String, ElemId>,
}

impl DomainSet {
    pub fn new<I, S>(elements: I) -> Result<Arc<Self>, RelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(RelError::EmptyDomain);
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i as ElemId).is_some() {
                return Err(RelError::DuplicateElement(e.clone()));
            }
        }
        Ok(Arc::new(Self { elements, index }))
    }

    /// Domain `{e0, e1, ...}` of the given size, mostly for tests and sweeps.
    pub fn numbered(size: usize) -> Arc<Self> {
        let names: Vec<String> = if size <= 26 {
            (0..size)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect()
        } else {
            (0..size).map(|i| format!("e{i}")).collect()
        };
        Self::new(names).expect("numbered domain is non-empty with distinct names")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, id: ElemId) -> &str {
        &self.elements[id as usize]
    }

    pub fn id(&self, name: &str) -> Option<ElemId> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> {
        0..self.elements.len() as ElemId
    }

    /// A new domain with `extra` appended after the existing elements.
    pub fn extended<I, S>(&self, extra: I) -> Result<Arc<Self>, RelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let all = self
            .elements
            .iter()
            .cloned()
            .chain(extra.into_iter().map(Into::into));
        Self::new(all)
    }

    /// True when `self`'s elements form a prefix of `other`'s elements.
    pub fn is_prefix_of(&self, other: &DomainSet) -> bool {
        other.elements.len() >= self.elements.len()
            && self.elements.iter().zip(&other.elements).all(|(a, b)| a == b)
    }
}

impl PartialEq for DomainSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for DomainSet {}

impl Hash for DomainSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl fmt::Debug for DomainSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.elements).finish()
    }
}

/// Two domain handles describe the same universe.
pub fn same_domain(a: &Arc<DomainSet>, b: &Arc<DomainSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
