use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::relcore::{same_domain, DomainSet, RelError, Relation};

use super::FormulaError;

/// Arity of a built-in predicate name: `I<k>` for `k >= 1`, `Delta_<elem>`.
pub fn builtin_arity(name: &str) -> Option<usize> {
    if let Some(k) = name.strip_prefix('I') {
        if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) && !k.starts_with('0') {
            return k.parse().ok();
        }
    }
    match name.strip_prefix("Delta_") {
        Some(e) if !e.is_empty() => Some(1),
        _ => None,
    }
}

/// Name of the pluridentity predicate of the given adicity.
pub fn identity_name(n: usize) -> String {
    format!("I{n}")
}

/// `Delta_<elem>` when the element name fits the predicate grammar.
pub fn delta_name(element: &str) -> Option<String> {
    element
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_')
        .then(|| format!("Delta_{element}"))
}

/// Valid predicate identifier: `[A-Z][A-Za-z0-9_]*`.
pub fn is_pred_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_uppercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Valid variable identifier: `[a-z][a-z0-9_]*`.
pub fn is_var_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Predicate arities known to the parser.
///
/// An *inferring* signature accepts unknown predicates and fixes their arity
/// at first use.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    arities: BTreeMap<String, usize>,
    infer: bool,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn inferring() -> Self {
        Self {
            arities: BTreeMap::new(),
            infer: true,
        }
    }

    pub fn with(mut self, name: impl Into<String>, arity: usize) -> Self {
        self.declare(name, arity);
        self
    }

    pub fn declare(&mut self, name: impl Into<String>, arity: usize) {
        self.arities.insert(name.into(), arity);
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied().or_else(|| builtin_arity(name))
    }

    pub fn infers(&self) -> bool {
        self.infer
    }

    pub fn declared(&self) -> &BTreeMap<String, usize> {
        &self.arities
    }
}

/// Binding of predicate names to relations over one domain.
///
/// Explicit bindings take precedence; otherwise `I<k>` and `Delta_<elem>`
/// resolve to the pluridentity and delta relations of the domain.
#[derive(Debug, Clone)]
pub struct Environment {
    domain: Arc<DomainSet>,
    relations: BTreeMap<String, Relation>,
}

impl Environment {
    pub fn new(domain: Arc<DomainSet>) -> Self {
        Self {
            domain,
            relations: BTreeMap::new(),
        }
    }

    pub fn domain(&self) -> &Arc<DomainSet> {
        &self.domain
    }

    pub fn bind(&mut self, name: impl Into<String>, relation: Relation) -> Result<(), FormulaError> {
        if !same_domain(&self.domain, relation.domain()) {
            return Err(FormulaError::Rel(RelError::DomainMismatch));
        }
        let name = name.into();
        let relation = relation.with_name(name.clone());
        self.relations.insert(name, relation);
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, relation: Relation) -> Result<Self, FormulaError> {
        self.bind(name, relation)?;
        Ok(self)
    }

    pub fn bindings(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn resolve(&self, name: &str) -> Result<Cow<'_, Relation>, FormulaError> {
        if let Some(r) = self.relations.get(name) {
            return Ok(Cow::Borrowed(r));
        }
        if let Some(n) = name
            .strip_prefix('I')
            .filter(|_| builtin_arity(name).is_some())
            .and_then(|k| k.parse::<usize>().ok())
        {
            return Ok(Cow::Owned(Relation::pluridentity(self.domain.clone(), n)?));
        }
        if let Some(e) = name.strip_prefix("Delta_") {
            if self.domain.contains(e) {
                return Ok(Cow::Owned(Relation::delta(self.domain.clone(), e)?));
            }
        }
        Err(FormulaError::UnboundPredicate(name.to_string()))
    }

    /// Declared arities of the explicit bindings.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for (n, r) in &self.relations {
            sig.declare(n.clone(), r.arity());
        }
        sig
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(builtin_arity("I3"), Some(3));
        assert_eq!(builtin_arity("I12"), Some(12));
        assert_eq!(builtin_arity("I0"), None);
        assert_eq!(builtin_arity("I"), None);
        assert_eq!(builtin_arity("Ix"), None);
        assert_eq!(builtin_arity("Delta_a"), Some(1));
        assert_eq!(builtin_arity("Delta_"), None);
        assert_eq!(builtin_arity("P"), None);
    }

    #[test]
    fn identifiers() {
        assert!(is_pred_name("S_1"));
        assert!(!is_pred_name("s"));
        assert!(is_var_name("t_1"));
        assert!(!is_var_name("T"));
        assert_eq!(delta_name("a"), Some("Delta_a".into()));
        assert_eq!(delta_name("-1"), None);
    }

    #[test]
    fn environment_resolves_builtins() {
        let d = DomainSet::new(["a", "b"]).unwrap();
        let env = Environment::new(d.clone());
        assert_eq!(
            *env.resolve("I2").unwrap(),
            Relation::pluridentity(d.clone(), 2).unwrap()
        );
        assert_eq!(*env.resolve("Delta_b").unwrap(), Relation::delta(d, "b").unwrap());
        assert!(env.resolve("Delta_c").is_err());
        assert!(env.resolve("P").is_err());
    }
}
