use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::domain::{same_domain, DomainSet, ElemId};
use super::RelError;

pub type Tuple = Vec<ElemId>;

/// A named finite relation, stored extensionally.
///
/// Places are 0-based throughout the library API. Arity 0 is allowed: the
/// relation then holds either the empty tuple ("true") or nothing ("false").
///
/// Equality compares domain, arity and tuples; the name is a label only.
#[derive(Clone)]
pub struct Relation {
    name: String,
    domain: Arc<DomainSet>,
    arity: usize,
    tuples: BTreeSet<Tuple>,
}

impl Relation {
    pub fn empty(name: impl Into<String>, domain: Arc<DomainSet>, arity: usize) -> Self {
        Self {
            name: name.into(),
            domain,
            arity,
            tuples: BTreeSet::new(),
        }
    }

    /// Builds a relation from element-id tuples, checking arity and range.
    pub fn from_ids<I>(
        name: impl Into<String>,
        domain: Arc<DomainSet>,
        arity: usize,
        tuples: I,
    ) -> Result<Self, RelError>
    where
        I: IntoIterator<Item = Tuple>,
    {
        let n = domain.len() as ElemId;
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(RelError::TupleLength {
                    expected: arity,
                    found: t.len(),
                });
            }
            if let Some(&bad) = t.iter().find(|&&e| e >= n) {
                return Err(RelError::UnknownElement(format!("#{bad}")));
            }
            set.insert(t);
        }
        Ok(Self {
            name: name.into(),
            domain,
            arity,
            tuples: set,
        })
    }

    /// Builds a relation from tuples of element names.
    pub fn from_names<I, T, S>(
        name: impl Into<String>,
        domain: Arc<DomainSet>,
        arity: usize,
        tuples: I,
    ) -> Result<Self, RelError>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut ids = Vec::new();
        for t in tuples {
            let row = t
                .into_iter()
                .map(|s| {
                    domain
                        .id(s.as_ref())
                        .ok_or_else(|| RelError::UnknownElement(s.as_ref().to_string()))
                })
                .collect::<Result<Tuple, _>>()?;
            ids.push(row);
        }
        Self::from_ids(name, domain, arity, ids)
    }

    /// `domain^arity`.
    pub fn full(name: impl Into<String>, domain: Arc<DomainSet>, arity: usize) -> Self {
        let tuples = all_tuples(domain.len(), arity).collect();
        Self {
            name: name.into(),
            domain,
            arity,
            tuples,
        }
    }

    /// The pluridentity `I_n = {(a, ..., a)}`. `I_1` is true everywhere.
    pub fn pluridentity(domain: Arc<DomainSet>, n: usize) -> Result<Self, RelError> {
        if n == 0 {
            return Err(RelError::ZeroAdicity);
        }
        let tuples = domain.ids().map(|a| vec![a; n]).collect();
        Ok(Self {
            name: format!("I{n}"),
            domain,
            arity: n,
            tuples,
        })
    }

    /// The delta monad holding exactly `(a)`.
    pub fn delta(domain: Arc<DomainSet>, element: &str) -> Result<Self, RelError> {
        let id = domain
            .id(element)
            .ok_or_else(|| RelError::UnknownElement(element.to_string()))?;
        let mut tuples = BTreeSet::new();
        tuples.insert(vec![id]);
        Ok(Self {
            name: format!("Delta_{element}"),
            domain,
            arity: 1,
            tuples,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn domain(&self) -> &Arc<DomainSet> {
        &self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn contains(&self, t: &[ElemId]) -> bool {
        self.tuples.contains(t)
    }

    /// Tuples rendered with element names, in canonical order.
    pub fn named_tuples(&self) -> Vec<Vec<String>> {
        self.tuples
            .iter()
            .map(|t| t.iter().map(|&e| self.domain.name(e).to_string()).collect())
            .collect()
    }

    /// No more tuples than domain elements.
    pub fn is_small(&self) -> bool {
        self.tuples.len() <= self.domain.len()
    }

    fn check_domain(&self, other: &Relation) -> Result<(), RelError> {
        if same_domain(&self.domain, &other.domain) {
            Ok(())
        } else {
            Err(RelError::DomainMismatch)
        }
    }

    fn check_place(&self, place: usize) -> Result<(), RelError> {
        if place < self.arity {
            Ok(())
        } else {
            Err(RelError::PlaceOutOfRange {
                place,
                arity: self.arity,
            })
        }
    }

    fn check_same_shape(&self, other: &Relation) -> Result<(), RelError> {
        self.check_domain(other)?;
        if self.arity != other.arity {
            return Err(RelError::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    fn derived(&self, arity: usize, tuples: BTreeSet<Tuple>) -> Relation {
        Relation {
            name: self.name.clone(),
            domain: self.domain.clone(),
            arity,
            tuples,
        }
    }

    /// Cartesian product: every concatenation `r ++ s`.
    pub fn product(&self, other: &Relation) -> Result<Relation, RelError> {
        self.check_domain(other)?;
        let mut tuples = BTreeSet::new();
        for r in &self.tuples {
            for s in &other.tuples {
                let mut t = Vec::with_capacity(self.arity + other.arity);
                t.extend_from_slice(r);
                t.extend_from_slice(s);
                tuples.insert(t);
            }
        }
        Ok(Relation {
            name: format!("{}x{}", self.name, other.name),
            domain: self.domain.clone(),
            arity: self.arity + other.arity,
            tuples,
        })
    }

    /// Deletes one column and prunes duplicates (single-place existential).
    pub fn project_out(&self, place: usize) -> Result<Relation, RelError> {
        self.check_place(place)?;
        let tuples = self
            .tuples
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.remove(place);
                t
            })
            .collect();
        Ok(self.derived(self.arity - 1, tuples))
    }

    /// Keeps only the listed places, in the listed order.
    pub fn project_onto(&self, places: &[usize]) -> Result<Relation, RelError> {
        for &p in places {
            self.check_place(p)?;
        }
        let tuples = self
            .tuples
            .iter()
            .map(|t| places.iter().map(|&p| t[p]).collect())
            .collect();
        Ok(self.derived(places.len(), tuples))
    }

    /// Selection along two columns: keeps rows equal at `i` and `j`, then
    /// drops the higher-indexed of the two columns.
    pub fn select_eq(&self, i: usize, j: usize) -> Result<Relation, RelError> {
        self.check_place(i)?;
        self.check_place(j)?;
        if i == j {
            return Err(RelError::SamePlace(i));
        }
        let drop = i.max(j);
        let tuples = self
            .tuples
            .iter()
            .filter(|t| t[i] == t[j])
            .map(|t| {
                let mut t = t.clone();
                t.remove(drop);
                t
            })
            .collect();
        Ok(self.derived(self.arity - 1, tuples))
    }

    /// Self-bond: identify places `i` and `j` and quantify the merged place.
    pub fn bond_self(&self, i: usize, j: usize) -> Result<Relation, RelError> {
        let selected = self.select_eq(i, j)?;
        selected.project_out(i.min(j))
    }

    /// Reorders places: place `k` of the result is place `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<Relation, RelError> {
        let mut seen = vec![false; self.arity];
        if order.len() != self.arity {
            return Err(RelError::ArityMismatch {
                expected: self.arity,
                found: order.len(),
            });
        }
        for &p in order {
            self.check_place(p)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(RelError::SamePlace(p));
            }
        }
        self.project_onto(order)
    }

    pub fn complement(&self) -> Relation {
        let tuples = all_tuples(self.domain.len(), self.arity)
            .filter(|t| !self.tuples.contains(t))
            .collect();
        self.derived(self.arity, tuples)
    }

    pub fn union(&self, other: &Relation) -> Result<Relation, RelError> {
        self.check_same_shape(other)?;
        let tuples = self.tuples.union(&other.tuples).cloned().collect();
        Ok(self.derived(self.arity, tuples))
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation, RelError> {
        self.check_same_shape(other)?;
        let tuples = self.tuples.intersection(&other.tuples).cloned().collect();
        Ok(self.derived(self.arity, tuples))
    }

    pub fn difference(&self, other: &Relation) -> Result<Relation, RelError> {
        self.check_same_shape(other)?;
        let tuples = self.tuples.difference(&other.tuples).cloned().collect();
        Ok(self.derived(self.arity, tuples))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        same_domain(&self.domain, &other.domain)
            && self.arity == other.arity
            && self.tuples.is_subset(&other.tuples)
    }

    /// Counts of each distinct projection onto `places`.
    pub fn marginal_counts(&self, places: &[usize]) -> BTreeMap<Tuple, usize> {
        let mut counts = BTreeMap::new();
        for t in &self.tuples {
            let key: Tuple = places.iter().map(|&p| t[p]).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
        counts
    }

    /// Moves the relation onto a domain that contains every element it uses,
    /// matching elements by name.
    pub fn transport(&self, domain: &Arc<DomainSet>) -> Result<Relation, RelError> {
        let mut tuples = BTreeSet::new();
        for t in &self.tuples {
            let row = t
                .iter()
                .map(|&e| {
                    let name = self.domain.name(e);
                    domain
                        .id(name)
                        .ok_or_else(|| RelError::UnknownElement(name.to_string()))
                })
                .collect::<Result<Tuple, _>>()?;
            tuples.insert(row);
        }
        Ok(Relation {
            name: self.name.clone(),
            domain: domain.clone(),
            arity: self.arity,
            tuples,
        })
    }

    /// Keeps only tuples whose entries all exist in `domain`, re-indexed there.
    pub fn restrict_to(&self, domain: &Arc<DomainSet>) -> Relation {
        let tuples = self
            .tuples
            .iter()
            .filter_map(|t| {
                t.iter()
                    .map(|&e| domain.id(self.domain.name(e)))
                    .collect::<Option<Tuple>>()
            })
            .collect();
        Relation {
            name: self.name.clone(),
            domain: domain.clone(),
            arity: self.arity,
            tuples,
        }
    }
}

/// Relative product along one pair of places: `R ⨝ S` with `R[i] = S[j]`
/// identified and then quantified away. Arity is `R.arity + S.arity - 2`.
pub fn bond(r: &Relation, i: usize, s: &Relation, j: usize) -> Result<Relation, RelError> {
    r.check_domain(s)?;
    r.check_place(i)?;
    s.check_place(j)?;
    let joined = r.product(s)?;
    let selected = joined.select_eq(i, r.arity + j)?;
    selected.project_out(i)
}

/// Every tuple of `0..n` of the given length, in lexicographic order.
pub fn all_tuples(n: usize, arity: usize) -> impl Iterator<Item = Tuple> {
    let total = if arity == 0 { 1 } else { n.pow(arity as u32) };
    let n = n as ElemId;
    (0..total).map(move |mut k| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = (k % n as usize) as ElemId;
            k /= n as usize;
        }
        t
    })
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        same_domain(&self.domain, &other.domain) && self.arity == other.arity && self.tuples == other.tuples
    }
}

impl Eq for Relation {}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} ", self.name, self.arity)?;
        f.debug_set()
            .entries(self.named_tuples().iter().map(|t| format!("({})", t.join(","))))
            .finish()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .named_tuples()
            .iter()
            .map(|t| format!("({})", t.join(",")))
            .collect();
        write!(f, "{} = {{{}}}", self.name, rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<DomainSet> {
        DomainSet::new(["a", "b"]).unwrap()
    }

    fn rel(d: &Arc<DomainSet>, arity: usize, rows: &[&[&str]]) -> Relation {
        Relation::from_names("R", d.clone(), arity, rows.iter().map(|r| r.iter().copied())).unwrap()
    }

    #[test]
    fn pluridentities() {
        let d = ab();
        let i3 = Relation::pluridentity(d.clone(), 3).unwrap();
        assert_eq!(i3, rel(&d, 3, &[&["a", "a", "a"], &["b", "b", "b"]]));
        let abc = DomainSet::new(["a", "b", "c"]).unwrap();
        let i1 = Relation::pluridentity(abc.clone(), 1).unwrap();
        assert_eq!(i1, rel(&abc, 1, &[&["a"], &["b"], &["c"]]));
        let i5 = Relation::pluridentity(d.clone(), 5).unwrap();
        assert_eq!(i5.len(), 2);
        assert!(i5.contains(&[1, 1, 1, 1, 1]));
        assert!(matches!(Relation::pluridentity(d, 0), Err(RelError::ZeroAdicity)));
    }

    #[test]
    fn deltas() {
        let d = ab();
        assert_eq!(Relation::delta(d.clone(), "a").unwrap(), rel(&d, 1, &[&["a"]]));
        assert_eq!(Relation::delta(d.clone(), "b").unwrap(), rel(&d, 1, &[&["b"]]));
        assert!(matches!(
            Relation::delta(d, "c"),
            Err(RelError::UnknownElement(_))
        ));
        let single = DomainSet::new(["a"]).unwrap();
        assert_eq!(
            Relation::delta(single.clone(), "a").unwrap(),
            Relation::pluridentity(single, 1).unwrap()
        );
    }

    #[test]
    fn products() {
        let d = ab();
        let r = rel(&d, 1, &[&["a"]]);
        let s = rel(&d, 1, &[&["b"], &["a"]]);
        assert_eq!(r.product(&s).unwrap(), rel(&d, 2, &[&["a", "b"], &["a", "a"]]));
        let empty = Relation::empty("E", d.clone(), 2);
        let p = empty.product(&s).unwrap();
        assert_eq!(p.arity(), 3);
        assert!(p.is_empty());
        let i1 = Relation::pluridentity(d.clone(), 1).unwrap();
        assert_eq!(i1.product(&i1).unwrap(), Relation::full("F", d.clone(), 2));
        let other = DomainSet::new(["a", "c"]).unwrap();
        assert!(matches!(
            r.product(&Relation::full("F", other, 1)),
            Err(RelError::DomainMismatch)
        ));
    }

    #[test]
    fn projections() {
        let d = ab();
        let i3 = Relation::pluridentity(d.clone(), 3).unwrap();
        assert_eq!(
            i3.project_out(2).unwrap(),
            Relation::pluridentity(d.clone(), 2).unwrap()
        );
        assert_eq!(
            rel(&d, 2, &[&["a", "b"]]).project_out(0).unwrap(),
            rel(&d, 1, &[&["b"]])
        );
        assert_eq!(
            Relation::full("F", d.clone(), 2).project_out(1).unwrap(),
            Relation::pluridentity(d.clone(), 1).unwrap()
        );
        assert!(matches!(
            i3.project_out(3),
            Err(RelError::PlaceOutOfRange { place: 3, arity: 3 })
        ));
    }

    #[test]
    fn selections() {
        let d = ab();
        let diag = Relation::full("F", d.clone(), 2).select_eq(0, 1).unwrap();
        assert_eq!(diag, rel(&d, 1, &[&["a"], &["b"]]));
        let r = rel(&d, 3, &[&["a", "b", "a"], &["a", "b", "b"]]);
        assert_eq!(r.select_eq(0, 2).unwrap(), rel(&d, 2, &[&["a", "b"]]));
        let i3 = Relation::pluridentity(d.clone(), 3).unwrap();
        assert_eq!(
            i3.select_eq(0, 1).unwrap(),
            Relation::pluridentity(d.clone(), 2).unwrap()
        );
        assert!(matches!(r.select_eq(1, 1), Err(RelError::SamePlace(1))));
        assert!(r.select_eq(0, 5).is_err());
    }

    #[test]
    fn bonds() {
        let d = ab();
        let i2 = Relation::pluridentity(d.clone(), 2).unwrap();
        assert_eq!(bond(&i2, 1, &i2, 0).unwrap(), i2);
        let i3 = Relation::pluridentity(d.clone(), 3).unwrap();
        assert_eq!(
            bond(&i3, 2, &i3, 0).unwrap(),
            Relation::pluridentity(d.clone(), 4).unwrap()
        );
        assert_eq!(
            i3.bond_self(1, 2).unwrap(),
            Relation::pluridentity(d.clone(), 1).unwrap()
        );
        assert!(bond(&i3, 3, &i3, 0).is_err());
    }

    #[test]
    fn boolean_ops() {
        let d = ab();
        let i2 = Relation::pluridentity(d.clone(), 2).unwrap();
        assert_eq!(i2.complement(), rel(&d, 2, &[&["a", "b"], &["b", "a"]]));
        let u = rel(&d, 1, &[&["a"]]).union(&rel(&d, 1, &[&["b"]])).unwrap();
        assert_eq!(u, rel(&d, 1, &[&["a"], &["b"]]));
        let r = rel(&d, 3, &[&["a", "b", "a"]]);
        assert_eq!(r.complement().complement(), r);
        assert!(matches!(r.union(&i2), Err(RelError::ArityMismatch { .. })));
        let t = Relation::full("T", d.clone(), 0);
        assert_eq!(t.len(), 1);
        assert!(t.complement().is_empty());
    }

    #[test]
    fn smallness() {
        let d = ab();
        assert!(Relation::pluridentity(d.clone(), 3).unwrap().is_small());
        assert!(!Relation::full("F", d.clone(), 2).is_small());
        assert!(Relation::empty("E", d, 4).is_small());
    }
}
