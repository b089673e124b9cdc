use std::collections::BTreeSet;
use std::sync::Arc;

use crate::formula::{Environment, Formula};
use crate::relcore::{DomainSet, ElemId, Relation, Tuple};

use super::{place_vars, stem, ReduceError, Reduction, ReductionMode};

/// `⟨a,b,c⟩`-style names for new elements, made distinct from the domain and
/// from each other by appending primes.
fn element_names(domain: &DomainSet, rows: &[Tuple]) -> Vec<String> {
    let mut taken: BTreeSet<String> = domain.elements().iter().cloned().collect();
    rows.iter()
        .map(|row| {
            let parts: Vec<&str> = row.iter().map(|&e| domain.name(e)).collect();
            let mut name = format!("⟨{}⟩", parts.join(","));
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.insert(name.clone());
            name
        })
        .collect()
}

/// The source domain followed by one new element per row.
fn extend_with(
    domain: &Arc<DomainSet>,
    rows: &[Tuple],
) -> Result<(Arc<DomainSet>, Vec<ElemId>), ReduceError> {
    let names = element_names(domain, rows);
    let ext = domain.extended(names)?;
    let base = domain.len() as ElemId;
    let ids = (0..rows.len() as ElemId).map(|k| base + k).collect();
    Ok((ext, ids))
}

fn require_arity(r: &Relation, min: usize) -> Result<(), ReduceError> {
    if r.arity() < min {
        return Err(ReduceError::ArityTooSmall {
            arity: r.arity(),
            min,
        });
    }
    Ok(())
}

/// Dyads `R_i(t, x)` linking each tuple-element `t` to its `i`-th entry, on
/// `domain` where `elem[k]` stands for the `k`-th tuple of `r`.
fn projection_dyads(
    r: &Relation,
    domain: &Arc<DomainSet>,
    elem: &[ElemId],
) -> Result<(Environment, Formula), ReduceError> {
    let n = r.arity();
    let vars = place_vars(n);
    let name = stem(r);
    let mut env = Environment::new(domain.clone());
    let mut atoms = Vec::with_capacity(n);
    for i in 0..n {
        let pred = format!("{name}_{}", i + 1);
        let rows = r.tuples().iter().zip(elem).map(|(t, &e)| vec![e, t[i]]);
        env.bind(
            pred.clone(),
            Relation::from_ids(pred.clone(), domain.clone(), 2, rows)?,
        )?;
        atoms.push(Formula::atom(pred, &["t", vars[i].as_str()]));
    }
    Ok((env, Formula::exists("t", Formula::And(atoms))))
}

/// Hypostatic abstraction over an extended domain: each tuple becomes a new
/// element and `R(x1..xn) ≡ ∃t[R_1(t,x1) ∧ ... ∧ R_n(t,xn)]`.
pub fn hypostatic_extend(r: &Relation) -> Result<Reduction, ReduceError> {
    require_arity(r, 3)?;
    let rows: Vec<Tuple> = r.tuples().iter().cloned().collect();
    let (ext, elem) = extend_with(r.domain(), &rows)?;
    let (env, formula) = projection_dyads(r, &ext, &elem)?;
    Ok(Reduction {
        source: r.clone(),
        env,
        formula,
        vars: place_vars(r.arity()),
        mode: ReductionMode::HypostaticExtend,
    })
}

/// Hypostatic abstraction without new elements: the `k`-th tuple in
/// canonical order is represented by the `k`-th domain element. Needs a
/// small relation.
pub fn hypostatic_encode(r: &Relation) -> Result<Reduction, ReduceError> {
    require_arity(r, 3)?;
    if !r.is_small() {
        return Err(ReduceError::NotSmall {
            tuples: r.len(),
            elements: r.domain().len(),
        });
    }
    let elem: Vec<ElemId> = (0..r.len() as ElemId).collect();
    let (env, formula) = projection_dyads(r, r.domain(), &elem)?;
    Ok(Reduction {
        source: r.clone(),
        env,
        formula,
        vars: place_vars(r.arity()),
        mode: ReductionMode::HypostaticEncode,
    })
}

/// Hypostatic split of an `n`-ad along a place bipartition: a new element
/// `e` per tuple and `R(x) ≡ ∃e[R_1(x_A.., e) ∧ R_2(e, x_B..)]`.
pub fn hypostatic_split(r: &Relation, first: &[usize]) -> Result<Reduction, ReduceError> {
    require_arity(r, 2)?;
    let n = r.arity();
    let a: Vec<usize> = first.to_vec();
    let b: Vec<usize> = (0..n).filter(|p| !a.contains(p)).collect();
    if a.is_empty() || b.is_empty() || a.iter().any(|&p| p >= n) {
        return Err(ReduceError::BadPartition(format!(
            "{first:?} does not split {n} places"
        )));
    }
    let rows: Vec<Tuple> = r.tuples().iter().cloned().collect();
    let (ext, elem) = extend_with(r.domain(), &rows)?;
    let vars = place_vars(n);
    let name = stem(r);
    let (p1, p2) = (format!("{name}_1"), format!("{name}_2"));
    let left = rows.iter().zip(&elem).map(|(t, &e)| {
        let mut row: Tuple = a.iter().map(|&p| t[p]).collect();
        row.push(e);
        row
    });
    let right = rows.iter().zip(&elem).map(|(t, &e)| {
        let mut row = vec![e];
        row.extend(b.iter().map(|&p| t[p]));
        row
    });
    let env = Environment::new(ext.clone())
        .with(
            p1.clone(),
            Relation::from_ids(p1.clone(), ext.clone(), a.len() + 1, left)?,
        )?
        .with(
            p2.clone(),
            Relation::from_ids(p2.clone(), ext.clone(), b.len() + 1, right)?,
        )?;
    let mut left_args: Vec<&str> = a.iter().map(|&p| vars[p].as_str()).collect();
    left_args.push("e");
    let mut right_args = vec!["e"];
    right_args.extend(b.iter().map(|&p| vars[p].as_str()));
    let formula = Formula::exists(
        "e",
        Formula::And(vec![
            Formula::atom(p1, &left_args),
            Formula::atom(p2, &right_args),
        ]),
    );
    Ok(Reduction {
        source: r.clone(),
        env,
        formula,
        vars,
        mode: ReductionMode::HypostaticExtend,
    })
}

/// Pairing construction for a triad: the pair `(x1, x2)` becomes an element
/// `t` and `R(x1,x2,x3) ≡ ∃t[R_1(t,x1) ∧ R_2(t,x2) ∧ R_hat(t,x3)]`.
pub fn pairing_reduction(r: &Relation) -> Result<Reduction, ReduceError> {
    if r.arity() != 3 {
        return Err(ReduceError::WrongArity {
            expected: 3,
            found: r.arity(),
        });
    }
    let pairs: Vec<Tuple> = r
        .tuples()
        .iter()
        .map(|t| vec![t[0], t[1]])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let (ext, elem) = extend_with(r.domain(), &pairs)?;
    let pair_elem = |t: &Tuple| {
        let k = pairs.binary_search(&vec![t[0], t[1]]).expect("pair is listed");
        elem[k]
    };
    let name = stem(r);
    let (p1, p2, hat) = (format!("{name}_1"), format!("{name}_2"), format!("{name}_hat"));
    let first = pairs.iter().zip(&elem).map(|(p, &e)| vec![e, p[0]]);
    let second = pairs.iter().zip(&elem).map(|(p, &e)| vec![e, p[1]]);
    let third = r.tuples().iter().map(|t| vec![pair_elem(t), t[2]]);
    let env = Environment::new(ext.clone())
        .with(p1.clone(), Relation::from_ids(p1.clone(), ext.clone(), 2, first)?)?
        .with(
            p2.clone(),
            Relation::from_ids(p2.clone(), ext.clone(), 2, second)?,
        )?
        .with(
            hat.clone(),
            Relation::from_ids(hat.clone(), ext.clone(), 2, third)?,
        )?;
    let formula = Formula::exists(
        "t",
        Formula::And(vec![
            Formula::atom(p1, &["t", "x1"]),
            Formula::atom(p2, &["t", "x2"]),
            Formula::atom(hat, &["t", "x3"]),
        ]),
    );
    Ok(Reduction {
        source: r.clone(),
        env,
        formula,
        vars: place_vars(3),
        mode: ReductionMode::Pairing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicate::representation_ternarity;
    use crate::reduce::verify_reduction;

    fn d2() -> Arc<DomainSet> {
        DomainSet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn extend_reduces_pluridentities() {
        for n in 3..=6 {
            let r = Relation::pluridentity(d2(), n).unwrap();
            let red = hypostatic_extend(&r).unwrap();
            let report = verify_reduction(&red);
            assert!(report.equal, "I{n}");
            assert!(report.lower_adicity);
            assert_eq!(representation_ternarity(&red.formula), n - 2);
        }
        let i4 = hypostatic_extend(&Relation::pluridentity(d2(), 4).unwrap()).unwrap();
        let dyad = i4.env.resolve("I4_1").unwrap();
        assert_eq!(
            dyad.named_tuples(),
            vec![
                vec!["⟨a,a,a,a⟩".to_string(), "a".into()],
                vec!["⟨b,b,b,b⟩".into(), "b".into()]
            ]
        );
    }

    #[test]
    fn extend_handles_empty_and_collisions() {
        let empty = Relation::empty("E", d2(), 5);
        let red = hypostatic_extend(&empty).unwrap();
        assert!(verify_reduction(&red).equal);
        let d = DomainSet::new(["a", "⟨a,a,a⟩"]).unwrap();
        let r = Relation::from_names("R", d.clone(), 3, [["a", "a", "a"]]).unwrap();
        let red = hypostatic_extend(&r).unwrap();
        assert!(red.env.domain().contains("⟨a,a,a⟩'"));
        assert!(verify_reduction(&red).equal);
        assert!(matches!(
            hypostatic_extend(&Relation::full("F", d2(), 2)),
            Err(ReduceError::ArityTooSmall { .. })
        ));
    }

    #[test]
    fn encode_stays_on_the_domain() {
        let i3 = Relation::pluridentity(d2(), 3).unwrap();
        let red = hypostatic_encode(&i3).unwrap();
        assert!(Arc::ptr_eq(red.env.domain(), i3.domain()));
        let i2 = Relation::pluridentity(d2(), 2).unwrap();
        for k in 1..=3 {
            assert_eq!(*red.env.resolve(&format!("I3_{k}")).unwrap(), i2);
        }
        assert!(verify_reduction(&red).equal);
        assert!(matches!(
            hypostatic_encode(&Relation::full("F", d2(), 3)),
            Err(ReduceError::NotSmall {
                tuples: 8,
                elements: 2
            })
        ));
    }

    #[test]
    fn split_and_pairing() {
        let d = DomainSet::new(["a", "b", "c"]).unwrap();
        let s =
            Relation::from_names("S", d.clone(), 4, [["a", "b", "c", "a"], ["b", "b", "a", "c"]]).unwrap();
        let red = hypostatic_split(&s, &[0, 2]).unwrap();
        assert_eq!(red.formula.to_string(), "exists e. (S_1(x1,x3,e) & S_2(e,x2,x4))");
        assert!(verify_reduction(&red).equal);
        assert_eq!(representation_ternarity(&red.formula), 2);

        let i3 = Relation::pluridentity(d2(), 3).unwrap();
        let red = pairing_reduction(&i3).unwrap();
        assert!(verify_reduction(&red).equal);
        assert_eq!(representation_ternarity(&red.formula), 1);
        let empty = pairing_reduction(&Relation::empty("G", d2(), 3)).unwrap();
        assert!(verify_reduction(&empty).equal);
        assert!(pairing_reduction(&Relation::full("F", d2(), 2)).is_err());
    }
}
