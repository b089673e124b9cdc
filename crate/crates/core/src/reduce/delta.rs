use std::collections::BTreeMap;

use crate::formula::{delta_name, Environment, Formula};
use crate::relcore::{ElemId, Relation};

use super::{place_vars, ReduceError, Reduction, ReductionMode};

/// `R(x1..xn) ≡ ⋁_{a ∈ R} δ_{a1}(x1) ∧ ... ∧ δ_{an}(xn)` over the source
/// domain. The empty relation becomes the single atom `Empty_n` bound to ∅.
pub fn delta_decomposition(r: &Relation) -> Result<Reduction, ReduceError> {
    let d = r.domain().clone();
    let n = r.arity();
    let vars = place_vars(n);
    let mut env = Environment::new(d.clone());

    if r.is_empty() {
        let pred = format!("Empty_{n}");
        env.bind(pred.clone(), Relation::empty(pred.clone(), d, n))?;
        return Ok(Reduction {
            source: r.clone(),
            env,
            formula: Formula::atom(pred, &vars),
            vars,
            mode: ReductionMode::Delta,
        });
    }

    // elements whose names do not fit the predicate grammar get a synthetic
    // name that no identifier-like element can claim
    let mut names: BTreeMap<ElemId, String> = BTreeMap::new();
    let mut synthetic = 0;
    for e in d.ids() {
        let name = delta_name(d.name(e)).unwrap_or_else(|| loop {
            synthetic += 1;
            let candidate = format!("Delta_{synthetic}x");
            if !d.contains(&candidate[6..]) {
                break candidate;
            }
        });
        names.insert(e, name);
    }
    let mut disjuncts = Vec::with_capacity(r.len());
    for t in r.tuples() {
        let conj = t
            .iter()
            .zip(&vars)
            .map(|(e, v)| Formula::atom(names[e].clone(), &[v.as_str()]))
            .collect();
        disjuncts.push(Formula::And(conj));
        for e in t {
            if !env.bindings().contains_key(&names[e]) {
                env.bind(names[e].clone(), Relation::delta(d.clone(), d.name(*e))?)?;
            }
        }
    }
    Ok(Reduction {
        source: r.clone(),
        env,
        formula: Formula::disjoin(disjuncts),
        vars,
        mode: ReductionMode::Delta,
    })
}
