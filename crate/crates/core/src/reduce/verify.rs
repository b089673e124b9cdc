use serde::Serialize;

use crate::formula::eval_over;

use super::Reduction;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub tuple: Vec<String>,
    /// Whether the tuple belongs to the source (and the formula misses it).
    pub in_source: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub equal: bool,
    pub counterexample: Option<Counterexample>,
    /// Every atom of the formula has adicity below the source arity.
    pub lower_adicity: bool,
    pub max_atom_adicity: usize,
    pub error: Option<String>,
}

/// Re-evaluates the formula, restricts the result to the source domain and
/// compares it with the source.
pub fn verify_reduction(r: &Reduction) -> VerifyReport {
    let max_atom_adicity = r.formula.atoms().iter().map(|(_, a)| a.len()).max().unwrap_or(0);
    let lower_adicity = max_atom_adicity < r.source.arity();
    let evaluated = match eval_over(&r.formula, &r.env, &r.vars) {
        Ok(rel) => rel.restrict_to(r.source.domain()),
        Err(e) => {
            return VerifyReport {
                equal: false,
                counterexample: None,
                lower_adicity,
                max_atom_adicity,
                error: Some(e.to_string()),
            }
        }
    };
    let missing = r.source.tuples().difference(evaluated.tuples()).next();
    let extra = evaluated.tuples().difference(r.source.tuples()).next();
    let first = match (missing, extra) {
        (Some(m), Some(x)) if x < m => Some((x, false)),
        (Some(m), _) => Some((m, true)),
        (None, Some(x)) => Some((x, false)),
        (None, None) => None,
    };
    let counterexample = first.map(|(t, in_source)| Counterexample {
        tuple: t.iter().map(|&e| r.source.domain().name(e).to_string()).collect(),
        in_source,
    });
    VerifyReport {
        equal: counterexample.is_none() && r.source.arity() == r.vars.len(),
        counterexample,
        lower_adicity,
        max_atom_adicity,
        error: None,
    }
}
