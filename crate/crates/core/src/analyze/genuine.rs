use serde::Serialize;

use super::degeneracy::{degeneracy_factorization, Factor};
use super::info::mi_min_cut;
use super::search::{search_with, Fragment, SearchBudget, SearchVerdict};
use super::ternarity::positive_ternarity_bounds;
use super::AnalyzeError;
use crate::formula::{connectivity_clusters, eval_over, Environment, Formula};
use crate::reduce::{delta_decomposition, place_vars};
use crate::relcore::{PlacePartition, Relation};

/// Whether, for every variable that only occurs in monadic conjuncts, its
/// monad extensions across the disjuncts form a chain under inclusion.
///
/// The input must be a disjunction of conjunctions whose conjuncts are not
/// themselves disjunctions. A disjunct without a monadic conjunct for a
/// variable contributes the whole domain.
pub fn subset_chain_check(f: &Formula, env: &Environment) -> Result<bool, AnalyzeError> {
    let disjuncts: Vec<&Formula> = match f {
        Formula::Or(ds) => ds.iter().collect(),
        other => vec![other],
    };
    let mut split: Vec<Vec<&Formula>> = Vec::new();
    for d in &disjuncts {
        let conjuncts: Vec<&Formula> = match d {
            Formula::And(cs) => cs.iter().collect(),
            other => vec![other],
        };
        if conjuncts.iter().any(|c| matches!(c, Formula::Or(_))) {
            return Err(AnalyzeError::NotPdf(format!(
                "disjunct {d} contains a disjunction"
            )));
        }
        split.push(conjuncts);
    }
    let checked: Vec<String> = f
        .free_vars()
        .into_iter()
        .filter(|v| {
            split.iter().flatten().all(|c| {
                let fv = c.free_vars();
                !fv.contains(v) || fv.len() == 1
            })
        })
        .collect();
    for v in &checked {
        let mut family: Vec<Relation> = Vec::new();
        for conjuncts in &split {
            let monadic: Vec<Formula> = conjuncts
                .iter()
                .filter(|c| c.free_vars() == [v.clone()])
                .map(|c| (*c).clone())
                .collect();
            let ext = eval_over(&Formula::And(monadic), env, std::slice::from_ref(v))?;
            family.push(ext);
        }
        for a in &family {
            for b in &family {
                if !a.is_subset(b) && !b.is_subset(a) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GenuinenessBudgets {
    pub positive: SearchBudget,
    pub full: SearchBudget,
    pub max_domain: usize,
}

impl Default for GenuinenessBudgets {
    fn default() -> Self {
        Self {
            positive: SearchBudget::new(5, 6),
            full: SearchBudget::new(4, 5),
            max_domain: super::DEFAULT_MAX_DOMAIN,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenuinenessReport {
    pub degenerate: bool,
    pub factors: Vec<Factor>,
    /// Free-variable clusters of the positive witness, or all places in one
    /// cluster when no witness was found.
    pub clusters: Vec<Vec<String>>,
    pub mi_min_cut: (f64, PlacePartition),
    pub positive: SearchVerdict,
    pub full: SearchVerdict,
    /// Chain property of the delta decomposition's monads.
    pub subset_chain: Option<bool>,
    /// General ternarity bounds: lower from the full search (1 only within
    /// its budget), upper from the positive bound when known.
    pub general_lower: usize,
    pub general_upper: Option<usize>,
}

pub fn genuineness_report(
    r: &Relation,
    budgets: &GenuinenessBudgets,
) -> Result<GenuinenessReport, AnalyzeError> {
    if r.arity() != 3 {
        return Err(AnalyzeError::Precondition(format!(
            "genuineness is defined for triads, got arity {}",
            r.arity()
        )));
    }
    let factors = degeneracy_factorization(r)?;
    let mi = mi_min_cut(r)?;
    let positive = search_with(r, Fragment::Positive, budgets.positive, budgets.max_domain)?;
    let full = search_with(r, Fragment::Full, budgets.full, budgets.max_domain)?;
    let clusters = match positive.witness() {
        Some(w) => connectivity_clusters(&w.reduction.formula),
        None => vec![place_vars(3)],
    };
    let subset_chain = {
        let red = delta_decomposition(r)?;
        Some(subset_chain_check(&red.formula, &red.env)?)
    };
    let general_lower = match (full.witness(), full.is_exhausted()) {
        (Some(_), _) | (None, false) => 0,
        (None, true) => 1,
    };
    let general_upper = positive_ternarity_bounds(r)?.upper;
    Ok(GenuinenessReport {
        degenerate: factors.len() > 1,
        factors,
        clusters,
        mi_min_cut: mi,
        positive,
        full,
        subset_chain,
        general_lower,
        general_upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::relcore::DomainSet;

    fn d2() -> std::sync::Arc<DomainSet> {
        DomainSet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn delta_pdf_of_teridentity_is_not_a_chain() {
        let red = delta_decomposition(&Relation::pluridentity(d2(), 3).unwrap()).unwrap();
        assert!(!subset_chain_check(&red.formula, &red.env).unwrap());
    }

    #[test]
    fn chains_and_vacuous_cases() {
        let d = d2();
        let env = Environment::new(d.clone())
            .with("P", Relation::from_names("P", d.clone(), 1, [["a"]]).unwrap())
            .unwrap()
            .with("Q", Relation::pluridentity(d.clone(), 1).unwrap())
            .unwrap();
        let sig = env.signature();
        let single = parse_formula("P(x) & Q(y)", &sig).unwrap();
        assert!(subset_chain_check(&single, &env).unwrap());
        let chain = parse_formula("(P(x) & Q(y)) | (Q(x) & P(y))", &sig).unwrap();
        assert!(subset_chain_check(&chain, &env).unwrap());
        let nested = parse_formula("(P(x) | Q(x)) & Q(y)", &sig).unwrap();
        assert!(matches!(
            subset_chain_check(&nested, &env),
            Err(AnalyzeError::NotPdf(_))
        ));
    }

    #[test]
    fn teridentity_report() {
        let r = Relation::pluridentity(d2(), 3).unwrap();
        let budgets = GenuinenessBudgets {
            positive: SearchBudget::new(3, 5),
            full: SearchBudget::new(2, 4),
            max_domain: 4,
        };
        let g = genuineness_report(&r, &budgets).unwrap();
        assert!(!g.degenerate);
        assert!((g.mi_min_cut.0 - 1.0).abs() < 1e-9);
        assert!(g.positive.is_exhausted() && g.full.is_exhausted());
        assert_eq!(g.subset_chain, Some(false));
        assert_eq!(g.general_lower, 1);
        assert_eq!(g.clusters.len(), 1);
    }

    #[test]
    fn product_report() {
        let d = d2();
        let p = Relation::from_names("P", d.clone(), 1, [["a"]]).unwrap();
        let q = Relation::pluridentity(d.clone(), 1).unwrap();
        let r = p.product(&q).unwrap().product(&p).unwrap();
        let g = genuineness_report(&r, &GenuinenessBudgets::default()).unwrap();
        assert!(g.degenerate);
        assert_eq!(g.mi_min_cut.0, 0.0);
        assert!(g.positive.witness().is_some());
        assert!(g.clusters.len() >= 2);
    }
}
