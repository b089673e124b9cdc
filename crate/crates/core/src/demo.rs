//! Two worked examples on a toy market: a selling tetrad split into two
//! triads and a giving triad reduced to dyads around a triple junction.

use serde::Serialize;

use crate::explicate::{expand_pluridentities, explicate, representation_ternarity};
use crate::formula::rectify;
use crate::reduce::{
    hypostatic_split, pairing_reduction, verify_reduction, ReduceError, Reduction, VerifyReport,
};
use crate::relcore::{DomainSet, Relation};

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub name: String,
    pub source: String,
    pub arity: usize,
    pub tuples: usize,
    pub formula: String,
    pub verify: VerifyReport,
    pub explicated: String,
    pub ternarity: usize,
    pub expected_ternarity: usize,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.verify.equal && self.ternarity == self.expected_ternarity
    }
}

const MARKET: [&str; 7] = ["ann", "bob", "cy", "book", "pen", "p1", "p2"];

fn market() -> std::sync::Arc<DomainSet> {
    DomainSet::new(MARKET).expect("distinct names")
}

/// `S(A,B,C,D)`: A sells C to B for D.
pub fn selling_relation() -> Relation {
    Relation::from_names(
        "S",
        market(),
        4,
        [
            ["ann", "bob", "book", "p2"],
            ["bob", "cy", "pen", "p1"],
            ["cy", "ann", "book", "p1"],
            ["ann", "cy", "pen", "p2"],
            ["bob", "ann", "book", "p2"],
        ],
    )
    .expect("market tuples")
}

/// `G(A,B,C)`: A gives B to C.
pub fn giving_relation() -> Relation {
    Relation::from_names(
        "G",
        market(),
        3,
        [
            ["ann", "book", "bob"],
            ["bob", "pen", "cy"],
            ["cy", "book", "ann"],
            ["ann", "pen", "cy"],
        ],
    )
    .expect("market tuples")
}

fn report(name: &str, red: &Reduction, expected: usize) -> DemoReport {
    let explicated = explicate(&rectify(&red.formula)).expect("rectified");
    DemoReport {
        name: name.to_string(),
        source: red.source.name().to_string(),
        arity: red.source.arity(),
        tuples: red.source.len(),
        formula: red.formula.pretty(),
        verify: verify_reduction(red),
        explicated: expand_pluridentities(&explicated.output).pretty(),
        ternarity: representation_ternarity(&red.formula),
        expected_ternarity: expected,
    }
}

/// The seller and the good enter one transaction `e`, which the buyer
/// pays for: `∃e[S_1(A,C,e) ∧ S_2(e,B,D)]`.
pub fn demo_sell() -> Result<DemoReport, ReduceError> {
    let red = hypostatic_split(&selling_relation(), &[0, 2])?;
    Ok(report("sell", &red, 2))
}

/// Giving through a hidden junction: `∃t[G_1(t,A) ∧ G_2(t,B) ∧ G_hat(t,C)]`.
pub fn demo_give() -> Result<DemoReport, ReduceError> {
    let red = pairing_reduction(&giving_relation())?;
    Ok(report("give", &red, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sell_splits_into_two_triads() {
        let r = demo_sell().unwrap();
        assert!(r.verify.equal, "{:?}", r.verify);
        assert_eq!(r.ternarity, 2);
        assert_eq!(r.verify.max_atom_adicity, 3);
        assert!(r.passed());
    }

    #[test]
    fn give_hides_one_teridentity() {
        let r = demo_give().unwrap();
        assert!(r.verify.equal);
        assert_eq!(r.verify.max_atom_adicity, 2);
        assert_eq!(r.ternarity, 1);
        assert!(r.explicated.contains("I3"), "{}", r.explicated);
    }
}
