//! Constructive reductions of a relation to a formula over lower-adicity
//! predicates, each returned with the environment defining those predicates
//! and checked by re-evaluation.

mod delta;
mod hypostatic;
mod normal;
mod verify;

pub use delta::delta_decomposition;
pub use hypostatic::{hypostatic_encode, hypostatic_extend, hypostatic_split, pairing_reduction};
pub use normal::{normal_forms, pdf_to_pcf, to_pdf, Pcf, Pdf};
pub use verify::{verify_reduction, Counterexample, VerifyReport};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{is_pred_name, Environment, Formula, FormulaError};
use crate::relcore::{RelError, Relation};

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("arity {arity} is too small, need at least {min}")]
    ArityTooSmall { arity: usize, min: usize },
    #[error("expected arity {expected}, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("relation is not small: {tuples} tuples but only {elements} domain elements")]
    NotSmall { tuples: usize, elements: usize },
    #[error("formula is not disconnected over the partition: {a} and {b} are linked")]
    NotDisconnected { a: String, b: String },
    #[error("invalid variable partition: {0}")]
    BadPartition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReductionMode {
    HypostaticExtend,
    HypostaticEncode,
    Pairing,
    Delta,
    Pdf,
    Pcf,
    Search,
}

/// A formula with its defining environment that claims to express `source`.
///
/// `vars[k]` is the free variable standing for place `k` of the source. The
/// environment may live on a larger domain than the source; the claim is
/// about the restriction to the source domain.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub source: Relation,
    pub env: Environment,
    pub formula: Formula,
    pub vars: Vec<String>,
    pub mode: ReductionMode,
}

/// `x1, ..., xn`.
pub fn place_vars(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("x{k}")).collect()
}

/// Predicate-name stem derived from a relation name.
fn stem(r: &Relation) -> String {
    if is_pred_name(r.name()) {
        r.name().to_string()
    } else {
        "R".to_string()
    }
}
