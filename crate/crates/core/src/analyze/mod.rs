//! Measurements on relations: valency arithmetic, degeneracy, the pendant
//! theorem, mutual information, ternarity bounds, bounded irreducibility
//! search and genuineness reports.

mod bits;
mod degeneracy;
mod genuine;
mod info;
mod pendant;
mod search;
mod ternarity;
mod valency;

pub use degeneracy::{degeneracy_factorization, is_degenerate, recombine, splits_on, Factor, FactorSummary};
pub use genuine::{genuineness_report, subset_chain_check, GenuinenessBudgets, GenuinenessReport};
pub use info::{entropy, mi_min_cut, mutual_information, MI_TIE};
pub use pendant::{
    pendant_check_egview, pendant_theorem_check, pendant_theorem_sweep, Multigraph, SweepReport,
};
pub use search::{
    irreducibility_search, search_with, DefinabilityTable, Fragment, SearchBudget, SearchOutcome,
    SearchStats, SearchVerdict, Witness, DEFAULT_MAX_DOMAIN,
};
pub use ternarity::{positive_ternarity_bounds, BlockBound, TernarityBounds};
pub use valency::{bond_many, closure_simulation, random_relation, valency, ClosureReport};

use thiserror::Error;

use crate::formula::FormulaError;
use crate::reduce::ReduceError;
use crate::relcore::RelError;

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("domain has {size} elements, the search accepts at most {max}")]
    DomainTooLarge { size: usize, max: usize },
    #[error("search budget too large: {0}")]
    BudgetTooLarge(String),
    #[error("bond of a {mu}-ad and a {nu}-ad on {lambda} pair(s) is not possible")]
    InvalidBond { mu: usize, nu: usize, lambda: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("entropy of an empty relation is undefined")]
    EmptyRelation,
    #[error("not in partitioned disjunctive form: {0}")]
    NotPdf(String),
    #[error("search produced a witness that fails verification: {0}")]
    WitnessRejected(String),
}
