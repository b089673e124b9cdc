//! Formulas of the `{∃, ∧, ∨, ¬}` fragment: AST, parser, evaluator,
//! rectification, connectivity clusters, prenex rewriting and the
//! variable-sharing graph view used in place of existential graphs.

mod ast;
mod clusters;
mod egraph;
mod eval;
mod parse;
mod prenex;
mod rectify;
mod signature;

pub use ast::{Formula, NameGen};
pub use clusters::{connectivity_clusters, variable_clusters};
pub use egraph::{to_dot, to_egraph, CutId, EGEdge, EGVertex, EGView, VertexKind};
pub use eval::{eval, eval_over, eval_table, Table};
pub use parse::{check_rectified, parse_formula, parse_with_arities};
pub use prenex::{distribute_exists, prenex, Direction};
pub use rectify::{is_rectified, rectify};
pub use signature::{
    builtin_arity, delta_name, identity_name, is_pred_name, is_var_name, Environment, Signature,
};

use thiserror::Error;

use crate::relcore::RelError;

#[derive(Debug, Error)]
pub enum FormulaError {
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("predicate {0} has no relation bound")]
    UnboundPredicate(String),
    #[error("predicate {pred} expects {expected} argument(s), found {found}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("variable {0} is quantified more than once")]
    QuantifiedTwice(String),
    #[error("variable {0} occurs both free and bound")]
    FreeAndBound(String),
    #[error("variable order {given:?} does not match the free variables {free:?}")]
    OrderMismatch { given: Vec<String>, free: Vec<String> },
}
