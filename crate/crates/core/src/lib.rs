//! Finite-model toolkit for analysing relations: extensional relations and
//! their algebra, a first-order formula front end, the explication rewrite
//! that exposes hidden identities, constructive reductions, and measures of
//! triadicity.

pub mod acceptance;
pub mod analyze;
pub mod demo;
pub mod exec;
pub mod explicate;
pub mod formula;
pub mod reduce;
pub mod relcore;
