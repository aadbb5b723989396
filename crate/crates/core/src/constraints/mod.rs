//! A small navigation-constraint language over instance graphs.
//!
//! Invariants are written against a type graph and evaluated on every instance
//! of their context type:
//!
//! ```text
//! context Spool
//!   inv onlyJobs:
//!     self.bChld->forAll(c | c.oclIsTypeOf(BSite) or c.oclIsTypeOf(Job))
//! ```
//!
//! Navigating an edge type whose multiplicity upper bound is 1 yields a single
//! node; any other navigation yields a collection. `oclIsTypeOf` tests the
//! exact type, not subtype membership.

mod ast;
mod eval;
mod parser;

use thiserror::Error;

pub use ast::{BinOp, CollOp, ConstraintDoc, Expr, Invariant};
pub use eval::{evaluate, type_check, CheckResult, InstanceOutcome, InvariantOutcome};
pub use parser::{parse_constraints, parse_expr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("type error in {invariant}: {message}")]
    TypeCheck { invariant: String, message: String },
    #[error("evaluation error in {invariant} on `{node}`: {message}")]
    Evaluation {
        invariant: String,
        node: String,
        message: String,
    },
}
