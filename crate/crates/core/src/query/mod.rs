//! A SPARQL subset for validating contracts: `PREFIX`, `ASK` / `SELECT`,
//! basic graph patterns and `FILTER` comparisons.
//!
//! Patterns are joined left to right as written, each through the graph's
//! bound-position index. `SELECT` solutions are sorted by the N-Triples
//! rendering of the projected terms so results are reproducible.

mod eval;
mod lexer;
mod parser;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::engine::BuiltinOperator;
use crate::term::Term;

pub use eval::evaluate;
pub use parser::parse_query;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("query syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported query feature: {0}")]
    Unsupported(String),
    #[error("type error: {0}")]
    Type(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryForm {
    Ask,
    /// Projected variable names, without the leading `?`.
    Select(Vec<String>),
}

/// One position of a triple pattern.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(String),
    Term(Term),
}

impl PatternTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryPattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl QueryPattern {
    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

/// `?var op rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filter {
    pub var: String,
    pub op: BuiltinOperator,
    pub rhs: PatternTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub form: QueryForm,
    pub patterns: Vec<QueryPattern>,
    pub filters: Vec<Filter>,
    pub prefixes: BTreeMap<String, String>,
}

impl Query {
    /// Variables in order of first appearance in the patterns.
    pub fn pattern_vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.patterns {
            for v in p.positions().into_iter().filter_map(PatternTerm::var) {
                if !out.iter().any(|x| x == v) {
                    out.push(v.into());
                }
            }
        }
        out
    }

    /// The projected variables: all pattern variables for `ASK`.
    pub fn projection(&self) -> Vec<String> {
        match &self.form {
            QueryForm::Ask => self.pattern_vars(),
            QueryForm::Select(vars) => vars.clone(),
        }
    }
}

/// A solution mapping restricted to the projected variables, in projection
/// order.
pub type Row = Vec<Term>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResultSet {
    Boolean(bool),
    Solutions { vars: Vec<String>, rows: Vec<Row> },
}

impl ResultSet {
    /// `ASK` answer, or whether a `SELECT` has any row.
    pub fn is_positive(&self) -> bool {
        match self {
            ResultSet::Boolean(b) => *b,
            ResultSet::Solutions { rows, .. } => !rows.is_empty(),
        }
    }
}
