//! Textual RDF syntaxes: N-Triples and a Turtle subset.
//!
//! The Turtle subset covers `@prefix`/`PREFIX`, the `a` keyword, IRIs and
//! prefixed names, string/numeric/boolean literals, and predicate-object and
//! object lists. Blank nodes (`_:x`, `[]`) are rejected with
//! [`ParseError::BlankNode`]; collections, `@base`, language tags and doubles
//! are syntax errors.

mod parser;
mod writer;

use alloc::string::String;

use crate::graph::Graph;

pub use writer::{write_ntriples, write_turtle};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    NTriples,
    Turtle,
}

impl Format {
    /// Picks a format from a file extension (`nt` or `ttl`).
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "nt" => Some(Format::NTriples),
            "ttl" => Some(Format::Turtle),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("blank node at {line}:{column}; blank nodes are not supported")]
    BlankNode { line: usize, column: usize },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. } | ParseError::BlankNode { line, column } => (*line, *column),
        }
    }
}

pub fn parse(bytes: &[u8], format: Format) -> Result<Graph, ParseError> {
    let text = match core::str::from_utf8(bytes) {
        Ok(t) => t,
        Err(e) => {
            let valid = core::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let line = valid.matches('\n').count() + 1;
            let column = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            return Err(ParseError::Syntax { line, column, message: "input is not valid UTF-8".into() });
        }
    };
    parser::Parser::new(text, format).parse_document()
}

pub fn parse_str(text: &str, format: Format) -> Result<Graph, ParseError> {
    parser::Parser::new(text, format).parse_document()
}

pub fn serialize(g: &Graph, format: Format) -> String {
    match format {
        Format::NTriples => write_ntriples(g),
        Format::Turtle => write_turtle(g),
    }
}
