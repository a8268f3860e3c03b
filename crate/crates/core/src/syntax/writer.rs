use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::graph::{Graph, Triple};
use crate::term::{write_quoted, Iri, Literal, Term, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER, XSD_STRING};

/// N-Triples output; identical to the canonical form.
pub fn write_ntriples(g: &Graph) -> String {
    String::from_utf8(g.canonicalize()).expect("canonical form is UTF-8")
}

fn is_safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn is_safe_prefix(prefix: &str) -> bool {
    prefix.is_empty()
        || (prefix.starts_with(|c: char| c.is_ascii_alphabetic())
            && prefix.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'))
}

struct Compactor<'a> {
    // longest namespace first so the most specific prefix wins
    namespaces: Vec<(&'a str, &'a str)>,
}

impl<'a> Compactor<'a> {
    fn new(prefixes: &'a BTreeMap<String, Iri>) -> Self {
        let mut namespaces: Vec<(&str, &str)> = prefixes
            .iter()
            .filter(|(p, _)| is_safe_prefix(p))
            .map(|(p, ns)| (p.as_str(), ns.as_str()))
            .collect();
        namespaces.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));
        Self { namespaces }
    }

    fn iri(&self, out: &mut String, iri: &Iri) {
        for (prefix, ns) in &self.namespaces {
            if let Some(local) = iri.as_str().strip_prefix(ns) {
                if local.is_empty() || is_safe_local(local) {
                    let _ = write!(out, "{prefix}:{local}");
                    return;
                }
            }
        }
        let _ = write!(out, "{iri}");
    }

    fn literal(&self, out: &mut String, lit: &Literal) {
        let lex = lit.lexical();
        let bare = match lit.datatype().as_str() {
            XSD_INTEGER => lex.bytes().all(|b| b.is_ascii_digit() || b == b'-' || b == b'+'),
            XSD_DECIMAL => {
                lex.contains('.')
                    && !lex.ends_with('.')
                    && lex.bytes().all(|b| b.is_ascii_digit() || b"+-.".contains(&b))
            }
            XSD_BOOLEAN => lex == "true" || lex == "false",
            _ => false,
        };
        if bare {
            out.push_str(lex);
            return;
        }
        let _ = write_quoted(out, lex);
        if lit.datatype().as_str() != XSD_STRING {
            out.push_str("^^");
            self.iri(out, lit.datatype());
        }
    }

    fn term(&self, out: &mut String, t: &Term) {
        match t {
            Term::Iri(i) => self.iri(out, i),
            Term::Literal(l) => self.literal(out, l),
        }
    }
}

/// Turtle-subset output grouped by subject, with predicate-object lists.
pub fn write_turtle(g: &Graph) -> String {
    let mut out = String::new();
    let c = Compactor::new(g.prefixes());
    for (prefix, ns) in g.prefixes() {
        if is_safe_prefix(prefix) {
            let _ = writeln!(out, "@prefix {prefix}: {ns} .");
        }
    }
    if !out.is_empty() && !g.is_empty() {
        out.push('\n');
    }
    let triples: Vec<&Triple> = g.iter().collect();
    for group in triples.chunk_by(|a, b| a.subject == b.subject) {
        let mut group = group.to_vec();
        group.sort_by_key(|t| t.predicate.as_str() != RDF_TYPE);
        c.iri(&mut out, &group[0].subject);
        for (i, by_pred) in group.chunk_by(|a, b| a.predicate == b.predicate).enumerate() {
            out.push_str(if i == 0 { " " } else { " ;\n    " });
            if by_pred[0].predicate.as_str() == RDF_TYPE {
                out.push('a');
            } else {
                c.iri(&mut out, &by_pred[0].predicate);
            }
            for (j, t) in by_pred.iter().enumerate() {
                out.push_str(if j == 0 { " " } else { ", " });
                c.term(&mut out, &t.object);
            }
        }
        out.push_str(" .\n");
    }
    out
}
