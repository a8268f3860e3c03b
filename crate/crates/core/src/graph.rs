//! Set-semantics triple graphs with subject/predicate/object indexes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::term::{Iri, Literal, Term};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Self { subject, predicate, object: object.into() }
    }
}

impl fmt::Display for Triple {
    /// One N-Triples statement, without the trailing newline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A triple pattern; `None` positions match anything.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: Option<Iri>,
    pub predicate: Option<Iri>,
    pub object: Option<Term>,
}

impl TriplePattern {
    pub fn new(subject: Option<Iri>, predicate: Option<Iri>, object: Option<Term>) -> Self {
        Self { subject, predicate, object }
    }

    pub fn matches(&self, t: &Triple) -> bool {
        self.subject.as_ref().is_none_or(|s| *s == t.subject)
            && self.predicate.as_ref().is_none_or(|p| *p == t.predicate)
            && self.object.as_ref().is_none_or(|o| *o == t.object)
    }
}

static EMPTY: BTreeSet<Triple> = BTreeSet::new();

/// A finite set of triples plus a prefix map used only when serializing.
///
/// Equality, hashing of the canonical form, and every query ignore the prefix
/// map and the order in which triples were inserted.
#[derive(Clone, Default)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    by_subject: BTreeMap<Iri, BTreeSet<Triple>>,
    by_predicate: BTreeMap<Iri, BTreeSet<Triple>>,
    by_object: BTreeMap<Term, BTreeSet<Triple>>,
    prefixes: BTreeMap<String, Iri>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if the triple was not already present.
    pub fn insert(&mut self, t: Triple) -> bool {
        if self.triples.contains(&t) {
            return false;
        }
        self.by_subject.entry(t.subject.clone()).or_default().insert(t.clone());
        self.by_predicate.entry(t.predicate.clone()).or_default().insert(t.clone());
        self.by_object.entry(t.object.clone()).or_default().insert(t.clone());
        self.triples.insert(t)
    }

    pub fn add(&mut self, s: &Iri, p: &Iri, o: impl Into<Term>) {
        self.insert(Triple::new(s.clone(), p.clone(), o));
    }

    pub fn set_prefix(&mut self, prefix: impl Into<String>, ns: Iri) {
        self.prefixes.insert(prefix.into(), ns);
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.contains(t)
    }

    pub fn contains_spo(&self, s: &Iri, p: &Iri, o: &Term) -> bool {
        self.by_subject
            .get(s)
            .is_some_and(|ts| ts.iter().any(|t| t.predicate == *p && t.object == *o))
    }

    /// All triples in a stable (sorted) order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Triples matching every bound position of `pattern`, using the most
    /// selective bound index.
    pub fn matching<'a>(&'a self, pattern: &TriplePattern) -> impl Iterator<Item = &'a Triple> + 'a {
        let mut candidates: Option<&'a BTreeSet<Triple>> = None;
        let mut narrow = |set: &'a BTreeSet<Triple>| {
            if candidates.is_none_or(|c| set.len() < c.len()) {
                candidates = Some(set);
            }
        };
        if let Some(s) = &pattern.subject {
            narrow(self.by_subject.get(s).unwrap_or(&EMPTY));
        }
        if let Some(p) = &pattern.predicate {
            narrow(self.by_predicate.get(p).unwrap_or(&EMPTY));
        }
        if let Some(o) = &pattern.object {
            narrow(self.by_object.get(o).unwrap_or(&EMPTY));
        }
        let pattern = pattern.clone();
        candidates.unwrap_or(&self.triples).iter().filter(move |t| pattern.matches(t))
    }

    /// Convenience wrapper over [`Graph::matching`] collecting into a set.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> BTreeSet<Triple> {
        self.matching(pattern).cloned().collect()
    }

    /// Objects of `(s, p, ?)` in sorted order.
    pub fn objects<'a>(&'a self, s: &Iri, p: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        let p = p.clone();
        self.by_subject.get(s).unwrap_or(&EMPTY).iter().filter(move |t| t.predicate == p).map(|t| &t.object)
    }

    /// IRI objects of `(s, p, ?)`; literal objects are skipped.
    pub fn object_iris<'a>(&'a self, s: &Iri, p: &Iri) -> impl Iterator<Item = &'a Iri> + 'a {
        self.objects(s, p).filter_map(Term::as_iri)
    }

    pub fn object_literals<'a>(&'a self, s: &Iri, p: &Iri) -> impl Iterator<Item = &'a Literal> + 'a {
        self.objects(s, p).filter_map(Term::as_literal)
    }

    /// Subjects of `(?, p, o)` in sorted order.
    pub fn subjects<'a>(&'a self, p: &Iri, o: &Term) -> impl Iterator<Item = &'a Iri> + 'a {
        let p = p.clone();
        self.by_object.get(o).unwrap_or(&EMPTY).iter().filter(move |t| t.predicate == p).map(|t| &t.subject)
    }

    pub fn has_type(&self, s: &Iri, class: &Iri) -> bool {
        self.contains_spo(s, &Iri::rdf_type(), &Term::Iri(class.clone()))
    }

    /// Individuals typed with `class`, sorted.
    pub fn instances_of<'a>(&'a self, class: &Iri) -> impl Iterator<Item = &'a Iri> + 'a {
        let ty = Iri::rdf_type();
        self.by_object
            .get(&Term::Iri(class.clone()))
            .unwrap_or(&EMPTY)
            .iter()
            .filter(move |t| t.predicate == ty)
            .map(|t| &t.subject)
    }

    /// Every IRI that occurs in subject position, sorted.
    pub fn subject_iris(&self) -> impl Iterator<Item = &Iri> {
        self.by_subject.keys()
    }

    /// Set union of triples; `self` wins prefix conflicts.
    pub fn merge(&self, other: &Graph) -> Graph {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    /// In-place form of [`Graph::merge`].
    pub fn extend_from(&mut self, other: &Graph) {
        for t in other.iter() {
            self.insert(t.clone());
        }
        for (p, ns) in &other.prefixes {
            self.prefixes.entry(p.clone()).or_insert_with(|| ns.clone());
        }
    }

    /// Canonical bytes: one N-Triples statement per line, lines sorted by
    /// codepoint, each terminated by `\n`, UTF-8 without BOM. Equal triple sets
    /// always produce identical bytes.
    pub fn canonicalize(&self) -> Vec<u8> {
        let mut lines: Vec<String> = self.triples.iter().map(|t| alloc::format!("{t}\n")).collect();
        lines.sort_unstable();
        lines.concat().into_bytes()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.triples.iter().map(|t| alloc::format!("{t}"))).finish()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}
