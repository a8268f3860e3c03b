//! Typed views over the conditional and smart-contract encodings.
//!
//! Builders turn a model into triples; extractors read a model back from any
//! graph that contains the encoding. `extract(build(m))` equals
//! `m.normalized()`: extracted lists come back sorted by IRI.

mod conditional;
mod contract;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::term::{Iri, Term};
use crate::vocab::{Class, Property, Vocabulary};

pub use conditional::{build_conditional_set, extract_conditional_set};
pub use contract::{build_contract, build_contract_instance, extract_contract, parent_contract, single_node_of_class};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("model invariant violated: {0}")]
    Invariant(String),
    #[error("malformed encoding at {node}: {reason}")]
    Malformed { node: Iri, reason: String },
    #[error("instance entry {0} is not bound to a contract entry")]
    UnboundEntry(Iri),
}

pub(crate) fn malformed(node: &Iri, reason: impl Into<String>) -> ModelError {
    ModelError::Malformed { node: node.clone(), reason: reason.into() }
}

/// An entry template: the individual's identity is unknown, only the features
/// it must exhibit. Each feature `(p, o)` requires a triple `(e, p, o)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Template {
    pub id: Iri,
    pub features: BTreeSet<(Iri, Term)>,
}

impl Template {
    pub fn new(id: Iri) -> Self {
        Self { id, features: BTreeSet::new() }
    }

    pub fn with_feature(mut self, p: Iri, o: impl Into<Term>) -> Self {
        self.features.insert((p, o.into()));
        self
    }
}

/// How an entry designates its individual: directly (`refersExactlyTo`) or
/// through a template (`refersAsNewTo`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntryRef {
    Exact(Iri),
    Template(Template),
}

/// An entry node of a conditional atom (subject, operator, object, parameter
/// or operator argument).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub id: Iri,
    pub refers: EntryRef,
}

impl Entry {
    pub fn exact(id: Iri, target: Iri) -> Self {
        Self { id, refers: EntryRef::Exact(target) }
    }

    pub fn template(id: Iri, template: Template) -> Self {
        Self { id, refers: EntryRef::Template(template) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    Head,
    Body,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AtomModel {
    pub id: Iri,
    pub kind: AtomKind,
    pub subject: Entry,
    pub operator: Entry,
    pub object: Option<Entry>,
    pub inputs: Vec<Entry>,
    pub outputs: Vec<Entry>,
    pub operator_args: Vec<Entry>,
    /// Comparison constant attached to the atom through `value`.
    pub literal_value: Option<crate::term::Literal>,
}

impl AtomModel {
    pub fn new(id: Iri, kind: AtomKind, subject: Entry, operator: Entry) -> Self {
        Self {
            id,
            kind,
            subject,
            operator,
            object: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            operator_args: Vec::new(),
            literal_value: None,
        }
    }

    pub fn with_object(mut self, object: Entry) -> Self {
        self.object = Some(object);
        self
    }

    pub fn with_literal(mut self, lit: crate::term::Literal) -> Self {
        self.literal_value = Some(lit);
        self
    }

    /// Every entry of the atom, in subject/operator/object/inputs/outputs/args
    /// order.
    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        [&self.subject, &self.operator]
            .into_iter()
            .chain(self.object.iter())
            .chain(self.inputs.iter())
            .chain(self.outputs.iter())
            .chain(self.operator_args.iter())
    }

    fn normalized(mut self) -> Self {
        self.inputs.sort();
        self.outputs.sort();
        self.operator_args.sort();
        self
    }
}

/// A conditional head or body node and its atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalPart {
    pub id: Iri,
    pub atoms: Vec<AtomModel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conditional {
    pub id: Iri,
    pub head: ConditionalPart,
    /// At most one body node; an absent or atom-less body always holds.
    pub body: Option<ConditionalPart>,
}

impl Conditional {
    pub fn body_atoms(&self) -> &[AtomModel] {
        self.body.as_ref().map_or(&[], |b| &b.atoms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalModel {
    pub set_id: Iri,
    pub conditionals: Vec<Conditional>,
}

impl ConditionalModel {
    /// Sorts every list by IRI, the order extraction produces.
    pub fn normalized(&self) -> Self {
        let mut m = self.clone();
        for c in &mut m.conditionals {
            let parts = core::iter::once(&mut c.head).chain(c.body.as_mut());
            for part in parts {
                part.atoms = core::mem::take(&mut part.atoms).into_iter().map(AtomModel::normalized).collect();
                part.atoms.sort_by(|a, b| a.id.cmp(&b.id));
            }
        }
        m.conditionals.sort_by(|a, b| a.id.cmp(&b.id));
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractKind {
    Contract,
    Instance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntryRole {
    Participant,
    Value,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ContractEntry {
    pub id: Iri,
    pub role: EntryRole,
    pub refers: EntryRef,
    /// For instance entries: the contract entry this entry actualizes.
    pub bound_to: Option<Iri>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractModel {
    pub id: Iri,
    pub kind: ContractKind,
    pub entries: Vec<ContractEntry>,
    pub conditional_sets: Vec<Iri>,
    /// Instances linked from a contract; always empty for instances.
    pub instances: Vec<Iri>,
}

impl ContractModel {
    pub fn normalized(&self) -> Self {
        let mut m = self.clone();
        m.entries.sort();
        m.conditional_sets.sort();
        m.instances.sort();
        m
    }
}

/// Emits the typing and reference triples of an entry node.
pub(crate) fn encode_entry_ref(g: &mut Graph, v: &Vocabulary, entry: &Iri, refers: &EntryRef) {
    match refers {
        EntryRef::Exact(target) => g.add(entry, &v.prop(Property::refersExactlyTo), target.clone()),
        EntryRef::Template(t) => {
            g.add(entry, &v.prop(Property::refersAsNewTo), t.id.clone());
            g.add(&t.id, &Iri::rdf_type(), v.class(Class::ConditionalEntryTemplate));
            for (p, o) in &t.features {
                g.add(&t.id, p, o.clone());
            }
        }
    }
}

pub(crate) fn decode_template(g: &Graph, v: &Vocabulary, id: &Iri) -> Template {
    let marker = (Iri::rdf_type(), Term::Iri(v.class(Class::ConditionalEntryTemplate)));
    let features = g
        .matching(&crate::graph::TriplePattern::new(Some(id.clone()), None, None))
        .map(|t| (t.predicate.clone(), t.object.clone()))
        .filter(|f| *f != marker)
        .collect();
    Template { id: id.clone(), features }
}

/// Reads the single `refersExactlyTo` xor `refersAsNewTo` link of an entry.
pub(crate) fn decode_entry_ref(g: &Graph, v: &Vocabulary, entry: &Iri) -> Result<EntryRef, ModelError> {
    let exact: Vec<&Term> = g.objects(entry, &v.prop(Property::refersExactlyTo)).collect();
    let as_new: Vec<&Term> = g.objects(entry, &v.prop(Property::refersAsNewTo)).collect();
    match (exact.as_slice(), as_new.as_slice()) {
        ([], []) => Err(malformed(entry, "entry has neither refersExactlyTo nor refersAsNewTo")),
        ([_, ..], [_, ..]) => Err(malformed(entry, "entry has both refersExactlyTo and refersAsNewTo")),
        ([Term::Iri(t)], []) => Ok(EntryRef::Exact(t.clone())),
        ([], [Term::Iri(t)]) => Ok(EntryRef::Template(decode_template(g, v, t))),
        ([_], []) | ([], [_]) => Err(malformed(entry, "entry refers to a literal")),
        _ => Err(malformed(entry, "entry has more than one reference target")),
    }
}

/// Checks that every entry/template id is used consistently across a model.
pub(crate) struct ConsistencyCheck {
    entries: alloc::collections::BTreeMap<Iri, EntryRef>,
    templates: alloc::collections::BTreeMap<Iri, BTreeSet<(Iri, Term)>>,
}

impl ConsistencyCheck {
    pub(crate) fn new() -> Self {
        Self { entries: Default::default(), templates: Default::default() }
    }

    pub(crate) fn entry(&mut self, id: &Iri, refers: &EntryRef) -> Result<(), ModelError> {
        if let Some(prev) = self.entries.get(id) {
            if prev != refers {
                return Err(ModelError::Invariant(alloc::format!(
                    "entry {id} is used with two different references"
                )));
            }
        }
        self.entries.insert(id.clone(), refers.clone());
        if let EntryRef::Template(t) = refers {
            if let Some(prev) = self.templates.get(&t.id) {
                if *prev != t.features {
                    return Err(ModelError::Invariant(alloc::format!(
                        "template {} is declared with two different feature sets",
                        t.id
                    )));
                }
            }
            self.templates.insert(t.id.clone(), t.features.clone());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
