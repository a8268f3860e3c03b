//! Conditional evaluation against a world-state graph.
//!
//! A conditional is checked, never executed. Its body is a conjunction of
//! atoms; every binding of the body's templates that makes all body atoms hold
//! triggers the conditional, and the head must then hold under that binding
//! (templates that occur only in the head are searched existentially).
//!
//! * no triggering binding: [`Status::NotApplicable`]
//! * some triggering binding whose head cannot be satisfied: [`Status::Violated`]
//! * otherwise: [`Status::Fulfilled`]
//!
//! Bindings are enumerated in a fixed order (templates in order of first
//! appearance, candidates sorted by IRI), so witnesses are reproducible.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::decimal::Decimal;
use crate::graph::Graph;
use crate::model::{AtomModel, Conditional, ConditionalModel, Entry, EntryRef, Template};
use crate::term::{Iri, Literal, Term};
use crate::vocab::{Property, Vocabulary};

/// Numeric comparison operators understood by the engine and the query
/// engine's `FILTER`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub enum BuiltinOperator {
    LessEqual,
    Less,
    GreaterEqual,
    Greater,
    Equal,
    NotEqual,
}

impl BuiltinOperator {
    pub const ALL: [BuiltinOperator; 6] = [
        BuiltinOperator::LessEqual,
        BuiltinOperator::Less,
        BuiltinOperator::GreaterEqual,
        BuiltinOperator::Greater,
        BuiltinOperator::Equal,
        BuiltinOperator::NotEqual,
    ];

    pub fn local_name(self) -> &'static str {
        match self {
            BuiltinOperator::LessEqual => "lessEqual",
            BuiltinOperator::Less => "less",
            BuiltinOperator::GreaterEqual => "greaterEqual",
            BuiltinOperator::Greater => "greater",
            BuiltinOperator::Equal => "equal",
            BuiltinOperator::NotEqual => "notEqual",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BuiltinOperator::LessEqual => "<=",
            BuiltinOperator::Less => "<",
            BuiltinOperator::GreaterEqual => ">=",
            BuiltinOperator::Greater => ">",
            BuiltinOperator::Equal => "=",
            BuiltinOperator::NotEqual => "!=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.symbol() == s)
    }

    pub fn iri(self, v: &Vocabulary) -> Iri {
        v.term(self.local_name())
    }

    pub fn from_iri(iri: &Iri, v: &Vocabulary) -> Option<Self> {
        let local = v.local_of(iri)?;
        Self::ALL.into_iter().find(|op| op.local_name() == local)
    }

    /// Whether `lhs op rhs` holds, given `lhs.cmp(rhs)`.
    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            BuiltinOperator::LessEqual => ord != Ordering::Greater,
            BuiltinOperator::Less => ord == Ordering::Less,
            BuiltinOperator::GreaterEqual => ord != Ordering::Less,
            BuiltinOperator::Greater => ord == Ordering::Greater,
            BuiltinOperator::Equal => ord == Ordering::Equal,
            BuiltinOperator::NotEqual => ord != Ordering::Equal,
        }
    }

    pub fn compare(self, lhs: &Decimal, rhs: &Decimal) -> bool {
        self.holds(lhs.cmp(rhs))
    }
}

/// Template IRI → concrete individual.
pub type Binding = BTreeMap<Iri, Iri>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Status {
    NotApplicable,
    Fulfilled,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionalStatus {
    pub status: Status,
    /// The triggering binding (extended by the head search when fulfilled).
    /// Absent for `NotApplicable`.
    pub witness: Option<Binding>,
}

/// Status of one conditional of a set.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionalOutcome {
    pub conditional: Iri,
    pub status: Status,
    pub witness: Option<Binding>,
    /// Parameter and operator-argument entries carried by the conditional;
    /// they are not checked against the state.
    pub unconstrained: Vec<Iri>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("template {template} of atom {atom} is not bound")]
    UnboundTemplate { atom: Iri, template: Iri },
    #[error("atom {atom} needs a numeric value of {subject}, but the state has none")]
    MissingLiteral { atom: Iri, subject: Iri },
    #[error("atom {atom} uses a comparison operator without a numeric constant")]
    MissingConstant { atom: Iri },
}

/// Individuals of `state` carrying every feature of `template`. Candidates are
/// the subjects of `state`; the template node itself is never a candidate.
pub fn match_template(state: &Graph, template: &Template) -> BTreeSet<Iri> {
    let mut features = template.features.iter();
    let candidates: BTreeSet<Iri> = match features.next() {
        None => state.subject_iris().cloned().collect(),
        Some((p, o)) => state.subjects(p, o).cloned().collect(),
    };
    candidates
        .into_iter()
        .filter(|e| *e != template.id)
        .filter(|e| template.features.iter().all(|(p, o)| state.contains_spo(e, p, o)))
        .collect()
}

/// Evaluates conditionals with a given vocabulary (for the `value` property
/// and the built-in operator IRIs).
#[derive(Clone, Copy, Debug)]
pub struct Engine<'v> {
    vocab: &'v Vocabulary,
}

fn resolve(entry: &Entry, atom: &AtomModel, binding: &Binding) -> Result<Iri, EngineError> {
    match &entry.refers {
        EntryRef::Exact(i) => Ok(i.clone()),
        EntryRef::Template(t) => binding
            .get(&t.id)
            .cloned()
            .ok_or_else(|| EngineError::UnboundTemplate { atom: atom.id.clone(), template: t.id.clone() }),
    }
}

/// Templates that constrain an atom: those of its subject, operator and object.
fn grounded_templates(atom: &AtomModel) -> impl Iterator<Item = &Template> {
    [Some(&atom.subject), Some(&atom.operator), atom.object.as_ref()].into_iter().flatten().filter_map(|e| {
        match &e.refers {
            EntryRef::Template(t) => Some(t),
            EntryRef::Exact(_) => None,
        }
    })
}

impl<'v> Engine<'v> {
    pub fn new(vocab: &'v Vocabulary) -> Self {
        Self { vocab }
    }

    fn numeric_values(&self, state: &Graph, subject: &Iri) -> Vec<Decimal> {
        state.object_literals(subject, &self.vocab.prop(Property::value)).filter_map(Literal::numeric).collect()
    }

    /// Whether `atom` holds in `state` under `binding`.
    ///
    /// A plain operator `op` holds when `(subject, op, object)` is a triple of
    /// the state (any object when the atom has none, or the atom's literal).
    /// A built-in comparison holds when some numeric `value` of the subject
    /// compares as required with the atom's literal (or with the object's
    /// numeric `value` when the atom has no literal).
    pub fn ground_atom(&self, state: &Graph, atom: &AtomModel, binding: &Binding) -> Result<bool, EngineError> {
        let subject = resolve(&atom.subject, atom, binding)?;
        let operator = resolve(&atom.operator, atom, binding)?;
        let object = atom.object.as_ref().map(|o| resolve(o, atom, binding)).transpose()?;
        if let Some(op) = BuiltinOperator::from_iri(&operator, self.vocab) {
            let constants: Vec<Decimal> = match (&atom.literal_value, &object) {
                (Some(lit), _) => {
                    let c = lit.numeric().ok_or_else(|| EngineError::MissingConstant { atom: atom.id.clone() })?;
                    alloc::vec![c]
                }
                (None, Some(o)) => {
                    let vals = self.numeric_values(state, o);
                    if vals.is_empty() {
                        return Err(EngineError::MissingLiteral { atom: atom.id.clone(), subject: o.clone() });
                    }
                    vals
                }
                (None, None) => return Err(EngineError::MissingConstant { atom: atom.id.clone() }),
            };
            let values = self.numeric_values(state, &subject);
            if values.is_empty() {
                return Err(EngineError::MissingLiteral { atom: atom.id.clone(), subject });
            }
            return Ok(values.iter().any(|v| constants.iter().any(|c| op.compare(v, c))));
        }
        Ok(match (object, &atom.literal_value) {
            (Some(o), _) => state.contains_spo(&subject, &operator, &Term::Iri(o)),
            (None, Some(lit)) => state.contains_spo(&subject, &operator, &Term::Literal(lit.clone())),
            (None, None) => state.objects(&subject, &operator).next().is_some(),
        })
    }

    /// Depth-first search over `atoms[i..]`, binding templates as they first
    /// appear. `visit` returns `true` to stop the search.
    fn search(
        &self,
        state: &Graph,
        atoms: &[AtomModel],
        binding: &mut Binding,
        visit: &mut dyn FnMut(&Binding) -> Result<bool, EngineError>,
    ) -> Result<bool, EngineError> {
        let Some((atom, rest)) = atoms.split_first() else {
            return visit(binding);
        };
        let mut pending: Vec<&Template> = Vec::new();
        for t in grounded_templates(atom) {
            if !binding.contains_key(&t.id) && !pending.iter().any(|p| p.id == t.id) {
                pending.push(t);
            }
        }
        self.bind_pending(state, atom, rest, &pending, binding, visit)
    }

    fn bind_pending(
        &self,
        state: &Graph,
        atom: &AtomModel,
        rest: &[AtomModel],
        pending: &[&Template],
        binding: &mut Binding,
        visit: &mut dyn FnMut(&Binding) -> Result<bool, EngineError>,
    ) -> Result<bool, EngineError> {
        let Some((t, more)) = pending.split_first() else {
            if self.ground_atom(state, atom, binding)? {
                return self.search(state, rest, binding, visit);
            }
            return Ok(false);
        };
        for candidate in match_template(state, t) {
            binding.insert(t.id.clone(), candidate);
            let stop = self.bind_pending(state, atom, rest, more, binding, visit)?;
            binding.remove(&t.id);
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn evaluate_conditional(&self, state: &Graph, c: &Conditional) -> Result<ConditionalStatus, EngineError> {
        let mut first_fulfilled: Option<Binding> = None;
        let mut violated: Option<Binding> = None;
        let mut triggered = false;
        let head = &c.head.atoms;
        self.search(state, c.body_atoms(), &mut Binding::new(), &mut |body_binding| {
            triggered = true;
            let mut extension = None;
            self.search(state, head, &mut body_binding.clone(), &mut |full| {
                extension = Some(full.clone());
                Ok(true)
            })?;
            match extension {
                Some(full) => {
                    first_fulfilled.get_or_insert(full);
                    Ok(false)
                }
                None => {
                    violated = Some(body_binding.clone());
                    Ok(true)
                }
            }
        })?;
        Ok(match (triggered, violated) {
            (false, _) => ConditionalStatus { status: Status::NotApplicable, witness: None },
            (true, Some(w)) => ConditionalStatus { status: Status::Violated, witness: Some(w) },
            (true, None) => ConditionalStatus { status: Status::Fulfilled, witness: first_fulfilled },
        })
    }

    /// One outcome per conditional, ordered by conditional IRI.
    pub fn evaluate_set(&self, state: &Graph, set: &ConditionalModel) -> Result<Vec<ConditionalOutcome>, EngineError> {
        let mut conditionals: Vec<&Conditional> = set.conditionals.iter().collect();
        conditionals.sort_by(|a, b| a.id.cmp(&b.id));
        conditionals
            .into_iter()
            .map(|c| {
                let s = self.evaluate_conditional(state, c)?;
                Ok(ConditionalOutcome {
                    conditional: c.id.clone(),
                    status: s.status,
                    witness: s.witness,
                    unconstrained: unconstrained_entries(c),
                })
            })
            .collect()
    }
}

/// Parameter and operator-argument entry ids of a conditional, sorted.
pub fn unconstrained_entries(c: &Conditional) -> Vec<Iri> {
    let atoms = c.head.atoms.iter().chain(c.body_atoms());
    let ids: BTreeSet<Iri> = atoms
        .flat_map(|a| a.inputs.iter().chain(&a.outputs).chain(&a.operator_args))
        .map(|e| e.id.clone())
        .collect();
    ids.into_iter().collect()
}
