use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::{
    decode_entry_ref, encode_entry_ref, malformed, AtomKind, AtomModel, Conditional, ConditionalModel,
    ConditionalPart, ConsistencyCheck, Entry, ModelError,
};
use crate::graph::Graph;
use crate::term::{Iri, Term};
use crate::vocab::{Class, Property, Vocabulary};

fn check_model(model: &ConditionalModel) -> Result<(), ModelError> {
    let mut seen = BTreeSet::new();
    let mut refs = ConsistencyCheck::new();
    for c in &model.conditionals {
        if !seen.insert(&c.id) {
            return Err(ModelError::Invariant(format!("conditional {} listed twice", c.id)));
        }
        if c.head.atoms.is_empty() {
            return Err(ModelError::Invariant(format!("conditional {} has an empty head", c.id)));
        }
        let parts = [(AtomKind::Head, Some(&c.head)), (AtomKind::Body, c.body.as_ref())];
        for (kind, part) in parts {
            let Some(part) = part else { continue };
            if !seen.insert(&part.id) {
                return Err(ModelError::Invariant(format!("node {} used twice", part.id)));
            }
            for atom in &part.atoms {
                if atom.kind != kind {
                    return Err(ModelError::Invariant(format!(
                        "atom {} has kind {:?} but sits in a {:?} part",
                        atom.id, atom.kind, kind
                    )));
                }
                if !seen.insert(&atom.id) {
                    return Err(ModelError::Invariant(format!("atom {} used twice", atom.id)));
                }
                for e in atom.entries() {
                    refs.entry(&e.id, &e.refers)?;
                }
            }
        }
    }
    Ok(())
}

/// Encodes a conditional set. Sub-property links (`hasConditionalHeadAtom`,
/// `hasConditionalBodyAtom`, input/output parameters) are also asserted under
/// their super-property, and sub-class typing under the super-class.
pub fn build_conditional_set(model: &ConditionalModel, v: &Vocabulary) -> Result<Graph, ModelError> {
    check_model(model)?;
    let ty = Iri::rdf_type();
    let mut g = Graph::new();
    g.add(&model.set_id, &ty, v.class(Class::ConditionalSet));
    for c in &model.conditionals {
        g.add(&model.set_id, &v.prop(Property::hasConditional), c.id.clone());
        g.add(&c.id, &ty, v.class(Class::Conditional));
        g.add(&c.id, &v.prop(Property::hasConditionalHead), c.head.id.clone());
        g.add(&c.head.id, &ty, v.class(Class::ConditionalHead));
        encode_part(&mut g, v, &c.head, Property::hasConditionalHeadAtom, Class::ConditionalHeadAtom);
        if let Some(body) = &c.body {
            g.add(&c.id, &v.prop(Property::hasConditionalBody), body.id.clone());
            g.add(&body.id, &ty, v.class(Class::ConditionalBody));
            encode_part(&mut g, v, body, Property::hasConditionalBodyAtom, Class::ConditionalBodyAtom);
        }
    }
    Ok(g)
}

fn encode_part(g: &mut Graph, v: &Vocabulary, part: &ConditionalPart, link: Property, class: Class) {
    let ty = Iri::rdf_type();
    for atom in &part.atoms {
        g.add(&part.id, &v.prop(link), atom.id.clone());
        g.add(&part.id, &v.prop(Property::hasConditionalAtom), atom.id.clone());
        g.add(&atom.id, &ty, v.class(class));
        g.add(&atom.id, &ty, v.class(Class::ConditionalAtom));
        let mut link_entry = |e: &Entry, props: &[Property], classes: &[Class]| {
            for p in props {
                g.add(&atom.id, &v.prop(*p), e.id.clone());
            }
            for c in classes {
                g.add(&e.id, &ty, v.class(*c));
            }
            encode_entry_ref(g, v, &e.id, &e.refers);
        };
        link_entry(&atom.subject, &[Property::hasConditionalSubject], &[Class::ConditionalSubject]);
        link_entry(&atom.operator, &[Property::hasConditionalOperator], &[Class::ConditionalOperator]);
        if let Some(o) = &atom.object {
            link_entry(o, &[Property::hasConditionalObject], &[Class::ConditionalObject]);
        }
        for e in &atom.inputs {
            link_entry(
                e,
                &[Property::hasConditionalInputParameter, Property::hasConditionalParameter],
                &[Class::ConditionalInputParameter, Class::ConditionalParameter],
            );
        }
        for e in &atom.outputs {
            link_entry(
                e,
                &[Property::hasConditionalOutputParameter, Property::hasConditionalParameter],
                &[Class::ConditionalOutputParameter, Class::ConditionalParameter],
            );
        }
        for e in &atom.operator_args {
            link_entry(e, &[Property::hasConditionalOperatorArgument], &[Class::ConditionalOperatorArgument]);
        }
        if let Some(lit) = &atom.literal_value {
            g.add(&atom.id, &v.prop(Property::value), lit.clone());
        }
    }
}

fn iri_objects(g: &Graph, node: &Iri, p: &Iri, what: &str) -> Result<Vec<Iri>, ModelError> {
    g.objects(node, p)
        .map(|o| match o {
            Term::Iri(i) => Ok(i.clone()),
            Term::Literal(_) => Err(malformed(node, format!("{what} link points to a literal"))),
        })
        .collect()
}

fn exactly_one(g: &Graph, node: &Iri, p: &Iri, what: &str) -> Result<Iri, ModelError> {
    let mut found = iri_objects(g, node, p, what)?;
    match found.len() {
        0 => Err(malformed(node, format!("missing {what}"))),
        1 => Ok(found.remove(0)),
        n => Err(malformed(node, format!("{n} {what} links, expected one"))),
    }
}

fn at_most_one(g: &Graph, node: &Iri, p: &Iri, what: &str) -> Result<Option<Iri>, ModelError> {
    let mut found = iri_objects(g, node, p, what)?;
    match found.len() {
        0 => Ok(None),
        1 => Ok(Some(found.remove(0))),
        n => Err(malformed(node, format!("{n} {what} links, expected at most one"))),
    }
}

fn decode_entry(g: &Graph, v: &Vocabulary, id: Iri) -> Result<Entry, ModelError> {
    let refers = decode_entry_ref(g, v, &id)?;
    Ok(Entry { id, refers })
}

fn decode_entries(g: &Graph, v: &Vocabulary, atom: &Iri, p: Property, what: &str) -> Result<Vec<Entry>, ModelError> {
    iri_objects(g, atom, &v.prop(p), what)?.into_iter().map(|id| decode_entry(g, v, id)).collect()
}

fn decode_atom(g: &Graph, v: &Vocabulary, id: Iri, expected: AtomKind) -> Result<AtomModel, ModelError> {
    let is_head = g.has_type(&id, &v.class(Class::ConditionalHeadAtom));
    let is_body = g.has_type(&id, &v.class(Class::ConditionalBodyAtom));
    let kind = match (is_head, is_body) {
        (true, true) => return Err(malformed(&id, "atom typed both ConditionalHeadAtom and ConditionalBodyAtom")),
        (false, false) => return Err(malformed(&id, "atom typed neither ConditionalHeadAtom nor ConditionalBodyAtom")),
        (true, false) => AtomKind::Head,
        (false, true) => AtomKind::Body,
    };
    if kind != expected {
        return Err(malformed(&id, format!("{kind:?} atom linked from a {expected:?} node")));
    }
    let subject = exactly_one(g, &id, &v.prop(Property::hasConditionalSubject), "hasConditionalSubject")?;
    let operator = exactly_one(g, &id, &v.prop(Property::hasConditionalOperator), "hasConditionalOperator")?;
    let object = at_most_one(g, &id, &v.prop(Property::hasConditionalObject), "hasConditionalObject")?;
    let mut atom = AtomModel::new(id.clone(), kind, decode_entry(g, v, subject)?, decode_entry(g, v, operator)?);
    atom.object = object.map(|o| decode_entry(g, v, o)).transpose()?;
    atom.inputs = decode_entries(g, v, &id, Property::hasConditionalInputParameter, "hasConditionalInputParameter")?;
    atom.outputs =
        decode_entries(g, v, &id, Property::hasConditionalOutputParameter, "hasConditionalOutputParameter")?;
    atom.operator_args =
        decode_entries(g, v, &id, Property::hasConditionalOperatorArgument, "hasConditionalOperatorArgument")?;
    for p in iri_objects(g, &id, &v.prop(Property::hasConditionalParameter), "hasConditionalParameter")? {
        if !atom.inputs.iter().chain(&atom.outputs).any(|e| e.id == p) {
            return Err(malformed(&id, format!("parameter {p} is neither an input nor an output parameter")));
        }
    }
    let literals: Vec<_> = g.object_literals(&id, &v.prop(Property::value)).cloned().collect();
    atom.literal_value = match literals.len() {
        0 => None,
        1 => literals.into_iter().next(),
        _ => return Err(malformed(&id, "atom carries more than one value literal")),
    };
    Ok(atom)
}

fn decode_part(g: &Graph, v: &Vocabulary, id: Iri, kind: AtomKind) -> Result<ConditionalPart, ModelError> {
    let link = match kind {
        AtomKind::Head => Property::hasConditionalHeadAtom,
        AtomKind::Body => Property::hasConditionalBodyAtom,
    };
    let atoms = iri_objects(g, &id, &v.prop(link), link.local_name())?
        .into_iter()
        .map(|a| decode_atom(g, v, a, kind))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConditionalPart { id, atoms })
}

/// Reads the conditional set rooted at `set_id`. Lists come back sorted by IRI.
pub fn extract_conditional_set(g: &Graph, set_id: &Iri, v: &Vocabulary) -> Result<ConditionalModel, ModelError> {
    if !g.has_type(set_id, &v.class(Class::ConditionalSet)) {
        return Err(malformed(set_id, "not typed ConditionalSet"));
    }
    let mut conditionals = Vec::new();
    for id in iri_objects(g, set_id, &v.prop(Property::hasConditional), "hasConditional")? {
        let head = exactly_one(g, &id, &v.prop(Property::hasConditionalHead), "hasConditionalHead")?;
        let body = at_most_one(g, &id, &v.prop(Property::hasConditionalBody), "hasConditionalBody")?;
        let head = decode_part(g, v, head, AtomKind::Head)?;
        if head.atoms.is_empty() {
            return Err(malformed(&head.id, "conditional head has no atoms"));
        }
        let body = body.map(|b| decode_part(g, v, b, AtomKind::Body)).transpose()?;
        conditionals.push(Conditional { id, head, body });
    }
    Ok(ConditionalModel { set_id: set_id.clone(), conditionals })
}
