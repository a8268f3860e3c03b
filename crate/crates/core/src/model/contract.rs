use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::{
    decode_entry_ref, encode_entry_ref, malformed, ConsistencyCheck, ContractEntry, ContractKind, ContractModel,
    EntryRef, EntryRole, ModelError,
};
use crate::graph::Graph;
use crate::term::{Iri, Term};
use crate::vocab::{Class, Property, Vocabulary};

fn role_class(role: EntryRole) -> Class {
    match role {
        EntryRole::Participant => Class::SmartContractEntryParticipant,
        EntryRole::Value => Class::SmartContractEntryValue,
    }
}

fn check_entries(model: &ContractModel) -> Result<(), ModelError> {
    let mut ids = BTreeSet::new();
    let mut refs = ConsistencyCheck::new();
    for e in &model.entries {
        if !ids.insert(&e.id) || e.id == model.id {
            return Err(ModelError::Invariant(format!("entry {} used twice", e.id)));
        }
        refs.entry(&e.id, &e.refers)?;
    }
    Ok(())
}

fn encode_common(g: &mut Graph, model: &ContractModel, v: &Vocabulary) {
    let ty = Iri::rdf_type();
    for e in &model.entries {
        g.add(&model.id, &v.prop(Property::consistsOfSmartContractEntry), e.id.clone());
        g.add(&e.id, &ty, v.class(Class::SmartContractEntry));
        g.add(&e.id, &ty, v.class(role_class(e.role)));
        encode_entry_ref(g, v, &e.id, &e.refers);
    }
    for cs in &model.conditional_sets {
        g.add(&model.id, &v.prop(Property::hasConditionalSet), cs.clone());
    }
}

/// Encodes a smart contract: typed node, role-typed entries, entry targets and
/// attached conditional sets.
pub fn build_contract(model: &ContractModel, v: &Vocabulary) -> Result<Graph, ModelError> {
    if model.kind != ContractKind::Contract {
        return Err(ModelError::Invariant("build_contract needs a Contract model".into()));
    }
    check_entries(model)?;
    if let Some(e) = model.entries.iter().find(|e| e.bound_to.is_some()) {
        return Err(ModelError::Invariant(format!("contract entry {} cannot be bound to another entry", e.id)));
    }
    let mut g = Graph::new();
    g.add(&model.id, &Iri::rdf_type(), v.class(Class::SmartContract));
    encode_common(&mut g, model, v);
    for i in &model.instances {
        g.add(&model.id, &v.prop(Property::consistsOfSmartContractInstance), i.clone());
    }
    Ok(g)
}

/// Encodes a contract instance linked from `contract`. Each entry points to its
/// concrete individual and to the contract entry it actualizes, both through
/// `refersExactlyTo`; the contract entry is typed `SmartContractEntry` so the
/// two links can be told apart.
pub fn build_contract_instance(model: &ContractModel, contract: &Iri, v: &Vocabulary) -> Result<Graph, ModelError> {
    if model.kind != ContractKind::Instance {
        return Err(ModelError::Invariant("build_contract_instance needs an Instance model".into()));
    }
    if !model.instances.is_empty() {
        return Err(ModelError::Invariant("an instance cannot own instances".into()));
    }
    check_entries(model)?;
    for e in &model.entries {
        let Some(bound) = &e.bound_to else {
            return Err(ModelError::UnboundEntry(e.id.clone()));
        };
        match &e.refers {
            EntryRef::Exact(target) if target == bound => {
                return Err(ModelError::Invariant(format!("entry {} refers to its own contract entry", e.id)));
            }
            EntryRef::Exact(_) => {}
            EntryRef::Template(_) => {
                return Err(ModelError::Invariant(format!(
                    "instance entry {} must refer to a concrete individual",
                    e.id
                )));
            }
        }
    }
    let ty = Iri::rdf_type();
    let mut g = Graph::new();
    g.add(&model.id, &ty, v.class(Class::SmartContractInstance));
    g.add(contract, &v.prop(Property::consistsOfSmartContractInstance), model.id.clone());
    encode_common(&mut g, model, v);
    for e in &model.entries {
        let bound = e.bound_to.as_ref().expect("checked above");
        g.add(&e.id, &v.prop(Property::refersExactlyTo), bound.clone());
        g.add(bound, &ty, v.class(Class::SmartContractEntry));
    }
    Ok(g)
}

fn iri_list(g: &Graph, node: &Iri, p: &Iri, what: &str) -> Result<Vec<Iri>, ModelError> {
    g.objects(node, p)
        .map(|o| match o {
            Term::Iri(i) => Ok(i.clone()),
            Term::Literal(_) => Err(malformed(node, format!("{what} points to a literal"))),
        })
        .collect()
}

fn decode_role(g: &Graph, v: &Vocabulary, e: &Iri) -> Result<EntryRole, ModelError> {
    let participant = g.has_type(e, &v.class(Class::SmartContractEntryParticipant));
    let value = g.has_type(e, &v.class(Class::SmartContractEntryValue));
    match (participant, value) {
        (true, false) => Ok(EntryRole::Participant),
        (false, true) => Ok(EntryRole::Value),
        (true, true) => Err(malformed(e, "entry typed both participant and value")),
        (false, false) => Err(malformed(e, "entry has no role (participant or value)")),
    }
}

fn decode_instance_entry(g: &Graph, v: &Vocabulary, e: &Iri) -> Result<(EntryRef, Iri), ModelError> {
    if g.objects(e, &v.prop(Property::refersAsNewTo)).next().is_some() {
        return Err(malformed(e, "instance entry uses refersAsNewTo"));
    }
    let targets = iri_list(g, e, &v.prop(Property::refersExactlyTo), "refersExactlyTo")?;
    let entry_class = v.class(Class::SmartContractEntry);
    let (bound, concrete): (Vec<Iri>, Vec<Iri>) = targets.into_iter().partition(|t| g.has_type(t, &entry_class));
    match (bound.as_slice(), concrete.as_slice()) {
        ([b], [c]) => Ok((EntryRef::Exact(c.clone()), b.clone())),
        ([], _) => Err(ModelError::UnboundEntry(e.clone())),
        (_, []) => Err(malformed(e, "instance entry has no concrete individual")),
        _ => Err(malformed(e, "instance entry has ambiguous refersExactlyTo links")),
    }
}

/// Reads a contract or contract instance rooted at `id`.
pub fn extract_contract(g: &Graph, id: &Iri, v: &Vocabulary) -> Result<ContractModel, ModelError> {
    let is_contract = g.has_type(id, &v.class(Class::SmartContract));
    let is_instance = g.has_type(id, &v.class(Class::SmartContractInstance));
    let kind = match (is_contract, is_instance) {
        (true, false) => ContractKind::Contract,
        (false, true) => ContractKind::Instance,
        (true, true) => return Err(malformed(id, "typed both SmartContract and SmartContractInstance")),
        (false, false) => return Err(malformed(id, "typed neither SmartContract nor SmartContractInstance")),
    };
    let mut entries = Vec::new();
    for e in iri_list(g, id, &v.prop(Property::consistsOfSmartContractEntry), "consistsOfSmartContractEntry")? {
        let role = decode_role(g, v, &e)?;
        let (refers, bound_to) = match kind {
            ContractKind::Contract => (decode_entry_ref(g, v, &e)?, None),
            ContractKind::Instance => {
                let (r, b) = decode_instance_entry(g, v, &e)?;
                (r, Some(b))
            }
        };
        entries.push(ContractEntry { id: e, role, refers, bound_to });
    }
    let conditional_sets = iri_list(g, id, &v.prop(Property::hasConditionalSet), "hasConditionalSet")?;
    let instances = iri_list(
        g,
        id,
        &v.prop(Property::consistsOfSmartContractInstance),
        "consistsOfSmartContractInstance",
    )?;
    if kind == ContractKind::Instance && !instances.is_empty() {
        return Err(malformed(id, "an instance cannot own instances"));
    }
    Ok(ContractModel { id: id.clone(), kind, entries, conditional_sets, instances })
}

/// The contract an instance is linked from, if the graph says.
pub fn parent_contract(g: &Graph, instance: &Iri, v: &Vocabulary) -> Option<Iri> {
    g.subjects(&v.prop(Property::consistsOfSmartContractInstance), &Term::Iri(instance.clone())).next().cloned()
}

/// The unique node typed `class`; errors when there are none or several.
pub fn single_node_of_class(g: &Graph, class: Class, v: &Vocabulary) -> Result<Iri, ModelError> {
    let class_iri = v.class(class);
    let nodes: Vec<&Iri> = g.instances_of(&class_iri).collect();
    match nodes.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(malformed(&class_iri, "graph contains no node of this class")),
        many => Err(malformed(&class_iri, format!("graph contains {} nodes of this class, expected one", many.len()))),
    }
}
