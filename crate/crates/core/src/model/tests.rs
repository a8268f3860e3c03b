use super::*;
use crate::graph::Triple;
use crate::scenario::{self, ex};
use crate::term::Literal;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use proptest::prelude::*;

fn v() -> Vocabulary {
    Vocabulary::default()
}

#[test]
fn sell_conditional_graph_shape() {
    let v = v();
    let g = build_conditional_set(&scenario::sell_conditional_set(), &v).unwrap();
    assert!(g.has_type(&ex("101314-cond-set"), &v.class(Class::ConditionalSet)));
    let head_atoms: Vec<_> = g.instances_of(&v.class(Class::ConditionalHeadAtom)).collect();
    assert_eq!(head_atoms, vec![&ex("101314-cond-1-head-atom")]);
    assert_eq!(g.instances_of(&v.class(Class::ConditionalBodyAtom)).count(), 0);
    assert!(g.has_type(&ex("101314-cond-1-body"), &v.class(Class::ConditionalBody)));
    let subject_entry = ex("101314-cond-1-head-atom-subject");
    assert!(g.contains_spo(&subject_entry, &v.prop(Property::refersExactlyTo), &Term::Iri(ex("trading-agent"))));
}

#[test]
fn empty_set_is_one_typed_node() {
    let v = v();
    let m = ConditionalModel { set_id: ex("s"), conditionals: vec![] };
    let g = build_conditional_set(&m, &v).unwrap();
    assert_eq!(g.len(), 1);
    assert!(g.has_type(&ex("s"), &v.class(Class::ConditionalSet)));
    assert_eq!(extract_conditional_set(&g, &ex("s"), &v).unwrap(), m);
}

#[test]
fn conditional_round_trips() {
    let v = v();
    for m in [scenario::sell_conditional_set(), scenario::price_drop_conditional_set(&v)] {
        let g = build_conditional_set(&m, &v).unwrap();
        assert_eq!(extract_conditional_set(&g, &m.set_id, &v).unwrap(), m.normalized());
    }
}

#[test]
fn price_drop_has_three_body_atoms() {
    let v = v();
    let g = build_conditional_set(&scenario::price_drop_conditional_set(&v), &v).unwrap();
    assert_eq!(g.instances_of(&v.class(Class::ConditionalBodyAtom)).count(), 3);
    let atom3 = ex("101314-cond-1-body-atom-3");
    assert_eq!(g.object_literals(&atom3, &v.prop(Property::value)).next(), Some(&Literal::integer(100)));
}

fn remove(g: &Graph, s: &Iri, p: &Iri) -> Graph {
    g.iter().filter(|t| !(t.subject == *s && t.predicate == *p)).cloned().collect()
}

#[test]
fn missing_operator_is_malformed() {
    let v = v();
    let g = build_conditional_set(&scenario::sell_conditional_set(), &v).unwrap();
    let atom = ex("101314-cond-1-head-atom");
    let broken = remove(&g, &atom, &v.prop(Property::hasConditionalOperator));
    let err = extract_conditional_set(&broken, &ex("101314-cond-set"), &v).unwrap_err();
    assert!(matches!(&err, ModelError::Malformed { node, reason } if *node == atom && reason.contains("hasConditionalOperator")), "{err}");
}

#[test]
fn atom_typed_head_and_body_is_malformed() {
    let v = v();
    let mut g = build_conditional_set(&scenario::sell_conditional_set(), &v).unwrap();
    g.add(&ex("101314-cond-1-head-atom"), &Iri::rdf_type(), v.class(Class::ConditionalBodyAtom));
    let err = extract_conditional_set(&g, &ex("101314-cond-set"), &v).unwrap_err();
    assert!(matches!(err, ModelError::Malformed { .. }));
}

#[test]
fn two_bodies_rejected() {
    let v = v();
    let mut g = build_conditional_set(&scenario::sell_conditional_set(), &v).unwrap();
    g.add(&ex("101314-cond-1"), &v.prop(Property::hasConditionalBody), ex("other-body"));
    assert!(extract_conditional_set(&g, &ex("101314-cond-set"), &v).is_err());
}

#[test]
fn builder_invariants() {
    let v = v();
    let mut m = scenario::sell_conditional_set();
    m.conditionals[0].head.atoms.clear();
    assert!(matches!(build_conditional_set(&m, &v), Err(ModelError::Invariant(_))));

    let mut m = scenario::price_drop_conditional_set(&v);
    m.conditionals[0].body.as_mut().unwrap().atoms[0].kind = AtomKind::Head;
    assert!(matches!(build_conditional_set(&m, &v), Err(ModelError::Invariant(_))));

    // the same entry id cannot point to two different individuals
    let mut m = scenario::price_drop_conditional_set(&v);
    let body = m.conditionals[0].body.as_mut().unwrap();
    body.atoms[1].subject.id = body.atoms[0].subject.id.clone();
    assert!(matches!(build_conditional_set(&m, &v), Err(ModelError::Invariant(_))));
}

#[test]
fn sub_properties_are_materialized() {
    let v = v();
    let g = build_conditional_set(&scenario::price_drop_conditional_set(&v), &v).unwrap();
    for sub in [Property::hasConditionalHeadAtom, Property::hasConditionalBodyAtom] {
        for t in g.iter().filter(|t| t.predicate == v.prop(sub)) {
            assert!(g.contains_spo(&t.subject, &v.prop(Property::hasConditionalAtom), &t.object));
        }
    }
}

#[test]
fn contract_graph_shape() {
    let v = v();
    let g = build_contract(&scenario::brokerage_contract(), &v).unwrap();
    let c = ex("brk_contract");
    assert!(g.has_type(&c, &v.class(Class::SmartContract)));
    assert_eq!(g.object_iris(&c, &v.prop(Property::consistsOfSmartContractEntry)).count(), 3);
    assert!(g.contains_spo(&c, &v.prop(Property::hasConditionalSet), &Term::Iri(ex("101314-cond-set"))));
    let client = ex("brk_contract-entry-client");
    assert!(g.contains_spo(&client, &v.prop(Property::refersAsNewTo), &Term::Iri(ex("user-brk"))));
    assert!(g.has_type(&client, &v.class(Class::SmartContractEntryParticipant)));
    let agent = ex("brk_contract-entry-agent");
    assert!(g.contains_spo(&agent, &v.prop(Property::refersExactlyTo), &Term::Iri(ex("trading_agent"))));
    assert!(g.has_type(&ex("brk_contract-entry-brokerage"), &v.class(Class::SmartContractEntryValue)));
    assert!(g.contains_spo(&ex("brk_brokerage"), &ex("involves"), &Term::Iri(ex("investment"))));
}

#[test]
fn contract_round_trip_and_empty() {
    let v = v();
    let m = scenario::brokerage_contract();
    let g = build_contract(&m, &v).unwrap();
    assert_eq!(extract_contract(&g, &m.id, &v).unwrap(), m.normalized());

    let empty = ContractModel { id: ex("c"), kind: ContractKind::Contract, entries: vec![], conditional_sets: vec![], instances: vec![] };
    let g = build_contract(&empty, &v).unwrap();
    assert_eq!(g.len(), 1);
    assert_eq!(extract_contract(&g, &ex("c"), &v).unwrap(), empty);
}

#[test]
fn instance_round_trip() {
    let v = v();
    let m = scenario::brokerage_instance();
    let g = build_contract_instance(&m, &ex("brk_contract"), &v).unwrap();
    assert!(g.contains_spo(&ex("brk_contract"), &v.prop(Property::consistsOfSmartContractInstance), &Term::Iri(m.id.clone())));
    assert_eq!(extract_contract(&g, &m.id, &v).unwrap(), m.normalized());
    assert_eq!(parent_contract(&g, &m.id, &v), Some(ex("brk_contract")));
    let e = ex("brk_291-entry-client");
    let targets: Vec<_> = g.object_iris(&e, &v.prop(Property::refersExactlyTo)).cloned().collect();
    assert_eq!(targets, vec![ex("brk_contract-entry-client"), ex("user-HK12")]);

    // merged with the contract, both still extract
    let merged = g.merge(&build_contract(&scenario::brokerage_contract(), &v).unwrap());
    assert_eq!(extract_contract(&merged, &m.id, &v).unwrap(), m.normalized());
    let contract = extract_contract(&merged, &ex("brk_contract"), &v).unwrap();
    assert_eq!(contract.instances, vec![m.id.clone()]);
}

#[test]
fn empty_instance_is_node_plus_link() {
    let v = v();
    let m = ContractModel { id: ex("i"), kind: ContractKind::Instance, entries: vec![], conditional_sets: vec![], instances: vec![] };
    let g = build_contract_instance(&m, &ex("c"), &v).unwrap();
    let expected: Graph = vec![
        Triple::new(ex("i"), Iri::rdf_type(), v.class(Class::SmartContractInstance)),
        Triple::new(ex("c"), v.prop(Property::consistsOfSmartContractInstance), ex("i")),
    ]
    .into_iter()
    .collect();
    assert_eq!(g, expected);
}

#[test]
fn instance_errors() {
    let v = v();
    let mut m = scenario::brokerage_instance();
    m.entries[1].bound_to = None;
    assert_eq!(build_contract_instance(&m, &ex("brk_contract"), &v), Err(ModelError::UnboundEntry(ex("brk_291-entry-agent"))));
    assert!(matches!(build_contract_instance(&scenario::brokerage_contract(), &ex("x"), &v), Err(ModelError::Invariant(_))));
    assert!(matches!(build_contract(&scenario::brokerage_instance(), &v), Err(ModelError::Invariant(_))));
}

#[test]
fn extract_contract_errors() {
    let v = v();
    let g = build_contract(&scenario::brokerage_contract(), &v).unwrap();
    assert!(matches!(extract_contract(&g, &ex("brk_contract-entry-agent"), &v), Err(ModelError::Malformed { .. })));

    let mut both = g.clone();
    both.add(&ex("brk_contract-entry-agent"), &v.prop(Property::refersAsNewTo), ex("user-brk"));
    let err = extract_contract(&both, &ex("brk_contract"), &v).unwrap_err();
    assert!(err.to_string().contains("both refersExactlyTo and refersAsNewTo"), "{err}");

    let no_role = remove(&g, &ex("brk_contract-entry-agent"), &Iri::rdf_type());
    assert!(extract_contract(&no_role, &ex("brk_contract"), &v).is_err());
}

#[test]
fn builders_use_only_vocabulary_type_and_user_iris() {
    let v = v();
    let graphs = [
        build_conditional_set(&scenario::price_drop_conditional_set(&v), &v).unwrap(),
        build_contract(&scenario::brokerage_contract(), &v).unwrap(),
        build_contract_instance(&scenario::brokerage_instance(), &ex("brk_contract"), &v).unwrap(),
    ];
    for g in graphs {
        for t in g.iter() {
            let p = &t.predicate;
            let vocab_prop = Property::ALL.iter().any(|x| v.prop(*x) == *p);
            let user = p.as_str().starts_with(scenario::EX);
            assert!(vocab_prop || *p == Iri::rdf_type() || user, "{t}");
            if *p == Iri::rdf_type() {
                let o = t.object.as_iri().unwrap();
                assert!(Class::ALL.iter().any(|c| v.class(*c) == *o) || o.as_str().starts_with(scenario::EX), "{t}");
            }
        }
    }
}

#[test]
fn alternative_vocabulary_base() {
    let v = Vocabulary::new("http://example.org/other#").unwrap();
    let m = scenario::price_drop_conditional_set(&v);
    let g = build_conditional_set(&m, &v).unwrap();
    assert_eq!(extract_conditional_set(&g, &m.set_id, &v).unwrap(), m.normalized());
    assert!(extract_conditional_set(&g, &m.set_id, &Vocabulary::default()).is_err());
}

// Randomized round trip over small models.

fn arb_entry(prefix: &'static str) -> impl Strategy<Value = EntryRef> {
    prop_oneof![
        (0..4usize).prop_map(|i| EntryRef::Exact(ex(&format!("ind{i}")))),
        (0..3usize).prop_map(move |k| {
            // template features are a function of the id so reuse stays consistent
            let t = Template::new(ex(&format!("{prefix}tmpl{k}")));
            EntryRef::Template(if k > 0 { t.with_feature(ex("p"), ex(&format!("ind{k}"))) } else { t })
        }),
    ]
}

type AtomSeed = (EntryRef, EntryRef, Option<EntryRef>, usize, usize, usize, Option<i64>);

fn arb_atom(kind: AtomKind) -> impl Strategy<Value = AtomSeed> {
    let _ = kind;
    (
        arb_entry("s"),
        arb_entry("o"),
        proptest::option::of(arb_entry("x")),
        0..2usize,
        0..2usize,
        0..2usize,
        proptest::option::of(-5i64..200),
    )
}

fn arb_model() -> impl Strategy<Value = ConditionalModel> {
    let cond = (
        proptest::collection::vec(arb_atom(AtomKind::Head), 1..3),
        proptest::option::of(proptest::collection::vec(arb_atom(AtomKind::Body), 0..3)),
    );
    proptest::collection::vec(cond, 0..3).prop_map(|conds| {
        let conditionals = conds
            .into_iter()
            .enumerate()
            .map(|(ci, (head, body))| {
                let mk_atoms = |atoms: Vec<_>, kind: AtomKind, tag: &str| {
                    atoms
                        .into_iter()
                        .enumerate()
                        .map(|(ai, (s, op, obj, ni, no, na, lit)): (usize, AtomSeed)| {
                            let id = format!("c{ci}-{tag}{ai}");
                            let e = |role: &str, r: EntryRef| Entry { id: ex(&format!("{id}-{role}")), refers: r };
                            let mut a = AtomModel::new(ex(&id), kind, e("s", s), e("op", op));
                            a.object = obj.map(|o| e("obj", o));
                            a.inputs = (0..ni).map(|k| e(&format!("in{k}"), EntryRef::Exact(ex("ind0")))).collect();
                            a.outputs = (0..no).map(|k| e(&format!("out{k}"), EntryRef::Exact(ex("ind1")))).collect();
                            a.operator_args = (0..na).map(|k| e(&format!("arg{k}"), EntryRef::Exact(ex("quality")))).collect();
                            a.literal_value = lit.map(Literal::integer);
                            a
                        })
                        .collect()
                };
                Conditional {
                    id: ex(&format!("c{ci}")),
                    head: ConditionalPart { id: ex(&format!("c{ci}-head")), atoms: mk_atoms(head, AtomKind::Head, "h") },
                    body: body.map(|b| ConditionalPart { id: ex(&format!("c{ci}-body")), atoms: mk_atoms(b, AtomKind::Body, "b") }),
                }
            })
            .collect();
        ConditionalModel { set_id: ex("set"), conditionals }
    })
}

proptest! {
    #[test]
    fn conditional_build_extract_round_trip(m in arb_model()) {
        let v = v();
        let g = build_conditional_set(&m, &v).unwrap();
        prop_assert_eq!(extract_conditional_set(&g, &m.set_id, &v).unwrap(), m.normalized());
        for sub in [Property::hasConditionalHeadAtom, Property::hasConditionalBodyAtom] {
            for t in g.iter().filter(|t| t.predicate == v.prop(sub)) {
                prop_assert!(g.contains_spo(&t.subject, &v.prop(Property::hasConditionalAtom), &t.object));
            }
        }
    }

    #[test]
    fn contract_build_extract_round_trip(
        entries in proptest::collection::vec((any::<bool>(), arb_entry("c")), 0..5),
        sets in proptest::collection::btree_set(0..3usize, 0..3),
    ) {
        let v = v();
        let contract = ContractModel {
            id: ex("contract"),
            kind: ContractKind::Contract,
            entries: entries.iter().enumerate().map(|(i, (p, r))| ContractEntry {
                id: ex(&format!("entry{i}")),
                role: if *p { EntryRole::Participant } else { EntryRole::Value },
                refers: r.clone(),
                bound_to: None,
            }).collect(),
            conditional_sets: sets.iter().map(|s| ex(&format!("set{s}"))).collect(),
            instances: vec![],
        };
        let g = build_contract(&contract, &v).unwrap();
        prop_assert_eq!(extract_contract(&g, &contract.id, &v).unwrap(), contract.normalized());

        let instance = ContractModel {
            id: ex("inst"),
            kind: ContractKind::Instance,
            entries: contract.entries.iter().enumerate().map(|(i, e)| ContractEntry {
                id: ex(&format!("ientry{i}")),
                role: e.role,
                refers: EntryRef::Exact(ex(&format!("concrete{i}"))),
                bound_to: Some(e.id.clone()),
            }).collect(),
            conditional_sets: vec![],
            instances: vec![],
        };
        let gi = build_contract_instance(&instance, &contract.id, &v).unwrap();
        prop_assert_eq!(extract_contract(&gi, &instance.id, &v).unwrap(), instance.normalized());
    }
}
