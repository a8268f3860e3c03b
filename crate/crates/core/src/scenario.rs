//! The trading-agent brokerage example: a conditional that has a trading
//! agent sell a stock once its price is at most 100, and a brokerage contract
//! between the agent and a client together with one of its instances.
//!
//! Used as a test corpus and by the shipped Turtle fixtures.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::engine::BuiltinOperator;
use crate::graph::{Graph, Triple};
use crate::model::{
    AtomKind, AtomModel, Conditional, ConditionalModel, ConditionalPart, ContractEntry, ContractKind,
    ContractModel, Entry, EntryRef, EntryRole, Template,
};
use crate::term::{Iri, Literal};
use crate::vocab::{Property, Vocabulary};

pub const EX: &str = "http://example.org/trading#";

pub fn ex(local: &str) -> Iri {
    Iri::new(format!("{EX}{local}")).expect("example IRIs are valid")
}

const COND: &str = "101314-cond-1";

fn head_atom() -> AtomModel {
    let a = format!("{COND}-head-atom");
    let mut atom = AtomModel::new(
        ex(&a),
        AtomKind::Head,
        Entry::exact(ex(&format!("{a}-subject")), ex("trading-agent")),
        Entry::exact(ex(&format!("{a}-operator")), ex("sell")),
    )
    .with_object(Entry::exact(ex(&format!("{a}-object")), ex("01314-stock")));
    atom.inputs.push(Entry::exact(ex(&format!("{a}-parameter")), ex("101314-price")));
    atom
}

fn body_atom(n: usize, subject: &str, operator: Iri, object: Option<&str>) -> AtomModel {
    let a = format!("{COND}-body-atom-{n}");
    let atom = AtomModel::new(
        ex(&a),
        AtomKind::Body,
        Entry::exact(ex(&format!("{a}-subject")), ex(subject)),
        Entry::exact(ex(&format!("{a}-operator")), operator),
    );
    match object {
        Some(o) => atom.with_object(Entry::exact(ex(&format!("{a}-object")), ex(o))),
        None => atom,
    }
}

/// One conditional whose head has the trading agent sell stock 01314 at price
/// 101314; the body node exists but has no atoms.
pub fn sell_conditional_set() -> ConditionalModel {
    ConditionalModel {
        set_id: ex("101314-cond-set"),
        conditionals: vec![Conditional {
            id: ex(COND),
            head: ConditionalPart { id: ex(&format!("{COND}-head")), atoms: vec![head_atom()] },
            body: Some(ConditionalPart { id: ex(&format!("{COND}-body")), atoms: Vec::new() }),
        }],
    }
}

/// The same conditional extended with three body atoms: the stock has the
/// price, the price has a value, and that value is at most 100.
pub fn price_drop_conditional_set(v: &Vocabulary) -> ConditionalModel {
    let mut m = sell_conditional_set();
    let body = m.conditionals[0].body.as_mut().expect("body node present");
    body.atoms = vec![
        body_atom(1, "01314-stock", ex("have"), Some("101314-price")),
        body_atom(2, "101314-price", ex("have"), Some("101314-value")),
        body_atom(3, "101314-value", BuiltinOperator::LessEqual.iri(v), None).with_literal(Literal::integer(100)),
    ];
    m
}

/// The brokerage contract with its three entries and the attached
/// conditional set.
pub fn brokerage_contract() -> ContractModel {
    let client = Template::new(ex("user-brk")).with_feature(Iri::rdf_type(), ex("Client"));
    let brokerage = Template::new(ex("brk_brokerage")).with_feature(ex("involves"), ex("investment"));
    ContractModel {
        id: ex("brk_contract"),
        kind: ContractKind::Contract,
        entries: vec![
            ContractEntry {
                id: ex("brk_contract-entry-client"),
                role: EntryRole::Participant,
                refers: EntryRef::Template(client),
                bound_to: None,
            },
            ContractEntry {
                id: ex("brk_contract-entry-agent"),
                role: EntryRole::Participant,
                refers: EntryRef::Exact(ex("trading_agent")),
                bound_to: None,
            },
            ContractEntry {
                id: ex("brk_contract-entry-brokerage"),
                role: EntryRole::Value,
                refers: EntryRef::Template(brokerage),
                bound_to: None,
            },
        ],
        conditional_sets: vec![ex("101314-cond-set")],
        instances: Vec::new(),
    }
}

/// An instance of the brokerage contract between user-HK12 and the trading
/// agent for brokerage 291.
pub fn brokerage_instance() -> ContractModel {
    let entry = |suffix: &str, role, target: &str| ContractEntry {
        id: ex(&format!("brk_291-entry-{suffix}")),
        role,
        refers: EntryRef::Exact(ex(target)),
        bound_to: Some(ex(&format!("brk_contract-entry-{suffix}"))),
    };
    ContractModel {
        id: ex("brk_291_instance"),
        kind: ContractKind::Instance,
        entries: vec![
            entry("client", EntryRole::Participant, "user-HK12"),
            entry("agent", EntryRole::Participant, "trading_agent"),
            entry("brokerage", EntryRole::Value, "brk_291_brokerage"),
        ],
        conditional_sets: Vec::new(),
        instances: Vec::new(),
    }
}

/// World state for the price-drop conditional: the stock's price has a value
/// of `price`, and optionally the agent has sold the stock.
pub fn market_state(v: &Vocabulary, price: i64, sold: bool) -> Graph {
    let mut g = Graph::new();
    g.insert(Triple::new(ex("01314-stock"), ex("have"), ex("101314-price")));
    g.insert(Triple::new(ex("101314-price"), ex("have"), ex("101314-value")));
    g.insert(Triple::new(ex("101314-value"), v.prop(Property::value), Literal::integer(price)));
    if sold {
        g.insert(Triple::new(ex("trading-agent"), ex("sell"), ex("01314-stock")));
    }
    g.set_prefix("ex", Iri::new(EX).unwrap());
    g.set_prefix("oasis", Iri::new(v.base()).unwrap());
    g
}

/// Validation query for the brokerage contract: has the stock been sold, and
/// was its price at most 100?
pub fn validation_query(v: &Vocabulary) -> alloc::string::String {
    format!(
        "PREFIX ex: <{EX}>\n\
         PREFIX oasis: <{}>\n\
         ASK WHERE {{\n  \
           ex:trading-agent ex:sell ex:01314-stock .\n  \
           ex:101314-price ex:have ?val .\n  \
           ?val oasis:value ?v .\n  \
           FILTER(?v <= 100)\n\
         }}\n",
        v.base()
    )
}
