//! JSON renderings shared by the protocol reports and the CLI.

use oasis_core::query::ResultSet;
use oasis_core::term::XSD_STRING;
use oasis_core::Term;
use serde_json::{json, Map, Value};

/// A term in the SPARQL JSON results layout.
pub fn term_json(t: &Term) -> Value {
    match t {
        Term::Iri(i) => json!({ "type": "uri", "value": i.as_str() }),
        Term::Literal(l) if l.datatype().as_str() == XSD_STRING => json!({ "type": "literal", "value": l.lexical() }),
        Term::Literal(l) => json!({ "type": "literal", "value": l.lexical(), "datatype": l.datatype().as_str() }),
    }
}

/// `{"head": ..., "boolean": b}` for ASK, `{"head": {"vars": [...]},
/// "results": {"bindings": [...]}}` for SELECT.
pub fn result_set_json(r: &ResultSet) -> Value {
    match r {
        ResultSet::Boolean(b) => json!({ "head": {}, "boolean": b }),
        ResultSet::Solutions { vars, rows } => {
            let bindings: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let m: Map<String, Value> = vars.iter().cloned().zip(row.iter().map(term_json)).collect();
                    Value::Object(m)
                })
                .collect();
            json!({ "head": { "vars": vars }, "results": { "bindings": bindings } })
        }
    }
}
