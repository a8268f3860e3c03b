//! Brute-force reference for the query engine: every assignment of graph
//! terms to the query's variables is tried, independently of the engine's
//! join and filter code.

use std::collections::BTreeSet;

use oasis_core::engine::BuiltinOperator;
use oasis_core::query::{evaluate, parse_query, Filter, PatternTerm, Query, QueryForm, QueryPattern, ResultSet};
use oasis_core::term::{XSD_DECIMAL, XSD_INTEGER};
use oasis_core::{Graph, Iri, Literal, Term, Triple};
use proptest::prelude::*;

pub const VARS: [&str; 3] = ["x", "y", "z"];

fn iri_pool() -> Vec<Iri> {
    ["a", "b", "c", "p", "q"].iter().map(|l| Iri::new(format!("http://example.org/o#{l}")).unwrap()).collect()
}

fn literal_pool() -> Vec<Term> {
    let int = Iri::new(XSD_INTEGER).unwrap();
    let dec = Iri::new(XSD_DECIMAL).unwrap();
    vec![
        Literal::new("1", int.clone()).unwrap().into(),
        Literal::new("2", int.clone()).unwrap().into(),
        Literal::new("3", int).unwrap().into(),
        Literal::new("2.0", dec).unwrap().into(),
        Literal::string("x").into(),
    ]
}

fn term_pool() -> Vec<Term> {
    iri_pool().into_iter().map(Term::Iri).chain(literal_pool()).collect()
}

pub fn arb_graph() -> impl Strategy<Value = Graph> {
    let iris = iri_pool();
    let terms = term_pool();
    // Subjects from a, b, c; predicates from p, q.
    let triple = (0..3usize, 3..5usize, 0..terms.len())
        .prop_map(move |(s, p, o)| Triple::new(iris[s].clone(), iris[p].clone(), terms[o].clone()));
    prop::collection::vec(triple, 0..=50usize).prop_map(|ts| ts.into_iter().collect())
}

fn arb_position(pool: Vec<Term>) -> impl Strategy<Value = PatternTerm> {
    prop_oneof![
        3 => (0..VARS.len()).prop_map(|i| PatternTerm::Var(VARS[i].to_string())),
        2 => prop::sample::select(pool).prop_map(PatternTerm::Term),
    ]
}

fn arb_pattern() -> impl Strategy<Value = QueryPattern> {
    let iris: Vec<Term> = iri_pool().into_iter().map(Term::Iri).collect();
    (arb_position(iris[..3].to_vec()), arb_position(iris[3..].to_vec()), arb_position(term_pool()))
        .prop_map(|(subject, predicate, object)| QueryPattern { subject, predicate, object })
}

pub fn arb_query() -> impl Strategy<Value = Query> {
    let raw_filter = (any::<prop::sample::Index>(), prop_oneof![
        Just(BuiltinOperator::Equal),
        Just(BuiltinOperator::NotEqual),
        prop::sample::select(BuiltinOperator::ALL.to_vec()),
    ], prop_oneof![
        any::<prop::sample::Index>().prop_map(Ok),
        prop::sample::select(literal_pool()).prop_map(Err),
    ]);
    (
        prop::collection::vec(arb_pattern(), 1..=3),
        prop::collection::vec(raw_filter, 0..=2),
        any::<bool>(),
        any::<prop::sample::Index>(),
    )
        .prop_map(|(patterns, raw_filters, ask, proj)| {
            let mut q = Query { form: QueryForm::Ask, patterns, filters: vec![], prefixes: Default::default() };
            let vars = q.pattern_vars();
            if !vars.is_empty() {
                q.filters = raw_filters
                    .into_iter()
                    .map(|(v, op, rhs)| Filter {
                        var: v.get(&vars).clone(),
                        op,
                        rhs: match rhs {
                            Ok(i) => PatternTerm::Var(i.get(&vars).clone()),
                            Err(t) => PatternTerm::Term(t),
                        },
                    })
                    .collect();
            }
            if !ask {
                // A non-empty prefix of the pattern variables, or none.
                let n = if vars.is_empty() { 0 } else { proj.index(vars.len()) + 1 };
                q.form = QueryForm::Select(vars[..n].to_vec());
            }
            q
        })
}

fn render_term(t: &PatternTerm) -> String {
    match t {
        PatternTerm::Var(v) => format!("?{v}"),
        PatternTerm::Term(t) => t.to_ntriples(),
    }
}

/// SPARQL text for `q`, written without prefixes.
pub fn render(q: &Query) -> String {
    let mut s = match &q.form {
        QueryForm::Ask => "ASK".to_string(),
        QueryForm::Select(vars) if vars.is_empty() => "SELECT *".to_string(),
        QueryForm::Select(vars) => format!("SELECT {}", vars.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join(" ")),
    };
    s.push_str(" WHERE {\n");
    for p in &q.patterns {
        s.push_str(&format!("  {} {} {} .\n", render_term(&p.subject), render_term(&p.predicate), render_term(&p.object)));
    }
    if !q.filters.is_empty() {
        let parts: Vec<String> =
            q.filters.iter().map(|f| format!("?{} {} {}", f.var, f.op.symbol(), render_term(&f.rhs))).collect();
        s.push_str(&format!("  FILTER({})\n", parts.join(" && ")));
    }
    s.push('}');
    s
}

/// Tenths of a numeric literal from the pool.
fn tenths(t: &Term) -> Option<i64> {
    let l = t.as_literal()?;
    if l.datatype().as_str() != XSD_INTEGER && l.datatype().as_str() != XSD_DECIMAL {
        return None;
    }
    let (int, frac) = l.lexical().split_once('.').unwrap_or((l.lexical(), "0"));
    Some(int.parse::<i64>().ok()? * 10 + frac.parse::<i64>().ok()?)
}

fn oracle_filter(f: &Filter, lhs: &Term, rhs: &Term) -> Result<bool, ()> {
    match (tenths(lhs), tenths(rhs)) {
        (Some(a), Some(b)) => Ok(match f.op {
            BuiltinOperator::Less => a < b,
            BuiltinOperator::LessEqual => a <= b,
            BuiltinOperator::Greater => a > b,
            BuiltinOperator::GreaterEqual => a >= b,
            BuiltinOperator::Equal => a == b,
            BuiltinOperator::NotEqual => a != b,
        }),
        _ => match f.op {
            BuiltinOperator::Equal => Ok(lhs == rhs),
            BuiltinOperator::NotEqual => Ok(lhs != rhs),
            _ => Err(()),
        },
    }
}

/// `Ok(rows)` sorted by rendering (ASK yields one empty row per solution),
/// or `Err(())` for a type error.
pub fn oracle(q: &Query, g: &Graph) -> Result<Vec<Vec<Term>>, ()> {
    let vars = q.pattern_vars();
    let mut domain: BTreeSet<Term> = BTreeSet::new();
    for t in g.iter() {
        domain.insert(Term::Iri(t.subject.clone()));
        domain.insert(Term::Iri(t.predicate.clone()));
        domain.insert(t.object.clone());
    }
    let domain: Vec<Term> = domain.into_iter().collect();
    let projection = match &q.form {
        QueryForm::Ask => vec![],
        QueryForm::Select(v) if v.is_empty() => vars.clone(),
        QueryForm::Select(v) => v.clone(),
    };
    let mut rows = Vec::new();
    let mut type_error = false;
    let total = domain.len().pow(vars.len() as u32);
    for mut n in 0..total {
        let assignment: Vec<&Term> = vars
            .iter()
            .map(|_| {
                let t = &domain[n % domain.len()];
                n /= domain.len();
                t
            })
            .collect();
        let value = |p: &PatternTerm| match p {
            PatternTerm::Var(v) => assignment[vars.iter().position(|x| x == v).unwrap()].clone(),
            PatternTerm::Term(t) => t.clone(),
        };
        let holds = q.patterns.iter().all(|p| match (value(&p.subject), value(&p.predicate)) {
            (Term::Iri(s), Term::Iri(pr)) => g.contains(&Triple::new(s, pr, value(&p.object))),
            _ => false,
        });
        if !holds {
            continue;
        }
        let mut pass = true;
        for f in &q.filters {
            match oracle_filter(f, &value(&PatternTerm::Var(f.var.clone())), &value(&f.rhs)) {
                Ok(b) => pass &= b,
                Err(()) => type_error = true,
            }
        }
        if pass {
            rows.push(projection.iter().map(|v| value(&PatternTerm::Var(v.clone()))).collect::<Vec<_>>());
        }
    }
    if type_error {
        return Err(());
    }
    rows.sort_by_key(|r: &Vec<Term>| r.iter().map(Term::to_ntriples).collect::<Vec<_>>());
    Ok(rows)
}

/// Checks one randomized case: the rendered text parses back to `q`, and
/// `evaluate` agrees with [`oracle`].
pub fn check_case(q: &Query, g: &Graph) -> Result<(), String> {
    let text = render(q);
    let parsed = parse_query(&text).map_err(|e| format!("{text}: {e}"))?;
    let mut expected_q = q.clone();
    if expected_q.form == QueryForm::Select(vec![]) {
        expected_q.form = QueryForm::Select(q.pattern_vars());
    }
    if parsed != expected_q {
        return Err(format!("re-parse of {text} differs: {parsed:?}"));
    }
    let got = evaluate(q, g);
    let want = oracle(q, g);
    match (got, want) {
        (Err(_), Err(())) => Ok(()),
        (Ok(ResultSet::Boolean(b)), Ok(rows)) if matches!(q.form, QueryForm::Ask) => {
            if b == !rows.is_empty() {
                Ok(())
            } else {
                Err(format!("{text}: ASK gave {b}, oracle found {} solutions", rows.len()))
            }
        }
        (Ok(ResultSet::Solutions { rows, .. }), Ok(want)) => {
            if rows == want {
                Ok(())
            } else {
                Err(format!("{text}: rows {rows:?} != oracle {want:?}"))
            }
        }
        (got, want) => Err(format!("{text}: engine {got:?} vs oracle {want:?}")),
    }
}
