use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Filter, PatternTerm, Query, QueryError, QueryForm, QueryPattern, ResultSet, Row};
use crate::engine::BuiltinOperator;
use crate::graph::{Graph, TriplePattern};
use crate::term::Term;

type Solution = BTreeMap<String, Term>;

/// Evaluates `q` over `g`.
pub fn evaluate(q: &Query, g: &Graph) -> Result<ResultSet, QueryError> {
    let mut solutions: Vec<Solution> = vec![Solution::new()];
    for p in &q.patterns {
        let mut next = Vec::new();
        for sol in &solutions {
            extend(g, p, sol, &mut next);
        }
        solutions = next;
        if solutions.is_empty() {
            break;
        }
    }
    let mut kept = Vec::with_capacity(solutions.len());
    for sol in solutions {
        // Every filter is evaluated so that a type error surfaces regardless
        // of filter order.
        let mut pass = true;
        for f in &q.filters {
            pass &= check(f, &sol)?;
        }
        if pass {
            kept.push(sol);
        }
    }
    Ok(match &q.form {
        QueryForm::Ask => ResultSet::Boolean(!kept.is_empty()),
        QueryForm::Select(vars) => {
            let mut rows: Vec<(Vec<String>, Row)> = kept
                .iter()
                .map(|sol| {
                    let row: Row = vars.iter().map(|v| sol[v].clone()).collect();
                    (row.iter().map(Term::to_ntriples).collect(), row)
                })
                .collect();
            rows.sort_by(|a, b| a.0.cmp(&b.0));
            ResultSet::Solutions { vars: vars.clone(), rows: rows.into_iter().map(|(_, r)| r).collect() }
        }
    })
}

fn substitute<'a>(t: &'a PatternTerm, sol: &'a Solution) -> Option<&'a Term> {
    match t {
        PatternTerm::Var(v) => sol.get(v),
        PatternTerm::Term(t) => Some(t),
    }
}

fn extend(g: &Graph, p: &QueryPattern, sol: &Solution, out: &mut Vec<Solution>) {
    let (s, pr, o) = (substitute(&p.subject, sol), substitute(&p.predicate, sol), substitute(&p.object, sol));
    // A literal bound in subject or predicate position matches nothing.
    let subject = match s {
        Some(Term::Iri(i)) => Some(i.clone()),
        Some(Term::Literal(_)) => return,
        None => None,
    };
    let predicate = match pr {
        Some(Term::Iri(i)) => Some(i.clone()),
        Some(Term::Literal(_)) => return,
        None => None,
    };
    let pattern = TriplePattern::new(subject, predicate, o.cloned());
    'triples: for t in g.matching(&pattern) {
        let mut next = sol.clone();
        let values = [Term::Iri(t.subject.clone()), Term::Iri(t.predicate.clone()), t.object.clone()];
        for (pos, value) in p.positions().into_iter().zip(values) {
            if let PatternTerm::Var(v) = pos {
                match next.get(v) {
                    Some(bound) if *bound != value => continue 'triples,
                    Some(_) => {}
                    None => {
                        next.insert(v.clone(), value);
                    }
                }
            }
        }
        out.push(next);
    }
}

/// Compares two terms: numerically when both are numeric literals, by term
/// identity for `=` / `!=` otherwise.
pub(crate) fn compare_terms(op: BuiltinOperator, lhs: &Term, rhs: &Term) -> Result<bool, QueryError> {
    let num = |t: &Term| t.as_literal().and_then(|l| l.numeric());
    match (num(lhs), num(rhs)) {
        (Some(a), Some(b)) => Ok(op.compare(&a, &b)),
        _ => match op {
            BuiltinOperator::Equal => Ok(lhs == rhs),
            BuiltinOperator::NotEqual => Ok(lhs != rhs),
            _ => Err(QueryError::Type(format!(
                "cannot compare {} {} {} numerically",
                lhs.to_ntriples(),
                op.symbol(),
                rhs.to_ntriples()
            ))),
        },
    }
}

fn check(f: &Filter, sol: &Solution) -> Result<bool, QueryError> {
    let lhs = &sol[&f.var];
    let rhs = match &f.rhs {
        PatternTerm::Var(v) => &sol[v],
        PatternTerm::Term(t) => t,
    };
    compare_terms(f.op, lhs, rhs)
}
