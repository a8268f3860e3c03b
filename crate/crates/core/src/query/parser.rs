use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::lexer::{tokenize, Tok, Token};
use super::{Filter, PatternTerm, Query, QueryError, QueryForm, QueryPattern};
use crate::engine::BuiltinOperator;
use crate::term::{Iri, Literal, Term, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER};

const UNSUPPORTED: [&str; 20] = [
    "OPTIONAL", "UNION", "MINUS", "GRAPH", "BIND", "VALUES", "SERVICE", "ORDER", "LIMIT", "OFFSET", "GROUP", "HAVING",
    "DISTINCT", "REDUCED", "CONSTRUCT", "DESCRIBE", "FROM", "BASE", "NOT", "EXISTS",
];

/// Parses the supported SPARQL subset.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, prefixes: BTreeMap::new(), eof: end_position(text) };
    let q = p.query()?;
    validate(&q)?;
    Ok(q)
}

fn end_position(text: &str) -> (usize, usize) {
    let line = text.lines().count().max(1);
    let column = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: BTreeMap<String, String>,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn error(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = self.tokens.get(self.pos).map_or(self.eof, |t| (t.line, t.column));
        QueryError::Syntax { line, column, message: message.into() }
    }

    fn next(&mut self) -> Result<Tok, QueryError> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone()).ok_or_else(|| self.error("unexpected end of query"))?;
        self.pos += 1;
        Ok(t)
    }

    fn keyword(&self) -> Option<String> {
        match self.peek() {
            Some(Tok::Word(w)) => Some(w.to_ascii_uppercase()),
            _ => None,
        }
    }

    /// Fails with `Unsupported` when the next token is an out-of-subset keyword.
    fn reject_unsupported(&self) -> Result<(), QueryError> {
        match self.keyword() {
            Some(k) if UNSUPPORTED.contains(&k.as_str()) => Err(QueryError::Unsupported(k)),
            _ => Ok(()),
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.keyword().as_deref() == Some(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), QueryError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{p}'")))
        }
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        while self.eat_keyword("PREFIX") {
            let Tok::PName(prefix, local) = self.next()? else {
                self.pos -= 1;
                return Err(self.error("expected prefix name after PREFIX"));
            };
            if !local.is_empty() {
                self.pos -= 1;
                return Err(self.error("prefix declaration must end with ':'"));
            }
            let Tok::Iri(ns) = self.next()? else {
                self.pos -= 1;
                return Err(self.error("expected namespace IRI"));
            };
            self.prefixes.insert(prefix, ns);
        }
        self.reject_unsupported()?;
        let form = if self.eat_keyword("ASK") {
            QueryForm::Ask
        } else if self.eat_keyword("SELECT") {
            self.reject_unsupported()?;
            let mut vars = Vec::new();
            if !self.eat_punct("*") {
                while let Some(Tok::Var(v)) = self.peek() {
                    let v = v.clone();
                    if vars.contains(&v) {
                        return Err(self.error(format!("variable ?{v} projected twice")));
                    }
                    vars.push(v);
                    self.pos += 1;
                }
                if vars.is_empty() {
                    if matches!(self.peek(), Some(Tok::Punct("("))) {
                        return Err(QueryError::Unsupported("projection expressions".into()));
                    }
                    return Err(self.error("expected '*' or variables after SELECT"));
                }
            }
            QueryForm::Select(vars)
        } else {
            return Err(self.error("expected ASK or SELECT"));
        };
        self.reject_unsupported()?;
        self.eat_keyword("WHERE");
        let (patterns, filters) = self.group()?;
        if self.pos < self.tokens.len() {
            self.reject_unsupported()?;
            return Err(self.error("unexpected input after query"));
        }
        // `SELECT *` was recorded as an empty projection.
        let mut q = Query { form, patterns, filters, prefixes: core::mem::take(&mut self.prefixes) };
        if q.form == QueryForm::Select(Vec::new()) {
            q.form = QueryForm::Select(q.pattern_vars());
        }
        Ok(q)
    }

    fn group(&mut self) -> Result<(Vec<QueryPattern>, Vec<Filter>), QueryError> {
        self.expect_punct("{")?;
        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            self.reject_unsupported()?;
            if self.eat_keyword("FILTER") {
                self.filter(&mut filters)?;
                continue;
            }
            match self.peek() {
                Some(Tok::Punct("}")) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Punct("{")) => return Err(QueryError::Unsupported("nested group patterns".into())),
                Some(Tok::Punct(".")) => {
                    self.pos += 1;
                }
                None => return Err(self.error("unterminated group pattern")),
                _ => self.triples(&mut patterns)?,
            }
        }
        Ok((patterns, filters))
    }

    fn triples(&mut self, out: &mut Vec<QueryPattern>) -> Result<(), QueryError> {
        let subject = self.term(false)?;
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.term(true)?;
                if matches!(self.peek(), Some(Tok::Punct("/" | "|"))) {
                    return Err(QueryError::Unsupported("property paths".into()));
                }
                out.push(QueryPattern { subject: subject.clone(), predicate: predicate.clone(), object });
                if !self.eat_punct(",") {
                    break;
                }
            }
            if !self.eat_punct(";") {
                break;
            }
            // A trailing ';' before '.' or '}' is allowed.
            if matches!(self.peek(), Some(Tok::Punct("." | "}"))) {
                break;
            }
        }
        self.reject_unsupported()?;
        if self.keyword().as_deref() == Some("FILTER") {
            return Ok(());
        }
        match self.peek() {
            Some(Tok::Punct("." | "}")) => Ok(()),
            Some(Tok::Punct("|")) | Some(Tok::Punct("*")) => Err(QueryError::Unsupported("property paths".into())),
            _ => Err(self.error("expected '.', ';', ',' or '}'")),
        }
    }

    fn verb(&mut self) -> Result<PatternTerm, QueryError> {
        if matches!(self.peek(), Some(Tok::Word(w)) if w == "a") {
            self.pos += 1;
            return Ok(PatternTerm::Term(Term::Iri(Iri::rdf_type())));
        }
        match self.term(false)? {
            PatternTerm::Term(Term::Literal(_)) => {
                self.pos -= 1;
                Err(self.error("a literal cannot be a predicate"))
            }
            t => Ok(t),
        }
    }

    fn iri(&self, s: &str) -> Result<Iri, QueryError> {
        Iri::new(s).map_err(|e| self.error(e.to_string()))
    }

    fn resolve(&self, prefix: &str, local: &str) -> Result<Iri, QueryError> {
        if prefix == "_" {
            return Err(QueryError::Unsupported("blank nodes".into()));
        }
        let ns = self.prefixes.get(prefix).ok_or_else(|| self.error(format!("undeclared prefix '{prefix}:'")))?;
        self.iri(&format!("{ns}{local}"))
    }

    /// A variable, IRI or literal. Literals are only allowed when
    /// `literal_ok`.
    fn term(&mut self, literal_ok: bool) -> Result<PatternTerm, QueryError> {
        let start = self.pos;
        let t = match self.next()? {
            Tok::Var(v) => return Ok(PatternTerm::Var(v)),
            Tok::Iri(s) => Term::Iri(self.at(start, |p| p.iri(&s))?),
            Tok::PName(prefix, local) => Term::Iri(self.at(start, |p| p.resolve(&prefix, &local))?),
            Tok::Str(body) => {
                if self.eat_datatype() {
                    let dt = match self.next()? {
                        Tok::Iri(s) => self.iri(&s)?,
                        Tok::PName(prefix, local) => self.resolve(&prefix, &local)?,
                        _ => {
                            self.pos -= 1;
                            return Err(self.error("expected datatype IRI"));
                        }
                    };
                    Term::Literal(Literal::new(&body, dt).map_err(|e| self.error(e.to_string()))?)
                } else {
                    Term::Literal(Literal::string(&body))
                }
            }
            Tok::Number(n) => {
                let n = n.strip_prefix('+').unwrap_or(&n).to_string();
                let dt = if n.contains('.') { XSD_DECIMAL } else { XSD_INTEGER };
                Term::Literal(Literal::new(&n, self.iri(dt)?).map_err(|e| self.error(e.to_string()))?)
            }
            Tok::Word(w) if w == "true" || w == "false" => Term::Literal(Literal::new(&w, self.iri(XSD_BOOLEAN)?).expect("boolean")),
            _ => {
                self.pos = start;
                self.reject_unsupported()?;
                return Err(self.error("expected a variable, IRI or literal"));
            }
        };
        if matches!(t, Term::Literal(_)) && !literal_ok {
            self.pos = start;
            return Err(self.error("a literal is not allowed here"));
        }
        Ok(PatternTerm::Term(t))
    }

    fn at<T>(&mut self, pos: usize, f: impl FnOnce(&Self) -> Result<T, QueryError>) -> Result<T, QueryError> {
        let saved = self.pos;
        self.pos = pos;
        let r = f(self);
        if r.is_ok() {
            self.pos = saved;
        }
        r
    }

    fn eat_datatype(&mut self) -> bool {
        if matches!(self.peek(), Some(Tok::DataType)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn filter(&mut self, out: &mut Vec<Filter>) -> Result<(), QueryError> {
        if !matches!(self.peek(), Some(Tok::Punct("("))) {
            return Err(QueryError::Unsupported("FILTER functions".into()));
        }
        self.pos += 1;
        self.conjunction(out)?;
        self.expect_punct(")")
    }

    fn conjunction(&mut self, out: &mut Vec<Filter>) -> Result<(), QueryError> {
        loop {
            if self.eat_punct("(") {
                self.conjunction(out)?;
                self.expect_punct(")")?;
            } else {
                out.push(self.comparison()?);
            }
            match self.peek() {
                Some(Tok::Punct("&&")) => self.pos += 1,
                Some(Tok::Punct("||")) => return Err(QueryError::Unsupported("'||' in FILTER".into())),
                _ => return Ok(()),
            }
        }
    }

    fn comparison(&mut self) -> Result<Filter, QueryError> {
        if matches!(self.peek(), Some(Tok::Punct("!"))) {
            return Err(QueryError::Unsupported("'!' in FILTER".into()));
        }
        if matches!(self.peek(), Some(Tok::Word(_))) && matches!(self.tokens.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Punct("("))) {
            return Err(QueryError::Unsupported("FILTER functions".into()));
        }
        let start = self.pos;
        let lhs = self.term(true)?;
        let op = match self.next()? {
            Tok::Punct(p) if BuiltinOperator::from_symbol(p).is_some() => BuiltinOperator::from_symbol(p).unwrap(),
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a comparison operator"));
            }
        };
        let rhs = self.term(true)?;
        match (lhs, rhs) {
            (PatternTerm::Var(var), rhs) => Ok(Filter { var, op, rhs }),
            (lhs @ PatternTerm::Term(_), PatternTerm::Var(var)) => Ok(Filter { var, op: flip(op), rhs: lhs }),
            _ => {
                self.pos = start;
                Err(self.error("a filter comparison must mention a variable"))
            }
        }
    }
}

/// `c op ?v` as `?v op' c`.
fn flip(op: BuiltinOperator) -> BuiltinOperator {
    use BuiltinOperator::*;
    match op {
        Less => Greater,
        LessEqual => GreaterEqual,
        Greater => Less,
        GreaterEqual => LessEqual,
        Equal | NotEqual => op,
    }
}

fn validate(q: &Query) -> Result<(), QueryError> {
    let vars = q.pattern_vars();
    let unknown = |v: &str| QueryError::Syntax { line: 1, column: 1, message: format!("variable ?{v} does not occur in any pattern") };
    for f in &q.filters {
        if !vars.contains(&f.var) {
            return Err(unknown(&f.var));
        }
        if let PatternTerm::Var(r) = &f.rhs {
            if !vars.contains(r) {
                return Err(unknown(r));
            }
        }
    }
    if let QueryForm::Select(sel) = &q.form {
        if let Some(v) = sel.iter().find(|v| !vars.contains(v)) {
            return Err(unknown(v));
        }
    }
    Ok(())
}
