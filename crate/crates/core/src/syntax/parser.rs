use alloc::format;
use alloc::string::{String, ToString};

use super::{Format, ParseError};
use crate::graph::{Graph, Triple};
use crate::term::{Iri, Literal, Term, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER, XSD_STRING};

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    format: Format,
    graph: Graph,
}

type PResult<T> = Result<T, ParseError>;

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

fn is_local_char(c: char) -> bool {
    is_name_char(c) || c == ':' || c == '%'
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, format: Format) -> Self {
        Self { src, pos: 0, line: 1, col: 1, format, graph: Graph::new() }
    }

    fn turtle(&self) -> bool {
        self.format == Format::Turtle
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax { line: self.line, column: self.col, message: message.into() })
    }

    fn blank<T>(&self) -> PResult<T> {
        Err(ParseError::BlankNode { line: self.line, column: self.col })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.bump();
                Ok(())
            }
            Some(x) => self.err(format!("expected '{c}', found '{x}'")),
            None => self.err(format!("expected '{c}', found end of input")),
        }
    }

    fn starts_with_keyword(&self, kw: &str) -> bool {
        let rest = self.rest();
        rest.len() >= kw.len()
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && rest[kw.len()..].chars().next().is_none_or(|c| !is_name_char(c) && c != ':')
    }

    /// Case-sensitive keyword check.
    fn is_word(&self, kw: &str) -> bool {
        self.rest().starts_with(kw) && self.starts_with_keyword(kw)
    }

    pub(crate) fn parse_document(mut self) -> PResult<Graph> {
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else { break };
            if self.turtle() && c == '@' {
                self.parse_at_directive()?;
            } else if self.turtle() && self.starts_with_keyword("PREFIX") {
                self.bump_n(6);
                self.parse_prefix_body()?;
            } else if self.turtle() && self.starts_with_keyword("BASE") {
                return self.err("BASE is not supported; use absolute IRIs");
            } else {
                self.parse_triples()?;
                self.expect('.')?;
            }
        }
        Ok(self.graph)
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn parse_at_directive(&mut self) -> PResult<()> {
        if self.rest().starts_with("@prefix") {
            self.bump_n(7);
            self.parse_prefix_body()?;
            self.expect('.')
        } else if self.rest().starts_with("@base") {
            self.err("@base is not supported; use absolute IRIs")
        } else {
            self.err("unknown directive")
        }
    }

    fn parse_prefix_body(&mut self) -> PResult<()> {
        self.skip_ws();
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !is_name_char(c) {
                return self.err(format!("invalid character '{c}' in prefix name"));
            }
            prefix.push(c);
            self.bump();
        }
        if prefix.ends_with('.') {
            return self.err("prefix name may not end with '.'");
        }
        self.expect(':')?;
        self.skip_ws();
        let ns = self.parse_iriref()?;
        self.graph.set_prefix(prefix, ns);
        Ok(())
    }

    fn parse_triples(&mut self) -> PResult<()> {
        self.skip_ws();
        let subject = self.parse_subject()?;
        self.parse_predicate_object_list(&subject)
    }

    fn parse_subject(&mut self) -> PResult<Iri> {
        match self.peek() {
            Some('_') if self.peek_nth(1) == Some(':') => self.blank(),
            Some('[') => self.blank(),
            Some('(') => self.err("collections are not supported"),
            Some('<') => self.parse_iriref(),
            Some(_) if self.turtle() => self.parse_prefixed_name(),
            Some(c) => self.err(format!("expected subject IRI, found '{c}'")),
            None => self.err("expected subject, found end of input"),
        }
    }

    fn parse_predicate_object_list(&mut self, subject: &Iri) -> PResult<()> {
        loop {
            self.skip_ws();
            let predicate = self.parse_verb()?;
            loop {
                self.skip_ws();
                let object = self.parse_object()?;
                self.graph.insert(Triple::new(subject.clone(), predicate.clone(), object));
                self.skip_ws();
                if self.turtle() && self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            if !(self.turtle() && self.peek() == Some(';')) {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            // a trailing ';' before '.' is allowed
            if self.peek() == Some('.') {
                return Ok(());
            }
        }
    }

    fn parse_verb(&mut self) -> PResult<Iri> {
        match self.peek() {
            Some('<') => self.parse_iriref(),
            Some('a') if self.turtle() && self.is_word("a") => {
                self.bump();
                Ok(Iri::rdf_type())
            }
            Some('_') | Some('[') => self.blank(),
            Some(_) if self.turtle() => self.parse_prefixed_name(),
            Some(c) => self.err(format!("expected predicate IRI, found '{c}'")),
            None => self.err("expected predicate, found end of input"),
        }
    }

    fn parse_object(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.parse_iriref()?)),
            Some('_') if self.peek_nth(1) == Some(':') => self.blank(),
            Some('[') => self.blank(),
            Some('(') => self.err("collections are not supported"),
            Some('"') => self.parse_literal(),
            Some('\'') if self.turtle() => self.parse_literal(),
            Some(c) if self.turtle() && (c.is_ascii_digit() || c == '+' || c == '-' || c == '.') => {
                self.parse_numeric()
            }
            Some(_) if self.turtle() && (self.is_word("true") || self.is_word("false")) => {
                let word = if self.is_word("true") { "true" } else { "false" };
                self.bump_n(word.len());
                Ok(Term::Literal(Literal::new(word, Iri::new(XSD_BOOLEAN).unwrap()).unwrap()))
            }
            Some(_) if self.turtle() => Ok(Term::Iri(self.parse_prefixed_name()?)),
            Some(c) => self.err(format!("expected object, found '{c}'")),
            None => self.err("expected object, found end of input"),
        }
    }

    fn parse_iriref(&mut self) -> PResult<Iri> {
        let (line, col) = (self.line, self.col);
        if self.peek() != Some('<') {
            return self.err("expected '<'");
        }
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return self.err("unterminated IRI"),
                Some('>') => break,
                Some('\\') => value.push(self.parse_unicode_escape()?),
                Some(c) => value.push(c),
            }
        }
        Iri::new(&value).map_err(|e| ParseError::Syntax { line, column: col, message: e.to_string() })
    }

    fn parse_unicode_escape(&mut self) -> PResult<char> {
        let len = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.err("invalid escape sequence"),
        };
        let mut code = 0u32;
        for _ in 0..len {
            let Some(d) = self.bump().and_then(|c| c.to_digit(16)) else {
                return self.err("invalid hex digit in escape");
            };
            code = code * 16 + d;
        }
        match char::from_u32(code) {
            Some(c) => Ok(c),
            None => self.err("escape is not a Unicode scalar value"),
        }
    }

    fn parse_prefixed_name(&mut self) -> PResult<Iri> {
        let (line, column) = (self.line, self.col);
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !is_name_char(c) || (prefix.is_empty() && !is_name_start(c)) {
                return self.err(format!("unexpected character '{c}'"));
            }
            prefix.push(c);
            self.bump();
        }
        if self.peek() != Some(':') {
            return self.err("expected prefixed name");
        }
        self.bump();
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => return self.err("invalid local name escape"),
                }
            } else if is_local_char(c) {
                local.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // trailing dots terminate the statement rather than belong to the name
        while local.ends_with('.') {
            local.pop();
            self.pos -= 1;
            self.col -= 1;
        }
        if local.starts_with('-') || local.starts_with('.') {
            return Err(ParseError::Syntax { line, column, message: format!("invalid local name '{local}'") });
        }
        let Some(ns) = self.graph.prefixes().get(&prefix) else {
            return Err(ParseError::Syntax { line, column, message: format!("undeclared prefix '{prefix}:'") });
        };
        let full = format!("{}{}", ns.as_str(), local);
        Iri::new(full).map_err(|e| ParseError::Syntax { line, column, message: e.to_string() })
    }

    fn parse_string_body(&mut self) -> PResult<String> {
        let quote = self.bump().unwrap();
        let long = self.turtle() && self.peek() == Some(quote) && self.peek_nth(1) == Some(quote);
        if long {
            self.bump_n(2);
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else { return self.err("unterminated string literal") };
            match c {
                c if c == quote => {
                    if !long {
                        return Ok(out);
                    }
                    if self.peek() == Some(quote) && self.peek_nth(1) == Some(quote) {
                        self.bump_n(2);
                        return Ok(out);
                    }
                    out.push(c);
                }
                '\\' => {
                    let e = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') | Some('U') => {
                            out.push(self.parse_unicode_escape()?);
                            continue;
                        }
                        _ => return self.err("invalid string escape"),
                    };
                    self.bump();
                    out.push(e);
                }
                '\n' | '\r' if !long => return self.err("newline in string literal"),
                c => out.push(c),
            }
        }
    }

    fn parse_literal(&mut self) -> PResult<Term> {
        let (line, column) = (self.line, self.col);
        let lexical = self.parse_string_body()?;
        let datatype = if self.rest().starts_with("^^") {
            self.bump_n(2);
            if self.peek() == Some('<') {
                self.parse_iriref()?
            } else if self.turtle() {
                self.parse_prefixed_name()?
            } else {
                return self.err("expected datatype IRI");
            }
        } else if self.peek() == Some('@') {
            return self.err("language-tagged literals are not supported");
        } else {
            Iri::new(XSD_STRING).unwrap()
        };
        Literal::new(lexical, datatype)
            .map(Term::Literal)
            .map_err(|e| ParseError::Syntax { line, column, message: e.to_string() })
    }

    fn parse_numeric(&mut self) -> PResult<Term> {
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            text.push(c);
            self.bump();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.bump();
        }
        let mut datatype = XSD_INTEGER;
        if self.peek() == Some('.') && self.peek_nth(1).is_some_and(|c| c.is_ascii_digit()) {
            datatype = XSD_DECIMAL;
            text.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            return self.err("double literals are not supported; use xsd:decimal");
        }
        if !text.bytes().any(|b| b.is_ascii_digit()) {
            return self.err(format!("invalid numeric literal '{text}'"));
        }
        Ok(Term::Literal(Literal::new(text, Iri::new(datatype).unwrap()).expect("lexical checked")))
    }
}
