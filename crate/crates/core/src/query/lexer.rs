use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::QueryError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Iri(String),
    /// `prefix:local`, split at the first colon.
    PName(String, String),
    Var(String),
    /// Unescaped string body.
    Str(String),
    Number(String),
    Word(String),
    Punct(&'static str),
    DataType,
}

#[derive(Clone, Debug)]
pub(super) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const PUNCT: [&str; 19] = [
    "<=", ">=", "!=", "&&", "||", "{", "}", "(", ")", ".", ";", ",", "<", ">", "=", "!", "*", "|", "/",
];

fn is_iri_char(c: char) -> bool {
    !(c <= ' ' || "<>\"{}|^`\\".contains(c))
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

pub(super) fn tokenize(src: &str) -> Result<Vec<Token>, QueryError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| QueryError::Syntax { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let start = i;
        let tok = if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        } else if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        } else if c == '<' && {
            let mut j = i + 1;
            while j < chars.len() && is_iri_char(chars[j]) {
                j += 1;
            }
            j < chars.len() && chars[j] == '>'
        } {
            let mut j = i + 1;
            while chars[j] != '>' {
                j += 1;
            }
            let iri: String = chars[i + 1..j].iter().collect();
            i = j + 1;
            Tok::Iri(iri)
        } else if c == '?' || c == '$' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            if j == i + 1 {
                return Err(err(tl, tc, "empty variable name".into()));
            }
            let name: String = chars[i + 1..j].iter().collect();
            i = j;
            Tok::Var(name)
        } else if c == '"' || c == '\'' {
            let mut j = i + 1;
            let mut body = String::new();
            loop {
                let Some(&d) = chars.get(j) else {
                    return Err(err(tl, tc, "unterminated string".into()));
                };
                j += 1;
                if d == c {
                    break;
                }
                if d == '\n' {
                    return Err(err(tl, tc, "newline in string".into()));
                }
                if d == '\\' {
                    let e = chars.get(j).copied();
                    j += 1;
                    body.push(match e {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        _ => return Err(err(tl, tc, "invalid escape in string".into())),
                    });
                } else {
                    body.push(d);
                }
            }
            i = j;
            Tok::Str(body)
        } else if c.is_ascii_digit()
            || ((c == '-' || c == '+') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j < chars.len() && chars[j] == '.' && chars.get(j + 1).is_some_and(|d| d.is_ascii_digit()) {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                return Err(QueryError::Unsupported("double literals".into()));
            }
            let n: String = chars[i..j].iter().collect();
            i = j;
            Tok::Number(n)
        } else if c == '^' && chars.get(i + 1) == Some(&'^') {
            i += 2;
            Tok::DataType
        } else if c.is_alphabetic() || c == '_' || c == ':' {
            let mut j = i;
            while j < chars.len() && is_name_char(chars[j]) {
                j += 1;
            }
            if j < chars.len() && chars[j] == ':' {
                let prefix: String = chars[i..j].iter().collect();
                let mut k = j + 1;
                while k < chars.len() && (is_name_char(chars[k]) || chars[k] == ':') {
                    k += 1;
                }
                while k > j + 1 && chars[k - 1] == '.' {
                    k -= 1;
                }
                let local: String = chars[j + 1..k].iter().collect();
                i = k;
                Tok::PName(prefix, local)
            } else {
                while j > i && chars[j - 1] == '.' {
                    j -= 1;
                }
                let w: String = chars[i..j].iter().collect();
                i = j;
                Tok::Word(w)
            }
        } else if c == '[' || c == '(' && chars.get(i + 1) == Some(&')') {
            return Err(QueryError::Unsupported("blank nodes".into()));
        } else if c == '@' {
            return Err(QueryError::Unsupported("language-tagged literals".into()));
        } else if let Some(p) = PUNCT.iter().find(|p| {
            let pc: Vec<char> = p.chars().collect();
            chars[i..].starts_with(&pc)
        }) {
            i += p.chars().count();
            Tok::Punct(p)
        } else {
            return Err(err(tl, tc, format!("unexpected character '{c}'")));
        };
        col += i - start;
        out.push(Token { tok, line: tl, column: tc });
    }
    Ok(out)
}
