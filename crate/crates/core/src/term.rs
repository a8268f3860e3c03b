//! RDF terms: absolute IRIs and typed literals. Blank nodes do not exist here.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt::{self, Write};

use crate::decimal::Decimal;

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("IRI {0:?} is not absolute (no scheme separator)")]
    RelativeIri(String),
    #[error("IRI {0:?} contains a forbidden character")]
    IllegalIriChar(String),
    #[error("lexical form {lexical:?} is not valid for datatype <{datatype}>")]
    BadNumericLexical { lexical: String, datatype: String },
}

/// An absolute IRI. Equality is exact string equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self, TermError> {
        let value = value.as_ref();
        if value
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || "<>\"{}|^`\\".contains(c))
        {
            return Err(TermError::IllegalIriChar(value.to_string()));
        }
        match value.find(':') {
            Some(i) if i > 0 => Ok(Self(Arc::from(value))),
            _ => Err(TermError::RelativeIri(value.to_string())),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn rdf_type() -> Self {
        Self(Arc::from(RDF_TYPE))
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A literal with a lexical form and a datatype. Language tags are not
/// supported. `xsd:integer` and `xsd:decimal` literals are validated on
/// construction so that [`Literal::numeric`] never fails for them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Iri,
}

impl Literal {
    pub fn new(lexical: impl AsRef<str>, datatype: Iri) -> Result<Self, TermError> {
        let lexical = lexical.as_ref();
        let dt = datatype.as_str();
        let numeric_ok = match dt {
            XSD_INTEGER => Decimal::parse(lexical).is_ok() && !lexical.contains('.'),
            XSD_DECIMAL => Decimal::parse(lexical).is_ok(),
            _ => true,
        };
        if !numeric_ok {
            return Err(TermError::BadNumericLexical {
                lexical: lexical.to_string(),
                datatype: dt.to_string(),
            });
        }
        Ok(Self { lexical: Arc::from(lexical), datatype })
    }

    pub fn string(lexical: impl AsRef<str>) -> Self {
        Self { lexical: Arc::from(lexical.as_ref()), datatype: Iri(Arc::from(XSD_STRING)) }
    }

    pub fn integer(v: i64) -> Self {
        Self { lexical: Arc::from(v.to_string().as_str()), datatype: Iri(Arc::from(XSD_INTEGER)) }
    }

    pub fn decimal(v: &Decimal) -> Self {
        let datatype = if v.is_integer() { XSD_INTEGER } else { XSD_DECIMAL };
        Self { lexical: Arc::from(v.to_string().as_str()), datatype: Iri(Arc::from(datatype)) }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.datatype.as_str(), XSD_INTEGER | XSD_DECIMAL)
    }

    /// The exact numeric value of an `xsd:integer` / `xsd:decimal` literal.
    pub fn numeric(&self) -> Option<Decimal> {
        if self.is_numeric() {
            Decimal::parse(&self.lexical).ok()
        } else {
            None
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_quoted(f, &self.lexical)?;
        if self.datatype.as_str() != XSD_STRING {
            write!(f, "^^{}", self.datatype)?;
        }
        Ok(())
    }
}

/// Writes `s` as an N-Triples string literal body, quotes included.
pub(crate) fn write_quoted(out: &mut impl Write, s: &str) -> fmt::Result {
    out.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => out.write_str("\\\"")?,
            '\\' => out.write_str("\\\\")?,
            '\n' => out.write_str("\\n")?,
            '\r' => out.write_str("\\r")?,
            '\t' => out.write_str("\\t")?,
            c if c.is_control() => write!(out, "\\u{:04X}", c as u32)?,
            c => out.write_char(c)?,
        }
    }
    out.write_char('"')
}

/// Object position of a triple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            Term::Iri(_) => None,
        }
    }

    /// N-Triples rendering; also the canonical rendering used for ordering
    /// query solutions.
    pub fn to_ntriples(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => fmt::Display::fmt(i, f),
            Term::Literal(l) => fmt::Display::fmt(l, f),
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

#[cfg(feature = "serde")]
mod serde_impls {
    use super::*;
    use alloc::borrow::Cow;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for Iri {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(self.as_str())
        }
    }

    impl<'de> Deserialize<'de> for Iri {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let s = Cow::<'de, str>::deserialize(d)?;
            Iri::new(s.as_ref()).map_err(D::Error::custom)
        }
    }

    /// Terms serialize to their N-Triples rendering.
    impl Serialize for Term {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.collect_str(self)
        }
    }
}
