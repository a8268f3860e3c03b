//! The conditional and smart-contract vocabulary.
//!
//! All terms live under one configurable base IRI. The default base is a
//! stand-in: no canonical namespace for these terms has been published, so
//! deployments that need interoperability should configure their own.

use alloc::format;
use alloc::string::String;

use crate::term::{Iri, TermError};

pub const DEFAULT_BASE: &str = "https://w3id.org/oasis/osc#";

macro_rules! terms {
    ($(#[$meta:meta])* $name:ident { $($variant:ident),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn local_name(self) -> &'static str {
                match self {
                    $($name::$variant => stringify!($variant)),+
                }
            }
        }
    };
}

terms!(
    /// Classes of the conditional and smart-contract schemas.
    Class {
        Conditional,
        ConditionalSet,
        ConditionalHead,
        ConditionalBody,
        ConditionalAtom,
        ConditionalHeadAtom,
        ConditionalBodyAtom,
        ConditionalSubject,
        ConditionalObject,
        ConditionalOperator,
        ConditionalParameter,
        ConditionalInputParameter,
        ConditionalOutputParameter,
        ConditionalOperatorArgument,
        ConditionalEntryTemplate,
        SmartContract,
        SmartContractInstance,
        SmartContractEntry,
        SmartContractEntryParticipant,
        SmartContractEntryValue,
    }
);

terms!(
    /// Object properties (plus the `value` property linking to literals).
    /// Variants keep the lowerCamelCase term names.
    #[allow(non_camel_case_types)]
    Property {
        hasConditional,
        hasConditionalSet,
        hasConditionalHead,
        hasConditionalBody,
        hasConditionalAtom,
        hasConditionalHeadAtom,
        hasConditionalBodyAtom,
        hasConditionalSubject,
        hasConditionalObject,
        hasConditionalOperator,
        hasConditionalParameter,
        hasConditionalInputParameter,
        hasConditionalOutputParameter,
        hasConditionalOperatorArgument,
        refersExactlyTo,
        refersAsNewTo,
        consistsOfSmartContractInstance,
        consistsOfSmartContractEntry,
        value,
    }
);

/// Resolves vocabulary terms against a base IRI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    base: String,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Self { base: DEFAULT_BASE.into() }
    }
}

impl Vocabulary {
    pub fn new(base: impl Into<String>) -> Result<Self, TermError> {
        let base = base.into();
        Iri::new(&base)?;
        Ok(Self { base })
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    /// An arbitrary term in the vocabulary namespace.
    pub fn term(&self, local: &str) -> Iri {
        Iri::new(format!("{}{}", self.base, local)).expect("base validated; local names are plain")
    }

    pub fn class(&self, c: Class) -> Iri {
        self.term(c.local_name())
    }

    pub fn prop(&self, p: Property) -> Iri {
        self.term(p.local_name())
    }

    /// Strips the base from `iri`, if it belongs to this vocabulary.
    pub fn local_of<'a>(&self, iri: &'a Iri) -> Option<&'a str> {
        iri.as_str().strip_prefix(self.base.as_str())
    }
}
