//! Exact decimal numbers for literal comparison and cost arithmetic.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

/// An exact decimal `unscaled × 10^-scale`, kept normalized so that equal
/// numbers have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decimal {
    unscaled: BigInt,
    scale: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid decimal literal {0:?}")]
pub struct ParseDecimalError(pub String);

fn pow10(exp: u32) -> BigInt {
    let mut v = BigInt::from(1u8);
    let ten = BigInt::from(10u8);
    for _ in 0..exp {
        v *= &ten;
    }
    v
}

impl Decimal {
    pub fn new(unscaled: impl Into<BigInt>, scale: u32) -> Self {
        Self { unscaled: unscaled.into(), scale }.normalized()
    }

    pub fn zero() -> Self {
        Self::new(0u8, 0)
    }

    fn normalized(mut self) -> Self {
        if self.unscaled.is_zero() {
            self.scale = 0;
            return self;
        }
        let ten = BigInt::from(10u8);
        while self.scale > 0 && (&self.unscaled % &ten).is_zero() {
            self.unscaled /= &ten;
            self.scale -= 1;
        }
        self
    }

    /// Number of fractional digits in the normalized form.
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_integer(&self) -> bool {
        self.scale == 0
    }

    pub fn is_negative(&self) -> bool {
        self.unscaled.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.unscaled.is_positive()
    }

    /// The integer value, if this number has no fractional part.
    pub fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.unscaled.clone())
    }

    pub fn to_u128(&self) -> Option<u128> {
        use num_traits::ToPrimitive;
        self.to_bigint()?.to_u128()
    }

    /// `self × 10^-places`.
    pub fn shift_right(&self, places: u32) -> Self {
        Self::new(self.unscaled.clone(), self.scale + places)
    }

    /// `self × 10^places`.
    pub fn shift_left(&self, places: u32) -> Self {
        if places <= self.scale {
            Self::new(self.unscaled.clone(), self.scale - places)
        } else {
            Self::new(&self.unscaled * pow10(places - self.scale), 0)
        }
    }

    pub fn mul(&self, other: &Decimal) -> Decimal {
        Self::new(&self.unscaled * &other.unscaled, self.scale + other.scale)
    }

    pub fn add(&self, other: &Decimal) -> Decimal {
        let scale = self.scale.max(other.scale);
        let a = &self.unscaled * pow10(scale - self.scale);
        let b = &other.unscaled * pow10(scale - other.scale);
        Self::new(a + b, scale)
    }

    /// Parses the lexical space shared by `xsd:integer` and `xsd:decimal`:
    /// an optional sign, digits, and an optional fractional part.
    pub fn parse(s: &str) -> Result<Self, ParseDecimalError> {
        let err = || ParseDecimalError(s.to_string());
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if body.ends_with('.') && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let mut digits = String::with_capacity(int_part.len() + frac_part.len());
        digits.push_str(int_part);
        digits.push_str(frac_part);
        let magnitude = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(err)?;
        let unscaled = if negative { -magnitude } else { magnitude };
        let scale = u32::try_from(frac_part.len()).map_err(|_| err())?;
        Ok(Self::new(unscaled, scale))
    }
}

impl FromStr for Decimal {
    type Err = ParseDecimalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Decimal::parse(s)
    }
}

impl From<i64> for Decimal {
    fn from(v: i64) -> Self {
        Self::new(v, 0)
    }
}

impl From<u64> for Decimal {
    fn from(v: u64) -> Self {
        Self::new(v, 0)
    }
}

impl From<u128> for Decimal {
    fn from(v: u128) -> Self {
        Self::new(v, 0)
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        let a = &self.unscaled * pow10(scale - self.scale);
        let b = &other.unscaled * pow10(scale - other.scale);
        a.cmp(&b)
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.unscaled);
        }
        let digits = self.unscaled.magnitude().to_string();
        let scale = self.scale as usize;
        if self.unscaled.sign() == Sign::Minus {
            f.write_str("-")?;
        }
        if digits.len() <= scale {
            f.write_str("0.")?;
            for _ in 0..scale - digits.len() {
                f.write_str("0")?;
            }
            f.write_str(&digits)
        } else {
            let (i, frac) = digits.split_at(digits.len() - scale);
            write!(f, "{i}.{frac}")
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Decimal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Decimal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <alloc::borrow::Cow<'de, str>>::deserialize(d)?;
        Decimal::parse(&s).map_err(serde::de::Error::custom)
    }
}
