//! Serde adapters that render big integers as decimal strings.
//!
//! JSON numbers cannot carry 768-bit (let alone 20000-bit) values, so every
//! `BigUint` in a serialized report is a quoted decimal string.

use num_bigint::BigUint;
use serde::{de, Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

/// Parses a decimal integer, ignoring all ASCII whitespace (fixture files wrap
/// long numbers across lines). Signs, hex prefixes and separators are rejected.
pub fn parse_decimal(text: &str) -> Result<BigUint> {
    let digits: String = text.chars().filter(|c| !c.is_ascii_whitespace()).collect();
    if digits.is_empty() {
        return Err(Error::Parse("empty decimal".into()));
    }
    if let Some(bad) = digits.chars().find(|c| !c.is_ascii_digit()) {
        return Err(Error::Parse(format!(
            "unexpected character {bad:?} in decimal"
        )));
    }
    BigUint::parse_bytes(digits.as_bytes(), 10)
        .ok_or_else(|| Error::Parse("invalid decimal".into()))
}

pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_str_radix(10))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
    let text = String::deserialize(d)?;
    parse_decimal(&text).map_err(de::Error::custom)
}

pub mod option_pair {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(
        value: &Option<(BigUint, BigUint)>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        value
            .as_ref()
            .map(|(a, b)| [a.to_str_radix(10), b.to_str_radix(10)])
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<(BigUint, BigUint)>, D::Error> {
        let raw = Option::<[String; 2]>::deserialize(d)?;
        raw.map(|[a, b]| {
            Ok((
                parse_decimal(&a).map_err(de::Error::custom)?,
                parse_decimal(&b).map_err(de::Error::custom)?,
            ))
        })
        .transpose()
    }
}
