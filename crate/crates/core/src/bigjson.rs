//! Serde adapters that carry `BigInt` values as plain JSON integer literals.
//!
//! Relies on serde_json's `arbitrary_precision` feature so that literals of
//! any length pass through untouched. Float literals are rejected.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

pub(crate) fn to_number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("decimal integer is a valid JSON number")
}

pub(crate) fn from_number(n: &Number) -> Result<BigInt, String> {
    let text = n.to_string();
    if text.contains(['.', 'e', 'E']) {
        return Err(format!("expected an integer literal, found {text}"));
    }
    BigInt::from_str(&text).map_err(|e| format!("invalid integer literal {text}: {e}"))
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Wrapped(#[serde(with = "int")] BigInt);

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_number(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let n = Number::deserialize(d)?;
        from_number(&n).map_err(D::Error::custom)
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(to_number))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

pub mod rows {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Row(#[serde(with = "super::vec")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(rows.iter().map(|r| Row(r.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v: Vec<Row> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|r| r.0).collect())
    }
}
