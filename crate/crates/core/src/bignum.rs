//! Serde helpers writing big integers as JSON numbers when they fit in a
//! `u64` and as decimal strings otherwise.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(u64),
    Str(String),
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    match Repr::deserialize(d)? {
        Repr::Num(x) => Ok(BigUint::from(x)),
        Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
    }
}
