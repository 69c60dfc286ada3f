//! JSON helpers for big integers: numbers when they fit in an `i64`, decimal strings
//! otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serializer};

pub fn to_value(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

pub mod matrix {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for row in m {
            let row: Vec<serde_json::Value> = row.iter().map(to_value).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let raw: Vec<Vec<IntEntry>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|row| row.into_iter().map(|e| e.into_bigint().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntEntry {
    Num(i64),
    Str(String),
}

impl IntEntry {
    fn into_bigint(self) -> Result<BigInt, String> {
        match self {
            IntEntry::Num(v) => Ok(BigInt::from(v)),
            IntEntry::Str(s) => s.trim().parse().map_err(|_| format!("not an integer: {s:?}")),
        }
    }
}
