//! Serde adapters that write big integers as plain JSON numbers when they fit
//! in 64 bits and as decimal strings otherwise.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Unsigned(u64),
    Signed(i64),
    Text(String),
}

pub mod biguint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match v.to_u64() {
            Some(x) => s.serialize_u64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Unsigned(x) => Ok(BigUint::from(x)),
            Repr::Signed(x) => Err(de::Error::custom(format!("negative value {x}"))),
            Repr::Text(t) => BigUint::from_str(&t).map_err(de::Error::custom),
        }
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Unsigned(x) => Ok(BigInt::from(x)),
            Repr::Signed(x) => Ok(BigInt::from(x)),
            Repr::Text(t) => BigInt::from_str(&t).map_err(de::Error::custom),
        }
    }
}

pub mod biguint_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Item(#[serde(with = "super::biguint")] BigUint);

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| Item(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Ok(Vec::<Item>::deserialize(d)?.into_iter().map(|i| i.0).collect())
    }
}
