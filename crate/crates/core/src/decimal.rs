//! Serde adapters that write big integers as decimal strings, so JSON
//! readers never see a number outside the 64-bit range.
//!
//! Use as `#[serde(with = "crate::decimal")]` on a `BigInt`, or the `vec` and
//! `vec2` submodules on nested vectors. Machine integers go through `int`,
//! `ints` and `triples` so the whole certificate reads the same way.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).map_err(D::Error::custom)
}

fn parse(s: &str) -> Result<BigInt, String> {
    let ok = !s.is_empty() && s.trim_start_matches('-').chars().all(|c| c.is_ascii_digit());
    if !ok {
        return Err(format!("not a decimal integer: {s:?}"));
    }
    BigInt::from_str(s).map_err(|e| e.to_string())
}

pub mod vec {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse(s).map_err(D::Error::custom))
            .collect()
    }
}

pub mod vec2 {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|r| r.iter().map(|s| parse(s).map_err(D::Error::custom)).collect())
            .collect()
    }
}

/// Any machine integer.
pub mod int {
    use super::*;
    use std::fmt::Display;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, T: TryFrom<BigInt>, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let s = String::deserialize(d)?;
        let v = parse(&s).map_err(D::Error::custom)?;
        T::try_from(v).map_err(|_| D::Error::custom(format!("{s} out of range")))
    }
}

pub mod ints {
    use super::*;
    use serde::Serialize;
    use std::fmt::Display;

    pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, T: TryFrom<BigInt>, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| {
                let v = parse(s).map_err(D::Error::custom)?;
                T::try_from(v).map_err(|_| D::Error::custom(format!("{s} out of range")))
            })
            .collect()
    }
}

pub mod opt_int {
    use super::*;
    use std::fmt::Display;

    pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T: TryFrom<BigInt>, D: Deserializer<'de>>(d: D) -> Result<Option<T>, D::Error> {
        let Some(s) = Option::<String>::deserialize(d)? else { return Ok(None) };
        let v = parse(&s).map_err(D::Error::custom)?;
        T::try_from(v).map(Some).map_err(|_| D::Error::custom(format!("{s} out of range")))
    }
}

/// `Vec<[i64; 3]>`.
pub mod triples {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[[i64; 3]], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|t| t.map(|x| x.to_string())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<[i64; 3]>, D::Error> {
        let raw = Vec::<[String; 3]>::deserialize(d)?;
        let mut out = Vec::with_capacity(raw.len());
        for t in raw {
            let mut r = [0i64; 3];
            for (slot, s) in r.iter_mut().zip(&t) {
                let v = parse(s).map_err(D::Error::custom)?;
                *slot = i64::try_from(v).map_err(|_| D::Error::custom(format!("{s} out of range")))?;
            }
            out.push(r);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct W {
        #[serde(with = "crate::decimal")]
        a: BigInt,
        #[serde(with = "crate::decimal::vec")]
        b: Vec<BigInt>,
    }

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct M {
        #[serde(with = "crate::decimal::int")]
        a: u64,
        #[serde(with = "crate::decimal::ints")]
        b: Vec<i8>,
        #[serde(with = "crate::decimal::triples")]
        c: Vec<[i64; 3]>,
    }

    #[test]
    fn roundtrip_large() {
        let w = W { a: BigInt::from(10).pow(40) * -3, b: vec![BigInt::from(7), BigInt::from(-2).pow(99)] };
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.contains("\"-30000000000000000000000000000000000000000\""));
        assert_eq!(serde_json::from_str::<W>(&s).unwrap(), w);
        assert!(serde_json::from_str::<W>(r#"{"a":"1e5","b":[]}"#).is_err());
        assert!(serde_json::from_str::<W>(r#"{"a":5,"b":[]}"#).is_err());
    }

    #[test]
    fn machine_integers() {
        let m = M { a: u64::MAX, b: vec![-1, 1], c: vec![[-1, 0, 1]] };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"a":"18446744073709551615","b":["-1","1"],"c":[["-1","0","1"]]}"#);
        assert_eq!(serde_json::from_str::<M>(&s).unwrap(), m);
        assert!(serde_json::from_str::<M>(r#"{"a":"-1","b":[],"c":[]}"#).is_err());
        assert!(serde_json::from_str::<M>(r#"{"a":"1","b":["300"],"c":[]}"#).is_err());
    }
}
