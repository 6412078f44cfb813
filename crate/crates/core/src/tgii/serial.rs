//! Versioned JSON documents with sorted keys and decimal-string integers.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const FORMAT: &str = "tgii/1";

fn serde_err(e: serde_json::Error) -> Error {
    Error::Serde(e.to_string())
}

/// Pretty JSON with sorted keys, tagged with format, kind and the
/// demo-only marker, ending in a single LF.
pub fn to_document<T: Serialize>(kind: &str, v: &T) -> Result<String> {
    let mut value = serde_json::to_value(v).map_err(serde_err)?;
    let Value::Object(map) = &mut value else {
        return Err(Error::Serde(format!("{kind} does not serialize to an object")));
    };
    map.insert("format".into(), FORMAT.into());
    map.insert("kind".into(), kind.into());
    map.insert("demo_only".into(), true.into());
    let mut s = serde_json::to_string_pretty(&value).map_err(serde_err)?;
    s.push('\n');
    Ok(s)
}

pub fn from_document<T: DeserializeOwned>(kind: &str, text: &str) -> Result<T> {
    let mut value: Value = serde_json::from_str(text).map_err(serde_err)?;
    let Value::Object(map) = &mut value else {
        return Err(Error::Serde("expected a JSON object".into()));
    };
    match map.remove("format") {
        Some(Value::String(f)) if f == FORMAT => {}
        other => return Err(Error::Serde(format!("unsupported format {other:?}"))),
    }
    match map.remove("kind") {
        Some(Value::String(k)) if k == kind => {}
        other => return Err(Error::Serde(format!("expected kind {kind}, got {other:?}"))),
    }
    map.remove("demo_only");
    serde_json::from_value(value).map_err(serde_err)
}

/// u64 as a decimal string.
pub mod dec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Vec<u64> as decimal strings.
pub mod dec_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[u64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| x.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Vec<Vec<u64>> as nested decimal strings.
pub mod dec_vec2 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<u64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|l| l.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<u64>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|l| l.iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}
