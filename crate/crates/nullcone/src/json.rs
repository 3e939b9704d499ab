//! JSON helpers shared by the command-line front end.
//!
//! Input files may hold a bare algebra (`{"dim":..,"constants":[..]}`), a bare
//! layout (`{"p":..,"k":..,"roles":..}`), or a bundle written by `build`
//! with `algebra`, `layout`, `class` and `provenance` keys.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::StructureTensor;
use crate::constructor::NullConeRealization;
use crate::error::{Error, Result};
use crate::frame::{ClassVector, FrameLayout};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub algebra: StructureTensor,
    pub layout: FrameLayout,
    pub class: ClassVector,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub provenance: Value,
}

impl Bundle {
    pub fn from_realization(r: &NullConeRealization) -> Result<Self> {
        Ok(Bundle {
            algebra: r.algebra.clone(),
            layout: r.layout.clone(),
            class: r.class.clone(),
            provenance: serde_json::to_value(&r.provenance)?,
        })
    }
}

/// Serializes with `indent` spaces per level, or compactly for `None`.
pub fn render<T: Serialize>(value: &T, indent: Option<usize>) -> Result<String> {
    let Some(width) = indent else {
        return Ok(serde_json::to_string(value)?);
    };
    let pad = vec![b' '; width];
    let mut out = Vec::new();
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

fn pick(text: &str, key: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text)?;
    match v {
        Value::Object(mut map) if map.contains_key(key) => Ok(map.remove(key).expect("checked")),
        other => Ok(other),
    }
}

pub fn parse_algebra(text: &str) -> Result<StructureTensor> {
    Ok(serde_json::from_value(pick(text, "algebra")?)?)
}

pub fn parse_layout(text: &str) -> Result<FrameLayout> {
    Ok(serde_json::from_value(pick(text, "layout")?)?)
}

/// A class from `"2,1"` or a JSON array such as `["2","1/2"]`.
pub fn parse_class(text: &str) -> Result<ClassVector> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    trimmed.parse()
}

/// `"p,k"` into a signature pair.
pub fn parse_signature(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [p, k] = parts[..] else {
        return Err(Error::Parse(format!("signature {text:?} is not p,k")));
    };
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("signature {text:?} is not p,k")));
    Ok((num(p)?, num(k)?))
}
