//! Serialized point format and float helpers shared by reports.

use serde::{Deserialize, Serialize};

use crate::domains::{SymPoint, TildePoint};
use crate::error::{Error, Result};
use crate::linalg::{c, CNum};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Tilde,
    Sym,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub kind: PointKind,
    pub n: usize,
    pub components: Vec<[f64; 2]>,
}

impl PointFile {
    pub fn from_components(kind: PointKind, comps: &[CNum]) -> Self {
        Self { kind, n: comps.len(), components: comps.iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn complex_components(&self) -> Result<Vec<CNum>> {
        if self.components.len() != self.n {
            return Err(Error::InvalidPoint(format!(
                "expected {} components, found {}",
                self.n,
                self.components.len()
            )));
        }
        Ok(self.components.iter().map(|[a, b]| c(*a, *b)).collect())
    }

    pub fn to_tilde(&self) -> Result<TildePoint> {
        TildePoint::from_components(&self.complex_components()?)
    }

    pub fn to_sym(&self) -> Result<SymPoint> {
        SymPoint::from_components(&self.complex_components()?)
    }
}

/// Serde adapter writing finite floats as numbers and the non-finite values
/// as the strings "inf", "-inf" and "nan".
pub mod float {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("invalid float {other:?}"))),
            },
        }
    }
}
