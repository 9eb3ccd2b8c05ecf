//! JSON interchange for pencils.
//!
//! Rows and columns are 0-based, variables `[row, col]` of the argument are
//! 1-based. Integers beyond 53 bits travel as decimal strings so that
//! consumers with double-precision numbers stay exact.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{AffineForm, Construction, Metadata, PencilMatrix, Variable};
use crate::constructions;
use crate::error::{Error, Result};

/// An integer that serializes as a JSON number when it fits in 53 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

const SAFE: i64 = (1i64 << 53) - 1;

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= SAFE => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Raw::Text(t) => BigInt::from_str(&t)
                .map(JsonInt)
                .map_err(|e| de::Error::custom(format!("bad integer {t:?}: {e}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub label: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearEntry {
    pub row: usize,
    pub col: usize,
    pub var: [usize; 2],
    pub coeff: JsonInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilDoc {
    pub construction: String,
    pub m: usize,
    pub n: usize,
    pub sign: i8,
    pub scaling_exponent: usize,
    pub expected_factor: JsonInt,
    pub layout: Vec<LayoutEntry>,
    pub constant: Vec<Vec<JsonInt>>,
    pub linear: Vec<LinearEntry>,
}

impl PencilDoc {
    pub fn from_pencil(p: &PencilMatrix) -> Self {
        let meta = p.meta();
        let constant = p
            .constant_part()
            .into_iter()
            .map(|row| row.into_iter().map(JsonInt).collect())
            .collect();
        let mut linear = Vec::new();
        for (r, c, f) in p.entries() {
            for (v, k) in f.linear() {
                linear.push(LinearEntry {
                    row: r,
                    col: c,
                    var: [v.row as usize, v.col as usize],
                    coeff: JsonInt(k.clone()),
                });
            }
        }
        PencilDoc {
            construction: meta.construction.name().to_string(),
            m: meta.m,
            n: p.n(),
            sign: meta.sign,
            scaling_exponent: meta.scaling_exponent,
            expected_factor: JsonInt(meta.expected_factor.clone()),
            layout: p
                .layout()
                .blocks()
                .iter()
                .map(|b| LayoutEntry {
                    label: b.label.clone(),
                    dim: b.dim,
                })
                .collect(),
            constant,
            linear,
        }
    }

    pub fn into_pencil(self) -> Result<PencilMatrix> {
        let construction = Construction::from_str(&self.construction)?;
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::Json(format!("sign must be ±1, got {}", self.sign)));
        }
        let layout = constructions::layout(construction, self.m)?;
        let declared: Vec<(&str, usize)> = self.layout.iter().map(|e| (e.label.as_str(), e.dim)).collect();
        let canonical: Vec<(&str, usize)> = layout.blocks().iter().map(|b| (b.label.as_str(), b.dim)).collect();
        if declared != canonical {
            return Err(Error::Json(format!(
                "layout {declared:?} does not match {construction} with m = {}",
                self.m
            )));
        }
        if layout.total_dim() != self.n || self.constant.len() != self.n {
            return Err(Error::Json(format!(
                "n = {} but layout has {} and constant part {} rows",
                self.n,
                layout.total_dim(),
                self.constant.len()
            )));
        }
        let mut triplets = Vec::new();
        for (r, row) in self.constant.into_iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::Json(format!("constant row {r} has {} entries", row.len())));
            }
            for (c, x) in row.into_iter().enumerate() {
                if x.0.is_positive() || x.0.is_negative() {
                    triplets.push((r, c, AffineForm::constant(x.0)));
                }
            }
        }
        for e in self.linear {
            let [vr, vc] = e.var;
            if vr == 0 || vc == 0 || vr > u16::MAX as usize || vc > u16::MAX as usize {
                return Err(Error::Json(format!("variable index {:?} out of range", e.var)));
            }
            triplets.push((e.row, e.col, AffineForm::term(Variable::new(vr, vc), e.coeff.0)));
        }
        let meta = Metadata {
            construction,
            m: self.m,
            sign: self.sign,
            scaling_exponent: self.scaling_exponent,
            expected_factor: self.expected_factor.0,
        };
        PencilMatrix::from_triplets(meta, layout, triplets)
    }
}

pub fn export_json(p: &PencilMatrix) -> String {
    serde_json::to_string(&PencilDoc::from_pencil(p)).expect("pencil serializes")
}

pub fn export_json_pretty(p: &PencilMatrix) -> String {
    serde_json::to_string_pretty(&PencilDoc::from_pencil(p)).expect("pencil serializes")
}

pub fn import_json(text: &str) -> Result<PencilMatrix> {
    let doc: PencilDoc = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    doc.into_pencil()
}
