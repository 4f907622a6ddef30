//! Curve records: the line-delimited JSON schema, the embedded reference
//! dataset and label or file ingestion.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{ArithmeticInputs, CurveModel};
use crate::error::{Error, Result};

const EMBEDDED: &str = include_str!("../data/curves.jsonl");

/// Golden values attached to an embedded record. Pair-dependent values
/// (local terms, Φ) refer to the auxiliary set of the pair with `partner`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bad_primes: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_terms: Option<BTreeMap<u64, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_valuation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_gamma_valuation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_gl2_valuation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regulator_valuation: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha_valuation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tamagawa_product: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tamagawa_valuation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction_count_valuation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion_valuation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// One line of a curve file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveRecord {
    pub label: String,
    pub ainvs: Vec<i64>,
    pub rank: u32,
    pub sha_p_valuation: u32,
    pub regulator_p_valuation: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion_p_valuation: Option<u32>,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

/// A validated record.
#[derive(Debug, Clone)]
pub struct Curve {
    pub model: CurveModel,
    pub inputs: ArithmeticInputs,
    pub expected: Option<Expected>,
}

impl CurveRecord {
    pub fn validate(self) -> Result<Curve> {
        let ainvs: [i64; 5] = self.ainvs.as_slice().try_into().map_err(|_| {
            Error::Schema(format!(
                "{}: ainvs needs 5 integers, got {}",
                self.label,
                self.ainvs.len()
            ))
        })?;
        if self.label.trim().is_empty() {
            return Err(Error::Schema("empty label".into()));
        }
        let model = CurveModel::from_i64s(self.label.clone(), ainvs)
            .map_err(|_| Error::Schema(format!("{}: discriminant is zero", self.label)))?;
        let inputs = ArithmeticInputs {
            rank: self.rank,
            sha_p_valuation: self.sha_p_valuation,
            regulator_p_valuation: self.regulator_p_valuation,
            torsion_p_valuation: self.torsion_p_valuation,
            provenance: self.provenance,
        };
        if inputs.provenance.trim().is_empty() {
            return Err(Error::Schema(format!("{}: provenance is empty", self.label)));
        }
        Ok(Curve {
            model,
            inputs,
            expected: self.expected,
        })
    }
}

/// Parses line-delimited records; blank lines are skipped.
pub fn parse_records(text: &str) -> Result<Vec<CurveRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Schema(format!("line {}: {e}", i + 1))))
        .collect()
}

pub fn embedded_records() -> Vec<CurveRecord> {
    parse_records(EMBEDDED).expect("embedded dataset parses")
}

pub fn embedded_labels() -> Vec<String> {
    embedded_records().into_iter().map(|r| r.label).collect()
}

pub fn embedded(label: &str) -> Result<Curve> {
    embedded_records()
        .into_iter()
        .find(|r| r.label == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))?
        .validate()
}

/// Resolves an embedded label, or reads every record of a file.
pub fn ingest_all(path_or_label: &str) -> Result<Vec<Curve>> {
    if let Ok(c) = embedded(path_or_label) {
        return Ok(vec![c]);
    }
    let path = Path::new(path_or_label);
    if !path.is_file() {
        return Err(Error::UnknownLabel(path_or_label.to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    let records = parse_records(&text)?;
    if records.is_empty() {
        return Err(Error::Schema(format!("{path_or_label}: no records")));
    }
    records.into_iter().map(CurveRecord::validate).collect()
}

/// Like [`ingest_all`] but requires exactly one curve.
pub fn ingest(path_or_label: &str) -> Result<(CurveModel, ArithmeticInputs)> {
    let c = ingest_one(path_or_label)?;
    Ok((c.model, c.inputs))
}

pub fn ingest_one(path_or_label: &str) -> Result<Curve> {
    let mut all = ingest_all(path_or_label)?;
    if all.len() != 1 {
        return Err(Error::Schema(format!(
            "{path_or_label}: expected one record, found {}",
            all.len()
        )));
    }
    Ok(all.remove(0))
}
