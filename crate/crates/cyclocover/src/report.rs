//! Wire formats for CLI output. JSON is the machine surface (schema
//! `cyclocover/1`); CSV and text renderings are derived from the same DTOs.
//!
//! Witness field elements are serialized as coefficient sequences next to the
//! full field descriptor (characteristic, degrees, both moduli), so a report
//! is self-contained and reproducible without access to this process.

use serde::Serialize;

use crate::criterion::{CosetVerdict, DecisionMethod, DecisionRecord};
use crate::cyclotomic::PPartSplit;
use crate::finite_field::{FieldDescriptor, FieldElement};

pub const SCHEMA: &str = "cyclocover/1";

#[derive(Serialize)]
pub struct FieldDto {
    pub p: u64,
    pub base_degree: u32,
    pub ext_degree: u32,
    pub order: u64,
    pub base_modulus: Vec<u64>,
    pub ext_modulus: Vec<u64>,
}

impl From<&FieldDescriptor> for FieldDto {
    fn from(f: &FieldDescriptor) -> Self {
        FieldDto {
            p: f.p(),
            base_degree: f.base_degree(),
            ext_degree: f.ext_degree(),
            order: f.order(),
            base_modulus: f.base_modulus().to_vec(),
            ext_modulus: f.ext_modulus().to_vec(),
        }
    }
}

#[derive(Serialize)]
pub struct ElementDto {
    pub coeffs: Vec<u64>,
}

impl From<&FieldElement> for ElementDto {
    fn from(e: &FieldElement) -> Self {
        ElementDto { coeffs: e.coeffs().to_vec() }
    }
}

#[derive(Serialize)]
pub struct CounterexampleDto {
    pub element: ElementDto,
    pub shift_exponent: u64,
}

#[derive(Serialize)]
pub struct CosetDto {
    pub representative: u64,
    pub members: Vec<u64>,
    pub size: u64,
    pub subgroup_order: u64,
}

#[derive(Serialize)]
pub struct CosetVerdictDto {
    pub coset: CosetDto,
    pub field: FieldDto,
    pub passes: bool,
    pub witness: Option<ElementDto>,
    pub counterexample: Option<CounterexampleDto>,
}

impl From<&CosetVerdict> for CosetVerdictDto {
    fn from(v: &CosetVerdict) -> Self {
        CosetVerdictDto {
            coset: CosetDto {
                representative: v.coset.representative,
                members: v.coset.members.clone(),
                size: v.coset.size,
                subgroup_order: v.coset.subgroup_order,
            },
            field: FieldDto::from(v.field.as_ref()),
            passes: v.passes,
            witness: v.witness.as_ref().map(ElementDto::from),
            counterexample: v
                .counterexample
                .as_ref()
                .map(|(e, i)| CounterexampleDto { element: ElementDto::from(e), shift_exponent: *i }),
        }
    }
}

#[derive(Serialize)]
pub struct RecordDto {
    pub q: u64,
    pub n: u64,
    pub h_zero: bool,
    pub split: PPartSplit,
    pub method: &'static str,
    pub failing_coset_rep: Option<u64>,
    pub coset_verdicts: Vec<CosetVerdictDto>,
}

impl From<&DecisionRecord> for RecordDto {
    fn from(r: &DecisionRecord) -> Self {
        RecordDto {
            q: r.q,
            n: r.n,
            h_zero: r.verdict,
            split: r.split.clone(),
            method: match r.method {
                DecisionMethod::Criterion => "criterion",
                DecisionMethod::Oracle => "oracle",
            },
            failing_coset_rep: r.failing_coset_rep(),
            coset_verdicts: r.coset_verdicts.iter().map(CosetVerdictDto::from).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct DecideReport {
    pub schema: &'static str,
    pub command: &'static str,
    #[serde(flatten)]
    pub record: RecordDto,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum TableRow {
    Record(RecordDto),
    Error { q: u64, n: u64, error: String },
}

#[derive(Serialize)]
pub struct TableReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub q: u64,
    pub n_max: u64,
    pub rows: Vec<TableRow>,
}

#[derive(Serialize)]
pub struct OracleReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub q: u64,
    pub n: u64,
    pub covering_hyperplane: Option<Vec<u64>>,
    /// h_q(n) = 0 according to the brute-force sweep.
    pub h_zero_oracle: bool,
    pub max_codim: Option<u32>,
    pub exact_h: Option<u32>,
    pub exact_h_witness: Option<Vec<Vec<u64>>>,
    pub criterion_h_zero: Option<bool>,
    pub agrees_with_criterion: Option<bool>,
}

#[derive(Serialize)]
pub struct CheckDto {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub q: u64,
    pub n: u64,
    pub split: PPartSplit,
    pub checks: Vec<CheckDto>,
    pub all_passed: bool,
}

/// RFC-4180-style field quoting: wrap when the value contains a comma, quote
/// or newline; double embedded quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("DTOs serialize infallibly");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
