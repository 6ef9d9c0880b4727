//! JSON formats: pair files, witness files and reports.
//!
//! Matrices are row-major nested arrays of `[re, im]` number pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::BiPoly;
use crate::scalar::{c, CMatrix};

pub const SCHEMA_VERSION: &str = "1";

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub schema_version: String,
    #[serde(rename = "S")]
    pub s: JsonMatrix,
    #[serde(rename = "P")]
    pub p: JsonMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub schema_version: String,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<JsonMatrix>,
    pub eta1: JsonMatrix,
    pub sigma: JsonMatrix,
    pub sigma_star: JsonMatrix,
}

/// A malformed input, with the offending location.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for InputError {}

pub fn to_json_matrix(m: &CMatrix<f64>) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Checks shape and finiteness; `Err` carries a field diagnostic.
pub fn from_json_matrix(field: &str, rows: &JsonMatrix) -> Result<CMatrix<f64>, String> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(format!(
                "field `{field}`: row {i} has {} entries, expected {m}",
                row.len()
            ));
        }
        for (j, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(format!("field `{field}`: entry [{i}][{j}] is not finite"));
            }
        }
    }
    Ok(CMatrix::from_fn(n, m, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

fn square(field: &str, m: &CMatrix<f64>) -> Result<(), String> {
    if m.nrows() != m.ncols() {
        return Err(format!("field `{field}`: matrix is {}×{}, expected square", m.nrows(), m.ncols()));
    }
    Ok(())
}

fn check_version(v: &str) -> Result<(), String> {
    if v != SCHEMA_VERSION {
        return Err(format!(
            "field `schema_version`: expected \"{SCHEMA_VERSION}\", found \"{v}\""
        ));
    }
    Ok(())
}

impl PairFile {
    pub fn new(s: &CMatrix<f64>, p: &CMatrix<f64>, metadata: Option<Metadata>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            s: to_json_matrix(s),
            p: to_json_matrix(p),
            metadata,
        }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let pf: PairFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        check_version(&pf.schema_version)?;
        Ok(pf)
    }

    /// `(S, P)` after shape checks.
    pub fn matrices(&self) -> Result<(CMatrix<f64>, CMatrix<f64>), String> {
        let s = from_json_matrix("S", &self.s)?;
        let p = from_json_matrix("P", &self.p)?;
        square("S", &s)?;
        square("P", &p)?;
        if s.nrows() != p.nrows() {
            return Err(format!(
                "field `P`: dimension {} does not match `S` dimension {}",
                p.nrows(),
                s.nrows()
            ));
        }
        Ok((s, p))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("pair file serializes");
        out.push('\n');
        out
    }
}

impl WitnessFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let wf: WitnessFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        check_version(&wf.schema_version)?;
        Ok(wf)
    }

    pub fn from_witness(w: &crate::invariant::Witness<f64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            u: w.u.as_ref().map(to_json_matrix),
            eta1: to_json_matrix(&w.eta1),
            sigma: to_json_matrix(&w.sigma),
            sigma_star: to_json_matrix(&w.sigma_star),
        }
    }

    pub fn witness(&self) -> Result<crate::invariant::Witness<f64>, String> {
        let u = match &self.u {
            Some(u) => {
                let m = from_json_matrix("U", u)?;
                square("U", &m)?;
                Some(m)
            }
            None => None,
        };
        let named = [("eta1", &self.eta1), ("sigma", &self.sigma), ("sigma_star", &self.sigma_star)];
        let mut mats = Vec::with_capacity(3);
        for (name, m) in named {
            let m = from_json_matrix(name, m)?;
            square(name, &m)?;
            mats.push(m);
        }
        let sigma_star = mats.pop().unwrap_or_default();
        let sigma = mats.pop().unwrap_or_default();
        let eta1 = mats.pop().unwrap_or_default();
        Ok(crate::invariant::Witness {
            u,
            eta1,
            sigma,
            sigma_star,
        })
    }
}

pub fn read_text(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PolyTerm {
    pub s_power: usize,
    pub p_power: usize,
    pub coeff: [f64; 2],
}

pub fn poly_terms(poly: &BiPoly<f64>) -> Vec<PolyTerm> {
    poly.terms
        .iter()
        .map(|&(i, j, z)| PolyTerm {
            s_power: i,
            p_power: j,
            coeff: [z.re, z.im],
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputSummary {
    pub path: String,
    pub dim: usize,
    pub label: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairSummary {
    pub input: InputSummary,
    pub flags: crate::pair::PairFlags,
    pub norm_s: f64,
    pub norm_p: f64,
    pub commutator: f64,
    pub spectral_radius_p: f64,
    pub joint_spectrum: Vec<[[f64; 2]; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeBlock {
    pub trials: usize,
    pub max_degree: usize,
    pub seed: u64,
    pub worst_ratio: f64,
    pub certified_non_gamma: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<PolyTerm>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FundamentalBlock {
    #[serde(rename = "F")]
    pub f: JsonMatrix,
    #[serde(rename = "F_star")]
    pub f_star: JsonMatrix,
    pub defect_rank: usize,
    pub defect_rank_star: usize,
    pub residual_f: f64,
    pub residual_f_star: f64,
    pub numerical_radius_f: f64,
    pub numerical_radius_f_star: f64,
    pub intertwining_residual: f64,
    pub key_identity_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelBlock {
    #[serde(rename = "N")]
    pub n_trunc: usize,
    pub tail: f64,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportBlock {
    pub a: [f64; 2],
    pub beta: [f64; 2],
    pub resolvent_condition: f64,
    pub crosscheck_residual: f64,
    pub gram_residual: f64,
    pub unitarity_defect: f64,
    #[serde(rename = "F_tau")]
    pub f_tau: JsonMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScreenBlock {
    pub passed: bool,
    pub words_checked: usize,
    pub worst_relative_difference: f64,
    pub failing_word: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonBlock {
    pub verdict: &'static str,
    pub note: String,
    pub witness_source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub screen: Option<ScreenBlock>,
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFile>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: &'static str,
    pub pairs: Vec<PairSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fundamental: Option<FundamentalBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transport: Option<TransportBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonBlock>,
    pub verdict: &'static str,
    pub exit_code: i32,
    pub diagnostics: Vec<String>,
    pub elapsed_ms: BTreeMap<&'static str, f64>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            tool: ToolInfo::default(),
            command,
            pairs: Vec::new(),
            probe: None,
            fundamental: None,
            model: None,
            transport: None,
            comparison: None,
            verdict: "",
            exit_code: 0,
            diagnostics: Vec::new(),
            elapsed_ms: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_file_round_trip() {
        let s = CMatrix::from_fn(2, 2, |i, j| c(i as f64 + 0.1, j as f64 - 1.0 / 3.0));
        let p = CMatrix::from_fn(2, 2, |i, j| c(1e-300 * i as f64, std::f64::consts::PI * j as f64));
        let pf = PairFile::new(&s, &p, Some(Metadata { label: Some("x".into()), seed: Some(4) }));
        let back = PairFile::parse(&pf.to_json()).unwrap();
        assert_eq!(back, pf);
        let (s2, p2) = back.matrices().unwrap();
        assert_eq!(s2, s);
        assert_eq!(p2, p);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad_row = r#"{"schema_version":"1","S":[[[1,0],[0,0]],[[0,0]]],"P":[[[0,0]]]}"#;
        let err = PairFile::parse(bad_row).unwrap().matrices().unwrap_err();
        assert!(err.contains("`S`") && err.contains("row 1"), "{err}");
        let missing = r#"{"schema_version":"1","S":[[[0,0]]]}"#;
        let err = PairFile::parse(missing).unwrap_err();
        assert!(err.contains("missing field `P`") && err.contains("line"), "{err}");
        let version = r#"{"schema_version":"2","S":[[[0,0]]],"P":[[[0,0]]]}"#;
        assert!(PairFile::parse(version).unwrap_err().contains("schema_version"));
        let dims = r#"{"schema_version":"1","S":[[[0,0]]],"P":[[[0,0],[0,0]],[[0,0],[0,0]]]}"#;
        assert!(PairFile::parse(dims).unwrap().matrices().unwrap_err().contains("`P`"));
        let triple = r#"{"schema_version":"1","S":[[[0,0,0]]],"P":[[[0,0]]]}"#;
        assert!(PairFile::parse(triple).unwrap_err().contains("line 1"));
    }

    #[test]
    fn metadata_is_optional() {
        let text = r#"{"schema_version":"1","S":[[[0.5,0]]],"P":[[[0.25,0]]]}"#;
        let pf = PairFile::parse(text).unwrap();
        assert!(pf.metadata.is_none());
        assert!(!pf.to_json().contains("metadata"));
    }
}
