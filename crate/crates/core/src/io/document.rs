//! Structured text documents (JSON) for parameters, fits, scans, tests and moments.
//!
//! Every document is a JSON object whose `format` member names its kind and
//! version. Numbers are written in shortest round-trip decimal form, so a
//! parse/print cycle reproduces the same bytes.
//!
//! ```text
//! params  := { "format": "nnts-axial-params/1", "M": uint, "symmetric": bool,
//!              "v": [[num, num]; M+1] (, "vR": [num; M+1], "mu": num)? }
//!            vR and mu are present exactly when symmetric is true.
//! fit     := { "format": "nnts-axial-fit/1", "family": "general"|"symmetric",
//!              "M": uint, "n": uint, "params": params, "loglik": num, "aic": num,
//!              "bic": num, "free_params": uint, "converged": bool,
//!              "converged_starts": uint, "starts": uint, "iterations_total": uint,
//!              "best_start_index": uint, "stop_reason": string,
//!              "small_sample_warning": bool, "density_underflow": bool,
//!              "warnings": [string] }
//! scan    := { "format": "nnts-axial-scan/1", "n": uint,
//!              "rows": [{ "M": uint, "loglik": num, "aic": num, "bic": num,
//!                         "free_params": uint }],
//!              "best_bic_M": uint, "best_aic_M": uint }
//! test    := { "format": "nnts-axial-test/1", "kind": string, "statistic": num,
//!              "df": uint, "p_value": num, "log10_p": num, "p_value_method": string,
//!              "restricted_loglik": num, "general_loglik": num,
//!              "restricted_fits": [fit], "general_fits": [fit] }
//! moments := { "format": "nnts-axial-moments/1", "M": uint,
//!              "moments": [{ "r": uint, "re": num, "im": num }],
//!              "mean_axis": num|null, "axial_resultant": num, "circular_variance": num }
//! ```

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::family::{NntsAxialParams, SymmetricNntsAxialParams};
use crate::inference::{information_criteria, LrtReport, ModelScan, ModelScanRow, TestKind};
use crate::optimizer::{FitResult, FittedParams, StopReason, SMALL_SAMPLE_FACTOR};

pub const PARAMS_FORMAT: &str = "nnts-axial-params/1";
pub const FIT_FORMAT: &str = "nnts-axial-fit/1";
pub const SCAN_FORMAT: &str = "nnts-axial-scan/1";
pub const TEST_FORMAT: &str = "nnts-axial-test/1";
pub const MOMENTS_FORMAT: &str = "nnts-axial-moments/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct ParamsDocument {
    pub format: String,
    pub M: usize,
    #[serde(default)]
    pub symmetric: bool,
    pub v: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vR: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

impl ParamsDocument {
    pub fn from_params(params: &FittedParams<f64>) -> Self {
        let general = params.general();
        let v = general.coefficients().iter().map(|c| [c.re, c.im]).collect();
        match params {
            FittedParams::General(p) => Self {
                format: PARAMS_FORMAT.into(),
                M: p.order(),
                symmetric: false,
                v,
                vR: None,
                mu: None,
            },
            FittedParams::Symmetric(s) => Self {
                format: PARAMS_FORMAT.into(),
                M: s.order(),
                symmetric: true,
                v,
                vR: Some(s.real_coefficients().to_vec()),
                mu: Some(s.mu()),
            },
        }
    }

    pub fn into_params(self) -> Result<FittedParams<f64>> {
        if self.format != PARAMS_FORMAT {
            return Err(Error::Document(format!("expected format {PARAMS_FORMAT:?}, got {:?}", self.format)));
        }
        if self.v.len() != self.M + 1 {
            return Err(Error::Document(format!("v has {} entries, expected M + 1 = {}", self.v.len(), self.M + 1)));
        }
        if self.symmetric {
            let (Some(real), Some(mu)) = (self.vR, self.mu) else {
                return Err(Error::Document("symmetric document needs vR and mu".into()));
            };
            if real.len() != self.M + 1 {
                return Err(Error::Document(format!("vR has {} entries, expected {}", real.len(), self.M + 1)));
            }
            Ok(FittedParams::Symmetric(SymmetricNntsAxialParams::from_loaded(real, mu)?))
        } else {
            if self.vR.is_some() || self.mu.is_some() {
                return Err(Error::Document("vR/mu given for a non-symmetric document".into()));
            }
            let coeffs = self.v.iter().map(|[re, im]| Complex::new(*re, *im)).collect();
            Ok(FittedParams::General(NntsAxialParams::from_loaded(coeffs)?))
        }
    }
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn save_params(params: &FittedParams<f64>) -> String {
    to_text(&ParamsDocument::from_params(params))
}

/// Parses a parameter document; small norm deviations are renormalized and the
/// phase re-canonicalized, larger ones rejected.
pub fn load_params(text: &str) -> Result<FittedParams<f64>> {
    let doc: ParamsDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    doc.into_params()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct FitDocument {
    pub format: String,
    pub family: String,
    pub M: usize,
    pub n: usize,
    pub params: ParamsDocument,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub free_params: usize,
    pub converged: bool,
    pub converged_starts: usize,
    pub starts: usize,
    pub iterations_total: usize,
    pub best_start_index: usize,
    pub stop_reason: StopReason,
    pub small_sample_warning: bool,
    pub density_underflow: bool,
    pub warnings: Vec<String>,
}

/// Human-readable warnings attached to a fit.
pub fn fit_warnings(fit: &FitResult<f64>) -> Vec<String> {
    let mut w = Vec::new();
    if fit.small_sample_warning {
        w.push(format!(
            "n = {} is below {}M = {}; the fit at M = {} may be unreliable",
            fit.n,
            SMALL_SAMPLE_FACTOR,
            SMALL_SAMPLE_FACTOR * fit.order,
            fit.order
        ));
    }
    if fit.density_underflow {
        w.push("fitted density underflows at some observation; log-likelihood clamped".into());
    }
    if !fit.converged {
        w.push("best start hit the iteration limit before converging".into());
    }
    w
}

impl FitDocument {
    pub fn from_fit(fit: &FitResult<f64>) -> Self {
        let (aic, bic) = information_criteria(fit.loglik, fit.free_params, fit.n).expect("fit has n >= 1");
        Self {
            format: FIT_FORMAT.into(),
            family: match fit.params {
                FittedParams::General(_) => "general".into(),
                FittedParams::Symmetric(_) => "symmetric".into(),
            },
            M: fit.order,
            n: fit.n,
            params: ParamsDocument::from_params(&fit.params),
            loglik: fit.loglik,
            aic,
            bic,
            free_params: fit.free_params,
            converged: fit.converged,
            converged_starts: fit.converged_starts,
            starts: fit.starts,
            iterations_total: fit.iterations_total,
            best_start_index: fit.best_start_index,
            stop_reason: fit.stop_reason,
            small_sample_warning: fit.small_sample_warning,
            density_underflow: fit.density_underflow,
            warnings: fit_warnings(fit),
        }
    }
}

pub fn fit_document(fit: &FitResult<f64>) -> String {
    to_text(&FitDocument::from_fit(fit))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct ScanDocument {
    pub format: String,
    pub n: usize,
    pub rows: Vec<ModelScanRow>,
    pub best_bic_M: usize,
    pub best_aic_M: usize,
}

pub fn scan_document(scan: &ModelScan) -> String {
    to_text(&ScanDocument {
        format: SCAN_FORMAT.into(),
        n: scan.n,
        rows: scan.rows.clone(),
        best_bic_M: scan.best_bic,
        best_aic_M: scan.best_aic,
    })
}

/// Fixed-width table with the best BIC and AIC entries starred.
pub fn scan_table(scan: &ModelScan) -> String {
    let mut out = format!("# n = {}\n{:>3}  {:>12}  {:>12}  {:>12}\n", scan.n, "M", "loglik", "BIC", "AIC");
    for r in &scan.rows {
        let star = |best: usize| if r.order == best { "*" } else { " " };
        out.push_str(&format!(
            "{:>3}  {:>12.2}  {:>11.2}{}  {:>11.2}{}",
            r.order,
            r.loglik,
            r.bic,
            star(scan.best_bic),
            r.aic,
            star(scan.best_aic)
        ));
        let trimmed = out.trim_end_matches(' ').len();
        out.truncate(trimmed);
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestDocument {
    pub format: String,
    pub kind: TestKind,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub log10_p: f64,
    pub p_value_method: String,
    pub restricted_loglik: f64,
    pub general_loglik: f64,
    pub restricted_fits: Vec<FitDocument>,
    pub general_fits: Vec<FitDocument>,
}

pub fn test_document(report: &LrtReport) -> String {
    let r = &report.result;
    to_text(&TestDocument {
        format: TEST_FORMAT.into(),
        kind: r.kind,
        statistic: r.statistic,
        df: r.df,
        p_value: r.p_value,
        log10_p: r.log10_p,
        p_value_method: "asymptotic_chi_square".into(),
        restricted_loglik: r.restricted_loglik,
        general_loglik: r.general_loglik,
        restricted_fits: report.restricted.iter().map(FitDocument::from_fit).collect(),
        general_fits: report.general.iter().map(FitDocument::from_fit).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEntry {
    pub r: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct MomentsDocument {
    pub format: String,
    pub M: usize,
    pub moments: Vec<MomentEntry>,
    pub mean_axis: Option<f64>,
    pub axial_resultant: f64,
    pub circular_variance: f64,
}

pub fn moments_document(params: &NntsAxialParams<f64>, max_r: usize) -> String {
    let stats = params.summary_stats();
    to_text(&MomentsDocument {
        format: MOMENTS_FORMAT.into(),
        M: params.order(),
        moments: (0..=max_r)
            .map(|r| {
                let m = params.trig_moment(r).value;
                MomentEntry { r, re: m.re, im: m.im }
            })
            .collect(),
        mean_axis: stats.mean_axis,
        axial_resultant: stats.axial_resultant,
        circular_variance: stats.circular_variance,
    })
}

// Structural validation against the grammar in the module docs.

fn obj<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Document(format!("{ctx}: expected an object")))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| Error::Document(format!("{ctx}: missing {key:?}")))
}

fn expect_keys(o: &Map<String, Value>, required: &[&str], optional: &[&str], ctx: &str) -> Result<()> {
    for k in required {
        field(o, k, ctx)?;
    }
    if let Some(extra) = o.keys().find(|k| !required.contains(&k.as_str()) && !optional.contains(&k.as_str())) {
        return Err(Error::Document(format!("{ctx}: unexpected member {extra:?}")));
    }
    Ok(())
}

fn num(o: &Map<String, Value>, key: &str, ctx: &str) -> Result<f64> {
    field(o, key, ctx)?
        .as_f64()
        .ok_or_else(|| Error::Document(format!("{ctx}: {key:?} must be a number")))
}

fn uint(o: &Map<String, Value>, key: &str, ctx: &str) -> Result<u64> {
    field(o, key, ctx)?
        .as_u64()
        .ok_or_else(|| Error::Document(format!("{ctx}: {key:?} must be a non-negative integer")))
}

fn boolean(o: &Map<String, Value>, key: &str, ctx: &str) -> Result<bool> {
    field(o, key, ctx)?
        .as_bool()
        .ok_or_else(|| Error::Document(format!("{ctx}: {key:?} must be a boolean")))
}

fn string<'a>(o: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a str> {
    field(o, key, ctx)?
        .as_str()
        .ok_or_else(|| Error::Document(format!("{ctx}: {key:?} must be a string")))
}

fn array<'a>(o: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Vec<Value>> {
    field(o, key, ctx)?
        .as_array()
        .ok_or_else(|| Error::Document(format!("{ctx}: {key:?} must be an array")))
}

fn check_format(o: &Map<String, Value>, expected: &str, ctx: &str) -> Result<()> {
    let f = string(o, "format", ctx)?;
    if f != expected {
        return Err(Error::Document(format!("{ctx}: format {f:?}, expected {expected:?}")));
    }
    Ok(())
}

fn validate_params(v: &Value) -> Result<()> {
    let ctx = "params";
    let o = obj(v, ctx)?;
    expect_keys(o, &["format", "M", "symmetric", "v"], &["vR", "mu"], ctx)?;
    check_format(o, PARAMS_FORMAT, ctx)?;
    let m = uint(o, "M", ctx)? as usize;
    let symmetric = boolean(o, "symmetric", ctx)?;
    let coeffs = array(o, "v", ctx)?;
    if coeffs.len() != m + 1 {
        return Err(Error::Document(format!("{ctx}: v must have M + 1 entries")));
    }
    for pair in coeffs {
        match pair.as_array() {
            Some(p) if p.len() == 2 && p.iter().all(Value::is_number) => {}
            _ => return Err(Error::Document(format!("{ctx}: v entries must be [re, im] pairs"))),
        }
    }
    if symmetric {
        let real = array(o, "vR", ctx)?;
        if real.len() != m + 1 || !real.iter().all(Value::is_number) {
            return Err(Error::Document(format!("{ctx}: vR must hold M + 1 numbers")));
        }
        num(o, "mu", ctx)?;
    } else if o.contains_key("vR") || o.contains_key("mu") {
        return Err(Error::Document(format!("{ctx}: vR/mu only allowed when symmetric")));
    }
    Ok(())
}

fn validate_fit(v: &Value) -> Result<()> {
    let ctx = "fit";
    let o = obj(v, ctx)?;
    expect_keys(
        o,
        &[
            "format", "family", "M", "n", "params", "loglik", "aic", "bic", "free_params", "converged",
            "converged_starts", "starts", "iterations_total", "best_start_index", "stop_reason",
            "small_sample_warning", "density_underflow", "warnings",
        ],
        &[],
        ctx,
    )?;
    check_format(o, FIT_FORMAT, ctx)?;
    let family = string(o, "family", ctx)?;
    if family != "general" && family != "symmetric" {
        return Err(Error::Document(format!("{ctx}: unknown family {family:?}")));
    }
    for k in ["M", "n", "free_params", "converged_starts", "starts", "iterations_total", "best_start_index"] {
        uint(o, k, ctx)?;
    }
    for k in ["loglik", "aic", "bic"] {
        num(o, k, ctx)?;
    }
    for k in ["converged", "small_sample_warning", "density_underflow"] {
        boolean(o, k, ctx)?;
    }
    string(o, "stop_reason", ctx)?;
    if !array(o, "warnings", ctx)?.iter().all(Value::is_string) {
        return Err(Error::Document(format!("{ctx}: warnings must be strings")));
    }
    validate_params(field(o, "params", ctx)?)
}

fn validate_scan(v: &Value) -> Result<()> {
    let ctx = "scan";
    let o = obj(v, ctx)?;
    expect_keys(o, &["format", "n", "rows", "best_bic_M", "best_aic_M"], &[], ctx)?;
    check_format(o, SCAN_FORMAT, ctx)?;
    uint(o, "n", ctx)?;
    uint(o, "best_bic_M", ctx)?;
    uint(o, "best_aic_M", ctx)?;
    for row in array(o, "rows", ctx)? {
        let r = obj(row, "scan row")?;
        expect_keys(r, &["M", "loglik", "aic", "bic", "free_params"], &[], "scan row")?;
        uint(r, "M", "scan row")?;
        uint(r, "free_params", "scan row")?;
        for k in ["loglik", "aic", "bic"] {
            num(r, k, "scan row")?;
        }
    }
    Ok(())
}

fn validate_test(v: &Value) -> Result<()> {
    let ctx = "test";
    let o = obj(v, ctx)?;
    expect_keys(
        o,
        &[
            "format", "kind", "statistic", "df", "p_value", "log10_p", "p_value_method", "restricted_loglik",
            "general_loglik", "restricted_fits", "general_fits",
        ],
        &[],
        ctx,
    )?;
    check_format(o, TEST_FORMAT, ctx)?;
    let kind = string(o, "kind", ctx)?;
    if !["uniformity", "symmetry", "nested", "homogeneity"].contains(&kind) {
        return Err(Error::Document(format!("{ctx}: unknown kind {kind:?}")));
    }
    uint(o, "df", ctx)?;
    for k in ["statistic", "p_value", "log10_p", "restricted_loglik", "general_loglik"] {
        num(o, k, ctx)?;
    }
    string(o, "p_value_method", ctx)?;
    for k in ["restricted_fits", "general_fits"] {
        for f in array(o, k, ctx)? {
            validate_fit(f)?;
        }
    }
    Ok(())
}

fn validate_moments(v: &Value) -> Result<()> {
    let ctx = "moments";
    let o = obj(v, ctx)?;
    expect_keys(
        o,
        &["format", "M", "moments", "mean_axis", "axial_resultant", "circular_variance"],
        &[],
        ctx,
    )?;
    check_format(o, MOMENTS_FORMAT, ctx)?;
    uint(o, "M", ctx)?;
    for m in array(o, "moments", ctx)? {
        let e = obj(m, "moment")?;
        expect_keys(e, &["r", "re", "im"], &[], "moment")?;
        uint(e, "r", "moment")?;
        num(e, "re", "moment")?;
        num(e, "im", "moment")?;
    }
    let axis = field(o, "mean_axis", ctx)?;
    if !(axis.is_null() || axis.is_number()) {
        return Err(Error::Document(format!("{ctx}: mean_axis must be a number or null")));
    }
    num(o, "axial_resultant", ctx)?;
    num(o, "circular_variance", ctx)?;
    Ok(())
}

/// Checks a document against the grammar above, dispatching on its `format`.
pub fn validate_document(text: &str) -> Result<()> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    let o = obj(&value, "document")?;
    match string(o, "format", "document")? {
        PARAMS_FORMAT => validate_params(&value),
        FIT_FORMAT => validate_fit(&value),
        SCAN_FORMAT => validate_scan(&value),
        TEST_FORMAT => validate_test(&value),
        MOMENTS_FORMAT => validate_moments(&value),
        other => Err(Error::Document(format!("unknown format {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_document_loads() {
        let text = r#"{"format": "nnts-axial-params/1", "M": 0, "v": [[1, 0]]}"#;
        let p = load_params(text).unwrap();
        assert_eq!(p, FittedParams::General(NntsAxialParams::uniform(0)));
    }

    #[test]
    fn short_norm_rejected() {
        let a = 0.9f64.sqrt();
        let text = format!(r#"{{"format": "nnts-axial-params/1", "M": 0, "v": [[{a}, 0]]}}"#);
        assert!(matches!(load_params(&text), Err(Error::Norm { .. })));
    }

    #[test]
    fn malformed_documents_rejected() {
        for text in [
            "not json",
            r#"{"format": "other", "M": 0, "v": [[1, 0]]}"#,
            r#"{"format": "nnts-axial-params/1", "M": 1, "v": [[1, 0]]}"#,
            r#"{"format": "nnts-axial-params/1", "M": 0, "v": [[1, 0]], "extra": 1}"#,
            r#"{"format": "nnts-axial-params/1", "M": 0, "symmetric": true, "v": [[1, 0]]}"#,
            r#"{"format": "nnts-axial-params/1", "M": 0, "v": [[1, 0]], "mu": 0.5}"#,
        ] {
            assert!(load_params(text).is_err(), "{text}");
        }
    }

    #[test]
    fn symmetric_document_round_trip() {
        let s = SymmetricNntsAxialParams::normalized(vec![0.8, 0.5, -0.2], 0.7).unwrap();
        let text = save_params(&FittedParams::Symmetric(s.clone()));
        validate_document(&text).unwrap();
        match load_params(&text).unwrap() {
            FittedParams::Symmetric(back) => assert_eq!(back, s),
            _ => panic!("expected symmetric"),
        }
    }

    #[test]
    fn validator_rejects_bad_shapes() {
        assert!(validate_document(r#"{"format": "nnts-axial-params/1", "M": 1, "symmetric": false, "v": [[1, 0]]}"#).is_err());
        assert!(validate_document(r#"{"format": "nope"}"#).is_err());
        assert!(validate_document("[]").is_err());
        validate_document(r#"{"format": "nnts-axial-params/1", "M": 0, "symmetric": false, "v": [[1, 0]]}"#).unwrap();
    }
}
