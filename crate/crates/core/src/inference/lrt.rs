use serde::{Deserialize, Serialize};

use super::chi_square::chi_square_ln_sf;
use crate::error::{Error, Result};
use crate::family::{AxialSample, NntsAxialParams};
use crate::optimizer::{fit_general, fit_general_with_starts, fit_symmetric, FitOptions, FitResult};

/// Slack allowed when the general log-likelihood falls short of the restricted one.
pub const ORDER_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Uniformity,
    Symmetry,
    Nested,
    Homogeneity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrtResult {
    pub kind: TestKind,
    pub statistic: f64,
    pub df: usize,
    /// Asymptotic chi-square p-value.
    pub p_value: f64,
    /// `log10` of the p-value, finite even when `p_value` underflows.
    pub log10_p: f64,
    pub restricted_loglik: f64,
    pub general_loglik: f64,
}

/// `−2(ℓ_R − ℓ_G)` referred to `χ²_df`. Small negative statistics (within
/// [`ORDER_SLACK`]) are clamped to zero; larger ones mean the arguments are reversed.
pub fn lrt(restricted_loglik: f64, general_loglik: f64, df: usize, kind: TestKind) -> Result<LrtResult> {
    if !(restricted_loglik.is_finite() && general_loglik.is_finite()) {
        return Err(Error::Usage("log-likelihoods must be finite".into()));
    }
    if df == 0 {
        return Err(Error::Usage("likelihood ratio test needs df >= 1".into()));
    }
    if general_loglik < restricted_loglik - ORDER_SLACK {
        return Err(Error::Usage(format!(
            "general log-likelihood {general_loglik} is below restricted {restricted_loglik}; arguments reversed?"
        )));
    }
    let statistic = (-2.0 * (restricted_loglik - general_loglik)).max(0.0);
    let ln_p = chi_square_ln_sf(statistic, df)?;
    Ok(LrtResult {
        kind,
        statistic,
        df,
        p_value: ln_p.exp(),
        log10_p: ln_p / std::f64::consts::LN_10,
        restricted_loglik,
        general_loglik,
    })
}

/// A test result together with the fits that produced each side.
#[derive(Debug, Clone, PartialEq)]
pub struct LrtReport {
    pub result: LrtResult,
    pub restricted: Vec<FitResult<f64>>,
    pub general: Vec<FitResult<f64>>,
}

/// Uniform (`M = 0`) against the general model of order `m_alt`, `df = 2·m_alt`.
pub fn uniformity_test(sample: &AxialSample<f64>, m_alt: usize, opts: &FitOptions) -> Result<LrtReport> {
    if m_alt == 0 {
        return Err(Error::Usage("uniformity test needs an alternative order >= 1".into()));
    }
    let restricted = fit_general(sample, 0, opts)?;
    let general = fit_general_with_starts(sample, m_alt, opts, &[NntsAxialParams::uniform(0)])?;
    let result = lrt(restricted.loglik, general.loglik, 2 * m_alt, TestKind::Uniformity)?;
    Ok(LrtReport {
        result,
        restricted: vec![restricted],
        general: vec![general],
    })
}

/// Symmetric against general model at the same order, `df = M − 1`.
pub fn symmetry_test(sample: &AxialSample<f64>, m: usize, opts: &FitOptions) -> Result<LrtReport> {
    if m < 2 {
        return Err(Error::Usage(format!("symmetry test needs M >= 2 (df = M - 1 = 0 at M = {m})")));
    }
    let restricted = fit_symmetric(sample, m, opts)?;
    let general = fit_general_with_starts(sample, m, opts, &[restricted.params.general()])?;
    let result = lrt(restricted.loglik, general.loglik, m - 1, TestKind::Symmetry)?;
    Ok(LrtReport {
        result,
        restricted: vec![restricted],
        general: vec![general],
    })
}

/// General model of order `m_restricted` against order `m_general`, `df = 2(m_general − m_restricted)`.
pub fn nested_test(
    sample: &AxialSample<f64>,
    m_restricted: usize,
    m_general: usize,
    opts: &FitOptions,
) -> Result<LrtReport> {
    if m_restricted >= m_general {
        return Err(Error::Usage("nested test needs m_restricted < m_general".into()));
    }
    let restricted = fit_general(sample, m_restricted, opts)?;
    let general = fit_general_with_starts(sample, m_general, opts, &[restricted.params.general()])?;
    let result = lrt(restricted.loglik, general.loglik, 2 * (m_general - m_restricted), TestKind::Nested)?;
    Ok(LrtReport {
        result,
        restricted: vec![restricted],
        general: vec![general],
    })
}

/// `Σ 2M_k − 2M_pooled`, which must be at least one.
pub fn homogeneity_df(m_per: &[usize], m_pooled: usize) -> Result<usize> {
    let total: usize = m_per.iter().map(|m| 2 * m).sum();
    match total.checked_sub(2 * m_pooled) {
        Some(df) if df >= 1 => Ok(df),
        _ => Err(Error::Usage(format!(
            "homogeneity df = {total} - {} must be >= 1",
            2 * m_pooled
        ))),
    }
}

/// Homogeneity LRT from per-population and pooled log-likelihoods; the pooled
/// model is always the restricted side.
pub fn homogeneity_from_logliks(
    population_logliks: &[f64],
    m_per: &[usize],
    pooled_loglik: f64,
    m_pooled: usize,
) -> Result<LrtResult> {
    if population_logliks.len() < 2 {
        return Err(Error::Usage("homogeneity test needs at least two populations".into()));
    }
    if population_logliks.len() != m_per.len() {
        return Err(Error::Usage("one order per population is required".into()));
    }
    let df = homogeneity_df(m_per, m_pooled)?;
    let general: f64 = population_logliks.iter().sum();
    lrt(pooled_loglik, general, df, TestKind::Homogeneity)
}

/// Fits each population at its own order and the pooled data at `m_pooled`.
/// Populations fitted at an order of at least `m_pooled` also start from the pooled optimum.
pub fn homogeneity_test(
    samples: &[AxialSample<f64>],
    m_per: &[usize],
    m_pooled: usize,
    opts: &FitOptions,
) -> Result<LrtReport> {
    if samples.len() < 2 {
        return Err(Error::Usage("homogeneity test needs at least two populations".into()));
    }
    if samples.len() != m_per.len() {
        return Err(Error::Usage("one order per population is required".into()));
    }
    homogeneity_df(m_per, m_pooled)?;
    let pooled_sample = samples[0].concat(&samples[1..]);
    let pooled = fit_general(&pooled_sample, m_pooled, opts)?;
    let pooled_params = pooled.params.general();
    let mut general = Vec::with_capacity(samples.len());
    for (s, &m) in samples.iter().zip(m_per) {
        let warm = if m >= m_pooled { vec![pooled_params.clone()] } else { Vec::new() };
        general.push(fit_general_with_starts(s, m, opts, &warm)?);
    }
    let logliks: Vec<f64> = general.iter().map(|f| f.loglik).collect();
    let result = homogeneity_from_logliks(&logliks, m_per, pooled.loglik, m_pooled)?;
    Ok(LrtReport {
        result,
        restricted: vec![pooled],
        general,
    })
}
