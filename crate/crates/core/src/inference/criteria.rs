use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{AxialSample, NntsAxialParams};
use crate::optimizer::{fit_general_with_starts, FitOptions, FitResult};

/// `(aic, bic) = (−2ℓ + 2p, −2ℓ + p·ln n)`.
pub fn information_criteria(loglik: f64, free_params: usize, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Usage("information criteria need n >= 1".into()));
    }
    let p = free_params as f64;
    Ok((-2.0 * loglik + 2.0 * p, -2.0 * loglik + p * (n as f64).ln()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelScanRow {
    #[serde(rename = "M")]
    pub order: usize,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub free_params: usize,
}

impl ModelScanRow {
    pub fn new(order: usize, loglik: f64, free_params: usize, n: usize) -> Result<Self> {
        let (aic, bic) = information_criteria(loglik, free_params, n)?;
        Ok(Self {
            order,
            loglik,
            aic,
            bic,
            free_params,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelScan {
    pub n: usize,
    pub rows: Vec<ModelScanRow>,
    pub best_bic: usize,
    pub best_aic: usize,
    /// One fit per row, empty when the scan was built from external logliks.
    pub fits: Vec<FitResult<f64>>,
}

/// Row index minimizing `key`; the first (smallest `M`) wins ties.
fn argmin_by(rows: &[ModelScanRow], key: impl Fn(&ModelScanRow) -> f64) -> usize {
    let mut best = 0;
    for (i, r) in rows.iter().enumerate().skip(1) {
        if key(r) < key(&rows[best]) {
            best = i;
        }
    }
    best
}

impl ModelScan {
    fn from_rows(n: usize, rows: Vec<ModelScanRow>, fits: Vec<FitResult<f64>>) -> Self {
        let best_bic = rows[argmin_by(&rows, |r| r.bic)].order;
        let best_aic = rows[argmin_by(&rows, |r| r.aic)].order;
        Self {
            n,
            rows,
            best_bic,
            best_aic,
            fits,
        }
    }

    /// Scan table from externally reported general-model log-likelihoods for `M = 0, 1, …`.
    pub fn from_logliks(logliks: &[f64], n: usize) -> Result<Self> {
        if logliks.is_empty() {
            return Err(Error::Usage("no log-likelihoods given".into()));
        }
        let rows = logliks
            .iter()
            .enumerate()
            .map(|(m, &l)| ModelScanRow::new(m, l, 2 * m, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rows(n, rows, Vec::new()))
    }
}

/// Fits `M = 0..=m_max`, each order warm-started from the previous optimum.
pub fn scan_models(sample: &AxialSample<f64>, m_max: usize, opts: &FitOptions) -> Result<ModelScan> {
    let mut fits: Vec<FitResult<f64>> = Vec::with_capacity(m_max + 1);
    let mut rows = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let warm: Vec<NntsAxialParams<f64>> = fits.last().map(|f| f.params.general()).into_iter().collect();
        let fit = fit_general_with_starts(sample, m, opts, &warm)?;
        rows.push(ModelScanRow::new(m, fit.loglik, fit.free_params, sample.len())?);
        fits.push(fit);
    }
    Ok(ModelScan::from_rows(sample.len(), rows, fits))
}
