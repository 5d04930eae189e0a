use crate::error::{Error, Result};
use crate::family::{AxialCdf, AxialDensity, NntsAxialParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub theta: f64,
    pub density: f64,
    pub cdf: f64,
}

/// Density and CDF on the grid `θ_j = jπ/n`, `j = 0..n` (π itself excluded).
pub fn density_grid(params: &NntsAxialParams<f64>, n_points: usize) -> Result<Vec<GridRow>> {
    if n_points < 2 {
        return Err(Error::Usage("density grid needs at least 2 points".into()));
    }
    let cdf = AxialCdf::new(params);
    let step = std::f64::consts::PI / n_points as f64;
    (0..n_points)
        .map(|j| {
            let theta = j as f64 * step;
            Ok(GridRow {
                theta,
                density: params.density(theta),
                cdf: cdf.cdf(theta)?,
            })
        })
        .collect()
}

/// Comma-separated grid with header `theta,density,cdf`.
pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut out = String::from("theta,density,cdf\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.theta, r.density, r.cdf));
    }
    out
}
