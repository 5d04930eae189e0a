use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{AngleUnit, AxialSample, AxialTransform};
use crate::scalar::reduce_mod;

/// How raw measurements map onto the axial support `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Reduce every measurement mod `π` (e.g. directions on `[0, 2π)` treated as axes).
    AxialModPi,
    /// Leaf inclination on `[0, π/2]`: doubled, then reduced mod `π`.
    LeafDouble,
    /// Values must already lie in `[0, π)`.
    Raw0Pi,
}

impl Convention {
    fn transform(self) -> AxialTransform {
        match self {
            Convention::AxialModPi => AxialTransform::ModPi,
            Convention::LeafDouble => AxialTransform::DoubledLeaf,
            Convention::Raw0Pi => AxialTransform::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub unit: AngleUnit,
    pub convention: Convention,
}

impl DatasetSpec {
    pub fn new(path: impl AsRef<Path>, unit: AngleUnit, convention: Convention) -> Self {
        Self {
            path: path.as_ref().to_path_buf(),
            unit,
            convention,
        }
    }
}

/// Parses an angle file: one decimal number per line, blank lines and lines
/// starting with `#` ignored. Order is preserved.
pub fn parse_angles(text: &str, unit: AngleUnit, convention: Convention) -> Result<AxialSample<f64>> {
    let pi = std::f64::consts::PI;
    let mut angles = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = idx + 1;
        let value: f64 = line.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("not a number: {line:?}"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("not a finite number: {line:?}"),
            });
        }
        let rad = match unit {
            AngleUnit::Radians => value,
            AngleUnit::Degrees => value.to_radians(),
        };
        let theta = match convention {
            Convention::AxialModPi => reduce_mod(rad, pi),
            Convention::LeafDouble => reduce_mod(2.0 * rad, pi),
            Convention::Raw0Pi => {
                if !(0.0..pi).contains(&rad) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("{value} is outside [0, π) under the raw_0_pi convention"),
                    });
                }
                rad
            }
        };
        angles.push(theta);
    }
    if angles.is_empty() {
        return Err(Error::Data("angle file contains no observations".into()));
    }
    AxialSample::new(angles, unit, convention.transform())
}

pub fn load_angles(spec: &DatasetSpec) -> Result<AxialSample<f64>> {
    let text = std::fs::read_to_string(&spec.path)?;
    parse_angles(&text, spec.unit, spec.convention)
}

/// Angle file readable by [`parse_angles`] (radians, `raw_0_pi`).
pub fn format_angles(sample: &AxialSample<f64>, header: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        for line in h.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    for a in sample.angles() {
        out.push_str(&format!("{a}\n"));
    }
    out
}
