//! Log-log least squares for scaling exponents.

use serde::{Deserialize, Serialize};

use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;

/// Default lower bound on consecutive mesh ratios before a warning is raised.
pub const DEFAULT_MIN_MESH_RATIO: (u64, u64) = (1, 16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingSample {
    pub mesh: ReducedFraction,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero when the fit is exact.
    pub stderr: f64,
    pub residuals: Vec<f64>,
    /// Slopes between consecutive points.
    pub pair_slopes: Vec<f64>,
}

/// Ordinary least squares of `ys` on `xs` with an intercept.
pub fn ols(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len();
    if n != ys.len() {
        return Err(PopcornError::Precondition(format!(
            "{n} abscissae but {} ordinates",
            ys.len()
        )));
    }
    if n < 3 {
        return Err(PopcornError::InsufficientData { needed: 3, got: n });
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(PopcornError::Precondition("all abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    let pair_slopes = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
        .collect();
    Ok(LinearFit {
        slope,
        intercept,
        stderr,
        residuals,
        pair_slopes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxFit {
    pub fit: LinearFit,
    /// Consecutive meshes whose ratio fell below the configured bound.
    pub warnings: Vec<String>,
}

impl BoxFit {
    pub fn slope(&self) -> f64 {
        self.fit.slope
    }
}

/// Slope of `log(count)` against `log(1/mesh)`.
pub fn fit_box_dimension(samples: &[ScalingSample]) -> Result<BoxFit> {
    let (a, b) = DEFAULT_MIN_MESH_RATIO;
    fit_box_dimension_with(samples, ReducedFraction::new(a, b)?)
}

/// As [`fit_box_dimension`], warning when `mesh[i+1] / mesh[i] < min_ratio`.
pub fn fit_box_dimension_with(samples: &[ScalingSample], min_ratio: ReducedFraction) -> Result<BoxFit> {
    if samples.len() < 3 {
        return Err(PopcornError::InsufficientData {
            needed: 3,
            got: samples.len(),
        });
    }
    if let Some(s) = samples.iter().find(|s| s.count == 0 || s.mesh.is_zero()) {
        return Err(PopcornError::Precondition(format!(
            "sample at mesh {} has count {}",
            s.mesh, s.count
        )));
    }
    let mut warnings = Vec::new();
    for w in samples.windows(2) {
        let (prev, next) = (w[0].mesh, w[1].mesh);
        if next >= prev {
            return Err(PopcornError::Precondition(format!(
                "meshes must strictly decrease, got {prev} then {next}"
            )));
        }
        // next / prev >= min_ratio, cross-multiplied
        let lhs = next.num() as u128 * prev.den() as u128 * min_ratio.den() as u128;
        let rhs = min_ratio.num() as u128 * next.den() as u128 * prev.num() as u128;
        if lhs < rhs {
            warnings.push(format!(
                "mesh ratio {next} / {prev} is below {min_ratio}; the sequence criterion may not apply"
            ));
        }
    }
    let xs: Vec<f64> = samples.iter().map(|s| -s.mesh.to_f64().ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| (s.count as f64).ln()).collect();
    Ok(BoxFit {
        fit: ols(&xs, &ys)?,
        warnings,
    })
}
