//! Assouad spectrum: the closed form and a window-count estimate.
//!
//! The estimate counts cells of mesh `r ≈ R^(1/theta)` inside the windows
//! `[1/(n+1), 1/n] x [0, R]` with `R = 1/(n(n+1))`, where the popcorn set is
//! locally densest, and regresses `log N` on `(1/theta - 1) log(1/R)`.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use super::regression::ols;
use crate::covering::{estimate_cost, grid_count_window, CountStrategy, Region};
use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;
use crate::numtheory::check_open_unit;
use crate::par;

/// Default ceiling on the estimated work of a single window count.
pub const SPECTRUM_COST_GUARD: f64 = 1e9;

/// `(4/3 - theta) / (1 - theta)` below `2/3`, and `2` from there on.
pub fn theoretical_spectrum(theta: ReducedFraction) -> Result<ReducedFraction> {
    check_open_unit(theta, "theta")?;
    let (a, b) = (theta.num(), theta.den());
    // theta < 2/3  <=>  3a < 2b
    if 3 * a as u128 >= 2 * b as u128 {
        return ReducedFraction::new(2, 1);
    }
    // (4b - 3a) / (3 (b - a))
    ReducedFraction::new(4 * b - 3 * a, 3 * (b - a))
}

/// Window side `R_n = 1/(n(n+1))`.
pub fn window_side(n: u64) -> Result<ReducedFraction> {
    let d = n
        .checked_mul(n + 1)
        .filter(|&d| d >= 2)
        .ok_or_else(|| PopcornError::Range {
            what: "window index",
            detail: format!("n = {n}"),
        })?;
    ReducedFraction::new(1, d)
}

/// The window `C(x_n, R_n) = [1/(n+1), 1/n] x [0, 1/(n(n+1))]`.
pub fn spectrum_window(n: u64) -> Result<Region> {
    let side = window_side(n)?;
    Region::window(ReducedFraction::recip_of(n + 1), ReducedFraction::ZERO, side)
}

/// Cell size for window `n`: `R_n^(1/theta)` exactly when `1/theta` is an
/// integer, otherwise `1 / round(N^(1/theta))` with `N = n(n+1)`, the
/// rounding done in exact integer arithmetic.
pub fn spectrum_mesh(theta: ReducedFraction, n: u64) -> Result<ReducedFraction> {
    check_open_unit(theta, "theta")?;
    let big_n = BigUint::from(window_side(n)?.den());
    let (a, b) = (theta.num() as u32, theta.den() as u32);
    if theta.num() > u32::MAX as u64 || theta.den() > u32::MAX as u64 {
        return Err(PopcornError::Range {
            what: "theta",
            detail: format!("{theta} has parts beyond 32 bits"),
        });
    }
    // N^(b/a)
    let power: BigUint = Pow::pow(&big_n, b);
    let den = if a == 1 {
        power
    } else {
        let m = power.nth_root(a);
        // round up iff N^(b/a) >= m + 1/2  <=>  2^a N^b >= (2m+1)^a
        let two_m1: BigUint = &m * 2u32 + 1u32;
        let lhs: BigUint = Pow::pow(BigUint::from(2u32), a) * &power;
        if lhs >= Pow::pow(&two_m1, a) {
            m + BigUint::one()
        } else {
            m
        }
    };
    let den = u64::try_from(&den).map_err(|_| PopcornError::MeshTooFine {
        delta: format!("1/{den}"),
    })?;
    ReducedFraction::new(1, den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSample {
    pub n: u64,
    pub side: ReducedFraction,
    pub mesh: ReducedFraction,
    pub count: u64,
    pub q_max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub theta: ReducedFraction,
    pub samples: Vec<WindowSample>,
    pub fitted_s: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub pair_slopes: Vec<f64>,
    /// Per-window exponents `log N / ((1/theta - 1) log(1/R))`.
    pub point_slopes: Vec<f64>,
}

/// Regression abscissa `(1/theta - 1) log(1/R)`.
fn abscissa(theta: ReducedFraction, side: ReducedFraction) -> f64 {
    (1.0 / theta.to_f64() - 1.0) * (side.den() as f64 / side.num() as f64).ln()
}

/// Fits `s` from window samples. Samples are sorted by `n` first so the
/// result does not depend on their order.
pub fn fit_spectrum(theta: ReducedFraction, samples: &[WindowSample]) -> Result<SpectrumPoint> {
    check_open_unit(theta, "theta")?;
    let mut samples = samples.to_vec();
    samples.sort_by_key(|s| s.n);
    if let Some(s) = samples.iter().find(|s| s.count == 0) {
        return Err(PopcornError::Precondition(format!("window n={} has count 0", s.n)));
    }
    let xs: Vec<f64> = samples.iter().map(|s| abscissa(theta, s.side)).collect();
    let ys: Vec<f64> = samples.iter().map(|s| (s.count as f64).ln()).collect();
    let fit = ols(&xs, &ys)?;
    let point_slopes = xs.iter().zip(&ys).map(|(x, y)| y / x).collect();
    Ok(SpectrumPoint {
        theta,
        samples,
        fitted_s: fit.slope,
        stderr: fit.stderr,
        intercept: fit.intercept,
        pair_slopes: fit.pair_slopes,
        point_slopes,
    })
}

/// Window counts for `n` in `n_lo..=n_hi` and the fitted exponent.
pub fn estimate_spectrum(theta: ReducedFraction, n_lo: u64, n_hi: u64, guard: f64) -> Result<SpectrumPoint> {
    check_open_unit(theta, "theta")?;
    if n_lo < 1 || n_hi < n_lo {
        return Err(PopcornError::Range {
            what: "window range",
            detail: format!("[{n_lo}, {n_hi}]"),
        });
    }
    let mut plan = Vec::new();
    for n in n_lo..=n_hi {
        let region = spectrum_window(n)?;
        let mesh = spectrum_mesh(theta, n)?;
        let cost = estimate_cost(region, mesh, CountStrategy::Auto)?;
        if cost > guard {
            return Err(PopcornError::CostGuard {
                parameter: format!("theta={theta}, n={n}"),
                cost: cost as u64,
                ceiling: guard as u64,
            });
        }
        plan.push((n, region, mesh));
    }
    let samples = par::map_slice(&plan, |&(n, region, mesh)| {
        grid_count_window(region, mesh).map(|r| WindowSample {
            n,
            side: window_side(n).expect("validated"),
            mesh,
            count: r.count,
            q_max: r.q_max,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    fit_spectrum(theta, &samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: u64, d: u64) -> ReducedFraction {
        ReducedFraction::new(n, d).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(theoretical_spectrum(frac(1, 2)).unwrap(), frac(5, 3));
        assert_eq!(theoretical_spectrum(frac(3, 4)).unwrap(), frac(2, 1));
        assert_eq!(theoretical_spectrum(frac(2, 3)).unwrap(), frac(2, 1));
        assert_eq!(theoretical_spectrum(frac(1, 1000)).unwrap(), frac(3997, 2997));
        assert!(theoretical_spectrum(ReducedFraction::ONE).is_err());
        assert!(theoretical_spectrum(ReducedFraction::ZERO).is_err());
    }

    #[test]
    fn closed_form_is_monotone_and_continuous() {
        let mut prev = frac(4, 3);
        for k in 1..1000u64 {
            let s = theoretical_spectrum(frac(k, 1000)).unwrap();
            assert!(s >= prev);
            prev = s;
        }
        // just below 2/3 the value approaches 2
        let s = theoretical_spectrum(frac(666_666, 1_000_000)).unwrap().to_f64();
        assert!((s - 2.0).abs() < 1e-5);
    }

    #[test]
    fn meshes() {
        assert_eq!(spectrum_mesh(frac(1, 2), 2).unwrap(), frac(1, 36));
        assert_eq!(spectrum_mesh(frac(1, 3), 2).unwrap(), frac(1, 216));
        // 12^(5/2) = 498.83 rounds up, 6^(5/4) = 9.39 rounds down
        assert_eq!(spectrum_mesh(frac(2, 5), 3).unwrap(), frac(1, 499));
        assert_eq!(spectrum_mesh(frac(4, 5), 2).unwrap(), frac(1, 9));
        for (theta, n) in [(frac(3, 10), 7u64), (frac(7, 10), 20), (frac(4, 5), 30)] {
            let want = ((n * (n + 1)) as f64).powf(1.0 / theta.to_f64()).round() as u64;
            assert_eq!(spectrum_mesh(theta, n).unwrap().den(), want);
        }
    }

    #[test]
    fn window_family() {
        assert_eq!(
            spectrum_window(2).unwrap(),
            Region::Window {
                x0: frac(1, 3),
                y0: ReducedFraction::ZERO,
                side: frac(1, 6)
            }
        );
    }
}
