//! Reference counts by plain enumeration into a hash set. Deliberately naive:
//! every point is placed with its own divisions so that nothing is shared
//! with the fast counters.

use std::collections::HashSet;

use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;
use crate::numtheory::{gcd_u64, totient_sieve};

/// Expected number of points the oracle may place.
pub const ORACLE_GUARD: f64 = 1e7;

pub(crate) struct OracleWindow {
    pub x0: ReducedFraction,
    pub y0: ReducedFraction,
    pub side: ReducedFraction,
    pub mesh: ReducedFraction,
    /// Only this row of the grid is counted, when set.
    pub only_row: Option<u64>,
}

fn floor_div(n: i128, d: i128) -> i128 {
    n.div_euclid(d)
}

fn as_i(f: ReducedFraction) -> (i128, i128) {
    (f.num() as i128, f.den() as i128)
}

pub(crate) fn count(w: &OracleWindow, q_max: u64) -> Result<u64> {
    let (x0n, x0d) = as_i(w.x0);
    let (y0n, y0d) = as_i(w.y0);
    let (sn, sd) = as_i(w.side);
    let (rn, rd) = as_i(w.mesh);
    let ncols = (sn * rd + sd * rn - 1) / (sd * rn);
    let last = ncols - 1;
    // closed window: x0 <= m/q <= x0 + side
    let m_lo = |q: i128| ((x0n * q + x0d - 1) / x0d).max(1);
    let m_hi = |q: i128| ((x0n * sd + sn * x0d) * q / (x0d * sd)).min(q - 1);

    if q_max >= 2 {
        let phi = totient_sieve(q_max)?;
        let expected: f64 = (2..=q_max)
            .map(|q| {
                let span = (m_hi(q as i128) - m_lo(q as i128) + 1).max(0) as f64;
                phi.get(q).unwrap() as f64 * span / (q - 1) as f64
            })
            .sum();
        if expected > ORACLE_GUARD {
            return Err(PopcornError::OracleTooLarge {
                points: expected as u64,
                guard: ORACLE_GUARD as u64,
            });
        }
    }

    let mut cells: HashSet<(i128, i128)> = HashSet::new();
    if w.y0.is_zero() && w.only_row.is_none_or(|j| j == 0) {
        for i in 0..ncols {
            cells.insert((i, 0));
        }
    }
    for q in 2..=q_max as i128 {
        // 1/q must lie in [y0, y0 + side]
        if y0n * q > y0d || (y0n * sd + sn * y0d) * q < y0d * sd {
            continue;
        }
        for m in m_lo(q)..=m_hi(q) {
            if gcd_u64(m as u64, q as u64) != 1 {
                continue;
            }
            // (m/q - x0) / r
            let col = floor_div((m * x0d - x0n * q) * rd, q * x0d * rn).min(last);
            let row = floor_div((y0d - y0n * q) * rd, q * y0d * rn).min(last);
            if w.only_row.is_none_or(|j| j as i128 == row) {
                cells.insert((col, row));
            }
        }
    }
    Ok(cells.len() as u64)
}
