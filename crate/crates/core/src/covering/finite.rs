//! Cover and packing counts for finite point lists.

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;
use crate::popcorn::PopcornPoint;

fn check_scale(r: ReducedFraction) -> Result<()> {
    if r.is_zero() {
        return Err(PopcornError::Range {
            what: "scale",
            detail: "r must be positive".into(),
        });
    }
    Ok(())
}

fn cell(x: ReducedFraction, r: ReducedFraction) -> u64 {
    // floor(x / r)
    ((x.num() as u128 * r.den() as u128) / (x.den() as u128 * r.num() as u128)) as u64
}

/// Distinct origin-anchored `r`-grid cells `[i r, (i+1) r) x [j r, (j+1) r)`
/// meeting the points.
pub fn grid_count_points(points: &[PopcornPoint], r: ReducedFraction) -> Result<u64> {
    check_scale(r)?;
    let cells: HashSet<(u64, u64)> = points.iter().map(|p| (cell(p.x, r), cell(p.y, r))).collect();
    Ok(cells.len() as u64)
}

fn dist2(a: &PopcornPoint, b: &PopcornPoint) -> BigRational {
    let dx = a.x.to_big() - b.x.to_big();
    let dy = a.y.to_big() - b.y.to_big();
    &dx * &dx + &dy * &dy
}

/// Greedy `r`-separated subset in input order: a point is kept when it is at
/// Euclidean distance greater than `r` from every point kept so far.
pub fn separated_count(points: &[PopcornPoint], r: ReducedFraction) -> Result<u64> {
    check_scale(r)?;
    let r2 = r.to_big() * r.to_big();
    debug_assert!(!r2.is_zero());
    // Kept points bucketed by r-cell; a conflict can only sit in the 3x3
    // neighbourhood.
    let mut kept: HashMap<(i64, i64), Vec<PopcornPoint>> = HashMap::new();
    let mut count = 0;
    for p in points {
        let (cx, cy) = (cell(p.x, r) as i64, cell(p.y, r) as i64);
        let clash = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                kept.get(&(cx + dx, cy + dy))
                    .is_some_and(|v| v.iter().any(|s| dist2(p, s) <= r2))
            })
        });
        if !clash {
            kept.entry((cx, cy)).or_default().push(*p);
            count += 1;
        }
    }
    Ok(count)
}
