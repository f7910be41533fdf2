//! Geometry of an `r`-mesh grid laid over a square window `C(x, R)`.
//!
//! Cells are `[x0 + i r, x0 + (i+1) r) x [y0 + j r, y0 + (j+1) r)`; the last
//! column and row are closed on the far side and clipped at `x0 + R` /
//! `y0 + R`, so the window is tiled exactly by `ceil(R / r)^2` cells.
//! A popcorn point `(m/q, 1/q)` lands in row `j` iff `q` lies in the row's
//! level range, so each row is a question about denominators only.

use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;

/// Exact rational with `i128` parts, denominator positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Q {
    pub n: i128,
    pub d: i128,
}

/// What a grid row contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowLevels {
    /// The row touches `y = 0`: every column is met by the base segment.
    Base,
    /// Points with `qa <= q <= qb`.
    Levels {
        qa: u64,
        qb: u64,
    },
    Empty,
}

#[derive(Debug, Clone)]
pub(crate) struct WindowGrid {
    x0: (u128, u128),
    y0: (u128, u128),
    side: (u128, u128),
    mesh: (u128, u128),
    /// `x0 + R`
    x_end: (u128, u128),
    ncols: u64,
    /// Largest level that can appear in a non-base row.
    q_top: u64,
    probe_ok: bool,
}

fn bits(x: u128) -> u32 {
    128 - x.leading_zeros()
}

/// True when the product of `factors` stays below `2^limit`.
fn product_below(factors: &[u128], limit: u32) -> bool {
    factors
        .iter()
        .try_fold(1u128, |acc, &f| acc.checked_mul(f.max(1)))
        .is_some_and(|p| p < 1u128 << limit)
}

fn pair(f: ReducedFraction) -> (u128, u128) {
    (f.num() as u128, f.den() as u128)
}

impl WindowGrid {
    pub fn new(x0: ReducedFraction, y0: ReducedFraction, side: ReducedFraction, mesh: ReducedFraction) -> Result<Self> {
        if mesh.is_zero() || mesh >= side {
            return Err(PopcornError::ScaleOrder {
                r: mesh.to_string(),
                big_r: side.to_string(),
            });
        }
        let (a0, b0) = pair(x0);
        let (rn_, rd_) = pair(side);
        let x_end_n = a0 * rd_ + rn_ * b0;
        let x_end_d = b0 * rd_;
        if x_end_n > x_end_d {
            return Err(PopcornError::InvalidRegion(format!(
                "window [{x0}, {x0} + {side}] leaves [0, 1]"
            )));
        }
        let (mn, md) = pair(mesh);
        let ratio_n = rn_ * md;
        let ratio_d = rd_ * mn;
        let ncols = ratio_n.div_ceil(ratio_d);
        let ncols = u64::try_from(ncols).map_err(|_| PopcornError::Range {
            what: "grid size",
            detail: format!("R/r = {side}/{mesh} is too large"),
        })?;
        let q_top = if y0.is_zero() {
            mesh.floor_recip().expect("mesh > 0")
        } else {
            y0.floor_recip().expect("y0 > 0")
        };
        let g = crate::numtheory::gcd_u128(x_end_n, x_end_d);
        let grid = Self {
            x0: (a0, b0),
            y0: pair(y0),
            side: pair(side),
            mesh: (mn, md),
            x_end: (x_end_n / g, x_end_d / g),
            ncols,
            q_top,
            probe_ok: false,
        };
        // Column positions carry denominator b0*md; enumeration multiplies
        // that by q and a mesh numerator.
        let q1 = q_top as u128 + 1;
        let col_ok = product_below(&[b0, md, mn, q1, q1, ncols as u128], 124);
        let row_ok = product_below(&[grid.y0.1, md, mn, ncols as u128, grid.y0.0, 4], 124);
        if !col_ok || !row_ok {
            return Err(PopcornError::Range {
                what: "grid arithmetic",
                detail: format!("window {x0},{y0} size {side} mesh {mesh} needs more than 128-bit intermediates"),
            });
        }
        let probe_bits = bits(b0 * md) + 2 * bits(2 * q_top as u128 + 2) + 6;
        Ok(Self {
            probe_ok: probe_bits <= 126,
            ..grid
        })
    }

    pub fn ncols(&self) -> u64 {
        self.ncols
    }

    pub fn q_top(&self) -> u64 {
        self.q_top
    }

    pub fn probe_ok(&self) -> bool {
        self.probe_ok
    }

    pub fn side_f64(&self) -> f64 {
        self.side.0 as f64 / self.side.1 as f64
    }

    /// `y0 + j r` as a fraction.
    fn row_floor(&self, j: u64) -> (u128, u128) {
        let (c0, d0) = self.y0;
        let (mn, md) = self.mesh;
        (c0 * md + j as u128 * mn * d0, d0 * md)
    }

    /// Level range of row `j`.
    pub fn row_levels(&self, j: u64) -> RowLevels {
        debug_assert!(j < self.ncols);
        let (ln, ld) = self.row_floor(j);
        if ln == 0 {
            return RowLevels::Base;
        }
        // 1/q >= y0 + j r
        let qb = (ld / ln) as u64;
        let qa = if j + 1 < self.ncols {
            // 1/q < y0 + (j+1) r
            let (un, ud) = self.row_floor(j + 1);
            (ud / un) as u64 + 1
        } else {
            // 1/q <= y0 + R, closed top edge
            let (c0, d0) = self.y0;
            let (sn, sd) = self.side;
            let (un, ud) = (c0 * sd + sn * d0, d0 * sd);
            ud.div_ceil(un) as u64
        };
        let qa = qa.max(2);
        if qa > qb {
            RowLevels::Empty
        } else {
            RowLevels::Levels { qa, qb }
        }
    }

    /// Rows that can hold a point: those whose floor is at most 1/2.
    pub fn live_rows(&self) -> u64 {
        // y0 + j r <= 1/2  <=>  j <= (1/2 - y0) / r
        let (c0, d0) = self.y0;
        let (mn, md) = self.mesh;
        if 2 * c0 > d0 {
            return 0;
        }
        let num = (d0 - 2 * c0) * md;
        let den = 2 * d0 * mn;
        ((num / den) as u64 + 1).min(self.ncols)
    }

    /// Numerators `m` with `x0 <= m/q <= x0 + R` and `1 <= m <= q - 1`.
    pub fn m_range(&self, q: u64) -> Option<(u64, u64)> {
        let q128 = q as u128;
        let (a0, b0) = self.x0;
        let lo = (a0 * q128).div_ceil(b0).max(1);
        let hi = (self.x_end.0 * q128 / self.x_end.1).min(q128 - 1);
        (lo <= hi).then_some((lo as u64, hi as u64))
    }

    /// Incremental column walker for level `q` starting at numerator `m`.
    pub fn column_walker(&self, q: u64, m: u64) -> ColumnWalker {
        let (a0, b0) = self.x0;
        let (mn, md) = self.mesh;
        let q = q as u128;
        // (m/q - x0) / r = (m b0 - a0 q) md / (q b0 mn)
        let num = (m as u128 * b0 - a0 * q) * md;
        let den = q * b0 * mn;
        let step = b0 * md;
        ColumnWalker {
            col: num / den,
            rem: num % den,
            den,
            step_q: step / den,
            step_r: step % den,
            last: self.ncols as u128 - 1,
        }
    }

    /// Column `[u, v)` (closed at `v` for the last column) as exact fractions.
    pub fn column_bounds(&self, i: u64) -> (Q, Q, bool) {
        let (a0, b0) = self.x0;
        let (mn, md) = self.mesh;
        let d = (b0 * md) as i128;
        let u = Q {
            n: (a0 * md + i as u128 * mn * b0) as i128,
            d,
        };
        if i + 1 < self.ncols {
            let v = Q {
                n: (a0 * md + (i as u128 + 1) * mn * b0) as i128,
                d,
            };
            (u, v, false)
        } else {
            let v = Q {
                n: self.x_end.0 as i128,
                d: self.x_end.1 as i128,
            };
            (u, v, true)
        }
    }

    #[cfg(test)]
    #[cfg(test)]
    /// Cell column of `x = m/q` if it lies in the window's x-range.
    pub fn column_of(&self, m: u64, q: u64) -> Option<u64> {
        let (a0, b0) = self.x0;
        let m128 = m as u128;
        let q128 = q as u128;
        if m128 * b0 < a0 * q128 || m128 * self.x_end.1 > self.x_end.0 * q128 {
            return None;
        }
        Some(self.column_walker(q, m).current())
    }

    /// Points visited by enumerating every level in `qa..=qb` (upper bound).
    pub fn enumeration_cost(&self, qa: u64, qb: u64) -> f64 {
        let levels = (qb - qa + 1) as f64;
        let mid = (qa as f64 + qb as f64) / 2.0;
        levels * (1.0 + mid * self.side_f64())
    }
}

/// Walks `floor((m/q - x0) / r)` as `m` increases by one, without division.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ColumnWalker {
    col: u128,
    rem: u128,
    den: u128,
    step_q: u128,
    step_r: u128,
    last: u128,
}

impl ColumnWalker {
    #[inline]
    pub fn current(&self) -> u64 {
        self.col.min(self.last) as u64
    }

    #[inline]
    pub fn advance(&mut self) {
        self.col += self.step_q;
        self.rem += self.step_r;
        if self.rem >= self.den {
            self.rem -= self.den;
            self.col += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: u64, d: u64) -> ReducedFraction {
        ReducedFraction::new(n, d).unwrap()
    }

    fn unit(mesh: ReducedFraction) -> WindowGrid {
        WindowGrid::new(ReducedFraction::ZERO, ReducedFraction::ZERO, ReducedFraction::ONE, mesh).unwrap()
    }

    #[test]
    fn unit_grid_rows_match_strip_indices() {
        let g = unit(frac(1, 100));
        assert_eq!(g.ncols(), 100);
        assert_eq!(g.row_levels(0), RowLevels::Base);
        assert_eq!(g.row_levels(1), RowLevels::Levels { qa: 51, qb: 100 });
        assert_eq!(g.row_levels(3), RowLevels::Levels { qa: 26, qb: 33 });
        assert_eq!(g.row_levels(50), RowLevels::Levels { qa: 2, qb: 2 });
        assert_eq!(g.row_levels(60), RowLevels::Empty);
        assert_eq!(g.live_rows(), 51);
    }

    #[test]
    fn partial_last_cell_absorbs_the_edge() {
        // 2/5 mesh: rows [0,2/5), [2/5,4/5), [4/5,1]
        let g = unit(frac(2, 5));
        assert_eq!(g.ncols(), 3);
        assert_eq!(g.row_levels(1), RowLevels::Levels { qa: 2, qb: 2 });
        assert_eq!(g.column_of(1, 2), Some(1));
        let (u, v, closed) = g.column_bounds(2);
        assert_eq!((u.n * v.d, v.n * u.d), (4 * v.d, u.d));
        assert!(closed);
    }

    #[test]
    fn window_columns_are_anchored_at_the_corner() {
        let g = WindowGrid::new(frac(1, 3), ReducedFraction::ZERO, frac(1, 6), frac(1, 12)).unwrap();
        assert_eq!(g.ncols(), 2);
        assert_eq!(g.column_of(1, 3), Some(0));
        assert_eq!(g.column_of(5, 12), Some(1));
        // right edge 1/2 belongs to the last column
        assert_eq!(g.column_of(1, 2), Some(1));
        assert_eq!(g.column_of(1, 4), None);
        assert_eq!(g.m_range(12), Some((4, 6)));
    }

    #[test]
    fn walker_matches_division() {
        let g = WindowGrid::new(frac(1, 7), ReducedFraction::ZERO, frac(3, 7), frac(1, 97)).unwrap();
        for q in [11u64, 50, 97, 300] {
            let Some((lo, hi)) = g.m_range(q) else { continue };
            let mut w = g.column_walker(q, lo);
            for m in lo..=hi {
                assert_eq!(Some(w.current()), g.column_of(m, q));
                w.advance();
            }
        }
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(WindowGrid::new(frac(1, 2), ReducedFraction::ZERO, frac(3, 4), frac(1, 8)).is_err());
        assert!(WindowGrid::new(ReducedFraction::ZERO, ReducedFraction::ZERO, frac(1, 8), frac(1, 8)).is_err());
    }
}
