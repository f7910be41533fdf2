//! Points of the popcorn graph and full popcorn set, enumerated either by
//! denominator level (the horizontal view) or along the lines `y = x / l`
//! (the collapsed view).

use serde::{Deserialize, Serialize};

use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;
use crate::numtheory::{check_open_unit, coprime_residues, gcd_u64, strip_index_l};

/// A point of the full popcorn set: `(m/q, 1/q)` with `gcd(m, q) = 1` and
/// `1 <= m < q`, or a point `(x, 0)` of the base segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PopcornPoint {
    pub x: ReducedFraction,
    pub y: ReducedFraction,
}

impl PopcornPoint {
    /// `(m/q, 1/q)`; requires `1 <= m < q` and `gcd(m, q) = 1`.
    pub fn at_level(m: u64, q: u64) -> Result<Self> {
        if m == 0 || m >= q || gcd_u64(m, q) != 1 {
            return Err(PopcornError::Range {
                what: "popcorn point",
                detail: format!("{m}/{q} is not a reduced fraction in (0, 1)"),
            });
        }
        Ok(Self {
            x: ReducedFraction::new(m, q)?,
            y: ReducedFraction::recip_of(q),
        })
    }

    /// `(x, 0)` on the base segment.
    pub fn base(x: ReducedFraction) -> Result<Self> {
        if x > ReducedFraction::ONE {
            return Err(PopcornError::Range {
                what: "base point",
                detail: format!("{x} > 1"),
            });
        }
        Ok(Self {
            x,
            y: ReducedFraction::ZERO,
        })
    }

    /// Denominator level `q` for points above the axis.
    pub fn level(&self) -> Option<u64> {
        (!self.y.is_zero()).then(|| self.x.den())
    }
}

/// The popcorn (Thomae) function at `p/q`, which need not be reduced.
pub fn popcorn_value(p: u64, q: u64) -> Result<ReducedFraction> {
    if q == 0 {
        return Err(PopcornError::ZeroDenominator { num: p, den: q });
    }
    if p > q {
        return Err(PopcornError::Range {
            what: "popcorn argument",
            detail: format!("{p}/{q} is outside [0, 1]"),
        });
    }
    let x = ReducedFraction::new(p, q)?;
    if x.num() >= 1 && x.num() < x.den() {
        Ok(ReducedFraction::recip_of(x.den()))
    } else {
        Ok(ReducedFraction::ZERO)
    }
}

/// The `phi(q)` points at height `1/q`, ascending in `x`.
pub fn enumerate_level(q: u64) -> Result<Vec<PopcornPoint>> {
    if q < 2 {
        return Err(PopcornError::Range {
            what: "popcorn level",
            detail: format!("q = {q} < 2"),
        });
    }
    Ok(level_iter(q).collect())
}

fn level_iter(q: u64) -> impl Iterator<Item = PopcornPoint> {
    (1..q).filter(move |&m| gcd_u64(m, q) == 1).map(move |m| PopcornPoint {
        x: ReducedFraction::new(m, q).expect("q >= 2"),
        y: ReducedFraction::recip_of(q),
    })
}

/// All points with `2 <= q <= q_max`, level by level, each level ascending
/// in `x`. Lazily generated; nothing beyond the current level is held.
pub fn enumerate_graph_points(q_max: u64) -> impl Iterator<Item = PopcornPoint> {
    (2..=q_max).flat_map(level_iter)
}

/// Row `k` of a mesh-`delta` grid in terms of denominator levels: the points
/// `(m/q, 1/q)` with `level_lo < q <= level_hi` are exactly those with
/// `k*delta <= 1/q < (k+1)*delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripSpec {
    pub k: u64,
    pub delta: ReducedFraction,
    pub level_lo: u64,
    pub level_hi: u64,
}

impl StripSpec {
    pub fn is_empty(&self) -> bool {
        self.level_hi <= self.level_lo.max(1)
    }

    /// Popcorn levels in the strip (denominator 1 never carries a point).
    pub fn levels(&self) -> std::ops::RangeInclusive<u64> {
        (self.level_lo + 1).max(2)..=self.level_hi
    }

    /// Exact check of `k*delta <= 1/q < (k+1)*delta`.
    pub fn holds_for(&self, q: u64) -> bool {
        let (a, b) = (self.delta.num() as u128, self.delta.den() as u128);
        let (k, q) = (self.k as u128, q as u128);
        k * a * q <= b && b < (k + 1) * a * q
    }
}

/// Level range of strip `k >= 1`.
pub fn strip_spec(k: u64, delta: ReducedFraction) -> Result<StripSpec> {
    if k == 0 {
        return Err(PopcornError::Range {
            what: "strip index",
            detail: "strip 0 holds the base segment and has no level range".into(),
        });
    }
    let level_hi = strip_index_l(k, delta)?;
    let level_lo = match strip_index_l(k + 1, delta) {
        Ok(l) => l,
        Err(PopcornError::EmptyStrip { .. }) => 0,
        Err(e) => return Err(e),
    };
    let spec = StripSpec {
        k,
        delta,
        level_lo,
        level_hi,
    };
    debug_assert!(level_lo <= level_hi);
    debug_assert!(spec.levels().is_empty() || spec.holds_for(level_hi));
    debug_assert!(level_lo < 2 || !spec.holds_for(level_lo));
    Ok(spec)
}

/// Points of the popcorn graph on the line `y = x / l` with
/// `1/(n+1) < x < 1/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapsedLine {
    pub l: u64,
    pub n: u64,
}

impl CollapsedLine {
    pub fn new(l: u64, n: u64) -> Result<Self> {
        if l < 2 || n < 1 {
            return Err(PopcornError::Range {
                what: "collapsed line",
                detail: format!("need l >= 2 and n >= 1, got l={l}, n={n}"),
            });
        }
        Ok(Self { l, n })
    }
}

/// `(l/(ln+i), 1/(ln+i))` for `i` coprime to `l`, descending in `x`.
pub fn collapsed_line_points(line: CollapsedLine) -> Result<Vec<PopcornPoint>> {
    let CollapsedLine { l, n } = line;
    coprime_residues(l)?
        .into_iter()
        .map(|i| {
            let q = l
                .checked_mul(n)
                .and_then(|ln| ln.checked_add(i))
                .ok_or_else(|| PopcornError::Range {
                    what: "collapsed line",
                    detail: format!("l*n+i overflows for l={l}, n={n}"),
                })?;
            // gcd(l, ln + i) = gcd(l, i) = 1, so l/q is already reduced.
            PopcornPoint::at_level(l, q)
        })
        .collect()
}

/// Mesh for the full square must lie in `(0, 1/2]`.
pub(crate) fn check_grid_mesh(delta: ReducedFraction) -> Result<()> {
    check_open_unit(delta, "mesh")?;
    if delta > ReducedFraction::new(1, 2)? {
        return Err(PopcornError::MeshTooCoarse {
            delta: delta.to_string(),
        });
    }
    Ok(())
}
