//! Exact grid-cell counts for the full popcorn set: whole square, single
//! rows, square windows, finite point lists, and a brute-force reference.
//!
//! Every count is the number of half-open mesh cells, anchored at the
//! region's lower-left corner, that meet the set. The last row and column
//! are closed so the region is tiled exactly.

mod enumerate;
mod finite;
mod grid;
mod oracle;
mod probe;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;
use crate::numtheory::SpfSieve;
use crate::par;
use crate::popcorn::check_grid_mesh;
use grid::{RowLevels, WindowGrid};

pub use finite::{grid_count_points, separated_count};
pub use oracle::ORACLE_GUARD;

/// Finest mesh accepted: `2^-30`, so that `ceil(1/delta)^2` fits in a `u64`.
pub const MESH_FLOOR_LOG2: u32 = 30;

/// Rough cost of one column probe measured in enumerated points.
const PROBE_WEIGHT: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    FullSquare,
    Strip {
        k: u64,
    },
    /// `[x0, x0 + side] x [y0, y0 + side]`
    Window {
        x0: ReducedFraction,
        y0: ReducedFraction,
        side: ReducedFraction,
    },
}

impl Region {
    pub fn window(x0: ReducedFraction, y0: ReducedFraction, side: ReducedFraction) -> Result<Self> {
        if side.is_zero() {
            return Err(PopcornError::InvalidRegion("window side must be positive".into()));
        }
        let right = x0.to_big() + side.to_big();
        if right > ReducedFraction::ONE.to_big() {
            return Err(PopcornError::InvalidRegion(format!("x0 + R = {right} exceeds 1")));
        }
        Ok(Region::Window { x0, y0, side })
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::FullSquare => write!(f, "full-square"),
            Region::Strip { k } => write!(f, "strip({k})"),
            Region::Window { x0, y0, side } => write!(f, "window({x0},{y0};{side})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    StripFast,
    BruteOracle,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::StripFast => "strip-fast",
            CountMethod::BruteOracle => "brute-oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub region: Region,
    pub mesh: ReducedFraction,
    pub count: u64,
    pub method: CountMethod,
    /// Largest denominator level that can reach the region.
    pub q_max: u64,
}

/// Which set the base row stands for. Both give the same counts: the graph's
/// zeros are dense in `[0, 1]`, so every base cell meets them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetMode {
    #[default]
    FullSet,
    Graph,
}

/// How rows with many points are counted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountStrategy {
    /// Pick per row, whichever is estimated cheaper.
    #[default]
    Auto,
    /// Walk every point.
    Enumerate,
    /// Ask each column whether a fraction of the row's levels lands in it.
    Probe,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountOptions {
    pub mode: SetMode,
    pub strategy: CountStrategy,
}

fn check_mesh_floor(mesh: ReducedFraction) -> Result<()> {
    // mesh >= 2^-30  <=>  num * 2^30 >= den
    if (mesh.num() as u128) << MESH_FLOOR_LOG2 < mesh.den() as u128 {
        return Err(PopcornError::MeshTooFine {
            delta: mesh.to_string(),
        });
    }
    Ok(())
}

fn unit_grid(delta: ReducedFraction) -> Result<WindowGrid> {
    check_grid_mesh(delta)?;
    check_mesh_floor(delta)?;
    WindowGrid::new(
        ReducedFraction::ZERO,
        ReducedFraction::ZERO,
        ReducedFraction::ONE,
        delta,
    )
}

fn window_grid(region: Region, mesh: ReducedFraction) -> Result<WindowGrid> {
    let Region::Window { x0, y0, side } = region else {
        return Err(PopcornError::InvalidRegion(format!("{region} is not a window")));
    };
    Region::window(x0, y0, side)?;
    check_mesh_floor(mesh)?;
    WindowGrid::new(x0, y0, side, mesh)
}

/// Rows below `split` are probed, the rest enumerated.
struct Plan {
    split: u64,
    sieve_limit: u64,
    cost: f64,
}

fn plan(grid: &WindowGrid, strategy: CountStrategy) -> Plan {
    let live = grid.live_rows();
    let ncols = grid.ncols() as f64;
    let probe_budget = ncols * PROBE_WEIGHT;
    let split = match strategy {
        _ if !grid.probe_ok() => 0,
        CountStrategy::Enumerate => 0,
        CountStrategy::Probe => live,
        CountStrategy::Auto => (0..live)
            .find(|&j| match grid.row_levels(j) {
                RowLevels::Levels { qa, qb } => grid.enumeration_cost(qa, qb) <= probe_budget,
                _ => false,
            })
            .unwrap_or(live),
    };
    let probed = (0..split)
        .filter(|&j| matches!(grid.row_levels(j), RowLevels::Levels { .. }))
        .count() as f64;
    let mut sieve_limit = 2;
    let mut q_low = u64::MAX;
    for j in split..live {
        if let RowLevels::Levels { qb, .. } = grid.row_levels(j) {
            sieve_limit = qb;
            break;
        }
    }
    for j in (split..live).rev() {
        if let RowLevels::Levels { qa, .. } = grid.row_levels(j) {
            q_low = qa;
            break;
        }
    }
    let enumerated = if q_low <= sieve_limit {
        grid.enumeration_cost(q_low, sieve_limit)
    } else {
        0.0
    };
    Plan {
        split,
        sieve_limit,
        cost: probed * ncols + enumerated,
    }
}

fn base_row(grid: &WindowGrid, mode: SetMode) -> u64 {
    match mode {
        SetMode::FullSet => grid.ncols(),
        // Every column has positive width and so contains an irrational x.
        SetMode::Graph => (0..grid.ncols())
            .filter(|&i| {
                let (u, v, _) = grid.column_bounds(i);
                u.n * v.d < v.n * u.d
            })
            .count() as u64,
    }
}

fn probe_row(grid: &WindowGrid, qa: u64, qb: u64) -> u64 {
    par::sum_u64(0..grid.ncols(), |i| {
        let (u, v, v_closed) = grid.column_bounds(i);
        probe::reduced_fraction_in(u, true, v, v_closed, qa, qb) as u64
    })
}

fn count_row(grid: &WindowGrid, plan: &Plan, sieve: &SpfSieve, j: u64, mode: SetMode) -> u64 {
    match grid.row_levels(j) {
        RowLevels::Base => base_row(grid, mode),
        RowLevels::Empty => 0,
        RowLevels::Levels { qa, qb } if j < plan.split => probe_row(grid, qa, qb),
        RowLevels::Levels { qa, qb } => enumerate::count_row(grid, sieve, qa, qb),
    }
}

fn count_rows(grid: &WindowGrid, rows: std::ops::Range<u64>, opts: &CountOptions) -> Result<u64> {
    let plan = plan(grid, opts.strategy);
    let sieve = SpfSieve::new(plan.sieve_limit)?;
    Ok(par::sum_u64(rows, |j| count_row(grid, &plan, &sieve, j, opts.mode)))
}

/// Cells of the `delta`-grid on `[0, 1]^2` meeting the full popcorn set.
pub fn grid_count_full_set(delta: ReducedFraction) -> Result<CoverReport> {
    grid_count_full_set_with(delta, &CountOptions::default())
}

pub fn grid_count_full_set_with(delta: ReducedFraction, opts: &CountOptions) -> Result<CoverReport> {
    let grid = unit_grid(delta)?;
    let count = count_rows(&grid, 0..grid.live_rows(), opts)?;
    Ok(CoverReport {
        region: Region::FullSquare,
        mesh: delta,
        count,
        method: CountMethod::StripFast,
        q_max: grid.q_top(),
    })
}

/// Occupied cells in row band `[k delta, (k+1) delta)` of the unit grid.
pub fn grid_count_strip(k: u64, delta: ReducedFraction) -> Result<CoverReport> {
    grid_count_strip_with(k, delta, &CountOptions::default())
}

pub fn grid_count_strip_with(k: u64, delta: ReducedFraction, opts: &CountOptions) -> Result<CoverReport> {
    let grid = unit_grid(delta)?;
    let (count, q_max) = if k >= grid.ncols() {
        (0, 0)
    } else {
        let q_max = match grid.row_levels(k) {
            RowLevels::Levels { qb, .. } => qb,
            _ => 0,
        };
        (count_rows(&grid, k..k + 1, opts)?, q_max)
    };
    Ok(CoverReport {
        region: Region::Strip { k },
        mesh: delta,
        count,
        method: CountMethod::StripFast,
        q_max,
    })
}

/// Cells of the `r`-grid anchored at the window corner meeting the set
/// inside the window.
pub fn grid_count_window(region: Region, r: ReducedFraction) -> Result<CoverReport> {
    grid_count_window_with(region, r, &CountOptions::default())
}

pub fn grid_count_window_with(region: Region, r: ReducedFraction, opts: &CountOptions) -> Result<CoverReport> {
    let grid = window_grid(region, r)?;
    let count = count_rows(&grid, 0..grid.live_rows(), opts)?;
    Ok(CoverReport {
        region,
        mesh: r,
        count,
        method: CountMethod::StripFast,
        q_max: grid.q_top(),
    })
}

/// Estimated work (points visited plus columns probed) of a count.
pub fn estimate_cost(region: Region, mesh: ReducedFraction, strategy: CountStrategy) -> Result<f64> {
    match region {
        Region::FullSquare => Ok(plan(&unit_grid(mesh)?, strategy).cost),
        Region::Strip { k } => {
            let grid = unit_grid(mesh)?;
            if k >= grid.ncols() {
                return Ok(0.0);
            }
            Ok(match grid.row_levels(k) {
                RowLevels::Levels { qa, qb } => {
                    let points = grid.enumeration_cost(qa, qb);
                    match strategy {
                        CountStrategy::Enumerate => points,
                        CountStrategy::Probe if grid.probe_ok() => grid.ncols() as f64,
                        _ => points.min(grid.ncols() as f64),
                    }
                }
                _ => grid.ncols() as f64,
            })
        }
        Region::Window { .. } => Ok(plan(&window_grid(region, mesh)?, strategy).cost),
    }
}

/// Reference count: every point with `q <= q_max` placed by direct division
/// into a hash set of cells.
pub fn brute_force_count(delta: ReducedFraction, q_max: u64, region: Region) -> Result<CoverReport> {
    let w = match region {
        Region::FullSquare | Region::Strip { .. } => {
            check_grid_mesh(delta)?;
            oracle::OracleWindow {
                x0: ReducedFraction::ZERO,
                y0: ReducedFraction::ZERO,
                side: ReducedFraction::ONE,
                mesh: delta,
                only_row: match region {
                    Region::Strip { k } => Some(k),
                    _ => None,
                },
            }
        }
        Region::Window { x0, y0, side } => {
            window_grid(region, delta)?;
            oracle::OracleWindow {
                x0,
                y0,
                side,
                mesh: delta,
                only_row: None,
            }
        }
    };
    Ok(CoverReport {
        region,
        mesh: delta,
        count: oracle::count(&w, q_max)?,
        method: CountMethod::BruteOracle,
        q_max,
    })
}

/// Cells of the unit `delta`-grid meeting `{(1/n, 0) : n >= 1}`.
pub fn grid_count_reciprocals(delta: ReducedFraction) -> Result<CoverReport> {
    check_grid_mesh(delta)?;
    check_mesh_floor(delta)?;
    let (a, b) = (delta.num(), delta.den());
    let ncols = b.div_ceil(a);
    // Past n = b/a every point falls in column 0.
    let n_max = b / a + 1;
    let mut count = 0;
    let mut last = u64::MAX;
    for n in 1..=n_max {
        let col = (b / (n * a)).min(ncols - 1);
        if col != last {
            count += 1;
            last = col;
        }
    }
    Ok(CoverReport {
        region: Region::FullSquare,
        mesh: delta,
        count,
        method: CountMethod::StripFast,
        q_max: n_max,
    })
}
