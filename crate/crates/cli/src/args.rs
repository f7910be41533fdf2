use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use popcorn_core::ReducedFraction;
use serde::Serialize;

/// Default ceiling for `count`, `boxdim` and `oracle`, in work units.
pub const DEFAULT_COUNT_GUARD: f64 = 1e11;

#[derive(Parser, Debug)]
#[command(
    name = "popcorn",
    version,
    about = "Grid covers, dimension estimates and certificates for the popcorn set"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (count/oracle default to csv, the others to json)
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads; defaults to the available parallelism
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Record wall time in the JSON meta block
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count grid cells meeting the popcorn set
    Count(CountArgs),
    /// Fit the box dimension over a mesh sequence
    Boxdim(BoxdimArgs),
    /// Estimate the Assouad spectrum on shrinking windows
    Spectrum(SpectrumArgs),
    /// Run the exact inequality certificates
    Verify(VerifyArgs),
    /// Count by direct enumeration (slow reference)
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// 2^-k for kmin <= k <= kmax
    Pow2,
    /// (n(n+1))^-6 for n <= proof-n
    Proof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Auto,
    Enumerate,
    Probe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Graph points plus the base segment
    Full,
    /// The graph of the popcorn function
    Graph,
    /// {(1/n, 0)}, a sanity set of dimension 1/2
    Reciprocals,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Totient,
    DuffinSchaeffer,
    LocalDs,
    StripLemma,
    ChungErdos,
}

pub fn parse_fraction(s: &str) -> Result<ReducedFraction, String> {
    s.parse::<ReducedFraction>().map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MeshArgs {
    /// Mesh sizes as p/q, comma separated, coarsest first
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction, conflicts_with = "preset")]
    pub mesh: Vec<ReducedFraction>,

    /// Named mesh sequence
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,

    #[arg(long, default_value_t = 8)]
    pub kmin: u32,

    #[arg(long, default_value_t = 16)]
    pub kmax: u32,

    /// Last index of the proof preset
    #[arg(long, default_value_t = 3)]
    pub proof_n: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RegionArgs {
    /// Restrict to grid row k
    #[arg(long, conflicts_with = "window")]
    pub strip: Option<u64>,

    /// Square window x0,y0,side
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction)]
    pub window: Option<Vec<ReducedFraction>>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CountArgs {
    #[command(flatten)]
    pub meshes: MeshArgs,
    #[command(flatten)]
    pub region: RegionArgs,
    #[arg(long, value_enum, default_value_t = Strategy::Auto)]
    pub strategy: Strategy,
    #[arg(long = "set", value_enum, default_value_t = Target::Full)]
    pub target: Target,
    /// Abort when a count is estimated to exceed this many work units
    #[arg(long, default_value_t = DEFAULT_COUNT_GUARD)]
    pub guard: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoxdimArgs {
    #[command(flatten)]
    pub meshes: MeshArgs,
    #[arg(long = "set", value_enum, default_value_t = Target::Full)]
    pub target: Target,
    #[arg(long, default_value_t = DEFAULT_COUNT_GUARD)]
    pub guard: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpectrumArgs {
    /// Values in (0, 1) as p/q, comma separated
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction,
          default_value = "3/10,2/5,1/2,7/10,4/5")]
    pub theta: Vec<ReducedFraction>,
    #[arg(long, default_value_t = 3)]
    pub nmin: u64,
    #[arg(long, default_value_t = 12)]
    pub nmax: u64,
    #[arg(long, default_value_t = popcorn_core::analysis::SPECTRUM_COST_GUARD)]
    pub guard: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Overrides the suite's default mesh
    #[arg(long, value_parser = parse_fraction)]
    pub delta: Option<ReducedFraction>,
    /// Largest level for duffin-schaeffer
    #[arg(long, default_value_t = 300)]
    pub nmax: u64,
    /// Largest strip index for local-ds
    #[arg(long, default_value_t = 200)]
    pub lmax: u64,
    /// Collapsed level for local-ds
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    /// Largest strip index for strip-lemma
    #[arg(long, default_value_t = 500)]
    pub kmax: u64,
    /// Totient scan range
    #[arg(long, default_value_t = 3)]
    pub lo: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub hi: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    pub meshes: MeshArgs,
    #[command(flatten)]
    pub region: RegionArgs,
    /// Largest level enumerated; defaults to floor(1/mesh)
    #[arg(long)]
    pub qmax: Option<u64>,
}
