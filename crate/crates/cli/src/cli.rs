//! Command-line surface: subcommands, flags, and value-level validation.
//!
//! Everything that can be rejected before touching data is rejected here,
//! so bad configuration exits with the usage status (2) and a message
//! naming the violated constraint.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xbicorr_core::bicorr::{Combination, DirectionSet, ExclusionRule};

#[derive(Parser, Debug)]
#[command(
    name = "xbicorr",
    version,
    about = "Windowed cross-bicorrelation epoch detection for financial return series",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summary statistics (mean, sd, skewness, kurtosis, Jarque-Bera) of
    /// the returns of each input series
    Describe(DescribeArgs),
    /// Augmented Dickey-Fuller unit-root tests on the return series
    Unitroot(UnitrootArgs),
    /// McLeod-Li / Engle LM / BDS battery on AR-prewhitened returns
    Nonlin(NonlinArgs),
    /// Windowed cross-bicorrelation scan over VAR-prewhitened pairs
    Xbicorr(XbicorrArgs),
    /// The full sequence: describe, unitroot, nonlin, and the pair scan,
    /// with every table and plot file emitted
    Pipeline(PipelineArgs),
    /// Generate the three-series synthetic price dataset
    Simulate(SimulateArgs),
}

#[derive(Args, Debug)]
pub struct DescribeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct UnitrootArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub order: OrderArgs,
    /// Deterministic terms in the test regression
    #[arg(long, value_enum, default_value_t = DetArg::Ct)]
    pub det: DetArg,
}

#[derive(Args, Debug)]
pub struct NonlinArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub order: OrderArgs,
    #[command(flatten)]
    pub battery: BatteryArgs,
}

#[derive(Args, Debug)]
pub struct XbicorrArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub order: OrderArgs,
    #[command(flatten)]
    pub scan: ScanArgs,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub order: OrderArgs,
    #[command(flatten)]
    pub battery: BatteryArgs,
    #[command(flatten)]
    pub scan: ScanArgs,
    /// Deterministic terms for the unit-root stage
    #[arg(long, value_enum, default_value_t = DetArg::Ct)]
    pub det: DetArg,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Seed for the generators
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of price rows per series (one more than the return count)
    #[arg(long, default_value_t = 4278, value_parser = parse_length)]
    pub length: usize,
    /// Output directory for the generated CSV files
    #[arg(long, default_value = "xbicorr-out")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Price CSV file; repeat the flag for several series
    #[arg(long = "input", value_name = "FILE", required = true)]
    pub inputs: Vec<PathBuf>,
    /// Name of the date column
    #[arg(long, default_value = "date")]
    pub date_col: String,
    /// Name of the price column
    #[arg(long, default_value = "price")]
    pub price_col: String,
    /// Date format of the date column (strftime syntax)
    #[arg(long, default_value = "%Y-%m-%d")]
    pub date_format: String,
    /// Drop malformed rows (counted in the report) instead of failing
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output directory for report and table files
    #[arg(long, default_value = "xbicorr-out")]
    pub out: PathBuf,
    /// Output formats, comma-separated
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "json,csv,table"
    )]
    pub format: Vec<OutputFormat>,
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    /// Maximum lag order for AR/VAR selection (default: the ⌊12·(n/100)^¼⌋
    /// rule, capped for VAR)
    #[arg(long = "pmax")]
    pub p_max: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BatteryArgs {
    /// Lag counts for the McLeod-Li and Engle LM tests
    #[arg(long, value_delimiter = ',', default_value = "5,15,20", value_parser = parse_lag)]
    pub lags: Vec<usize>,
    /// BDS (dimension:epsilon-multiplier) grid
    #[arg(long = "bds-grid", value_delimiter = ',', default_value = "2:0.5,3:1.0,4:1.5", value_parser = parse_bds_spec)]
    pub bds_grid: Vec<BdsSpec>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Window exponent: window length is ⌊N^c⌋, constrained to 0 < c < 0.5
    #[arg(long = "c", default_value_t = 0.4, value_parser = parse_exponent)]
    pub exponent: f64,
    /// Significance level for per-window rejection, in (0, 1)
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Lag-pair exclusion rule for H_xxy
    #[arg(long, value_enum, default_value_t = ExclusionArg::Dof)]
    pub exclusion: ExclusionArg,
    /// Pair of series names as "A,B"; repeat for several pairs
    /// (default: every unordered pair of inputs)
    #[arg(long = "pair", value_name = "A,B", value_parser = parse_pair)]
    pub pairs: Vec<(String, String)>,
    /// Which conditioning directions to test
    #[arg(long, value_enum, default_value_t = DirectionsArg::Both)]
    pub directions: DirectionsArg,
    /// How the two directions combine into per-window significance
    #[arg(long, value_enum, default_value_t = CombinationArg::Either)]
    pub combination: CombinationArg,
    /// Override the within-window lag depth L (default: max(2, ⌊n_w^c⌋))
    #[arg(long = "lag-depth")]
    pub lag_depth: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExclusionArg {
    /// Exclude s = 0 and s = r (term count L(2L−1))
    Dof,
    /// Exclude the band |r − s| ≤ 1 (term count 2L² − 2L + 1)
    Band,
}

impl From<ExclusionArg> for ExclusionRule {
    fn from(a: ExclusionArg) -> Self {
        match a {
            ExclusionArg::Dof => ExclusionRule::DofConsistent,
            ExclusionArg::Band => ExclusionRule::DiagonalBand,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionsArg {
    Xy,
    Yx,
    Both,
}

impl From<DirectionsArg> for DirectionSet {
    fn from(a: DirectionsArg) -> Self {
        match a {
            DirectionsArg::Xy => DirectionSet::XOnY,
            DirectionsArg::Yx => DirectionSet::YOnX,
            DirectionsArg::Both => DirectionSet::Both,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombinationArg {
    Either,
    Both,
}

impl From<CombinationArg> for Combination {
    fn from(a: CombinationArg) -> Self {
        match a {
            CombinationArg::Either => Combination::Either,
            CombinationArg::Both => Combination::Both,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetArg {
    /// Constant and linear trend
    Ct,
    /// Constant only
    C,
}

/// One BDS run: embedding dimension and epsilon as a multiple of sd.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BdsSpec {
    pub embedding: usize,
    pub epsilon_multiplier: f64,
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    let c: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if c > 0.0 && c < 0.5 {
        Ok(c)
    } else {
        Err(format!(
            "window exponent must satisfy 0 < c < 0.5, got {c}"
        ))
    }
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!(
            "significance level must satisfy 0 < alpha < 1, got {a}"
        ))
    }
}

fn parse_lag(s: &str) -> Result<usize, String> {
    let q: usize = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if q == 0 {
        Err("lag counts must be at least 1".into())
    } else {
        Ok(q)
    }
}

fn parse_length(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if n < 66 {
        Err(format!(
            "simulated series need at least 66 price rows for the scan, got {n}"
        ))
    } else {
        Ok(n)
    }
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] if !a.is_empty() && !b.is_empty() && a != b => {
            Ok((a.to_string(), b.to_string()))
        }
        [a, b] if a == b => Err(format!("pair `{s}` names the same series twice")),
        _ => Err(format!(
            "pair must be two comma-separated series names, got `{s}`"
        )),
    }
}

fn parse_bds_spec(s: &str) -> Result<BdsSpec, String> {
    let (m, eps) = s
        .split_once(':')
        .ok_or_else(|| format!("BDS grid entries look like `2:0.5`, got `{s}`"))?;
    let embedding: usize = m
        .trim()
        .parse()
        .map_err(|_| format!("`{m}` is not an integer embedding dimension"))?;
    let epsilon_multiplier: f64 = eps
        .trim()
        .parse()
        .map_err(|_| format!("`{eps}` is not a numeric epsilon multiplier"))?;
    if embedding < 2 {
        return Err("BDS embedding dimension must be at least 2".into());
    }
    if !(epsilon_multiplier > 0.0) || !epsilon_multiplier.is_finite() {
        return Err("BDS epsilon multiplier must be positive".into());
    }
    Ok(BdsSpec {
        embedding,
        epsilon_multiplier,
    })
}
