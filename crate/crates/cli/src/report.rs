use loewner_lab::interpolation::constants::DEFAULT_GRID;
use loewner_lab::interpolation::InterpolationConfig;
use loewner_lab::sequence::TestnetGrid;
use loewner_lab::ToleranceConfig;
use serde::Serialize;
use serde_json::Value;

/// Bumped whenever a default below changes meaning.
pub const CONFIG_VERSION: u32 = 1;

pub const CONVEXITY_TRIALS: usize = 10_000;
pub const CONVEXITY_DIMS: [usize; 4] = [2, 3, 4, 5];
pub const CONSTRUCTION_TRIALS: usize = 1000;
pub const CONSTRUCTION_DIMS: [usize; 5] = [2, 3, 4, 5, 6];
pub const SLACK_EPS: [f64; 3] = [1.0, 0.1, 0.01];
pub const SHAPE_RATIO: f64 = 1e-4;
pub const CONSTANTS_TRIALS: usize = 500;
/// Added to the `√(2ε+ε²)` distance bound of the completions.
pub const DISTANCE_SLACK: f64 = 1e-8;
/// Added to the norm bounds of the completions.
pub const NORM_SLACK: f64 = 1e-10;

/// Every default a command can fall back to.
#[derive(Debug, Clone, Serialize)]
pub struct Defaults {
    pub config_version: u32,
    pub tolerances: ToleranceConfig<f64>,
    pub interpolation: InterpolationConfig<f64>,
    pub testnet: TestnetGrid,
    pub convexity_trials: usize,
    pub convexity_dims: Vec<usize>,
    pub construction_trials: usize,
    pub construction_dims: Vec<usize>,
    pub slack_eps: Vec<f64>,
    pub shape_ratio: f64,
    pub constants_trials: usize,
    pub constants_grid: Vec<f64>,
    pub distance_slack: f64,
    pub norm_slack: f64,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            config_version: CONFIG_VERSION,
            tolerances: ToleranceConfig::default(),
            interpolation: InterpolationConfig::default(),
            testnet: TestnetGrid::default(),
            convexity_trials: CONVEXITY_TRIALS,
            convexity_dims: CONVEXITY_DIMS.to_vec(),
            construction_trials: CONSTRUCTION_TRIALS,
            construction_dims: CONSTRUCTION_DIMS.to_vec(),
            slack_eps: SLACK_EPS.to_vec(),
            shape_ratio: SHAPE_RATIO,
            constants_trials: CONSTANTS_TRIALS,
            constants_grid: DEFAULT_GRID.to_vec(),
            distance_slack: DISTANCE_SLACK,
            norm_slack: NORM_SLACK,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    /// Resolved arguments, after defaults were filled in.
    pub args: Value,
    pub defaults: Defaults,
}

/// What every command prints to stdout. Wall time is reported on stderr only,
/// so two runs with the same arguments print identical JSON.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: ConfigEcho,
    pub seed: Option<u64>,
    pub passed: bool,
    pub results: Value,
    pub version: String,
}

impl RunReport {
    pub fn new(command: &str, args: Value, seed: Option<u64>, passed: bool, results: Value) -> Self {
        Self {
            command: command.to_string(),
            config: ConfigEcho {
                args,
                defaults: Defaults::default(),
            },
            seed,
            passed,
            results,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// A finished command: the report plus a one-line human summary.
pub struct Outcome {
    pub report: RunReport,
    pub summary: String,
}
