use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use swp_core::ScenarioParams;
use swp_core::OptimizationConfig;

/// Bad or unreadable configuration; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataSource {
    Alternative,
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementSet {
    /// The three `W1` observables.
    Witness,
    /// All nine bipartite Pauli observables.
    Tomography,
}

/// Everything a run needs. Every field has a default, so `{}` is a valid
/// config; unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioParams,
    pub seed: u64,
    /// Significance level of the likelihood-ratio tests.
    pub alpha: f64,
    /// Monte Carlo trials per point (success curves, tomographies).
    pub trials: usize,
    /// Null-hypothesis trials used to estimate `λ_min`.
    pub lambda_trials: usize,
    /// Free-fall times for `pea`, s.
    pub taus: Vec<f64>,
    /// Scan horizon for `scan-witness`; `null` picks `4π/(ω_LR+ω_RL)`.
    pub tau_max: Option<f64>,
    pub tau_points: usize,
    pub gammas: Vec<f64>,
    /// Shots per observable.
    pub n_axis: Vec<u64>,
    pub data_source: DataSource,
    pub measurements: MeasurementSet,
    /// Total shots per tomography.
    pub tomo_shots: Vec<u64>,
    pub mle_iterations: usize,
    /// Shots per `W1` observable for the loophole data.
    pub loophole_shots: u64,
    pub optimizer: OptimizationConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioParams::default(),
            seed: 0,
            alpha: 0.01,
            trials: 1000,
            lambda_trials: 10_000,
            taus: vec![0.0, 1.0, 10.0],
            tau_max: None,
            tau_points: 3000,
            gammas: vec![0.0, 0.01, 0.02, 0.03],
            n_axis: vec![1, 3, 10, 33, 100, 333, 1000, 3333],
            data_source: DataSource::Alternative,
            measurements: MeasurementSet::Witness,
            tomo_shots: vec![9, 90, 900, 9000],
            mle_iterations: 100,
            loophole_shots: 1000,
            optimizer: OptimizationConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.scenario.validate().map_err(|e| ConfigError(e.to_string()))?;
        let fail = |msg: &str| Err(ConfigError(msg.to_string()));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail("alpha must lie in (0, 1)");
        }
        if self.trials == 0 || self.lambda_trials < 100 {
            return fail("need trials >= 1 and lambda_trials >= 100");
        }
        if self.taus.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return fail("taus must be finite and non-negative");
        }
        if self.tau_points < 2 || self.tau_max.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return fail("tau_points must be >= 2 and tau_max positive");
        }
        if self.gammas.is_empty() || self.gammas.iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
            return fail("gammas must be a non-empty list of non-negative rates");
        }
        if self.n_axis.is_empty() || self.n_axis.contains(&0) {
            return fail("n_axis must be non-empty with positive entries");
        }
        if self.tomo_shots.is_empty() || self.tomo_shots.iter().any(|&s| s == 0 || s % 9 != 0) {
            return fail("tomo_shots must be positive multiples of 9");
        }
        if self.mle_iterations == 0 || self.loophole_shots == 0 {
            return fail("mle_iterations and loophole_shots must be positive");
        }
        Ok(())
    }
}
