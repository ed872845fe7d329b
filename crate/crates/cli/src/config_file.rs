//! On-disk configuration schemas. Keys carry their units explicitly; values
//! convert to internal SI (meters, watts, per-m2) exactly once, here.

use serde::Deserialize;

use hetnet_core::{dbm_to_watts, per_km2_to_per_m2, NetworkConfig, RngSeed, SimMode};

use crate::CliError;

/// Network parameter file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub density_mbs_per_km2: f64,
    pub density_fbs_per_km2: f64,
    pub density_dev_per_km2: f64,
    pub power_mbs_dbm: f64,
    pub power_fbs_dbm: f64,
    pub power_dev_dbm: f64,
    pub alpha: f64,
    pub noise_w: f64,
}

impl ConfigFile {
    pub fn to_network_config(&self) -> Result<NetworkConfig, CliError> {
        NetworkConfig::new(
            per_km2_to_per_m2(self.density_mbs_per_km2),
            per_km2_to_per_m2(self.density_fbs_per_km2),
            per_km2_to_per_m2(self.density_dev_per_km2),
            dbm_to_watts(self.power_mbs_dbm),
            dbm_to_watts(self.power_fbs_dbm),
            dbm_to_watts(self.power_dev_dbm),
            self.alpha,
            self.noise_w,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Key/value lines echoed into output headers for provenance.
    pub fn provenance(&self) -> Vec<(String, String)> {
        vec![
            ("density_mbs_per_km2".into(), fmt(self.density_mbs_per_km2)),
            ("density_fbs_per_km2".into(), fmt(self.density_fbs_per_km2)),
            ("density_dev_per_km2".into(), fmt(self.density_dev_per_km2)),
            ("power_mbs_dbm".into(), fmt(self.power_mbs_dbm)),
            ("power_fbs_dbm".into(), fmt(self.power_fbs_dbm)),
            ("power_dev_dbm".into(), fmt(self.power_dev_dbm)),
            ("alpha".into(), fmt(self.alpha)),
            ("noise_w".into(), fmt(self.noise_w)),
        ]
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Sweep variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Femto density as a multiple of the macro density.
    FemtoDensityRatio,
    /// SINR target in dB.
    TargetSinrDb,
}

impl SweepVariable {
    pub fn column_name(self) -> &'static str {
        match self {
            SweepVariable::FemtoDensityRatio => "femto_density_ratio",
            SweepVariable::TargetSinrDb => "target_sinr_db",
        }
    }
}

/// Monte Carlo block of a sweep file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub samples: u64,
    pub seed: u64,
    #[serde(default = "default_mode")]
    pub mode: String,
}

fn default_mode() -> String {
    "approx".into()
}

impl McSpec {
    pub fn sim_mode(&self) -> Result<SimMode, CliError> {
        parse_mode(&self.mode)
    }

    pub fn seed(&self) -> RngSeed {
        RngSeed(self.seed)
    }
}

pub fn parse_mode(s: &str) -> Result<SimMode, CliError> {
    match s {
        "approx" | "approximate" => Ok(SimMode::Approximate),
        "accurate" => Ok(SimMode::Accurate),
        other => Err(CliError::Config(format!(
            "unknown simulation mode `{other}` (expected `approx` or `accurate`)"
        ))),
    }
}

/// Sweep specification file: the variable, its grid, the base network
/// configuration, and an optional Monte Carlo block.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    /// SINR target in dB used for throughput columns on density sweeps.
    #[serde(default = "default_gamma_db")]
    pub gamma_db: f64,
    pub base: ConfigFile,
    pub mc: Option<McSpec>,
}

fn default_gamma_db() -> f64 {
    2.0
}

impl SweepFile {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.is_empty() {
            return Err(CliError::Config("sweep grid must not be empty".into()));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        let base = self.base.to_network_config()?;
        // every grid point must stay inside the validity envelope
        for &v in &self.grid {
            match self.variable {
                SweepVariable::FemtoDensityRatio => {
                    if v < 0.0 {
                        return Err(CliError::Config(format!(
                            "femto density ratio {v} is negative"
                        )));
                    }
                    base.with_lambda_f(v * base.lambda_m()).map_err(|e| {
                        CliError::Config(format!("grid point {v} leaves the valid envelope: {e}"))
                    })?;
                }
                SweepVariable::TargetSinrDb => {
                    if !v.is_finite() {
                        return Err(CliError::Config(format!("SINR grid point {v} not finite")));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn load_config(path: &std::path::Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn load_sweep(path: &std::path::Path) -> Result<SweepFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read sweep spec {}: {e}", path.display())))?;
    let sweep: SweepFile =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    sweep.validate()?;
    Ok(sweep)
}
