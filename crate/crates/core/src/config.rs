//! Network parameters and unit conversions.
//!
//! All internal quantities are linear SI: lengths in meters, densities per
//! square meter, powers in watts. dB / dBm values are converted once, at the
//! boundary, by the helpers at the bottom of this module.

use crate::error::{Error, Result};

/// Full parameter vector of the two-tier network model.
///
/// Construction validates every invariant, so a `NetworkConfig` value is
/// always internally consistent:
///
/// * `alpha > 2` (all interference integrals converge),
/// * densities are finite and non-negative, with at least one BS tier present,
/// * `lambda_d >= lambda_m + lambda_f` (the active-device thinning
///   probability stays within `[0, 1]`),
/// * `p_m >= p_f > 0` (the association-region geometry assumes the macro
///   tier does not transmit below the femto tier),
/// * `noise >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    lambda_m: f64,
    lambda_f: f64,
    lambda_d: f64,
    p_m: f64,
    p_f: f64,
    p_d: f64,
    alpha: f64,
    noise: f64,
}

impl NetworkConfig {
    /// Builds a validated configuration from linear SI values.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda_m: f64,
        lambda_f: f64,
        lambda_d: f64,
        p_m: f64,
        p_f: f64,
        p_d: f64,
        alpha: f64,
        noise: f64,
    ) -> Result<Self> {
        let cfg = Self {
            lambda_m,
            lambda_f,
            lambda_d,
            p_m,
            p_f,
            p_d,
            alpha,
            noise,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let finite = |name: &'static str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {v}"),
                })
            }
        };
        finite("lambda_m", self.lambda_m)?;
        finite("lambda_f", self.lambda_f)?;
        finite("lambda_d", self.lambda_d)?;
        finite("p_m", self.p_m)?;
        finite("p_f", self.p_f)?;
        finite("p_d", self.p_d)?;
        finite("alpha", self.alpha)?;
        finite("noise", self.noise)?;

        if self.alpha <= 2.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("path-loss exponent must exceed 2, got {}", self.alpha),
            });
        }
        for (name, v) in [
            ("lambda_m", self.lambda_m),
            ("lambda_f", self.lambda_f),
            ("lambda_d", self.lambda_d),
        ] {
            if v < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("density must be non-negative, got {v}"),
                });
            }
        }
        if self.lambda_m + self.lambda_f <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "lambda_m",
                reason: "at least one base-station tier must have positive density".into(),
            });
        }
        if self.lambda_d < self.lambda_m + self.lambda_f {
            return Err(Error::InvalidParameter {
                name: "lambda_d",
                reason: format!(
                    "device density {} below combined BS density {} (thinning probability would exceed 1)",
                    self.lambda_d,
                    self.lambda_m + self.lambda_f
                ),
            });
        }
        if !(self.p_f > 0.0) {
            return Err(Error::InvalidParameter {
                name: "p_f",
                reason: format!("transmit power must be positive, got {}", self.p_f),
            });
        }
        if self.p_m < self.p_f {
            return Err(Error::InvalidParameter {
                name: "p_m",
                reason: format!(
                    "macro power {} below femto power {}; association regions assume p_m >= p_f",
                    self.p_m, self.p_f
                ),
            });
        }
        if !(self.p_d > 0.0) {
            return Err(Error::InvalidParameter {
                name: "p_d",
                reason: format!("device transmit power must be positive, got {}", self.p_d),
            });
        }
        if self.noise < 0.0 {
            return Err(Error::InvalidParameter {
                name: "noise",
                reason: format!("noise power must be non-negative, got {}", self.noise),
            });
        }
        Ok(())
    }

    /// Reference two-tier configuration used throughout the test and bench
    /// suites: macro tier 1 per km2 at 46 dBm, femto tier 10 per km2 at
    /// 20 dBm, devices 100 per km2 at 20 dBm, `alpha = 4`, noise 1e-12 W.
    pub fn reference() -> Self {
        Self::new(
            1e-6,
            1e-5,
            1e-4,
            dbm_to_watts(46.0),
            dbm_to_watts(20.0),
            dbm_to_watts(20.0),
            4.0,
            1e-12,
        )
        .expect("reference configuration is valid")
    }

    pub fn lambda_m(&self) -> f64 {
        self.lambda_m
    }
    pub fn lambda_f(&self) -> f64 {
        self.lambda_f
    }
    pub fn lambda_d(&self) -> f64 {
        self.lambda_d
    }
    pub fn p_m(&self) -> f64 {
        self.p_m
    }
    pub fn p_f(&self) -> f64 {
        self.p_f
    }
    pub fn p_d(&self) -> f64 {
        self.p_d
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn noise(&self) -> f64 {
        self.noise
    }

    /// Combined BS density `lambda_m + lambda_f`.
    pub fn lambda_mf(&self) -> f64 {
        self.lambda_m + self.lambda_f
    }

    /// Density of simultaneously active (interfering) devices: the device
    /// process thinned down to one transmitter per BS, `lambda_m + lambda_f`.
    pub fn lambda_interferers(&self) -> f64 {
        self.lambda_mf()
    }

    /// Probability that a device survives the one-per-BS thinning.
    pub fn thinning_probability(&self) -> f64 {
        self.lambda_mf() / self.lambda_d
    }

    /// `(p_m / p_f)^(2/alpha)`, the constant that shapes the DL association
    /// regions.
    pub fn power_ratio_2a(&self) -> f64 {
        (self.p_m / self.p_f).powf(2.0 / self.alpha)
    }

    /// Effective density governing the DL serving-distance law of the given
    /// tier: `lambda_v + lambda_u (p_u / p_v)^(2/alpha)`.
    pub fn dl_distance_rate(&self, tier: Tier) -> f64 {
        let q = self.power_ratio_2a();
        match tier {
            Tier::Macro => self.lambda_m + self.lambda_f / q,
            Tier::Femto => self.lambda_f + self.lambda_m * q,
        }
    }

    pub fn tier_density(&self, tier: Tier) -> f64 {
        match tier {
            Tier::Macro => self.lambda_m,
            Tier::Femto => self.lambda_f,
        }
    }

    pub fn tier_power(&self, tier: Tier) -> f64 {
        match tier {
            Tier::Macro => self.p_m,
            Tier::Femto => self.p_f,
        }
    }

    /// Simulation window radius: `5 / sqrt(pi * lambda_min)` over the
    /// positive BS tiers, making the probability of an empty tier inside the
    /// window below `exp(-25)`.
    pub fn window_radius(&self) -> f64 {
        let mut lambda_min = f64::INFINITY;
        for v in [self.lambda_m, self.lambda_f] {
            if v > 0.0 && v < lambda_min {
                lambda_min = v;
            }
        }
        5.0 / (std::f64::consts::PI * lambda_min).sqrt()
    }

    /// Copy with a different femto density (used by density sweeps).
    pub fn with_lambda_f(&self, lambda_f: f64) -> Result<Self> {
        Self::new(
            self.lambda_m,
            lambda_f,
            self.lambda_d,
            self.p_m,
            self.p_f,
            self.p_d,
            self.alpha,
            self.noise,
        )
    }

    /// Copy with a different device density.
    pub fn with_lambda_d(&self, lambda_d: f64) -> Result<Self> {
        Self::new(
            self.lambda_m,
            self.lambda_f,
            lambda_d,
            self.p_m,
            self.p_f,
            self.p_d,
            self.alpha,
            self.noise,
        )
    }

    /// Copy with a different noise power (tests use 0 for the
    /// interference-limited regime).
    pub fn with_noise(&self, noise: f64) -> Result<Self> {
        Self::new(
            self.lambda_m,
            self.lambda_f,
            self.lambda_d,
            self.p_m,
            self.p_f,
            self.p_d,
            self.alpha,
            noise,
        )
    }

    /// Copy with both transmit powers scaled jointly (scale-invariance
    /// checks).
    pub fn with_scaled_powers(&self, scale: f64) -> Result<Self> {
        Self::new(
            self.lambda_m,
            self.lambda_f,
            self.lambda_d,
            self.p_m * scale,
            self.p_f * scale,
            self.p_d,
            self.alpha,
            self.noise,
        )
    }

    /// Copy with all three densities scaled jointly.
    pub fn with_scaled_densities(&self, scale: f64) -> Result<Self> {
        Self::new(
            self.lambda_m * scale,
            self.lambda_f * scale,
            self.lambda_d * scale,
            self.p_m,
            self.p_f,
            self.p_d,
            self.alpha,
            self.noise,
        )
    }
}

/// Base-station tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    Macro,
    Femto,
}

impl Tier {
    pub fn label(self) -> &'static str {
        match self {
            Tier::Macro => "macro",
            Tier::Femto => "femto",
        }
    }
}

/// Association rule: by DL received power or by UL (nearest-BS) power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Downlink,
    Uplink,
}

/// Converts dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts a dB ratio to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a density given per square kilometer to per square meter.
pub fn per_km2_to_per_m2(per_km2: f64) -> f64 {
    per_km2 * 1e-6
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_is_valid_and_exposes_expected_values() {
        let cfg = NetworkConfig::reference();
        assert_eq!(cfg.lambda_m(), 1e-6);
        assert_eq!(cfg.lambda_f(), 1e-5);
        assert!((cfg.p_m() - 39.810717055349734).abs() < 1e-12);
        assert!((cfg.p_f() - 0.1).abs() < 1e-15);
        assert!((cfg.power_ratio_2a() - 19.952623149688797).abs() < 1e-9);
        assert!((cfg.thinning_probability() - 0.11).abs() < 1e-12);
    }

    #[test]
    fn rejects_alpha_at_most_two() {
        let err = NetworkConfig::new(1e-6, 1e-5, 1e-4, 10.0, 0.1, 0.1, 2.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "alpha", .. }));
    }

    #[test]
    fn rejects_device_density_below_bs_density() {
        let err = NetworkConfig::new(1e-6, 1e-5, 1e-6, 10.0, 0.1, 0.1, 4.0, 0.0).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidParameter {
                name: "lambda_d",
                ..
            }
        ));
    }

    #[test]
    fn rejects_macro_power_below_femto() {
        let err = NetworkConfig::new(1e-6, 1e-5, 1e-4, 0.05, 0.1, 0.1, 4.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "p_m", .. }));
    }

    #[test]
    fn window_radius_follows_smallest_positive_tier() {
        let cfg = NetworkConfig::reference();
        let expect = 5.0 / (std::f64::consts::PI * 1e-6).sqrt();
        assert!((cfg.window_radius() - expect).abs() < 1e-9);
        // single tier: the zero-density tier is ignored
        let single = NetworkConfig::new(1e-6, 0.0, 1e-4, 10.0, 0.1, 0.1, 4.0, 0.0).unwrap();
        assert!((single.window_radius() - expect).abs() < 1e-9);
    }

    #[test]
    fn unit_conversions() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(20.0) - 0.1).abs() < 1e-16);
        assert!((db_to_linear(0.0) - 1.0).abs() < 1e-15);
        assert!((per_km2_to_per_m2(1.0) - 1e-6).abs() < 1e-20);
    }
}
