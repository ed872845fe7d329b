//! Dual analytic / Monte Carlo engine for downlink-uplink association in
//! two-tier heterogeneous cellular networks.
//!
//! A device in a macro-plus-femto deployment may receive its downlink from
//! one base station and send its uplink through another (decoupled access).
//! This crate computes, for Poisson-distributed deployments:
//!
//! * the probabilities of the four joint DL/UL association cases,
//! * per-tier association probabilities, mean loads, and serving-distance
//!   laws,
//! * SINR coverage and average throughput for DL and for UL with and without
//!   decoupling, including the equivalent single-tier reductions,
//! * the uplink decoupling gains per tier and on average,
//!
//! and cross-validates every closed form against an independent stochastic
//! simulator ([`montecarlo`]) that replays the model realization by
//! realization.
//!
//! Monte Carlo sampling runs data-parallel over realizations through rayon
//! when the default `parallel` feature is enabled, with a sequential fallback
//! otherwise; both produce bit-identical results for the same seed.

pub mod analytic;
pub mod config;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod quad;
pub mod stats;

pub use analytic::{
    case_probabilities, decoupling_peak, full_report, kappa, mean_load, mean_loads,
    serving_distance_pdf, tier_association, AnalyticReport, AssociationCase, CaseProbabilities,
    Gains, MeanLoads, TierAssociation,
};
pub use config::{db_to_linear, dbm_to_watts, per_km2_to_per_m2, NetworkConfig, Rule, Tier};
pub use error::{Error, Result};
pub use geometry::{Point2, PointSet, RngSeed};
pub use montecarlo::{
    associate, case_frequencies, dl_sinr, draw_deployment, estimate, estimate_serial, ul_sinr,
    AssociationOutcome, Deployment, McReport, SimMode, UplinkRoute,
};
pub use stats::McEstimate;
