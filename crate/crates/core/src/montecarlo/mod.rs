//! Stochastic simulator and oracle for the analytic model: deployments,
//! association, fading, DL/UL SINR, cell loads, and full Monte Carlo reports
//! with standard errors.
//!
//! Two device-interference modes are supported. `Accurate` draws the device
//! process itself and activates one uniformly chosen device per non-empty
//! nearest-BS cell; `Approximate` replaces the active devices by an
//! independent Poisson field of density `lambda_m + lambda_f` outside the
//! serving distance, which is exactly the field the closed forms integrate.
//!
//! Estimation runs data-parallel over realizations (rayon) behind the
//! `parallel` feature, with [`estimate_serial`] always available; both fold
//! outcomes in realization order and produce bit-identical reports.

mod report;
mod trial;

use rand::Rng;

use crate::analytic::AssociationCase;
use crate::config::{NetworkConfig, Tier};
use crate::error::{Error, Result};
use crate::geometry::{self, Point2, PointSet, RngSeed};
use crate::stats::McEstimate;

use trial::TrialOutcome;

/// Minimum number of realizations [`estimate`] accepts.
pub const MIN_SAMPLES: u64 = 100;

/// Load statistics (devices per cell) are pooled over at most this many
/// dedicated realizations: each one tallies every credited cell of an
/// enlarged window, so a couple of thousand realizations pin the loads far
/// below the coverage noise floor while keeping large sweeps cheap.
pub const LOAD_REALIZATION_CAP: u64 = 2000;

/// Device-interference simulation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimMode {
    /// Devices drawn as a Poisson process of density `lambda_d`; one uniform
    /// device per non-empty nearest-BS cell transmits.
    Accurate,
    /// Active devices replaced by an independent Poisson field of density
    /// `lambda_m + lambda_f` beyond the serving distance.
    Approximate,
}

impl SimMode {
    pub fn label(self) -> &'static str {
        match self {
            SimMode::Accurate => "accurate",
            SimMode::Approximate => "approx",
        }
    }
}

/// Which uplink serving choice to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UplinkRoute {
    /// Transmit to the DL access point (no decoupling).
    Coupled,
    /// Transmit to the nearest BS.
    Decoupled,
}

/// A serving-BS reference: tier, index within the tier's point set, and
/// distance from the typical device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsRef {
    pub tier: Tier,
    pub index: usize,
    pub distance: f64,
}

impl BsRef {
    pub(crate) fn new(tier: Tier, index: usize, distance: f64) -> Self {
        Self {
            tier,
            index,
            distance,
        }
    }

    pub fn position(&self, dep: &Deployment) -> Point2 {
        match self.tier {
            Tier::Macro => dep.mbs.points()[self.index],
            Tier::Femto => dep.fbs.points()[self.index],
        }
    }
}

/// DL and UL access points of the typical device plus the joint case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationOutcome {
    pub dlap: BsRef,
    pub ulap: BsRef,
    pub case: AssociationCase,
}

/// One realization of the three point processes. The typical device sits at
/// the origin and is not part of `devices`; conditioning a Poisson process on
/// that extra point changes nothing else about its law.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub mbs: PointSet,
    pub fbs: PointSet,
    pub devices: PointSet,
    /// Number of draws rejected because a positive-density tier was empty.
    pub rejected_draws: u32,
}

/// Draws one deployment for (seed, realization index): both BS tiers with
/// empty-tier rejection, plus the device process. Deterministic per input.
pub fn draw_deployment(cfg: &NetworkConfig, seed: RngSeed, realization: u64) -> Result<Deployment> {
    let (mbs, fbs, rejected) = trial::draw_bs_tiers(cfg, seed, realization)?;
    let devices = geometry::sample_ppp(
        cfg.lambda_d(),
        cfg.window_radius(),
        &mut seed.stream(realization, trial::PURPOSE_DEVICES),
    )?;
    Ok(Deployment {
        mbs,
        fbs,
        devices,
        rejected_draws: rejected,
    })
}

/// Association of the typical device: DL access point by maximum average
/// received power, UL access point by minimum distance.
pub fn associate(dep: &Deployment, cfg: &NetworkConfig) -> Result<AssociationOutcome> {
    trial::associate_sets(&dep.mbs, &dep.fbs, cfg)
}

/// DL SINR at the typical device for one fresh set of fading marks: serving
/// power over all other BSs of both tiers plus noise.
pub fn dl_sinr<R: Rng + ?Sized>(
    dep: &Deployment,
    out: &AssociationOutcome,
    cfg: &NetworkConfig,
    rng: &mut R,
) -> f64 {
    trial::dl_sinr_scaled(&dep.mbs, &dep.fbs, out, cfg, 0.0, 1.0, rng)
}

/// UL SINR at the serving BS selected by `route`, with interfering devices
/// drawn according to `mode`. The realization is shifted so the receiving BS
/// sits at the origin before interferer distances are evaluated (stationarity
/// makes the shifted field equal in law to the original).
pub fn ul_sinr<R: Rng + ?Sized>(
    dep: &Deployment,
    out: &AssociationOutcome,
    cfg: &NetworkConfig,
    mode: SimMode,
    route: UplinkRoute,
    rng: &mut R,
) -> Result<f64> {
    let serving = match route {
        UplinkRoute::Coupled => out.dlap,
        UplinkRoute::Decoupled => out.ulap,
    };
    let receiver = serving.position(dep);
    let d2 = serving.distance * serving.distance;

    let interference = match mode {
        SimMode::Approximate => {
            let field = geometry::sample_ppp(cfg.lambda_interferers(), cfg.window_radius(), rng)?;
            // recenter on the receiver, then drop everything nearer than the
            // typical device (the independent-field construction keeps only
            // other-cell transmitters, which are beyond the serving distance)
            let centered = geometry::translate(&field, receiver.negated());
            trial::ul_interference(
                centered.points(),
                Point2::ORIGIN,
                d2,
                cfg.p_d(),
                cfg.alpha(),
                0.0,
                rng,
            )
        }
        SimMode::Accurate => {
            let assoc = trial::device_associations(
                dep.devices.points(),
                dep.mbs.points(),
                dep.fbs.points(),
            );
            let macro_count = dep.mbs.len();
            let total = macro_count + dep.fbs.len();
            let picks = trial::schedule_one_per_cell(
                dep.devices.points(),
                &assoc,
                macro_count,
                total,
                rng,
            );
            let serving_gid = match serving.tier {
                Tier::Macro => serving.index,
                Tier::Femto => macro_count + serving.index,
            };
            // the serving BS's scheduled device is the typical device itself
            let others: Vec<Point2> = picks
                .iter()
                .filter(|(gid, _)| *gid != serving_gid)
                .map(|(_, p)| *p)
                .collect();
            let interferers = PointSet::from_points(others, dep.devices.window_radius(), 0.0);
            let centered = geometry::translate(&interferers, receiver.negated());
            trial::ul_interference(
                centered.points(),
                Point2::ORIGIN,
                0.0,
                cfg.p_d(),
                cfg.alpha(),
                0.0,
                rng,
            )
        }
    };
    Ok(trial::ul_sinr_value(d2, interference, cfg, rng))
}

/// A full Monte Carlo report. Every scalar is an [`McEstimate`] carrying its
/// own standard error and sample count; gains are ratios of mean throughputs
/// with first-order error propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub mode: SimMode,
    /// Linear SINR target.
    pub gamma: f64,
    pub n_realizations: u64,
    pub load_realizations: u64,
    pub rejected_draws: u64,
    /// Joint case probabilities, indexed case 1 to 4.
    pub cases: [McEstimate; 4],
    pub a_md: McEstimate,
    pub a_fd: McEstimate,
    pub a_mu: McEstimate,
    pub a_fu: McEstimate,
    pub load_md: McEstimate,
    pub load_fd: McEstimate,
    pub load_mu: McEstimate,
    pub load_fu: McEstimate,
    pub cov_dl_m: McEstimate,
    pub cov_dl_f: McEstimate,
    pub cov_dl: McEstimate,
    pub cov_ul_coupled_m: McEstimate,
    pub cov_ul_coupled_f: McEstimate,
    pub cov_ul_coupled: McEstimate,
    pub cov_ul_decoupled_m: McEstimate,
    pub cov_ul_decoupled_f: McEstimate,
    pub cov_ul_decoupled: McEstimate,
    pub r_dl_m: McEstimate,
    pub r_dl_f: McEstimate,
    pub r_dl: McEstimate,
    pub r_ul_coupled_m: McEstimate,
    pub r_ul_coupled_f: McEstimate,
    pub r_ul_coupled: McEstimate,
    pub r_ul_decoupled_m: McEstimate,
    pub r_ul_decoupled_f: McEstimate,
    pub r_ul_decoupled: McEstimate,
    pub eta_m: McEstimate,
    pub eta_f: McEstimate,
    pub eta_bar: McEstimate,
}

fn check_estimate_args(gamma: f64, n: u64) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples { n, min: MIN_SAMPLES });
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: format!("SINR target must be positive and finite, got {gamma}"),
        });
    }
    Ok(())
}

fn want_loads(index: u64, n: u64) -> bool {
    index < LOAD_REALIZATION_CAP.min(n)
}

/// Estimates every model quantity over `n` independent realizations.
///
/// Runs in parallel over realizations when the `parallel` feature is enabled
/// (sequential otherwise); results are identical either way because each
/// realization owns its RNG sub-streams and outcomes are reduced in index
/// order.
pub fn estimate(
    cfg: &NetworkConfig,
    gamma: f64,
    n: u64,
    seed: RngSeed,
    mode: SimMode,
) -> Result<McReport> {
    check_estimate_args(gamma, n)?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let outcomes: Result<Vec<TrialOutcome>> = (0..n)
            .into_par_iter()
            .map(|i| trial::run_trial(cfg, gamma, seed, i, mode, want_loads(i, n)))
            .collect();
        Ok(report::assemble(cfg, gamma, mode, &outcomes?))
    }
    #[cfg(not(feature = "parallel"))]
    {
        estimate_serial(cfg, gamma, n, seed, mode)
    }
}

/// Sequential version of [`estimate`]; same inputs, bit-identical output.
pub fn estimate_serial(
    cfg: &NetworkConfig,
    gamma: f64,
    n: u64,
    seed: RngSeed,
    mode: SimMode,
) -> Result<McReport> {
    check_estimate_args(gamma, n)?;
    let outcomes: Result<Vec<TrialOutcome>> = (0..n)
        .map(|i| trial::run_trial(cfg, gamma, seed, i, mode, want_loads(i, n)))
        .collect();
    Ok(report::assemble(cfg, gamma, mode, &outcomes?))
}

/// Empirical case and tier association frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseFrequencies {
    pub cases: [McEstimate; 4],
    pub a_md: McEstimate,
    pub a_fd: McEstimate,
    pub a_mu: McEstimate,
    pub a_fu: McEstimate,
    pub n_realizations: u64,
    pub rejected_draws: u64,
}

/// Classifies `n` realizations into the four association cases without
/// evaluating any SINR; the cheap oracle for the closed-form probabilities
/// and for density sweeps.
pub fn case_frequencies(cfg: &NetworkConfig, n: u64, seed: RngSeed) -> Result<CaseFrequencies> {
    if n == 0 {
        return Err(Error::TooFewSamples { n, min: 1 });
    }
    let classify = |i: u64| -> Result<(u8, u32)> {
        let (mbs, fbs, rejected) = trial::draw_bs_tiers(cfg, seed, i)?;
        let out = trial::associate_sets(&mbs, &fbs, cfg)?;
        Ok((out.case.index() as u8, rejected))
    };

    #[cfg(feature = "parallel")]
    let results: Result<Vec<(u8, u32)>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(classify).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Result<Vec<(u8, u32)>> = (0..n).map(classify).collect();

    let mut counts = [0u64; 4];
    let mut rejected = 0u64;
    for (case, rej) in results? {
        counts[case as usize] += 1;
        rejected += rej as u64;
    }
    Ok(CaseFrequencies {
        cases: std::array::from_fn(|i| McEstimate::from_bernoulli(counts[i], n)),
        a_md: McEstimate::from_bernoulli(counts[0] + counts[1], n),
        a_fd: McEstimate::from_bernoulli(counts[2] + counts[3], n),
        a_mu: McEstimate::from_bernoulli(counts[0] + counts[2], n),
        a_fu: McEstimate::from_bernoulli(counts[1] + counts[3], n),
        n_realizations: n,
        rejected_draws: rejected,
    })
}
