//! Closed forms and quadratures for the two-tier association and throughput
//! model: joint DL/UL association-case probabilities, per-tier association
//! probabilities, mean loads, serving-distance densities, coverage and
//! average-throughput integrals, the equivalent single-tier reductions, and
//! the uplink decoupling gains.

mod throughput;

pub use throughput::{
    coverage_dl, coverage_dl_equivalent, coverage_ul, dl_throughput, dl_throughput_equivalent,
    equivalent_dl_density, kappa, throughput_gains, ul_throughput, Gains, TierThroughput,
};

use crate::config::{NetworkConfig, Rule, Tier};
use crate::error::{Error, Result};

/// The four joint DL/UL association outcomes.
///
/// With `p_m >= p_f`, a device whose DL access point is a femto BS is always
/// closer to that femto BS than to any macro BS, so `Case3` has probability
/// zero; it is kept in the enum because the simulator classifies against all
/// four combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssociationCase {
    /// DL and UL both on the macro tier.
    Case1,
    /// DL on macro, UL on femto: decoupled access.
    Case2,
    /// DL on femto, UL on macro (impossible when `p_m >= p_f`).
    Case3,
    /// DL and UL both on the femto tier.
    Case4,
}

impl AssociationCase {
    pub const ALL: [AssociationCase; 4] = [
        AssociationCase::Case1,
        AssociationCase::Case2,
        AssociationCase::Case3,
        AssociationCase::Case4,
    ];

    /// Zero-based index into probability arrays.
    pub fn index(self) -> usize {
        match self {
            AssociationCase::Case1 => 0,
            AssociationCase::Case2 => 1,
            AssociationCase::Case3 => 2,
            AssociationCase::Case4 => 3,
        }
    }

    pub fn from_tiers(dl: Tier, ul: Tier) -> Self {
        match (dl, ul) {
            (Tier::Macro, Tier::Macro) => AssociationCase::Case1,
            (Tier::Macro, Tier::Femto) => AssociationCase::Case2,
            (Tier::Femto, Tier::Macro) => AssociationCase::Case3,
            (Tier::Femto, Tier::Femto) => AssociationCase::Case4,
        }
    }

    /// Whether DL and UL use different tiers.
    pub fn is_decoupled(self) -> bool {
        matches!(self, AssociationCase::Case2 | AssociationCase::Case3)
    }
}

/// Probabilities of the four association cases. Sums to one; `p3` is exactly
/// zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseProbabilities {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl CaseProbabilities {
    pub fn as_array(&self) -> [f64; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }

    pub fn sum(&self) -> f64 {
        self.p1 + self.p2 + self.p3 + self.p4
    }
}

/// Per-tier association probabilities under DL and UL rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierAssociation {
    /// Macro tier, DL rule.
    pub a_md: f64,
    /// Femto tier, DL rule.
    pub a_fd: f64,
    /// Macro tier, UL rule.
    pub a_mu: f64,
    /// Femto tier, UL rule.
    pub a_fu: f64,
}

impl TierAssociation {
    pub fn by(&self, tier: Tier, rule: Rule) -> f64 {
        match (tier, rule) {
            (Tier::Macro, Rule::Downlink) => self.a_md,
            (Tier::Femto, Rule::Downlink) => self.a_fd,
            (Tier::Macro, Rule::Uplink) => self.a_mu,
            (Tier::Femto, Rule::Uplink) => self.a_fu,
        }
    }
}

/// Mean numbers of devices sharing one BS of each tier under each rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanLoads {
    pub n_md: f64,
    pub n_fd: f64,
    pub n_mu: f64,
    pub n_fu: f64,
}

impl MeanLoads {
    pub fn by(&self, tier: Tier, rule: Rule) -> f64 {
        match (tier, rule) {
            (Tier::Macro, Rule::Downlink) => self.n_md,
            (Tier::Femto, Rule::Downlink) => self.n_fd,
            (Tier::Macro, Rule::Uplink) => self.n_mu,
            (Tier::Femto, Rule::Uplink) => self.n_fu,
        }
    }
}

/// Joint association-case probabilities.
///
/// With `q = (p_m/p_f)^(2/alpha)` and densities `lambda_m`, `lambda_f`:
/// `p1 = lambda_m / (lambda_m + lambda_f)`,
/// `p4 = lambda_f / (lambda_f + q lambda_m)`,
/// `p2 = lambda_f / (lambda_m + lambda_f) - p4`, and `p3 = 0`.
pub fn case_probabilities(cfg: &NetworkConfig) -> CaseProbabilities {
    let lm = cfg.lambda_m();
    let lf = cfg.lambda_f();
    let q = cfg.power_ratio_2a();

    let p1 = lm / (lm + lf);
    // computed once so that p2 + p4 cancels exactly in floating point
    let p4 = if lf == 0.0 { 0.0 } else { lf / (lf + q * lm) };
    let p2 = lf / (lm + lf) - p4;
    CaseProbabilities {
        p1,
        p2,
        p3: 0.0,
        p4,
    }
}

/// Per-tier association probabilities as sums of case probabilities.
pub fn tier_association(cp: &CaseProbabilities) -> TierAssociation {
    TierAssociation {
        a_md: cp.p1 + cp.p2,
        a_fd: cp.p3 + cp.p4,
        a_mu: cp.p1 + cp.p3,
        a_fu: cp.p2 + cp.p4,
    }
}

/// Mean number of devices sharing a BS of density `tier_density` when the
/// tier attracts devices with probability `assoc_prob`:
/// `lambda_d * assoc_prob / tier_density`.
pub fn mean_load(cfg: &NetworkConfig, assoc_prob: f64, tier_density: f64) -> Result<f64> {
    if !(tier_density > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tier_density",
            reason: format!("must be positive, got {tier_density}"),
        });
    }
    Ok(cfg.lambda_d() * assoc_prob / tier_density)
}

/// All four mean loads. Absent tiers (zero density) carry zero load.
pub fn mean_loads(cfg: &NetworkConfig) -> MeanLoads {
    let assoc = tier_association(&case_probabilities(cfg));
    let load = |a: f64, lambda: f64| if lambda > 0.0 { cfg.lambda_d() * a / lambda } else { 0.0 };
    MeanLoads {
        n_md: load(assoc.a_md, cfg.lambda_m()),
        n_fd: load(assoc.a_fd, cfg.lambda_f()),
        n_mu: load(assoc.a_mu, cfg.lambda_m()),
        n_fu: load(assoc.a_fu, cfg.lambda_f()),
    }
}

/// Serving-distance probability density at `x` for the given tier and
/// association rule.
///
/// DL rule: `(2 pi lambda_v / A_vD) x exp(-(lambda_v + lambda_u (p_u/p_v)^(2/alpha)) pi x^2)`.
/// UL rule: same form with combined rate `lambda_v + lambda_u`.
pub fn serving_distance_pdf(cfg: &NetworkConfig, tier: Tier, rule: Rule, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let lambda_v = cfg.tier_density(tier);
    if lambda_v == 0.0 {
        return 0.0;
    }
    let assoc = tier_association(&case_probabilities(cfg));
    let a = assoc.by(tier, rule);
    let rate = match rule {
        Rule::Downlink => cfg.dl_distance_rate(tier),
        Rule::Uplink => cfg.lambda_mf(),
    };
    (2.0 * std::f64::consts::PI * lambda_v / a)
        * x
        * (-rate * std::f64::consts::PI * x * x).exp()
}

/// Location and height of the maximum of the decoupled-access probability
/// `p2` as a function of the density ratio `lambda_f / lambda_m`, searched
/// over `ratio_range` by a coarse log grid followed by golden-section
/// refinement to 1e-6 relative width.
pub fn decoupling_peak(cfg: &NetworkConfig, ratio_range: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = ratio_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "ratio_range",
            reason: format!("must satisfy 0 < lo < hi < inf, got ({lo}, {hi})"),
        });
    }
    let q = cfg.power_ratio_2a();
    let p2_at = |r: f64| r / (1.0 + r) - r / (r + q);

    const GRID: usize = 512;
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    let grid_point = |i: usize| (ln_lo + (ln_hi - ln_lo) * i as f64 / (GRID - 1) as f64).exp();
    for i in 0..GRID {
        let v = p2_at(grid_point(i));
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }

    // golden-section refinement inside the bracketing grid cells
    let mut a = grid_point(best_i.saturating_sub(1));
    let mut b = grid_point((best_i + 1).min(GRID - 1));
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let (mut fc, mut fd) = (p2_at(c), p2_at(d));
    while (b - a) > 1e-6 * b.abs().max(1e-12) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = p2_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = p2_at(d);
        }
    }
    let ratio = 0.5 * (a + b);
    Ok((ratio, p2_at(ratio).max(0.0)))
}

/// Every analytic scalar for one configuration and SINR target, in linear
/// units. Rates are spectral efficiencies in bit/s/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticReport {
    /// Linear SINR target.
    pub gamma: f64,
    /// Interference functional `kappa(alpha, gamma)`.
    pub kappa: f64,
    pub cases: CaseProbabilities,
    pub tiers: TierAssociation,
    pub loads: MeanLoads,
    /// DL coverage probability per tier and aggregate.
    pub cov_dl_m: f64,
    pub cov_dl_f: f64,
    pub cov_dl: f64,
    pub r_dl_m: f64,
    pub r_dl_f: f64,
    pub r_dl: f64,
    /// Equivalent single-tier DL model: density and throughput.
    pub equivalent_dl_density: f64,
    pub r_dl_equivalent: f64,
    /// UL with the serving BS chosen by the DL rule (no decoupling).
    pub cov_ul_coupled_m: f64,
    pub cov_ul_coupled_f: f64,
    pub cov_ul_coupled: f64,
    pub r_ul_coupled_m: f64,
    pub r_ul_coupled_f: f64,
    pub r_ul_coupled: f64,
    /// UL with the nearest BS (decoupled access).
    pub cov_ul_decoupled_m: f64,
    pub cov_ul_decoupled_f: f64,
    pub cov_ul_decoupled: f64,
    pub r_ul_decoupled_m: f64,
    pub r_ul_decoupled_f: f64,
    pub r_ul_decoupled: f64,
    pub r_ul_decoupled_equivalent: f64,
    pub eta_m: f64,
    pub eta_f: f64,
    pub eta_bar: f64,
}

/// Evaluates the full analytic report at linear SINR target `gamma`.
pub fn full_report(cfg: &NetworkConfig, gamma: f64) -> Result<AnalyticReport> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: format!("SINR target must be positive and finite, got {gamma}"),
        });
    }
    let kappa = kappa(cfg.alpha(), gamma)?;
    let cases = case_probabilities(cfg);
    let tiers = tier_association(&cases);
    let loads = mean_loads(cfg);

    let dl = dl_throughput(cfg, gamma)?;
    let ul_c = ul_throughput(cfg, gamma, false)?;
    let ul_d = ul_throughput(cfg, gamma, true)?;
    let gains = throughput_gains(cfg, gamma)?;

    Ok(AnalyticReport {
        gamma,
        kappa,
        cases,
        tiers,
        loads,
        cov_dl_m: dl.cov_m,
        cov_dl_f: dl.cov_f,
        cov_dl: tiers.a_md * dl.cov_m + tiers.a_fd * dl.cov_f,
        r_dl_m: dl.r_m,
        r_dl_f: dl.r_f,
        r_dl: dl.r_total,
        equivalent_dl_density: equivalent_dl_density(cfg),
        r_dl_equivalent: dl_throughput_equivalent(cfg, gamma)?,
        cov_ul_coupled_m: ul_c.cov_m,
        cov_ul_coupled_f: ul_c.cov_f,
        cov_ul_coupled: tiers.a_md * ul_c.cov_m + tiers.a_fd * ul_c.cov_f,
        r_ul_coupled_m: ul_c.r_m,
        r_ul_coupled_f: ul_c.r_f,
        r_ul_coupled: ul_c.r_total,
        cov_ul_decoupled_m: ul_d.cov_m,
        cov_ul_decoupled_f: ul_d.cov_f,
        cov_ul_decoupled: tiers.a_mu * ul_d.cov_m + tiers.a_fu * ul_d.cov_f,
        r_ul_decoupled_m: ul_d.r_m,
        r_ul_decoupled_f: ul_d.r_f,
        r_ul_decoupled: ul_d.r_total,
        r_ul_decoupled_equivalent: throughput::ul_throughput_equivalent(cfg, gamma)?,
        eta_m: gains.eta_m,
        eta_f: gains.eta_f,
        eta_bar: gains.eta_bar,
    })
}
