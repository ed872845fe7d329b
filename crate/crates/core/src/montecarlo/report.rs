//! Reduction of per-realization outcomes into a full Monte Carlo report.
//!
//! Realization outcomes are folded in index order, so the report is
//! bit-identical no matter how the trials were scheduled across threads.

use crate::analytic::AssociationCase;
use crate::config::NetworkConfig;
use crate::stats::McEstimate;

use super::trial::TrialOutcome;
use super::{McReport, SimMode};

#[derive(Default)]
struct ConditionalCount {
    hits: u64,
    trials: u64,
}

impl ConditionalCount {
    fn push(&mut self, covered: bool) {
        self.trials += 1;
        if covered {
            self.hits += 1;
        }
    }

    fn estimate(&self) -> McEstimate {
        McEstimate::from_bernoulli(self.hits, self.trials)
    }
}

/// Pooled ratio estimator for the mean cell load: total attached devices over
/// total credited cells across realizations, with the survey-sampling
/// variance `Var(R) ~ Var(s - R c) / (n c_bar^2)`.
#[derive(Default)]
struct RatioStats {
    n: u64,
    sum_s: f64,
    sum_ss: f64,
    sum_c: f64,
    sum_cc: f64,
    sum_sc: f64,
}

impl RatioStats {
    fn push(&mut self, devices: u64, cells: u32) {
        let s = devices as f64;
        let c = cells as f64;
        self.n += 1;
        self.sum_s += s;
        self.sum_ss += s * s;
        self.sum_c += c;
        self.sum_cc += c * c;
        self.sum_sc += s * c;
    }

    fn estimate(&self) -> McEstimate {
        if self.sum_c == 0.0 {
            return McEstimate {
                mean: f64::NAN,
                std_error: f64::NAN,
                n_samples: 0,
            };
        }
        let n = self.n as f64;
        let ratio = self.sum_s / self.sum_c;
        let c_mean = self.sum_c / n;
        // residual variance of s_i - ratio * c_i (its mean is zero)
        let resid_ss = self.sum_ss - 2.0 * ratio * self.sum_sc + ratio * ratio * self.sum_cc;
        let var = if self.n < 2 {
            0.0
        } else {
            (resid_ss / (n - 1.0)).max(0.0)
        };
        McEstimate {
            mean: ratio,
            std_error: (var / n).sqrt() / c_mean,
            n_samples: self.n,
        }
    }
}

pub(crate) fn assemble(
    cfg: &NetworkConfig,
    gamma: f64,
    mode: SimMode,
    outcomes: &[TrialOutcome],
) -> McReport {
    let n = outcomes.len() as u64;
    let mut case_counts = [0u64; 4];
    let mut rejected: u64 = 0;
    let mut load_realizations: u64 = 0;

    // coverage conditioned on the serving tier of the relevant link
    let mut dl_m = ConditionalCount::default();
    let mut dl_f = ConditionalCount::default();
    let mut dl_all = ConditionalCount::default();
    let mut ulc_m = ConditionalCount::default();
    let mut ulc_f = ConditionalCount::default();
    let mut ulc_all = ConditionalCount::default();
    let mut uld_m = ConditionalCount::default();
    let mut uld_f = ConditionalCount::default();
    let mut uld_all = ConditionalCount::default();
    // unconditional per-tier coverage indicators (tier weight folded in)
    let mut dl_m_w = ConditionalCount::default();
    let mut dl_f_w = ConditionalCount::default();
    let mut ulc_m_w = ConditionalCount::default();
    let mut ulc_f_w = ConditionalCount::default();
    let mut uld_m_w = ConditionalCount::default();
    let mut uld_f_w = ConditionalCount::default();

    let mut load_md = RatioStats::default();
    let mut load_fd = RatioStats::default();
    let mut load_mu = RatioStats::default();
    let mut load_fu = RatioStats::default();

    for o in outcomes {
        case_counts[o.case.index()] += 1;
        rejected += o.rejected as u64;

        let dl_macro = matches!(
            o.case,
            AssociationCase::Case1 | AssociationCase::Case2
        );
        let ul_macro = matches!(
            o.case,
            AssociationCase::Case1 | AssociationCase::Case3
        );

        dl_all.push(o.dl_covered);
        ulc_all.push(o.ul_covered_coupled);
        uld_all.push(o.ul_covered_decoupled);
        if dl_macro {
            dl_m.push(o.dl_covered);
            ulc_m.push(o.ul_covered_coupled);
        } else {
            dl_f.push(o.dl_covered);
            ulc_f.push(o.ul_covered_coupled);
        }
        if ul_macro {
            uld_m.push(o.ul_covered_decoupled);
        } else {
            uld_f.push(o.ul_covered_decoupled);
        }
        dl_m_w.push(dl_macro && o.dl_covered);
        dl_f_w.push(!dl_macro && o.dl_covered);
        ulc_m_w.push(dl_macro && o.ul_covered_coupled);
        ulc_f_w.push(!dl_macro && o.ul_covered_coupled);
        uld_m_w.push(ul_macro && o.ul_covered_decoupled);
        uld_f_w.push(!ul_macro && o.ul_covered_decoupled);

        if let Some(loads) = o.loads {
            load_realizations += 1;
            load_md.push(loads.md.devices, loads.md.cells);
            load_fd.push(loads.fd.devices, loads.fd.cells);
            load_mu.push(loads.mu.devices, loads.mu.cells);
            load_fu.push(loads.fu.devices, loads.fu.cells);
        }
    }

    let p_case: [McEstimate; 4] =
        std::array::from_fn(|i| McEstimate::from_bernoulli(case_counts[i], n));
    let a_md = McEstimate::from_bernoulli(case_counts[0] + case_counts[1], n);
    let a_fd = McEstimate::from_bernoulli(case_counts[2] + case_counts[3], n);
    let a_mu = McEstimate::from_bernoulli(case_counts[0] + case_counts[2], n);
    let a_fu = McEstimate::from_bernoulli(case_counts[1] + case_counts[3], n);

    let spectral = (1.0 + gamma).log2();
    let load_md = load_md.estimate();
    let load_fd = load_fd.estimate();
    let load_mu = load_mu.estimate();
    let load_fu = load_fu.estimate();

    // per-device rates per tier (conditional coverage over mean load), and
    // aggregates built from the tier-weighted indicators so the association
    // weighting stays a single Bernoulli mean; an exactly zero coverage maps
    // to an exactly zero rate (absent tier or total outage)
    let rate = |cov: McEstimate, load: McEstimate| -> McEstimate {
        if cov.mean == 0.0 {
            McEstimate {
                mean: 0.0,
                std_error: 0.0,
                n_samples: cov.n_samples,
            }
        } else {
            cov.scaled(spectral).ratio(load)
        }
    };
    let r_dl_m = rate(dl_m.estimate(), load_md);
    let r_dl_f = rate(dl_f.estimate(), load_fd);
    let r_dl = rate(dl_m_w.estimate(), load_md).plus(rate(dl_f_w.estimate(), load_fd));
    let r_ulc_m = rate(ulc_m.estimate(), load_md);
    let r_ulc_f = rate(ulc_f.estimate(), load_fd);
    let r_ul_coupled = rate(ulc_m_w.estimate(), load_md).plus(rate(ulc_f_w.estimate(), load_fd));
    let r_uld_m = rate(uld_m.estimate(), load_mu);
    let r_uld_f = rate(uld_f.estimate(), load_fu);
    let r_ul_decoupled = rate(uld_m_w.estimate(), load_mu).plus(rate(uld_f_w.estimate(), load_fu));

    // decoupling gains as ratios of mean throughputs, mapped per case
    let eta_m = r_uld_m.ratio(r_ulc_m);
    let eta_f = r_uld_f.ratio(r_ulc_f);
    let eta_case2 = r_uld_f.ratio(r_ulc_m);
    let eta_bar = weighted(p_case[0], eta_m)
        .plus(weighted(p_case[1], eta_case2))
        .plus(weighted(p_case[3], eta_f));

    McReport {
        mode,
        gamma,
        n_realizations: n,
        load_realizations,
        rejected_draws: rejected,
        cases: p_case,
        a_md,
        a_fd,
        a_mu,
        a_fu,
        load_md,
        load_fd,
        load_mu,
        load_fu,
        cov_dl_m: dl_m.estimate(),
        cov_dl_f: dl_f.estimate(),
        cov_dl: dl_all.estimate(),
        cov_ul_coupled_m: ulc_m.estimate(),
        cov_ul_coupled_f: ulc_f.estimate(),
        cov_ul_coupled: ulc_all.estimate(),
        cov_ul_decoupled_m: uld_m.estimate(),
        cov_ul_decoupled_f: uld_f.estimate(),
        cov_ul_decoupled: uld_all.estimate(),
        r_dl_m,
        r_dl_f,
        r_dl,
        r_ul_coupled_m: r_ulc_m,
        r_ul_coupled_f: r_ulc_f,
        r_ul_coupled,
        r_ul_decoupled_m: r_uld_m,
        r_ul_decoupled_f: r_uld_f,
        r_ul_decoupled,
        eta_m,
        eta_f,
        eta_bar,
    }
    .sanitize_for(cfg)
}

/// Case-probability weight times a per-case gain; a zero weight contributes
/// exactly zero even when the gain itself is undefined (absent tier).
fn weighted(weight: McEstimate, gain: McEstimate) -> McEstimate {
    if weight.mean == 0.0 {
        McEstimate {
            mean: 0.0,
            std_error: 0.0,
            n_samples: weight.n_samples,
        }
    } else {
        weight.product(gain)
    }
}

impl McReport {
    /// Replaces per-tier estimates of an absent tier (zero density) by exact
    /// zeros so that aggregates stay finite; estimates with zero samples keep
    /// their NaN marker.
    fn sanitize_for(mut self, cfg: &NetworkConfig) -> Self {
        let zero = |n: u64| McEstimate {
            mean: 0.0,
            std_error: 0.0,
            n_samples: n,
        };
        if cfg.lambda_f() == 0.0 {
            self.r_dl_f = zero(0);
            self.r_ul_coupled_f = zero(0);
            self.r_ul_decoupled_f = zero(0);
        }
        if cfg.lambda_m() == 0.0 {
            self.r_dl_m = zero(0);
            self.r_ul_coupled_m = zero(0);
            self.r_ul_decoupled_m = zero(0);
        }
        self
    }
}
