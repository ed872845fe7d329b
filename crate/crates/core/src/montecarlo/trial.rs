//! Per-realization simulation: deployment draw with empty-tier rejection,
//! association, fading, DL/UL SINR, interferer scheduling, and cell loads.
//!
//! Randomness is organized as independent ChaCha sub-streams per
//! (seed, realization, purpose), so skipping an optional stage (for example
//! device sampling when no load statistics are wanted) never shifts the draws
//! of any other stage.

use rand::Rng;
use rand_distr::Exp1;

use crate::analytic::AssociationCase;
use crate::config::{NetworkConfig, Tier};
use crate::error::{Error, Result};
use crate::geometry::{self, Point2, PointSet, RngSeed};

use super::{AssociationOutcome, BsRef};

/// RNG sub-stream purposes.
pub(crate) const PURPOSE_MACRO: u64 = 0;
pub(crate) const PURPOSE_FEMTO: u64 = 1;
pub(crate) const PURPOSE_DEVICES: u64 = 2;
pub(crate) const PURPOSE_DL_FADING: u64 = 3;
pub(crate) const PURPOSE_UL_FADING: u64 = 4;
pub(crate) const PURPOSE_INTERFERERS: u64 = 5;
pub(crate) const PURPOSE_SCHEDULING: u64 = 6;
pub(crate) const PURPOSE_LOAD_MACRO: u64 = 7;
pub(crate) const PURPOSE_LOAD_FEMTO: u64 = 8;
pub(crate) const PURPOSE_LOAD_DEVICES: u64 = 9;

/// Load statistics run on their own enlarged window. Cell loads are credited
/// only to BSs in the inner half of that window, and with the 1.5x factor a
/// boundary device can only reach a credited BS if its whole credit radius is
/// empty (probability under exp(-14) for the smallest tier), which removes
/// the edge-capture bias that a single shared window would leave on the
/// long-reach macro cells.
pub(crate) const LOAD_WINDOW_SCALE: f64 = 1.5;

/// Resampling budget before a deployment draw is declared exhausted. With
/// the window rule the per-attempt rejection probability is below exp(-25),
/// so hitting this limit means the configuration, not bad luck.
const MAX_DRAW_ATTEMPTS: u32 = 64;

/// Path gain `d^(-alpha)` from a squared distance.
#[inline]
pub(crate) fn path_gain_d2(d2: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (d2 * d2)
    } else {
        d2.powf(-0.5 * alpha)
    }
}

/// Expected interference received from beyond the sampling window: the mean
/// of `sum P h r^(-alpha)` over a PPP of density `lambda` outside radius
/// `window_radius`, which is `2 pi lambda P R^(2-alpha) / (alpha - 2)`.
/// Added to simulated interference sums so that the finite window reproduces
/// the infinite-plane model without bias.
pub(crate) fn far_field_interference(lambda: f64, power: f64, window_radius: f64, alpha: f64) -> f64 {
    2.0 * std::f64::consts::PI * lambda * power * window_radius.powf(2.0 - alpha) / (alpha - 2.0)
}

/// Draws the two BS tiers, rejecting and resampling realizations where a
/// positive-density tier came out empty. Returns the tiers and the number of
/// rejected attempts.
pub(crate) fn draw_bs_tiers(
    cfg: &NetworkConfig,
    seed: RngSeed,
    realization: u64,
) -> Result<(PointSet, PointSet, u32)> {
    draw_tiers_on(
        cfg,
        seed,
        realization,
        cfg.window_radius(),
        PURPOSE_MACRO,
        PURPOSE_FEMTO,
    )
}

fn draw_tiers_on(
    cfg: &NetworkConfig,
    seed: RngSeed,
    realization: u64,
    radius: f64,
    purpose_m: u64,
    purpose_f: u64,
) -> Result<(PointSet, PointSet, u32)> {
    for attempt in 0..MAX_DRAW_ATTEMPTS {
        let mbs = geometry::sample_ppp(
            cfg.lambda_m(),
            radius,
            &mut seed.stream_attempt(realization, purpose_m, attempt),
        )?;
        let fbs = geometry::sample_ppp(
            cfg.lambda_f(),
            radius,
            &mut seed.stream_attempt(realization, purpose_f, attempt),
        )?;
        let rejected = (cfg.lambda_m() > 0.0 && mbs.is_empty())
            || (cfg.lambda_f() > 0.0 && fbs.is_empty());
        if !rejected {
            return Ok((mbs, fbs, attempt));
        }
    }
    Err(Error::DrawExhausted {
        attempts: MAX_DRAW_ATTEMPTS,
    })
}

/// Association of the typical device at the origin: the DL access point
/// maximizes the fading-averaged received power `p_v d^(-alpha)` between the
/// two tier-nearest candidates, the UL access point is the overall nearest
/// BS. Power and distance ties resolve toward the femto tier, matching the
/// strict inequality in the macro conditions.
pub(crate) fn associate_sets(
    mbs: &PointSet,
    fbs: &PointSet,
    cfg: &NetworkConfig,
) -> Result<AssociationOutcome> {
    let near_m = if mbs.is_empty() {
        None
    } else {
        Some(geometry::nearest(mbs, Point2::ORIGIN)?)
    };
    let near_f = if fbs.is_empty() {
        None
    } else {
        Some(geometry::nearest(fbs, Point2::ORIGIN)?)
    };

    let (dlap, ulap) = match (near_m, near_f) {
        (Some((im, dm)), Some((iff, df))) => {
            let power_m = cfg.p_m() * path_gain_d2(dm * dm, cfg.alpha());
            let power_f = cfg.p_f() * path_gain_d2(df * df, cfg.alpha());
            let dlap = if power_m > power_f {
                BsRef::new(Tier::Macro, im, dm)
            } else {
                BsRef::new(Tier::Femto, iff, df)
            };
            let ulap = if dm < df {
                BsRef::new(Tier::Macro, im, dm)
            } else {
                BsRef::new(Tier::Femto, iff, df)
            };
            (dlap, ulap)
        }
        (Some((im, dm)), None) => {
            let only = BsRef::new(Tier::Macro, im, dm);
            (only, only)
        }
        (None, Some((iff, df))) => {
            let only = BsRef::new(Tier::Femto, iff, df);
            (only, only)
        }
        (None, None) => return Err(Error::EmptyPointSet),
    };

    Ok(AssociationOutcome {
        case: AssociationCase::from_tiers(dlap.tier, ulap.tier),
        dlap,
        ulap,
    })
}

/// DL SINR at the origin with fresh unit-mean exponential marks, optionally
/// scaled (the scale knob exists so tests can verify that jointly scaling all
/// marks leaves the interference-limited SINR unchanged).
pub(crate) fn dl_sinr_scaled<R: Rng + ?Sized>(
    mbs: &PointSet,
    fbs: &PointSet,
    out: &AssociationOutcome,
    cfg: &NetworkConfig,
    far_field: f64,
    mark_scale: f64,
    rng: &mut R,
) -> f64 {
    let alpha = cfg.alpha();
    let mut signal = 0.0;
    let mut interference = far_field;
    for (tier, set, power) in [
        (Tier::Macro, mbs, cfg.p_m()),
        (Tier::Femto, fbs, cfg.p_f()),
    ] {
        for (i, p) in set.points().iter().enumerate() {
            let h: f64 = mark_scale * rng.sample::<f64, _>(Exp1);
            let term = power * h * path_gain_d2(p.distance_squared(Point2::ORIGIN), alpha);
            if tier == out.dlap.tier && i == out.dlap.index {
                signal = term;
            } else {
                interference += term;
            }
        }
    }
    signal / (interference + cfg.noise())
}

/// Uplink interference at `receiver` from transmitters at `points`, each with
/// power `p_d` and a fresh fading mark. Points inside the squared exclusion
/// radius are skipped (marks are still drawn, keeping the stream independent
/// of the geometry).
pub(crate) fn ul_interference<R: Rng + ?Sized>(
    points: &[Point2],
    receiver: Point2,
    exclusion_d2: f64,
    p_d: f64,
    alpha: f64,
    far_field: f64,
    rng: &mut R,
) -> f64 {
    let mut acc = far_field;
    for p in points {
        let h: f64 = rng.sample::<f64, _>(Exp1);
        let d2 = p.distance_squared(receiver);
        if d2 > exclusion_d2 {
            acc += p_d * h * path_gain_d2(d2, alpha);
        }
    }
    acc
}

/// UL SINR at the serving BS `receiver` (distance `serving_distance` from the
/// device): signal with a fresh mark against the given interference power.
pub(crate) fn ul_sinr_value<R: Rng + ?Sized>(
    receiver_distance2: f64,
    interference: f64,
    cfg: &NetworkConfig,
    rng: &mut R,
) -> f64 {
    let h: f64 = rng.sample::<f64, _>(Exp1);
    let signal = cfg.p_d() * h * path_gain_d2(receiver_distance2, cfg.alpha());
    signal / (interference + cfg.noise())
}

/// Per-device nearest candidates in each tier (squared distances).
pub(crate) struct DeviceAssoc {
    pub nearest_m: Option<(usize, f64)>,
    pub nearest_f: Option<(usize, f64)>,
}

impl DeviceAssoc {
    /// Global index (macro tier first) of the nearest BS overall.
    pub fn ul_bs(&self, macro_count: usize) -> usize {
        match (self.nearest_m, self.nearest_f) {
            (Some((im, dm)), Some((iff, df))) => {
                if dm < df {
                    im
                } else {
                    macro_count + iff
                }
            }
            (Some((im, _)), None) => im,
            (None, Some((iff, _))) => macro_count + iff,
            (None, None) => unreachable!("device association requires at least one BS"),
        }
    }

    /// Global index of the DL-rule serving BS.
    pub fn dl_bs(&self, macro_count: usize, cfg: &NetworkConfig) -> usize {
        match (self.nearest_m, self.nearest_f) {
            (Some((im, dm)), Some((iff, df))) => {
                let pm = cfg.p_m() * path_gain_d2(dm, cfg.alpha());
                let pf = cfg.p_f() * path_gain_d2(df, cfg.alpha());
                if pm > pf {
                    im
                } else {
                    macro_count + iff
                }
            }
            (Some((im, _)), None) => im,
            (None, Some((iff, _))) => macro_count + iff,
            (None, None) => unreachable!("device association requires at least one BS"),
        }
    }
}

/// Nearest-in-tier scan for every device.
pub(crate) fn device_associations(
    devices: &[Point2],
    mbs: &[Point2],
    fbs: &[Point2],
) -> Vec<DeviceAssoc> {
    devices
        .iter()
        .map(|&dev| DeviceAssoc {
            nearest_m: nearest_d2(mbs, dev),
            nearest_f: nearest_d2(fbs, dev),
        })
        .collect()
}

fn nearest_d2(points: &[Point2], from: Point2) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in points.iter().enumerate() {
        let d2 = p.distance_squared(from);
        match best {
            Some((_, bd2)) if d2 >= bd2 => {}
            _ => best = Some((i, d2)),
        }
    }
    best
}

/// One active transmitter per non-empty nearest-BS cell, chosen uniformly.
/// Returns (global BS index, device position) pairs in BS order.
pub(crate) fn schedule_one_per_cell<R: Rng + ?Sized>(
    devices: &[Point2],
    assoc: &[DeviceAssoc],
    macro_count: usize,
    total_bs: usize,
    rng: &mut R,
) -> Vec<(usize, Point2)> {
    let mut cells: Vec<Vec<u32>> = vec![Vec::new(); total_bs];
    for (dev_idx, a) in assoc.iter().enumerate() {
        cells[a.ul_bs(macro_count)].push(dev_idx as u32);
    }
    let mut picks = Vec::with_capacity(total_bs);
    for (bs, members) in cells.iter().enumerate() {
        if !members.is_empty() {
            let chosen = members[rng.random_range(0..members.len())];
            picks.push((bs, devices[chosen as usize]));
        }
    }
    picks
}

/// Devices attached to credited cells of one tier under one rule, plus the
/// number of credited cells. Pooled across realizations into a ratio
/// estimate of the mean load.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct CellCount {
    pub devices: u64,
    pub cells: u32,
}

/// Per-realization cell-load tallies: devices per credited BS, by tier and
/// association rule.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct LoadSample {
    pub md: CellCount,
    pub fd: CellCount,
    pub mu: CellCount,
    pub fu: CellCount,
}

pub(crate) fn load_sample(
    cfg: &NetworkConfig,
    mbs: &[Point2],
    fbs: &[Point2],
    assoc: &[DeviceAssoc],
    credit_radius: f64,
) -> LoadSample {
    let macro_count = mbs.len();
    let total = macro_count + fbs.len();
    let mut counts_dl = vec![0u32; total];
    let mut counts_ul = vec![0u32; total];
    for a in assoc {
        counts_dl[a.dl_bs(macro_count, cfg)] += 1;
        counts_ul[a.ul_bs(macro_count)] += 1;
    }

    let credit_r2 = credit_radius * credit_radius;
    let tier_tally = |points: &[Point2], offset: usize, counts: &[u32]| -> CellCount {
        let mut tally = CellCount::default();
        for (i, p) in points.iter().enumerate() {
            if p.distance_squared(Point2::ORIGIN) <= credit_r2 {
                tally.devices += counts[offset + i] as u64;
                tally.cells += 1;
            }
        }
        tally
    };

    LoadSample {
        md: tier_tally(mbs, 0, &counts_dl),
        fd: tier_tally(fbs, macro_count, &counts_dl),
        mu: tier_tally(mbs, 0, &counts_ul),
        fu: tier_tally(fbs, macro_count, &counts_ul),
    }
}

/// Draws the dedicated load realization on the enlarged window and tallies
/// credited cells.
pub(crate) fn draw_load_sample(
    cfg: &NetworkConfig,
    seed: RngSeed,
    realization: u64,
) -> Result<LoadSample> {
    let radius = cfg.window_radius() * LOAD_WINDOW_SCALE;
    let (mbs, fbs, _) = draw_tiers_on(
        cfg,
        seed,
        realization,
        radius,
        PURPOSE_LOAD_MACRO,
        PURPOSE_LOAD_FEMTO,
    )?;
    let devices = geometry::sample_ppp(
        cfg.lambda_d(),
        radius,
        &mut seed.stream(realization, PURPOSE_LOAD_DEVICES),
    )?;
    let assoc = device_associations(devices.points(), mbs.points(), fbs.points());
    Ok(load_sample(
        cfg,
        mbs.points(),
        fbs.points(),
        &assoc,
        radius * 0.5,
    ))
}

/// Everything the report needs from one realization.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TrialOutcome {
    pub case: AssociationCase,
    pub dl_covered: bool,
    pub ul_covered_coupled: bool,
    pub ul_covered_decoupled: bool,
    pub rejected: u32,
    pub loads: Option<LoadSample>,
}

/// Runs one complete realization: deployment, association, DL SINR, both UL
/// routes under the requested interference mode, and (optionally) cell-load
/// statistics.
///
/// Interference sums carry the far-field term for everything outside the
/// window, so the estimator tracks the infinite-plane model rather than the
/// truncated one.
pub(crate) fn run_trial(
    cfg: &NetworkConfig,
    gamma: f64,
    seed: RngSeed,
    realization: u64,
    mode: super::SimMode,
    want_loads: bool,
) -> Result<TrialOutcome> {
    let radius = cfg.window_radius();
    let alpha = cfg.alpha();
    let (mbs, fbs, rejected) = draw_bs_tiers(cfg, seed, realization)?;
    let out = associate_sets(&mbs, &fbs, cfg)?;

    // downlink
    let far_dl = far_field_interference(cfg.lambda_m(), cfg.p_m(), radius, alpha)
        + far_field_interference(cfg.lambda_f(), cfg.p_f(), radius, alpha);
    let dl = dl_sinr_scaled(
        &mbs,
        &fbs,
        &out,
        cfg,
        far_dl,
        1.0,
        &mut seed.stream(realization, PURPOSE_DL_FADING),
    );

    // the device process feeds only the accurate interference mode; load
    // statistics run on their own enlarged window (independent sub-streams
    // make every skip safe)
    let mut device_points: Vec<Point2> = Vec::new();
    let mut assoc: Vec<DeviceAssoc> = Vec::new();
    if mode == super::SimMode::Accurate {
        let devices = geometry::sample_ppp(
            cfg.lambda_d(),
            radius,
            &mut seed.stream(realization, PURPOSE_DEVICES),
        )?;
        assoc = device_associations(devices.points(), mbs.points(), fbs.points());
        device_points = devices.into_points();
    }
    let loads = if want_loads {
        Some(draw_load_sample(cfg, seed, realization)?)
    } else {
        None
    };

    // uplink: one interferer field per realization, evaluated from both the
    // decoupled receiver (nearest BS) and the coupled one (DL serving BS)
    let far_ul = far_field_interference(cfg.lambda_interferers(), cfg.p_d(), radius, alpha);
    let macro_count = mbs.len();
    let position = |bs: &super::BsRef| match bs.tier {
        Tier::Macro => mbs.points()[bs.index],
        Tier::Femto => fbs.points()[bs.index],
    };
    let dec_rx = position(&out.ulap);
    let coup_rx = position(&out.dlap);
    let dec_d2 = out.ulap.distance * out.ulap.distance;
    let coup_d2 = out.dlap.distance * out.dlap.distance;
    let same_receiver = out.dlap.tier == out.ulap.tier && out.dlap.index == out.ulap.index;

    let mut ul_rng = seed.stream(realization, PURPOSE_UL_FADING);
    let (dec_sinr, coup_sinr) = match mode {
        super::SimMode::Approximate => {
            let field = geometry::sample_ppp(
                cfg.lambda_interferers(),
                radius,
                &mut seed.stream(realization, PURPOSE_INTERFERERS),
            )?;
            let dec_i = ul_interference(
                field.points(),
                dec_rx,
                dec_d2,
                cfg.p_d(),
                alpha,
                far_ul,
                &mut ul_rng,
            );
            let dec = ul_sinr_value(dec_d2, dec_i, cfg, &mut ul_rng);
            let coup = if same_receiver {
                dec
            } else {
                let coup_i = ul_interference(
                    field.points(),
                    coup_rx,
                    coup_d2,
                    cfg.p_d(),
                    alpha,
                    far_ul,
                    &mut ul_rng,
                );
                ul_sinr_value(coup_d2, coup_i, cfg, &mut ul_rng)
            };
            (dec, coup)
        }
        super::SimMode::Accurate => {
            let total = macro_count + fbs.len();
            let picks = schedule_one_per_cell(
                &device_points,
                &assoc,
                macro_count,
                total,
                &mut seed.stream(realization, PURPOSE_SCHEDULING),
            );
            let gid = |bs: &super::BsRef| match bs.tier {
                Tier::Macro => bs.index,
                Tier::Femto => macro_count + bs.index,
            };
            let eval = |serving_gid: usize, rx: Point2, d2: f64, rng: &mut rand_chacha::ChaCha8Rng| {
                let mut acc = far_ul;
                for (bs, p) in &picks {
                    let h: f64 = rng.sample::<f64, _>(Exp1);
                    if *bs != serving_gid {
                        acc += cfg.p_d() * h * path_gain_d2(p.distance_squared(rx), alpha);
                    }
                }
                ul_sinr_value(d2, acc, cfg, rng)
            };
            let dec = eval(gid(&out.ulap), dec_rx, dec_d2, &mut ul_rng);
            let coup = if same_receiver {
                dec
            } else {
                eval(gid(&out.dlap), coup_rx, coup_d2, &mut ul_rng)
            };
            (dec, coup)
        }
    };

    Ok(TrialOutcome {
        case: out.case,
        dl_covered: dl > gamma,
        ul_covered_coupled: coup_sinr > gamma,
        ul_covered_decoupled: dec_sinr > gamma,
        rejected,
        loads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_critical_value_two_sample, ks_statistic_two_sample};

    fn single_macro_cfg() -> NetworkConfig {
        NetworkConfig::new(1e-6, 0.0, 1e-4, 1.0, 1.0, 1.0, 4.0, 1.0).unwrap()
    }

    #[test]
    fn dl_sinr_single_bs_unit_everything() {
        // one BS at 1 m, p = 1 W, sigma2 = 1 W, no interferers: SINR = h
        let cfg = single_macro_cfg();
        let mbs = PointSet::from_points(vec![Point2::new(1.0, 0.0)], 10.0, 1e-6);
        let fbs = PointSet::from_points(vec![], 10.0, 0.0);
        let out = associate_sets(&mbs, &fbs, &cfg).unwrap();
        assert_eq!(out.case, AssociationCase::Case1);

        // replace the fading draw by a deterministic check: with many draws
        // the mean SINR is E[h] / sigma2 = 1
        let mut rng = RngSeed(1).stream(0, PURPOSE_DL_FADING);
        let n = 200_000;
        let mean: f64 = (0..n)
            .map(|_| dl_sinr_scaled(&mbs, &fbs, &out, &cfg, 0.0, 1.0, &mut rng))
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean SINR = {mean}");
    }

    #[test]
    fn joint_mark_scaling_preserves_interference_limited_sinr_law() {
        // at sigma2 = 0 the SINR is a ratio of marks, so doubling all marks
        // leaves its distribution unchanged; checked with a two-sample KS
        let cfg = NetworkConfig::new(1e-6, 0.0, 1e-4, 1.0, 1.0, 1.0, 4.0, 0.0).unwrap();
        let seed = RngSeed(7);
        let n = 10_000;
        let mut draw = |mark_scale: f64, salt: u64| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let (mbs, fbs, _) = draw_bs_tiers(&cfg, seed, salt * 1_000_000 + i).unwrap();
                    let out = associate_sets(&mbs, &fbs, &cfg).unwrap();
                    let mut rng = RngSeed(seed.0 ^ salt).stream(i, PURPOSE_DL_FADING);
                    dl_sinr_scaled(&mbs, &fbs, &out, &cfg, 0.0, mark_scale, &mut rng)
                })
                .collect()
        };
        let base = draw(1.0, 1);
        let doubled = draw(2.0, 2);
        let d = ks_statistic_two_sample(&base, &doubled);
        let crit = ks_critical_value_two_sample(n as usize, n as usize, 0.01);
        assert!(d < crit, "KS statistic {d} above the 1% critical value {crit}");
    }

    #[test]
    fn ul_interference_applies_exclusion_ball() {
        let receiver = Point2::new(10.0, 0.0);
        // one transmitter inside the exclusion ball, one outside
        let points = [Point2::new(12.0, 0.0), Point2::new(100.0, 0.0)];
        let mut rng = RngSeed(3).stream(0, PURPOSE_UL_FADING);
        let excl = 25.0; // radius 5 around the receiver
        let acc = ul_interference(&points, receiver, excl, 1.0, 4.0, 0.0, &mut rng);
        // only the far transmitter contributes; its gain is 90^-4
        assert!(acc < 10.0 * 90f64.powi(-4), "acc = {acc}");
        assert!(acc > 0.0);
    }

    #[test]
    fn far_field_formula_matches_direct_integral() {
        // alpha = 4: 2 pi lambda P R^-2 / 2 = pi lambda P / R^2
        let v = far_field_interference(1e-5, 0.1, 2000.0, 4.0);
        let expect = std::f64::consts::PI * 1e-5 * 0.1 / 2000.0f64.powi(2);
        assert!((v - expect).abs() < 1e-18);
    }

    #[test]
    fn scheduling_picks_one_device_per_non_empty_cell() {
        let cfg = single_macro_cfg();
        let mbs = vec![Point2::new(-50.0, 0.0), Point2::new(50.0, 0.0)];
        let devices = vec![
            Point2::new(-49.0, 1.0),
            Point2::new(-51.0, 2.0),
            Point2::new(49.0, -1.0),
        ];
        let assoc = device_associations(&devices, &mbs, &[]);
        let picks = schedule_one_per_cell(
            &devices,
            &assoc,
            mbs.len(),
            mbs.len(),
            &mut RngSeed(5).stream(0, PURPOSE_SCHEDULING),
        );
        assert_eq!(picks.len(), 2);
        assert_eq!(picks[0].0, 0);
        assert_eq!(picks[1].0, 1);
        // the second cell has a single member, so the pick is forced
        assert_eq!(picks[1].1, devices[2]);
        let _ = cfg;
    }

    #[test]
    fn load_sample_counts_devices_per_rule() {
        // macro on one side, femto close to a device cluster; the credit
        // region covers both BSs
        let cfg = NetworkConfig::new(1e-6, 1e-6, 1e-4, 10.0, 0.1, 0.1, 4.0, 0.0).unwrap();
        let mbs = vec![Point2::new(-100.0, 0.0)];
        let fbs = vec![Point2::new(100.0, 0.0)];
        let devices = vec![
            Point2::new(-90.0, 0.0),  // nearest macro, DL macro
            Point2::new(95.0, 0.0),   // nearest femto; macro DL power 10*195^-4 < 0.1*5^-4, femto DL
            Point2::new(90.0, 10.0),  // nearest femto
        ];
        let assoc = device_associations(&devices, &mbs, &fbs);
        let loads = load_sample(&cfg, &mbs, &fbs, &assoc, 500.0);
        assert_eq!(loads.mu, CellCount { devices: 1, cells: 1 });
        assert_eq!(loads.fu, CellCount { devices: 2, cells: 1 });
        assert_eq!(loads.md, CellCount { devices: 1, cells: 1 });
        assert_eq!(loads.fd, CellCount { devices: 2, cells: 1 });
        // outside the credit region nothing is tallied
        let none = load_sample(&cfg, &mbs, &fbs, &assoc, 50.0);
        assert_eq!(none.md, CellCount::default());
    }
}
