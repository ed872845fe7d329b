//! The simulator as an oracle for the closed forms, and the closed forms as
//! an oracle for the simulator: case frequencies, loads, coverage, and the
//! determinism and dominance contracts.

use hetnet_core::geometry::{Point2, PointSet, RngSeed};
use hetnet_core::montecarlo::{
    associate, case_frequencies, dl_sinr, draw_deployment, estimate, estimate_serial, ul_sinr,
    Deployment, SimMode, UplinkRoute,
};
use hetnet_core::{
    case_probabilities, db_to_linear, mean_loads, tier_association, AssociationCase, Error,
    NetworkConfig, Tier,
};

fn reference() -> NetworkConfig {
    NetworkConfig::reference()
}

/// Agreement band used for probability estimates: three standard errors with
/// a small absolute floor for near-degenerate probabilities.
fn prob_band(se: f64) -> f64 {
    (3.0 * se).max(0.005)
}

#[test]
fn deployments_are_deterministic_and_slivnyak_clean() {
    let cfg = reference();
    let a = draw_deployment(&cfg, RngSeed(5), 3).unwrap();
    let b = draw_deployment(&cfg, RngSeed(5), 3).unwrap();
    assert_eq!(a, b);
    let c = draw_deployment(&cfg, RngSeed(5), 4).unwrap();
    assert_ne!(a, c);
    // the typical device at the origin is implicit, never sampled
    assert!(a
        .devices
        .points()
        .iter()
        .all(|p| p.distance_squared(Point2::ORIGIN) > 0.0));
}

#[test]
fn tier_count_ratio_tracks_density_ratio() {
    let cfg = reference();
    let n = 10_000u64;
    let (mut macros, mut femtos) = (0u64, 0u64);
    for i in 0..n {
        let dep = draw_deployment(&cfg, RngSeed(31), i).unwrap();
        macros += dep.mbs.len() as u64;
        femtos += dep.fbs.len() as u64;
    }
    let ratio = femtos as f64 / macros as f64;
    // mean counts are 250 and 25 per window; delta-method error on the ratio
    let mu_m = macros as f64 / n as f64;
    let se = ratio * ((1.0 / femtos as f64) + (1.0 / macros as f64)).sqrt();
    assert!(
        (ratio - 10.0).abs() <= 3.0 * se,
        "ratio {ratio} (mean macro count {mu_m}, 3se = {})",
        3.0 * se
    );
}

#[test]
fn association_fixture_decouples() {
    // nearest macro 500 m, nearest femto 200 m: DL macro (higher average
    // power), UL femto (closer), which is the decoupled case
    let cfg = reference();
    let dep = Deployment {
        mbs: PointSet::from_points(vec![Point2::new(500.0, 0.0)], 3000.0, cfg.lambda_m()),
        fbs: PointSet::from_points(vec![Point2::new(0.0, 200.0)], 3000.0, cfg.lambda_f()),
        devices: PointSet::from_points(vec![], 3000.0, cfg.lambda_d()),
        rejected_draws: 0,
    };
    let out = associate(&dep, &cfg).unwrap();
    assert_eq!(out.case, AssociationCase::Case2);
    assert_eq!(out.dlap.tier, Tier::Macro);
    assert_eq!(out.ulap.tier, Tier::Femto);
    assert!((out.dlap.distance - 500.0).abs() < 1e-12);
    assert!((out.ulap.distance - 200.0).abs() < 1e-12);

    // closer macro flips everything to case 1
    let dep2 = Deployment {
        mbs: PointSet::from_points(vec![Point2::new(100.0, 0.0)], 3000.0, cfg.lambda_m()),
        ..dep
    };
    assert_eq!(associate(&dep2, &cfg).unwrap().case, AssociationCase::Case1);
}

#[test]
fn empirical_case_frequencies_match_closed_forms() {
    let cfg = reference();
    let n = 100_000u64;
    let freq = case_frequencies(&cfg, n, RngSeed(101)).unwrap();
    let cp = case_probabilities(&cfg).as_array();
    for (i, (est, expect)) in freq.cases.iter().zip(cp).enumerate() {
        assert!(
            (est.mean - expect).abs() <= prob_band(est.std_error),
            "case {}: estimate {} vs closed form {expect} (se {})",
            i + 1,
            est.mean,
            est.std_error
        );
    }
    assert_eq!(freq.cases[2].mean, 0.0, "case 3 must never occur");
    let assoc = tier_association(&case_probabilities(&cfg));
    assert!((freq.a_md.mean - assoc.a_md).abs() <= prob_band(freq.a_md.std_error));
    assert!((freq.a_fu.mean - assoc.a_fu).abs() <= prob_band(freq.a_fu.std_error));
    assert_eq!(freq.rejected_draws, 0);
}

#[test]
fn decoupled_ulap_is_never_farther_than_dlap() {
    let cfg = reference();
    for i in 0..2_000u64 {
        let dep = draw_deployment(&cfg, RngSeed(7), i).unwrap();
        let out = associate(&dep, &cfg).unwrap();
        assert!(
            out.ulap.distance <= out.dlap.distance,
            "realization {i}: ULAP at {} beyond DLAP at {}",
            out.ulap.distance,
            out.dlap.distance
        );
    }
}

#[test]
fn fading_marks_have_unit_mean() {
    use rand::Rng;
    use rand_distr::Exp1;
    let mut rng = RngSeed(3).rng();
    let n = 100_000;
    let mean: f64 = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).sum::<f64>() / n as f64;
    // exponential with unit mean has unit variance
    let se = (1.0 / n as f64).sqrt();
    assert!((mean - 1.0).abs() <= 3.0 * se, "mean fading mark {mean}");
}

#[test]
fn ul_snr_without_interferers_is_pure_path_loss() {
    // single BS, no devices: SNR = p_d h d^-alpha / sigma2, so the mean over
    // marks is p_d d^-alpha / sigma2
    let cfg = NetworkConfig::new(1e-6, 0.0, 1e-4, 1.0, 0.5, 0.5, 4.0, 1e-12).unwrap();
    let d = 120.0;
    let dep = Deployment {
        mbs: PointSet::from_points(vec![Point2::new(d, 0.0)], 3000.0, cfg.lambda_m()),
        fbs: PointSet::from_points(vec![], 3000.0, 0.0),
        devices: PointSet::from_points(vec![], 3000.0, cfg.lambda_d()),
        rejected_draws: 0,
    };
    let out = associate(&dep, &cfg).unwrap();
    let mut rng = RngSeed(9).rng();
    let n = 50_000;
    let mean: f64 = (0..n)
        .map(|_| {
            ul_sinr(&dep, &out, &cfg, SimMode::Accurate, UplinkRoute::Decoupled, &mut rng).unwrap()
        })
        .sum::<f64>()
        / n as f64;
    let expect = cfg.p_d() * d.powi(-4) / cfg.noise();
    // SNR = expect * h with h unit-mean exponential
    let se = expect / (n as f64).sqrt();
    assert!(
        (mean - expect).abs() <= 3.0 * se,
        "mean SNR {mean} vs {expect}"
    );
}

#[test]
fn coupled_equals_decoupled_on_a_single_tier() {
    let cfg = NetworkConfig::new(1e-6, 0.0, 1e-4, 1.0, 0.5, 0.5, 4.0, 1e-12).unwrap();
    let report = estimate(&cfg, 1.0, 5_000, RngSeed(77), SimMode::Approximate).unwrap();
    // one tier: the DL access point is the nearest BS, so the two UL routes
    // see identical receivers and identical draws
    assert_eq!(
        report.cov_ul_coupled.mean,
        report.cov_ul_decoupled.mean
    );
    assert_eq!(report.cases[0].mean, 1.0);
}

#[test]
fn estimate_is_deterministic_and_parallel_agnostic() {
    let cfg = reference();
    let gamma = db_to_linear(2.0);
    let a = estimate(&cfg, gamma, 2_000, RngSeed(42), SimMode::Approximate).unwrap();
    let b = estimate(&cfg, gamma, 2_000, RngSeed(42), SimMode::Approximate).unwrap();
    assert_eq!(a, b, "two parallel runs differ");
    let c = estimate_serial(&cfg, gamma, 2_000, RngSeed(42), SimMode::Approximate).unwrap();
    assert_eq!(a, c, "parallel and serial runs differ");
    let d = estimate(&cfg, gamma, 2_000, RngSeed(43), SimMode::Approximate).unwrap();
    assert_ne!(a, d, "different seeds must differ");
}

#[test]
fn estimate_rejects_tiny_sample_counts() {
    let cfg = reference();
    assert!(matches!(
        estimate(&cfg, 1.0, 10, RngSeed(1), SimMode::Approximate),
        Err(Error::TooFewSamples { .. })
    ));
}

#[test]
fn mean_loads_match_closed_forms() {
    let cfg = reference();
    let report = estimate(&cfg, 1.0, 2_000, RngSeed(55), SimMode::Approximate).unwrap();
    let loads = mean_loads(&cfg);
    for (est, expect, name) in [
        (report.load_md, loads.n_md, "n_md"),
        (report.load_fd, loads.n_fd, "n_fd"),
        (report.load_mu, loads.n_mu, "n_mu"),
        (report.load_fu, loads.n_fu, "n_fu"),
    ] {
        assert!(
            (est.mean - expect).abs() <= 3.0 * est.std_error,
            "{name}: estimate {} +- {} vs {expect}",
            est.mean,
            est.std_error
        );
    }
    // the reference loads evaluate to about 9.09 devices per BS under UL rules
    assert!((loads.n_mu - 100.0 / 11.0).abs() < 1e-9);
    assert!((loads.n_fu - 100.0 / 11.0).abs() < 1e-9);
}

#[test]
fn single_tier_dl_coverage_recovers_classic_value() {
    // interference-limited single tier at gamma = 1: coverage 1/(1 + pi/4)
    let cfg = NetworkConfig::new(1e-6, 0.0, 1e-4, 10.0, 0.1, 0.1, 4.0, 0.0).unwrap();
    let report = estimate(&cfg, 1.0, 20_000, RngSeed(2024), SimMode::Approximate).unwrap();
    let expect = 1.0 / (1.0 + std::f64::consts::PI / 4.0);
    let est = report.cov_dl;
    assert!(
        (est.mean - expect).abs() <= 3.0 * est.std_error,
        "coverage {} +- {} vs {expect}",
        est.mean,
        est.std_error
    );
}

#[test]
fn dl_sinr_distribution_feeds_coverage() {
    // direct dl_sinr sampling agrees with the estimate pipeline's coverage
    let cfg = reference();
    let gamma = db_to_linear(2.0);
    let n = 5_000u64;
    let mut hits = 0u64;
    for i in 0..n {
        let dep = draw_deployment(&cfg, RngSeed(66), i).unwrap();
        let out = associate(&dep, &cfg).unwrap();
        let mut rng = RngSeed(660).stream(i, 0);
        if dl_sinr(&dep, &out, &cfg, &mut rng) > gamma {
            hits += 1;
        }
    }
    let p = hits as f64 / n as f64;
    let report = estimate(&cfg, gamma, n, RngSeed(66), SimMode::Approximate).unwrap();
    let se = (p * (1.0 - p) / n as f64 + report.cov_dl.std_error.powi(2)).sqrt();
    // the direct loop skips the far-field term, so allow a small extra margin
    assert!(
        (p - report.cov_dl.mean).abs() <= 3.0 * se + 0.01,
        "direct {p} vs pipeline {}",
        report.cov_dl.mean
    );
}
