//! Subcommand implementations: single-point association and throughput
//! evaluation, grid sweeps, and analytic-vs-simulation validation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hetnet_core::montecarlo::{estimate, McReport};
use hetnet_core::{
    case_probabilities, db_to_linear, full_report, mean_loads, tier_association, AnalyticReport,
    McEstimate, NetworkConfig, RngSeed, SimMode,
};

use crate::config_file::{self, ConfigFile, SweepVariable};
use crate::output::{write_atomic, OutputFormat, ResultTable};
use crate::CliError;

pub struct McOptions {
    pub samples: u64,
    pub seed: RngSeed,
    pub mode: SimMode,
}

/// One named scalar: the analytic value and, when simulation ran, its
/// Monte Carlo estimate.
struct Scalar {
    name: &'static str,
    analytic: f64,
    mc: Option<McEstimate>,
}

fn assoc_scalars(cfg: &NetworkConfig, mc: Option<&McReport>) -> Vec<Scalar> {
    let cases = case_probabilities(cfg);
    let tiers = tier_association(&cases);
    let loads = mean_loads(cfg);
    let pick = |f: fn(&McReport) -> McEstimate| mc.map(f);
    vec![
        Scalar { name: "p1", analytic: cases.p1, mc: pick(|m| m.cases[0]) },
        Scalar { name: "p2", analytic: cases.p2, mc: pick(|m| m.cases[1]) },
        Scalar { name: "p3", analytic: cases.p3, mc: pick(|m| m.cases[2]) },
        Scalar { name: "p4", analytic: cases.p4, mc: pick(|m| m.cases[3]) },
        Scalar { name: "a_md", analytic: tiers.a_md, mc: pick(|m| m.a_md) },
        Scalar { name: "a_fd", analytic: tiers.a_fd, mc: pick(|m| m.a_fd) },
        Scalar { name: "a_mu", analytic: tiers.a_mu, mc: pick(|m| m.a_mu) },
        Scalar { name: "a_fu", analytic: tiers.a_fu, mc: pick(|m| m.a_fu) },
        Scalar { name: "n_md", analytic: loads.n_md, mc: pick(|m| m.load_md) },
        Scalar { name: "n_fd", analytic: loads.n_fd, mc: pick(|m| m.load_fd) },
        Scalar { name: "n_mu", analytic: loads.n_mu, mc: pick(|m| m.load_mu) },
        Scalar { name: "n_fu", analytic: loads.n_fu, mc: pick(|m| m.load_fu) },
    ]
}

fn full_scalars(report: &AnalyticReport, mc: Option<&McReport>) -> Vec<Scalar> {
    let pick = |f: fn(&McReport) -> McEstimate| mc.map(f);
    let mut out = vec![
        Scalar { name: "p1", analytic: report.cases.p1, mc: pick(|m| m.cases[0]) },
        Scalar { name: "p2", analytic: report.cases.p2, mc: pick(|m| m.cases[1]) },
        Scalar { name: "p3", analytic: report.cases.p3, mc: pick(|m| m.cases[2]) },
        Scalar { name: "p4", analytic: report.cases.p4, mc: pick(|m| m.cases[3]) },
        Scalar { name: "a_md", analytic: report.tiers.a_md, mc: pick(|m| m.a_md) },
        Scalar { name: "a_fd", analytic: report.tiers.a_fd, mc: pick(|m| m.a_fd) },
        Scalar { name: "a_mu", analytic: report.tiers.a_mu, mc: pick(|m| m.a_mu) },
        Scalar { name: "a_fu", analytic: report.tiers.a_fu, mc: pick(|m| m.a_fu) },
        Scalar { name: "n_md", analytic: report.loads.n_md, mc: pick(|m| m.load_md) },
        Scalar { name: "n_fd", analytic: report.loads.n_fd, mc: pick(|m| m.load_fd) },
        Scalar { name: "n_mu", analytic: report.loads.n_mu, mc: pick(|m| m.load_mu) },
        Scalar { name: "n_fu", analytic: report.loads.n_fu, mc: pick(|m| m.load_fu) },
        Scalar { name: "kappa", analytic: report.kappa, mc: None },
        Scalar { name: "cov_dl_m", analytic: report.cov_dl_m, mc: pick(|m| m.cov_dl_m) },
        Scalar { name: "cov_dl_f", analytic: report.cov_dl_f, mc: pick(|m| m.cov_dl_f) },
        Scalar { name: "cov_dl", analytic: report.cov_dl, mc: pick(|m| m.cov_dl) },
        Scalar { name: "r_dl_m", analytic: report.r_dl_m, mc: pick(|m| m.r_dl_m) },
        Scalar { name: "r_dl_f", analytic: report.r_dl_f, mc: pick(|m| m.r_dl_f) },
        Scalar { name: "r_dl", analytic: report.r_dl, mc: pick(|m| m.r_dl) },
        Scalar { name: "lambda_dl_equiv", analytic: report.equivalent_dl_density, mc: None },
        Scalar { name: "r_dl_equiv", analytic: report.r_dl_equivalent, mc: None },
        Scalar { name: "cov_ul_coup_m", analytic: report.cov_ul_coupled_m, mc: pick(|m| m.cov_ul_coupled_m) },
        Scalar { name: "cov_ul_coup_f", analytic: report.cov_ul_coupled_f, mc: pick(|m| m.cov_ul_coupled_f) },
        Scalar { name: "cov_ul_coup", analytic: report.cov_ul_coupled, mc: pick(|m| m.cov_ul_coupled) },
        Scalar { name: "r_ul_coup_m", analytic: report.r_ul_coupled_m, mc: pick(|m| m.r_ul_coupled_m) },
        Scalar { name: "r_ul_coup_f", analytic: report.r_ul_coupled_f, mc: pick(|m| m.r_ul_coupled_f) },
        Scalar { name: "r_ul_coup", analytic: report.r_ul_coupled, mc: pick(|m| m.r_ul_coupled) },
        Scalar { name: "cov_ul_dec_m", analytic: report.cov_ul_decoupled_m, mc: pick(|m| m.cov_ul_decoupled_m) },
        Scalar { name: "cov_ul_dec_f", analytic: report.cov_ul_decoupled_f, mc: pick(|m| m.cov_ul_decoupled_f) },
        Scalar { name: "cov_ul_dec", analytic: report.cov_ul_decoupled, mc: pick(|m| m.cov_ul_decoupled) },
        Scalar { name: "r_ul_dec_m", analytic: report.r_ul_decoupled_m, mc: pick(|m| m.r_ul_decoupled_m) },
        Scalar { name: "r_ul_dec_f", analytic: report.r_ul_decoupled_f, mc: pick(|m| m.r_ul_decoupled_f) },
        Scalar { name: "r_ul_dec", analytic: report.r_ul_decoupled, mc: pick(|m| m.r_ul_decoupled) },
        Scalar { name: "r_ul_dec_equiv", analytic: report.r_ul_decoupled_equivalent, mc: None },
        Scalar { name: "eta_m", analytic: report.eta_m, mc: pick(|m| m.eta_m) },
        Scalar { name: "eta_f", analytic: report.eta_f, mc: pick(|m| m.eta_f) },
        Scalar { name: "eta_bar", analytic: report.eta_bar, mc: pick(|m| m.eta_bar) },
    ];
    out.shrink_to_fit();
    out
}

/// Builds the wide table layout: one column per analytic scalar, plus
/// `(_mc, _mc_se, _mc_n)` triplets and an `mc_ok` flag when simulation ran.
fn table_columns(scalars: &[Scalar], leading: Option<&str>, with_mc: bool) -> Vec<String> {
    let mut cols = Vec::new();
    if let Some(name) = leading {
        cols.push(name.to_string());
    }
    for s in scalars {
        cols.push(s.name.to_string());
        if with_mc && s.mc.is_some() {
            cols.push(format!("{}_mc", s.name));
            cols.push(format!("{}_mc_se", s.name));
            cols.push(format!("{}_mc_n", s.name));
        }
    }
    if with_mc {
        cols.push("mc_ok".into());
    }
    cols
}

fn table_row(scalars: &[Scalar], leading: Option<f64>, with_mc: bool, mc_ok: bool) -> Vec<f64> {
    let mut row = Vec::new();
    if let Some(v) = leading {
        row.push(v);
    }
    for s in scalars {
        row.push(s.analytic);
        if with_mc {
            if let Some(est) = s.mc {
                row.push(est.mean);
                row.push(est.std_error);
                row.push(est.n_samples as f64);
            }
        }
    }
    if with_mc {
        row.push(if mc_ok { 1.0 } else { 0.0 });
    }
    row
}

fn mc_provenance(table: &mut ResultTable, mc: &Option<McOptions>) {
    if let Some(opts) = mc {
        table.provenance.push(("samples".into(), opts.samples.to_string()));
        table.provenance.push(("seed".into(), opts.seed.0.to_string()));
        table.provenance.push(("mode".into(), opts.mode.label().to_string()));
    }
}

/// Association probabilities, tier probabilities, and mean loads for one
/// configuration; one output row.
pub fn run_assoc(
    config_path: &Path,
    out: &Path,
    format: OutputFormat,
    mc: Option<McOptions>,
) -> Result<(), CliError> {
    let file = config_file::load_config(config_path)?;
    let cfg = file.to_network_config()?;

    let mc_report = match &mc {
        // association and load columns do not depend on the SINR target; the
        // estimator still needs one, so a nominal 2 dB is used
        Some(opts) => Some(run_estimate(&cfg, db_to_linear(2.0), opts)?),
        None => None,
    };
    let scalars = assoc_scalars(&cfg, mc_report.as_ref());

    let mut table = ResultTable::new("hetnet assoc");
    table.provenance = file.provenance();
    mc_provenance(&mut table, &mc);
    table.columns = table_columns(&scalars, None, mc.is_some());
    table.push_row(table_row(&scalars, None, mc.is_some(), true));
    write_atomic(out, &table.render(format))
}

/// Full analytic report (coverage, throughputs, gains) at one SINR target;
/// one output row.
pub fn run_throughput(
    config_path: &Path,
    gamma_db: f64,
    out: &Path,
    format: OutputFormat,
    mc: Option<McOptions>,
) -> Result<(), CliError> {
    let file = config_file::load_config(config_path)?;
    let cfg = file.to_network_config()?;
    let gamma = db_to_linear(gamma_db);
    let report = full_report(&cfg, gamma).map_err(|e| CliError::Config(e.to_string()))?;
    let mc_report = match &mc {
        Some(opts) => Some(run_estimate(&cfg, gamma, opts)?),
        None => None,
    };
    let scalars = full_scalars(&report, mc_report.as_ref());

    let mut table = ResultTable::new("hetnet throughput");
    table.provenance = file.provenance();
    table.provenance.push(("gamma_db".into(), format!("{gamma_db}")));
    mc_provenance(&mut table, &mc);
    table.columns = table_columns(&scalars, None, mc.is_some());
    table.push_row(table_row(&scalars, None, mc.is_some(), true));
    write_atomic(out, &table.render(format))
}

fn run_estimate(cfg: &NetworkConfig, gamma: f64, opts: &McOptions) -> Result<McReport, CliError> {
    estimate(cfg, gamma, opts.samples, opts.seed, opts.mode)
        .map_err(|e| CliError::Config(e.to_string()))
}

/// Sweeps the configured variable over its grid; one row per point, analytic
/// always, Monte Carlo when the spec asks for it. A failed per-point
/// simulation marks the row (`mc_ok = 0`) and the sweep continues.
pub fn run_sweep(spec_path: &Path, out: &Path, format: OutputFormat) -> Result<(), CliError> {
    let spec = config_file::load_sweep(spec_path)?;
    let base = spec.base.to_network_config()?;
    let with_mc = spec.mc.is_some();
    let mode = spec.mc.as_ref().map(|m| m.sim_mode()).transpose()?;

    let mut table = ResultTable::new("hetnet sweep");
    table.provenance = spec.base.provenance();
    table
        .provenance
        .push(("variable".into(), spec.variable.column_name().into()));
    table.provenance.push(("gamma_db".into(), format!("{}", spec.gamma_db)));
    if let Some(mc) = &spec.mc {
        table.provenance.push(("samples".into(), mc.samples.to_string()));
        table.provenance.push(("seed".into(), mc.seed.to_string()));
        table.provenance.push(("mode".into(), mc.mode.clone()));
    }

    for (i, &value) in spec.grid.iter().enumerate() {
        let (cfg, gamma) = match spec.variable {
            SweepVariable::FemtoDensityRatio => (
                base.with_lambda_f(value * base.lambda_m())
                    .map_err(|e| CliError::Config(e.to_string()))?,
                db_to_linear(spec.gamma_db),
            ),
            SweepVariable::TargetSinrDb => (base, db_to_linear(value)),
        };
        let report = full_report(&cfg, gamma).map_err(|e| CliError::Config(e.to_string()))?;

        let (mc_report, mc_ok) = match (&spec.mc, mode) {
            (Some(mc), Some(mode)) => {
                // every grid point gets its own derived seed
                let seed = RngSeed(mc.seed.wrapping_add(i as u64));
                match estimate(&cfg, gamma, mc.samples, seed, mode) {
                    Ok(r) => (Some(r), true),
                    Err(_) => (None, false),
                }
            }
            _ => (None, true),
        };

        let scalars = match &mc_report {
            Some(mc) => full_scalars(&report, Some(mc)),
            // failed point: keep the column set rectangular with NaN markers
            None if with_mc => full_scalars(&report, Some(&nan_report(&report))),
            None => full_scalars(&report, None),
        };
        if table.columns.is_empty() {
            table.columns = table_columns(&scalars, Some(spec.variable.column_name()), with_mc);
        }
        table.push_row(table_row(&scalars, Some(value), with_mc, mc_ok));
    }
    write_atomic(out, &table.render(format))
}

/// All-NaN report standing in for a failed per-point simulation.
fn nan_report(report: &AnalyticReport) -> McReport {
    let nan = McEstimate {
        mean: f64::NAN,
        std_error: f64::NAN,
        n_samples: 0,
    };
    McReport {
        mode: SimMode::Approximate,
        gamma: report.gamma,
        n_realizations: 0,
        load_realizations: 0,
        rejected_draws: 0,
        cases: [nan; 4],
        a_md: nan,
        a_fd: nan,
        a_mu: nan,
        a_fu: nan,
        load_md: nan,
        load_fd: nan,
        load_mu: nan,
        load_fu: nan,
        cov_dl_m: nan,
        cov_dl_f: nan,
        cov_dl: nan,
        cov_ul_coupled_m: nan,
        cov_ul_coupled_f: nan,
        cov_ul_coupled: nan,
        cov_ul_decoupled_m: nan,
        cov_ul_decoupled_f: nan,
        cov_ul_decoupled: nan,
        r_dl_m: nan,
        r_dl_f: nan,
        r_dl: nan,
        r_ul_coupled_m: nan,
        r_ul_coupled_f: nan,
        r_ul_coupled: nan,
        r_ul_decoupled_m: nan,
        r_ul_decoupled_f: nan,
        r_ul_decoupled: nan,
        eta_m: nan,
        eta_f: nan,
        eta_bar: nan,
    }
}

/// Tolerance family for validation bands.
fn agreement_band(name: &str, analytic: f64, se: f64) -> f64 {
    let three_se = 3.0 * se;
    if name.starts_with('p') || name.starts_with("a_") || name.starts_with("cov_") {
        // probability scalars: small absolute floor under the 3 sigma band
        three_se.max(0.005)
    } else {
        // loads, rates, gains: one percent relative floor
        three_se.max(0.01 * analytic.abs())
    }
}

struct ValidationRow {
    name: &'static str,
    analytic: f64,
    mc: McEstimate,
    z: f64,
    pass: bool,
    skipped: bool,
}

/// Compares every analytic scalar against its Monte Carlo estimate; exit
/// status is success only when all comparisons sit inside their bands and
/// both probability vectors sum to one.
#[allow(clippy::too_many_arguments)]
pub fn run_validate(
    config_path: &Path,
    gamma_db: f64,
    samples: u64,
    seed: RngSeed,
    mode: SimMode,
    out: Option<PathBuf>,
    format: OutputFormat,
    inject_analytic_bias: Option<f64>,
) -> Result<(), CliError> {
    if samples < 1000 {
        return Err(CliError::Config(format!(
            "validation needs at least 1000 samples, got {samples}"
        )));
    }
    let file = config_file::load_config(config_path)?;
    let cfg = file.to_network_config()?;
    let gamma = db_to_linear(gamma_db);
    let report = full_report(&cfg, gamma).map_err(|e| CliError::Config(e.to_string()))?;
    let mc = estimate(&cfg, gamma, samples, seed, mode)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let mut scalars = full_scalars(&report, Some(&mc));
    if let Some(bias) = inject_analytic_bias {
        // test hook: corrupt one analytic constant so the detector can be
        // exercised end to end
        scalars[0].analytic += bias;
    }

    let mut rows = Vec::new();
    for s in &scalars {
        let Some(est) = s.mc else { continue };
        let skipped = est.n_samples == 0 || !s.analytic.is_finite();
        let z = est.z_score(s.analytic);
        let pass = skipped
            || (est.mean - s.analytic).abs() <= agreement_band(s.name, s.analytic, est.std_error);
        rows.push(ValidationRow {
            name: s.name,
            analytic: s.analytic,
            mc: est,
            z,
            pass,
            skipped,
        });
    }

    let analytic_closure = (report.cases.sum() - 1.0).abs();
    let mc_closure = (mc.cases.iter().map(|c| c.mean).sum::<f64>() - 1.0).abs();
    let closure_ok = analytic_closure <= 1e-12 && mc_closure <= 1e-12;

    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<16} {:>14} {:>14} {:>12} {:>10} {:>8} verdict",
        "scalar", "analytic", "mc_mean", "mc_se", "mc_n", "z"
    );
    for r in &rows {
        let verdict = if r.skipped {
            "skip"
        } else if r.pass {
            "ok"
        } else {
            "FAIL"
        };
        let _ = writeln!(
            text,
            "{:<16} {:>14.8} {:>14.8} {:>12.3e} {:>10} {:>8.2} {verdict}",
            r.name, r.analytic, r.mc.mean, r.mc.std_error, r.mc.n_samples, r.z
        );
    }
    let failures: Vec<&ValidationRow> = rows.iter().filter(|r| !r.pass).collect();
    let max_z = rows
        .iter()
        .filter(|r| !r.skipped)
        .map(|r| r.z.abs())
        .fold(0.0f64, f64::max);
    let _ = writeln!(
        text,
        "probability closure: analytic {analytic_closure:.2e}, simulated {mc_closure:.2e}"
    );
    let _ = writeln!(
        text,
        "validation {}: {} scalars, max |z| = {max_z:.2} (n = {samples}, seed = {}, mode = {})",
        if failures.is_empty() && closure_ok { "PASSED" } else { "FAILED" },
        rows.len(),
        seed.0,
        mode.label(),
    );
    print!("{text}");

    if let Some(path) = out {
        let rendered = render_validation(&rows, format, &file, samples, seed, mode);
        write_atomic(&path, &rendered)?;
    }

    if !closure_ok {
        return Err(CliError::Validation(format!(
            "probability closure violated (analytic {analytic_closure:.2e}, simulated {mc_closure:.2e})"
        )));
    }
    if !failures.is_empty() {
        let names: Vec<&str> = failures.iter().map(|r| r.name).collect();
        return Err(CliError::Validation(format!(
            "{} scalar(s) outside their agreement bands: {}",
            names.len(),
            names.join(", ")
        )));
    }
    Ok(())
}

fn render_validation(
    rows: &[ValidationRow],
    format: OutputFormat,
    file: &ConfigFile,
    samples: u64,
    seed: RngSeed,
    mode: SimMode,
) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "# hetnet validate");
            for (k, v) in file.provenance() {
                let _ = writeln!(out, "# {k} = {v}");
            }
            let _ = writeln!(out, "# samples = {samples}");
            let _ = writeln!(out, "# seed = {}", seed.0);
            let _ = writeln!(out, "# mode = {}", mode.label());
            let _ = writeln!(out, "scalar,analytic,mc_mean,mc_std_error,mc_n,z,pass");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.name,
                    r.analytic,
                    r.mc.mean,
                    r.mc.std_error,
                    r.mc.n_samples,
                    r.z,
                    u8::from(r.pass)
                );
            }
            out
        }
        OutputFormat::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "scalar": r.name,
                        "analytic": float_or_marker(r.analytic),
                        "mc_mean": float_or_marker(r.mc.mean),
                        "mc_std_error": float_or_marker(r.mc.std_error),
                        "mc_n": r.mc.n_samples,
                        "z": float_or_marker(r.z),
                        "pass": r.pass,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "title": "hetnet validate",
                "samples": samples,
                "seed": seed.0,
                "mode": mode.label(),
                "rows": items,
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
            text.push('\n');
            text
        }
    }
}

fn float_or_marker(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or_else(|| serde_json::Value::String("NaN".into()))
}
