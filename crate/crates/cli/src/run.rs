//! Mode execution: turns a resolved configuration into an output table.

use triwell::analytic::Analytic;
use triwell::beamsplitter::{self, BsConfig};
use triwell::criteria::{self, CriteriaReport, COLUMN_NAMES};
use triwell::model::{InitialState, SystemConfig};
use triwell::moments::MomentVector;
use triwell::oracle::ThreeWellOracle;
use triwell::ppsim::{output_grid, run_ensemble};

use crate::table::Table;
use crate::CliError;

fn config_json(cfg: &SystemConfig, mode: &str) -> serde_json::Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    v["mode"] = serde_json::Value::String(mode.into());
    v
}

fn grid_times(cfg: &SystemConfig) -> Result<Vec<f64>, CliError> {
    Ok(output_grid(cfg).map_err(CliError::from_core)?.times)
}

/// Exact witness columns on the run's grid via the closed forms (`chi` is
/// ignored; the analytic route models the non-interacting system).
pub fn analytic_table(cfg: &SystemConfig) -> Result<Table, CliError> {
    cfg.validate().map_err(CliError::from_core)?;
    let analytic = Analytic::new(cfg);
    let times = grid_times(cfg)?;
    let mut table = Table::new(value_columns(false), config_json(cfg, "analytic"));
    for &t in &times {
        let point = analytic.point(t).map_err(CliError::from_core)?;
        let mut row = Vec::with_capacity(24);
        row.push(t);
        row.extend_from_slice(&point.as_array());
        table.push_row(row);
    }
    Ok(table)
}

/// Positive-P ensemble witness columns with standard errors.
pub fn stochastic_table(cfg: &SystemConfig) -> Result<Table, CliError> {
    let report = stochastic_report(cfg)?;
    let mut config = config_json(cfg, "stochastic");
    config["n_used"] = report.n_used.into();
    config["n_diverged"] = report.n_diverged.into();
    let mut table = Table::new(value_columns(true), config);
    for (k, &t) in report.times.iter().enumerate() {
        let mut row = Vec::with_capacity(1 + 2 * COLUMN_NAMES.len());
        row.push(t);
        let p = &report.points[k];
        for c in 0..COLUMN_NAMES.len() {
            let m = p.column(c);
            row.push(m.value);
            row.push(m.se);
        }
        table.push_row(row);
    }
    Ok(table)
}

pub fn stochastic_report(cfg: &SystemConfig) -> Result<CriteriaReport, CliError> {
    let series = run_ensemble(cfg).map_err(CliError::from_core)?;
    let report = criteria::report(&series).map_err(CliError::from_core)?;
    for warning in report.sanity_warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(report)
}

/// Exact fixed-N Fock-space witness columns (Fock initial state).
pub fn oracle_table(cfg: &SystemConfig) -> Result<Table, CliError> {
    let report = oracle_report(cfg)?;
    let mut table = Table::new(value_columns(false), config_json(cfg, "oracle"));
    for (k, &t) in report.times.iter().enumerate() {
        let mut row = Vec::with_capacity(24);
        row.push(t);
        row.extend_from_slice(&report.points[k].value.as_array());
        table.push_row(row);
    }
    Ok(table)
}

pub fn oracle_report(cfg: &SystemConfig) -> Result<CriteriaReport, CliError> {
    cfg.validate().map_err(CliError::from_core)?;
    if cfg.initial_state != InitialState::Fock {
        return Err(CliError::Config(
            "the exact oracle evolves the fixed-N sector and supports only `fock` \
             initial states"
                .into(),
        ));
    }
    let n = cfg.n_atoms as usize;
    let oracle = ThreeWellOracle::new(n, cfg.j, cfg.chi).map_err(CliError::from_core)?;
    let times = grid_times(cfg)?;
    // Step the grid incrementally so large sectors (integrated, not
    // diagonalized) stay linear in t_max.
    let mut psi = oracle.middle_fock_state();
    let mut frames: Vec<MomentVector> = Vec::with_capacity(times.len());
    frames.push(oracle.moments(&psi));
    for pair in times.windows(2) {
        psi = oracle.evolve(&psi, pair[1] - pair[0]);
        frames.push(oracle.moments(&psi));
    }
    criteria::report_exact(&times, &frames).map_err(CliError::from_core)
}

/// Stochastic run against the exact reference (analytic when `chi = 0`,
/// otherwise the Fock-space oracle), with per-column difference z-scores.
pub fn compare_table(cfg: &SystemConfig) -> Result<Table, CliError> {
    let reference = if cfg.chi == 0.0 {
        cfg.validate().map_err(CliError::from_core)?;
        let analytic = Analytic::new(cfg);
        grid_times(cfg)?
            .iter()
            .map(|&t| analytic.point(t).map_err(CliError::from_core))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        oracle_report(cfg)?.points.iter().map(|p| p.value).collect()
    };
    let stoch = stochastic_report(cfg)?;

    let mut columns = vec!["t".to_string()];
    for name in COLUMN_NAMES {
        columns.push(name.to_string());
        columns.push(format!("{name}_se"));
        columns.push(format!("{name}_ref"));
        columns.push(format!("{name}_z"));
    }
    let mut config = config_json(cfg, "compare");
    config["reference"] = serde_json::Value::String(if cfg.chi == 0.0 {
        "analytic".into()
    } else {
        "oracle".into()
    });
    config["n_used"] = stoch.n_used.into();
    config["n_diverged"] = stoch.n_diverged.into();

    let mut table = Table::new(columns, config);
    for (k, &t) in stoch.times.iter().enumerate() {
        let refs = reference[k].as_array();
        let mut row = Vec::with_capacity(1 + 4 * COLUMN_NAMES.len());
        row.push(t);
        for c in 0..COLUMN_NAMES.len() {
            let m = stoch.points[k].column(c);
            let diff = m.value - refs[c];
            row.push(m.value);
            row.push(m.se);
            row.push(refs[c]);
            row.push(diff / m.se.max(1e-12));
        }
        table.push_row(row);
    }
    Ok(table)
}

/// Single-row table of the balanced-beamsplitter witnesses.
pub fn beamsplitter_table(cfg: &BsConfig) -> Result<Table, CliError> {
    let xi = beamsplitter::bs_xi(cfg).map_err(CliError::from_core)?;
    let sigma = beamsplitter::bs_sigma(cfg).map_err(CliError::from_core)?;
    let (dsp, dsm) = beamsplitter::bs_duan_simon(cfg).map_err(CliError::from_core)?;
    let gamma = beamsplitter::bs_reid_gamma(cfg).map_err(CliError::from_core)?;
    let mut config = serde_json::to_value(cfg).expect("config serializes");
    config["mode"] = serde_json::Value::String("beamsplitter".into());
    let mut table = Table::new(
        vec![
            "xi_ab".into(),
            "sigma_ab".into(),
            "DSp_ab".into(),
            "DSm_ab".into(),
            "gamma_ab".into(),
        ],
        config,
    );
    table.push_row(vec![xi, sigma, dsp, dsm, gamma]);
    Ok(table)
}

/// `t` plus every witness column, each followed by `_se` when requested.
fn value_columns(with_se: bool) -> Vec<String> {
    let mut columns = vec!["t".to_string()];
    for name in COLUMN_NAMES {
        columns.push(name.to_string());
        if with_se {
            columns.push(format!("{name}_se"));
        }
    }
    columns
}
