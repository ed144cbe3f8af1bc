//! Scaled-down statistical checks of the positive-P ensemble against the
//! exact routes. The full-size versions live in the acceptance suite.

use triwell::analytic::Analytic;
use triwell::criteria;
use triwell::model::{InitialState, SystemConfig};
use triwell::oracle::ThreeWellOracle;
use triwell::ppsim::run_ensemble;

#[test]
fn chi_zero_fock_ensemble_matches_closed_forms() {
    let cfg = SystemConfig::new(1.0, 0.0, 200.0, InitialState::Fock)
        .with_n_traj(20_000)
        .with_t_max(3.0)
        .with_seed(7101);
    let series = run_ensemble(&cfg).unwrap();
    let report = criteria::report(&series).unwrap();
    assert!(
        report.sanity_warnings().is_empty(),
        "healthy run raised {:?}",
        report.sanity_warnings()
    );
    let analytic = Analytic::new(&cfg);
    let checked = [
        "N1", "N2", "VN1m3", "xi13", "sigma13", "sigma31", "zeta13", "DSp13", "DSm13", "gamma13",
    ];
    let names = criteria::COLUMN_NAMES;
    let mut worst: f64 = 0.0;
    for (k, &t) in report.times.iter().enumerate() {
        let want = analytic.point(t).unwrap().as_array();
        for &name in &checked {
            let c = names.iter().position(|&n| n == name).unwrap();
            let m = report.points[k].column(c);
            let diff = (m.value - want[c]).abs();
            // 4 sigma + tiny absolute floor keeps the scaled-down run stable.
            assert!(
                diff < 4.0 * m.se + 1e-6 * want[c].abs().max(1.0),
                "t = {t} {name}: {} ± {} vs {}",
                m.value,
                m.se,
                want[c]
            );
            if m.se > 0.0 {
                worst = worst.max(diff / m.se);
            }
        }
    }
    assert!(worst > 0.1, "standard errors look degenerate");
}

#[test]
fn interacting_small_n_matches_oracle() {
    let n = 4;
    let chi = 0.1;
    let cfg = SystemConfig::new(1.0, chi, n as f64, InitialState::Fock)
        .with_n_traj(20_000)
        .with_t_max(1.5)
        .with_seed(5150);
    let series = run_ensemble(&cfg).unwrap();
    assert_eq!(
        series.n_diverged, 0,
        "unexpected divergences in a mild regime"
    );
    let report = criteria::report(&series).unwrap();

    let oracle = ThreeWellOracle::new(n, 1.0, chi).unwrap();
    let psi0 = oracle.middle_fock_state();
    let names = criteria::COLUMN_NAMES;
    for (k, &t) in report.times.iter().enumerate() {
        let exact = criteria::evaluate(&oracle.moments(&oracle.evolve(&psi0, t))).unwrap();
        let exact = exact.as_array();
        for &name in &["N1", "N2", "N3", "xi13"] {
            let c = names.iter().position(|&n| n == name).unwrap();
            let m = report.points[k].column(c);
            assert!(
                (m.value - exact[c]).abs() < 4.0 * m.se + 2e-3,
                "t = {t} {name}: {} ± {} vs {}",
                m.value,
                m.se,
                exact[c]
            );
        }
    }
}

#[test]
fn coherent_interacting_runs_clean() {
    // The Fig. 5 regime at reduced size: no divergences, DS starts at 4.
    let cfg = SystemConfig::new(1.0, 1e-3, 200.0, InitialState::Coherent)
        .with_n_traj(5_000)
        .with_t_max(1.0)
        .with_seed(31);
    let series = run_ensemble(&cfg).unwrap();
    assert_eq!(series.n_diverged, 0);
    let report = criteria::report(&series).unwrap();
    let first = report.points[0].column(names_idx("DSm13"));
    assert!(
        (first.value - 4.0).abs() < 1e-9,
        "DS-(t=0) = {}",
        first.value
    );
}

fn names_idx(name: &str) -> usize {
    criteria::COLUMN_NAMES
        .iter()
        .position(|&n| n == name)
        .unwrap()
}
