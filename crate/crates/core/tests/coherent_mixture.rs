//! Exact reference for a coherent input with interactions.
//!
//! The Hamiltonian conserves total atom number, so every number-conserving
//! observable of a coherent input equals the Poisson mixture of fixed-N
//! sector expectations. That gives an exact oracle for the interacting
//! coherent case that the positive-P ensemble must reproduce, and it settles
//! the sign of the early-time Hillery-Zubairy witness.

use triwell::criteria;
use triwell::model::{InitialState, SystemConfig};
use triwell::oracle::ThreeWellOracle;
use triwell::ppsim::run_ensemble;

/// Poisson-mixture expectation of (populations, xi13) for a coherent input.
fn exact_coherent_number_observables(
    mean_n: f64,
    j: f64,
    chi: f64,
    times: &[f64],
) -> Vec<([f64; 3], f64)> {
    // Poisson weights until the tail is negligible.
    let mut weights = vec![(-mean_n).exp()];
    while weights.iter().sum::<f64>() < 1.0 - 1e-13 && weights.len() < 120 {
        let m = weights.len() as f64;
        weights.push(weights[weights.len() - 1] * mean_n / m);
    }

    let mut out = vec![([0.0; 3], 0.0); times.len()];
    // ata(0,2), ata(2,0) and nn(0,2) are sector-diagonal, so mixture
    // expectations add; xi13 is then formed from the mixed moments.
    let mut ata02 = vec![num_complex::Complex64::ZERO; times.len()];
    let mut ata20 = vec![num_complex::Complex64::ZERO; times.len()];
    let mut nn02 = vec![0.0; times.len()];
    for (m, &w) in weights.iter().enumerate() {
        if w < 1e-16 {
            continue;
        }
        let oracle = ThreeWellOracle::new(m, j, chi).unwrap();
        let psi0 = oracle.middle_fock_state();
        for (k, &t) in times.iter().enumerate() {
            let mv = oracle.moments(&oracle.evolve(&psi0, t));
            for well in 0..3 {
                out[k].0[well] += w * mv.n(well).re;
            }
            ata02[k] += w * mv.ata(0, 2);
            ata20[k] += w * mv.ata(2, 0);
            nn02[k] += w * mv.nn(0, 2).re;
        }
    }
    for k in 0..times.len() {
        out[k].1 = (ata02[k] * ata20[k]).re - nn02[k];
    }
    out
}

#[test]
fn interacting_coherent_ensemble_matches_sector_mixture() {
    let mean_n = 4.0;
    let chi = 0.05; // chi * N matches the fig4/fig5 regime (0.2)
    let cfg = SystemConfig::new(1.0, chi, mean_n, InitialState::Coherent)
        .with_n_traj(30_000)
        .with_t_max(2.0)
        .with_grid_dt(0.1)
        .with_seed(60401);
    let series = run_ensemble(&cfg).unwrap();
    assert_eq!(series.n_diverged, 0);
    let report = criteria::report(&series).unwrap();

    let exact = exact_coherent_number_observables(mean_n, 1.0, chi, &report.times);
    let xi_idx = criteria::COLUMN_NAMES
        .iter()
        .position(|&n| n == "xi13")
        .unwrap();
    let n_idx = [0, 1, 2];
    for (k, &t) in report.times.iter().enumerate() {
        for well in 0..3 {
            let m = report.points[k].column(n_idx[well]);
            assert!(
                (m.value - exact[k].0[well]).abs() < 4.0 * m.se + 1e-3,
                "t = {t} N{}: {} ± {} vs exact {}",
                well + 1,
                m.value,
                m.se,
                exact[k].0[well]
            );
        }
        let xi = report.points[k].column(xi_idx);
        assert!(
            (xi.value - exact[k].1).abs() < 4.0 * xi.se + 1e-3,
            "t = {t} xi13: {} ± {} vs exact {}",
            xi.value,
            xi.se,
            exact[k].1
        );
    }
}

#[test]
fn interacting_coherent_hz_witness_goes_weakly_positive() {
    // The collisional nonlinearity makes even a coherent input weakly
    // entangled during the first splitting: the exact sector mixture puts
    // xi13 above zero at early times (the same physics that pulls the
    // Duan-Simon sum below 4 there), before it turns negative.
    let times: Vec<f64> = (0..=40).map(|k| k as f64 * 0.05).collect();
    let exact = exact_coherent_number_observables(4.0, 1.0, 0.05, &times);
    let max_xi = exact
        .iter()
        .map(|&(_, xi)| xi)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_xi = exact
        .iter()
        .map(|&(_, xi)| xi)
        .fold(f64::INFINITY, f64::min);
    assert!(
        max_xi > 1e-4,
        "expected a weak positive HZ window, max xi13 = {max_xi}"
    );
    assert!(min_xi < -1e-3, "xi13 should turn negative, min = {min_xi}");
}
