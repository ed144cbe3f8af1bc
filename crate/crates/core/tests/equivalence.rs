//! Cross-route consistency: the closed forms, the moment-based witnesses and
//! the exact Fock-space propagation must describe the same physics.

use num_complex::Complex64;
use triwell::analytic::{mode_coeffs, Analytic};
use triwell::criteria;
use triwell::model::{InitialState, OmegaRate, SystemConfig};
use triwell::moments::MomentVector;
use triwell::oracle::ThreeWellOracle;

/// Exact chi = 0 moment vector at time `t` for the configured initial state,
/// synthesized from the mode-mixing matrix and the middle-well moments. This
/// is an independent construction: it never calls the closed-form witnesses
/// it is used to check.
fn synthesize_chi0_moments(cfg: &SystemConfig, t: f64) -> MomentVector {
    let u = mode_coeffs(t, cfg.omega()).u;
    let n = cfg.n_atoms;
    let (beta, a2, quartic) = match cfg.initial_state {
        // ⟨a₂⟩ = 0, ⟨a₂²⟩ = 0, ⟨a₂†²a₂²⟩ = N(N-1)
        InitialState::Fock => (0.0, 0.0, n * (n - 1.0)),
        // ⟨a₂⟩ = √N, ⟨a₂²⟩ = N, ⟨a₂†²a₂²⟩ = N²
        InitialState::Coherent => (n.sqrt(), n, n * n),
    };
    let mut m = MomentVector::zero();
    let col = [u[0][1], u[1][1], u[2][1]];
    for j in 0..3 {
        m.0[j] = col[j] * beta;
        m.0[3 + j] = (col[j] * beta).conj();
        let wj = col[j].norm_sqr();
        m.0[30 + j] = Complex64::new(wj * wj * quartic, 0.0);
    }
    for i in 0..3 {
        for j in 0..3 {
            m.0[6 + 3 * i + j] = col[i].conj() * col[j] * n;
        }
    }
    let sym = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    for (k, &(i, j)) in sym.iter().enumerate() {
        let aa = col[i] * col[j] * a2;
        m.0[15 + k] = aa;
        m.0[21 + k] = aa.conj();
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let w = col[i].norm_sqr() * col[j].norm_sqr();
        m.0[27 + k] = Complex64::new(w * quartic, 0.0);
    }
    m
}

#[test]
fn criteria_on_synthesized_moments_match_closed_forms() {
    for state in [InitialState::Fock, InitialState::Coherent] {
        let cfg = SystemConfig::new(1.0, 0.0, 200.0, state);
        let analytic = Analytic::new(&cfg);
        for k in 0..120 {
            let t = k as f64 * 0.06;
            let m = synthesize_chi0_moments(&cfg, t);
            let got = criteria::evaluate(&m).unwrap().as_array();
            let want = analytic.point(t).unwrap().as_array();
            for (c, (g, w)) in got.iter().zip(want.iter()).enumerate() {
                let scale = w.abs().max(1.0);
                assert!(
                    (g - w).abs() < 1e-10 * scale,
                    "{state} t = {t}: column {} ({}) moment route {} vs closed form {}",
                    c,
                    criteria::COLUMN_NAMES[c],
                    g,
                    w
                );
            }
        }
    }
}

#[test]
fn criteria_on_oracle_moments_match_direct_expectations() {
    // V(N_j) and ⟨N₁N₃⟩ computed straight from the state probabilities must
    // agree with the normally-ordered moment route used by `criteria`.
    let oracle = ThreeWellOracle::new(4, 1.0, 0.1).unwrap();
    let psi0 = oracle.middle_fock_state();
    for k in 1..=20 {
        let t = k as f64 * 0.1;
        let psi = oracle.evolve(&psi0, t);
        let m = oracle.moments(&psi);
        let v = criteria::number_variances(&m);

        let basis = oracle.basis();
        let mut mean = [0.0f64; 3];
        let mut second = [0.0f64; 3];
        let mut n1n3 = 0.0f64;
        for (idx, amp) in psi.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            let occ = basis.occupations(idx);
            for j in 0..3 {
                mean[j] += p * occ[j] as f64;
                second[j] += p * (occ[j] * occ[j]) as f64;
            }
            n1n3 += p * (occ[0] * occ[2]) as f64;
        }
        for j in 0..3 {
            let direct = second[j] - mean[j] * mean[j];
            assert!(
                (v[j] - direct).abs() < 1e-10,
                "t = {t} V(N{j}): {} vs {}",
                v[j],
                direct
            );
        }
        let direct_diff =
            second[0] + second[2] - 2.0 * n1n3 - (mean[0] - mean[2]) * (mean[0] - mean[2]);
        assert!((v[3] - direct_diff).abs() < 1e-10);

        // xi13 from moments vs the direct expectation form.
        let xi = criteria::hz_xi(&m, 1, 3);
        let direct_xi = (m.ata(0, 2) * m.ata(2, 0)).re - n1n3;
        assert!((xi - direct_xi).abs() < 1e-10);
    }
}

#[test]
fn analytic_matches_oracle_for_small_n() {
    // chi = 0 equivalence on a dense grid for N = 1..4.
    let omega = OmegaRate::from_j(1.0);
    for n in 1..=4usize {
        let cfg = SystemConfig::new(1.0, 0.0, n as f64, InitialState::Fock);
        let analytic = Analytic::new(&cfg);
        let oracle = ThreeWellOracle::new(n, 1.0, 0.0).unwrap();
        let psi0 = oracle.middle_fock_state();
        for k in 0..=100 {
            let t = k as f64 * omega.period() / 100.0;
            let m = oracle.moments(&oracle.evolve(&psi0, t));
            let got = criteria::evaluate(&m).unwrap().as_array();
            let want = analytic.point(t).unwrap().as_array();
            for (c, (g, w)) in got.iter().zip(want.iter()).enumerate() {
                assert!(
                    (g - w).abs() < 1e-8,
                    "N = {n}, t = {t}: column {} ({}) oracle {} vs analytic {}",
                    c,
                    criteria::COLUMN_NAMES[c],
                    g,
                    w
                );
            }
        }
    }
}

#[test]
fn sigma_zeta_identities_on_oracle_moments() {
    let oracle = ThreeWellOracle::new(4, 1.0, 0.05).unwrap();
    let psi0 = oracle.middle_fock_state();
    for k in 1..=15 {
        let t = k as f64 * 0.13;
        let m = oracle.moments(&oracle.evolve(&psi0, t));
        let xi = criteria::hz_xi(&m, 1, 3);
        let sigma = criteria::steering_sigma(&m, 1, 3);
        let zeta = criteria::bell_zeta(&m, 1, 3);
        let n1 = m.n(0).re;
        let n3 = m.n(2).re;
        assert!((sigma - (xi - 0.5 * n1)).abs() < 1e-12);
        assert!((zeta - (sigma - 0.5 * n3 - 0.25)).abs() < 1e-12);
        // Symmetric wells: sigma13 = sigma31.
        assert!((sigma - criteria::steering_sigma(&m, 3, 1)).abs() < 1e-10);
    }
}
