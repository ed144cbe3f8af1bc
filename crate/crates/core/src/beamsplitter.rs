//! Closed forms for the optical-beamsplitter comparison system.
//!
//! A lossless beamsplitter mixes input modes as
//! `a_out = √η a_in + √(1-η) b_in`, `b_out = -√(1-η) a_in + √η b_in`,
//! with port b in vacuum. The quadrature transformation is exposed for
//! general `η`; the witness closed forms are derived for the balanced case
//! `η = ½` the comparison uses, and anything else routes through the exact
//! oracle ([`crate::oracle::bs_exact`]).

use serde::{Deserialize, Serialize};

use crate::analytic::inferred_variance;
use crate::{Error, Result};

/// Input state of port a (port b is always vacuum).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum BsInput {
    /// Number state `|N⟩`.
    Fock(u32),
    /// Coherent state with the given mean photon number.
    Coherent(f64),
    /// Amplitude-squeezed vacuum with `V(X) = e^{-r}`, `V(Y) = e^{+r}`.
    Squeezed(f64),
}

/// Beamsplitter configuration: amplitude reflectivity `√η` and the port-a
/// input family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BsConfig {
    pub eta: f64,
    pub input: BsInput,
}

impl BsConfig {
    pub fn balanced(input: BsInput) -> Self {
        BsConfig { eta: 0.5, input }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidConfig(format!(
                "eta must lie in [0, 1], got {}",
                self.eta
            )));
        }
        match self.input {
            BsInput::Coherent(n) if !(n >= 0.0 && n.is_finite()) => Err(Error::InvalidConfig(
                format!("coherent mean number must be >= 0, got {n}"),
            )),
            BsInput::Squeezed(r) if !(r >= 0.0 && r.is_finite()) => Err(Error::InvalidConfig(
                format!("squeezing parameter must be >= 0, got {r}"),
            )),
            _ => Ok(()),
        }
    }

    fn require_balanced(&self) -> Result<()> {
        if (self.eta - 0.5).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "witness closed forms hold for the balanced splitter (eta = 1/2); \
                 got eta = {}. Use the exact oracle for general eta.",
                self.eta
            )));
        }
        Ok(())
    }
}

/// Input-state moments the closed forms consume.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BsInputStats {
    pub mean_n: f64,
    pub var_n: f64,
    pub vx: f64,
    pub vy: f64,
}

pub fn input_stats(input: &BsInput) -> BsInputStats {
    match *input {
        BsInput::Fock(n) => {
            let n = n as f64;
            BsInputStats {
                mean_n: n,
                var_n: 0.0,
                vx: 2.0 * n + 1.0,
                vy: 2.0 * n + 1.0,
            }
        }
        BsInput::Coherent(mean_n) => BsInputStats {
            mean_n,
            var_n: mean_n,
            vx: 1.0,
            vy: 1.0,
        },
        BsInput::Squeezed(r) => {
            // V(X) = e^{-r} corresponds to squeezing parameter s = r/2:
            // ⟨n⟩ = sinh²s, V(n) = 2 sinh²s cosh²s = ½ sinh²r.
            let s = 0.5 * r;
            BsInputStats {
                mean_n: s.sinh().powi(2),
                var_n: 0.5 * r.sinh().powi(2),
                vx: (-r).exp(),
                vy: r.exp(),
            }
        }
    }
}

/// Hillery-Zubairy witness between the two output ports:
/// `ξ_ab = ¼[⟨N̂_a⟩ − V(N̂_a)]`. Positive exactly when the input is
/// sub-Poissonian.
pub fn bs_xi(config: &BsConfig) -> Result<f64> {
    config.validate()?;
    config.require_balanced()?;
    let s = input_stats(&config.input);
    Ok(0.25 * (s.mean_n - s.var_n))
}

/// Steering witness between the output ports: `Σ_ab = Σ_ba = −V(N̂_a)/4`,
/// never positive, so the splitter shows no steering.
pub fn bs_sigma(config: &BsConfig) -> Result<f64> {
    config.validate()?;
    config.require_balanced()?;
    Ok(-0.25 * input_stats(&config.input).var_n)
}

/// Output quadrature variances and covariances for general `η`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BsQuadTable {
    pub vx_a: f64,
    pub vy_a: f64,
    pub vx_b: f64,
    pub vy_b: f64,
    pub cov_x: f64,
    pub cov_y: f64,
}

/// Output quadratures in terms of the inputs (vacuum port b):
/// `V(X_a^out) = η V(X_a) + (1-η)`, `V(X_b^out) = η + (1-η) V(X_a)`,
/// `Cov(X_a^out, X_b^out) = √(η(1-η)) [1 − V(X_a)]`, and likewise for Y.
pub fn bs_transform_quadratures(config: &BsConfig) -> Result<BsQuadTable> {
    config.validate()?;
    let s = input_stats(&config.input);
    let eta = config.eta;
    let cross = (eta * (1.0 - eta)).sqrt();
    Ok(BsQuadTable {
        vx_a: eta * s.vx + (1.0 - eta),
        vy_a: eta * s.vy + (1.0 - eta),
        vx_b: eta + (1.0 - eta) * s.vx,
        vy_b: eta + (1.0 - eta) * s.vy,
        cov_x: cross * (1.0 - s.vx),
        cov_y: cross * (1.0 - s.vy),
    })
}

/// Mean output photon numbers for general `η`; their sum equals the input
/// mean.
pub fn bs_output_mean_numbers(config: &BsConfig) -> Result<(f64, f64)> {
    config.validate()?;
    let s = input_stats(&config.input);
    Ok((config.eta * s.mean_n, (1.0 - config.eta) * s.mean_n))
}

/// Balanced Duan-Simon sums
/// `DS₊ = 2[V(X_b^in) + V(Y_a^in)]`, `DS₋ = 2[V(X_a^in) + V(Y_b^in)]`
/// with vacuum port b. A squeezed input pulls `DS₋` below the floor of 4.
pub fn bs_duan_simon(config: &BsConfig) -> Result<(f64, f64)> {
    config.validate()?;
    config.require_balanced()?;
    let s = input_stats(&config.input);
    Ok((2.0 * (1.0 + s.vy), 2.0 * (s.vx + 1.0)))
}

/// Reid EPR product of the balanced outputs using the optimal linear
/// inference between the ports:
/// `Γ = 4 V_x V_y / [(V_x + 1)(V_y + 1)]` with `V_x = V(X_a^in)`,
/// `V_y = V(Y_a^in)`.
///
/// Squeezed input: `Γ = 2/(1 + cosh r) < 1` for every `r > 0` (the paradox).
/// Fock input: `Γ = (2N+1)²/(N+1)² ≥ 1`, equality only at `N = 0`.
/// Coherent input: `Γ = 1`.
pub fn bs_reid_gamma(config: &BsConfig) -> Result<f64> {
    config.validate()?;
    config.require_balanced()?;
    let q = bs_transform_quadratures(config)?;
    let vinf_x = inferred_variance(q.vx_a, q.cov_x, q.vx_b)?;
    let vinf_y = inferred_variance(q.vy_a, q.cov_y, q.vy_b)?;
    Ok(vinf_x * vinf_y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria;
    use crate::oracle::bs_exact;

    #[test]
    fn xi_examples() {
        assert_eq!(
            bs_xi(&BsConfig::balanced(BsInput::Coherent(200.0))).unwrap(),
            0.0
        );
        assert_eq!(
            bs_xi(&BsConfig::balanced(BsInput::Fock(200))).unwrap(),
            50.0
        );
        for r in [0.1, 0.5, 1.0] {
            assert!(bs_xi(&BsConfig::balanced(BsInput::Squeezed(r))).unwrap() < 0.0);
        }
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(
            bs_sigma(&BsConfig::balanced(BsInput::Fock(7))).unwrap(),
            0.0
        );
        assert_eq!(
            bs_sigma(&BsConfig::balanced(BsInput::Coherent(200.0))).unwrap(),
            -50.0
        );
        assert_eq!(
            bs_sigma(&BsConfig::balanced(BsInput::Fock(0))).unwrap(),
            0.0
        );
    }

    #[test]
    fn duan_simon_examples() {
        let (_, dsm) = bs_duan_simon(&BsConfig::balanced(BsInput::Squeezed(1.0))).unwrap();
        assert!((dsm - 2.0 * (1.0 + (-1.0f64).exp())).abs() < 1e-12);
        assert!(dsm < 4.0);

        let (dsp, dsm) = bs_duan_simon(&BsConfig::balanced(BsInput::Fock(5))).unwrap();
        assert_eq!((dsp, dsm), (24.0, 24.0)); // 4N + 4

        let (dsp, dsm) = bs_duan_simon(&BsConfig::balanced(BsInput::Coherent(9.0))).unwrap();
        assert_eq!((dsp, dsm), (4.0, 4.0));
    }

    #[test]
    fn reid_examples() {
        assert!(
            (bs_reid_gamma(&BsConfig::balanced(BsInput::Squeezed(0.0))).unwrap() - 1.0).abs()
                < 1e-12
        );
        assert!(
            (bs_reid_gamma(&BsConfig::balanced(BsInput::Fock(0))).unwrap() - 1.0).abs() < 1e-12
        );
        for r in [0.2, 0.7, 1.0] {
            let g = bs_reid_gamma(&BsConfig::balanced(BsInput::Squeezed(r))).unwrap();
            assert!((g - 2.0 / (1.0 + r.cosh())).abs() < 1e-12);
            assert!(g < 1.0);
        }
        for n in 1..=8u32 {
            let g = bs_reid_gamma(&BsConfig::balanced(BsInput::Fock(n))).unwrap();
            let nf = n as f64;
            let expect = ((2.0 * nf + 1.0) / (nf + 1.0)).powi(2);
            assert!((g - expect).abs() < 1e-12);
            assert!(g > 1.0);
        }
    }

    #[test]
    fn quadrature_transform_examples() {
        // eta = 1: outputs equal inputs.
        let q = bs_transform_quadratures(&BsConfig {
            eta: 1.0,
            input: BsInput::Squeezed(0.8),
        })
        .unwrap();
        assert!((q.vx_a - (-0.8f64).exp()).abs() < 1e-12);
        assert_eq!(q.cov_x, 0.0);

        // Balanced coherent: all unit.
        let q = bs_transform_quadratures(&BsConfig::balanced(BsInput::Coherent(4.0))).unwrap();
        for v in [q.vx_a, q.vy_a, q.vx_b, q.vy_b] {
            assert!((v - 1.0).abs() < 1e-12);
        }

        // Balanced squeezed r = 1: V(X_a^out) = (e^{-1} + 1)/2.
        let q = bs_transform_quadratures(&BsConfig::balanced(BsInput::Squeezed(1.0))).unwrap();
        assert!((q.vx_a - 0.5 * ((-1.0f64).exp() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn number_conservation_for_general_eta() {
        for eta in [0.0, 0.3, 0.5, 0.77, 1.0] {
            for input in [
                BsInput::Fock(6),
                BsInput::Coherent(3.5),
                BsInput::Squeezed(0.9),
            ] {
                let cfg = BsConfig { eta, input };
                let (na, nb) = bs_output_mean_numbers(&cfg).unwrap();
                let total = input_stats(&input).mean_n;
                assert!((na + nb - total).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unbalanced_witnesses_are_rejected() {
        let cfg = BsConfig {
            eta: 0.6,
            input: BsInput::Fock(2),
        };
        assert!(bs_xi(&cfg).is_err());
        assert!(bs_duan_simon(&cfg).is_err());
        assert!(bs_reid_gamma(&cfg).is_err());
        // but the transformation itself is fine
        assert!(bs_transform_quadratures(&cfg).is_ok());
    }

    #[test]
    fn closed_forms_match_exact_oracle() {
        // Fock N <= 6, coherent mean <= 4, squeezed r <= 1, all to 1e-8.
        let mut inputs = vec![BsInput::Coherent(0.5), BsInput::Coherent(4.0)];
        inputs.extend((0..=6).map(BsInput::Fock));
        inputs.extend([0.1, 0.5, 1.0].map(BsInput::Squeezed));
        for input in inputs {
            let cfg = BsConfig::balanced(input);
            let exact = bs_exact(&input);
            assert!(exact.tail_mass < 1e-10);
            let p = &exact.pair;
            assert!(
                (criteria::pair_xi(p) - bs_xi(&cfg).unwrap()).abs() < 1e-8,
                "xi mismatch for {input:?}"
            );
            assert!(
                (criteria::pair_sigma(p) - bs_sigma(&cfg).unwrap()).abs() < 1e-8,
                "sigma mismatch for {input:?}: oracle {} closed {}",
                criteria::pair_sigma(p),
                bs_sigma(&cfg).unwrap()
            );
            let (dsp, dsm) = bs_duan_simon(&cfg).unwrap();
            let (odsp, odsm) = criteria::pair_duan_simon(p);
            assert!((dsp - odsp).abs() < 1e-8, "DS+ mismatch for {input:?}");
            assert!((dsm - odsm).abs() < 1e-8, "DS- mismatch for {input:?}");
            let gamma = criteria::pair_reid_gamma(p).unwrap();
            assert!(
                (gamma - bs_reid_gamma(&cfg).unwrap()).abs() < 1e-8,
                "gamma mismatch for {input:?}: oracle {gamma} closed {}",
                bs_reid_gamma(&cfg).unwrap()
            );
        }
    }

    #[test]
    fn fock_xi_equals_three_well_peak() {
        // The balanced splitter reproduces the splitter system's HZ peak N/4.
        for n in [1u32, 10, 200] {
            let xi = bs_xi(&BsConfig::balanced(BsInput::Fock(n))).unwrap();
            assert_eq!(xi, n as f64 / 4.0);
        }
    }
}
