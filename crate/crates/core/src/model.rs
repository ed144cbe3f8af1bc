//! Physical model, run configuration and shared domain types.
//!
//! Quadrature convention throughout the crate: `X = a + a†`,
//! `Y = -i(a - a†)`, so the vacuum has `V(X) = V(Y) = 1` and the Duan-Simon
//! separability floor sits at 4. No ħ/2 scaling anywhere.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Quantum state of the initially occupied middle well.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    /// Number state `|N⟩`: zero number variance, `V(X) = V(Y) = 2N + 1`.
    Fock,
    /// Coherent state with mean number `N`: Poissonian statistics,
    /// unit quadrature variances.
    Coherent,
}

impl std::fmt::Display for InitialState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitialState::Fock => write!(f, "fock"),
            InitialState::Coherent => write!(f, "coherent"),
        }
    }
}

/// Physical and numerical parameters of one run.
///
/// Time is measured in units of `1/J` when `j = 1`; all reported quantities
/// are dimensionless.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Tunneling rate between neighbouring wells.
    pub j: f64,
    /// Collisional nonlinearity.
    pub chi: f64,
    /// Mean initial atom number in well 2 (integer for Fock inputs).
    pub n_atoms: f64,
    pub initial_state: InitialState,
    /// Final time of the run.
    pub t_max: f64,
    /// Integrator step size.
    pub dt: f64,
    /// Output grid spacing; must be an integer multiple of `dt`.
    pub grid_dt: f64,
    /// Ensemble size for stochastic runs.
    pub n_traj: u64,
    /// Master seed; trajectory `k` uses stream `k` of a counter-based
    /// generator seeded with this value.
    pub seed: u64,
}

impl SystemConfig {
    /// Numerical defaults: `dt = 1e-3`, output spacing `1e-2`,
    /// `t_max = 10`, `n_traj = 1e5`, `seed = 1`.
    pub fn new(j: f64, chi: f64, n_atoms: f64, initial_state: InitialState) -> Self {
        SystemConfig {
            j,
            chi,
            n_atoms,
            initial_state,
            t_max: 10.0,
            dt: 1e-3,
            grid_dt: 1e-2,
            n_traj: 100_000,
            seed: 1,
        }
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_grid_dt(mut self, grid_dt: f64) -> Self {
        self.grid_dt = grid_dt;
        self
    }

    pub fn with_n_traj(mut self, n_traj: u64) -> Self {
        self.n_traj = n_traj;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j >= 0.0 && self.j.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "J must be >= 0, got {}",
                self.j
            )));
        }
        if !self.chi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "chi must be finite, got {}",
                self.chi
            )));
        }
        if !(self.n_atoms >= 0.0 && self.n_atoms.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "n_atoms must be >= 0, got {}",
                self.n_atoms
            )));
        }
        if self.initial_state == InitialState::Fock && self.n_atoms.fract() != 0.0 {
            return Err(Error::InvalidConfig(format!(
                "Fock input requires an integer atom number, got {}",
                self.n_atoms
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        if !(self.grid_dt > 0.0 && self.grid_dt.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "grid_dt must be > 0, got {}",
                self.grid_dt
            )));
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_max must be >= 0, got {}",
                self.t_max
            )));
        }
        if self.n_traj < 1 {
            return Err(Error::InvalidConfig("n_traj must be >= 1".into()));
        }
        Ok(())
    }

    pub fn omega(&self) -> OmegaRate {
        OmegaRate::from_j(self.j)
    }

    /// Trajectory components beyond this modulus are flagged as diverged.
    pub fn divergence_bound(&self) -> f64 {
        1e6 * self.n_atoms.max(1.0).sqrt()
    }
}

/// The collective tunneling rate `Ω = √2·J` that sets the oscillation
/// frequency of the splitter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaRate {
    omega: f64,
}

impl OmegaRate {
    pub fn from_j(j: f64) -> Self {
        OmegaRate {
            omega: std::f64::consts::SQRT_2 * j,
        }
    }

    pub fn value(&self) -> f64 {
        self.omega
    }

    /// Period `2π/Ω` of the non-interacting dynamics.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }
}

/// Initial-state moments every closed form is expressed in: the middle-well
/// number mean and variance and the six single-well quadrature variances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialMoments {
    /// `⟨N̂₂(0)⟩`
    pub mean_n: f64,
    /// `V(N̂₂(0))`
    pub var_n: f64,
    /// `[V(X₁), V(Y₁), V(X₂), V(Y₂), V(X₃), V(Y₃)]` at `t = 0`.
    pub quad_vars: [f64; 6],
}

/// Moments implied by the configured initial state: wells 1 and 3 are vacuum
/// (`V(X) = V(Y) = 1`), the middle well is Fock (`V(N) = 0`,
/// `V(X) = V(Y) = 2N + 1`) or coherent (`V(N) = N`, unit quadratures).
pub fn initial_moments(config: &SystemConfig) -> InitialMoments {
    let n = config.n_atoms;
    let (var_n, quad2) = match config.initial_state {
        InitialState::Fock => (0.0, 2.0 * n + 1.0),
        InitialState::Coherent => (n, 1.0),
    };
    InitialMoments {
        mean_n: n,
        var_n,
        quad_vars: [1.0, 1.0, quad2, quad2, 1.0, 1.0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fock(n: f64) -> SystemConfig {
        SystemConfig::new(1.0, 0.0, n, InitialState::Fock)
    }

    #[test]
    fn fock_input_moments() {
        let m = initial_moments(&fock(200.0));
        assert_eq!(m.mean_n, 200.0);
        assert_eq!(m.var_n, 0.0);
        assert_eq!(m.quad_vars, [1.0, 1.0, 401.0, 401.0, 1.0, 1.0]);
    }

    #[test]
    fn coherent_input_moments() {
        let cfg = SystemConfig::new(1.0, 0.0, 200.0, InitialState::Coherent);
        let m = initial_moments(&cfg);
        assert_eq!(m.var_n, 200.0);
        assert_eq!(m.quad_vars, [1.0; 6]);
    }

    #[test]
    fn vacuum_fock_moments() {
        let m = initial_moments(&fock(0.0));
        assert_eq!(m.var_n, 0.0);
        assert_eq!(m.quad_vars, [1.0; 6]);
    }

    #[test]
    fn omega_squared_is_twice_j_squared() {
        for j in [0.0, 0.5, 1.0, 3.25, 17.0] {
            let omega = OmegaRate::from_j(j).value();
            assert!((omega * omega - 2.0 * j * j).abs() <= 1e-14 * (1.0 + 2.0 * j * j));
        }
    }

    #[test]
    fn initial_moments_ignore_numerics() {
        let a = initial_moments(&fock(7.0));
        let b = initial_moments(&fock(7.0).with_seed(99).with_dt(0.5).with_n_traj(3));
        assert_eq!(a, b);
    }

    #[test]
    fn fock_rejects_fractional_atom_number() {
        assert!(fock(2.5).validate().is_err());
        let coherent = SystemConfig::new(1.0, 0.0, 2.5, InitialState::Coherent);
        assert!(coherent.validate().is_ok());
    }

    #[test]
    fn validation_catches_bad_numerics() {
        assert!(fock(2.0).with_dt(0.0).validate().is_err());
        assert!(fock(2.0).with_n_traj(0).validate().is_err());
        let mut bad_j = fock(2.0);
        bad_j.j = -1.0;
        assert!(bad_j.validate().is_err());
    }
}
