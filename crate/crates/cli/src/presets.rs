//! Named experiment presets.
//!
//! Each preset fixes `J = 1` and 200 atoms in the middle well on a
//! `t ∈ [0, 10]` grid. Trajectory counts default to the desk-scale 10⁵ and
//! can be raised with `--trajectories`.

use triwell::model::{InitialState, SystemConfig};

use crate::CliError;

pub enum PresetRuns {
    Analytic(SystemConfig),
    /// `(suffix, config)` pairs, one stochastic run each.
    Stochastic(Vec<(&'static str, SystemConfig)>),
}

pub const PRESET_NAMES: [&str; 5] = ["fig1", "fig2", "fig3", "fig4", "fig5"];

pub fn preset(name: &str) -> Result<PresetRuns, CliError> {
    let base = |state, chi: f64, seed: u64| {
        SystemConfig::new(1.0, chi, 200.0, state)
            .with_t_max(10.0)
            .with_seed(seed)
    };
    match name {
        // Populations under the interacting dynamics, Fock input.
        "fig1" => Ok(PresetRuns::Stochastic(vec![(
            "",
            base(InitialState::Fock, 1e-3, 4801),
        )])),
        // Non-interacting number variances.
        "fig2" => Ok(PresetRuns::Analytic(base(InitialState::Fock, 0.0, 0))),
        "fig3" => Ok(PresetRuns::Analytic(base(InitialState::Coherent, 0.0, 0))),
        // Hillery-Zubairy witness for both input states.
        "fig4" => Ok(PresetRuns::Stochastic(vec![
            ("_fock", base(InitialState::Fock, 1e-3, 4804)),
            ("_coherent", base(InitialState::Coherent, 1e-3, 4805)),
        ])),
        // Duan-Simon witnesses, coherent input.
        "fig5" => Ok(PresetRuns::Stochastic(vec![(
            "",
            base(InitialState::Coherent, 1e-3, 4805),
        )])),
        other => Err(CliError::Config(format!(
            "unknown preset `{other}`; available: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}
