//! Flat `key = value` run-configuration files.
//!
//! Physical parameters have no defaults and must be present; numerical
//! parameters fall back to the library defaults and can be overridden from
//! the command line. `#` starts a comment; keys are case-sensitive.

use std::collections::HashMap;
use std::path::Path;

use triwell::beamsplitter::{BsConfig, BsInput};
use triwell::model::{InitialState, SystemConfig};

use crate::CliError;

pub struct KeyValues {
    values: HashMap<String, String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "config line {}: expected `key = value`, got `{raw}`",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::Config(format!("duplicate config key `{key}`")));
            }
        }
        Ok(KeyValues { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        self.take(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::Config(format!("`{key}` is not a number: `{v}`")))
            })
            .transpose()
    }

    fn take_u64(&mut self, key: &str) -> Result<Option<u64>, CliError> {
        self.take(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| CliError::Config(format!("`{key}` is not an integer: `{v}`")))
            })
            .transpose()
    }

    fn require_f64(&mut self, key: &str) -> Result<f64, CliError> {
        self.take_f64(key)?
            .ok_or_else(|| CliError::Config(format!("missing required physical parameter `{key}`")))
    }

    fn finish(self) -> Result<(), CliError> {
        if let Some(key) = self.values.keys().next() {
            return Err(CliError::Config(format!("unknown config key `{key}`")));
        }
        Ok(())
    }

    /// Three-well system configuration. Physical keys `j`, `chi`, `n_atoms`,
    /// `initial_state` are required; `t_max`, `dt`, `grid_dt`, `n_traj`,
    /// `seed` default to the library values.
    pub fn into_system_config(mut self) -> Result<SystemConfig, CliError> {
        let j = self.require_f64("j")?;
        let chi = self.require_f64("chi")?;
        let n_atoms = self.require_f64("n_atoms")?;
        let state = match self
            .take("initial_state")
            .ok_or_else(|| CliError::Config("missing required `initial_state`".into()))?
            .as_str()
        {
            "fock" => InitialState::Fock,
            "coherent" => InitialState::Coherent,
            other => {
                return Err(CliError::Config(format!(
                    "initial_state must be `fock` or `coherent`, got `{other}`"
                )))
            }
        };
        let mut cfg = SystemConfig::new(j, chi, n_atoms, state);
        if let Some(v) = self.take_f64("t_max")? {
            cfg.t_max = v;
        }
        if let Some(v) = self.take_f64("dt")? {
            cfg.dt = v;
        }
        if let Some(v) = self.take_f64("grid_dt")? {
            cfg.grid_dt = v;
        }
        if let Some(v) = self.take_u64("n_traj")? {
            cfg.n_traj = v;
        }
        if let Some(v) = self.take_u64("seed")? {
            cfg.seed = v;
        }
        self.finish()?;
        Ok(cfg)
    }

    /// Beamsplitter configuration: `input` plus `n` (fock/coherent) or `r`
    /// (squeezed); `eta` defaults to the balanced 0.5.
    pub fn into_bs_config(mut self) -> Result<BsConfig, CliError> {
        let input = match self
            .take("input")
            .ok_or_else(|| CliError::Config("missing required `input`".into()))?
            .as_str()
        {
            "fock" => {
                let n = self.require_f64("n")?;
                if n < 0.0 || n.fract() != 0.0 {
                    return Err(CliError::Config(format!(
                        "fock input needs a non-negative integer `n`, got {n}"
                    )));
                }
                BsInput::Fock(n as u32)
            }
            "coherent" => BsInput::Coherent(self.require_f64("n")?),
            "squeezed" => BsInput::Squeezed(self.require_f64("r")?),
            other => {
                return Err(CliError::Config(format!(
                    "input must be `fock`, `coherent` or `squeezed`, got `{other}`"
                )))
            }
        };
        let eta = self.take_f64("eta")?.unwrap_or(0.5);
        self.finish()?;
        let cfg = BsConfig { eta, input };
        cfg.validate().map_err(CliError::from_core)?;
        Ok(cfg)
    }
}
