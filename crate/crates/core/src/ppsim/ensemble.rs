//! Parallel ensemble driver with deterministic reduction.
//!
//! Trajectory `k` draws from stream `k` of a ChaCha8 generator seeded with
//! the configured master seed, so every trajectory is a pure function of
//! `(seed, k)`. Trajectories are processed in fixed blocks; blocks run in
//! parallel, accumulate with Welford updates in trajectory order, and merge
//! in block order, so the result is bit-identical for any thread count.
//! Block means are kept: witness standard errors come from their spread.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::SystemConfig;
use crate::moments::{CMeas, MomentSet, MomentVector, N_FLAT, N_MOMENTS};
use crate::ppsim::{sample_initial, step, NoiseVector, TrajectoryState};
use crate::stats::Accumulator;
use crate::{Error, Result};

/// Hard failure threshold on the diverged-trajectory fraction.
pub const DIVERGENCE_LIMIT: f64 = 0.01;

/// Target number of trajectory blocks; also the sample count behind the
/// batch-means standard errors.
const TARGET_BLOCKS: u64 = 64;

/// Output time grid and its relation to the integrator step.
#[derive(Clone, Debug)]
pub struct OutputGrid {
    pub times: Vec<f64>,
    pub steps_per_output: usize,
}

/// Builds the output grid `t_k = k·grid_dt` covering `[0, t_max]`. The grid
/// spacing must be an integer multiple of `dt`.
pub fn output_grid(config: &SystemConfig) -> Result<OutputGrid> {
    let ratio = config.grid_dt / config.dt;
    let steps = ratio.round();
    if steps < 1.0 || (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::InvalidConfig(format!(
            "grid_dt ({}) must be a positive integer multiple of dt ({})",
            config.grid_dt, config.dt
        )));
    }
    let n_out = (config.t_max / config.grid_dt + 1e-9).floor() as usize + 1;
    Ok(OutputGrid {
        times: (0..n_out).map(|k| k as f64 * config.grid_dt).collect(),
        steps_per_output: steps as usize,
    })
}

/// Per-block ensemble means retained for batch-means error estimation.
#[derive(Clone, Debug)]
pub struct BlockMeans {
    pub n_used: u64,
    /// One mean vector per output grid point.
    pub means: Vec<MomentVector>,
}

/// Moment time series of one ensemble run.
#[derive(Clone, Debug)]
pub struct EnsembleSeries {
    pub times: Vec<f64>,
    pub moments: Vec<MomentSet>,
    pub blocks: Vec<BlockMeans>,
    pub n_traj: u64,
    pub n_used: u64,
    pub n_diverged: u64,
}

struct BlockAccum {
    acc: Accumulator,
    n_diverged: u64,
}

/// Integrates one trajectory, filling `flat` with the interleaved moment
/// products at every grid point. Returns `false` (leaving `flat` arbitrary)
/// if the trajectory hit the divergence bound.
fn integrate_one(
    config: &SystemConfig,
    grid: &OutputGrid,
    traj_index: u64,
    flat: &mut [f64],
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(traj_index);
    let mut state = sample_initial(config, &mut rng);
    let with_noise = config.chi != 0.0;

    let record = |state: &TrajectoryState, out_k: usize, flat: &mut [f64]| {
        let m = MomentVector::from_state(&state.alpha, &state.alpha_plus);
        m.write_flat(&mut flat[out_k * N_FLAT..(out_k + 1) * N_FLAT]);
    };

    record(&state, 0, flat);
    for out_k in 1..grid.times.len() {
        for _ in 0..grid.steps_per_output {
            let noise = if with_noise {
                NoiseVector::draw(&mut rng)
            } else {
                NoiseVector::ZERO
            };
            let (next, diverged) = step(&state, config.dt, &noise, config);
            if diverged {
                return false;
            }
            state = next;
        }
        record(&state, out_k, flat);
    }
    true
}

fn run_block(config: &SystemConfig, grid: &OutputGrid, range: std::ops::Range<u64>) -> BlockAccum {
    let flat_len = grid.times.len() * N_FLAT;
    let mut acc = Accumulator::new(flat_len);
    let mut n_diverged = 0;
    let mut flat = vec![0.0; flat_len];
    for k in range {
        if integrate_one(config, grid, k, &mut flat) {
            acc.push(&flat);
        } else {
            n_diverged += 1;
        }
    }
    BlockAccum { acc, n_diverged }
}

/// Integrates the configured ensemble and accumulates all moments.
///
/// Fails with [`Error::DivergenceLimit`] if more than 1% of trajectories hit
/// the divergence bound; diverged trajectories are excluded from every
/// average and counted in the result.
pub fn run_ensemble(config: &SystemConfig) -> Result<EnsembleSeries> {
    config.validate()?;
    let grid = output_grid(config)?;
    let n = config.n_traj;
    let block_size = n.div_ceil(TARGET_BLOCKS).max(1);
    let ranges: Vec<std::ops::Range<u64>> = (0..n)
        .step_by(block_size as usize)
        .map(|start| start..(start + block_size).min(n))
        .collect();

    let block_accums: Vec<BlockAccum> = ranges
        .into_par_iter()
        .map(|range| run_block(config, &grid, range))
        .collect();

    let flat_len = grid.times.len() * N_FLAT;
    let mut total = Accumulator::new(flat_len);
    let mut n_diverged = 0;
    let mut blocks = Vec::with_capacity(block_accums.len());
    for block in &block_accums {
        total.merge(&block.acc);
        n_diverged += block.n_diverged;
        if block.acc.count() > 0 {
            let means = (0..grid.times.len())
                .map(|g| {
                    let mut v = [Complex64::ZERO; N_MOMENTS];
                    for (m, z) in v.iter_mut().enumerate() {
                        *z = Complex64::new(
                            block.acc.mean(g * N_FLAT + 2 * m),
                            block.acc.mean(g * N_FLAT + 2 * m + 1),
                        );
                    }
                    MomentVector(v)
                })
                .collect();
            blocks.push(BlockMeans {
                n_used: block.acc.count(),
                means,
            });
        }
    }

    if n_diverged as f64 > DIVERGENCE_LIMIT * n as f64 {
        return Err(Error::DivergenceLimit {
            n_diverged,
            n_traj: n,
            limit_percent: DIVERGENCE_LIMIT * 100.0,
        });
    }
    let n_used = total.count();

    let moments = grid
        .times
        .iter()
        .enumerate()
        .map(|(g, &t)| {
            let mut cm = [CMeas::default(); N_MOMENTS];
            for (m, c) in cm.iter_mut().enumerate() {
                c.re = total.meas(g * N_FLAT + 2 * m);
                c.im = total.meas(g * N_FLAT + 2 * m + 1);
            }
            MomentSet {
                t,
                moments: cm,
                n_used,
                n_diverged,
            }
        })
        .collect();

    Ok(EnsembleSeries {
        times: grid.times,
        moments,
        blocks,
        n_traj: n,
        n_used,
        n_diverged,
    })
}
