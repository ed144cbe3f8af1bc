//! `triwell` — command-line front end for the three-well Bose-Hubbard mode
//! splitter toolkit.
//!
//! Subcommands dispatch to the analytic, stochastic, exact-oracle and
//! beamsplitter routes and write machine-readable tables (CSV or JSON).
//! Exit codes: 0 success, 2 configuration error, 3 divergence failure,
//! 4 I/O error.

mod config_file;
mod presets;
mod run;
mod table;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use config_file::KeyValues;
use presets::PresetRuns;
use table::Table;
use triwell::model::SystemConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Divergence(String),
    Io(String),
}

impl CliError {
    fn from_core(err: triwell::Error) -> Self {
        match err {
            triwell::Error::DivergenceLimit { .. } => CliError::Divergence(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Divergence(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Divergence(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "triwell",
    version,
    about = "Three-well Bose-Hubbard mode splitter: analytic, stochastic and exact routes \
             to the continuous-variable entanglement witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form non-interacting (chi = 0) witness series
    Analytic(RunArgs),
    /// Positive-P stochastic ensemble with standard errors
    Stochastic(RunArgs),
    /// Exact fixed-N Fock-space evolution (Fock input)
    Oracle(RunArgs),
    /// Balanced-beamsplitter witness closed forms (single-row table)
    Beamsplitter(BsArgs),
    /// Stochastic run with exact reference and z-score columns
    Compare(RunArgs),
    /// Named experiment presets (fig1..fig5)
    Preset {
        name: String,
        #[command(flatten)]
        args: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Flat `key = value` file with the physical parameters
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Ensemble size override (stochastic modes)
    #[arg(long)]
    trajectories: Option<u64>,
    /// Integrator step override
    #[arg(long)]
    dt: Option<f64>,
    /// Final time override
    #[arg(long)]
    tmax: Option<f64>,
    /// Output grid spacing override
    #[arg(long)]
    grid: Option<f64>,
    /// Worker threads for the trajectory ensemble (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct BsArgs {
    /// Flat `key = value` file with `input` and its parameter
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl RunArgs {
    fn load_system_config(&self) -> Result<SystemConfig, CliError> {
        let path = self.config.as_ref().ok_or_else(|| {
            CliError::Config("this mode needs --config with the physical parameters".into())
        })?;
        let cfg = KeyValues::load(path)?.into_system_config()?;
        Ok(self.apply(cfg))
    }

    /// Command-line overrides win over file values and preset defaults.
    fn apply(&self, mut cfg: SystemConfig) -> SystemConfig {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.trajectories {
            cfg.n_traj = n;
        }
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        if let Some(tmax) = self.tmax {
            cfg.t_max = tmax;
        }
        if let Some(grid) = self.grid {
            cfg.grid_dt = grid;
        }
        cfg
    }
}

fn write_table(table: &Table, out: Option<&Path>, format: Format) -> Result<(), CliError> {
    let io_err = |e: std::io::Error, what: &str| CliError::Io(format!("{what}: {e}"));
    match out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| io_err(e, &format!("cannot create {}", path.display())))?;
            let mut w = std::io::BufWriter::new(file);
            match format {
                Format::Csv => table.write_csv(&mut w),
                Format::Json => table.write_json(&mut w),
            }
            .map_err(|e| io_err(e, &format!("cannot write {}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            match format {
                Format::Csv => table.write_csv(&mut w),
                Format::Json => table.write_json(&mut w),
            }
            .map_err(|e| io_err(e, "cannot write to stdout"))
        }
    }
}

/// Appends a suffix to the file stem: `out.csv` + `_fock` -> `out_fock.csv`.
fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    if suffix.is_empty() {
        return path.to_path_buf();
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}{suffix}.{ext}"))
}

/// Runs the closure inside a dedicated rayon pool when a thread count is
/// requested; ensemble results are identical either way.
fn with_threads<T>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError>
where
    T: Send,
{
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?
            .install(f),
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analytic(args) => {
            let cfg = args.load_system_config()?;
            write_table(
                &run::analytic_table(&cfg)?,
                args.out.as_deref(),
                args.format,
            )
        }
        Command::Stochastic(args) => {
            let cfg = args.load_system_config()?;
            let table = with_threads(args.threads, || run::stochastic_table(&cfg))?;
            write_table(&table, args.out.as_deref(), args.format)
        }
        Command::Oracle(args) => {
            let cfg = args.load_system_config()?;
            write_table(&run::oracle_table(&cfg)?, args.out.as_deref(), args.format)
        }
        Command::Compare(args) => {
            let cfg = args.load_system_config()?;
            let table = with_threads(args.threads, || run::compare_table(&cfg))?;
            write_table(&table, args.out.as_deref(), args.format)
        }
        Command::Beamsplitter(args) => {
            let path = args.config.as_ref().ok_or_else(|| {
                CliError::Config("beamsplitter mode needs --config with the input state".into())
            })?;
            let cfg = KeyValues::load(path)?.into_bs_config()?;
            write_table(
                &run::beamsplitter_table(&cfg)?,
                args.out.as_deref(),
                args.format,
            )
        }
        Command::Preset { name, args } => match presets::preset(&name)? {
            PresetRuns::Analytic(cfg) => {
                let cfg = args.apply(cfg);
                write_table(
                    &run::analytic_table(&cfg)?,
                    args.out.as_deref(),
                    args.format,
                )
            }
            PresetRuns::Stochastic(runs) => {
                let multi = runs.len() > 1;
                for (suffix, cfg) in runs {
                    let cfg = args.apply(cfg);
                    let table = with_threads(args.threads, || run::stochastic_table(&cfg))?;
                    let out = match (&args.out, multi) {
                        (Some(path), _) => Some(with_suffix(path, suffix)),
                        (None, true) => {
                            return Err(CliError::Config(format!(
                                "preset {name} produces several tables; give --out"
                            )))
                        }
                        (None, false) => None,
                    };
                    write_table(&table, out.as_deref(), args.format)?;
                }
                Ok(())
            }
        },
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = execute(cli.command) {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
