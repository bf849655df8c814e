use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hybrid_doa::crlb::Method;
use hybrid_doa::exec::Execution;
use hybrid_doa::harness::{
    crlb_table, csv, emit_complexity_curves, emit_power_profile, run_experiment_with,
    ExperimentSpec, PowerProfileSpec, RunConfig, Sweep, SEED_DERIVATION,
};
use hybrid_doa::Error;

#[derive(Parser)]
#[command(name = "hybrid-doa", version, about = "Single-time-slot DOA estimation for hybrid arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Plain-text `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Hold {
    /// Keep `n_subarrays` fixed, `subarray_size = N / n_subarrays`.
    Subarrays,
    /// Keep `subarray_size` fixed, `n_subarrays = N / subarray_size`.
    SubarraySize,
}

#[derive(Subcommand)]
enum Command {
    /// RMSE versus SNR and snapshot count for each estimator.
    RmseSweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of max_rp, max_rp_qi, root_music_max_rp_qi.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
    },
    /// Trial-averaged per-sector received power.
    PowerProfile {
        #[command(flatten)]
        common: Common,
    },
    /// FLOP counts of all four methods versus the antenna count.
    Complexity {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 2048, 4096, 8192])]
        antennas: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Hold::Subarrays)]
        hold: Hold,
    },
    /// Root-CRLB of the full-sector receiver and of each hybrid split.
    Crlb {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn load_config(common: &Common) -> Result<RunConfig, Error> {
    match &common.config {
        Some(path) => RunConfig::from_file(path),
        None => Ok(RunConfig::default()),
    }
}

fn metadata(command: &str, common: &Common, cfg: &RunConfig) -> csv::Metadata {
    let mut meta = csv::Metadata::new(command);
    meta.push(format!("seed={}", common.seed));
    meta.push(format!("trials={}", common.trials));
    meta.push(format!("seed_derivation: {SEED_DERIVATION}"));
    for line in cfg.echo() {
        meta.push(line);
    }
    meta
}

fn parse_methods(names: &Option<Vec<String>>) -> Result<Vec<Method>, Error> {
    let Some(names) = names else {
        return Ok(vec![Method::MaxRP, Method::MaxRPQI, Method::RootMusicPlusMaxRPQI]);
    };
    names
        .iter()
        .map(|n| {
            Method::from_name(n.trim())
                .filter(|m| *m != Method::TLHAD)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown method `{n}`")))
        })
        .collect()
}

fn open_out(common: &Common) -> io::Result<Box<dyn Write>> {
    Ok(match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::RmseSweep { common, methods } => {
            let cfg = load_config(&common)?;
            let spec = ExperimentSpec {
                cfg: cfg.array_config()?,
                theta0_deg: cfg.theta0_deg,
                snr_grid_db: cfg.snr_db_list.clone(),
                snapshot_grid: cfg.snapshots_list.clone(),
                left_subarray_grid: cfg.left_subarrays.clone(),
                n_trials: common.trials,
                master_seed: common.seed,
                methods: parse_methods(&methods)?,
            };
            spec.validate()?;
            let rows = run_experiment_with(&spec, Execution::with_threads(common.threads))?;
            let mut meta = metadata("rmse-sweep", &common, &cfg);
            let names: Vec<&str> = spec.methods.iter().map(Method::name).collect();
            meta.push(format!("methods={}", names.join(",")));
            let mut out = open_out(&common)?;
            csv::write_rmse(&mut out, &meta, &rows)?;
            out.flush()?;
        }
        Command::PowerProfile { common } => {
            let cfg = load_config(&common)?;
            let spec = PowerProfileSpec {
                cfg: cfg.array_config()?,
                theta0_deg: vec![cfg.theta0_deg],
                snr_grid_db: cfg.snr_db_list.clone(),
                n_snapshots: cfg.snapshots_list[0],
                n_trials: common.trials,
                master_seed: common.seed,
            };
            let runs = emit_power_profile(&spec, Execution::with_threads(common.threads))?;
            let mut meta = metadata("power-profile", &common, &cfg);
            meta.push(format!("n_snapshots={}", spec.n_snapshots));
            meta.push("profile seeds: derive_seed(master;theta_index,snr_index,trial)");
            let mut out = open_out(&common)?;
            csv::write_profiles(&mut out, &meta, &runs)?;
            out.flush()?;
        }
        Command::Complexity {
            common,
            antennas,
            hold,
        } => {
            let cfg = load_config(&common)?;
            let sweep = match hold {
                Hold::Subarrays => Sweep::FixedSubarrays(cfg.n_subarrays),
                Hold::SubarraySize => Sweep::FixedSubarraySize(cfg.subarray_size),
            };
            let l = cfg.snapshots_list[0];
            let rows = emit_complexity_curves(&antennas, sweep, l)?;
            let mut meta = metadata("complexity", &common, &cfg);
            meta.push(format!("sweep={sweep:?}"));
            let mut out = open_out(&common)?;
            csv::write_complexity(&mut out, &meta, &rows)?;
            out.flush()?;
        }
        Command::Crlb { common } => {
            let cfg = load_config(&common)?;
            let rows = crlb_table(
                &cfg.array_config()?,
                cfg.theta0_deg,
                &cfg.snr_db_list,
                &cfg.snapshots_list,
                &cfg.left_subarrays,
            )?;
            let meta = metadata("crlb", &common, &cfg);
            let mut out = open_out(&common)?;
            csv::write_crlb(&mut out, &meta, &rows)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
