//! `rismimo`: run experiment files, print SEP tables and list presets.

mod experiment;
mod output;
mod presets;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use log::info;
use rismimo::alamouti::sep_theory;
use rismimo::channel::{path_loss_ris, Geometry};
use rismimo::harness::{noise_density, run_sweep_on};

use crate::experiment::ConfigError;
use crate::output::{EntryRecord, Manifest};

#[derive(Parser)]
#[command(name = "rismimo", version, about = "Link-level Monte Carlo for RIS-assisted Alamouti and IM-VBLAST")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every entry of an experiment file and write CSVs plus a manifest.
    Run(RunArgs),
    /// Print the closed-form RIS-Alamouti SEP over an SNR range.
    Theory(TheoryArgs),
    /// Inspect the bundled experiment files.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// List preset names.
    List,
    /// Print a preset's TOML.
    Show { name: String },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment file (TOML).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Bundled experiment instead of a file.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory; defaults to `experiment.output_dir`, then `results`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every entry that does not set its own.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, env = "RISMIMO_WORKERS")]
    workers: Option<usize>,
    /// `key=value`, `section.key=value` or `entry.<name>.key=value`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct TheoryArgs {
    /// PSK order M.
    #[arg(long, short = 'm', default_value_t = 2)]
    order: usize,
    /// RIS elements N.
    #[arg(long, short = 'n')]
    elements: usize,
    /// S-RIS-D path loss in dB (negative); defaults to the indoor Alamouti layout.
    #[arg(long, allow_hyphen_values = true)]
    pl_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 60.0)]
    snr_start: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 100.0)]
    snr_stop: f64,
    #[arg(long, default_value_t = 2.0)]
    snr_step: f64,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Output(#[from] output::OutputError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(e) => e.exit_code() as u8,
            CliError::Usage(_) => 2,
            CliError::Output(_) | CliError::Runtime(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_target(false)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Theory(args) => theory(args),
        Command::Presets { action } => {
            match action {
                PresetAction::List => {
                    for p in presets::PRESETS {
                        println!("{:<8} {}", p.name, p.summary);
                    }
                    Ok(())
                }
                PresetAction::Show { name } => match presets::find(&name) {
                    Some(p) => {
                        print!("{}", p.text);
                        Ok(())
                    }
                    None => Err(CliError::Usage(format!("no preset named `{name}`"))),
                },
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let (origin, text) = match (&args.config, &args.preset) {
        (Some(path), _) => (
            path.display().to_string(),
            fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        ),
        (None, Some(name)) => {
            let p = presets::find(name).ok_or_else(|| CliError::Usage(format!("no preset named `{name}`")))?;
            (format!("preset:{name}"), p.text.to_string())
        }
        (None, None) => unreachable!("clap requires --config or --preset"),
    };
    let mut overrides = args.overrides.clone();
    if let Some(seed) = args.seed {
        overrides.push(format!("experiment.seed={seed}"));
    }
    let exp = experiment::load(&origin, &text, &overrides)?;
    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let out = args
        .out
        .clone()
        .or_else(|| exp.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"));
    output::ensure_dir(&out)?;

    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let mut records = Vec::new();
    for entry in &exp.entries {
        let t = Instant::now();
        info!("{}: {} over {} SNR points", entry.name, entry.config.scheme, entry.config.snr_grid_db.len());
        let curve = run_sweep_on(&entry.config, workers).map_err(|e| CliError::Runtime(format!("{}: {e}", entry.name)))?;
        let csv_name = format!("{}.csv", entry.name);
        output::write_curve_csv(&out.join(&csv_name), &curve)?;
        let fallbacks = curve.total_fallbacks();
        if fallbacks > 0 {
            info!("{}: {fallbacks} pseudo-inverse fallbacks", entry.name);
        }
        records.push(EntryRecord {
            name: entry.name.clone(),
            csv: csv_name,
            config: entry.config.clone(),
            wall_time_s: t.elapsed().as_secs_f64(),
            fallbacks,
            digest: format!("{:016x}", curve.digest()),
        });
    }
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: exp.seed,
        workers,
        overrides,
        source: origin,
        description: exp.description.clone(),
        started_unix_s: started,
        wall_time_s: clock.elapsed().as_secs_f64(),
        total_fallbacks: records.iter().map(|r| r.fallbacks).sum(),
        entries: records,
    };
    output::write_manifest(&out.join("manifest.json"), &manifest)?;
    info!(
        "wrote {} curves to {} in {:.1} s ({} fallbacks)",
        manifest.entries.len(),
        out.display(),
        manifest.wall_time_s,
        manifest.total_fallbacks
    );
    Ok(())
}

fn theory(a: TheoryArgs) -> Result<(), CliError> {
    let usage = |m: String| CliError::Usage(m);
    if !(a.snr_step > 0.0) || !(a.snr_stop >= a.snr_start) {
        return Err(usage(format!(
            "need snr-start <= snr-stop and snr-step > 0, got {}, {}, {}",
            a.snr_start, a.snr_stop, a.snr_step
        )));
    }
    let pl = match a.pl_db {
        Some(db) if db.is_finite() => 10f64.powf(db / 10.0),
        Some(db) => return Err(usage(format!("invalid --pl-db {db}"))),
        None => path_loss_ris(&Geometry::alamouti_indoor()).map_err(|e| usage(e.to_string()))?,
    };
    let n = ((a.snr_stop - a.snr_start) / a.snr_step + 1e-9).floor() as usize;
    println!("snr_db,sep");
    for i in 0..=n {
        let snr = a.snr_start + a.snr_step * i as f64;
        let sep = sep_theory(a.order, a.elements, pl, 1.0 / noise_density(snr)).map_err(|e| usage(e.to_string()))?;
        println!("{snr},{sep:.6e}");
    }
    Ok(())
}
