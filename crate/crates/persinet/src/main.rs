use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use persinet::config::RunConfig;
use persinet::error::Result;
use persinet::pipeline;

/// Selects network thresholding parameters by minimizing the sensitivity of
/// persistent-homology summaries across a threshold grid.
#[derive(Parser)]
#[command(name = "persinet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config file and PERSINET_OUT).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for grid population (0 = one per core).
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for synthetic-corpus generation.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest homology dimension to carry through the pipeline.
    #[arg(long = "kmax")]
    k_max: Option<usize>,
    /// Norm order for image distances and the field norm.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and report the optimal threshold cell.
    Select {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write the pre/post normalized-Laplacian spectrum CSV.
        #[arg(long)]
        spectrum: bool,
        /// Also write the selected cell's network as an edge list.
        #[arg(long)]
        emit_network: bool,
        /// Also dump the selected cell's filtration, diagrams, and images.
        #[arg(long)]
        dump_selected: bool,
    },
    /// Run the optimizer over the whole constraint grid and write the path.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Generate a deterministic synthetic corpus.
    Synth {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare normalized-Laplacian spectra before and after thresholding.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Lower frequency bound of the pruned network (records input).
        #[arg(long)]
        lower: Option<f64>,
        /// Upper frequency bound of the pruned network (records input).
        #[arg(long)]
        upper: Option<f64>,
        /// How many leading eigenvalues to report.
        #[arg(long)]
        count: Option<usize>,
    },
}

fn load_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Ok(out) = std::env::var("PERSINET_OUT") {
        config.out_dir = PathBuf::from(out);
    }
    if let Some(out) = &common.out {
        config.out_dir = out.clone();
    }
    if let Some(jobs) = common.jobs {
        config.jobs = jobs;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(k_max) = common.k_max {
        config.k_max = k_max;
    }
    if let Some(p) = common.p {
        config.p = p;
    }
    config.validate()?;
    Ok(config)
}

fn report_written(paths: &[PathBuf]) {
    for path in paths {
        println!("wrote {}", path.display());
    }
}

fn real_main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Select {
            common,
            spectrum,
            emit_network,
            dump_selected,
        } => {
            let mut config = load_config(&common)?;
            config.spectrum |= spectrum;
            config.emit_network |= emit_network;
            config.dump_selected |= dump_selected;
            let output = pipeline::run_select(&config)?;
            report_written(&output.written);
            let report = &output.report.selection;
            println!(
                "selected lower={} upper={} (field {}, {} feasible cells)",
                report.lower, report.upper, report.field_value, output.report.feasible_count
            );
        }
        Command::Sweep { common } => {
            let config = load_config(&common)?;
            let output = pipeline::run_sweep(&config)?;
            report_written(&output.written);
            let feasible = output
                .outcomes
                .iter()
                .filter(|o| o.selection.is_some())
                .count();
            println!(
                "{} combinations, {} feasible",
                output.outcomes.len(),
                feasible
            );
        }
        Command::Synth { common } => {
            let config = load_config(&common)?;
            let path = pipeline::run_synth(&config)?;
            println!("wrote {}", path.display());
        }
        Command::Spectrum {
            common,
            lower,
            upper,
            count,
        } => {
            let mut config = load_config(&common)?;
            if let Some(count) = count {
                config.spectrum_count = count;
            }
            let bounds = match (lower, upper) {
                (Some(lower), Some(upper)) => Some((lower, upper)),
                (None, None) => None,
                _ => {
                    return Err(persinet::error::Error::Config(
                        "--lower and --upper must be given together".into(),
                    ))
                }
            };
            let path = pipeline::run_spectrum(&config, bounds)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() {
    let code = match real_main() {
        Ok(()) => 0,
        Err(err) => {
            let kind = if err.is_infeasible() {
                "infeasible"
            } else {
                "error"
            };
            let payload = serde_json::json!({ "error": kind, "message": err.to_string() });
            eprintln!("{payload}");
            if err.is_infeasible() {
                2
            } else {
                1
            }
        }
    };
    std::process::exit(code);
}
