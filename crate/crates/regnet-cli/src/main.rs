//! `regnet` command line: seeded network-rewiring experiments with CSV/JSON
//! output.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use regnet::graph::Graph;
use regnet::harness::{self, export, ConfigError, ExperimentConfig, HarnessError, Scenario};
use regnet::spectral::{self, EsdMode};

#[derive(Parser, Debug)]
#[command(
    name = "regnet",
    version,
    about = "Self-organizing k-regular network simulator"
)]
struct Cli {
    /// Master seed; every trial derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Series file format; the summary document is always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the configured protocol to (approximate) regularity per seed.
    Regularize {
        #[arg(long)]
        config: PathBuf,
    },
    /// Relative lambda2 distance from the random-regular floor across sizes.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Terminal-graph eigenvalue histograms vs. the reference density.
    Esd {
        #[arg(long)]
        config: PathBuf,
    },
    /// Periodic Fiedler-sign node removal scenario.
    Attack {
        #[arg(long)]
        config: PathBuf,
    },
    /// Laplacian spectrum of a stored edge-list graph.
    Spectrum {
        /// Edge-list file ("n m" header, then "i j" lines).
        #[arg(long)]
        edges: PathBuf,
    },
}

enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(c) => CliError::Config(c.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems exit 1; --help / --version exit 0.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn load_config(path: &Path, expected: &str) -> Result<ExperimentConfig, CliError> {
    let cfg = ExperimentConfig::parse_file(path)?;
    if cfg.scenario.name() != expected {
        return Err(CliError::Config(format!(
            "config {} declares scenario={}, but this subcommand runs {expected}",
            path.display(),
            cfg.scenario.name()
        )));
    }
    if !cfg.params().exact_regularity_supported() {
        eprintln!(
            "warning: k = {} is not an even degree >= 4; exact regularity may be unreachable",
            cfg.k
        );
    }
    Ok(cfg)
}

fn write(out_dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn to_pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = &cli.out_dir;
    match &cli.cmd {
        Cmd::Regularize { config } => {
            let cfg = load_config(config, "regularize")?;
            let (trials, summary) = harness::run_monte_carlo(&cfg, cli.seed)?;
            for t in &trials {
                match cli.format {
                    Format::Csv => {
                        write(out, &format!("trial_{}.csv", t.seed), &export::trial_csv(t))?;
                    }
                    Format::Json => {
                        let doc = serde_json::to_value(&t.series).expect("serializable");
                        write(out, &format!("trial_{}.json", t.seed), &to_pretty(&doc))?;
                    }
                }
            }
            let doc = export::summary_json(&cfg, &summary, None);
            write(out, "summary.json", &to_pretty(&doc))?;
            let a = &summary.aggregate;
            println!(
                "regularize: trials={} regular={} approx_regular={} success_rate={:.3} mean_lambda2={:.4}",
                a.trials, a.regular, a.approx_regular, a.success_rate, a.mean_final_lambda2
            );
        }
        Cmd::Sweep { config } => {
            let cfg = load_config(config, "lambda2_sweep")?;
            let points = harness::run_lambda2_sweep(&cfg, cli.seed)?;
            match cli.format {
                Format::Csv => {
                    let mut csv = String::from(
                        "n,k,mean_rel_distance,std_rel_distance,success_rate,trials\n",
                    );
                    for p in &points {
                        csv.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            p.n,
                            p.k,
                            p.mean_rel_distance.unwrap_or(f64::NAN),
                            p.std_rel_distance.unwrap_or(f64::NAN),
                            p.success_rate,
                            p.trials
                        ));
                    }
                    write(out, "sweep.csv", &csv)?;
                }
                Format::Json => {
                    let doc = serde_json::to_value(&points).expect("serializable");
                    write(out, "sweep.json", &to_pretty(&doc))?;
                }
            }
            let doc = export::scenario_json(&cfg, "sweep", &points);
            write(out, "summary.json", &to_pretty(&doc))?;
            for p in &points {
                println!(
                    "sweep: n={} k={} mean_rel_distance={}",
                    p.n,
                    p.k,
                    p.mean_rel_distance
                        .map_or("n/a".into(), |d| format!("{d:.4}"))
                );
            }
        }
        Cmd::Esd { config } => {
            let cfg = load_config(config, "esd")?;
            let (_, summary) = harness::run_esd(&cfg, cli.seed)?;
            match cli.format {
                Format::Csv => {
                    write(out, "esd_mean.csv", &export::esd_csv(&summary.mean))?;
                }
                Format::Json => {
                    let doc = serde_json::to_value(&summary.mean).expect("serializable");
                    write(out, "esd_mean.json", &to_pretty(&doc))?;
                }
            }
            let Scenario::Esd { mode } = cfg.scenario else {
                unreachable!("checked")
            };
            let curve = match mode {
                EsdMode::FixedK => export::density_curve_csv(|x| {
                    spectral::mckay_density(x, cfg.k).expect("k validated")
                }),
                EsdMode::GrowingK => export::density_curve_csv(spectral::semicircle_density),
            };
            write(out, "density_reference.csv", &curve)?;
            let doc = export::scenario_json(&cfg, "esd", &summary);
            write(out, "summary.json", &to_pretty(&doc))?;
            println!(
                "esd: trials={} max_abs_deviation={:.4}",
                cfg.seeds.len(),
                summary.max_abs_deviation
            );
        }
        Cmd::Attack { config } => {
            let cfg = load_config(config, "attack")?;
            let runs = harness::run_attack(&cfg, cli.seed)?;
            for run in &runs {
                match cli.format {
                    Format::Csv => {
                        write(
                            out,
                            &format!("attack_{}.csv", run.seed),
                            &export::attack_csv(&run.records),
                        )?;
                    }
                    Format::Json => {
                        let doc = serde_json::to_value(&run.records).expect("serializable");
                        write(out, &format!("attack_{}.json", run.seed), &to_pretty(&doc))?;
                    }
                }
            }
            let doc = export::scenario_json(&cfg, "attack", &runs);
            write(out, "summary.json", &to_pretty(&doc))?;
            for run in &runs {
                let last = run.records.last().expect("nonempty series");
                println!(
                    "attack: seed={} final_n={} connected={} lambda2={:.4}",
                    run.seed, last.n, last.connected, last.lambda2
                );
            }
        }
        Cmd::Spectrum { edges } => {
            let text = std::fs::read_to_string(edges)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", edges.display())))?;
            let g = Graph::from_edge_list(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", edges.display())))?;
            let report =
                spectral::laplacian_spectrum(&g).map_err(|e| CliError::Runtime(e.to_string()))?;
            match cli.format {
                Format::Csv => {
                    write(out, "spectrum.csv", &export::spectrum_csv(&report))?;
                }
                Format::Json => {
                    let doc = serde_json::to_value(&report).expect("serializable");
                    write(out, "spectrum.json", &to_pretty(&doc))?;
                }
            }
            println!("lambda2 = {}", report.lambda2);
            println!("connected = {}", report.connected);
        }
    }
    Ok(())
}
