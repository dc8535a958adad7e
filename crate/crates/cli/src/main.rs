use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use strata_cli::{regenerate_report, run_scenario, write_eigen_table, CliError, RunOptions, ScenarioConfig};

#[derive(Parser)]
#[command(name = "strata", version, about = "Stratified Boussinesq spectral runs and reports")]
struct Cli {
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the scenario described by a TOML config.
    Run { config: PathBuf },
    /// Write the per-mode eigen table of the configured truncation.
    EigenTable { config: PathBuf },
    /// Regenerate CSV and plot from a saved JSON record.
    Report { record: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("strata: {e}");
            if let CliError::Instability { dump: Some(p), .. } = &e {
                eprintln!("strata: state dumped to {}", p.display());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    match cli.cmd {
        Cmd::Run { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let opts = RunOptions {
                seed: cli.seed,
                out_dir: cli.out_dir,
                dry: false,
            };
            let out = run_scenario(&cfg, &opts)?;
            for s in &out.record.slopes {
                let pred = s.predicted.map_or(String::new(), |p| format!(" (reference {:.3})", p + 0.0));
                println!(
                    "{}: slope {:.4} +- {:.1e}{pred}",
                    s.series, s.fit.slope, s.fit.stderr
                );
            }
            for f in out.files {
                println!("wrote {}", f.display());
            }
        }
        Cmd::EigenTable { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let dir = cli.out_dir.unwrap_or(cfg.output.dir.clone());
            println!("wrote {}", write_eigen_table(&cfg, &dir)?.display());
        }
        Cmd::Report { record } => {
            let dir = cli
                .out_dir
                .or_else(|| record.parent().map(PathBuf::from))
                .unwrap_or_default();
            for f in regenerate_report(&record, &dir, true)? {
                println!("wrote {}", f.display());
            }
        }
    }
    Ok(())
}
