use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use strata_core::diagnostics::{energy_e, RunRecord};
use strata_core::dynamics::{stepper_by_name, Stepper, STEPPER_NAMES};
use strata_core::fields::validate_state;
use strata_core::linear::{eigen_table, write_eigen_csv};

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::generators::generators;
use crate::registry::Registry;
use crate::report::emit_report;
use crate::scenarios::{scenarios, RunContext};

pub fn steppers() -> Registry<dyn Stepper> {
    let mut r: Registry<dyn Stepper> = Registry::new("stepper");
    for name in STEPPER_NAMES {
        r.register(*name, stepper_by_name(name).expect("built-in stepper"));
    }
    r
}

/// Overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    /// Skip writing any files.
    pub dry: bool,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub files: Vec<PathBuf>,
}

/// Builds the initial state, runs the named scenario and writes the report.
pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<RunOutcome> {
    let mut cfg = cfg.clone();
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &opts.out_dir {
        cfg.output.dir = dir.clone();
    }
    cfg.validate()?;
    let scenario = scenarios().get(&cfg.scenario)?;
    let gen_name = cfg
        .initial
        .generator
        .clone()
        .unwrap_or_else(|| scenario.default_generator().to_string());
    cfg.initial.generator = Some(gen_name.clone());
    let generator = generators().get(&gen_name)?;
    let stepper: Arc<dyn Stepper> = steppers().get(&cfg.time.stepper)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let initial = generator.generate(&cfg, &mut rng)?;
    let report = validate_state(&initial);
    if !report.passed() {
        return Err(CliError::Config(format!(
            "initial data fails validation: {:?}",
            report.failures()
        )));
    }
    let delta = energy_e(&initial, cfg.m)?;
    let ctx = RunContext {
        out_dir: cfg.output.dir.clone(),
        cfg,
        initial,
        stepper,
    };
    let mut record = scenario.run(&ctx)?;
    let cfg = ctx.cfg;
    let config_echo = serde_json::to_value(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
    record.meta.insert("config".into(), config_echo);
    record.meta.insert("initial_norm_Hm".into(), json!(delta));
    let files = if opts.dry {
        Vec::new()
    } else {
        emit_report(&record, &cfg.output.dir, cfg.output.plots)?
    };
    Ok(RunOutcome { record, files })
}

/// Writes the eigen table of the configured truncation to `eigen.csv`.
pub fn write_eigen_table(cfg: &ScenarioConfig, dir: &Path) -> Result<PathBuf> {
    let table = eigen_table(&cfg.trunc()?, cfg.alpha)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join("eigen.csv");
    let file = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
    write_eigen_csv(std::io::BufWriter::new(file), &table)?;
    Ok(path)
}

/// Re-emits CSV and plot from a saved JSON record.
pub fn regenerate_report(record_json: &Path, dir: &Path, plots: bool) -> Result<Vec<PathBuf>> {
    let record = RunRecord::load_json(record_json).map_err(|e| match e {
        strata_core::Error::Io(io) => CliError::io(record_json, io),
        other => other.into(),
    })?;
    emit_report(&record, dir, plots)
}
