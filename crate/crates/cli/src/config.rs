//! Run configuration shared by every subcommand, loadable from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tradenet_core::finvars::ReturnConfig;
use tradenet_core::report::ReportOptions;
use tradenet_core::stats::DEFAULT_LJUNG_BOX_LAGS;
use tradenet_core::synth::{self, ScenarioConfig};
use tradenet_core::WindowSpec;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Transaction files for `analyze`, or the records file for `report`.
    pub inputs: Vec<PathBuf>,
    pub output_dir: PathBuf,
    pub seed: Option<u64>,
    pub window: WindowSpec,
    pub returns: ReturnConfig,
    pub tests: TestConfig,
    pub generator: GeneratorConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            output_dir: PathBuf::from("tradenet-out"),
            seed: None,
            window: WindowSpec::default(),
            returns: ReturnConfig::default(),
            tests: TestConfig::default(),
            generator: GeneratorConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TestConfig {
    pub enabled: bool,
    pub ljung_box_lags: usize,
    /// Lag order of the ADF regression; default rule when absent.
    pub adf_lags: Option<usize>,
    pub level: f64,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig { enabled: false, ljung_box_lags: DEFAULT_LJUNG_BOX_LAGS, adf_lags: None, level: 0.05 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    pub preset: Option<String>,
    pub days: Option<u32>,
    /// Scenario fields laid over the preset, e.g. `base_rate = 20.0` or a
    /// `[generator.overrides.dominance]` table.
    pub overrides: toml::Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Echo the text report on stdout.
    pub print_report: bool,
    /// Run per-window work on the thread pool.
    pub parallel: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { print_report: true, parallel: true }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Usage(format!("config does not serialize: {e}")))
    }

    /// SHA-256 of the config with input and output paths blanked, so moving
    /// files around does not change it.
    pub fn hash(&self) -> Result<String, CliError> {
        let mut bare = self.clone();
        bare.inputs.clear();
        bare.output_dir = PathBuf::new();
        Ok(hex::encode(Sha256::digest(bare.to_toml()?.as_bytes())))
    }

    pub fn provenance(&self) -> Result<Vec<String>, CliError> {
        Ok(vec![
            format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            format!("config-sha256 {}", self.hash()?),
        ])
    }

    pub fn report_options(&self) -> ReportOptions {
        ReportOptions {
            tests: self.tests.enabled,
            ljung_box_lags: self.tests.ljung_box_lags,
            adf_lags: self.tests.adf_lags,
            level: self.tests.level,
        }
    }

    /// Preset, then overrides, then `days` and `seed`; the window spec is
    /// always the run's.
    pub fn scenario(&self) -> Result<ScenarioConfig, CliError> {
        let name = self.generator.preset.as_deref().ok_or_else(|| CliError::Usage("no preset given".into()))?;
        let base = synth::preset(name).map_err(|_| {
            CliError::Usage(format!("unknown preset `{name}`; expected one of {}", synth::PRESET_NAMES.join(", ")))
        })?;
        let mut scenario = if self.generator.overrides.is_empty() {
            base
        } else {
            let mut table = toml::Table::try_from(&base)
                .map_err(|e| CliError::Usage(format!("preset does not serialize: {e}")))?;
            merge(&mut table, &self.generator.overrides);
            table.try_into().map_err(|e| CliError::Usage(format!("invalid generator overrides: {e}")))?
        };
        if let Some(days) = self.generator.days {
            scenario.days = days;
        }
        if let Some(seed) = self.seed {
            scenario.seed = seed;
        }
        scenario.window = self.window.clone();
        scenario.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(scenario)
    }
}

fn merge(base: &mut toml::Table, over: &toml::Table) {
    for (key, value) in over {
        match (base.get_mut(key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            _ => {
                base.insert(key.clone(), value.clone());
            }
        }
    }
}
