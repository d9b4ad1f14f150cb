//! Experiment configuration files.
//!
//! The native format is a flat-section INI-style text file; a full JSON
//! configuration is accepted as an alternative. Unknown sections or keys
//! are rejected with the offending name and line. Every field is optional
//! and defaults to the fitted experiment model.
//!
//! ```text
//! [source]
//! mode = dephased            # ideal | dephased | werner
//! visibility = 0.8832
//! chi_signal_rad = 0.5
//! chi_idler_rad = 0.0
//! pdl_fraction = 0.01
//! pdl_arm = signal           # signal | idler
//! leak_probability = 0.01
//!
//! [switch]
//! isolation_db = 20.0
//! insertion_loss_db = 1.3
//! response_time_ns = 60.0
//! max_duty_cycle_hz = 1e6
//!
//! [timing]
//! detector_to_ttm_ns = 160
//! ttm_processing_ns = 300
//! signal_propagation_ns = 100
//! delay_fiber_m = 162
//! fiber_index = 1.468
//! gate_duration_ns = 700
//! detector_deadtime_ns = 50
//!
//! [sweep]
//! plane = meridian           # meridian | equatorial
//! n_points = 19
//! feedforward = on           # on | off
//! counts_per_setting = 35000
//! angle_jitter_sigma_deg = 0.5
//! n_trials = 1
//!
//! [losses]
//! switch_1 = 1.3
//! switch_2 = 1.3
//! u_bench = 0.7
//!
//! [output]
//! dir = out
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::feedforward::{LossComponent, Plane, SwitchModel, TimingBudget};
use crate::polar::Arm;
use crate::source::{SourceMode, SourceModel};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {message}")]
    Syntax {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: unknown key {key:?} in section [{section}]")]
    UnknownKey {
        path: String,
        line: usize,
        key: String,
        section: String,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Sweep parameters as they appear in a config file. The seed is
/// deliberately absent: all randomness flows from the `--seed` flag.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub plane: Plane,
    pub n_points: usize,
    pub feedforward: bool,
    pub counts_per_setting: u64,
    pub angle_jitter_sigma_deg: f64,
    pub n_trials: u32,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            plane: Plane::Meridian,
            n_points: 19,
            feedforward: true,
            counts_per_setting: 35_000,
            angle_jitter_sigma_deg: 0.5,
            n_trials: 1,
        }
    }
}

/// Full experiment description.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub source: SourceModel,
    pub switch: SwitchModel,
    pub timing: TimingBudget,
    pub sweep: SweepSettings,
    pub losses: Vec<LossComponent>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            source: SourceModel::default(),
            switch: SwitchModel::default(),
            timing: TimingBudget::default(),
            sweep: SweepSettings::default(),
            losses: default_losses(),
            output_dir: PathBuf::from("out"),
        }
    }
}

/// The experiment's loss list: two switches plus one u-bench.
pub fn default_losses() -> Vec<LossComponent> {
    vec![
        LossComponent::new("switch_1", 1.3),
        LossComponent::new("switch_2", 1.3),
        LossComponent::new("u_bench", 0.7),
    ]
}

impl ExperimentConfig {
    /// Loads a config file, dispatching on the extension (`.json` selects
    /// JSON) unless `force_json` is set.
    pub fn load(path: &Path, force_json: bool) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let is_json = force_json || path.extension().is_some_and(|e| e == "json");
        if is_json {
            Self::from_json(&text, path)
        } else {
            Self::from_ini(&text, path)
        }
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|source| ConfigError::Json {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn from_ini(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let mut config = ExperimentConfig::default();
        let mut losses: Option<Vec<LossComponent>> = None;
        let mut section = String::new();
        let path_str = path.display().to_string();

        let syntax = |line: usize, message: String| ConfigError::Syntax {
            path: path_str.clone(),
            line,
            message,
        };

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| syntax(lineno, format!("unterminated section header {line:?}")))?
                    .trim()
                    .to_ascii_lowercase();
                match name.as_str() {
                    "source" | "switch" | "timing" | "sweep" | "losses" | "output" => {
                        section = name;
                    }
                    other => {
                        return Err(syntax(lineno, format!("unknown section [{other}]")));
                    }
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax(lineno, format!("expected key = value, got {line:?}")))?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            if section.is_empty() {
                return Err(syntax(lineno, format!("key {key:?} before any [section]")));
            }
            apply_key(
                &mut config,
                &mut losses,
                &section,
                &key,
                value,
                lineno,
                &path_str,
            )?;
        }
        if let Some(l) = losses {
            config.losses = l;
        }
        Ok(config)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find(['#', ';']) {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn apply_key(
    config: &mut ExperimentConfig,
    losses: &mut Option<Vec<LossComponent>>,
    section: &str,
    key: &str,
    value: &str,
    lineno: usize,
    path: &str,
) -> Result<(), ConfigError> {
    let syntax = |message: String| ConfigError::Syntax {
        path: path.to_string(),
        line: lineno,
        message,
    };
    let unknown = || ConfigError::UnknownKey {
        path: path.to_string(),
        line: lineno,
        key: key.to_string(),
        section: section.to_string(),
    };
    let f64_of = |v: &str| -> Result<f64, ConfigError> {
        v.parse()
            .map_err(|_| syntax(format!("expected a number for {key:?}, got {v:?}")))
    };

    match section {
        "source" => match key {
            "mode" => {
                config.source.mode = match value.to_ascii_lowercase().as_str() {
                    "ideal" => SourceMode::Ideal,
                    "dephased" => SourceMode::Dephased,
                    "werner" => SourceMode::Werner,
                    other => return Err(syntax(format!("unknown source mode {other:?}"))),
                }
            }
            "visibility" => config.source.visibility = f64_of(value)?,
            "chi_signal_rad" => config.source.chi_signal_rad = f64_of(value)?,
            "chi_idler_rad" => config.source.chi_idler_rad = f64_of(value)?,
            "pdl_fraction" => config.source.pdl_fraction = f64_of(value)?,
            "pdl_arm" => {
                config.source.pdl_arm = match value.to_ascii_lowercase().as_str() {
                    "signal" => Arm::Signal,
                    "idler" => Arm::Idler,
                    other => return Err(syntax(format!("unknown arm {other:?}"))),
                }
            }
            "leak_probability" => config.source.leak_probability = f64_of(value)?,
            _ => return Err(unknown()),
        },
        "switch" => match key {
            "isolation_db" => config.switch.isolation_db = f64_of(value)?,
            "insertion_loss_db" => config.switch.insertion_loss_db = f64_of(value)?,
            "response_time_ns" => config.switch.response_time_ns = f64_of(value)?,
            "max_duty_cycle_hz" => config.switch.max_duty_cycle_hz = f64_of(value)?,
            _ => return Err(unknown()),
        },
        "timing" => match key {
            "detector_to_ttm_ns" => config.timing.detector_to_ttm_ns = f64_of(value)?,
            "ttm_processing_ns" => config.timing.ttm_processing_ns = f64_of(value)?,
            "signal_propagation_ns" => config.timing.signal_propagation_ns = f64_of(value)?,
            "delay_fiber_m" => config.timing.delay_fiber_m = f64_of(value)?,
            "fiber_index" => config.timing.fiber_index = f64_of(value)?,
            "gate_duration_ns" => config.timing.gate_duration_ns = f64_of(value)?,
            "detector_deadtime_ns" => config.timing.detector_deadtime_ns = f64_of(value)?,
            _ => return Err(unknown()),
        },
        "sweep" => match key {
            "plane" => {
                config.sweep.plane = match value.to_ascii_lowercase().as_str() {
                    "meridian" => Plane::Meridian,
                    "equatorial" => Plane::Equatorial,
                    other => return Err(syntax(format!("unknown plane {other:?}"))),
                }
            }
            "n_points" => {
                config.sweep.n_points = value
                    .parse()
                    .map_err(|_| syntax(format!("expected an integer for {key:?}, got {value:?}")))?
            }
            "feedforward" => {
                config.sweep.feedforward = parse_on_off(value)
                    .ok_or_else(|| syntax(format!("expected on/off for {key:?}, got {value:?}")))?
            }
            "counts_per_setting" => {
                config.sweep.counts_per_setting = value
                    .parse()
                    .map_err(|_| syntax(format!("expected an integer for {key:?}, got {value:?}")))?
            }
            "angle_jitter_sigma_deg" => config.sweep.angle_jitter_sigma_deg = f64_of(value)?,
            "n_trials" => {
                config.sweep.n_trials = value
                    .parse()
                    .map_err(|_| syntax(format!("expected an integer for {key:?}, got {value:?}")))?
            }
            _ => return Err(unknown()),
        },
        // Any key is a component name here.
        "losses" => losses
            .get_or_insert_with(Vec::new)
            .push(LossComponent::new(key, f64_of(value)?)),
        "output" => match key {
            "dir" => config.output_dir = PathBuf::from(value),
            _ => return Err(unknown()),
        },
        _ => unreachable!("section names validated at the header"),
    }
    Ok(())
}

fn parse_on_off(value: &str) -> Option<bool> {
    match value.to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Some(true),
        "off" | "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::from_ini(text, Path::new("test.ini"))
    }

    #[test]
    fn empty_config_is_the_default_model() {
        let config = parse("").unwrap();
        assert_eq!(config, ExperimentConfig::default());
        assert_eq!(config.sweep.n_points, 19);
        assert!((config.source.visibility - 0.8831760866327845).abs() < 1e-15);
    }

    #[test]
    fn sections_and_comments_parse() {
        let config = parse(
            "# experiment\n\
             [source]\n\
             mode = ideal\n\
             [sweep]\n\
             plane = equatorial   ; DRAL circle\n\
             feedforward = off\n\
             n_trials = 3\n\
             [output]\n\
             dir = results\n",
        )
        .unwrap();
        assert_eq!(config.source.mode, SourceMode::Ideal);
        assert_eq!(config.sweep.plane, Plane::Equatorial);
        assert!(!config.sweep.feedforward);
        assert_eq!(config.sweep.n_trials, 3);
        assert_eq!(config.output_dir, PathBuf::from("results"));
    }

    #[test]
    fn unknown_key_is_named_with_its_line() {
        let err = parse("[source]\npurityy = 0.89\n").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("purityy"), "{text}");
        assert!(text.contains(":2"), "{text}");
    }

    #[test]
    fn unknown_section_and_bad_values_are_rejected() {
        assert!(parse("[sourcery]\n").is_err());
        assert!(parse("[source]\nvisibility = high\n").is_err());
        assert!(parse("[sweep]\nplane = diagonal\n").is_err());
        assert!(parse("orphan = 1\n").is_err());
    }

    #[test]
    fn losses_section_replaces_the_default_list() {
        let config = parse("[losses]\nlong_fiber = 2.0\n").unwrap();
        assert_eq!(config.losses.len(), 1);
        assert_eq!(config.losses[0].name, "long_fiber");
    }

    #[test]
    fn json_route_accepts_and_rejects() {
        let ok = ExperimentConfig::from_json(
            r#"{"sweep": {"plane": "equatorial"}, "source": {"mode": "ideal"}}"#,
            Path::new("c.json"),
        )
        .unwrap();
        assert_eq!(ok.sweep.plane, Plane::Equatorial);

        let err = ExperimentConfig::from_json(
            r#"{"source": {"purityy": 0.89}}"#,
            Path::new("c.json"),
        )
        .unwrap_err();
        assert!(err.to_string().contains("purityy"), "{err}");
    }
}
