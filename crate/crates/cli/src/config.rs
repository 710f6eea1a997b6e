//! Scenario configuration: flat key=value files, CLI overrides, and
//! validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use triphoton_core::SchemeKind;

use crate::CliError;

/// Which physical model generates the fringe values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Exact single-mode circuit evaluation.
    Ideal,
    /// Multimode rate law from overlap integrals.
    Multimode,
}

impl ModelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::Ideal => "ideal",
            ModelKind::Multimode => "multimode",
        }
    }
}

/// Spectral-model inputs for the multimode rate laws: either source
/// parameters to integrate, or the overlap ratio directly.
#[derive(Debug, Clone, PartialEq)]
pub enum OverlapSource {
    Spectral {
        sigma_p: f64,
        sigma_f: f64,
        delta_t_h: f64,
        delta_t_v: f64,
        symmetrized: bool,
        nodes: usize,
    },
    Direct {
        e_over_a: f64,
    },
}

/// A fully resolved scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scheme: SchemeKind,
    pub model: ModelKind,
    pub phase_start: f64,
    pub phase_stop: f64,
    pub points: usize,
    pub overlaps: Option<OverlapSource>,
    pub v1: f64,
    pub rate_scale: f64,
    pub duration: f64,
    pub bg_rate: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

/// Partially specified settings, merged as CLI > file > defaults.
#[derive(Debug, Clone, Default)]
pub struct PartialConfig {
    pub scheme: Option<String>,
    pub model: Option<String>,
    pub phase_start: Option<f64>,
    pub phase_stop: Option<f64>,
    pub points: Option<usize>,
    pub sigma_p: Option<f64>,
    pub sigma_f: Option<f64>,
    pub delta_t_h: Option<f64>,
    pub delta_t_v: Option<f64>,
    pub symmetrized: Option<bool>,
    pub nodes: Option<usize>,
    pub e_over_a: Option<f64>,
    pub v1: Option<f64>,
    pub rate_scale: Option<f64>,
    pub duration: Option<f64>,
    pub bg_rate: Option<f64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl PartialConfig {
    /// Fields of `overlay` win over `self`.
    pub fn merged_with(mut self, overlay: PartialConfig) -> PartialConfig {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if overlay.$field.is_some() { self.$field = overlay.$field; })*
            };
        }
        take!(
            scheme,
            model,
            phase_start,
            phase_stop,
            points,
            sigma_p,
            sigma_f,
            delta_t_h,
            delta_t_v,
            symmetrized,
            nodes,
            e_over_a,
            v1,
            rate_scale,
            duration,
            bg_rate,
            seed,
            output
        );
        self
    }

    /// Parse a flat `key=value` file; `#` starts a comment. Errors carry
    /// the file name and line number.
    pub fn from_file(path: &Path) -> Result<PartialConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|err| {
            CliError::validation(format!("cannot read config {}: {err}", path.display()))
        })?;
        let mut config = PartialConfig::default();
        for (index, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let context = |message: String| {
                CliError::validation(format!("{}:{}: {message}", path.display(), index + 1))
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| context(format!("expected key=value, found '{line}'")))?;
            config.set(key.trim(), value.trim()).map_err(&context)?;
        }
        Ok(config)
    }

    /// Assign one key. Returns a message (no location) on failure.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("invalid value for {key}: '{value}'"))
        }
        match key {
            "scheme" => self.scheme = Some(value.to_string()),
            "model" => self.model = Some(value.to_string()),
            "phase_start" => self.phase_start = Some(parse(key, value)?),
            "phase_stop" => self.phase_stop = Some(parse(key, value)?),
            "points" => self.points = Some(parse(key, value)?),
            "sigma_p" => self.sigma_p = Some(parse(key, value)?),
            "sigma_f" => self.sigma_f = Some(parse(key, value)?),
            "delta_t_h" => self.delta_t_h = Some(parse(key, value)?),
            "delta_t_v" => self.delta_t_v = Some(parse(key, value)?),
            "symmetrized" => self.symmetrized = Some(parse(key, value)?),
            "nodes" => self.nodes = Some(parse(key, value)?),
            "e_over_a" => self.e_over_a = Some(parse(key, value)?),
            "v1" => self.v1 = Some(parse(key, value)?),
            "rate_scale" => self.rate_scale = Some(parse(key, value)?),
            "duration" => self.duration = Some(parse(key, value)?),
            "bg_rate" => self.bg_rate = Some(parse(key, value)?),
            "seed" => self.seed = Some(parse(key, value)?),
            "output" => self.output = Some(PathBuf::from(value)),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Validate and fill defaults.
    pub fn resolve(self) -> Result<ScenarioConfig, CliError> {
        let scheme = match self.scheme.as_deref().unwrap_or("asym") {
            "asym" => SchemeKind::AsymmetricSplitter,
            "noon" => SchemeKind::NoonProjection,
            other => {
                return Err(CliError::validation(format!(
                    "field scheme: expected 'asym' or 'noon', found '{other}'"
                )))
            }
        };
        let model = match self.model.as_deref().unwrap_or("ideal") {
            "ideal" => ModelKind::Ideal,
            "multimode" => ModelKind::Multimode,
            other => {
                return Err(CliError::validation(format!(
                    "field model: expected 'ideal' or 'multimode', found '{other}'"
                )))
            }
        };
        let points = self.points.unwrap_or(25);
        if points < 2 {
            return Err(CliError::validation(format!(
                "field points: need at least 2 scan points, got {points}"
            )));
        }
        let phase_start = self.phase_start.unwrap_or(0.0);
        let phase_stop = self.phase_stop.unwrap_or(std::f64::consts::TAU);
        if !(phase_stop - phase_start).is_finite() || phase_stop <= phase_start {
            return Err(CliError::validation(format!(
                "fields phase_start/phase_stop: need start < stop, got {phase_start}..{phase_stop}"
            )));
        }
        let spectral_given = self.sigma_p.is_some() || self.sigma_f.is_some();
        let direct_given = self.e_over_a.is_some();
        let overlaps = match model {
            ModelKind::Ideal => {
                if spectral_given || direct_given {
                    return Err(CliError::validation(
                        "fields sigma_p/sigma_f/e_over_a: only valid with model=multimode",
                    ));
                }
                None
            }
            ModelKind::Multimode => match (spectral_given, direct_given) {
                (true, true) | (false, false) => {
                    return Err(CliError::validation(
                        "model=multimode needs exactly one of {sigma_p+sigma_f, e_over_a}",
                    ))
                }
                (true, false) => {
                    let sigma_p = self.sigma_p.ok_or_else(|| {
                        CliError::validation("field sigma_p: required with sigma_f")
                    })?;
                    let sigma_f = self.sigma_f.ok_or_else(|| {
                        CliError::validation("field sigma_f: required with sigma_p")
                    })?;
                    for (name, value) in [("sigma_p", sigma_p), ("sigma_f", sigma_f)] {
                        if !(value > 0.0 && value.is_finite()) {
                            return Err(CliError::validation(format!(
                                "field {name}: bandwidth must be positive, got {value}"
                            )));
                        }
                    }
                    Some(OverlapSource::Spectral {
                        sigma_p,
                        sigma_f,
                        delta_t_h: self.delta_t_h.unwrap_or(0.0),
                        delta_t_v: self.delta_t_v.unwrap_or(0.0),
                        symmetrized: self.symmetrized.unwrap_or(true),
                        nodes: self.nodes.unwrap_or(48),
                    })
                }
                (false, true) => {
                    let e_over_a = self.e_over_a.unwrap();
                    if !(e_over_a.is_finite() && e_over_a.abs() <= 1.0) {
                        return Err(CliError::validation(format!(
                            "field e_over_a: must lie in [-1, 1], got {e_over_a}"
                        )));
                    }
                    Some(OverlapSource::Direct { e_over_a })
                }
            },
        };
        let v1 = self.v1.unwrap_or(1.0);
        if !(0.0..=1.0).contains(&v1) {
            return Err(CliError::validation(format!(
                "field v1: must lie in [0, 1], got {v1}"
            )));
        }
        for (name, value) in [
            ("rate_scale", self.rate_scale.unwrap_or(1.84)),
            ("duration", self.duration.unwrap_or(100.0)),
            ("bg_rate", self.bg_rate.unwrap_or(1.2)),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(CliError::validation(format!(
                    "field {name}: must be ≥ 0, got {value}"
                )));
            }
        }
        Ok(ScenarioConfig {
            scheme,
            model,
            phase_start,
            phase_stop,
            points,
            overlaps,
            v1,
            rate_scale: self.rate_scale.unwrap_or(1.84),
            duration: self.duration.unwrap_or(100.0),
            bg_rate: self.bg_rate.unwrap_or(1.2),
            seed: self.seed.unwrap_or(1),
            output: self.output,
        })
    }
}

impl ScenarioConfig {
    /// The resolved configuration as `key=value` lines, sufficient to
    /// regenerate any output exactly.
    pub fn echo_lines(&self) -> Vec<String> {
        let mut map: BTreeMap<&str, String> = BTreeMap::new();
        map.insert("scheme", self.scheme.label().to_string());
        map.insert("model", self.model.label().to_string());
        map.insert("phase_start", format!("{}", self.phase_start));
        map.insert("phase_stop", format!("{}", self.phase_stop));
        map.insert("points", format!("{}", self.points));
        match &self.overlaps {
            Some(OverlapSource::Spectral {
                sigma_p,
                sigma_f,
                delta_t_h,
                delta_t_v,
                symmetrized,
                nodes,
            }) => {
                map.insert("sigma_p", format!("{sigma_p}"));
                map.insert("sigma_f", format!("{sigma_f}"));
                map.insert("delta_t_h", format!("{delta_t_h}"));
                map.insert("delta_t_v", format!("{delta_t_v}"));
                map.insert("symmetrized", format!("{symmetrized}"));
                map.insert("nodes", format!("{nodes}"));
            }
            Some(OverlapSource::Direct { e_over_a }) => {
                map.insert("e_over_a", format!("{e_over_a}"));
            }
            None => {}
        }
        map.insert("v1", format!("{}", self.v1));
        map.insert("rate_scale", format!("{}", self.rate_scale));
        map.insert("duration", format!("{}", self.duration));
        map.insert("bg_rate", format!("{}", self.bg_rate));
        map.insert("seed", format!("{}", self.seed));
        map.into_iter()
            .map(|(key, value)| format!("{key}={value}"))
            .collect()
    }

    /// Uniform phase grid `[start, stop)` with `points` entries.
    pub fn grid(&self) -> Vec<f64> {
        triphoton_core::schemes::phase_grid(self.phase_start, self.phase_stop, self.points)
    }
}

/// Default output directory: `$TRIPHOTON_OUT_DIR` if set, else the
/// working directory.
pub fn output_dir() -> PathBuf {
    std::env::var_os("TRIPHOTON_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Resolve the output path for a command: explicit config value, else
/// `default_name` inside [`output_dir`].
pub fn output_path(config_output: &Option<PathBuf>, default_name: &str) -> PathBuf {
    match config_output {
        Some(path) => path.clone(),
        None => output_dir().join(default_name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_to_an_ideal_asym_scan() {
        let config = PartialConfig::default().resolve().unwrap();
        assert_eq!(config.scheme, SchemeKind::AsymmetricSplitter);
        assert_eq!(config.model, ModelKind::Ideal);
        assert_eq!(config.points, 25);
        assert!(config.overlaps.is_none());
    }

    #[test]
    fn multimode_requires_exactly_one_source() {
        let both = PartialConfig {
            model: Some("multimode".into()),
            sigma_p: Some(1.0),
            sigma_f: Some(1.0),
            e_over_a: Some(0.9),
            ..Default::default()
        };
        assert!(both.resolve().is_err());

        let neither = PartialConfig {
            model: Some("multimode".into()),
            ..Default::default()
        };
        assert!(neither.resolve().is_err());

        let direct = PartialConfig {
            model: Some("multimode".into()),
            e_over_a: Some(0.86),
            v1: Some(0.96),
            ..Default::default()
        };
        let resolved = direct.resolve().unwrap();
        assert_eq!(
            resolved.overlaps,
            Some(OverlapSource::Direct { e_over_a: 0.86 })
        );
    }

    #[test]
    fn ideal_model_rejects_spectral_fields() {
        let config = PartialConfig {
            sigma_p: Some(1.0),
            sigma_f: Some(1.0),
            ..Default::default()
        };
        assert!(config.resolve().is_err());
    }

    #[test]
    fn too_few_points_is_a_validation_error() {
        let config = PartialConfig {
            points: Some(1),
            ..Default::default()
        };
        let err = config.resolve().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn overlay_wins_over_base() {
        let base = PartialConfig {
            seed: Some(5),
            points: Some(11),
            ..Default::default()
        };
        let overlay = PartialConfig {
            seed: Some(9),
            ..Default::default()
        };
        let merged = base.merged_with(overlay);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.points, Some(11));
    }

    #[test]
    fn unknown_keys_are_reported() {
        let mut config = PartialConfig::default();
        let err = config.set("wavelength", "780").unwrap_err();
        assert!(err.contains("unknown key"));
    }
}
