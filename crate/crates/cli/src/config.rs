//! Experiment configuration: a single TOML file with nested sections.
//!
//! The exact schema is documented in the repository README; every run embeds
//! the resolved configuration and master seed in its output headers, and a
//! parsed config serializes back to an equivalent document (round-trip
//! tested).

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use rmt_core::analytics::BandProfile;
use rmt_core::ensemble::{EnsembleKind, EnsembleSpec};
use rmt_core::states::{ObservableKind, PiKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleSection,
    pub initial_state: StateSection,
    pub observable: ObservableSection,
    #[serde(default)]
    pub time_grid: TimeGridSection,
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub comparisons: ComparisonsSection,
    #[serde(default)]
    pub band_profile: Option<BandProfileSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    /// `goe` or `gue`.
    pub kind: String,
    pub dimension: usize,
    pub spectral_scale: f64,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    /// `equilibrium`, `half_filled`, `pure_state`, `power_law` or `custom`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSection {
    /// `diagonal`, `projector` or `near_diagonal`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridSection {
    /// Units of tau_lambda.
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    /// Time shift t0, units of tau_lambda.
    #[serde(default)]
    pub shift: f64,
}

impl Default for TimeGridSection {
    fn default() -> Self {
        // thermalization happens on the tau_lambda scale; the default window
        // exposes the time symmetry
        Self {
            start: -20.0,
            stop: 20.0,
            points: 400,
            shift: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub realizations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: String,
    /// `csv` or `json` (reports; data files are always CSV).
    pub format: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: ".".into(),
            format: "csv".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComparisonsSection {
    /// Gate the Monte Carlo mean curve against the analytic prediction.
    pub mean_vs_prediction: bool,
    /// Variance-vs-dimension scaling sweep (log-log slope -1 +- 0.3).
    pub variance_scaling: bool,
    /// Appendix moment suite gates.
    pub moments: bool,
    /// Compare GOE and GUE large-time offsets (transpose term).
    pub gue_vs_goe: bool,
    /// Emit the ETH comparison curves.
    pub eth_curves: bool,
}

impl Default for ComparisonsSection {
    fn default() -> Self {
        Self {
            mean_vs_prediction: true,
            variance_scaling: false,
            moments: false,
            gue_vs_goe: false,
            eth_curves: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandProfileSection {
    /// `gaussian` or `rectangular`.
    pub shape: String,
    pub width: f64,
}

impl ExperimentConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: ExperimentConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    /// Field-path diagnostics for semantic errors the parser cannot catch.
    pub fn validate(&self) -> Result<()> {
        match self.ensemble.kind.as_str() {
            "goe" | "gue" => {}
            other => bail!("ensemble.kind: expected \"goe\" or \"gue\", got \"{other}\""),
        }
        if self.ensemble.dimension < 2 {
            bail!(
                "ensemble.dimension: must be >= 2, got {}",
                self.ensemble.dimension
            );
        }
        if !(self.ensemble.spectral_scale > 0.0) {
            bail!(
                "ensemble.spectral_scale: must be positive, got {}",
                self.ensemble.spectral_scale
            );
        }
        match self.initial_state.kind.as_str() {
            "equilibrium" | "half_filled" | "pure_state" => {}
            "power_law" => {
                let alpha = self
                    .initial_state
                    .alpha
                    .ok_or_else(|| anyhow::anyhow!("initial_state.alpha: required for power_law"))?;
                if !(alpha > 0.0 && alpha < 1.0) {
                    bail!("initial_state.alpha: must be in (0, 1), got {alpha}");
                }
            }
            "custom" => {
                if self.initial_state.eigenvalues.is_none() {
                    bail!("initial_state.eigenvalues: required for custom");
                }
            }
            other => bail!(
                "initial_state.kind: expected equilibrium|half_filled|pure_state|power_law|custom, got \"{other}\""
            ),
        }
        match self.observable.kind.as_str() {
            "projector" => {
                let m = self.observable.subspace_dim.ok_or_else(|| {
                    anyhow::anyhow!("observable.subspace_dim: required for projector")
                })?;
                if m > self.ensemble.dimension {
                    bail!(
                        "observable.subspace_dim: {m} exceeds ensemble.dimension {}",
                        self.ensemble.dimension
                    );
                }
            }
            "diagonal" => {
                let values =
                    self.observable.values.as_ref().ok_or_else(|| {
                        anyhow::anyhow!("observable.values: required for diagonal")
                    })?;
                if values.len() != self.ensemble.dimension {
                    bail!(
                        "observable.values: length {} does not match ensemble.dimension {}",
                        values.len(),
                        self.ensemble.dimension
                    );
                }
            }
            "near_diagonal" => {
                if self.observable.spread.map_or(true, |s| s < 0.0) {
                    bail!("observable.spread: required and nonnegative for near_diagonal");
                }
            }
            other => {
                bail!("observable.kind: expected diagonal|projector|near_diagonal, got \"{other}\"")
            }
        }
        if self.time_grid.points == 0 {
            bail!("time_grid.points: must be >= 1");
        }
        if !(self.time_grid.stop >= self.time_grid.start) {
            bail!("time_grid.stop: must be >= time_grid.start");
        }
        if self.run.realizations == 0 {
            bail!("run.realizations: must be >= 1");
        }
        match self.output.format.as_str() {
            "csv" | "json" => {}
            other => bail!("output.format: expected \"csv\" or \"json\", got \"{other}\""),
        }
        if let Some(profile) = &self.band_profile {
            match profile.shape.as_str() {
                "gaussian" | "rectangular" => {}
                other => {
                    bail!("band_profile.shape: expected \"gaussian\" or \"rectangular\", got \"{other}\"")
                }
            }
            if !(profile.width > 0.0) {
                bail!(
                    "band_profile.width: must be positive, got {}",
                    profile.width
                );
            }
        }
        Ok(())
    }

    pub fn ensemble_spec(&self) -> Result<EnsembleSpec> {
        let kind = match self.ensemble.kind.as_str() {
            "goe" => EnsembleKind::Goe,
            _ => EnsembleKind::Gue,
        };
        EnsembleSpec::new(
            kind,
            self.ensemble.dimension,
            self.ensemble.spectral_scale,
            self.ensemble.master_seed,
        )
        .map_err(Into::into)
    }

    pub fn pi_kind(&self) -> PiKind {
        match self.initial_state.kind.as_str() {
            "equilibrium" => PiKind::Equilibrium,
            "half_filled" => PiKind::HalfFilled,
            "pure_state" => PiKind::PureState,
            "power_law" => PiKind::PowerLaw {
                alpha: self.initial_state.alpha.unwrap(),
            },
            _ => PiKind::Custom {
                eigenvalues: self.initial_state.eigenvalues.clone().unwrap(),
                basis: None,
            },
        }
    }

    pub fn observable_kind(&self) -> ObservableKind {
        match self.observable.kind.as_str() {
            "projector" => ObservableKind::Projector {
                subspace_dim: self.observable.subspace_dim.unwrap(),
            },
            "diagonal" => ObservableKind::Diagonal {
                values: self.observable.values.clone().unwrap(),
            },
            _ => ObservableKind::NearDiagonal {
                a0: self.observable.a0.unwrap_or(1.0),
                spread: self.observable.spread.unwrap(),
            },
        }
    }

    pub fn band_profile(&self) -> BandProfile {
        match &self.band_profile {
            None => BandProfile::default_for(self.ensemble.spectral_scale),
            Some(section) => match section.shape.as_str() {
                "rectangular" => BandProfile::Rectangular {
                    width: section.width,
                },
                _ => BandProfile::Gaussian {
                    width: section.width,
                },
            },
        }
    }

    /// Times in tau_lambda units.
    pub fn times(&self) -> Vec<f64> {
        let g = &self.time_grid;
        if g.points == 1 {
            return vec![g.start];
        }
        let h = (g.stop - g.start) / (g.points - 1) as f64;
        (0..g.points).map(|k| g.start + k as f64 * h).collect()
    }
}
