//! Run configuration: a single TOML file plus command-line overrides.

use std::path::{Path, PathBuf};

use persinet_core::{DeltaSpec, ImageConfig, PipelineConfig, SingleYearPolicy, Weighting};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synth::SynthProfile;

/// How the input file is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    /// `article_id,year,concept[,frequency]` rows; the full pipeline.
    Records,
    /// `source,target,weight` rows; a pre-built network (spectrum only).
    EdgeList,
}

/// One constraint entry in the config file: either a feature count or a
/// fraction of the grid-wide maximum.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum DeltaSpecConfig {
    Fraction { fraction: f64 },
    Absolute { absolute: f64 },
}

impl From<DeltaSpecConfig> for DeltaSpec {
    fn from(spec: DeltaSpecConfig) -> Self {
        match spec {
            DeltaSpecConfig::Fraction { fraction } => DeltaSpec::FractionOfMax(fraction),
            DeltaSpecConfig::Absolute { absolute } => DeltaSpec::Absolute(absolute),
        }
    }
}

/// Threshold axes: explicit values, or fractions of the corpus article count
/// (the fraction times the article count becomes the bound; ceiling/floor is
/// applied at filter time).
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct AxesConfig {
    pub lower: Option<Vec<f64>>,
    pub upper: Option<Vec<f64>>,
    pub lower_fractions: Option<Vec<f64>>,
    pub upper_fractions: Option<Vec<f64>>,
}

/// The default lower-bound fractions of the article count.
pub fn default_lower_fractions() -> Vec<f64> {
    vec![0.002, 0.003, 0.004, 0.005, 0.006, 0.007, 0.008, 0.009]
}

/// The default upper-bound fractions of the article count (the last entry
/// admits everything).
pub fn default_upper_fractions() -> Vec<f64> {
    vec![
        0.01, 0.02, 0.03, 0.04, 0.05, 0.075, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 100.0,
    ]
}

impl AxesConfig {
    /// Produces the `(lower, upper)` axis value lists.
    pub fn resolve(&self, article_count: usize) -> Result<Vec<Vec<f64>>> {
        let resolve_axis = |name: &str,
                            values: &Option<Vec<f64>>,
                            fractions: &Option<Vec<f64>>,
                            fallback: Vec<f64>|
         -> Result<Vec<f64>> {
            let axis = match (values, fractions) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config(format!(
                        "axes.{name} and axes.{name}_fractions are mutually exclusive"
                    )))
                }
                (Some(values), None) => values.clone(),
                (None, Some(fractions)) => fractions
                    .iter()
                    .map(|fraction| fraction * article_count as f64)
                    .collect(),
                (None, None) => fallback
                    .iter()
                    .map(|fraction| fraction * article_count as f64)
                    .collect(),
            };
            if axis.is_empty() {
                return Err(Error::Config(format!("axes.{name} is empty")));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config(format!(
                    "axes.{name} values must be strictly increasing"
                )));
            }
            Ok(axis)
        };
        let lower = resolve_axis(
            "lower",
            &self.lower,
            &self.lower_fractions,
            default_lower_fractions(),
        )?;
        let upper = resolve_axis(
            "upper",
            &self.upper,
            &self.upper_fractions,
            default_upper_fractions(),
        )?;
        Ok(vec![lower, upper])
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImageSection {
    pub rows: usize,
    pub cols: usize,
    pub sigma: f64,
    pub birth_range: (f64, f64),
    pub persistence_range: (f64, f64),
}

impl Default for ImageSection {
    fn default() -> Self {
        Self {
            rows: 20,
            cols: 20,
            sigma: 0.1,
            birth_range: (0.0, 1.0),
            persistence_range: (0.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstraintsSection {
    /// One entry per homology dimension `k = 1 ..= k_max`.
    pub delta: Vec<DeltaSpecConfig>,
}

impl Default for ConstraintsSection {
    fn default() -> Self {
        Self {
            delta: vec![
                DeltaSpecConfig::Fraction { fraction: 0.25 },
                DeltaSpecConfig::Fraction { fraction: 0.25 },
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// Per-dimension fraction lists; when absent, ten increasingly strict
    /// fractions per dimension.
    pub fractions: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceKindConfig {
    CrossTerm,
    PNorm,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct VarianceSection {
    pub kind: VarianceKindConfig,
    pub alpha: Option<f64>,
}

impl Default for VarianceSection {
    fn default() -> Self {
        Self {
            kind: VarianceKindConfig::CrossTerm,
            alpha: None,
        }
    }
}

/// The whole run configuration. Every field has a default, so an empty file
/// (or no file at all, for `synth`) is a valid starting point.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Input corpus (records CSV) or network (edge-list CSV).
    pub input: Option<PathBuf>,
    pub format: InputFormat,
    /// Declared corpus year range; inferred as (min, max) of the data when
    /// absent.
    pub year_range: Option<(i32, i32)>,
    pub k_max: usize,
    /// Norm order for image distances and the field's outer norm.
    pub p: f64,
    /// Death value for essential classes.
    pub cap: f64,
    /// Map every edge weight to 0 instead of failing on a single-year corpus.
    pub allow_single_year: bool,
    pub out_dir: PathBuf,
    /// Worker threads for grid population; 0 means one per core.
    pub jobs: usize,
    /// Seed for synthetic-corpus generation (the analysis itself never draws
    /// random numbers).
    pub seed: u64,
    /// Also write the pre/post normalized-Laplacian spectrum CSV.
    pub spectrum: bool,
    /// How many leading eigenvalues the spectrum CSV reports.
    pub spectrum_count: usize,
    /// Also write the selected cell's pruned network as an edge list.
    pub emit_network: bool,
    /// Also dump the selected cell's diagrams, images, and filtration.
    pub dump_selected: bool,
    pub axes: AxesConfig,
    pub image: ImageSection,
    pub constraints: ConstraintsSection,
    pub sweep: SweepSection,
    pub variance: VarianceSection,
    pub synth: SynthProfile,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            format: InputFormat::Records,
            year_range: None,
            k_max: 2,
            p: 2.0,
            cap: 1.0,
            allow_single_year: false,
            out_dir: PathBuf::from("out"),
            jobs: 0,
            seed: 42,
            spectrum: false,
            spectrum_count: 100,
            emit_network: false,
            dump_selected: false,
            axes: AxesConfig::default(),
            image: ImageSection::default(),
            constraints: ConstraintsSection::default(),
            sweep: SweepSection::default(),
            variance: VarianceSection::default(),
            synth: SynthProfile::default(),
        }
    }
}

impl RunConfig {
    /// Loads a TOML config. Relative `input` paths are resolved against the
    /// config file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        let mut config: RunConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let (Some(input), Some(base)) = (&config.input, path.parent()) {
            if input.is_relative() {
                config.input = Some(base.join(input));
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(Error::Config("k_max must be at least 1".into()));
        }
        if self.p < 1.0 || !self.p.is_finite() {
            return Err(Error::Config(format!(
                "p must be finite and >= 1, got {}",
                self.p
            )));
        }
        if let Some((lo, hi)) = self.year_range {
            if lo > hi {
                return Err(Error::Config(format!(
                    "year_range [{lo}, {hi}] is reversed"
                )));
            }
        }
        for spec in &self.constraints.delta {
            match spec {
                DeltaSpecConfig::Fraction { fraction } => {
                    if !(0.0..=1.0).contains(fraction) {
                        return Err(Error::Config(format!(
                            "constraint fraction {fraction} outside [0, 1]"
                        )));
                    }
                }
                DeltaSpecConfig::Absolute { absolute } => {
                    if *absolute < 0.0 || !absolute.is_finite() {
                        return Err(Error::Config(format!(
                            "constraint value {absolute} must be >= 0"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The per-cell pipeline settings implied by this config.
    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            k_max: self.k_max,
            cap: self.cap,
            image: ImageConfig {
                rows: self.image.rows,
                cols: self.image.cols,
                sigma: self.image.sigma,
                weighting: Weighting::LinearPersistence,
                birth_range: self.image.birth_range,
                persistence_range: self.image.persistence_range,
                p_norm: self.p,
            },
            p: self.p,
            single_year: if self.allow_single_year {
                SingleYearPolicy::ZeroWeights
            } else {
                SingleYearPolicy::Error
            },
        }
    }

    /// Constraint specs in core terms, padded check against `k_max` happens
    /// at resolve time.
    pub fn delta_specs(&self) -> Vec<DeltaSpec> {
        self.constraints
            .delta
            .iter()
            .copied()
            .map(DeltaSpec::from)
            .collect()
    }

    /// Sweep fraction lists, one per dimension.
    pub fn sweep_fractions(&self) -> Vec<Vec<f64>> {
        match &self.sweep.fractions {
            Some(lists) => lists.clone(),
            None => vec![persinet_core::default_sweep_fractions(); self.k_max],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_valid_defaults() {
        let config: RunConfig = toml::from_str("").unwrap();
        assert_eq!(config, RunConfig::default());
        config.validate().unwrap();
        assert_eq!(config.pipeline(), PipelineConfig::default());
    }

    #[test]
    fn axes_default_to_fraction_lists() {
        let config = RunConfig::default();
        let axes = config.axes.resolve(976).unwrap();
        assert_eq!(axes[0].len(), 8);
        assert_eq!(axes[1].len(), 16);
        // 0.2 * 976 = 195.2 and friends.
        assert!((axes[0][0] - 1.952).abs() < 1e-12);
        assert!((axes[1][7] - 195.2).abs() < 1e-12);
        assert_eq!(axes[1][15], 97_600.0);
    }

    #[test]
    fn explicit_axes_win_and_conflicts_are_rejected() {
        let config: RunConfig =
            toml::from_str("[axes]\nlower = [1.0, 2.0]\nupper = [3.0, 4.0]\n").unwrap();
        let axes = config.axes.resolve(100).unwrap();
        assert_eq!(axes, vec![vec![1.0, 2.0], vec![3.0, 4.0]]);

        let bad: RunConfig =
            toml::from_str("[axes]\nlower = [1.0]\nlower_fractions = [0.1]\n").unwrap();
        assert!(bad.axes.resolve(100).is_err());
    }

    #[test]
    fn constraint_specs_parse_both_forms() {
        let config: RunConfig =
            toml::from_str("[constraints]\ndelta = [{ fraction = 0.5 }, { absolute = 3.0 }]\n")
                .unwrap();
        assert_eq!(
            config.delta_specs(),
            vec![DeltaSpec::FractionOfMax(0.5), DeltaSpec::Absolute(3.0)]
        );
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("typo_key = 1\n").is_err());
    }
}
