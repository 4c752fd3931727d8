//! Experiment configuration: a versioned, strictly-validated TOML schema.
//! Configs are the scientific record — unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::QciError;
use crate::geometry::WorkingCone;
use crate::kernels::CutoffSymbol;
use crate::models::{
    builtin_profile, make_surface_of_revolution, make_torus, profile_from_table, ModelSystem,
};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub system: SystemConfig,
    #[serde(default)]
    pub band: Option<BandConfig>,
    #[serde(default)]
    pub cutoff: CutoffConfig,
    pub experiment: ExperimentSection,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// "torus" or "surface".
    pub kind: String,
    #[serde(default)]
    pub dim: Option<usize>,
    /// Built-in profile name ("sphere", "ellipsoid", "bump") or "table".
    #[serde(default)]
    pub profile: Option<String>,
    #[serde(default)]
    pub profile_params: Vec<f64>,
    /// Two-column (σ, a) table for profile = "table".
    #[serde(default)]
    pub profile_path: Option<PathBuf>,
    /// Radial solver grid size.
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    /// Profile sample grid.
    #[serde(default = "default_profile_grid")]
    pub profile_grid: usize,
}

fn default_grid_size() -> usize {
    2048
}
fn default_profile_grid() -> usize {
    1024
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandConfig {
    pub sigma_min: f64,
    pub sigma_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffConfig {
    /// "unity", "sor_ratio", or "torus_cone".
    #[serde(default = "default_cutoff_kind")]
    pub kind: String,
    #[serde(default)]
    pub c_min: f64,
    #[serde(default = "default_c_max")]
    pub c_max: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default)]
    pub axis: Option<Vec<f64>>,
    #[serde(default)]
    pub inner_angle: Option<f64>,
    #[serde(default)]
    pub outer_angle: Option<f64>,
}

fn default_cutoff_kind() -> String {
    "unity".into()
}
fn default_c_max() -> f64 {
    0.5
}
fn default_width() -> f64 {
    0.05
}

impl Default for CutoffConfig {
    fn default() -> Self {
        CutoffConfig {
            kind: default_cutoff_kind(),
            c_min: 0.0,
            c_max: default_c_max(),
            width: default_width(),
            axis: None,
            inner_angle: None,
            outer_angle: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    PointwiseDiag,
    PointwiseOffdiag,
    Integrated,
    Cluster,
    SmoothedMeasure,
    Tauberian,
}

impl Target {
    pub fn as_str(&self) -> &'static str {
        match self {
            Target::PointwiseDiag => "pointwise_diag",
            Target::PointwiseOffdiag => "pointwise_offdiag",
            Target::Integrated => "integrated",
            Target::Cluster => "cluster",
            Target::SmoothedMeasure => "smoothed_measure",
            Target::Tauberian => "tauberian",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub id: String,
    pub target: Target,
    /// Direction c̄ of the spectral box (unit vector, components nonzero).
    pub c: Vec<f64>,
    /// Sweep grid: λ values (or ray radii R), strictly increasing.
    pub lambdas: Vec<f64>,
    #[serde(default = "default_delta0")]
    pub delta0: f64,
    #[serde(default)]
    pub seed: u64,
    /// Theoretical remainder exponent; pass threshold is this + slack.
    pub target_exponent: f64,
    #[serde(default = "default_slack")]
    pub slack: f64,
    /// Evaluation points in the chart.
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    /// Off-diagonal pair scale: |x−y| ≤ pair_separation/λ.
    #[serde(default = "default_pair_separation")]
    pub pair_separation: f64,
    /// Number of random off-diagonal pairs per λ.
    #[serde(default = "default_pairs")]
    pub n_pairs: usize,
    /// Ray direction for cluster/smoothed sweeps (defaults to c).
    #[serde(default)]
    pub ray: Option<Vec<f64>>,
    /// Integrated target: cone half-angle around `ray`.
    #[serde(default)]
    pub cone_half_angle: Option<f64>,
    #[serde(default = "default_true")]
    pub richardson: bool,
    /// Cap on stored radial samples per eigenfunction.
    #[serde(default = "default_sample_cap")]
    pub sample_cap: usize,
}

fn default_delta0() -> f64 {
    0.75
}
fn default_slack() -> f64 {
    0.2
}
fn default_pair_separation() -> f64 {
    0.4
}
fn default_pairs() -> usize {
    10
}
fn default_true() -> bool {
    true
}
fn default_sample_cap() -> usize {
    1024
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
}

impl ExperimentConfig {
    /// Parse and validate a TOML config.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)
            .map_err(|e| QciError::Parse(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(QciError::config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match self.system.kind.as_str() {
            "torus" | "surface" => {}
            other => {
                return Err(QciError::config(format!(
                    "system.kind must be 'torus' or 'surface', got '{other}'"
                )))
            }
        }
        if self.experiment.c.iter().any(|v| *v == 0.0) {
            return Err(QciError::config("c̄ components must be nonzero"));
        }
        let norm: f64 = self.experiment.c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(QciError::config(format!(
                "c̄ must be a unit vector (‖c̄‖ = {norm:.15})"
            )));
        }
        if self.experiment.lambdas.is_empty() {
            return Err(QciError::config("λ grid must be nonempty"));
        }
        for w in self.experiment.lambdas.windows(2) {
            if w[1] <= w[0] {
                return Err(QciError::config("λ grid must be strictly increasing"));
            }
        }
        if !(self.experiment.delta0 > 0.0) {
            return Err(QciError::config("delta0 must be positive"));
        }
        if let Some(b) = &self.band {
            if !(b.sigma_min < b.sigma_max) {
                return Err(QciError::config("band needs sigma_min < sigma_max"));
            }
        }
        match self.cutoff.kind.as_str() {
            "unity" | "sor_ratio" | "torus_cone" => {}
            other => {
                return Err(QciError::config(format!(
                    "cutoff.kind must be unity|sor_ratio|torus_cone, got '{other}'"
                )))
            }
        }
        Ok(())
    }

    /// Instantiate the model system.
    pub fn build_system(&self) -> Result<ModelSystem> {
        match self.system.kind.as_str() {
            "torus" => make_torus(self.system.dim.unwrap_or(2)),
            "surface" => {
                let name = self
                    .system
                    .profile
                    .as_deref()
                    .ok_or_else(|| QciError::config("surface system needs system.profile"))?;
                let profile = if name == "table" {
                    let path = self.system.profile_path.as_ref().ok_or_else(|| {
                        QciError::config("profile 'table' needs system.profile_path")
                    })?;
                    let text = std::fs::read_to_string(path)?;
                    profile_from_table(&text, self.system.profile_grid)?
                } else {
                    builtin_profile(name, &self.system.profile_params, self.system.profile_grid)?
                };
                make_surface_of_revolution(profile)
            }
            _ => unreachable!("validated"),
        }
    }

    /// Instantiate the cutoff Ψ.
    pub fn build_cutoff(&self) -> Result<CutoffSymbol> {
        match self.cutoff.kind.as_str() {
            "unity" => Ok(CutoffSymbol::unity()),
            "sor_ratio" => {
                CutoffSymbol::sor_ratio(self.cutoff.c_min, self.cutoff.c_max, self.cutoff.width)
            }
            "torus_cone" => {
                let axis = self
                    .cutoff
                    .axis
                    .as_ref()
                    .ok_or_else(|| QciError::config("torus_cone cutoff needs cutoff.axis"))?;
                let inner = self
                    .cutoff
                    .inner_angle
                    .ok_or_else(|| QciError::config("torus_cone cutoff needs inner_angle"))?;
                let outer = self
                    .cutoff
                    .outer_angle
                    .ok_or_else(|| QciError::config("torus_cone cutoff needs outer_angle"))?;
                CutoffSymbol::torus_cone(axis, inner, outer)
            }
            _ => unreachable!("validated"),
        }
    }

    /// Working cone Ω (band + cone) consistent with system and cutoff.
    pub fn build_working_cone(&self, system: &ModelSystem) -> Result<Option<WorkingCone>> {
        match (&system.kind, self.cutoff.kind.as_str()) {
            (crate::models::ModelKind::SurfaceOfRevolution { profile }, "sor_ratio") => {
                let band = self.band.as_ref().ok_or_else(|| {
                    QciError::config("surface experiments with a cutoff need a [band]")
                })?;
                Ok(Some(WorkingCone::sor(
                    profile,
                    band.sigma_min,
                    band.sigma_max,
                    self.cutoff.c_max,
                )?))
            }
            (crate::models::ModelKind::FlatTorus { .. }, "torus_cone") => {
                let axis = self.cutoff.axis.as_ref().unwrap();
                Ok(Some(WorkingCone::torus(
                    axis,
                    self.cutoff.outer_angle.unwrap(),
                )?))
            }
            _ => Ok(None),
        }
    }
}
