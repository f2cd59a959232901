//! JSON experiment configuration: one document drives every subcommand.
//! Unknown keys are rejected; optional fields get documented defaults and
//! the fully resolved config (defaults included) is embedded in every JSON
//! summary for provenance.

use crate::error::CliError;
use fluxtube::engine::{EvolveMethod, EvolveParams};
use fluxtube::group::GaugeGroup;
use fluxtube::hamiltonian::Couplings;
use fluxtube::lattice::{Boundary, LatticeSpec};
use fluxtube::protocol::{PrepMode, PrepareOpts};
use fluxtube::rng::DEFAULT_SEED;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lattice: Option<LatticeCfg>,
    pub group: Option<GroupCfg>,
    pub couplings: Option<CouplingsCfg>,
    #[serde(default)]
    pub protocol: ProtocolCfg,
    #[serde(default)]
    pub engine: EngineCfg,
    #[serde(default)]
    pub analysis: AnalysisCfg,
    /// Solvable V(α) = γ·α^β stand-in; `probe` uses it instead of the
    /// lattice when present.
    pub toy: Option<ToyCfg>,
    #[serde(default)]
    pub output: OutputCfg,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeCfg {
    pub dims: Vec<usize>,
    /// Per-axis boundary; a single entry is broadcast to all axes.
    #[serde(default = "default_boundary")]
    pub boundary: Vec<Boundary>,
    /// Enumeration guard: abort if a sector basis would exceed this.
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
}

fn default_boundary() -> Vec<Boundary> {
    vec![Boundary::Open]
}

fn default_max_dim() -> usize {
    200_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
#[serde(tag = "kind")]
pub enum GroupCfg {
    Z2,
    Zn { n: u32 },
    U1 { lambda: u32 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingsCfg {
    pub g2: f64,
    /// Magnetic plaquette term on/off (no effect on 1D lattices).
    #[serde(default = "default_true")]
    pub magnetic: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolCfg {
    /// Short-branch separations R (basis/potential/interfere/probe sweeps).
    #[serde(default)]
    pub r: Vec<usize>,
    /// Branch splittings L.
    #[serde(default)]
    pub l: Vec<usize>,
    #[serde(default = "default_mode")]
    pub mode: PrepMode,
    /// Explicit evolution-time grid; autoscaled from the strong-coupling
    /// frequency estimate when omitted.
    pub t_grid: Option<TGridCfg>,
}

fn default_mode() -> PrepMode {
    PrepMode::SectorGround
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TGridCfg {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl TGridCfg {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if self.count == 0 {
            return Err(CliError::config("t_grid.count must be positive"));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        if self.stop <= self.start {
            return Err(CliError::config("t_grid.stop must exceed t_grid.start"));
        }
        let n = self.count;
        Ok((0..n)
            .map(|k| self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineCfg {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_dense_threshold")]
    pub dense_threshold: usize,
    #[serde(default = "default_krylov_dim")]
    pub krylov_dim: usize,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default)]
    pub method: EvolveMethod,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_tol() -> f64 {
    1e-10
}
fn default_dense_threshold() -> usize {
    4096
}
fn default_krylov_dim() -> usize {
    30
}
fn default_dt_max() -> f64 {
    1.0
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for EngineCfg {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            dense_threshold: default_dense_threshold(),
            krylov_dim: default_krylov_dim(),
            dt_max: default_dt_max(),
            method: EvolveMethod::Auto,
            seed: default_seed(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisCfg {
    /// Relative γ-constancy threshold for the area-law verdict.
    #[serde(default = "default_threshold")]
    pub area_law_threshold: f64,
    /// Fringe periods covered by autoscaled T grids.
    #[serde(default = "default_periods")]
    pub periods: f64,
    #[serde(default = "default_spp")]
    pub samples_per_period: usize,
}

fn default_threshold() -> f64 {
    0.02
}
fn default_periods() -> f64 {
    3.0
}
fn default_spp() -> usize {
    16
}

impl Default for AnalysisCfg {
    fn default() -> Self {
        Self {
            area_law_threshold: default_threshold(),
            periods: default_periods(),
            samples_per_period: default_spp(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToyCfg {
    pub gamma: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputCfg {
    #[serde(default = "default_dir")]
    pub dir: String,
    #[serde(default)]
    pub svg: bool,
}

fn default_dir() -> String {
    "out".into()
}

impl Default for OutputCfg {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            svg: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))
    }

    pub fn lattice(&self) -> Result<&LatticeCfg, CliError> {
        self.lattice
            .as_ref()
            .ok_or_else(|| CliError::config("missing section `lattice`"))
    }

    pub fn group_cfg(&self) -> Result<&GroupCfg, CliError> {
        self.group
            .as_ref()
            .ok_or_else(|| CliError::config("missing section `group`"))
    }

    pub fn couplings_cfg(&self) -> Result<&CouplingsCfg, CliError> {
        self.couplings
            .as_ref()
            .ok_or_else(|| CliError::config("missing section `couplings`"))
    }

    pub fn build_lattice(&self) -> Result<Arc<LatticeSpec>, CliError> {
        let cfg = self.lattice()?;
        let boundary: Vec<Boundary> = if cfg.boundary.len() == 1 && cfg.dims.len() > 1 {
            vec![cfg.boundary[0]; cfg.dims.len()]
        } else {
            cfg.boundary.clone()
        };
        Ok(Arc::new(LatticeSpec::new(&cfg.dims, &boundary)?))
    }

    pub fn build_group(&self) -> Result<GaugeGroup, CliError> {
        Ok(match *self.group_cfg()? {
            GroupCfg::Z2 => GaugeGroup::Z2,
            GroupCfg::Zn { n } => GaugeGroup::zn(n)?,
            GroupCfg::U1 { lambda } => GaugeGroup::u1_truncated(lambda)?,
        })
    }

    pub fn build_couplings(&self) -> Result<Couplings, CliError> {
        let cfg = self.couplings_cfg()?;
        Ok(Couplings::new(cfg.g2)?.with_magnetic(cfg.magnetic))
    }

    pub fn evolve_params(&self) -> EvolveParams {
        EvolveParams {
            method: self.engine.method,
            dt_max: self.engine.dt_max,
            krylov_dim: self.engine.krylov_dim,
            tol: self.engine.tol,
            dense_threshold: self.engine.dense_threshold,
        }
    }

    pub fn prepare_opts(&self) -> PrepareOpts {
        PrepareOpts {
            max_dim: self
                .lattice
                .as_ref()
                .map(|l| l.max_dim)
                .unwrap_or_else(default_max_dim),
            engine: self.evolve_params(),
            seed: self.engine.seed,
        }
    }

    pub fn r_list(&self) -> Result<&[usize], CliError> {
        if self.protocol.r.is_empty() {
            return Err(CliError::config("protocol.r must list at least one separation"));
        }
        Ok(&self.protocol.r)
    }

    pub fn l_list(&self) -> Result<&[usize], CliError> {
        if self.protocol.l.is_empty() {
            return Err(CliError::config("protocol.l must list at least one splitting"));
        }
        Ok(&self.protocol.l)
    }
}
