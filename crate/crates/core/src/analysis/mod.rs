//! Fringe analysis: frequency fits, string tension extraction, static
//! potentials, and the area-law probe.
//!
//! The confinement signature is that the fitted fringe frequency divided
//! by the branch separation, ω(R,L)/L, is one number independent of R and
//! L: the string tension. The probe sweeps an (R, L) grid, fits every
//! fringe, and checks the γ estimates for constancy against a relative
//! threshold. A solvable V(R) = γ·R^β toy stands in for non-confining
//! phases: for β ≠ 1 the γ estimates spread with R and the verdict flips.

mod fit;

use crate::engine;
use crate::group::GaugeGroup;
use crate::hamiltonian::{assemble, Couplings};
use crate::lattice::LatticeSpec;
use crate::par;
use crate::protocol::{self, meson_sites, PrepMode, PrepareOpts, ProtocolResult};
use crate::sector::{enumerate_sector, ChargeConfig};
use crate::{Error, Result};
use std::sync::Arc;

/// Default relative-constancy threshold for the area-law verdict.
pub const DEFAULT_AREA_LAW_THRESHOLD: f64 = 0.02;

/// Sampled P_R(T) curve with the context it came from.
#[derive(Debug, Clone)]
pub struct FringeSeries {
    /// (T, P_R) pairs, T strictly increasing.
    pub samples: Vec<(f64, f64)>,
    pub meta: FringeMeta,
}

#[derive(Debug, Clone)]
pub struct FringeMeta {
    pub r: usize,
    pub l: usize,
    /// Gauge coupling g², absent for toy-model series.
    pub g2: Option<f64>,
    pub mode: String,
    pub max_leakage: f64,
    pub mean_leakage: f64,
}

impl FringeSeries {
    pub fn from_protocol(results: &[ProtocolResult], r: usize, l: usize, g2: f64, mode: PrepMode) -> Self {
        let samples = results.iter().map(|p| (p.t, p.p_r)).collect();
        let n = results.len().max(1) as f64;
        let max_leakage = results.iter().map(|p| p.leakage).fold(0.0, f64::max);
        let mean_leakage = results.iter().map(|p| p.leakage).sum::<f64>() / n;
        Self {
            samples,
            meta: FringeMeta {
                r,
                l,
                g2: Some(g2),
                mode: match mode {
                    PrepMode::BareString => "bare-string".into(),
                    PrepMode::SectorGround => "sector-ground".into(),
                },
                max_leakage,
                mean_leakage,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        for &(t, p) in &self.samples {
            if !t.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite time {t}")));
            }
            if !(-1e-9..=1.0 + 1e-9).contains(&p) {
                return Err(Error::InvalidInput(format!(
                    "probability {p} out of range at T={t}"
                )));
            }
        }
        for pair in self.samples.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::InvalidInput(
                    "fringe samples must have strictly increasing T".into(),
                ));
            }
        }
        Ok(())
    }

    /// Nyquist angular frequency of the sampling grid.
    pub fn nyquist(&self) -> f64 {
        let dt_min = self
            .samples
            .windows(2)
            .map(|w| w[1].0 - w[0].0)
            .fold(f64::INFINITY, f64::min);
        std::f64::consts::PI / dt_min
    }
}

/// Fitted fringe: P(T) = amplitude·sin²(omega·T/2) + offset.
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    pub omega: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub rms_residual: f64,
    pub omega_stderr: f64,
    /// Variance estimates for (omega, amplitude, offset).
    pub covariance: [f64; 3],
    pub iterations: usize,
    /// Set when the series carries no oscillation to fit.
    pub degenerate: bool,
}

/// Coarse spectral estimate refined by damped Gauss-Newton.
pub fn fit_fringe(series: &FringeSeries) -> Result<FitResult> {
    series.validate()?;
    let ts: Vec<f64> = series.samples.iter().map(|s| s.0).collect();
    let ps: Vec<f64> = series.samples.iter().map(|s| s.1).collect();
    let out = fit::fit_sin_squared(&ts, &ps)?;
    Ok(FitResult {
        omega: out.omega,
        amplitude: out.amplitude,
        offset: out.offset,
        rms_residual: out.rms_residual,
        omega_stderr: out.omega_stderr,
        covariance: out.covariance,
        iterations: out.iterations,
        degenerate: out.degenerate,
    })
}

/// String tension estimate γ = ω/L with propagated fit uncertainty.
#[derive(Debug, Clone, Copy)]
pub struct TensionEstimate {
    pub gamma: f64,
    pub stderr: f64,
}

pub fn extract_tension(fit: &FitResult, l: usize) -> Result<TensionEstimate> {
    if l == 0 {
        return Err(Error::InvalidInput("branch separation L must be positive".into()));
    }
    Ok(TensionEstimate {
        gamma: fit.omega / l as f64,
        stderr: fit.omega_stderr / l as f64,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct PotentialRow {
    pub r: usize,
    pub e0: f64,
    /// V(R) = E₀(R) − E₀(R_ref), referenced to the smallest R.
    pub v: f64,
    /// Eigensolver diagnostics for this sector's ground state.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

/// Ground energies per separation with the large-R linear fit.
#[derive(Debug, Clone)]
pub struct PotentialTable {
    /// Rows in input order.
    pub rows: Vec<PotentialRow>,
    pub r_ref: usize,
    /// Absent when fewer than two separations were requested.
    pub fit: Option<LinearFit>,
}

/// Computes E₀(R) for every requested separation and fits V(R) = γR + b
/// over the largest half of the R values (the asymptotic regime).
pub fn static_potential(
    spec: &Arc<LatticeSpec>,
    group: GaugeGroup,
    couplings: &Couplings,
    r_list: &[usize],
    opts: &PrepareOpts,
) -> Result<PotentialTable> {
    if r_list.is_empty() {
        return Err(Error::InvalidInput("empty R list".into()));
    }
    let mut sorted = r_list.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != r_list.len() {
        return Err(Error::InvalidInput("R values must be distinct".into()));
    }

    let energies: Vec<(usize, f64, f64, usize)> =
        par::par_map(r_list, |&r| -> Result<(usize, f64, f64, usize)> {
            let (plus, minus) = meson_sites(spec, r)?;
            let sector = Arc::new(
                enumerate_sector(spec, group, &ChargeConfig::meson(plus, minus), opts.max_dim)?
                    .require_non_empty()?,
            );
            let h = assemble(&sector, couplings)?;
            let eig = engine::ground_state(&h, &opts.engine, opts.seed)?;
            Ok((r, eig.energy, eig.residual, eig.iterations))
        })
        .into_iter()
        .collect::<Result<_>>()?;

    let &(r_ref, e_ref, _, _) = energies
        .iter()
        .min_by_key(|&&(r, ..)| r)
        .expect("nonempty");
    let rows: Vec<PotentialRow> = energies
        .iter()
        .map(|&(r, e0, residual, iterations)| PotentialRow {
            r,
            e0,
            v: e0 - e_ref,
            residual,
            iterations,
        })
        .collect();

    let fit = fit_upper_half(&rows);
    Ok(PotentialTable { rows, r_ref, fit })
}

/// Least squares V = slope·R + intercept over the ceil(n/2) largest R
/// (at least two points).
fn fit_upper_half(rows: &[PotentialRow]) -> Option<LinearFit> {
    if rows.len() < 2 {
        return None;
    }
    let mut by_r: Vec<&PotentialRow> = rows.iter().collect();
    by_r.sort_by_key(|row| row.r);
    let take = rows.len().div_ceil(2).max(2);
    let subset = &by_r[by_r.len() - take..];

    let n = subset.len() as f64;
    let sx: f64 = subset.iter().map(|p| p.r as f64).sum();
    let sy: f64 = subset.iter().map(|p| p.v).sum();
    let sxx: f64 = subset.iter().map(|p| (p.r as f64) * (p.r as f64)).sum();
    let sxy: f64 = subset.iter().map(|p| (p.r as f64) * p.v).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss: f64 = subset
        .iter()
        .map(|p| {
            let r = slope * p.r as f64 + intercept - p.v;
            r * r
        })
        .sum();
    Some(LinearFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    })
}

/// Exact two-level fringe under a toy potential V(α) = γ·α^β: the branch
/// energies are E_α = γ α^β, so P_R(T) = sin²((E_{R+L} − E_R)·T/2). A
/// solvable stand-in for non-confining phases (β ≠ 1) that are out of
/// reach of direct simulation.
pub fn toy_potential_protocol(
    gamma: f64,
    beta: f64,
    r: usize,
    l: usize,
    t_grid: &[f64],
) -> Result<FringeSeries> {
    if !gamma.is_finite() || gamma <= 0.0 || !beta.is_finite() || beta <= 0.0 {
        return Err(Error::InvalidInput("toy potential needs gamma > 0, beta > 0".into()));
    }
    if r == 0 || l == 0 {
        return Err(Error::InvalidInput("separations must be positive".into()));
    }
    let delta = toy_gap(gamma, beta, r, l);
    let samples = t_grid
        .iter()
        .map(|&t| (t, (delta * t / 2.0).sin().powi(2)))
        .collect();
    Ok(FringeSeries {
        samples,
        meta: FringeMeta {
            r,
            l,
            g2: None,
            mode: "toy".into(),
            max_leakage: 0.0,
            mean_leakage: 0.0,
        },
    })
}

/// Branch energy gap of the toy potential: γ((R+L)^β − R^β).
pub fn toy_gap(gamma: f64, beta: f64, r: usize, l: usize) -> f64 {
    gamma * (((r + l) as f64).powf(beta) - (r as f64).powf(beta))
}

/// Strong-coupling estimate of the fringe frequency: ΔE ≈ λ_E·h_E(1)·L,
/// the electric cost of L extra string links. Used to autoscale T grids.
pub fn strong_coupling_omega(group: GaugeGroup, couplings: &Couplings, l: usize) -> f64 {
    couplings.lambda_e() * group.electric_energy(1) * l as f64
}

/// Uniform grid covering `periods` fringe periods of an expected ω with
/// `samples_per_period` points per period, starting at T = 0.
pub fn auto_t_grid(omega_est: f64, periods: f64, samples_per_period: usize) -> Vec<f64> {
    assert!(omega_est > 0.0 && periods > 0.0 && samples_per_period > 1);
    let dt = std::f64::consts::TAU / omega_est / samples_per_period as f64;
    let count = (periods * samples_per_period as f64).ceil() as usize + 1;
    (0..count).map(|k| dt * k as f64).collect()
}

/// Where the fringe frequencies come from in a probe sweep.
pub enum ProbeSource<'a> {
    Lattice {
        spec: &'a Arc<LatticeSpec>,
        group: GaugeGroup,
        couplings: &'a Couplings,
        mode: PrepMode,
        opts: &'a PrepareOpts,
    },
    Toy {
        gamma: f64,
        beta: f64,
    },
}

#[derive(Debug, Clone)]
pub struct ProbeOpts {
    /// Relative γ-constancy threshold for the area-law verdict.
    pub threshold: f64,
    pub periods: f64,
    pub samples_per_period: usize,
    /// Explicit T grid; autoscaled per pair when absent.
    pub t_grid: Option<Vec<f64>>,
}

impl Default for ProbeOpts {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_AREA_LAW_THRESHOLD,
            periods: 3.0,
            samples_per_period: 16,
            t_grid: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProbeEntry {
    pub r: usize,
    pub l: usize,
    pub omega: f64,
    /// γ estimate ω/L for this pair.
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    AreaLaw,
    NonAreaLaw,
    InsufficientData,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::AreaLaw => "area-law",
            Verdict::NonAreaLaw => "non-area-law",
            Verdict::InsufficientData => "insufficient data",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    /// ω(R, L) in input order (R outer, L inner).
    pub entries: Vec<ProbeEntry>,
    pub verdict: Verdict,
    pub threshold: f64,
    pub median_gamma: f64,
    pub max_rel_deviation: f64,
}

/// Fits a fringe for every (R, L) pair and checks whether ω/L is constant
/// across the grid: the area-law signature of confinement.
pub fn area_law_probe(
    source: &ProbeSource,
    r_list: &[usize],
    l_list: &[usize],
    opts: &ProbeOpts,
) -> Result<ProbeReport> {
    if r_list.is_empty() || l_list.is_empty() {
        return Err(Error::InvalidInput("empty probe grid".into()));
    }
    let pairs: Vec<(usize, usize)> = r_list
        .iter()
        .flat_map(|&r| l_list.iter().map(move |&l| (r, l)))
        .collect();

    let entries: Vec<ProbeEntry> = par::par_map(&pairs, |&(r, l)| -> Result<ProbeEntry> {
        let series = probe_series(source, r, l, opts)?;
        let fit = fit_fringe(&series)?;
        Ok(ProbeEntry {
            r,
            l,
            omega: fit.omega,
            gamma: fit.omega / l as f64,
        })
    })
    .into_iter()
    .collect::<Result<_>>()?;

    Ok(assess_area_law(entries, opts.threshold))
}

fn probe_series(
    source: &ProbeSource,
    r: usize,
    l: usize,
    opts: &ProbeOpts,
) -> Result<FringeSeries> {
    let omega_est = match source {
        ProbeSource::Lattice {
            group, couplings, ..
        } => strong_coupling_omega(*group, couplings, l),
        ProbeSource::Toy { gamma, beta } => toy_gap(*gamma, *beta, r, l),
    };
    let grid = match &opts.t_grid {
        Some(g) => g.clone(),
        None => auto_t_grid(omega_est, opts.periods, opts.samples_per_period),
    };
    match source {
        ProbeSource::Lattice {
            spec,
            group,
            couplings,
            mode,
            opts: prep,
        } => {
            let register = protocol::prepare(spec, *group, couplings, r, l, *mode, prep)?;
            let results = protocol::fringe_sweep_seq(&register, &grid)?;
            Ok(FringeSeries::from_protocol(
                &results,
                r,
                l,
                couplings.g2(),
                *mode,
            ))
        }
        ProbeSource::Toy { gamma, beta } => toy_potential_protocol(*gamma, *beta, r, l, &grid),
    }
}

/// Verdict over fitted entries: area-law when every γ estimate sits within
/// `threshold` (relative) of the median.
pub fn assess_area_law(entries: Vec<ProbeEntry>, threshold: f64) -> ProbeReport {
    if entries.len() < 2 {
        let median = entries.first().map(|e| e.gamma).unwrap_or(0.0);
        return ProbeReport {
            entries,
            verdict: Verdict::InsufficientData,
            threshold,
            median_gamma: median,
            max_rel_deviation: 0.0,
        };
    }
    let mut gammas: Vec<f64> = entries.iter().map(|e| e.gamma).collect();
    gammas.sort_by(f64::total_cmp);
    let mid = gammas.len() / 2;
    let median = if gammas.len() % 2 == 1 {
        gammas[mid]
    } else {
        0.5 * (gammas[mid - 1] + gammas[mid])
    };
    if median.abs() < 1e-30 {
        return ProbeReport {
            entries,
            verdict: Verdict::InsufficientData,
            threshold,
            median_gamma: median,
            max_rel_deviation: f64::INFINITY,
        };
    }
    let max_rel_deviation = entries
        .iter()
        .map(|e| (e.gamma - median).abs() / median.abs())
        .fold(0.0, f64::max);
    let verdict = if max_rel_deviation < threshold {
        Verdict::AreaLaw
    } else {
        Verdict::NonAreaLaw
    };
    ProbeReport {
        entries,
        verdict,
        threshold,
        median_gamma: median,
        max_rel_deviation,
    }
}
