//! The four batch commands: sector enumeration report, static potential,
//! interference fringes, and the area-law probe. Identical config and seed
//! always produce byte-identical files: sweeps collect in input order and
//! all floats are formatted deterministically.

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{csv_from_rows, file_name, fmt_f64, fringe_svg, OutDir};
use fluxtube::analysis::{
    self, auto_t_grid, fit_fringe, extract_tension, FringeSeries, ProbeOpts, ProbeSource,
};
use fluxtube::protocol::{self, meson_sites};
use fluxtube::sector::{enumerate_sector, ChargeConfig, SectorDump};
use fluxtube::Error as CoreError;
use serde::Serialize;

pub fn cmd_basis(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let spec = cfg.build_lattice()?;
    let group = cfg.build_group()?;
    let max_dim = cfg.prepare_opts().max_dim;

    // meson sectors for every requested separation; vacuum when none
    let mut separations: Vec<Option<usize>> = Vec::new();
    if cfg.protocol.r.is_empty() {
        separations.push(None);
    } else {
        let mut seps: Vec<usize> = cfg.protocol.r.clone();
        for &r in &cfg.protocol.r {
            for &l in &cfg.protocol.l {
                seps.push(r + l);
            }
        }
        seps.sort_unstable();
        seps.dedup();
        separations.extend(seps.into_iter().map(Some));
    }

    #[derive(Serialize)]
    struct SectorReport {
        separation: Option<usize>,
        #[serde(flatten)]
        dump: SectorDump,
    }

    let mut reports = Vec::new();
    for sep in separations {
        let charges = match sep {
            None => ChargeConfig::empty(),
            Some(r) => {
                let (plus, minus) = meson_sites(&spec, r)?;
                ChargeConfig::meson(plus, minus)
            }
        };
        let sector = enumerate_sector(&spec, group, &charges, max_dim)?;
        match sep {
            None => println!("sector vacuum: dim {}", sector.dim()),
            Some(r) => println!("sector R={r}: dim {}", sector.dim()),
        }
        reports.push(SectorReport {
            separation: sep,
            dump: sector.dump(16),
        });
    }

    #[derive(Serialize)]
    struct Summary<'a> {
        sectors: Vec<SectorReport>,
        config: &'a ExperimentConfig,
    }
    let out = OutDir::create(&cfg.output.dir)?;
    let path = out.write_json(
        "basis.json",
        &Summary {
            sectors: reports,
            config: cfg,
        },
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_potential(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let spec = cfg.build_lattice()?;
    let group = cfg.build_group()?;
    let couplings = cfg.build_couplings()?;
    let r_list = cfg.r_list()?;
    let opts = cfg.prepare_opts();

    let table = analysis::static_potential(&spec, group, &couplings, r_list, &opts)?;

    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|row| vec![row.r.to_string(), fmt_f64(row.e0), fmt_f64(row.v)])
        .collect();
    let out = OutDir::create(&cfg.output.dir)?;
    out.write_text("potential.csv", &csv_from_rows("r,e0,v", &rows))?;

    #[derive(Serialize)]
    struct RowOut {
        r: usize,
        e0: f64,
        v: f64,
        residual: f64,
        iterations: usize,
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        gamma: Option<f64>,
        intercept: Option<f64>,
        rms_residual: Option<f64>,
        r_ref: usize,
        rows: Vec<RowOut>,
        config: &'a ExperimentConfig,
    }
    let summary = Summary {
        gamma: table.fit.map(|f| f.slope),
        intercept: table.fit.map(|f| f.intercept),
        rms_residual: table.fit.map(|f| f.rms_residual),
        r_ref: table.r_ref,
        rows: table
            .rows
            .iter()
            .map(|row| RowOut {
                r: row.r,
                e0: row.e0,
                v: row.v,
                residual: row.residual,
                iterations: row.iterations,
            })
            .collect(),
        config: cfg,
    };
    let path = out.write_json("potential_summary.json", &summary)?;
    match table.fit {
        Some(fit) => println!("gamma = {} (rms residual {})", fit.slope, fit.rms_residual),
        None => println!("fit omitted: need at least two separations"),
    }
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct FringeOut {
    r: usize,
    l: usize,
    csv: String,
    omega: Option<f64>,
    amplitude: Option<f64>,
    offset: Option<f64>,
    rms_residual: Option<f64>,
    omega_stderr: Option<f64>,
    gamma: Option<f64>,
    gamma_stderr: Option<f64>,
    degenerate: Option<bool>,
    fit_omitted: Option<String>,
    nyquist_warning: bool,
    max_leakage: f64,
    mean_leakage: f64,
}

pub fn cmd_interfere(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let spec = cfg.build_lattice()?;
    let group = cfg.build_group()?;
    let couplings = cfg.build_couplings()?;
    let r_list = cfg.r_list()?.to_vec();
    let l_list = cfg.l_list()?.to_vec();
    let opts = cfg.prepare_opts();
    let out = OutDir::create(&cfg.output.dir)?;

    let mut fringes = Vec::new();
    for &r in &r_list {
        for &l in &l_list {
            let register =
                protocol::prepare(&spec, group, &couplings, r, l, cfg.protocol.mode, &opts)?;
            let grid = match &cfg.protocol.t_grid {
                Some(g) => g.points()?,
                None => auto_t_grid(
                    analysis::strong_coupling_omega(group, &couplings, l),
                    cfg.analysis.periods,
                    cfg.analysis.samples_per_period,
                ),
            };
            let results = protocol::fringe_sweep(&register, &grid)?;

            let csv_name = file_name("fringe", r, l, "csv");
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|p| {
                    vec![
                        fmt_f64(p.t),
                        fmt_f64(p.p_r),
                        fmt_f64(p.p_rl),
                        fmt_f64(p.leakage),
                        fmt_f64(p.amp_r.re),
                        fmt_f64(p.amp_r.im),
                        fmt_f64(p.amp_rl.re),
                        fmt_f64(p.amp_rl.im),
                    ]
                })
                .collect();
            out.write_text(
                &csv_name,
                &csv_from_rows(
                    "t,p_r,p_rl,leakage,amp_r_re,amp_r_im,amp_rl_re,amp_rl_im",
                    &rows,
                ),
            )?;

            let series =
                FringeSeries::from_protocol(&results, r, l, couplings.g2(), cfg.protocol.mode);
            let (fit, omitted) = match fit_fringe(&series) {
                Ok(fit) => (Some(fit), None),
                Err(CoreError::InsufficientSamples { got, need }) => (
                    None,
                    Some(format!("fit needs {need} samples, grid has {got}")),
                ),
                Err(e) => return Err(e.into()),
            };
            let mut nyquist_warning = false;
            if let Some(f) = &fit {
                if f.omega > 0.8 * series.nyquist() {
                    nyquist_warning = true;
                    eprintln!(
                        "warning: R={r} L={l}: fitted omega {:.4} close to the grid Nyquist \
                         limit {:.4}; refine the T grid",
                        f.omega,
                        series.nyquist()
                    );
                }
            }
            let tension = fit.as_ref().map(|f| extract_tension(f, l)).transpose()?;

            if cfg.output.svg {
                let svg = fringe_svg(
                    &series.samples,
                    fit.as_ref().map(|f| (f.omega, f.amplitude, f.offset)),
                    &format!("fringe R={r} L={l}"),
                );
                out.write_text(&file_name("fringe", r, l, "svg"), &svg)?;
            }

            match &fit {
                Some(f) => println!(
                    "R={r} L={l}: omega = {} gamma = {}",
                    f.omega,
                    f.omega / l as f64
                ),
                None => println!("R={r} L={l}: fit omitted"),
            }
            fringes.push(FringeOut {
                r,
                l,
                csv: csv_name,
                omega: fit.as_ref().map(|f| f.omega),
                amplitude: fit.as_ref().map(|f| f.amplitude),
                offset: fit.as_ref().map(|f| f.offset),
                rms_residual: fit.as_ref().map(|f| f.rms_residual),
                omega_stderr: fit.as_ref().map(|f| f.omega_stderr),
                gamma: tension.as_ref().map(|t| t.gamma),
                gamma_stderr: tension.as_ref().map(|t| t.stderr),
                degenerate: fit.as_ref().map(|f| f.degenerate),
                fit_omitted: omitted,
                nyquist_warning,
                max_leakage: series.meta.max_leakage,
                mean_leakage: series.meta.mean_leakage,
            });
        }
    }

    #[derive(Serialize)]
    struct Summary<'a> {
        fringes: Vec<FringeOut>,
        config: &'a ExperimentConfig,
    }
    let path = out.write_json(
        "interfere_summary.json",
        &Summary {
            fringes,
            config: cfg,
        },
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_probe(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let r_list = cfg.r_list()?.to_vec();
    let l_list = cfg.l_list()?.to_vec();
    let opts = ProbeOpts {
        threshold: cfg.analysis.area_law_threshold,
        periods: cfg.analysis.periods,
        samples_per_period: cfg.analysis.samples_per_period,
        t_grid: cfg.protocol.t_grid.as_ref().map(|g| g.points()).transpose()?,
    };

    // toy potential takes precedence; otherwise simulate the lattice
    let (report, source_name) = if let Some(toy) = &cfg.toy {
        let source = ProbeSource::Toy {
            gamma: toy.gamma,
            beta: toy.beta,
        };
        (
            analysis::area_law_probe(&source, &r_list, &l_list, &opts)?,
            "toy",
        )
    } else {
        let spec = cfg.build_lattice()?;
        let group = cfg.build_group()?;
        let couplings = cfg.build_couplings()?;
        let prep = cfg.prepare_opts();
        let source = ProbeSource::Lattice {
            spec: &spec,
            group,
            couplings: &couplings,
            mode: cfg.protocol.mode,
            opts: &prep,
        };
        (
            analysis::area_law_probe(&source, &r_list, &l_list, &opts)?,
            "lattice",
        )
    };

    let out = OutDir::create(&cfg.output.dir)?;
    let rows: Vec<Vec<String>> = report
        .entries
        .iter()
        .map(|e| {
            vec![
                e.r.to_string(),
                e.l.to_string(),
                fmt_f64(e.omega),
                fmt_f64(e.gamma),
            ]
        })
        .collect();
    out.write_text("omega_matrix.csv", &csv_from_rows("r,l,omega,gamma", &rows))?;

    #[derive(Serialize)]
    struct EntryOut {
        r: usize,
        l: usize,
        omega: f64,
        gamma: f64,
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        verdict: &'static str,
        source: &'static str,
        threshold: f64,
        median_gamma: f64,
        max_rel_deviation: f64,
        entries: Vec<EntryOut>,
        config: &'a ExperimentConfig,
    }
    let summary = Summary {
        verdict: report.verdict.as_str(),
        source: source_name,
        threshold: report.threshold,
        median_gamma: report.median_gamma,
        max_rel_deviation: report.max_rel_deviation,
        entries: report
            .entries
            .iter()
            .map(|e| EntryOut {
                r: e.r,
                l: e.l,
                omega: e.omega,
                gamma: e.gamma,
            })
            .collect(),
        config: cfg,
    };
    let path = out.write_json("probe_summary.json", &summary)?;
    println!("verdict: {}", report.verdict.as_str());
    println!("wrote {}", path.display());
    Ok(())
}
