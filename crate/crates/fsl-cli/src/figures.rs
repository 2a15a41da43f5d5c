//! Panel-data bundles for the headline plots: spectra, profiles, dynamics,
//! the stabilization-time sweep, and the eigenstate-entropy curves.
//!
//! Each panel is written as `fig{N}_{panel}.csv` (or `.json`) with a full
//! config echo; a failure in any panel aborts the bundle and names it.

use std::path::Path;

use fsl_core::dynamics::{
    expand_initial_state, stabilization_time, InitialState,
    DEFAULT_TAU_THRESHOLD,
};
use fsl_core::nonhermitian::{analytic_nh_spectrum, DEFAULT_EP_TOL};
use fsl_core::spectra::isotropic_ssh_spectrum;
use fsl_core::{FockCutoff, ModelParams, Spin};

use crate::config::{OutputFormat, Scenario, ScenarioConfig};
use crate::output::{write_file, Cell, Table};
use crate::scenarios::build_table;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    FigA1,
}

impl Figure {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "fig2" => Figure::Fig2,
            "fig3" => Figure::Fig3,
            "fig4" => Figure::Fig4,
            "figA1" | "figa1" => Figure::FigA1,
            other => {
                return Err(CliError::config(format!(
                    "unknown figure `{other}` (expected fig2, fig3, fig4, figA1)"
                )))
            }
        })
    }
}

struct Panel {
    name: &'static str,
    config: ScenarioConfig,
    table: Table,
}

/// Build every panel of the requested bundle, then write them all.
pub fn emit_figure_bundle(
    figure: Figure,
    out_dir: &Path,
    format: OutputFormat,
    stamp: bool,
) -> Result<(), CliError> {
    let panels = match figure {
        Figure::Fig2 => fig2_panels(format, stamp),
        Figure::Fig3 => fig3_panels(format, stamp),
        Figure::Fig4 => fig4_panels(format, stamp),
        Figure::FigA1 => fig_a1_panels(format, stamp),
    }?;
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    for panel in &panels {
        let path = out_dir.join(format!("{}.{ext}", panel.name));
        write_file(&path, &panel.table.render(&panel.config))
            .map_err(|e| CliError::config(format!("panel {}: {e}", panel.name)))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn panel_config(
    scenario: Scenario,
    format: OutputFormat,
    stamp: bool,
    tweak: impl FnOnce(&mut ScenarioConfig) -> Result<(), CliError>,
) -> Result<ScenarioConfig, CliError> {
    let mut cfg = ScenarioConfig::defaults(scenario);
    cfg.format = format;
    cfg.stamp_header = stamp;
    tweak(&mut cfg)?;
    Ok(cfg)
}

fn named(
    name: &'static str,
    config: ScenarioConfig,
    table: Result<Table, CliError>,
) -> Result<Panel, CliError> {
    let table = table.map_err(|e| CliError::config(format!("panel {name}: {e}")))?;
    Ok(Panel {
        name,
        config,
        table,
    })
}

/// Isotropic vs anisotropic spectra and zero-mode profiles.
fn fig2_panels(format: OutputFormat, stamp: bool) -> Result<Vec<Panel>, CliError> {
    let mut panels = Vec::new();

    // (a) isotropic spectrum sweep over j1/j2 at 50 cells
    let cfg = panel_config(Scenario::SpectrumIsotropic, format, stamp, |c| {
        c.params = ModelParams::hermitian(0.0, 1.0)?;
        c.cells = 50;
        Ok(())
    })?;
    let mut t = Table::new(&["j1_over_j2", "level", "e"]);
    t.note("sweep", "j1/j2 from 0 to 2 in steps of 0.02");
    for k in 0..=100 {
        let ratio = 0.02 * k as f64;
        let s = isotropic_ssh_spectrum(ratio, 1.0, 50)
            .map_err(|e| CliError::config(format!("panel fig2_a: {e}")))?;
        for (level, e) in s.eigenvalues.iter().enumerate() {
            t.push(vec![
                Cell::Float(ratio),
                Cell::Int(level as i64),
                Cell::Float(*e),
            ]);
        }
    }
    panels.push(Panel {
        name: "fig2_a",
        config: cfg,
        table: t,
    });

    // (b) analytic spectrum of the anisotropic chain; the eigenvalues do not
    // depend on j1, so one block covers the whole ratio axis
    let cfg = panel_config(Scenario::SpectrumHermitian, format, stamp, |c| {
        c.params = ModelParams::hermitian(1.0, 1.0)?;
        c.n_levels = Some(50);
        Ok(())
    })?;
    let mut table = build_table(&cfg)?;
    table.note("ratio_note", "eigenvalues are independent of j1/j2");
    panels.push(named("fig2_b", cfg, Ok(table))?);

    // (c) the two isotropic edge states at j1/j2 = 0.25
    let s = isotropic_ssh_spectrum(0.25, 1.0, 50)
        .map_err(|e| CliError::config(format!("panel fig2_c: {e}")))?;
    for side in ["left", "right"] {
        let cfg = panel_config(Scenario::SpectrumIsotropic, format, stamp, |c| {
            c.params = ModelParams::hermitian(0.25, 1.0)?;
            c.cells = 50;
            Ok(())
        })?;
        let edge = s
            .edge_states
            .iter()
            .find(|e| e.side.to_string() == side)
            .ok_or_else(|| CliError::config(format!("panel fig2_c_{side}: edge state missing")))?;
        let mut t = Table::new(&["n", "p"]);
        t.note("edge", side);
        t.note("columns_note", "n is the chain site index");
        for (site, a) in edge.amplitudes.iter().enumerate() {
            t.push(vec![Cell::Int(site as i64), Cell::Float(a * a)]);
        }
        panels.push(Panel {
            name: if side == "left" { "fig2_c_left" } else { "fig2_c_right" },
            config: cfg,
            table: t,
        });
    }

    // (d, e) zero-mode profiles at j1/j2 = 0.5 and 4
    for (name, ratio) in [("fig2_d", 0.5), ("fig2_e", 4.0)] {
        let cfg = panel_config(Scenario::ZeroMode, format, stamp, |c| {
            c.params = ModelParams::hermitian(ratio, 1.0)?;
            c.initial = InitialState::Fock {
                n: 50,
                spin: Spin::Down,
            };
            Ok(())
        })?;
        let mut table = build_table(&cfg)?;
        table.rows.truncate(51); // profile shown for n <= 50
        panels.push(named(name, cfg, Ok(table))?);
    }
    Ok(panels)
}

/// Non-Hermitian spectra, bound-effect dynamics, and the tau sweep.
fn fig3_panels(format: OutputFormat, stamp: bool) -> Result<Vec<Panel>, CliError> {
    let mut panels = Vec::new();

    for (name, gamma) in [("fig3_a", 0.15), ("fig3_d", 0.5)] {
        let cfg = panel_config(Scenario::SpectrumNh, format, stamp, |c| {
            c.params = ModelParams::new(1.0, 0.2, gamma)?;
            c.n_levels = Some(50);
            Ok(())
        })?;
        let table = build_table(&cfg);
        panels.push(named(name, cfg, table)?);
    }

    for (dist_name, series_name, gamma) in
        [("fig3_b", "fig3_c", 0.15), ("fig3_e", "fig3_f", 0.5)]
    {
        let (dist, series) = bound_effect_panels(gamma, format, stamp, dist_name, series_name)?;
        panels.push(dist);
        panels.push(series);
    }

    // (g) stabilization-time sweep
    let cfg = panel_config(Scenario::StabilizationSweep, format, stamp, |c| {
        c.params = ModelParams::new(1.0, 0.2, 0.0)?;
        c.gammas = (1..=30).map(|k| 0.02 * k as f64).collect();
        c.initials = [10, 20, 30, 40, 50]
            .iter()
            .map(|&n| InitialState::Fock {
                n,
                spin: Spin::Down,
            })
            .collect();
        c.t_max = 5000.0;
        Ok(())
    })?;
    let table = build_table(&cfg);
    panels.push(named("fig3_g", cfg, table)?);
    Ok(panels)
}

/// Boson-distribution colormap plus the projection time series for one
/// bound-effect run; the time axis extends to 1.5 tau.
fn bound_effect_panels(
    gamma: f64,
    format: OutputFormat,
    stamp: bool,
    dist_name: &'static str,
    series_name: &'static str,
) -> Result<(Panel, Panel), CliError> {
    let params = ModelParams::new(1.0, 0.2, gamma).map_err(CliError::from)?;
    let cutoff = FockCutoff::for_model(&params, 50);
    let psi0 = fock_down_state(50, &cutoff)?;
    let tau = stabilization_time(&psi0, &params, DEFAULT_TAU_THRESHOLD, 5000.0)
        .map_err(|e| CliError::context(format!("panel {dist_name}"), e))?;
    let t_end = 1.5 * tau;

    let mut cfg = panel_config(Scenario::Evolve, format, stamp, |c| {
        c.params = params;
        c.initial = InitialState::Fock {
            n: 50,
            spin: Spin::Down,
        };
        c.t_start = 0.0;
        c.t_end = t_end;
        c.samples = 301;
        Ok(())
    })?;
    cfg.n_levels = None;

    // colormap panel: long-form (t, n, p)
    let sys = analytic_nh_spectrum(&params, cutoff.n_active(), &cutoff, DEFAULT_EP_TOL)
        .map_err(CliError::from)?;
    let coeffs = expand_initial_state(&psi0, &sys).map_err(CliError::from)?;
    let times: Vec<f64> = (0..301).map(|k| t_end * k as f64 / 300.0).collect();
    let traj =
        fsl_core::dynamics::evolve_analytic(&coeffs, &sys, &times).map_err(CliError::from)?;
    let n_plot = 160.min(cutoff.n_max());
    let mut dist_table = Table::new(&["t", "n", "p"]);
    dist_table.note("tau", crate::config::fmt_f64(tau));
    dist_table.note("n_plot", n_plot.to_string());
    for (time, raw) in traj.iter() {
        let state = fsl_core::dynamics::renormalize_fock(raw).map_err(CliError::from)?;
        for n in 0..=n_plot {
            dist_table.push(vec![
                Cell::Float(time),
                Cell::Int(n as i64),
                Cell::Float(state.boson_occupation(n)),
            ]);
        }
    }
    let dist_panel = Panel {
        name: dist_name,
        config: cfg.clone(),
        table: dist_table,
    };

    let series_table = build_table(&cfg)?;
    let series_panel = Panel {
        name: series_name,
        config: cfg,
        table: series_table,
    };
    Ok((dist_panel, series_panel))
}

fn fock_down_state(n: usize, cutoff: &FockCutoff) -> Result<fsl_core::SpinBosonState, CliError> {
    fsl_core::SpinBosonState::basis_state(n, Spin::Down, *cutoff).map_err(CliError::from)
}

/// Block eigenvalues vs gamma and the crossover dynamics.
fn fig4_panels(format: OutputFormat, stamp: bool) -> Result<Vec<Panel>, CliError> {
    let mut panels = Vec::new();

    // (a, b): real and imaginary block eigenvalues over a gamma sweep
    for name in ["fig4_a", "fig4_b"] {
        let cfg = panel_config(Scenario::SpectrumNh, format, stamp, |c| {
            c.params = ModelParams::new(1.0, 0.2, 0.0)?;
            c.n_levels = Some(11);
            Ok(())
        })?;
        let mut t = Table::new(&["gamma", "n", "branch", "re_e", "im_e"]);
        t.note("sweep", "gamma from 0 to 0.6 in steps of 0.005");
        for k in 0..=120 {
            let gamma = 0.005 * k as f64;
            let p = ModelParams::new(1.0, 0.2, gamma).map_err(CliError::from)?;
            for n in 0..11 {
                for branch in [
                    fsl_core::nonhermitian::Branch::Plus,
                    fsl_core::nonhermitian::Branch::Minus,
                ] {
                    let e = fsl_core::nonhermitian::block_eigenvalue(&p, n, branch);
                    t.push(vec![
                        Cell::Float(gamma),
                        Cell::Int(n as i64),
                        Cell::Text(branch.to_string()),
                        Cell::Float(e.re),
                        Cell::Float(e.im),
                    ]);
                }
            }
        }
        panels.push(Panel {
            name,
            config: cfg,
            table: t,
        });
    }

    // (c)-(f): oscillation vs saturation of <n> and S for |10, up>
    for (names, gamma) in [(["fig4_c", "fig4_d"], 0.15), (["fig4_e", "fig4_f"], 0.25)] {
        let cfg = panel_config(Scenario::Evolve, format, stamp, |c| {
            c.params = ModelParams::new(1.0, 0.2, gamma)?;
            c.initial = InitialState::Fock {
                n: 10,
                spin: Spin::Up,
            };
            c.t_start = 0.0;
            c.t_end = 80.0;
            c.samples = 801;
            Ok(())
        })?;
        let table = build_table(&cfg)?;
        for name in names {
            panels.push(Panel {
                name,
                config: cfg.clone(),
                table: table.clone(),
            });
        }
    }
    Ok(panels)
}

/// Eigenstate entanglement entropy vs gamma for the first six blocks.
fn fig_a1_panels(format: OutputFormat, stamp: bool) -> Result<Vec<Panel>, CliError> {
    let cfg = panel_config(Scenario::EigenstateEntropy, format, stamp, |c| {
        c.params = ModelParams::new(1.0, 0.2, 0.0)?;
        c.entropy_levels = (0..=5).collect();
        // default grid plus the exact EP of every level; grid points that
        // land within the EP tolerance are snapped onto the exact value so
        // each EP appears exactly once
        let j2 = 0.2f64;
        let eps: Vec<f64> = (0..=5u32).map(|n| j2 * ((n + 1) as f64).sqrt()).collect();
        let mut gammas: Vec<f64> = (1..=120)
            .map(|k| j2 * 0.025 * k as f64)
            .map(|g| {
                eps.iter()
                    .find(|ep| (g - **ep).abs() <= DEFAULT_EP_TOL * j2)
                    .copied()
                    .unwrap_or(g)
            })
            .collect();
        gammas.extend(&eps);
        gammas.sort_by(f64::total_cmp);
        gammas.dedup();
        c.gammas = gammas;
        Ok(())
    })?;
    let table = build_table(&cfg);
    Ok(vec![named("figA1", cfg, table)?])
}
