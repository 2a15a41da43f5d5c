//! Scenario runners: resolve a config, compute, and emit one table.

use fsl_core::dynamics::{
    bound_projection, eigenmode_projections, evolve_analytic, expand_initial_state,
    fock_observables, renormalize_fock, stabilization_time, InitialState,
};
use fsl_core::nonhermitian::{
    analytic_nh_spectrum, block_eigenvalue, classify_pt_phase, eigenstate_entropy, Branch,
    DEFAULT_EP_TOL,
};
use fsl_core::spectra::{isotropic_ssh_spectrum, zero_mode_profile};
use fsl_core::{FockCutoff, FslError};

use crate::config::{initial_name, Scenario, ScenarioConfig};
use crate::output::{Cell, Table};
use crate::CliError;

pub fn run(config: &ScenarioConfig) -> Result<(), CliError> {
    let table = build_table(config)?;
    table.emit(config)
}

pub fn build_table(config: &ScenarioConfig) -> Result<Table, CliError> {
    match config.scenario {
        Scenario::SpectrumHermitian => spectrum_hermitian(config),
        Scenario::SpectrumNh => spectrum_nh(config),
        Scenario::SpectrumIsotropic => spectrum_isotropic(config),
        Scenario::ZeroMode => zero_mode(config),
        Scenario::Evolve => evolve(config),
        Scenario::StabilizationSweep => sweep_tau(config),
        Scenario::EigenstateEntropy => entropy(config),
        Scenario::Validate => Err(CliError::config(
            "validate has no table output; use the validate subcommand".into(),
        )),
    }
}

fn branch_cell(branch: Branch) -> Cell {
    Cell::Text(branch.to_string())
}

fn spectrum_hermitian(config: &ScenarioConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&["n", "branch", "re_e", "im_e"]);
    t.note("columns_note", "zero-mode row has an empty n");
    t.push(vec![
        Cell::Text(String::new()),
        Cell::Text("zero".into()),
        Cell::Float(0.0),
        Cell::Float(0.0),
    ]);
    for n in 0..config.resolved_n_levels_free() {
        let e = config.params.intercell(n);
        t.push(vec![
            Cell::Int(n as i64),
            Cell::Text("+".into()),
            Cell::Float(e),
            Cell::Float(0.0),
        ]);
        t.push(vec![
            Cell::Int(n as i64),
            Cell::Text("-".into()),
            Cell::Float(-e),
            Cell::Float(0.0),
        ]);
    }
    Ok(t)
}

fn spectrum_nh(config: &ScenarioConfig) -> Result<Table, CliError> {
    let p = &config.params;
    let (phase, eps) = classify_pt_phase(p, DEFAULT_EP_TOL);
    let mut t = Table::new(&["n", "branch", "re_e", "im_e"]);
    t.note("pt_phase", phase.to_string());
    if !eps.is_empty() {
        t.note(
            "ep_indices",
            eps.iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
    }
    t.note("columns_note", "bound-state row has an empty n");
    t.push(vec![
        Cell::Text(String::new()),
        Cell::Text("bound".into()),
        Cell::Float(0.0),
        Cell::Float(p.gamma()),
    ]);
    for n in 0..config.resolved_n_levels_free() {
        for branch in [Branch::Plus, Branch::Minus] {
            let e = block_eigenvalue(p, n, branch);
            t.push(vec![
                Cell::Int(n as i64),
                branch_cell(branch),
                Cell::Float(e.re),
                Cell::Float(e.im),
            ]);
        }
    }
    Ok(t)
}

fn spectrum_isotropic(config: &ScenarioConfig) -> Result<Table, CliError> {
    let s = isotropic_ssh_spectrum(config.params.j1(), config.params.j2(), config.cells)?;
    let mut t = Table::new(&["n", "branch", "re_e", "im_e"]);
    if s.degenerate_chain {
        t.note("degenerate_chain", "gap closed; zero modes not classified");
    }
    for (i, e) in s.eigenvalues.iter().enumerate() {
        let label = if s.zero_mode_indices.contains(&i) {
            "zero"
        } else {
            "bulk"
        };
        t.push(vec![
            Cell::Int(i as i64),
            Cell::Text(label.into()),
            Cell::Float(*e),
            Cell::Float(0.0),
        ]);
    }
    for edge in &s.edge_states {
        t.note(
            &format!("edge_state_{}", edge.side),
            format!("E = {}, left_weight = {}", edge.energy, edge.left_weight),
        );
    }
    Ok(t)
}

fn zero_mode(config: &ScenarioConfig) -> Result<Table, CliError> {
    let cutoff = config.cutoff()?;
    let profile = zero_mode_profile(&config.params, &cutoff)?;
    let mut t = Table::new(&["n", "p"]);
    t.note("alpha", crate::config::fmt_f64(config.params.alpha()));
    for (n, p) in profile.iter().enumerate().take(cutoff.n_active() + 1) {
        t.push(vec![Cell::Int(n as i64), Cell::Float(*p)]);
    }
    Ok(t)
}

fn evolve(config: &ScenarioConfig) -> Result<Table, CliError> {
    let grid_ok = config.samples >= 2
        && config.t_start.is_finite()
        && config.t_end.is_finite()
        && config.t_end > config.t_start;
    if !grid_ok {
        return Err(CliError::config(
            "evolve needs samples >= 2 and t_end > t_start".into(),
        ));
    }
    let cutoff = config.cutoff()?;
    let n_levels = config.resolved_n_levels(&cutoff);
    let sys = analytic_nh_spectrum(&config.params, n_levels, &cutoff, DEFAULT_EP_TOL)?;
    let psi0 = config.initial.realize(&config.params, &cutoff)?;
    let coeffs = expand_initial_state(&psi0, &sys)?;

    let times: Vec<f64> = (0..config.samples)
        .map(|k| {
            config.t_start
                + (config.t_end - config.t_start) * k as f64 / (config.samples - 1) as f64
        })
        .collect();
    let trajectory = evolve_analytic(&coeffs, &sys, &times)?;

    // fixed top-k mode columns, largest initial weight first
    let at_ep = !sys.ep_blocks.is_empty();
    let mut ranked: Vec<(usize, Branch, f64)> = coeffs
        .modes
        .iter()
        .map(|mc| (mc.n, mc.branch, mc.c.norm_sqr()))
        .collect();
    ranked.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
    let tracked: Vec<(usize, Branch)> = if at_ep {
        Vec::new()
    } else {
        ranked
            .iter()
            .take(config.top_modes)
            .map(|(n, b, _)| (*n, *b))
            .collect()
    };

    let mut columns: Vec<String> = ["t", "mean_n", "entropy", "p_bound"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for k in 0..tracked.len() {
        columns.push(format!("p_mode_{}", k + 1));
    }
    let column_refs: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
    let mut t = Table::new(&column_refs);
    if at_ep {
        t.note(
            "mode_projections",
            format!(
                "omitted: exceptional point at n_c = {}",
                sys.ep_indices()
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        );
    }
    for (k, (n, b)) in tracked.iter().enumerate() {
        t.note(&format!("p_mode_{}", k + 1), format!("n={n},branch={b}"));
    }

    for (time, raw) in trajectory.iter() {
        let state = renormalize_fock(raw)?;
        let obs = fock_observables(&state);
        let p0 = bound_projection(&coeffs, &sys, time);
        let mut row = vec![
            Cell::Float(time),
            Cell::Float(obs.mean_n),
            Cell::Float(obs.entropy),
            Cell::Float(p0),
        ];
        if !tracked.is_empty() {
            let proj = eigenmode_projections(&coeffs, &sys, time)?;
            for (n, b) in &tracked {
                let w = proj
                    .p_modes
                    .iter()
                    .find(|(pn, pb, _)| pn == n && pb == b)
                    .map(|(_, _, w)| *w)
                    .unwrap_or(0.0);
                row.push(Cell::Float(w));
            }
        }
        t.push(row);
    }
    Ok(t)
}

fn sweep_tau(config: &ScenarioConfig) -> Result<Table, CliError> {
    if config.gammas.is_empty() || config.initials.is_empty() {
        return Err(CliError::config(
            "stabilization sweep needs nonempty `gammas` and `initials`".into(),
        ));
    }
    let mut t = Table::new(&["gamma", "n_init", "tau", "reached"]);
    for initial in &config.initials {
        let n_init = initial.n_init_estimate(config.params.alpha());
        let cutoff = FockCutoff::for_model(&config.params, n_init);
        let psi0 = initial.realize(&config.params, &cutoff)?;
        let label = match initial {
            InitialState::Fock { n, .. } => *n as i64,
            _ => n_init as i64,
        };
        for &gamma in &config.gammas {
            let params = config.params.with_gamma(gamma)?;
            match stabilization_time(&psi0, &params, config.threshold, config.t_max) {
                Ok(tau) => t.push(vec![
                    Cell::Float(gamma),
                    Cell::Int(label),
                    Cell::Float(tau),
                    Cell::Int(1),
                ]),
                Err(FslError::NotReached { .. }) => t.push(vec![
                    Cell::Float(gamma),
                    Cell::Int(label),
                    Cell::Float(f64::NAN),
                    Cell::Int(0),
                ]),
                Err(e) => {
                    return Err(CliError::context(
                        format!("sweep point gamma = {gamma}, initial = {}", initial_name(initial)),
                        e,
                    ))
                }
            }
        }
    }
    Ok(t)
}

fn entropy(config: &ScenarioConfig) -> Result<Table, CliError> {
    let levels = &config.entropy_levels;
    if levels.is_empty() {
        return Err(CliError::config("entropy needs a nonempty level list".into()));
    }
    let gammas = config.resolved_entropy_gammas();
    let cutoff = config.cutoff()?;

    let mut t = Table::new(&["n", "gamma", "s", "s_over_ln2"]);
    t.note("branch_note", "branches are entropy-degenerate; + reported");
    for &n in levels {
        for &gamma in &gammas {
            let params = config.params.with_gamma(gamma)?;
            let (_, eps) = classify_pt_phase(&params, DEFAULT_EP_TOL);
            let s = if eps.contains(&n) {
                // coalesced eigenvector (phi1 + i phi2)/sqrt(2) at the EP is
                // maximally entangled
                std::f64::consts::LN_2
            } else {
                eigenstate_entropy(&params, n, Branch::Plus, &cutoff)?
            };
            t.push(vec![
                Cell::Int(n as i64),
                Cell::Float(gamma),
                Cell::Float(s),
                Cell::Float(s / std::f64::consts::LN_2),
            ]);
        }
    }
    Ok(t)
}
