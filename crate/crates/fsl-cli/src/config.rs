//! Scenario configuration: a flat, typed key-value document.
//!
//! The same `key = value` syntax appears in config files and, prefixed with
//! `# `, in every output header. Stripping the prefix from a header yields a
//! config that reproduces the run.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use fsl_core::dynamics::InitialState;
use fsl_core::{FockCutoff, ModelParams, Spin};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    SpectrumHermitian,
    SpectrumIsotropic,
    SpectrumNh,
    ZeroMode,
    Evolve,
    StabilizationSweep,
    EigenstateEntropy,
    Validate,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::SpectrumHermitian => "spectrum_hermitian",
            Scenario::SpectrumIsotropic => "spectrum_isotropic",
            Scenario::SpectrumNh => "spectrum_nh",
            Scenario::ZeroMode => "zero_mode",
            Scenario::Evolve => "evolve",
            Scenario::StabilizationSweep => "stabilization_sweep",
            Scenario::EigenstateEntropy => "eigenstate_entropy",
            Scenario::Validate => "validate",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "spectrum_hermitian" => Scenario::SpectrumHermitian,
            "spectrum_isotropic" => Scenario::SpectrumIsotropic,
            "spectrum_nh" => Scenario::SpectrumNh,
            "zero_mode" => Scenario::ZeroMode,
            "evolve" => Scenario::Evolve,
            "stabilization_sweep" => Scenario::StabilizationSweep,
            "eigenstate_entropy" => Scenario::EigenstateEntropy,
            "validate" => Scenario::Validate,
            other => return Err(CliError::config(format!("unknown scenario `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

pub fn parse_format(s: &str) -> Result<OutputFormat, CliError> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(CliError::config(format!(
            "unknown format `{other}` (expected csv or json)"
        ))),
    }
}

/// `fock:50,down` | `coherent:-5,up` | `displaced:3,up`
pub fn parse_initial(s: &str) -> Result<InitialState, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| CliError::config(format!("initial state `{s}` is missing `:`")))?;
    let (value, spin) = rest
        .split_once(',')
        .ok_or_else(|| CliError::config(format!("initial state `{s}` is missing `,spin`")))?;
    let spin = match spin.trim() {
        "up" => Spin::Up,
        "down" => Spin::Down,
        other => return Err(CliError::config(format!("unknown spin `{other}`"))),
    };
    let value = value.trim();
    match kind.trim() {
        "fock" => Ok(InitialState::Fock {
            n: value
                .parse()
                .map_err(|_| CliError::config(format!("bad Fock index `{value}`")))?,
            spin,
        }),
        "coherent" => Ok(InitialState::Coherent {
            alpha: value
                .parse()
                .map_err(|_| CliError::config(format!("bad coherent amplitude `{value}`")))?,
            spin,
        }),
        "displaced" => Ok(InitialState::DisplacedFock {
            n: value
                .parse()
                .map_err(|_| CliError::config(format!("bad displaced index `{value}`")))?,
            spin,
        }),
        other => Err(CliError::config(format!(
            "unknown initial-state kind `{other}` (expected fock, coherent, or displaced)"
        ))),
    }
}

pub fn initial_name(state: &InitialState) -> String {
    match state {
        InitialState::Fock { n, spin } => format!("fock:{n},{spin}"),
        InitialState::Coherent { alpha, spin } => format!("coherent:{alpha},{spin}"),
        InitialState::DisplacedFock { n, spin } => format!("displaced:{n},{spin}"),
    }
}

/// `0.02:0.6:0.02` (start:stop:step, inclusive) or a comma list.
pub fn parse_value_list(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let bad = || CliError::config(format!("bad range `{s}` (want start:stop:step)"));
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let step: f64 = parts[2].trim().parse().map_err(|_| bad())?;
        if step <= 0.0 || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 0.5).floor() as usize;
        return Ok((0..=count).map(|k| start + step * k as f64).collect());
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| CliError::config(format!("bad number `{v}`")))
        })
        .collect()
}

/// Fully resolved run configuration. Every field that shaped the output is
/// echoed back into the header.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub params: ModelParams,
    pub n_max: Option<usize>,
    pub tail_tol: f64,
    pub n_levels: Option<usize>,
    pub cells: usize,
    pub initial: InitialState,
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
    pub gammas: Vec<f64>,
    pub initials: Vec<InitialState>,
    pub top_modes: usize,
    pub threshold: f64,
    pub t_max: f64,
    pub entropy_levels: Vec<usize>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub stamp_header: bool,
}

impl ScenarioConfig {
    pub fn defaults(scenario: Scenario) -> Self {
        Self {
            scenario,
            params: ModelParams::new(1.0, 0.2, 0.0).expect("defaults are valid"),
            n_max: None,
            tail_tol: fsl_core::fock::DEFAULT_TAIL_TOL,
            n_levels: None,
            cells: 50,
            initial: InitialState::Fock {
                n: 50,
                spin: Spin::Down,
            },
            t_start: 0.0,
            t_end: 80.0,
            samples: 801,
            gammas: Vec::new(),
            initials: Vec::new(),
            top_modes: 5,
            threshold: fsl_core::dynamics::DEFAULT_TAU_THRESHOLD,
            t_max: 5000.0,
            entropy_levels: (0..=5).collect(),
            out: None,
            format: OutputFormat::Csv,
            stamp_header: false,
        }
    }

    /// Cutoff for this run: explicit `n_max` override, or the sizing policy
    /// driven by what the scenario actually populates.
    pub fn cutoff(&self) -> Result<FockCutoff, CliError> {
        let n_init = match self.scenario {
            Scenario::ZeroMode => 0,
            Scenario::EigenstateEntropy => {
                self.entropy_levels.iter().max().map(|m| m + 1).unwrap_or(1)
            }
            _ => self.initial.n_init_estimate(self.params.alpha()),
        };
        let policy = FockCutoff::for_model(&self.params, n_init);
        match self.n_max {
            None => Ok(policy),
            Some(n_max) => Ok(FockCutoff::new(n_max, self.tail_tol)?
                .with_active_band(policy.n_active().min(n_max / 2))),
        }
    }

    /// The resolved key-value document (header echo and reproduction input).
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = vec![
            ("scenario".into(), self.scenario.name().into()),
            ("j1".into(), fmt_f64(self.params.j1())),
            ("j2".into(), fmt_f64(self.params.j2())),
            ("gamma".into(), fmt_f64(self.params.gamma())),
        ];
        match self.scenario {
            Scenario::SpectrumIsotropic => {
                kv.push(("cells".into(), self.cells.to_string()));
            }
            Scenario::SpectrumHermitian | Scenario::SpectrumNh => {
                kv.push(("n_levels".into(), self.resolved_n_levels_free().to_string()));
            }
            Scenario::ZeroMode => {
                self.push_cutoff_entries(&mut kv);
            }
            Scenario::Evolve => {
                self.push_cutoff_entries(&mut kv);
                kv.push(("initial".into(), initial_name(&self.initial)));
                kv.push(("t_start".into(), fmt_f64(self.t_start)));
                kv.push(("t_end".into(), fmt_f64(self.t_end)));
                kv.push(("samples".into(), self.samples.to_string()));
                kv.push(("top_modes".into(), self.top_modes.to_string()));
            }
            Scenario::StabilizationSweep => {
                kv.push((
                    "gammas".into(),
                    self.gammas
                        .iter()
                        .map(|g| fmt_f64(*g))
                        .collect::<Vec<_>>()
                        .join(","),
                ));
                kv.push((
                    "initials".into(),
                    self.initials
                        .iter()
                        .map(initial_name)
                        .collect::<Vec<_>>()
                        .join(" "),
                ));
                kv.push(("threshold".into(), fmt_f64(self.threshold)));
                kv.push(("t_max".into(), fmt_f64(self.t_max)));
            }
            Scenario::EigenstateEntropy => {
                if let Ok(c) = self.cutoff() {
                    kv.push(("n_max".into(), c.n_max().to_string()));
                    kv.push(("tail_tol".into(), fmt_f64(c.tail_tol())));
                }
                kv.push((
                    "entropy_levels".into(),
                    self.entropy_levels
                        .iter()
                        .map(|n| n.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                ));
                kv.push((
                    "gammas".into(),
                    self.resolved_entropy_gammas()
                        .iter()
                        .map(|g| fmt_f64(*g))
                        .collect::<Vec<_>>()
                        .join(","),
                ));
            }
            Scenario::Validate => {}
        }
        kv.push(("format".into(), self.format.name().into()));
        kv
    }

    fn push_cutoff_entries(&self, kv: &mut Vec<(String, String)>) {
        if let Ok(c) = self.cutoff() {
            kv.push(("n_max".into(), c.n_max().to_string()));
            kv.push(("tail_tol".into(), fmt_f64(c.tail_tol())));
            kv.push(("n_levels".into(), self.resolved_n_levels(&c).to_string()));
        }
    }

    /// Retained blocks for spectra that never materialize states.
    pub fn resolved_n_levels_free(&self) -> usize {
        self.n_levels.unwrap_or(50)
    }

    /// Entropy gamma grid: explicit values, or gamma/j2 in (0, 3] by 0.025.
    pub fn resolved_entropy_gammas(&self) -> Vec<f64> {
        if !self.gammas.is_empty() {
            return self.gammas.clone();
        }
        let j2 = self.params.j2().abs();
        (1..=120).map(|k| j2 * 0.025 * k as f64).collect()
    }

    /// Retained blocks for runs on a concrete cutoff.
    pub fn resolved_n_levels(&self, cutoff: &FockCutoff) -> usize {
        self.n_levels
            .unwrap_or(cutoff.n_active())
            .min(cutoff.n_active())
    }

    /// Apply one parsed config-file entry.
    pub fn apply_entry(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad_num = |k: &str, v: &str| CliError::config(format!("bad number for `{k}`: `{v}`"));
        match key {
            "scenario" => {
                let s = Scenario::parse(value)?;
                if s != self.scenario {
                    return Err(CliError::config(format!(
                        "config is for scenario `{}`, command expects `{}`",
                        s.name(),
                        self.scenario.name()
                    )));
                }
            }
            "j1" => {
                let j1: f64 = value.parse().map_err(|_| bad_num(key, value))?;
                self.params = ModelParams::new(j1, self.params.j2(), self.params.gamma())?;
            }
            "j2" => {
                let j2: f64 = value.parse().map_err(|_| bad_num(key, value))?;
                self.params = ModelParams::new(self.params.j1(), j2, self.params.gamma())?;
            }
            "gamma" => {
                let g: f64 = value.parse().map_err(|_| bad_num(key, value))?;
                self.params = ModelParams::new(self.params.j1(), self.params.j2(), g)?;
            }
            "n_max" => self.n_max = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "tail_tol" => self.tail_tol = value.parse().map_err(|_| bad_num(key, value))?,
            "n_levels" => self.n_levels = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "cells" => self.cells = value.parse().map_err(|_| bad_num(key, value))?,
            "initial" => self.initial = parse_initial(value)?,
            "t_start" => self.t_start = value.parse().map_err(|_| bad_num(key, value))?,
            "t_end" => self.t_end = value.parse().map_err(|_| bad_num(key, value))?,
            "samples" => self.samples = value.parse().map_err(|_| bad_num(key, value))?,
            "gammas" => self.gammas = parse_value_list(value)?,
            "initials" => {
                self.initials = value
                    .split_whitespace()
                    .map(parse_initial)
                    .collect::<Result<_, _>>()?;
            }
            "top_modes" => self.top_modes = value.parse().map_err(|_| bad_num(key, value))?,
            "threshold" => self.threshold = value.parse().map_err(|_| bad_num(key, value))?,
            "t_max" => self.t_max = value.parse().map_err(|_| bad_num(key, value))?,
            "entropy_levels" => {
                self.entropy_levels = value
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse()
                            .map_err(|_| CliError::config(format!("bad level `{v}`")))
                    })
                    .collect::<Result<_, _>>()?;
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = parse_format(value)?,
            other => {
                return Err(CliError::config(format!("unknown config key `{other}`")));
            }
        }
        Ok(())
    }

    /// Load `key = value` lines over the current values.
    pub fn load_file(&mut self, path: &std::path::Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            if let Some(first) = seen.insert(key.to_string(), lineno + 1) {
                return Err(CliError::config(format!(
                    "{}:{}: key `{key}` already set on line {first}",
                    path.display(),
                    lineno + 1
                )));
            }
            self.apply_entry(key, value.trim()).map_err(|e| {
                CliError::config(format!("{}:{}: {e}", path.display(), lineno + 1))
            })?;
        }
        Ok(())
    }

    /// Header block: the resolved config as `# key = value` lines.
    pub fn header(&self, extra: &[(String, String)]) -> String {
        let mut out = String::new();
        for (k, v) in self.entries().iter().chain(extra) {
            let _ = writeln!(out, "# {k} = {v}");
        }
        if self.stamp_header {
            let stamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs().to_string())
                .unwrap_or_default();
            let _ = writeln!(out, "# generated_unix = {stamp}");
        }
        out
    }
}

/// Shortest round-trip float formatting; scientific for extreme magnitudes.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}
