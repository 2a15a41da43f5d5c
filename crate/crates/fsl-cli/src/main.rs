//! `fsl`: command-line runner for the Fock-state-lattice SSH chain.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical guard tripped
//! (cutoff too small, threshold not reached, ...), 3 internal invariant
//! failure.

mod config;
mod figures;
mod output;
mod scenarios;
mod validate;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{parse_format, parse_initial, parse_value_list, Scenario, ScenarioConfig};
use fsl_core::{FslError, ModelParams};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core {
        context: Option<String>,
        source: FslError,
    },
}

impl CliError {
    pub fn config(message: String) -> Self {
        CliError::Config(message)
    }

    pub fn context(context: String, source: FslError) -> Self {
        CliError::Core {
            context: Some(context),
            source,
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Core { source, .. } => match source {
                FslError::InvalidConfig(_) => 1,
                FslError::Linalg(_) => 3,
                _ => 2,
            },
        }
    }
}

impl From<FslError> for CliError {
    fn from(source: FslError) -> Self {
        CliError::Core {
            context: None,
            source,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Core {
                context: Some(c),
                source,
            } => write!(f, "{c}: {source}"),
            CliError::Core {
                context: None,
                source,
            } => write!(f, "{source}"),
        }
    }
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Config file with `key = value` lines; explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Intracell coupling.
    #[arg(long)]
    j1: Option<f64>,
    /// Intercell coupling scale (nonzero).
    #[arg(long)]
    j2: Option<f64>,
    /// Gain/loss rate (non-negative).
    #[arg(long)]
    gamma: Option<f64>,
    /// Fock truncation override; defaults to a policy sized by the initial state.
    #[arg(long)]
    n_max: Option<usize>,
    /// Acceptable truncated-probability tail.
    #[arg(long)]
    tail_tol: Option<f64>,
    /// Retained eigenmode blocks.
    #[arg(long)]
    n_levels: Option<usize>,
    /// Output path; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Embed a generation timestamp in headers (off keeps output byte-stable).
    #[arg(long)]
    stamp_header: bool,
}

#[derive(Parser)]
#[command(
    name = "fsl",
    version,
    about = "Semi-infinite Fock-state-lattice SSH chain: spectra, non-Hermitian dynamics, and validation",
    subcommand_required = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue spectrum: analytic chain, gain/loss chain, or finite isotropic reference.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        /// hermitian | nh | isotropic
        #[arg(long, default_value = "hermitian")]
        kind: String,
        /// Unit cells of the isotropic reference chain.
        #[arg(long)]
        cells: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Boson-number profile of the topological zero mode.
    #[command(allow_negative_numbers = true)]
    ZeroMode {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Propagate an initial state and record observables over a time grid.
    #[command(allow_negative_numbers = true)]
    Evolve {
        /// fock:N,spin | coherent:A,spin | displaced:N,spin (spin: up|down)
        #[arg(long)]
        initial: Option<String>,
        #[arg(long)]
        t_start: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Mode-projection columns to emit, ranked by initial weight.
        #[arg(long)]
        top_modes: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Stabilization-time sweep over gamma values and initial states.
    #[command(allow_negative_numbers = true)]
    SweepTau {
        /// Range start:stop:step or comma list.
        #[arg(long)]
        gammas: Option<String>,
        /// Whitespace-separated initial-state specs.
        #[arg(long)]
        initials: Option<String>,
        /// Bound-projection threshold defining tau.
        #[arg(long)]
        threshold: Option<f64>,
        /// Search window.
        #[arg(long)]
        t_max: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Eigenstate entanglement entropy against gamma.
    #[command(allow_negative_numbers = true)]
    Entropy {
        /// Comma list of block indices.
        #[arg(long)]
        levels: Option<String>,
        /// Range start:stop:step or comma list; defaults to gamma/j2 in (0, 3].
        #[arg(long)]
        gammas: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write the data files behind one figure bundle.
    #[command(allow_negative_numbers = true)]
    Figures {
        /// fig2 | fig3 | fig4 | figA1
        #[arg(long)]
        which: String,
        #[arg(long, default_value = "figures")]
        out_dir: PathBuf,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        stamp_header: bool,
    },
    /// Run the numerical invariant suite; exits 0 iff every check passes.
    Validate,
}

fn base_config(scenario: Scenario, common: &CommonArgs) -> Result<ScenarioConfig, CliError> {
    let mut cfg = ScenarioConfig::defaults(scenario);
    if let Some(path) = &common.config {
        cfg.load_file(path)?;
    }
    let p = cfg.params;
    let (j1, j2, gamma) = (
        common.j1.unwrap_or(p.j1()),
        common.j2.unwrap_or(p.j2()),
        common.gamma.unwrap_or(p.gamma()),
    );
    cfg.params = ModelParams::new(j1, j2, gamma)?;
    if let Some(v) = common.n_max {
        cfg.n_max = Some(v);
    }
    if let Some(v) = common.tail_tol {
        cfg.tail_tol = v;
    }
    if let Some(v) = common.n_levels {
        cfg.n_levels = Some(v);
    }
    if let Some(v) = &common.out {
        cfg.out = Some(v.clone());
    }
    if let Some(v) = &common.format {
        cfg.format = parse_format(v)?;
    }
    if common.stamp_header {
        cfg.stamp_header = true;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum {
            kind,
            cells,
            common,
        } => {
            let scenario = match kind.as_str() {
                "hermitian" => Scenario::SpectrumHermitian,
                "nh" => Scenario::SpectrumNh,
                "isotropic" => Scenario::SpectrumIsotropic,
                other => {
                    return Err(CliError::config(format!(
                        "unknown spectrum kind `{other}` (hermitian | nh | isotropic)"
                    )))
                }
            };
            let mut cfg = base_config(scenario, &common)?;
            if let Some(c) = cells {
                cfg.cells = c;
            }
            scenarios::run(&cfg)
        }
        Command::ZeroMode { common } => {
            let cfg = base_config(Scenario::ZeroMode, &common)?;
            scenarios::run(&cfg)
        }
        Command::Evolve {
            initial,
            t_start,
            t_end,
            samples,
            top_modes,
            common,
        } => {
            let mut cfg = base_config(Scenario::Evolve, &common)?;
            if let Some(s) = &initial {
                cfg.initial = parse_initial(s)?;
            }
            if let Some(v) = t_start {
                cfg.t_start = v;
            }
            if let Some(v) = t_end {
                cfg.t_end = v;
            }
            if let Some(v) = samples {
                cfg.samples = v;
            }
            if let Some(v) = top_modes {
                cfg.top_modes = v;
            }
            scenarios::run(&cfg)
        }
        Command::SweepTau {
            gammas,
            initials,
            threshold,
            t_max,
            common,
        } => {
            let mut cfg = base_config(Scenario::StabilizationSweep, &common)?;
            if let Some(s) = &gammas {
                cfg.gammas = parse_value_list(s)?;
            }
            if let Some(s) = &initials {
                cfg.initials = s
                    .split_whitespace()
                    .map(parse_initial)
                    .collect::<Result<_, _>>()?;
            }
            if let Some(v) = threshold {
                cfg.threshold = v;
            }
            if let Some(v) = t_max {
                cfg.t_max = v;
            }
            scenarios::run(&cfg)
        }
        Command::Entropy {
            levels,
            gammas,
            common,
        } => {
            let mut cfg = base_config(Scenario::EigenstateEntropy, &common)?;
            if let Some(s) = &levels {
                cfg.entropy_levels = s
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse()
                            .map_err(|_| CliError::config(format!("bad level `{v}`")))
                    })
                    .collect::<Result<_, _>>()?;
            }
            if let Some(s) = &gammas {
                cfg.gammas = parse_value_list(s)?;
            }
            scenarios::run(&cfg)
        }
        Command::Figures {
            which,
            out_dir,
            format,
            stamp_header,
        } => {
            let figure = figures::Figure::parse(&which)?;
            let format = match &format {
                Some(f) => parse_format(f)?,
                None => config::OutputFormat::Csv,
            };
            figures::emit_figure_bundle(figure, &out_dir, format, stamp_header)
        }
        Command::Validate => {
            let ok = validate::run().map_err(CliError::from)?;
            if ok {
                Ok(())
            } else {
                eprintln!("validation failed");
                std::process::exit(3);
            }
        }
    }
}

fn main() {
    // flag and usage problems are configuration errors (exit 1); help and
    // version output are success
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return;
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
