//! `nodal`: build, extract and verify nodal sets from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or config error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod cmd;
mod config;
mod output;

use config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "nodal", version, about = "Nodal sets of spherical harmonics and planar eigenfunctions")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug)]
struct Flags {
    /// Flat `key = value` config file, applied before the flags below.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override any config key, e.g. `--set radius=20`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Finest grid (columns) allowed during refinement.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// First ε tried by the oval construction.
    #[arg(long, global = true)]
    eps_start: Option<f64>,
    /// First t tried by the Lewy lift.
    #[arg(long, global = true)]
    t_start: Option<f64>,
    /// Trial budget for realization searches.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long, global = true, overrides_with = "no_svg")]
    svg: bool,
    #[arg(long, global = true)]
    no_svg: bool,
    /// Smaller sweeps and coarser grids.
    #[arg(long, global = true)]
    quick: bool,
    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Perturbed harmonic of degree N with many nodal ovals.
    Ovals {
        n: u32,
        /// Fix the azimuthal rotation angle instead of the default midpoint.
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<f64>,
    },
    /// Planar solution of Δu = u with two nodal domains.
    Planar {
        #[arg(long)]
        delta1: Option<f64>,
        #[arg(long)]
        delta2: Option<f64>,
        /// Use this ε as is (0 gives the unperturbed function).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Lift a planar polynomial to a spherical harmonic.
    Lewy { polyfile: PathBuf },
    /// Enumerate chord diagrams of 2N points and glue them antipodally.
    Diagrams {
        n: usize,
        /// Also search for polynomials realizing each diagram.
        #[arg(long)]
        realize: bool,
    },
    /// Run the randomized verification sweeps.
    Verify {
        /// Test hook: corrupt one named check so the harness must fail.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Special-function tables.
    Specfun {
        #[command(subcommand)]
        what: SpecfunCommand,
    },
}

#[derive(Subcommand, Debug)]
enum SpecfunCommand {
    /// Positive zeros of J0 or J1.
    DumpZeros {
        #[arg(long, default_value_t = 1)]
        order: u32,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

pub fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn load_config(flags: &Flags) -> anyhow::Result<RunConfig> {
    let mut c = RunConfig::default();
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("reading config {}: {e}", path.display()))?;
        c.apply_text(&text)?;
    }
    for kv in &flags.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| anyhow::anyhow!("--set expects KEY=VALUE, got {kv:?}"))?;
        c.set(k.trim(), v.trim())?;
    }
    if let Some(v) = flags.resolution {
        c.resolution = v;
    }
    if let Some(v) = flags.seed {
        c.seed = v;
    }
    if let Some(v) = flags.eps_start {
        c.eps_start = v;
    }
    if let Some(v) = flags.t_start {
        c.t_start = v;
    }
    if let Some(v) = flags.budget {
        c.budget = v;
    }
    if let Some(v) = &flags.out {
        c.out = v.clone();
    }
    if let Some(v) = &flags.format {
        c.format = v.parse::<Format>()?;
    }
    if flags.svg {
        c.svg = true;
    }
    if flags.no_svg {
        c.svg = false;
    }
    if flags.quick {
        c.quick = true;
    }
    Ok(c)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let mut config = load_config(&cli.flags).map_err(|e| CliError::Usage(format!("{e:#}")))?;
    if let Some(Command::Planar { delta1, delta2, radius, .. }) = &cli.command {
        config.delta1 = delta1.unwrap_or(config.delta1);
        config.delta2 = delta2.unwrap_or(config.delta2);
        config.radius = radius.unwrap_or(config.radius);
    }
    config.validate().map_err(|e| CliError::Usage(format!("{e:#}")))?;
    if cli.flags.print_config {
        print!("{}", config.render());
        return Ok(true);
    }
    match cli.command {
        None => usage("no command given; see --help"),
        Some(Command::Ovals { n, psi }) => cmd::ovals::run(n, psi, &config),
        Some(Command::Planar { epsilon, .. }) => cmd::planar::run(epsilon, &config),
        Some(Command::Lewy { polyfile }) => cmd::lewy::run(&polyfile, &config),
        Some(Command::Diagrams { n, realize }) => cmd::diagrams::run(n, realize, &config),
        Some(Command::Verify { inject_fault }) => cmd::verify::run(inject_fault.as_deref(), &config),
        Some(Command::Specfun { what: SpecfunCommand::DumpZeros { order, count } }) => {
            cmd::specfun::dump_zeros(order, count, &config)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
