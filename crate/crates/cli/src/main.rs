//! `quasiphase`: phase-space distributions and the linear amplifier from the command line.
//!
//! Grids and reports go to `--out` (or stdout); human-readable diagnostics go to stderr.
//! Exit status is 0 when every check is within tolerance, 1 on a failed check or invalid
//! input, 2 on a usage error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quasiphase::amplifier::{AmplifierChannel, MomentQuery};
use quasiphase::states::StateSpec;
use quasiphase::verify::Suite;

use commands::{DistKind, Route};
use config::{Format, Layer, RunConfig, CONFIG_ENV};

#[derive(Parser)]
#[command(name = "quasiphase", version, about = "Quasi-probability distributions and the linear amplifier channel")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Fock-space dimension, 2..=4096 (default 64).
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Phase-space grid `qmin:qmax:nq,pmin:pmax:np`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Points per axis of automatically sized grids.
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Override a named tolerance, e.g. `--tol=normalization=1e-3`. Repeatable.
    #[arg(long = "tol", global = true, value_parser = config::parse_tolerance)]
    tol: Vec<(String, f64)>,
    #[arg(long, global = true)]
    hbar: Option<f64>,
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Seed of the randomized verification checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat `key = value` config file.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a state and print its density matrix and truncation diagnostics.
    State {
        /// e.g. `coherent:1.0+0.5i`, `thermal:0.5`, `mix:0.5*fock:0,0.5*coherent:2.0`.
        state: StateSpec,
    },
    /// Evaluate an s-parametrized or Cohen-class distribution on a grid.
    Dist {
        state: StateSpec,
        /// Ordering parameter: -1 Husimi, 0 Wigner, 1 Glauber-Sudarshan P.
        #[arg(long = "s", allow_negative_numbers = true, conflicts_with = "kernel")]
        s: Option<f64>,
        /// Cohen kernel: `identity` or `gaussian:<lambda>` (pure states).
        #[arg(long, value_parser = commands::parse_kernel)]
        kernel: Option<quasiphase::quasi::CohenKernel>,
    },
    /// Send a state's Husimi function through the amplifier channel.
    Amplify {
        state: StateSpec,
        /// `gamma=0.5,n0=1,n1=2,t=1`.
        #[arg(long)]
        channel: AmplifierChannel,
    },
    /// Evaluate I_{N,M}(alpha) for queries `N,M,alpha,G,m`.
    Moment {
        #[arg(required = true)]
        queries: Vec<MomentQuery>,
        #[arg(long, value_enum, default_value = "closed")]
        route: Route,
    },
    /// Run a verification suite: algebra, distributions, smoothing, amplifier, moments or all.
    Verify { suite: Suite },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) if outcome.passed() => ExitCode::SUCCESS,
        Ok(outcome) => {
            for v in &outcome.violations {
                eprintln!("FAILED {v}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> quasiphase::error::Result<commands::Outcome> {
    let g = cli.global;
    let file = match &g.config {
        Some(path) => Layer::load(path)?,
        None => Layer::default(),
    };
    let flags = Layer {
        dim: g.dim,
        grid: g.grid,
        grid_points: g.grid_points,
        format: g.format,
        out: g.out,
        hbar: g.hbar,
        lambda: g.lambda,
        seed: g.seed,
        tolerances: g.tol,
    };
    let cfg = RunConfig::resolve(&file, &flags)?;
    log::debug!("dim {} format {} out {:?}", cfg.dim, cfg.format, cfg.out);
    match cli.command {
        Command::State { state } => commands::state(&state, &cfg),
        Command::Dist { state, s, kernel } => {
            let kind = match kernel {
                Some(k) => DistKind::Cohen(k),
                None => DistKind::S(s.unwrap_or(-1.0)),
            };
            commands::dist(&state, &kind, &cfg)
        }
        Command::Amplify { state, channel } => commands::amplify(&state, &channel, &cfg),
        Command::Moment { queries, route } => commands::moment(&queries, route, &cfg),
        Command::Verify { suite } => commands::verify(suite, &cfg),
    }
}
