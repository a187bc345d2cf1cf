//! Command-line driver for the surface-ym library.
//!
//! Every command writes its result to `--out` (through a temporary file and a
//! rename) together with a JSON-lines audit log `<out>.audit.jsonl`.
//!
//! Exit codes: `0` success, `1` input error, `2` solver did not converge,
//! `3` mathematical precondition violated.

mod commands;
mod config;
mod error;
mod persist;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{Outcome, Problem};
use config::{parse_real, RunConfig};
use error::CliError;
use persist::{audit_path, write_atomic};

#[derive(Parser, Debug)]
#[command(name = "surface-ym", version, about = "Representation varieties of surface groups and central Yang-Mills connections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Solver and level-set tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Relative singular-value cutoff for numerical ranks.
    #[arg(long = "rank-tol", default_value_t = 1e-8)]
    rank_tol: f64,
    /// Integrator steps for transports.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    /// Magnus integrator order (2 or 4).
    #[arg(long, default_value_t = 4)]
    order: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run batch tasks on all cores.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args, Debug, Clone)]
struct ProblemArgs {
    /// U1, SU2, SO3, U2, T<n>, or a product such as SU2*U1.
    #[arg(long, default_value = "SU2")]
    group: String,
    #[arg(long, default_value_t = 2)]
    genus: usize,
    /// Central charge coordinates, comma-separated; `pi` suffixes allowed (`2pi`).
    #[arg(long, allow_hyphen_values = true)]
    charge: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Project a Haar-random tuple onto the level set.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Twisted cohomology dimensions of a stored point.
    Cohomology {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Build the model connection of a solved point and read its holonomies back.
    Roundtrip {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Batch of independently seeded solved points.
    Sample {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Histogram of lifting invariants over sampled points.
    Components {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Goldman pairing matrix on H¹ of a stored point.
    Goldman {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Yang-Mills strata with charge norm up to `--bound`; CSV unless `--out` ends in `.json`.
    Strata {
        #[arg(long, default_value = "SU2")]
        group: String,
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value = "4pi")]
        bound: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Holonomy of the model connection around a square disk.
    Holonomy {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 0.25)]
        area: f64,
        /// Factor applied to the potential.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Cohomology { .. } => "cohomology",
            Command::Roundtrip { .. } => "roundtrip",
            Command::Sample { .. } => "sample",
            Command::Components { .. } => "components",
            Command::Goldman { .. } => "goldman",
            Command::Strata { .. } => "strata",
            Command::Holonomy { .. } => "holonomy",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Command::Solve { common, .. }
            | Command::Cohomology { common, .. }
            | Command::Roundtrip { common, .. }
            | Command::Sample { common, .. }
            | Command::Components { common, .. }
            | Command::Goldman { common, .. }
            | Command::Strata { common, .. }
            | Command::Holonomy { common, .. } => common,
        }
    }
}

fn problem(p: &ProblemArgs) -> Problem {
    Problem { group: p.group.clone(), genus: p.genus, charge: p.charge.clone() }
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Solve { problem: p, .. } => commands::solve(&problem(p), cfg),
        Command::Cohomology { input, .. } => commands::cohomology(input, cfg),
        Command::Roundtrip { problem: p, .. } => commands::roundtrip(&problem(p), cfg),
        Command::Sample { problem: p, count, .. } => commands::sample(&problem(p), cfg, *count),
        Command::Components { problem: p, count, .. } => commands::components(&problem(p), cfg, *count),
        Command::Goldman { input, .. } => commands::goldman(input, cfg),
        Command::Strata { group, genus, bound, .. } => commands::strata(group, *genus, parse_real(bound)?, cfg),
        Command::Holonomy { problem: p, area, scale, .. } => commands::holonomy(&problem(p), cfg, *area, *scale),
    }
}

fn run(cmd: &Command) -> Result<(), CliError> {
    let started = Instant::now();
    let c = cmd.common();
    let cfg = RunConfig {
        seed: c.seed,
        tol: c.tol,
        rank_tol: c.rank_tol,
        steps: c.steps,
        order: c.order,
        out: c.out.clone(),
        parallel: c.parallel,
    };
    cfg.validate()?;
    let mut outcome = dispatch(cmd, &cfg)?;
    if let Some(out) = &cfg.out {
        if let Some(contents) = &outcome.file {
            write_atomic(out, contents)?;
        }
        let mut audit = persist::Audit::default();
        audit.event("config", &json!({ "command": cmd.name(), "config": cfg }));
        audit.extend(std::mem::take(&mut outcome.audit));
        audit.event("finish", &json!({ "wall_time_s": started.elapsed().as_secs_f64(), "exit_code": 0 }));
        write_atomic(&audit_path(out), &audit.render())?;
    }
    print!("{}", outcome.stdout);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
