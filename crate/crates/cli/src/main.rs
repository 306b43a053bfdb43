//! `psv`: build, check and draw translation surfaces with a prescribed Veech
//! group.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use psv_core::group::GroupError;
use psv_core::io::{IoError, RunConfig};
use psv_core::psv::PsvError;

#[derive(Parser)]
#[command(name = "psv", version, about = "Tame translation surfaces with a prescribed Veech group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cayley ball and end estimates of the group.
    #[command(subcommand)]
    Group(GroupCommand),
    /// The assembled surface.
    #[command(subcommand)]
    Surface(SurfaceCommand),
    /// Veech group inclusion checks.
    #[command(subcommand)]
    Veech(VeechCommand),
    /// Per-sheet SVG drawings and the copy gluing graph.
    Render {
        #[command(flatten)]
        common: Common,
        /// `graph`, `all`, or a sheet label (`base`, `cover`, `buffer1:j`, `buffer2:j`).
        #[arg(long, default_value = "all")]
        target: String,
        /// Copy to draw, by word (`e`, `1.2`, ...).
        #[arg(long, default_value = "e")]
        copy: String,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Write the Cayley ball as JSON and DOT.
    Enumerate(Common),
    /// Component counts of the ball outside radius r, for r = 1..r_max.
    Ends(Common),
}

#[derive(Subcommand)]
enum SurfaceCommand {
    /// Write the surface manifest.
    Build(Common),
    /// Run every validator and write a consolidated report.
    Check(Common),
    /// Ends census over all cut radii.
    Ends(Common),
    /// Trace a geodesic and write it as JSON.
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "e")]
        copy: String,
        #[arg(long, default_value = "base")]
        sheet: String,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, default_value_t = 0)]
        fold: u8,
        /// Developed direction, in radians.
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
    },
}

#[derive(Subcommand)]
enum VeechCommand {
    /// Relabeling check for every ball vertex, and the derivative
    /// constraint for an optional matrix.
    Check {
        #[command(flatten)]
        common: Common,
        /// JSON matrix such as `[["1","2"],["0","1"]]`.
        #[arg(long)]
        matrix: Option<String>,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Generator file: `{"generators": [[["p/q","p/q"],["p/q","p/q"]], ...]}`.
    #[arg(long)]
    group: PathBuf,
    #[arg(long, default_value_t = 3)]
    radius: usize,
    /// Cut radius; `R - 1` when omitted.
    #[arg(long)]
    cut: Option<usize>,
    #[arg(long)]
    max_len: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Common {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut c = RunConfig::new(&self.group, self.radius);
        if let Some(cut) = self.cut {
            c.cut = cut;
            c.r_max = Some(cut);
        }
        if let Some(l) = self.max_len {
            c.max_len = l;
        }
        c.out = self.out.clone();
        c.seed = self.seed;
        c.validate()?;
        Ok(c)
    }
}

/// A failed command: exit code 1 for a failed check, 2 for bad input.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "input",
            message: message.into(),
        }
    }

    pub fn failed(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            kind: "validation",
            message: message.into(),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Psv(p) => p.into(),
            other => CliError::input(other.to_string()),
        }
    }
}

impl From<PsvError> for CliError {
    fn from(e: PsvError) -> Self {
        match e {
            PsvError::Placement(_) | PsvError::Region(_) => CliError {
                code: 1,
                kind: "construction",
                message: e.to_string(),
            },
            other => CliError::input(other.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<psv_core::surface::SurfaceError> for CliError {
    fn from(e: psv_core::surface::SurfaceError) -> Self {
        CliError::input(e.to_string())
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PSV_NUM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input(format!("PSV_NUM_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::input(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Group(GroupCommand::Enumerate(c)) => commands::group_enumerate(&c.config()?),
        Command::Group(GroupCommand::Ends(c)) => commands::group_ends(&c.config()?),
        Command::Surface(SurfaceCommand::Build(c)) => commands::surface_build(&c.config()?),
        Command::Surface(SurfaceCommand::Check(c)) => commands::surface_check(&c.config()?),
        Command::Surface(SurfaceCommand::Ends(c)) => commands::surface_ends(&c.config()?),
        Command::Surface(SurfaceCommand::Trace {
            common,
            copy,
            sheet,
            x,
            y,
            fold,
            angle,
        }) => commands::surface_trace(&common.config()?, &copy, &sheet, (x, y), fold, angle),
        Command::Veech(VeechCommand::Check { common, matrix }) => commands::veech_check(&common.config()?, matrix.as_deref()),
        Command::Render { common, target, copy } => commands::render(&common.config()?, &target, &copy),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::input(e.to_string());
            eprintln!("{}", serde_json::json!({"error": err.kind, "message": err.message.trim_end()}));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", serde_json::json!({"error": err.kind, "message": err.message}));
            ExitCode::from(err.code)
        }
    }
}
