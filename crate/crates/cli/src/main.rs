mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use error::{CliError, CliResult};

const WORKERS_ENV: &str = "SPTGAME_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "sptgame", version, about = "Triangle game on thermal SPT chains: sweeps written as CSV")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum winning probability of the thermal cluster state over sizes and temperatures.
    ClusterExact(ClusterExactArgs),
    /// Ground-state string order and winning probability over a J_X x J_ZZ grid.
    PhaseDiagram(PhaseDiagramArgs),
    /// Free-fermion sweep along the J_X or J_ZZ axis.
    Axis(AxisArgs),
    /// METTS estimates of the game observables.
    Metts(MettsArgs),
    /// Sampled play against the analytic winning probability.
    Game(GameArgs),
    /// Brute-force optimum of the three-player classical game.
    Classical(ClassicalArgs),
}

#[derive(Debug, Args, Serialize)]
struct Common {
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Random seed, recorded in the manifest even when unused.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args, Serialize)]
struct TemperatureGrid {
    #[arg(long, default_value_t = 0.0)]
    tmin: f64,
    #[arg(long, default_value_t = 1.0)]
    tmax: f64,
    #[arg(long, default_value_t = 11)]
    tsteps: usize,
    /// Explicit temperature list `a,b,c` or `a:b:k`; replaces tmin/tmax/tsteps.
    #[arg(long)]
    temps: Option<String>,
}

impl TemperatureGrid {
    fn values(&self) -> CliResult<Vec<f64>> {
        let ts = match &self.temps {
            Some(s) => output::parse_grid(s)?,
            None => output::linspace(self.tmin, self.tmax, self.tsteps)?,
        };
        if let Some(t) = ts.iter().find(|t| **t < 0.0) {
            return Err(CliError::Validation(format!("temperature {t} is negative")));
        }
        Ok(ts)
    }
}

#[derive(Debug, Args, Serialize)]
struct ClusterExactArgs {
    /// System sizes, comma separated.
    #[arg(long, default_value = "64")]
    n: String,
    #[arg(long, default_value_t = 2.0)]
    delta: f64,
    #[command(flatten)]
    temps: TemperatureGrid,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct PhaseDiagramArgs {
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    delta: f64,
    /// J_X grid, `a:b:k` or `a,b,c`.
    #[arg(long, default_value = "0:2:5")]
    jx: String,
    /// J_ZZ grid, `a:b:k` or `a,b,c`.
    #[arg(long, default_value = "0:2:5")]
    jzz: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct AxisArgs {
    /// `x` or `zz`.
    #[arg(long, default_value = "x")]
    axis: String,
    /// Coupling grid along the axis.
    #[arg(long, default_value = "0:1.5:7")]
    j: String,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    delta: f64,
    #[command(flatten)]
    temps: TemperatureGrid,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct MettsArgs {
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    delta: f64,
    #[arg(long, default_value = "0")]
    jx: String,
    #[arg(long, default_value = "0")]
    jzz: String,
    #[command(flatten)]
    temps: TemperatureGrid,
    /// Collapse policy: z, zx, bloch, x or y.
    #[arg(long, default_value = "z")]
    policy: String,
    /// Recorded iterations per point.
    #[arg(long, default_value_t = 110)]
    n_i: usize,
    #[arg(long, default_value_t = 10)]
    warmup: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct GameArgs {
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// `cluster`, `ground` or `thermal-dense`.
    #[arg(long, default_value = "cluster")]
    source: String,
    #[arg(long, default_value_t = 0.0)]
    jx: f64,
    #[arg(long, default_value_t = 0.0)]
    jzz: f64,
    #[arg(long, default_value_t = 2.0)]
    delta: f64,
    /// Temperature of the `thermal-dense` source.
    #[arg(long, default_value_t = 0.5)]
    temperature: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct ClassicalArgs {
    #[command(flatten)]
    common: Common,
}

fn configure_workers() -> CliResult<()> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|w| *w > 0)
        .ok_or_else(|| CliError::Validation(format!("{WORKERS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_workers()?;
    match cli.command {
        Command::ClusterExact(a) => commands::cluster_exact(&a),
        Command::PhaseDiagram(a) => commands::phase_diagram(&a),
        Command::Axis(a) => commands::axis(&a),
        Command::Metts(a) => commands::metts(&a),
        Command::Game(a) => commands::game(&a),
        Command::Classical(a) => commands::classical(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
