use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use agesim::cli::{self, CliError};
use agesim::engine::Policy;

/// V2V AoI simulator with per-pair Gaussian-process power and RB allocation.
///
/// Every flag can also be set through an `AGESIM_`-prefixed environment
/// variable (for example `AGESIM_CONFIG`, `AGESIM_SEEDS`, `AGESIM_OUT`).
#[derive(Parser)]
#[command(name = "agesim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML); omitted runs the built-in default scenario.
    #[arg(long, env = "AGESIM_CONFIG")]
    config: Option<PathBuf>,
    /// Comma-separated seeds; omitted uses the config's seed.
    #[arg(long, env = "AGESIM_SEEDS", value_delimiter = ',')]
    seeds: Vec<u64>,
    /// Output directory.
    #[arg(long, env = "AGESIM_OUT")]
    out: PathBuf,
    /// Override the warmup slots excluded from metrics.
    #[arg(long, env = "AGESIM_WARMUP")]
    warmup: Option<u64>,
    /// Candidate actions per decision: 'exhaustive' or a sampling cap.
    #[arg(long, env = "AGESIM_CANDIDATES")]
    candidates: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one policy and write metrics.json, ccdf.csv and manifest.json.
    Run {
        #[command(flatten)]
        common: Common,
        /// Allocation policy to simulate.
        #[arg(long, env = "AGESIM_POLICY", default_value = "proposed")]
        policy: Policy,
        /// Also write the full per-slot trace.csv.
        #[arg(long)]
        trace: bool,
        /// Also write per-slot vehicle positions and link classes.
        #[arg(long)]
        env_trace: bool,
    },
    /// Run proposed, baseline2 and baseline1 per seed and emit comparison.csv.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Sweep the sliding-window size under baseline2 (sweep_m.csv).
    SweepM {
        #[command(flatten)]
        common: Common,
        /// Comma-separated window sizes.
        #[arg(long = "m-list", value_delimiter = ',', required = true)]
        m_list: Vec<usize>,
    },
    /// Sweep the exploration weight under the proposed policy (sweep_alpha.csv).
    SweepAlpha {
        #[command(flatten)]
        common: Common,
        /// Comma-separated exploration weights.
        #[arg(long = "alpha-i-list", value_delimiter = ',', required = true)]
        alpha_i_list: Vec<f64>,
    },
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { common, policy, trace, env_trace } => {
            let cfg = cli::load_config(
                common.config.as_ref(),
                common.warmup,
                common.candidates.as_deref(),
            )?;
            cli::cmd_run_with(&cfg, policy, &common.seeds, &common.out, trace, env_trace)
        }
        Command::Compare { common } => {
            let cfg = cli::load_config(
                common.config.as_ref(),
                common.warmup,
                common.candidates.as_deref(),
            )?;
            cli::cmd_compare(&cfg, &common.seeds, &common.out)
        }
        Command::SweepM { common, m_list } => {
            let cfg = cli::load_config(
                common.config.as_ref(),
                common.warmup,
                common.candidates.as_deref(),
            )?;
            cli::cmd_sweep_m(&cfg, &m_list, &common.seeds, &common.out)
        }
        Command::SweepAlpha { common, alpha_i_list } => {
            let cfg = cli::load_config(
                common.config.as_ref(),
                common.warmup,
                common.candidates.as_deref(),
            )?;
            cli::cmd_sweep_alpha(&cfg, &alpha_i_list, &common.seeds, &common.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("agesim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
