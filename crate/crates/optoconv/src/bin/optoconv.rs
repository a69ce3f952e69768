//! Scenario runner CLI.
//!
//! ```text
//! optoconv <scenario> --config <path> --out <dir> [--set k=v]... [--seed n]
//! ```
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error (including an
//! unknown scenario name). Thread count follows `RAYON_NUM_THREADS`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use optoconv::scenario::{run_scenario, Scenario, SCENARIOS};
use optoconv::Error;

#[derive(Parser, Debug)]
#[command(
    name = "optoconv",
    about = "Microwave-optical converter simulator and analysis toolkit",
    after_help = scenario_list()
)]
struct Cli {
    /// Scenario to run.
    scenario: String,

    /// TOML config file with device parameters (frequencies in Hz).
    #[arg(long)]
    config: PathBuf,

    /// Output directory for CSV/JSON artifacts and the manifest.
    #[arg(long)]
    out: PathBuf,

    /// Dotted-path config overrides, e.g. `--set optical.epsilon=0.9`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Random seed for Monte-Carlo scenarios.
    #[arg(long, default_value_t = 1234)]
    seed: u64,
}

fn scenario_list() -> String {
    format!("Scenarios:\n  {}", SCENARIOS.join("\n  "))
}

fn parse_overrides(raw: &[String]) -> Result<Vec<(String, String)>, String> {
    raw.iter()
        .map(|pair| {
            pair.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| format!("override `{pair}` is not of the form key=value"))
        })
        .collect()
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();

    let overrides = match parse_overrides(&cli.set) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };

    let scenario = Scenario {
        name: cli.scenario,
        config: cli.config,
        out_dir: cli.out,
        overrides,
        seed: cli.seed,
    };

    match run_scenario(&scenario) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::UnknownScenario(name)) => {
            eprintln!("error: unknown scenario `{name}`");
            eprintln!("usage: optoconv <scenario> --config <path> --out <dir> [--set k=v]... [--seed n]");
            eprintln!("{}", scenario_list());
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
