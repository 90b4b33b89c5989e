use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use qwalk_cli::error::{CliError, Result};
use qwalk_cli::experiments::{find, EXPERIMENTS};
use qwalk_cli::format::{write_table, Format};
use qwalk_cli::{configure_threads, load_config, run_experiment, THREADS_VAR};

fn experiment_list() -> String {
    let mut s = String::from("Experiments:\n");
    for e in EXPERIMENTS {
        s.push_str(&format!("  {:<22}{}\n", e.name, e.about));
    }
    s.push_str(&format!("\nExit codes: 0 ok, 2 config error, 3 property check failed, 4 I/O error.\n{THREADS_VAR} sets the number of worker threads."));
    s
}

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Run discrete-time quantum walk experiments", after_help = experiment_list())]
struct Cli {
    /// Experiment name.
    experiment: String,
    /// INI-like configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set run.steps=50`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output file.
    #[arg(long, required_unless_present = "keys")]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    /// Print the experiment's configuration keys with defaults and exit.
    #[arg(long)]
    keys: bool,
}

fn run(cli: &Cli) -> Result<bool> {
    configure_threads(std::env::var(THREADS_VAR).ok().as_deref())?;
    if cli.keys {
        let exp = find(&cli.experiment).ok_or_else(|| CliError::Config(format!("unknown experiment '{}'", cli.experiment)))?;
        for k in exp.schema() {
            println!("{} = {}    ; {}", k.name, k.default, k.help);
        }
        return Ok(true);
    }
    let format = Format::parse(&cli.format)?;
    let raw = load_config(cli.config.as_deref(), &cli.set)?;
    let start = Instant::now();
    let result = run_experiment(&cli.experiment, &raw)?;
    let out = cli.out.as_deref().expect("clap requires --out");
    write_table(&result.table, format, out)?;
    eprintln!("{}: {} rows in {:.3} s", cli.experiment, result.table.rows().len(), start.elapsed().as_secs_f64());
    for f in &result.failures {
        eprintln!("check failed: {f}");
    }
    Ok(result.failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
