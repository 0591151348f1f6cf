use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swarmlab::{Error, Result};
use swarmlab_cli::commands::{diagnostic, exit_code, read_config};
use swarmlab_cli::{
    analyze_command, compare_command, parse_compare_config, parse_config, parse_tune_config,
    run_command, tune_command, Context,
};

#[derive(Parser)]
#[command(
    name = "swarmlab",
    version,
    about = "Swarm-intelligence optimizers: runs, comparisons, tuning and chain analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimization and write its trace CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Trace path; overrides the config `output`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every config entry over several seeds and print a summary table.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
        /// Table CSV path; overrides the config `output`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid parameter study, optionally followed by self-tuning.
    Tune {
        #[arg(long)]
        config: PathBuf,
    },
    /// Build the empirical Markov chain of a run's snapshots and print lambda2.
    Analyze {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        bins: usize,
        /// Chain CSV path; defaults to `<trace stem>_chain.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(cli: Cli) -> Result<()> {
    let ctx = Context::from_env();
    match cli.command {
        Command::Run { config, seed, out } => {
            let spec = parse_config(&read_config(&config)?)?;
            let summary = run_command(&spec, seed, out.as_deref(), &ctx)?;
            println!("{summary}");
        }
        Command::Compare { config, seeds, out } => {
            let spec = parse_compare_config(&read_config(&config)?)?;
            let table = compare_command(&spec, &seeds)?;
            print!("{}", table.render());
            if let Some(path) = out.or(spec.output) {
                let file = std::fs::File::create(&path)
                    .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
                table.write_csv(std::io::BufWriter::new(file))?;
            }
        }
        Command::Tune { config } => {
            let spec = parse_tune_config(&read_config(&config)?)?;
            let outcome = tune_command(&spec, &ctx)?;
            let winner = outcome.report.winner_point();
            let assignment: Vec<String> = winner
                .assignment
                .iter()
                .map(|(n, v)| format!("{n}={v:.5e}"))
                .collect();
            println!(
                "winner {} median_best={:.5e} iqr={:.5e} runs={} report={}",
                assignment.join(" "),
                winner.median_best,
                winner.dispersion,
                outcome.report.runs,
                outcome.report_path.display()
            );
            if let Some(st) = outcome.self_tuned {
                let assignment: Vec<String> = st
                    .assignment
                    .iter()
                    .map(|(n, v)| format!("{n}={v:.5e}"))
                    .collect();
                println!(
                    "self-tuned {} median_best={:.5e} meta_evaluations={}",
                    assignment.join(" "),
                    st.median_best,
                    st.meta_evaluations
                );
            }
        }
        Command::Analyze { trace, bins, out } => {
            let report = analyze_command(&trace, bins, out.as_deref())?;
            println!(
                "states={} transitions={} lambda2={:.5e} chain={}",
                report.n_states,
                report.transitions,
                report.lambda2,
                report.chain_path.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let first = e
                .to_string()
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            eprintln!("{}", diagnostic(&Error::Config(first)));
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", diagnostic(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
