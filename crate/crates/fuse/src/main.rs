use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use evifuse::report::DEFAULT_PRECISION;
use evifuse::scenario::RuleName;
use evifuse::{check_expected, execute, load, render, DecisionReport, Format, Result, RunOptions};

/// Evidence fusion for threat assessment scenarios.
#[derive(Debug, Parser)]
#[command(name = "fuse", version)]
struct Cli {
    /// Decimals printed in reports.
    #[arg(long, global = true, env = "FUSE_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Runs every pipeline of a scenario and prints the decision report.
    Run {
        /// Scenario file or bundled scenario name.
        scenario: String,
        /// Replaces the rules of every pipeline.
        #[arg(long, value_parser = parse_rule)]
        rule: Option<RuleName>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Compares a run with the expected values embedded in the scenario.
    Tables { scenario: String },
    /// Checks a scenario without running it.
    Validate { scenario: String },
    /// Lists the bundled scenarios.
    List,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    JsonReport,
}

fn parse_rule(s: &str) -> std::result::Result<RuleName, String> {
    RuleName::parse(s).ok_or_else(|| format!("unknown rule `{s}` (expected conj, pcr5 or pcr6)"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the exit code of invalid input.
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, e)) => {
            print!("{out}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> std::result::Result<String, (String, evifuse::FuseError)> {
    let plain = |r: Result<String>| r.map_err(|e| (String::new(), e));
    match cli.command {
        Command::Run {
            scenario,
            rule,
            epsilon,
            format,
        } => plain((|| {
            let s = load(&scenario)?;
            let exec = execute(&s, &RunOptions { rule, epsilon })?;
            let format = match format {
                OutputFormat::Text => Format::Text,
                OutputFormat::JsonReport => Format::Json,
            };
            Ok(render(&DecisionReport::new(&exec), format, cli.precision))
        })()),
        Command::Tables { scenario } => {
            let check = load(&scenario)
                .and_then(|s| execute(&s, &RunOptions::default()))
                .and_then(|exec| check_expected(&exec))
                .map_err(|e| (String::new(), e))?;
            let out = check.render();
            check.into_result().map(|_| out.clone()).map_err(|e| (out, e))
        }
        Command::Validate { scenario } => plain(load(&scenario).map(|s| {
            format!(
                "{}: {} sources, {} pipelines, {} hypotheses\n",
                s.file.name,
                s.sources.len(),
                s.file.pipelines.len(),
                s.hypotheses.len()
            )
        })),
        Command::List => Ok(evifuse::BUNDLED
            .iter()
            .map(|(n, _)| format!("{n}\n"))
            .collect()),
    }
}
