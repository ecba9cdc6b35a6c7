use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relmech::scenario::{self, ExitStatus, Scenario, ScenarioError};

/// Integrate mechanical systems and certify energy conservation.
#[derive(Parser)]
#[command(name = "relmech", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write trajectory, report and summary.
    Run {
        /// Scenario file, or the name of a builtin.
        file: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the sampling seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the diagnostics only, without writing files.
    Check {
        file: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the builtin scenarios.
    Scenarios {
        #[arg(long)]
        verbose: bool,
    },
    /// Run several scenarios and print a summary table.
    Batch {
        files: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write each scenario's outputs under this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Append every builtin to the run list.
        #[arg(long)]
        all_builtins: bool,
    },
}

/// A path that exists is loaded; otherwise a builtin of that name is used.
fn resolve(arg: &str) -> Result<Scenario, ScenarioError> {
    if !Path::new(arg).exists() {
        if let Some(s) = scenario::builtin(arg) {
            return Ok(s);
        }
    }
    scenario::load_scenario(arg)
}

fn exit(status: ExitStatus) -> ExitCode {
    ExitCode::from(status.code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit(ExitStatus::Error) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Run { file, out, seed } => {
            let result = resolve(&file).and_then(|s| scenario::run(&s, &out, seed));
            match result {
                Ok(r) => {
                    for o in &r.evaluation.outcomes {
                        println!(
                            "{}: {} (measured {:.6e}, threshold {:.6e}, expected {})",
                            o.check,
                            o.outcome.as_str(),
                            o.measured,
                            o.threshold,
                            o.expected
                        );
                    }
                    println!("wrote {}", r.dir.display());
                    exit(r.status())
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit(ExitStatus::Error)
                }
            }
        }
        Command::Check { file, seed } => match resolve(&file).and_then(|s| {
            let ev = scenario::evaluate(&s, seed, false)?;
            Ok((scenario::render_report(&s, &ev), ev.status()))
        }) {
            Ok((text, status)) => {
                print!("{text}");
                exit(status)
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit(ExitStatus::Error)
            }
        },
        Command::Scenarios { verbose } => {
            print!("{}", scenario::list_scenarios(verbose));
            ExitCode::SUCCESS
        }
        Command::Batch {
            mut files,
            jobs,
            out,
            seed,
            all_builtins,
        } => {
            if all_builtins {
                files.extend(scenario::builtin_names().map(String::from));
            }
            let inputs: Vec<_> = files.iter().map(|f| (f.clone(), resolve(f))).collect();
            let report = scenario::batch(&inputs, jobs, out.as_deref(), seed);
            print!("{}", report.table());
            for e in &report.errors {
                eprintln!("error: {e}");
            }
            exit(report.status)
        }
    }
}
