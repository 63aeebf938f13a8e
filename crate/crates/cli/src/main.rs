use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toric_lab::{
    fixture_names, fixture_text, parse_experiment, parse_variety, run_check, run_experiment, run_sections, CliError,
    Variety,
};

/// Toric line bundles: positivity checks, section counts and weight experiments.
#[derive(Parser)]
#[command(name = "toric-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smoothness, Cartier data, positivity verdicts and P_D.
    Check {
        /// Variety file, or `fixture:<name>`.
        variety: String,
        /// Exit with status 1 unless the divisor is ample.
        #[arg(long, conflicts_with = "assert_bpf")]
        assert_ample: bool,
        /// Exit with status 1 unless the divisor is basepoint free.
        #[arg(long)]
        assert_bpf: bool,
    },
    /// Table of `(d, |dP_D ∩ M|)` for `d = 0..=dmax`.
    Sections {
        variety: String,
        #[arg(long)]
        dmax: u32,
        #[arg(long)]
        list_exponents: bool,
    },
    /// Run an experiment file and write a CSV table (`-` for stdout).
    Experiment {
        variety: String,
        experiment: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bundled example varieties.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    List,
    Show { name: String },
}

fn read(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_variety(arg: &str) -> Result<Variety, CliError> {
    let text = match arg.strip_prefix("fixture:") {
        Some(name) => fixture_text(name)?.to_string(),
        None => read(std::path::Path::new(arg))?,
    };
    parse_variety(&text)?.load()
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check {
            variety,
            assert_ample,
            assert_bpf,
        } => {
            let report = run_check(&load_variety(&variety)?)?;
            print!("{report}");
            let failed = (assert_ample && !report.ample) || (assert_bpf && !report.basepoint_free);
            Ok(u8::from(failed))
        }
        Command::Sections {
            variety,
            dmax,
            list_exponents,
        } => {
            print!("{}", run_sections(&load_variety(&variety)?, dmax, list_exponents)?);
            Ok(0)
        }
        Command::Experiment { variety, experiment, out } => {
            let v = load_variety(&variety)?;
            let exp = parse_experiment(&read(&experiment)?)?;
            let csv = run_experiment(&v, &exp)?.to_csv();
            if out.as_os_str() == "-" {
                print!("{csv}");
            } else {
                std::fs::write(&out, csv).map_err(|source| CliError::Io {
                    path: out.display().to_string(),
                    source,
                })?;
            }
            Ok(0)
        }
        Command::Fixtures { action } => {
            match action {
                FixtureAction::List => {
                    for name in fixture_names() {
                        println!("{name}");
                    }
                }
                FixtureAction::Show { name } => print!("{}", fixture_text(&name)?),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
