use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kmsflow::runner::{emit_report, load_scenario, run, Format, RunError, RunOptions};

#[derive(Parser)]
#[command(name = "kmsflow", version, about = "Run operator-algebra scenarios and emit reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every task of a scenario.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Output file. Relative paths resolve against KMSFLOW_OUT_DIR when set;
        /// without --out the report goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Acceptance tolerance, overriding the scenario.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, env = "KMSFLOW_OUT_DIR", hide_env_values = true)]
        out_dir: Option<PathBuf>,
    },
    /// Parse and resolve a scenario without running it.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Text => Format::Text,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

fn resolve_out(out: &Path, dir: Option<&Path>) -> PathBuf {
    match dir {
        Some(d) if out.is_relative() => d.join(out),
        _ => out.to_path_buf(),
    }
}

fn execute(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Validate { scenario } => {
            let s = load_scenario(&scenario)?;
            println!("{}: ok ({} task(s))", scenario.display(), s.tasks.len());
            Ok(0)
        }
        Command::Run { scenario, out, format, tolerance, jobs, out_dir } => {
            let report = run(load_scenario(&scenario)?, RunOptions { tolerance, jobs })?;
            let bytes = emit_report(&report, format.into())?;
            match out {
                Some(path) => {
                    let path = resolve_out(&path, out_dir.as_deref());
                    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                        std::fs::create_dir_all(parent).map_err(|e| RunError::Io(e.to_string()))?;
                    }
                    std::fs::write(&path, &bytes).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
                }
                None => std::io::stdout().write_all(&bytes).map_err(|e| RunError::Io(e.to_string()))?,
            }
            for t in report.tasks.iter().filter_map(|t| t.error.as_ref().map(|e| (t.index, e))) {
                eprintln!("task {} failed: {}", t.0, t.1.message);
            }
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("kmsflow: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
