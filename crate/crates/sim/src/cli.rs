//! Command-line front end. [`run`] returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{load_config, SweepConfig};
use crate::error::Result;
use crate::output::{emit, write_gnuplot_sidecar, Format};
use crate::presets::{preset, preset_names};
use crate::selfcheck::run_checks;
use crate::sweep::run_sweep;

#[derive(Debug, Parser)]
#[command(name = "blockade-sim", version, about = "Parameter sweeps of photon blockade in a pumped cavity-atom system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a sweep described by a TOML file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run one of the built-in sweeps.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(preset_names().collect::<Vec<_>>()))]
        name: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the numerical self-test.
    Check,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to the extension of `--out`.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, env = "BLOCKADE_SIM_JOBS", default_value_t = 0)]
    pub jobs: usize,
    /// Overrides the photon-number truncation of the configuration.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Also write a gnuplot script next to the output.
    #[arg(long)]
    pub plot: bool,
}

impl OutputArgs {
    fn format(&self) -> Format {
        match self.format {
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Jsonl) => Format::JsonLines,
            None => Format::from_path(&self.out),
        }
    }
}

fn execute_sweep(mut config: SweepConfig, args: &OutputArgs) -> Result<String> {
    if let Some(n) = args.n_max {
        config.n_max = n;
        config.validate()?;
    }
    let records = run_sweep(&config, args.jobs)?;
    let format = args.format();
    emit(&records, format, &args.out)?;
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    let mut summary = format!("wrote {} records to {}", records.len(), args.out.display());
    if failed > 0 {
        summary.push_str(&format!(" ({failed} with errors)"));
    }
    if args.plot {
        if format == Format::Csv {
            let script = write_gnuplot_sidecar(&config, &args.out)?;
            summary.push_str(&format!("\nwrote {}", script.display()));
        } else {
            summary.push_str("\nskipped plot script: it needs CSV output");
        }
    }
    Ok(summary)
}

fn load(path: &Path) -> Result<SweepConfig> {
    load_config(path)
}

/// Parses `args` (including the program name) and runs the command.
/// Exit codes: 0 success, 1 bad input or failed check, 2 I/O or runtime failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Sweep { config, output } => load(config).and_then(|c| execute_sweep(c, output)),
        Command::Preset { name, output } => preset(name).and_then(|c| execute_sweep(c, output)),
        Command::Check => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            return match run_checks(&mut lock) {
                Ok(true) => 0,
                Ok(false) => 1,
                Err(_) => 2,
            };
        }
    };
    match outcome {
        Ok(summary) => {
            let _ = writeln!(std::io::stdout(), "{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
