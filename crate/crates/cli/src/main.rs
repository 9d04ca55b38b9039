use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pwi_core::output::OutputFormat;
use pwi_core::pipeline::{self, RunConfig};
use pwi_core::{DistanceMode, Error, ExportFormat, PwiOptions};

/// Prize Winner Index: score authors by co-authorship distance to laureates.
#[derive(Parser, Debug)]
#[command(name = "pwi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every author key with paper and co-author counts.
    ListAuthors(Common),
    /// Compute the PWI table.
    Compute {
        #[command(flatten)]
        common: Common,
        /// Also write the co-authorship edge list to this CSV file.
        #[arg(long, value_name = "PATH")]
        edges: Option<PathBuf>,
    },
    /// Spearman correlation between PWI and an external score per paper threshold.
    Correlate {
        #[command(flatten)]
        common: Common,
        /// CSV of author,score.
        #[arg(long, value_name = "PATH")]
        scores: PathBuf,
        /// Ascending minimum paper counts, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = pwi_core::analytics::DEFAULT_THRESHOLDS)]
        thresholds: Vec<usize>,
    },
    /// Cumulative PWI distributions for laureates and everyone else.
    Distribution(Common),
    /// Regress PWI on paper count, co-author count and laureate status.
    Regress(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Export file; repeat for several files.
    #[arg(long, short, required = true, value_name = "PATH")]
    input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    format: InputFormat,
    /// CSV of variant,canonical author names.
    #[arg(long, value_name = "PATH")]
    merge_map: Option<PathBuf>,
    /// One laureate name per line. Defaults to the bundled Price Medal list.
    #[arg(long, value_name = "PATH")]
    laureates: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Realized)]
    mode: Mode,
    /// Ignore laureates further away than this many steps.
    #[arg(long = "max-d", value_name = "N")]
    max_d: Option<u32>,
    /// Write the table here instead of stdout.
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    out_format: OutFormat,
    /// Write the ingest report as JSON.
    #[arg(long, value_name = "PATH")]
    report_json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InputFormat {
    Auto,
    Tab,
    Plaintext,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Realized,
    Global,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl Common {
    fn into_config(self) -> (RunConfig, Option<PathBuf>) {
        let config = RunConfig {
            inputs: self.input,
            format: match self.format {
                InputFormat::Auto => None,
                InputFormat::Tab => Some(ExportFormat::Tab),
                InputFormat::Plaintext => Some(ExportFormat::Plaintext),
            },
            merge_map: self.merge_map,
            laureates: self.laureates,
            options: PwiOptions {
                mode: match self.mode {
                    Mode::Realized => DistanceMode::Realized,
                    Mode::Global => DistanceMode::Global,
                },
                max_distance: self.max_d,
            },
            out_format: match self.out_format {
                OutFormat::Csv => OutputFormat::Csv,
                OutFormat::Json => OutputFormat::Json,
            },
            ingest_report: self.report_json,
            ..RunConfig::default()
        };
        (config, self.out)
    }
}

type CommandFn = fn(&RunConfig, &mut dyn Write, &mut dyn Write) -> pwi_core::Result<()>;

fn run(cli: Cli) -> pwi_core::Result<()> {
    let (cmd, (config, out)): (CommandFn, _) = match cli.command {
        Command::ListAuthors(c) => (pipeline::cmd_list_authors, c.into_config()),
        Command::Compute { common, edges } => {
            let (mut config, out) = common.into_config();
            config.edges = edges;
            (pipeline::cmd_compute, (config, out))
        }
        Command::Correlate {
            common,
            scores,
            thresholds,
        } => {
            let (mut config, out) = common.into_config();
            config.scores = Some(scores);
            config.thresholds = thresholds;
            (pipeline::cmd_correlate, (config, out))
        }
        Command::Distribution(c) => (pipeline::cmd_distribution, c.into_config()),
        Command::Regress(c) => (pipeline::cmd_regress, c.into_config()),
    };

    let stderr = io::stderr();
    let mut diag = stderr.lock();
    // Buffer the table so a failed run leaves no partial output file.
    let mut buf = Vec::new();
    cmd(&config, &mut buf, &mut diag)?;
    match out {
        Some(path) => {
            let mut f = File::create(&path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            f.write_all(&buf)?;
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            w.write_all(&buf)?;
            w.flush()?;
        }
    }
    Ok(())
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
