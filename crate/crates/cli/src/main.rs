use std::path::PathBuf;
use std::process::exit;

use clap::{Args, Parser, Subcommand};
use runbench_core::{load_config, replay, run_suite, write_outputs, Error, OutputFormat, Result};

#[derive(Parser)]
#[command(
    name = "runbench",
    version,
    about = "Times commands and compares the results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark suite from a TOML config file
    Run(RunArgs),
    /// Regenerate reports from a previously written report.json
    Replay(ReplayArgs),
    /// Print the bundled startup-comparison preset config
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// Suite configuration file
    config: PathBuf,
    /// Override the timed iteration count
    #[arg(long)]
    iterations: Option<u32>,
    /// Override the warmup count
    #[arg(long)]
    warmups: Option<u32>,
    /// Override the prepare hook, whitespace-split into argv
    /// (an empty string disables a configured hook)
    #[arg(long)]
    prepare: Option<String>,
    /// Override the output formats: markdown, csv, json, boxplot
    #[arg(long, value_delimiter = ',')]
    formats: Vec<OutputFormat>,
    /// Override the output directory
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Record nonzero exit codes instead of aborting the suite
    #[arg(long)]
    tolerate_failures: bool,
    /// Echo captured child output to stderr
    #[arg(long)]
    show_output: bool,
}

#[derive(Args)]
struct ReplayArgs {
    /// report.json from an earlier run
    json: PathBuf,
    /// Also write report files in these formats
    #[arg(long, value_delimiter = ',')]
    formats: Vec<OutputFormat>,
    /// Where the rewritten report files go
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 on usage errors by default; this tool reserves 2
            // for measured-command failures, so usage errors map to 1 and
            // --help/--version stay 0.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            exit(code);
        }
    };
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        exit(e.exit_code());
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Replay(args) => replay_file(args),
        Command::Presets => {
            print!("{}", include_str!("../presets/startup.toml"));
            Ok(())
        }
    }
}

fn run(args: RunArgs) -> Result<()> {
    let mut config = load_config(&args.config)?;
    if let Some(iterations) = args.iterations {
        config.protocol.iterations = iterations;
    }
    if let Some(warmups) = args.warmups {
        config.protocol.warmups = warmups;
    }
    if let Some(prepare) = &args.prepare {
        let argv: Vec<String> = prepare.split_whitespace().map(str::to_string).collect();
        config.protocol.prepare = if argv.is_empty() { None } else { Some(argv) };
    }
    if !args.formats.is_empty() {
        config.outputs = args.formats.iter().copied().collect();
    }
    if let Some(dir) = args.output_dir {
        config.output_dir = dir;
    }
    if args.tolerate_failures {
        config.protocol.tolerate_failures = true;
    }
    if args.show_output {
        config.protocol.echo_output = true;
    }
    let report = run_suite(&config)?;
    print!("{}", report.to_markdown());
    Ok(())
}

fn replay_file(args: ReplayArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.json)
        .map_err(|e| Error::Validation(format!("cannot read '{}': {e}", args.json.display())))?;
    let report = replay(&text)?;
    if !args.formats.is_empty() {
        let formats = args.formats.iter().copied().collect();
        write_outputs(&formats, &args.output_dir, &report)?;
    }
    print!("{}", report.to_markdown());
    Ok(())
}
