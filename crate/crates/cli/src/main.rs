use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fracbid_cli::commands::{
    self, CliError, CommandOutput, CompareOptions, Engine, PruneOptions, SolveOptions,
};
use fracbid_cli::input::Format;
use fracbid_core::Money;

/// Winner determination for sealed-bid auctions over a fixed token supply.
///
/// Exit codes: 0 sold/success, 2 unsold or no winner, 1 error.
#[derive(Parser)]
#[command(name = "fracbid", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Determine the winning bids of a bid file
    Solve(SolveArgs),
    /// Compare the greedy baseline, the exact solver, and the oracle
    Compare(CompareArgs),
    /// Drop bids that cannot win and emit the reduced file
    Prune(PruneArgs),
    /// Replay an auction lifecycle script and print its event log
    Auction(AuctionArgs),
    /// Exhaustive reference solver (exponential cost, small inputs only)
    #[command(hide = true)]
    Oracle(SolveArgs),
}

#[derive(Args)]
struct InputOpts {
    /// Bid file path, or '-' for standard input
    input: String,
    /// Input format: csv rows or a TOML document
    #[arg(long, value_enum, default_value_t = FormatOpt::Csv)]
    format: FormatOpt,
    /// Fractional decimal digits accepted in prices
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=12))]
    scale: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatOpt {
    Csv,
    Doc,
}

impl From<FormatOpt> for Format {
    fn from(opt: FormatOpt) -> Format {
        match opt {
            FormatOpt::Csv => Format::Csv,
            FormatOpt::Doc => Format::Doc,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputOpts,
    /// Token supply (overrides a value carried in a doc file)
    #[arg(long)]
    k: Option<u32>,
    /// Reserve price (overrides a value carried in a doc file)
    #[arg(long)]
    reserve: Option<String>,
    /// Enforce the category-majority constraint
    #[arg(long)]
    constrained: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputOpts,
    /// Token supply (overrides a value carried in a doc file)
    #[arg(long)]
    k: Option<u32>,
    /// Include the oracle row even above the automatic size cutoff
    #[arg(long)]
    with_oracle: bool,
}

#[derive(Args)]
struct PruneArgs {
    #[command(flatten)]
    input: InputOpts,
    /// Token supply (overrides a value carried in a doc file)
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Args)]
struct AuctionArgs {
    /// Script path, or '-' for standard input
    script: String,
    /// Fractional decimal digits accepted in prices
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=12))]
    scale: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(output) => {
            print!("{}", output.stdout);
            ExitCode::from(output.code)
        }
        Err(e) => {
            eprintln!("fracbid: error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<CommandOutput, CliError> {
    match cli.command {
        Command::Solve(args) => run_solve(args, Engine::Exact),
        Command::Oracle(args) => run_solve(args, Engine::Oracle),
        Command::Compare(args) => {
            let content = read_input(&args.input.input)?;
            let opts = CompareOptions {
                format: args.input.format.into(),
                scale: args.input.scale,
                k: args.k,
                with_oracle: args.with_oracle,
            };
            commands::compare_command(&content, &display_path(&args.input.input), &opts)
        }
        Command::Prune(args) => {
            let content = read_input(&args.input.input)?;
            let opts = PruneOptions {
                format: args.input.format.into(),
                scale: args.input.scale,
                k: args.k,
            };
            commands::prune_command(&content, &display_path(&args.input.input), &opts)
        }
        Command::Auction(args) => {
            let content = read_input(&args.script)?;
            commands::auction_command(&content, args.scale)
        }
    }
}

fn run_solve(args: SolveArgs, engine: Engine) -> Result<CommandOutput, CliError> {
    let content = read_input(&args.input.input)?;
    let path = display_path(&args.input.input);
    let reserve = args
        .reserve
        .as_deref()
        .map(|text| {
            Money::parse(text, args.input.scale).map_err(|e| CliError::File {
                path: "--reserve".to_string(),
                message: e.to_string(),
            })
        })
        .transpose()?;
    let opts = SolveOptions {
        format: args.input.format.into(),
        scale: args.input.scale,
        k: args.k,
        reserve,
        constrained: args.constrained,
        engine,
    };
    commands::solve_command(&content, &path, &opts)
}

fn read_input(path: &str) -> Result<String, CliError> {
    let wrap = |source| CliError::Io {
        path: display_path(path),
        source,
    };
    if path == "-" {
        let mut buffer = String::new();
        std::io::stdin().read_to_string(&mut buffer).map_err(wrap)?;
        Ok(buffer)
    } else {
        std::fs::read_to_string(path).map_err(wrap)
    }
}

fn display_path(path: &str) -> String {
    if path == "-" {
        "<stdin>".to_string()
    } else {
        path.to_string()
    }
}
