use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use coword_cli::commands::{
    cmd_analyze, cmd_keywords, cmd_map, cmd_network, cmd_stats, RankingFormat,
};
use coword_cli::config::{resolve_config, CommonArgs};
use coword_cli::{exit_code, CliError};

/// Co-word science mapping from Web of Science exports: keyword
/// co-occurrence networks, theme clustering, and strategic diagrams.
#[derive(Debug, Parser)]
#[command(name = "coword", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print corpus statistics (documents, sources, years, growth).
    Stats {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the keyword frequency ranking.
    Keywords {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of keywords to list.
        #[arg(long, default_value_t = 20, value_name = "N")]
        top: usize,
        #[arg(long, value_enum, default_value_t, value_name = "FORMAT")]
        format: RankingFormat,
    },
    /// Write the co-occurrence network (DOT and CSV edge list).
    Network {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the full pipeline; write the JSON report and SVG diagram.
    Map {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run everything into the output directory.
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn run(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Stats { common } => cmd_stats(&resolve_config(common)?),
        Command::Keywords {
            common,
            top,
            format,
        } => cmd_keywords(&resolve_config(common)?, *top, *format),
        Command::Network { common } => cmd_network(&resolve_config(common)?),
        Command::Map { common } => cmd_map(&resolve_config(common)?),
        Command::Analyze { common } => cmd_analyze(&resolve_config(common)?),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let code = match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = error.print();
            std::process::exit(code);
        }
    };
    std::process::exit(exit_code(run(&cli.command)));
}
