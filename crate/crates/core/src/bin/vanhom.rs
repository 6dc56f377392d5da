use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vanishing_homology::cli::{run, Format, RunOptions};
use vanishing_homology::engine::ModeRequest;

#[derive(Parser)]
#[command(name = "vanhom", version, about = "Vanishing homology of hypersurfaces with 1-dimensional singular locus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the vanishing homology report for a configuration document.
    Compute {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Cross-check every component against the chain-level model.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Assume the boundary maps into the smooth fibre are injective.
        #[arg(long)]
        assume_phi_injective: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Exact,
    Rank,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

fn main() -> ExitCode {
    let Command::Compute {
        path,
        mode,
        oracle,
        format,
        assume_phi_injective,
    } = Cli::parse().command;
    let options = RunOptions {
        input_path: path,
        mode: match mode {
            ModeArg::Auto => ModeRequest::Auto,
            ModeArg::Exact => ModeRequest::Exact,
            ModeArg::Rank => ModeRequest::Rank,
        },
        run_oracle: oracle,
        format: match format {
            FormatArg::Text => Format::Text,
            FormatArg::Machine => Format::Machine,
        },
        assume_phi_injective,
    };
    let outcome = run(&options);
    if outcome.exit_code == 0 || outcome.exit_code == 3 {
        print!("{}", outcome.output);
    } else {
        eprint!("{}", outcome.output);
    }
    ExitCode::from(outcome.exit_code as u8)
}
