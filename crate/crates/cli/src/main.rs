use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use symdisc::fuzz::Suite;
use symdisc::Which;
use symdisc_cli::{
    cmd_fuzz, cmd_membership, cmd_nonuniqueness, cmd_schwarz, parse_complex, read_point, CliError, Domain, Outcome,
    EXIT_PARSE,
};

#[derive(Parser)]
#[command(name = "symdisc", version, about = "Membership and Schwarz-lemma tools for symmetrized polydiscs")]
struct Cli {
    /// Seed recorded in the report; SYMDISC_SEED takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Open,
    Closed,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Tilde,
    Sym,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Thm22,
    Thm37,
    Lemma36,
    Lemma41,
    Scaling,
    G2,
    Thm55,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership of a point file.
    Membership {
        point: PathBuf,
        #[arg(long, value_enum, default_value = "open")]
        which: WhichArg,
        /// Defaults to the kind recorded in the file.
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
    },
    /// Evaluate the Schwarz conditions for mapping 0 to the origin and lambda0 to the point.
    Schwarz {
        point: PathBuf,
        /// "re,im"
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        lambda0: symdisc::CNum,
        #[arg(long)]
        synthesize: bool,
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
    },
    /// Build distinct interpolants for the fixed boundary datum.
    Nonuniqueness {
        #[arg(long, default_value_t = 16)]
        zeta_count: usize,
    },
    /// Run a seeded fuzz suite.
    Fuzz {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
    },
}

fn domain(d: Option<DomainArg>) -> Option<Domain> {
    d.map(|d| match d {
        DomainArg::Tilde => Domain::Tilde,
        DomainArg::Sym => Domain::Sym,
    })
}

fn seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var("SYMDISC_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| CliError { code: EXIT_PARSE, message: format!("SYMDISC_SEED={v:?}: {e}") }),
        Err(_) => Ok(flag),
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let seed = seed(cli.seed)?;
    match &cli.command {
        Command::Membership { point, which, domain: d } => {
            let which = match which {
                WhichArg::Open => Which::Open,
                WhichArg::Closed => Which::Closed,
            };
            cmd_membership(read_point(point)?, which, domain(*d), seed)
        }
        Command::Schwarz { point, lambda0, synthesize, domain: d } => {
            cmd_schwarz(read_point(point)?, *lambda0, *synthesize, domain(*d), seed)
        }
        Command::Nonuniqueness { zeta_count } => cmd_nonuniqueness(*zeta_count, seed),
        Command::Fuzz { suite, n, count } => {
            let suite = match suite {
                SuiteArg::Thm22 => Suite::Thm22,
                SuiteArg::Thm37 => Suite::Thm37,
                SuiteArg::Lemma36 => Suite::Lemma36,
                SuiteArg::Lemma41 => Suite::Lemma41,
                SuiteArg::Scaling => Suite::Scaling,
                SuiteArg::G2 => Suite::G2,
                SuiteArg::Thm55 => Suite::Thm55,
            };
            cmd_fuzz(suite, *n, *count, seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, code) = match dispatch(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("symdisc: {}", e.message);
            return ExitCode::from(e.code as u8);
        }
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("symdisc: writing report: {e}");
        return ExitCode::from(EXIT_PARSE as u8);
    }
    ExitCode::from(code as u8)
}
