use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rlim_cli::{run, CliError, Command, ExperimentConfig, Format};
use rlim_core::prosys::Caps;
use rlim_core::zmodule::Coeff;

#[derive(Parser)]
#[command(name = "rlim", version, about = "Exact derived limits, coherent families and ordinal walks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Coefficient ring: Z or Z/p.
    #[arg(long, global = true, value_parser = parse_coeff)]
    coeff: Option<Coeff>,
    /// Largest degree n reported.
    #[arg(long, global = true, default_value_t = 2)]
    nmax: usize,
    #[arg(long, global = true)]
    /// Seed for sampled experiments
    seed: Option<u64>,
    #[arg(long, global = true, default_value_t = Caps::default().max_chains)]
    /// Most strict chains enumerated for one system
    max_chains: u64,
    #[arg(long, global = true, default_value_t = Caps::default().max_subsets)]
    /// Most subsets or down-sets enumerated
    max_subsets: u64,
    #[arg(long, global = true, default_value_t = Caps::default().max_poset)]
    /// Largest poset accepted
    max_poset: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn parse_coeff(s: &str) -> Result<Coeff, String> {
    Coeff::parse(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Cmd {
    /// lim^n for n <= nmax.
    Limn { input: PathBuf },
    /// Ranks and cohomology of the Roos complex.
    Roos { input: PathBuf },
    /// Flasqueness over all down-sets.
    Flasque { input: PathBuf },
    /// Long exact sequence of a short exact sequence of systems.
    Les { input: PathBuf },
    /// Coherent families.
    #[command(subcommand)]
    Coh(CohCmd),
    /// Batch suites.
    #[command(subcommand)]
    Suite(SuiteCmd),
    /// Walks on ordinals below omega^omega.
    #[command(subcommand)]
    Walks(WalksCmd),
}

#[derive(Subcommand)]
enum CohCmd {
    /// Check coherence and report a witness of failure.
    Check { input: PathBuf },
    /// Solve for a trivialization and verify it.
    Trivialize { input: PathBuf },
    /// Extend a family over kappa x lambda to mu x nu.
    Extend {
        input: PathBuf,
        #[arg(long)]
        kappa: usize,
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        mu: usize,
        #[arg(long)]
        nu: usize,
    },
}

#[derive(Subcommand)]
enum SuiteCmd {
    /// A, B and B/A systems for every kappa, lambda up to the given bounds.
    Akl {
        #[arg(long, default_value_t = 2)]
        kappa_max: usize,
        #[arg(long, default_value_t = 2)]
        lambda_max: usize,
    },
    /// Smith-form against row-reduction cohomology on every corpus system.
    Oracle {
        /// Corpus directory; defaults to the bundled one.
        dir: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        max_rank: usize,
    },
}

#[derive(Subcommand)]
enum WalksCmd {
    Rho1 { input: PathBuf },
    Defect { input: PathBuf },
    Family { input: PathBuf },
    Recurse { input: PathBuf },
}

fn config(cli: Cli) -> (ExperimentConfig, Option<PathBuf>) {
    let (command, input) = match cli.command {
        Cmd::Limn { input } => (Command::Limn, Some(input)),
        Cmd::Roos { input } => (Command::Roos, Some(input)),
        Cmd::Flasque { input } => (Command::Flasque, Some(input)),
        Cmd::Les { input } => (Command::Les, Some(input)),
        Cmd::Coh(CohCmd::Check { input }) => (Command::CohCheck, Some(input)),
        Cmd::Coh(CohCmd::Trivialize { input }) => (Command::CohTrivialize, Some(input)),
        Cmd::Coh(CohCmd::Extend { input, kappa, lambda, mu, nu }) => (Command::CohExtend { kappa, lambda, mu, nu }, Some(input)),
        Cmd::Suite(SuiteCmd::Akl { kappa_max, lambda_max }) => (Command::SuiteAkl { kappa_max, lambda_max }, None),
        Cmd::Suite(SuiteCmd::Oracle { dir, max_rank }) => (Command::SuiteOracle { max_rank }, dir),
        Cmd::Walks(WalksCmd::Rho1 { input }) => (Command::WalksRho1, Some(input)),
        Cmd::Walks(WalksCmd::Defect { input }) => (Command::WalksDefect, Some(input)),
        Cmd::Walks(WalksCmd::Family { input }) => (Command::WalksFamily, Some(input)),
        Cmd::Walks(WalksCmd::Recurse { input }) => (Command::WalksRecurse, Some(input)),
    };
    let g = cli.global;
    let cfg = ExperimentConfig {
        command,
        input,
        coeff: g.coeff,
        nmax: g.nmax,
        seed: g.seed,
        caps: Caps { max_chains: g.max_chains, max_subsets: g.max_subsets, max_poset: g.max_poset },
        format: g.format,
    };
    (cfg, g.out)
}

fn main() -> ExitCode {
    let (cfg, out) = config(Cli::parse());
    let start = Instant::now();
    let result = run(&cfg);
    eprintln!("{}: {:.3}s", cfg.command.name(), start.elapsed().as_secs_f64());
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let text = report.render(cfg.format);
    match out {
        Some(path) => {
            if let Err(source) = std::fs::write(&path, &text) {
                let e = CliError::Io { path: path.display().to_string(), source };
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
        }
        None => print!("{text}"),
    }
    if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
