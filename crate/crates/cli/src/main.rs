use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mposym::report::{Report, RunConfig};
use mposym::Error;

mod commands;

#[derive(Parser)]
#[command(name = "mposym", version, about = "Pre-bialgebras, anomalies and fixed points of MPO symmetries", allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Numerical tolerance for every check.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for the randomized decomposition steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest dense dimension a contraction may build.
    #[arg(long, global = true, default_value_t = 1 << 12)]
    cap: usize,
    /// Output file for the command's artifact, or its report when it has none.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Print the report as JSON.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Print the report as text (default).
    #[arg(long, global = true)]
    text: bool,
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Args)]
struct FamilySource {
    /// Compiled-in family: czy, z2-cocycle-trivial, z2-cocycle-nontrivial.
    #[arg(long, conflicts_with = "family")]
    builtin: Option<String>,
    /// Family JSON file.
    #[arg(long)]
    family: Option<String>,
    /// Fusion JSON whose x seeds the solve for its (a, b) pair; repeatable.
    #[arg(long)]
    hint: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of an MPO family: fusion, associator, structure constants, modules, fusion rings.
    Analyze(FamilySource),
    /// Solve fusion tensors for every pair of a family.
    Fusion(FamilySource),
    /// Associator and cohomology class from a fusion file.
    Associator {
        #[arg(long)]
        fusion: String,
    },
    /// Representation theory of a pre-bialgebra.
    #[command(subcommand)]
    Rep(RepCommand),
    /// Build or verify MPDO renormalization fixed points.
    #[command(subcommand)]
    Rfp(RfpCommand),
    /// Checks on the built-in spin-chain, channel and group models.
    Models {
        model: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// all, spin, channel or group.
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Build group 3-cocycles and what follows from them.
    Cocycle {
        /// zN or a group JSON file.
        #[arg(long, default_value = "z2")]
        group: String,
        /// trivial, nontrivial (Z_2), p=K (Z_n) or a cocycle JSON file.
        #[arg(long, default_value = "nontrivial")]
        omega: String,
        /// cocycle, prebialgebra or mpo.
        #[arg(long, default_value = "cocycle")]
        emit: String,
    },
    /// Run the built-in reproduction suite.
    ReproducePaper {
        /// Comma-separated criterion numbers or keys.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Subcommand)]
enum RepCommand {
    /// Indecomposable projectives of the regular module with radicals and tops.
    Decompose {
        /// Algebra JSON file or builtin: czy, czy-dual, z2-cocycle-trivial, z2-cocycle-nontrivial.
        #[arg(long)]
        algebra: String,
        /// Adjoin a unit first.
        #[arg(long)]
        unitize: bool,
        #[arg(long, default_value = "auto")]
        catalog: String,
    },
}

#[derive(Subcommand)]
enum RfpCommand {
    /// Fixed-point MPDO tensor from an algebra and a representation of its dual.
    Build {
        #[arg(long)]
        algebra: String,
        /// Representation JSON file or builtin sum such as psi_S1+psi_S2.
        #[arg(long)]
        psi: String,
    },
    /// Canonical form, fixed-point conditions and positivity of an MPDO tensor.
    Verify {
        #[arg(long)]
        tensor: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
}

/// Exit codes: 0 pass, 2 failed check, 3 bad input, 4 numerical degeneracy.
fn error_code(e: &Error) -> u8 {
    if e.is_input() {
        3
    } else if e.is_numerical() {
        4
    } else {
        2
    }
}

fn run(cli: &Cli, cfg: &RunConfig) -> mposym::Result<Report> {
    cfg.validate()?;
    match &cli.command {
        Command::Analyze(s) => commands::cmd_analyze(s.builtin.as_deref(), s.family.as_deref(), &s.hint, cfg),
        Command::Fusion(s) => commands::cmd_fusion(s.builtin.as_deref(), s.family.as_deref(), &s.hint, cfg),
        Command::Associator { fusion } => commands::cmd_associator(fusion, cfg),
        Command::Rep(RepCommand::Decompose { algebra, unitize, catalog }) => commands::cmd_rep_decompose(algebra, *unitize, catalog, cfg),
        Command::Rfp(RfpCommand::Build { algebra, psi }) => commands::cmd_rfp_build(algebra, psi, cfg),
        Command::Rfp(RfpCommand::Verify { tensor, nmax }) => commands::cmd_rfp_verify(tensor, *nmax, cfg),
        Command::Models { model, n, check } => commands::cmd_models(model, *n, check, cfg),
        Command::Cocycle { group, omega, emit } => commands::cmd_cocycle(group, omega, emit, cfg),
        Command::ReproducePaper { only } => commands::cmd_reproduce(only.as_deref(), cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let g = &cli.global;
    let cfg = RunConfig { tol: g.tol, seed: g.seed, cap: g.cap, out: g.out.clone(), verbose: g.verbose };
    match run(&cli, &cfg) {
        Ok(report) => {
            let text = if g.json { report.to_json().map(|s| s + "\n") } else { Ok(report.to_text()) };
            match text {
                // a closed stdout is not an error of the analysis
                Ok(s) => drop(std::io::stdout().write_all(s.as_bytes())),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(4);
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
