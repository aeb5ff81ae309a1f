//! `finq` — finite-model propagator computations at the command line.
//!
//! Every command prints one JSON object (sweeps print CSV) and exits with
//! 0 on success, 2 on validation failure, 3 on a mathematical singularity
//! and 4 on an internal invariant breach.

mod commands;
mod output;

use clap::{Parser, Subcommand};

use commands::{
    cmd_free, cmd_gauss, cmd_oscillator, cmd_space_size, cmd_sweep, cmd_verify, cmd_weyl,
    emit_error, FreeArgs, GaussArgs, OscArgs, SpaceSizeArgs, SweepArgs, VerifyArgs, WeylArgs,
};

#[derive(Parser)]
#[command(
    name = "finq",
    version,
    about = "Exact finite-dimensional models of a single quantum particle"
)]
struct Cli {
    /// Omit the timestamp block so identical flags give byte-identical
    /// output.
    #[arg(long, global = true)]
    no_meta: bool,
    /// Bound internal parallelism to this many threads (0 = default).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Free-particle propagator ⟨x1|K^t|x0⟩ by full sum, reduced sum,
    /// closed form and matrix evolution.
    Free(FreeArgs),
    /// Harmonic-oscillator propagator via the three-factor splitting,
    /// checked against the Mehler kernel.
    Oscillator(OscArgs),
    /// Quadratic Gauss sum, directly and via reciprocity.
    Gauss(GaussArgs),
    /// Size of the space a = ht/m in physical units.
    SpaceSize(SpaceSizeArgs),
    /// Translation with wraparound and the Weyl-relation violation report.
    Weyl(WeylArgs),
    /// Evaluate a quantity along a divisibility chain of N (CSV output).
    Sweep(SweepArgs),
    /// Run the full invariant suite; nonzero exit on any failure.
    Verify(VerifyArgs),
}

fn run(cli: &Cli) -> finq::Result<()> {
    match &cli.command {
        Command::Free(args) => cmd_free(args, cli.no_meta),
        Command::Oscillator(args) => cmd_oscillator(args, cli.no_meta),
        Command::Gauss(args) => cmd_gauss(args, cli.no_meta),
        Command::SpaceSize(args) => cmd_space_size(args, cli.no_meta),
        Command::Weyl(args) => cmd_weyl(args, cli.no_meta),
        Command::Sweep(args) => cmd_sweep(args, cli.no_meta),
        Command::Verify(args) => cmd_verify(args, cli.no_meta),
    }
}

fn command_name(cli: &Cli) -> &'static str {
    match cli.command {
        Command::Free(_) => "free",
        Command::Oscillator(_) => "oscillator",
        Command::Gauss(_) => "gauss",
        Command::SpaceSize(_) => "space-size",
        Command::Weyl(_) => "weyl",
        Command::Sweep(_) => "sweep",
        Command::Verify(_) => "verify",
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = if cli.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build()
            .expect("thread pool construction");
        pool.install(|| run(&cli))
    } else {
        run(&cli)
    };
    if let Err(e) = outcome {
        std::process::exit(emit_error(command_name(&cli), &e));
    }
}
