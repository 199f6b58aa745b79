//! `cfx`: exact continued fractions and modular-group tools from the shell.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error (or a failing
//! selfcheck), 3 iteration budget exhausted.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use cfx_core::cf::DEFAULT_MAX_ITER;
use cfx_core::par::Exec;
use clap::{Parser, Subcommand, ValueEnum};

use commands::Ctx;
use output::{error_json, render, CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "cfx", version, about = "Exact higher-dimensional continued fractions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Iteration budget for expansions and traces.
    #[arg(long, env = "CFX_MAX_ITER", default_value_t = DEFAULT_MAX_ITER, global = true)]
    max_iter: usize,
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 2024, global = true)]
    seed: u64,
    /// Run sampling loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug)]
struct SpaceArgs {
    /// real, real-regular, real-even, complex, r3, r4-hurwitz, heisenberg
    #[arg(long, default_value = "real")]
    space: String,
    /// `d` for the lattice Z[i√d] (complex space only).
    #[arg(long)]
    imaginary_d: Option<u64>,
    /// Optional consistency check: z, zi, zid, z3, hurwitz, heisenberg.
    #[arg(long)]
    lattice: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// CF expansion of a point, or of a root of a quadratic over Q(i).
    Expand {
        #[command(flatten)]
        space: SpaceArgs,
        /// `(s, s, …)` with exact scalars, or a lattice-style element like `1/3+1/5i`.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// `a,b,c` Gaussian rationals: expand a root of a z² + b z + c.
        #[arg(long, allow_hyphen_values = true)]
        quadratic: Option<String>,
        /// Take the root with −√Δ.
        #[arg(long)]
        minus_root: bool,
        /// Start with a₁ = [ιx] even when x ∉ K.
        #[arg(long)]
        no_leading: bool,
    },
    /// Evaluate a finite or eventually periodic digit sequence.
    Evaluate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        leading: Option<String>,
        /// Digits separated by `;`.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        digits: String,
        /// Repeating digits separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        period: Option<String>,
    },
    /// Classify a 2×2 matrix (identity / elliptic / parabolic / loxodromic).
    Classify {
        /// z, zi, zid, quat
        #[arg(long)]
        ring: String,
        #[arg(long)]
        imaginary_d: Option<u64>,
        /// `[[a, b], [c, d]]`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Write an integer Clifford matrix as a word in translations and Inv.
    Reduce {
        #[arg(long, default_value = "r3")]
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Fundamental Pell solution μ²Δ + 1 = n², or x² + Δy² = 1 over Z[i√d].
    Pell {
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long)]
        imaginary_d: Option<u64>,
        /// Coefficient bound for the complex search.
        #[arg(long, default_value_t = 20)]
        bound: u64,
    },
    /// Loxodromic SL(2,Z) matrix fixing the roots of a x² + b x + c.
    Surd2mat {
        #[arg(long, allow_hyphen_values = true)]
        quadratic: String,
    },
    /// Fixed points of a Möbius transformation.
    Fixed {
        /// z (exact), zi (exact over Q(i)), quat (numerical, seeded)
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Follow a horoball through the Gauss map of a rational point.
    HoroballTrace {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Initial Euclidean height.
        #[arg(long, default_value = "1")]
        height: String,
        /// Write an SVG picture of the trace.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Minimal height at which widely spaced geodesics cross the unit sphere.
    GeodesicMinHeight {
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, default_value = "sqrt(2)")]
        eps_prime: String,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        /// real or complex
        #[arg(long, default_value = "real")]
        model: String,
    },
    /// Depth identities a + [a, …, a] = 0 and the sequence x_n.
    Identities {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Run the acceptance suite.
    Selfcheck {
        #[arg(long)]
        quick: bool,
        /// Only these criteria (1–10).
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=10))]
        only: Vec<u8>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Expand { .. } => "expand",
            Command::Evaluate { .. } => "evaluate",
            Command::Classify { .. } => "classify",
            Command::Reduce { .. } => "reduce",
            Command::Pell { .. } => "pell",
            Command::Surd2mat { .. } => "surd2mat",
            Command::Fixed { .. } => "fixed",
            Command::HoroballTrace { .. } => "horoball-trace",
            Command::GeodesicMinHeight { .. } => "geodesic-min-height",
            Command::Identities { .. } => "identities",
            Command::Selfcheck { .. } => "selfcheck",
        }
    }
}

fn sys(a: &SpaceArgs) -> Result<cfx_core::spaces::CfSystem, CliError> {
    input::system(&a.space, a.imaginary_d, a.lattice.as_deref())
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let ctx = Ctx {
        max_iter: cli.max_iter,
        seed: cli.seed,
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match &cli.command {
        Command::Expand {
            space,
            point,
            quadratic,
            minus_root,
            no_leading,
        } => commands::expand(&ctx, &sys(space)?, point.as_deref(), quadratic.as_deref(), *minus_root, *no_leading),
        Command::Evaluate {
            space,
            leading,
            digits,
            period,
        } => commands::evaluate(&sys(space)?, leading.as_deref(), digits, period.as_deref()),
        Command::Classify {
            ring,
            imaginary_d,
            matrix,
        } => commands::classify(ring, *imaginary_d, matrix),
        Command::Reduce { space, matrix } => commands::reduce(&input::system(space, None, None)?, matrix),
        Command::Pell {
            delta,
            imaginary_d,
            bound,
        } => commands::pell(&ctx, delta, *imaginary_d, *bound),
        Command::Surd2mat { quadratic } => commands::surd2mat(&ctx, quadratic),
        Command::Fixed { ring, matrix } => commands::fixed(&ctx, ring, matrix),
        Command::HoroballTrace {
            space,
            point,
            height,
            svg,
        } => commands::horoball_trace(&ctx, &sys(space)?, point, height, svg.as_ref()),
        Command::GeodesicMinHeight {
            eps,
            eps_prime,
            grid,
            model,
        } => commands::geodesic_min_height(model, eps, eps_prime, *grid, exec),
        Command::Identities { d, steps } => commands::identities(*d, *steps),
        Command::Selfcheck { quick, only } => commands::selfcheck(&ctx, *quick, only, exec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.format == Format::Json;
    match run(&cli) {
        Ok(r) => {
            if json {
                println!("{}", render(&r.to_json()));
            } else {
                for l in &r.text {
                    println!("{l}");
                }
            }
            ExitCode::from(r.code as u8)
        }
        Err(e) => {
            if json {
                println!("{}", render(&error_json(cli.command.name(), &e)));
            }
            eprintln!("cfx {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
