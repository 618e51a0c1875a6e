//! `compack`: certifies, stage by stage, which two-radius sphere packings
//! tile space by tetrahedra.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use compack::exactalg::RationalPoly;
use compack::necklace::NecklaceWord;
use compack::packing::StackingSequence;
use compack::shell::DEFAULT_NODE_BUDGET;
use compack::Error;

use commands::{Failure, NecklaceContext, RadiusSelector, RunConfig};
use report::{Format, Report};

#[derive(Parser)]
#[command(
    name = "compack",
    version,
    about = "Certified classification of compact two-radius sphere packings"
)]
struct Cli {
    /// Largest precision, in bits, reached while refining interval enclosures.
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u32).range(64..))]
    precision_bits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Maximum number of states visited by the shell search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    node_budget: u64,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Radii admitting a skew necklace: candidates, pre-filter values, certified rows.
    Radii,
    /// Large or small necklaces at one certified radius.
    Necklaces {
        #[arg(value_enum)]
        context: NecklaceContext,
        /// Skew word characterizing the radius, e.g. `1111` or `LLLL`.
        #[arg(long, required_unless_present = "minpoly", conflicts_with = "minpoly")]
        r_word: Option<NecklaceWord>,
        /// Minimal polynomial of the radius as integer coefficients, highest
        /// degree first, e.g. `1,2,-1`; it must have one root in (0, 1).
        #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
        minpoly: Option<RationalPoly>,
    },
    /// Every shell around a large sphere at r = √2 − 1, embedded and classified.
    Shells {
        /// Directory receiving one OFF mesh per shell.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Builds a stacked packing, optionally filled, and verifies it.
    Pack {
        /// Stacking word over A, B, C, e.g. `ABC`.
        #[arg(long)]
        seq: StackingSequence,
        /// Put a small sphere in every octahedral hole.
        #[arg(long)]
        fill: bool,
        /// Directory receiving XYZ, OFF and metrics JSON files.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// The whole chain as one certification run.
    All,
}

fn parse_poly(s: &str) -> Result<RationalPoly, String> {
    let coeffs = s
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|e| format!("{c:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let p = RationalPoly::from_ints_desc(&coeffs);
    if p.degree().unwrap_or(0) == 0 {
        return Err("polynomial must have positive degree".into());
    }
    Ok(p)
}

fn emit<R: Report>(report: &R, cfg: &RunConfig) -> Result<bool, Failure> {
    let body = report.render(cfg.output_format);
    match &cfg.output_path {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Io(p.clone(), e))?,
        None => print!("{body}"),
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let cfg = RunConfig {
        precision_bits: cli.precision_bits,
        output_format: cli.format,
        node_budget: cli.node_budget,
        output_path: cli.output,
    };
    match cli.command {
        Command::Radii => emit(&commands::cmd_radii(&cfg)?, &cfg),
        Command::Necklaces {
            context,
            r_word,
            minpoly,
        } => {
            let sel = match (r_word, minpoly) {
                (Some(w), _) => RadiusSelector::Word(w),
                (None, Some(p)) => RadiusSelector::MinimalPolynomial(p),
                (None, None) => unreachable!("clap requires one selector"),
            };
            let r = commands::resolve_radius(&sel, cfg.precision_bits)?;
            emit(&commands::cmd_necklaces(&cfg, context, &r)?, &cfg)
        }
        Command::Shells { export } => emit(&commands::cmd_shells(&cfg, export.as_deref())?, &cfg),
        Command::Pack { seq, fill, export } => emit(
            &commands::cmd_pack(&cfg, &seq, fill, export.as_deref())?,
            &cfg,
        ),
        Command::All => emit(&commands::cmd_all(&cfg)?, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("compack: {f}");
            ExitCode::from(match f {
                Failure::Usage(_) => 2,
                Failure::Core(Error::PrecisionExhausted { .. } | Error::NodeBudgetExceeded(_)) => 3,
                _ => 1,
            })
        }
    }
}
