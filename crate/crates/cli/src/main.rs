mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nuretract::graph::DEFAULT_SIZE_CAP;
use nuretract::obstruction::LeafColors;
use nuretract::{RunReport, RunStatus};

#[derive(Parser)]
#[command(name = "nuretract", version, about = "Homomorphism, retraction and NU-polymorphism checks for small graphs")]
struct Cli {
    /// Output format of the run report.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for randomized commands.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Require distinct colors on the leaves of H-trees.
    #[arg(long, global = true)]
    strict_leaf_colors: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct TreeBounds {
    #[arg(long, default_value_t = 3)]
    max_leaves: usize,
    #[arg(long, default_value_t = 8)]
    max_vertices: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a colored homomorphism from X to H^c.
    Hom { x: PathBuf, template: PathBuf },
    /// Decide whether H is a retract of G along an induced embedding.
    Retract {
        g: PathBuf,
        h: PathBuf,
        /// Embedding as `h:g` pairs, e.g. `0:0,1:1`.
        #[arg(long)]
        embed: String,
    },
    /// Search for a near-unanimity polymorphism of the given arity.
    Nu {
        h: PathBuf,
        #[arg(long, default_value_t = 3)]
        arity: usize,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        cap: usize,
    },
    /// Vertices on shortest paths between a pair.
    Interval {
        h: PathBuf,
        /// Pair as `u,v`.
        #[arg(long)]
        pair: String,
    },
    /// Interval criterion for a 3-NU polymorphism of a bipartite graph.
    Bandelt { h: PathBuf },
    /// Build the H-embed of a colored graph.
    Embed {
        g: PathBuf,
        h: PathBuf,
        /// Write the embed graph to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Elementary critical obstructions of a template.
    Obstructions {
        h: PathBuf,
        /// Use the directed family even for a symmetric template.
        #[arg(long)]
        directed: bool,
        /// Longest parity path or odd cycle for undirected templates.
        #[arg(long, default_value_t = 7)]
        max_length: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerate H-trees up to isomorphism.
    Trees {
        h: PathBuf,
        #[command(flatten)]
        bounds: TreeBounds,
        /// Keep only critical obstructions.
        #[arg(long)]
        critical: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check an obstruction family as a duality up to a size bound.
    Duality {
        h: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_x: usize,
        /// Include structures with loops.
        #[arg(long)]
        loops: bool,
    },
    /// Bounded absolute-retract check for a host graph.
    Archeck {
        g: PathBuf,
        h: PathBuf,
        #[arg(long)]
        embed: String,
        #[command(flatten)]
        bounds: TreeBounds,
    },
    /// Cross-check the bridging results on a fixture directory.
    Verify {
        #[arg(value_enum)]
        what: VerifyTarget,
        #[arg(long)]
        fixtures: PathBuf,
        /// Random instances per template (lemma2).
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Arities to check (lemma3, theorem1-forward).
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4])]
        arity: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        cap: usize,
    },
    /// Re-verify every certificate in a JSON run report.
    Recheck { report: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    Lemma2,
    Lemma3,
    Theorem1Forward,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let leaf_colors = if cli.strict_leaf_colors { LeafColors::Distinct } else { LeafColors::Single };
    let mut ctx = commands::Context { inputs: Vec::new(), seed: cli.seed, leaf_colors };
    let start = Instant::now();
    let mut report = match commands::run(&cli.command, &mut ctx, argv.clone()) {
        Ok(r) => r,
        Err(message) => {
            eprintln!("error: {message}");
            RunReport::new(argv, RunStatus::InputError, message)
        }
    };
    report.inputs = ctx.inputs;
    report.elapsed_ms = start.elapsed().as_millis() as u64;

    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match cli.format {
        Format::Json => println!("{json}"),
        Format::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit_code as u8)
}
