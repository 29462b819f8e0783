//! Command-line front end. Exit codes: 0 on success or agreement, 1 on a
//! verified disagreement or failed check, 2 on usage or parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mcds::analysis::{
    self, branching_number, growth_check, render_trace, BranchingVector, TreeStats,
};
use mcds::enumerator::{enumerate_mcds, EnumOptions};
use mcds::format::{parse_graph, serialize_graph, solution_file};
use mcds::generators::{lower_bound_graph, random_convex_graph, RandomParams};
use mcds::graph::ConvexBipartiteGraph;
use mcds::oracle::{enumerate_mcds_bruteforce, DEFAULT_MAX_N};

#[derive(Parser)]
#[command(
    name = "mcds",
    version,
    about = "Enumerate minimal connected dominating sets of convex bipartite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the branching enumeration and print the solution file.
    Enumerate {
        file: PathBuf,
        /// Write the search-tree trace to this path.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Print run statistics to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Enumerate by exhaustive subset scan (the ground truth).
    Oracle {
        file: PathBuf,
        /// Refuse graphs with more vertices than this.
        #[arg(long = "max-n", default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Run both engines and compare their solution sets.
    Verify { file: PathBuf },
    /// Produce instances.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Validate a graph file and report its structure.
    Check { file: PathBuf },
    /// Branching number of a comma-separated vector, to 12 decimals.
    Alpha {
        #[arg(long, value_delimiter = ',', required = true)]
        vector: Vec<u32>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Statistics, growth bound, and measure verification for a trace.
    Stats {
        #[arg(long)]
        trace: PathBuf,
        /// Vertex count of the instance the trace came from.
        #[arg(short = 'n', long = "n")]
        n: usize,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// The chain-of-triples family with exactly 3^k solutions.
    Lower {
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A seeded random connected instance.
    Random {
        #[arg(long)]
        nu: usize,
        #[arg(long)]
        nw: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_retries: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read_graph(path: &Path) -> Result<ConvexBipartiteGraph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn print_stats(stats: &TreeStats, duplicates: usize) {
    eprintln!("nodes {}", stats.nodes);
    eprintln!("leaves {}", stats.leaves);
    eprintln!("max-depth {}", stats.max_depth);
    eprintln!("emitted {}", stats.solutions_emitted);
    eprintln!("duplicates {duplicates}");
    eprintln!("measure-violations {}", stats.measure_violations);
    let steps: Vec<String> = stats
        .step_counts
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    eprintln!("steps {}", steps.join(" "));
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Enumerate { file, trace, stats } => {
            let g = read_graph(&file)?;
            let opts = EnumOptions {
                collect_trace: trace.is_some(),
            };
            let result = enumerate_mcds(&g, &opts);
            print!("{}", solution_file(&result.solutions));
            if let Some(path) = trace {
                fs::write(&path, render_trace(&result.trace))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            if stats {
                print_stats(&result.stats, result.duplicates_discarded);
            }
            Ok(0)
        }
        Command::Oracle { file, max_n } => {
            let g = read_graph(&file)?;
            let sols = enumerate_mcds_bruteforce(&g, max_n).map_err(|e| e.to_string())?;
            print!("{}", solution_file(&sols));
            Ok(0)
        }
        Command::Verify { file } => {
            let g = read_graph(&file)?;
            let fast = enumerate_mcds(&g, &EnumOptions::default());
            let slow = enumerate_mcds_bruteforce(&g, DEFAULT_MAX_N).map_err(|e| e.to_string())?;
            if fast.solutions == slow {
                println!("agree: {} solutions on {} vertices", slow.count(), g.n());
                Ok(0)
            } else {
                let (only_fast, only_slow) = fast.solutions.symmetric_difference(&slow);
                println!(
                    "disagree: enumerator {} vs oracle {}",
                    fast.solutions.count(),
                    slow.count()
                );
                for d in only_fast {
                    println!("enumerator-only: {d}");
                }
                for d in only_slow {
                    println!("oracle-only: {d}");
                }
                Ok(1)
            }
        }
        Command::Gen { what } => match what {
            GenCommand::Lower { k, output } => {
                let g = lower_bound_graph(k).map_err(|e| e.to_string())?;
                write_or_print(&output, &serialize_graph(&g))?;
                Ok(0)
            }
            GenCommand::Random {
                nu,
                nw,
                seed,
                max_retries,
                output,
            } => {
                let p = RandomParams {
                    n_u: nu,
                    n_w: nw,
                    seed,
                    max_retries,
                };
                let g = random_convex_graph(&p).map_err(|e| e.to_string())?;
                write_or_print(&output, &serialize_graph(&g))?;
                Ok(0)
            }
        },
        Command::Check { file } => {
            let g = read_graph(&file)?;
            let report = g.validate();
            println!("vertices {} (|U| = {}, |W| = {})", g.n(), g.n_u(), g.n_w());
            println!("edges {}", g.edge_count());
            println!("connected {}", if report.connected { "yes" } else { "no" });
            match report.star_center {
                Some(c) => println!("star yes (center {c})"),
                None => println!("star no"),
            }
            if !report.isolated_vertices.is_empty() {
                println!("isolated {}", report.isolated_vertices);
            }
            Ok(if report.connected { 0 } else { 1 })
        }
        Command::Alpha { vector, tol } => {
            let v = BranchingVector::new(vector).map_err(|e| e.to_string())?;
            let alpha = branching_number(&v, tol).map_err(|e| e.to_string())?;
            println!("{alpha:.12}");
            Ok(0)
        }
        Command::Stats { trace, n } => {
            let text =
                fs::read_to_string(&trace).map_err(|e| format!("{}: {e}", trace.display()))?;
            let nodes = analysis::parse_trace(&text).map_err(|e| e.to_string())?;
            let mut stats = analysis::stats_from_trace(&nodes).map_err(|e| e.to_string())?;
            let report = analysis::verify_measure_trace(&text).map_err(|e| e.to_string())?;
            stats.measure_violations = report.violations.len();
            print_stats(&stats, stats.duplicates);
            let growth_ok = growth_check(&stats, n);
            println!(
                "growth leaves={} n={} bound=n^2*{}^n {}",
                stats.leaves,
                n,
                analysis::GROWTH_BASE,
                if growth_ok { "ok" } else { "exceeded" }
            );
            for v in &report.violations {
                println!("measure-violation node {}: {}", v.node, v.message);
            }
            if growth_ok && report.is_clean() {
                println!("measure ok");
                Ok(0)
            } else {
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
