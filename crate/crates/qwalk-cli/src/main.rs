//! `qwalk`: quantum-walk search experiments from the command line.
//!
//! Subcommands: graph, connectivity, spectrum, sweep, search, schedule,
//! predict, compare. Outputs are CSV (plot-ready, header row, 12
//! significant digits) or JSON. Exit codes: 0 ok, 2 configuration error,
//! 3 numerical contract violation.

mod commands;
mod emit;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Quantum walk search on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GraphArg {
    /// Graph family spec, e.g. complete:n=64, joined_complete:N=1024,
    /// simplex_complete:M=100, cubic:d=2,side=8
    #[arg(long)]
    graph: String,
}

#[derive(Args, Clone)]
struct SearchContextArgs {
    /// Marked vertex (default: the family canonical choice, vertex 0)
    #[arg(long)]
    marked: Option<usize>,
    /// Hamiltonian mode: laplacian (exact) or adjacency (regular-graph form)
    #[arg(long, default_value = "adjacency")]
    mode: String,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format
    #[arg(long = "out", default_value = "csv", value_parser = ["csv", "json"])]
    out: String,
    /// Write to a file instead of stdout
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a graph as JSON or edge-list text
    Graph {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "json", value_parser = ["json", "edgelist"])]
        format: String,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Connectivity report for one or more graphs
    Connectivity {
        /// Graph spec; repeat the flag for several graphs
        #[arg(long, required = true)]
        graph: Vec<String>,
        /// Emit a CSV table instead of JSON
        #[arg(long)]
        table: bool,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Eigenvalues and probe overlaps of the reduced search Hamiltonian
    Spectrum {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        ctx: SearchContextArgs,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Sweep the jumping rate and record spectra and probe overlaps
    Sweep {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        ctx: SearchContextArgs,
        /// Jumping-rate range lo:hi:steps
        #[arg(long)]
        gammas: String,
        /// Probes: s (uniform) and/or partition cells a,b,...
        #[arg(long, default_value = "s,a")]
        probes: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evolve at a fixed jumping rate and record cell probabilities
    Search {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        ctx: SearchContextArgs,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        tmax: f64,
        /// Sample step (default tmax/2000)
        #[arg(long)]
        dt: Option<f64>,
        /// Observed cells (default: the marked cell a)
        #[arg(long, default_value = "a")]
        observables: String,
        /// full, reduced, or auto (full when the graph is small enough)
        #[arg(long, default_value = "auto", value_parser = ["auto", "full", "reduced"])]
        space: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a piecewise-constant jumping-rate schedule
    Schedule {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        ctx: SearchContextArgs,
        /// Stages g1:t1,g2:t2,...
        #[arg(long, conflicts_with = "auto")]
        stages: Option<String>,
        /// Use the schedule the closed-form predictions call for
        #[arg(long)]
        auto: bool,
        /// With --auto, use the exact first-stage critical rate instead of 2/M
        #[arg(long)]
        exact_gamma: bool,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value = "a,b")]
        observables: String,
        #[arg(long, default_value = "auto", value_parser = ["auto", "full", "reduced"])]
        space: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form predictions for a graph family
    Predict {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Predicted vs numeric critical rate, gap, runtime, and peak
    Compare {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
}

fn init_thread_pool() -> Result<(), commands::CliError> {
    if let Ok(value) = std::env::var("QWALK_THREADS") {
        let threads: usize = value.parse().map_err(|_| {
            commands::CliError::Config(format!(
                "QWALK_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
        if threads == 0 {
            return Err(commands::CliError::Config(
                "QWALK_THREADS must be a positive integer".into(),
            ));
        }
        // ignore the error if a pool already exists (e.g. in tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_thread_pool().and_then(|()| match cli.command {
        Command::Graph {
            graph,
            format,
            output,
        } => commands::graph(&graph.graph, &format, output.as_deref()),
        Command::Connectivity {
            graph,
            table,
            output,
        } => commands::connectivity(&graph, table, output.as_deref()),
        Command::Spectrum {
            graph,
            ctx,
            gamma,
            output,
        } => commands::spectrum(&graph.graph, &ctx, gamma, output.as_deref()),
        Command::Sweep {
            graph,
            ctx,
            gammas,
            probes,
            output,
        } => commands::sweep(&graph.graph, &ctx, &gammas, &probes, &output),
        Command::Search {
            graph,
            ctx,
            gamma,
            tmax,
            dt,
            observables,
            space,
            output,
        } => commands::search(
            &graph.graph,
            &ctx,
            gamma,
            tmax,
            dt,
            &observables,
            &space,
            &output,
        ),
        Command::Schedule {
            graph,
            ctx,
            stages,
            auto,
            exact_gamma,
            dt,
            observables,
            space,
            output,
        } => commands::schedule(
            &graph.graph,
            &ctx,
            stages.as_deref(),
            auto,
            exact_gamma,
            dt,
            &observables,
            &space,
            &output,
        ),
        Command::Predict { graph, output } => commands::predict(&graph.graph, output.as_deref()),
        Command::Compare { graph, output } => commands::compare(&graph.graph, output.as_deref()),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
