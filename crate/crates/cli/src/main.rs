mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lattice_skein::{Budget, Exec, Oracle};

#[derive(Parser, Debug)]
#[command(name = "skein", version, about = "Coefficients of Catalan states of the lattice crossing L(m,n)")]
struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true, env = "SKEIN_THREADS")]
    threads: Option<usize>,

    /// Run the enumeration kernels on the calling thread only.
    #[arg(long, global = true)]
    serial: bool,

    /// Largest full state sum allowed, in Kauffman states.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    max_full: u64,

    /// Largest restricted state sum allowed, in sequences.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_restricted: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct StateSource {
    /// State as a JSON file path or inline JSON.
    #[arg(long, conflicts_with = "b")]
    pub state: Option<String>,

    /// State realized by a sequence such as "(3,4,4,3)"; needs --n.
    #[arg(long, requires = "n")]
    pub b: Option<String>,

    /// Width for --b.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every coefficient of the expansion of L(m,n).
    Expand {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Sum over the (n+1)^m row-monotone states only (floor-free buckets).
        #[arg(long)]
        restricted: bool,
        /// Print only the bucket of this state (JSON file path or inline JSON).
        #[arg(long)]
        filter_state: Option<String>,
    },
    /// Coefficient of one state with its property report.
    Coeff {
        #[command(flatten)]
        source: StateSource,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
    },
    /// Cross-check every route on all shapes up to the given size.
    Verify {
        #[arg(long)]
        max_m: usize,
        #[arg(long)]
        max_n: usize,
        /// Random trees for the plucking checks.
        #[arg(long, default_value_t = 200)]
        trees: usize,
        #[arg(long, default_value_t = 10)]
        max_edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smooth with the opposite marker convention (fault injection).
        #[arg(long, hide = true)]
        flip_convention: bool,
    },
    /// Write the Hasse diagram, the dual tree or the state itself.
    Export {
        #[command(flatten)]
        source: StateSource,
        #[arg(long, value_enum)]
        what: ExportWhat,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Time the serial and parallel state sums.
    Bench {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        restricted: bool,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Auto,
    Tree,
    Fiber,
    Oracle,
    Factored,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    Hasse,
    Tree,
    State,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let oracle = Oracle::new(
        Budget {
            full_states: cli.max_full,
            restricted_states: cli.max_restricted,
        },
        if cli.serial { Exec::Serial } else { Exec::Parallel },
    );
    let result = match cli.command {
        Command::Expand {
            m,
            n,
            restricted,
            filter_state,
        } => commands::expand(m, n, restricted, filter_state.as_deref(), cli.format, &oracle),
        Command::Coeff { source, route } => commands::coeff(&source, route, cli.format, &oracle),
        Command::Verify {
            max_m,
            max_n,
            trees,
            max_edges,
            seed,
            flip_convention,
        } => commands::verify(max_m, max_n, trees, max_edges, seed, flip_convention, cli.format, &oracle),
        Command::Export { source, what, out } => commands::export(&source, what, out.as_deref(), cli.format, &oracle),
        Command::Bench { m, n, restricted, reps } => commands::bench(m, n, restricted, reps, &oracle),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(out) = e.stdout() {
                print!("{out}");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
