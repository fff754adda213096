use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use oscmap::cli::commands;
use oscmap::cli::config::{self, Overrides, RunConfig};
use oscmap::cli::CliError;

/// Map N-level quantum systems onto classical coupled oscillators,
/// propagate both descriptions, and compare them (units: hbar = 1).
#[derive(Parser)]
#[command(name = "oscmap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write eigenvalues, eigenvectors and weak-coupling diagnostics
    Spectrum(CommonArgs),
    /// Propagate the configured methods and write one trajectory CSV each
    Evolve(CommonArgs),
    /// Compare exactly two methods on a shared time grid
    Compare(CommonArgs),
    /// Sweep the dimer coupling and tabulate deviation metrics
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file (flat key = value with [sections]); flags win over it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model kind: dimer | ring | dense | lc
    #[arg(long)]
    model: Option<String>,
    /// Site transition frequency ε (hbar = 1)
    #[arg(long)]
    epsilon: Option<f64>,
    /// Quantum coupling V
    #[arg(long)]
    v: Option<f64>,
    /// Oscillator natural frequency ω (same number as ε)
    #[arg(long)]
    omega: Option<f64>,
    /// Classical coupling K; converted via V = K/(2ω)
    #[arg(long)]
    k: Option<f64>,
    /// Ring size
    #[arg(long)]
    n: Option<usize>,
    /// Per-site damping rates (single value broadcasts)
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    /// Fixed integration step
    #[arg(long)]
    dt: Option<f64>,
    /// Final time
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Number of output samples over [0, t_end]
    #[arg(long)]
    samples: Option<usize>,
    /// Propagation methods (comma separated)
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Output file prefix
    #[arg(long)]
    out: Option<PathBuf>,
    /// Concurrent sweep workers
    #[arg(long)]
    workers: Option<usize>,
    /// Sweep parameter: k or v
    #[arg(long = "sweep-param")]
    sweep_param: Option<String>,
    /// Sweep values (comma separated)
    #[arg(long = "sweep-values", value_delimiter = ',')]
    sweep_values: Option<Vec<f64>>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            model: self.model.clone(),
            epsilon: self.epsilon,
            v: self.v,
            omega: self.omega,
            k: self.k,
            n: self.n,
            gamma: self.gamma.clone(),
            dt: self.dt,
            t_end: self.t_end,
            samples: self.samples,
            methods: self.methods.clone(),
            out: self.out.clone(),
            workers: self.workers,
            sweep_param: self.sweep_param.clone(),
            sweep_values: self.sweep_values.clone(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let (args, runner): (
        &CommonArgs,
        fn(&RunConfig) -> Result<Vec<PathBuf>, CliError>,
    ) = match &cli.command {
        Command::Spectrum(a) => (a, commands::run_spectrum),
        Command::Evolve(a) => (a, commands::run_evolve),
        Command::Compare(a) => (a, commands::run_compare),
        Command::Sweep(a) => (a, commands::run_sweep),
    };

    let result =
        config::load(args.config.as_deref(), &args.overrides()).and_then(|cfg| runner(&cfg));
    match result {
        Ok(files) => {
            for file in files {
                println!("wrote {}", file.display());
            }
        }
        Err(err) => {
            eprintln!("oscmap: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
