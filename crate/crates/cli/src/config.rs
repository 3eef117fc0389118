use std::path::PathBuf;

use clap::Args;
use dualshadow::optim::SearchOptions;
use dualshadow::Exponent;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 24301;
pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_ITERS: usize = 200;
pub const DEFAULT_SAMPLES: usize = 256;

/// Flags shared by every analysis command.
#[derive(Args, Clone, Debug)]
pub struct CommonArgs {
    /// Instance file (JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Exponent overriding the file's: a number, a fraction like 4/3, or inf.
    #[arg(long)]
    pub p: Option<Exponent>,
    /// Tolerances for tail certificates, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.2])]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Local ascents per supremum; 0 disables the searches.
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    /// Steps per local ascent.
    #[arg(long, default_value_t = DEFAULT_ITERS)]
    pub iters: usize,
    /// Random candidates screened per search, and range points sampled.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Budgets {
    pub restarts: usize,
    pub iterations: usize,
    pub samples: usize,
}

/// The resolved configuration, embedded verbatim in every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub input: Option<String>,
    pub p: Option<Exponent>,
    pub epsilons: Vec<f64>,
    pub seed: u64,
    pub budgets: Budgets,
    #[serde(skip)]
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(command: &'static str, args: &CommonArgs) -> Self {
        RunConfig {
            command,
            input: args.input.as_ref().map(|p| p.display().to_string()),
            p: args.p,
            epsilons: args.eps.clone(),
            seed: args.seed,
            budgets: Budgets { restarts: args.restarts, iterations: args.iters, samples: args.samples },
            out: args.out.clone(),
        }
    }

    pub fn search(&self) -> SearchOptions {
        SearchOptions {
            restarts: self.budgets.restarts,
            iterations: self.budgets.iterations,
            samples: self.budgets.samples,
            seed: self.seed,
            ..SearchOptions::default()
        }
    }
}
