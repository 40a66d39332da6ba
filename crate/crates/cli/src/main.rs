mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::Config;
use manifest::{write_atomic, RunManifest};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] orthoforms::Error),
    #[error("{0}")]
    Usage(String),
    #[error("genus cache `{name}` not found in {dir}; create it with `orthoforms genus --lattice NAME --name {name}` or pass a file path")]
    CacheMiss { name: String, dir: String },
    #[error("validation failed: {0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Parser, Debug)]
#[command(name = "orthoforms", version, about = "Orthogonal modular forms on definite lattices")]
struct Cli {
    /// Worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Genus cache directory (overrides the config file and ORTHOFORMS_CACHE).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// JSON config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the output here, with a run manifest beside it. For `genus` the
    /// file is the genus cache itself.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Classify one neighbour per O(Λ)-orbit of isotropic lines.
    #[arg(long, global = true)]
    orbit_mode: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct LatticeArg {
    /// Named lattice such as A2, E8+E8 or A6+A2.
    #[arg(long, conflicts_with = "gram")]
    pub lattice: Option<String>,
    /// JSON file of the form {"gram": [[...], ...]}.
    #[arg(long)]
    pub gram: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate a genus and store it in the cache.
    Genus {
        #[command(flatten)]
        lattice: LatticeArg,
        /// Neighbour prime.
        #[arg(long)]
        prime: Option<u64>,
        /// Cache entry name.
        #[arg(long)]
        name: Option<String>,
    },
    /// Hecke matrix T_{p,k}.
    Hecke {
        #[arg(long)]
        genus: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Rational eigenforms and irreducible blocks.
    Eigen {
        #[arg(long)]
        genus: String,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// λ_{p,k} of one eigenform from the neighbours of a single class.
    Eigenvalue {
        #[arg(long)]
        genus: String,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Recompute at a second class.
        #[arg(long)]
        verify: bool,
    },
    /// Rank-4 L-polynomial of an eigenform.
    Lpoly4 {
        #[arg(long)]
        genus: String,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        p: u64,
    },
    /// Siegel theta series of a lattice or of a form.
    Theta {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long)]
        genus: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "genus")]
        form: Option<String>,
        #[arg(long, default_value_t = 1)]
        g: usize,
        #[arg(long)]
        bound: Option<usize>,
        /// Permit g = 3, which is expensive.
        #[arg(long)]
        allow_g3: bool,
    },
    /// Depth estimate of a form.
    Depth {
        #[arg(long)]
        genus: String,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = 2)]
        gmax: usize,
        /// Bound per genus g = 1, 2, ...
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<usize>,
    },
    /// Kernel of θ⁽²⁾ against classes without improper automorphisms.
    Conjecture12 {
        /// A single cached genus instead of the fixture list.
        #[arg(long)]
        genus: Option<String>,
        #[arg(long, default_value = "fixtures/rank6_prime_discriminants.json")]
        fixture: PathBuf,
        #[arg(long, default_value_t = 150)]
        max_d: i64,
        #[arg(long, default_value_t = 20)]
        bound1: usize,
        #[arg(long, default_value_t = 6)]
        bound2: usize,
        #[arg(long, default_value_t = 2)]
        window2: usize,
    },
    /// Check Hecke matrix identities, or with --form the eigenvalues of one
    /// form against a lift family; exits nonzero on failure.
    Verify {
        #[arg(long)]
        genus: String,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, allow_hyphen_values = true, requires = "family")]
        form: Option<String>,
        /// eisenstein, sym2-depth1, saito-kurokawa, ikeda-g4 or miyawaki.
        #[arg(long, requires = "form")]
        family: Option<String>,
        /// a_p tables, comma separated.
        #[arg(long, value_delimiter = ',')]
        ap: Vec<PathBuf>,
    },
    /// Congruence moduli between two rational eigenforms.
    Congruence {
        #[arg(long)]
        genus: String,
        /// Indices into the eigenform list of `eigen`.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        forms: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        threshold: Option<u64>,
    },
    /// Time Hecke computations on a built-in suite.
    Bench {
        /// d1369, d193, d39 or empty.
        #[arg(long)]
        suite: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Genus { .. } => "genus",
            Command::Hecke { .. } => "hecke",
            Command::Eigen { .. } => "eigen",
            Command::Eigenvalue { .. } => "eigenvalue",
            Command::Lpoly4 { .. } => "lpoly4",
            Command::Theta { .. } => "theta",
            Command::Depth { .. } => "depth",
            Command::Conjecture12 { .. } => "conjecture12",
            Command::Verify { .. } => "verify",
            Command::Congruence { .. } => "congruence",
            Command::Bench { .. } => "bench",
        }
    }
}

/// Text for stdout and, when different, for the --out file.
pub struct Output {
    pub stdout: String,
    pub file: Option<String>,
}

impl From<String> for Output {
    fn from(stdout: String) -> Self {
        Output { stdout, file: None }
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let mut cfg = Config::load(cli.config.as_deref())?;
    if let Some(dir) = &cli.cache_dir {
        cfg.cache_dir = dir.clone();
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    cfg.orbit_mode |= cli.orbit_mode;
    cfg.validate()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let ctx = commands::Context { cfg };
    let text = match cli.command {
        Command::Genus { lattice, prime, name } => return ctx.genus(&lattice, prime, name),
        Command::Hecke { genus, p, k } => ctx.hecke(&genus, p, k),
        Command::Eigen { genus, primes } => ctx.eigen(&genus, &primes),
        Command::Eigenvalue { genus, form, p, k, verify } => ctx.eigenvalue(&genus, &form, p, k, verify),
        Command::Lpoly4 { genus, form, p } => ctx.lpoly4(&genus, &form, p),
        Command::Theta { lattice, genus, form, g, bound, allow_g3 } => {
            ctx.theta(&lattice, genus.as_deref(), form.as_deref(), g, bound, allow_g3)
        }
        Command::Depth { genus, form, gmax, bounds } => ctx.depth(&genus, &form, gmax, &bounds),
        Command::Conjecture12 { genus, fixture, max_d, bound1, bound2, window2 } => {
            ctx.conjecture12(genus.as_deref(), &fixture, max_d, bound1, bound2, window2)
        }
        Command::Verify { genus, primes, form, family, ap } => match (form, family) {
            (Some(form), Some(family)) => ctx.verify_family(&genus, &primes, &form, &family, &ap),
            _ => ctx.verify(&genus, &primes),
        },
        Command::Congruence { genus, forms, primes, threshold } => ctx.congruence(&genus, &forms, &primes, threshold),
        Command::Bench { suite } => ctx.bench(&suite),
    }?;
    Ok(text.into())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let name = cli.command.name();
    let out = cli.out.clone();
    let start = Instant::now();
    let result = run(cli).and_then(|output| {
        if let Some(path) = &out {
            let text = output.file.as_ref().unwrap_or(&output.stdout);
            write_atomic(path, text)?;
            let m = RunManifest::new(name, args[1..].to_vec(), start.elapsed().as_millis(), text);
            write_atomic(&RunManifest::path_for(path), &serde_json::to_string_pretty(&m)?)?;
        }
        Ok(output.stdout)
    });
    match result {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(report)) => {
            println!("{report}");
            eprintln!("error: validation failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
