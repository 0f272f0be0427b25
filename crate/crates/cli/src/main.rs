use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qtorus_cli::commands::{self, Format, Outcome};
use qtorus_cli::{CliError, InstanceConfig};
use qtorus_core::suites::Suite;

#[derive(Parser)]
#[command(name = "qtorus", version, about = "Exact checks for rational quantum tori and their graded modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Instance configuration (JSON).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// JSON output (the default).
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Human-readable output.
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Basis, axis orders and index of the radical.
    Radical(Common),
    /// Brackets between homogeneous generators with degrees in [-K, K]^d.
    Structure {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        degree: i64,
    },
    /// Runs verification suites; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated suites; `lie` and `all` are accepted.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Applies one element to a box vector.
    Act {
        #[command(flatten)]
        common: Common,
        /// Element JSON, or @path.
        #[arg(long)]
        element: String,
        /// Box vector JSON, or @path.
        #[arg(long)]
        vector: String,
    },
    /// The scalars lambda(s, n) over the box and the extracted twist.
    Lambda {
        #[command(flatten)]
        common: Common,
        /// Degree s as comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Checks the intertwiner between G_g and F_{g^-1}.
    Iso(Common),
    /// Searches for beta and a character identifying the module with F^beta.
    SearchBeta(Common),
    /// Cyclic-generation evidence for irreducibility on the inner box.
    Irreducible(Common),
}

fn load(c: &Common) -> Result<(InstanceConfig, Format), CliError> {
    let mut cfg = InstanceConfig::load(&c.config)?;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(n) = c.samples {
        if n == 0 {
            return Err(CliError::Config("samples must be positive".into()));
        }
        cfg.samples = n;
    }
    Ok((cfg, if c.text { Format::Text } else { Format::Json }))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Radical(c) => {
            let (cfg, f) = load(&c)?;
            Ok(commands::radical(&cfg, f))
        }
        Command::Structure { common, degree } => {
            let (cfg, f) = load(&common)?;
            commands::structure(&cfg, degree, f)
        }
        Command::Verify { common, suite } => {
            let suites = Suite::parse_list(&suite)?;
            let (cfg, f) = load(&common)?;
            commands::verify(&cfg, &suites, f)
        }
        Command::Act { common, element, vector } => {
            let (cfg, f) = load(&common)?;
            commands::act(&cfg, &commands::read_json_arg(&element)?, &commands::read_json_arg(&vector)?, f)
        }
        Command::Lambda { common, s } => {
            let (cfg, f) = load(&common)?;
            let s = commands::parse_point(&s, cfg.module.rank())?;
            commands::lambda(&cfg, &s, f)
        }
        Command::Iso(c) => {
            let (cfg, f) = load(&c)?;
            commands::iso(&cfg, f)
        }
        Command::SearchBeta(c) => {
            let (cfg, f) = load(&c)?;
            commands::search_beta(&cfg, f)
        }
        Command::Irreducible(c) => {
            let (cfg, f) = load(&c)?;
            commands::irreducible(&cfg, f)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            for line in &out.lines {
                // a closed pipe (e.g. `| head`) is not an error worth reporting
                if writeln!(stdout, "{line}").is_err() {
                    break;
                }
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
