//! The `rigorkit` command line: one binary, one subcommand per pipeline.
//!
//! Exit status: 0 when every counted task succeeded, 1 on a verification
//! failure, 2 on bad usage or malformed input, 3 on I/O errors.

mod commands;
mod manifest;

pub use commands::parse_box;
pub use manifest::{InputHash, RunManifest, TaskRecord, MANIFEST_FORMAT};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable naming the default external LP solver.
pub const SOLVER_ENV: &str = "RIGORKIT_LP_SOLVER";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: std::io::Error) -> CliError {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rigorkit",
    version,
    about = "Rigorous bounds, inequality proofs, plane graph enumeration and LP certificates"
)]
pub struct Cli {
    /// Write a JSON run manifest to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
    /// Maximum number of worker threads.
    #[arg(long, short = 'j', global = true, value_name = "N")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified range of a function over a box.
    Bound(BoundArgs),
    /// Prove an inequality over a box, or a single corpus entry file.
    Prove(ProveArgs),
    /// Run or export the inequality corpus.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Enumerate plane graphs from a seed.
    Enumerate(EnumerateArgs),
    /// Compare two graph archives up to isomorphism.
    ArchiveDiff(ArchiveDiffArgs),
    /// Check an LP infeasibility certificate.
    LpCheck(LpCheckArgs),
    /// Print outward-rounded enclosures of the named constants.
    Constants(ConstantsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    Delta,
    A0,
    A1,
    A2,
    A3,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bernstein,
    Interval,
}

#[derive(Debug, Args)]
pub struct Target {
    /// A built-in function of the six edge lengths.
    #[arg(long, value_enum, conflicts_with = "expr", required_unless_present = "expr")]
    pub function: Option<FunctionArg>,
    /// A JSON expression tree file.
    #[arg(long, value_name = "FILE")]
    pub expr: Option<PathBuf>,
    /// `lo:hi`, one per variable separated by commas, or a single pair for
    /// every variable. Defaults to [2, 2.51] per edge for built-in functions.
    #[arg(long = "box", value_name = "BOX")]
    pub domain: Option<String>,
    /// Defaults to bernstein for polynomials and interval otherwise.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub target: Target,
    /// Stop subdividing once the enclosure is within this of the attained range.
    #[arg(long, default_value = "1/1000")]
    pub tolerance: String,
    #[arg(long, default_value_t = 1 << 12)]
    pub budget: usize,
    /// Bits of precision for interval evaluation.
    #[arg(long, default_value_t = 64)]
    pub bits: u32,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    /// A corpus entry file; replaces the target and relation options.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["function", "expr", "le", "ge", "lt", "gt"])]
    pub entry: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "expr")]
    pub function: Option<FunctionArg>,
    #[arg(long, value_name = "FILE")]
    pub expr: Option<PathBuf>,
    #[arg(long = "box", value_name = "BOX")]
    pub domain: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Prove `f ≤ C`; `C` is a rational or a constant name.
    #[arg(long, value_name = "C", group = "relation")]
    pub le: Option<String>,
    #[arg(long, value_name = "C", group = "relation")]
    pub ge: Option<String>,
    #[arg(long, value_name = "C", group = "relation")]
    pub lt: Option<String>,
    #[arg(long, value_name = "C", group = "relation")]
    pub gt: Option<String>,
    /// Margin for strict relations.
    #[arg(long, default_value = "1/1000000")]
    pub epsilon: String,
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Verify corpus entries and print one row per entry.
    Run(CorpusRunArgs),
    /// Write the built-in corpus as JSON files.
    Export {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// List entry ids.
    List(CorpusSource),
}

#[derive(Debug, Args)]
pub struct CorpusSource {
    /// Load entries from this directory instead of the built-in corpus.
    #[arg(long, value_name = "DIR")]
    pub dir: Option<PathBuf>,
    /// Glob over entry ids.
    #[arg(long, value_name = "GLOB")]
    pub filter: Option<String>,
}

#[derive(Debug, Args)]
pub struct CorpusRunArgs {
    #[command(flatten)]
    pub source: CorpusSource,
    /// Override every entry's box budget.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Plane,
    Tame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArchiveFormatArg {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Seed parameter: the outer face has p + 3 vertices.
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub max_vertices: usize,
    #[arg(long, value_enum, default_value = "plane")]
    pub mode: ModeArg,
    #[arg(long)]
    pub max_graphs: Option<usize>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Keep one graph per isomorphism class.
    #[arg(long)]
    pub reduce: bool,
    /// Write the final graphs as an archive.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ArchiveFormatArg,
}

#[derive(Debug, Args)]
pub struct ArchiveDiffArgs {
    pub a: PathBuf,
    pub b: PathBuf,
}

#[derive(Debug, Args)]
pub struct LpCheckArgs {
    /// Constraint file.
    #[arg(long, value_name = "FILE")]
    pub system: PathBuf,
    /// Multipliers as `name value` lines (row names or `r<i>`) or a `(v0, v1, ..)` vector.
    #[arg(long, value_name = "FILE", conflicts_with = "solver")]
    pub certificate: Option<PathBuf>,
    /// External solver run as `<solver> <problem.lp> <solution>`. Falls back
    /// to the environment variable RIGORKIT_LP_SOLVER, then the built-in solver.
    #[arg(long, value_name = "PATH")]
    pub solver: Option<PathBuf>,
    #[arg(long, default_value_t = 60)]
    pub timeout: u64,
    /// Also write the midpoint LP handed to solvers.
    #[arg(long, value_name = "FILE")]
    pub emit_lp: Option<PathBuf>,
    /// Bits used to enclose irrational coefficients.
    #[arg(long, default_value_t = 64)]
    pub bits: u32,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// One of PI, SQRT2, ATAN_SQRT2_OVER_5, PT, DELTA_OCT (any case). All when omitted.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value_t = 64)]
    pub bits: u32,
}

/// What a command produced before the manifest is assembled.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub inputs: Vec<InputHash>,
    pub tasks: Vec<TaskRecord>,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.tasks.iter().all(|t| !t.counts || t.ok)
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bound(_) => "bound",
            Command::Prove(_) => "prove",
            Command::Corpus(CorpusCommand::Run(_)) => "corpus run",
            Command::Corpus(CorpusCommand::Export { .. }) => "corpus export",
            Command::Corpus(CorpusCommand::List(_)) => "corpus list",
            Command::Enumerate(_) => "enumerate",
            Command::ArchiveDiff(_) => "archive-diff",
            Command::LpCheck(_) => "lp-check",
            Command::Constants(_) => "constants",
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Bound(a) => commands::bound(a),
        Command::Prove(a) => commands::prove(a),
        Command::Corpus(CorpusCommand::Run(a)) => commands::corpus_run(a),
        Command::Corpus(CorpusCommand::Export { out }) => commands::corpus_export(out),
        Command::Corpus(CorpusCommand::List(a)) => commands::corpus_list(a),
        Command::Enumerate(a) => commands::enumerate(a, cli.jobs),
        Command::ArchiveDiff(a) => commands::archive_diff(a),
        Command::LpCheck(a) => commands::lp_check(a),
        Command::Constants(a) => commands::constants(a),
    }
}

/// Parse `argv`, run, print, write the manifest. Returns the exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return EXIT_USAGE;
        }
        // Only fails if a pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let start = Instant::now();
    let result = execute(&cli);
    let total_millis = start.elapsed().as_millis();
    let (code, outcome) = match result {
        Ok(o) => (if o.ok() { EXIT_OK } else { EXIT_VERIFY }, Some(o)),
        Err(e) => {
            eprintln!("error: {e}");
            (e.exit_code(), None)
        }
    };
    if let Some(o) = &outcome {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(o.stdout.as_bytes());
        let _ = out.flush();
    }
    if let Some(path) = &cli.manifest {
        let args = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
        let mut m = RunManifest::new(cli.command.name(), args);
        if let Some(o) = outcome {
            m.inputs = o.inputs;
            m.tasks = o.tasks;
        }
        m.exit_code = code;
        m.total_millis = total_millis;
        if let Err(e) = std::fs::write(path, m.to_json()) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_IO;
        }
    }
    code
}
