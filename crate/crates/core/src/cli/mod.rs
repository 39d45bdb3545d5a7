//! Command-line front end.
//!
//! Exit codes: 0 when every asserted check passes, 1 when a check fails (the
//! failures go to stderr as JSON), 2 for usage and input errors.

mod commands;
mod report;

pub use report::{fmt_f, Failure, Format, SCHEMA_VERSION};

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cocycle::{Exponent, LpVector};
use crate::error::{Error, Result};
use crate::graphgen::{
    bounded_family, cycle_rep, margulis_rep, nonexpander_family, random_regular_rep,
    sample_class_specs, NonExpanderParams,
};
use crate::perm_rep::Representation;

#[derive(Parser, Debug)]
#[command(
    name = "cocycle-lab",
    version,
    about = "Signed-permutation actions, expansion diagnostics and cocycles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-component Cheeger constant, spectral gap and p-Poincaré constants
    Analyze(AnalyzeArgs),
    /// Check the cocycle identity and solve the coboundary equation
    Cocycle(CocycleArgs),
    /// Sign reduction, power map and the interpolation inequality
    Interpolate(InterpolateArgs),
    /// Classes of bounded components, the covering set and the bounded-case check
    Classify(ClassifyArgs),
    /// Write a generated representation as JSON, with a metadata sidecar
    Generate(GenerateArgs),
    /// Minimal solution norms on the cycle-arc family across depths
    Diverge(DivergeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Representation JSON file
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub input: Option<PathBuf>,
    /// Built-in family: `cycle N`, `margulis N`, `random N D`, `nonexpander DEPTH`, `bounded COPIES`
    #[arg(long, num_args = 1..=3, value_name = "NAME ARGS")]
    pub family: Option<Vec<String>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Exponents for the p-Poincaré constants
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub p: Vec<f64>,
    /// Largest component solved by exhaustive Cheeger search
    #[arg(long, default_value_t = crate::spectral::EXHAUSTIVE_CAP)]
    pub max_exhaustive: usize,
    /// Cheeger threshold for the expander-family verdict
    #[arg(long, default_value_t = 0.1)]
    pub threshold: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CocycleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Exponent of the norm minimized over solutions
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Cocycle JSON file `{"p": .., "values": {gen: [..]}}`
    #[arg(long, conflicts_with = "from_vector")]
    pub cocycle: Option<PathBuf>,
    /// Use the coboundary of a vector: a JSON file, or `random`
    #[arg(long)]
    pub from_vector: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub max_word_len: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct InterpolateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4.0)]
    pub q: f64,
    /// Vector JSON file; a seeded random signed vector otherwise
    #[arg(long)]
    pub vector: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Bound on component sizes
    #[arg(long, default_value_t = 5)]
    pub d: usize,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Vector JSON file; a seeded random vector otherwise
    #[arg(long)]
    pub vector: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Output file; the metadata sidecar is written next to it
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DivergeArgs {
    #[arg(long, default_value_t = 4.0)]
    pub q: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub depths: Vec<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A built-in family with its arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum FamilySpec {
    Cycle { n: usize },
    Margulis { n: usize },
    Random { n: usize, d: usize },
    Nonexpander { depth: usize },
    Bounded { copies: usize },
}

/// Size bound used for the built-in bounded family.
pub const BOUNDED_D: usize = 5;

impl FamilySpec {
    pub fn parse(words: &[String]) -> Result<Self> {
        let bad = || {
            Error::InvalidArgument(format!(
                "unknown family spec `{}`; expected cycle N | margulis N | random N D | nonexpander DEPTH | bounded COPIES",
                words.join(" ")
            ))
        };
        let nums = words[1..]
            .iter()
            .map(|w| w.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        Ok(match (words[0].as_str(), nums.as_slice()) {
            ("cycle", &[n]) => FamilySpec::Cycle { n },
            ("margulis", &[n]) => FamilySpec::Margulis { n },
            ("random", &[n, d]) => FamilySpec::Random { n, d },
            ("nonexpander", &[depth]) => FamilySpec::Nonexpander { depth },
            ("bounded", &[copies]) => FamilySpec::Bounded { copies },
            _ => return Err(bad()),
        })
    }

    pub fn build(&self, seed: u64) -> Result<Representation> {
        match *self {
            FamilySpec::Cycle { n } => cycle_rep(n),
            FamilySpec::Margulis { n } => margulis_rep(n),
            FamilySpec::Random { n, d } => random_regular_rep(n, d, seed),
            FamilySpec::Nonexpander { depth } => {
                Ok(nonexpander_family(depth, &NonExpanderParams::default())?.rep)
            }
            FamilySpec::Bounded { copies } => {
                bounded_family(BOUNDED_D, &sample_class_specs(), copies)
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cycle { n } => write!(f, "cycle {n}"),
            FamilySpec::Margulis { n } => write!(f, "margulis {n}"),
            FamilySpec::Random { n, d } => write!(f, "random {n} {d}"),
            FamilySpec::Nonexpander { depth } => write!(f, "nonexpander {depth}"),
            FamilySpec::Bounded { copies } => write!(f, "bounded {copies}"),
        }
    }
}

/// A loaded representation and where it came from.
pub struct Source {
    pub rep: Representation,
    pub family: Option<FamilySpec>,
}

impl SourceArgs {
    pub fn family_spec(&self) -> Result<Option<FamilySpec>> {
        self.family.as_deref().map(FamilySpec::parse).transpose()
    }

    pub fn load(&self) -> Result<Source> {
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path)?;
            let rep = Representation::from_json(&text).map_err(|e| match e {
                Error::Json(j) => Error::InvalidArgument(format!("{}: {j}", path.display())),
                other => other,
            })?;
            return Ok(Source { rep, family: None });
        }
        let spec = self
            .family_spec()?
            .expect("clap requires --input or --family");
        Ok(Source {
            rep: spec.build(self.seed)?,
            family: Some(spec),
        })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorFile {
    Tagged(LpVector),
    Plain(Vec<f64>),
}

pub(crate) fn read_vector(path: &Path, exponent: Exponent) -> Result<LpVector> {
    let text = std::fs::read_to_string(path)?;
    match serde_json::from_str::<VectorFile>(&text)? {
        VectorFile::Tagged(v) => Ok(v),
        VectorFile::Plain(x) => LpVector::new(exponent, x),
    }
}

/// Caps the worker pool at `COCYCLE_LAB_THREADS` when set.
fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var("COCYCLE_LAB_THREADS") {
        Ok(s) => s.trim().parse::<usize>().map_err(|_| {
            Error::InvalidArgument(format!("COCYCLE_LAB_THREADS must be a count, got `{s}`"))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = thread_pool().and_then(|pool| pool.install(|| commands::dispatch(&cli.command)));
    match outcome {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            let doc = serde_json::json!({ "failures": failures });
            eprintln!("{doc}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn family_specs() {
        assert_eq!(
            FamilySpec::parse(&words("random 16 2")).unwrap(),
            FamilySpec::Random { n: 16, d: 2 }
        );
        assert_eq!(FamilySpec::Cycle { n: 8 }.to_string(), "cycle 8");
        assert!(FamilySpec::parse(&words("cycle")).is_err());
        assert!(FamilySpec::parse(&words("cycle x")).is_err());
        assert!(FamilySpec::parse(&words("torus 3")).is_err());
        assert_eq!(FamilySpec::Bounded { copies: 0 }.build(0).unwrap().n(), 0);
    }

    #[test]
    fn clap_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(words(
            "cocycle-lab analyze --family random 16 2 --p 1.5,2,3",
        ))
        .unwrap();
        let Command::Analyze(a) = cli.command else {
            panic!("wrong command");
        };
        assert_eq!(a.p, vec![1.5, 2.0, 3.0]);
        assert_eq!(a.source.family.unwrap(), words("random 16 2"));
        assert!(Cli::try_parse_from(words("cocycle-lab analyze")).is_err());
    }
}
