//! `okounkov` command-line front end. All logic lives here so tests can run
//! commands in-process; `main.rs` only forwards `argv` and the exit code.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or parse error,
//! 3 resource cap (resolution or degree bound exceeded).

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use okounkov::acceptance;
use okounkov::fujita::{sweep, verify_theorem, FujitaReport};
use okounkov::geometry::Polytope;
use okounkov::models::parse_model;
use okounkov::okounkov::{global_cone, lattice_index, okounkov_body, volume_counting, volume_geometric};
use okounkov::rational::{format_qvector, parse_rat};
use okounkov::semigroup::{GradedSemigroup, MultiDegree, RationalDirection, Source};
use okounkov::{Error, Rat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub const THREADS_ENV: &str = "OKOUNKOV_THREADS";

#[derive(Debug, Parser)]
#[command(name = "okounkov", version, about = "Fiber bodies, volumes and truncation ratios of multigraded semigroups")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ModelArg {
    /// Model JSON file
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a model and print a summary
    Validate(ModelArg),
    /// Size of one graded piece
    Hilbert {
        #[command(flatten)]
        model: ModelArg,
        /// Multidegree, colon separated (e.g. 2:0)
        #[arg(long)]
        m: String,
        /// Also print the valuation vectors
        #[arg(long)]
        list: bool,
    },
    /// Vertices of the fiber body over a direction
    Body {
        #[command(flatten)]
        model: ModelArg,
        /// Direction, colon-separated rationals (e.g. 1/2:1/2)
        #[arg(long)]
        a: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Normalized volume d!·vol of fiber bodies
    Volume {
        #[command(flatten)]
        model: ModelArg,
        /// Directions; repeat the flag or separate with commas
        #[arg(long, required = true, value_delimiter = ',')]
        a: Vec<String>,
        /// Also print counting estimates for k <= K and the lattice index
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Extreme rays and facets of the global cone
    Cone(ModelArg),
    /// Truncation ratio table
    FujitaSweep {
        #[command(flatten)]
        model: ModelArg,
        /// Truncation degrees: a range `1..8` and/or a comma list
        #[arg(long)]
        p: String,
        /// Directions; repeat the flag or separate with commas
        #[arg(long, required = true, value_delimiter = ',')]
        a: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// End-to-end verification of the uniform approximation bound
    FujitaVerify {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        epsilon: String,
        /// Largest grid resolution tried
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[arg(long)]
        p: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the acceptance suite
    Selftest,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { code: exit_code(&e), message: e.to_string() }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResolutionExceeded { .. } | Error::BeyondBound { .. } | Error::BoundTooSmall { .. } => EXIT_RESOURCE,
        Error::Parse(_)
        | Error::ZeroDegreeGenerator { .. }
        | Error::NegativeEntry(_)
        | Error::DimensionMismatch { .. }
        | Error::InvalidDirection(_)
        | Error::NonIntegralDirection(_)
        | Error::NotFullDimensional
        | Error::EmptyInput => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

/// `1..8`, `1,2,5` or a mix such as `1..3,6`; sorted and deduplicated.
pub fn parse_p_list(text: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::usage(format!("invalid p list {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.contains(&0) {
        return Err(Failure::usage("truncation degrees must be positive"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn parse_directions(items: &[String]) -> Result<Vec<RationalDirection>, Failure> {
    items.iter().map(|s| RationalDirection::parse(s.trim()).map_err(Failure::from)).collect()
}

/// Value of `OKOUNKOV_THREADS`, if set.
pub fn threads_from_env(value: Option<&str>) -> Result<Option<usize>, Failure> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

fn load(model: &ModelArg) -> Result<GradedSemigroup, Failure> {
    let text = fs::read_to_string(&model.model)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", model.model.display())))?;
    parse_model(&text).map_err(|e| Failure {
        code: exit_code(&e),
        message: format!("{}: {e}", model.model.display()),
    })
}

fn emit(out: &mut Vec<u8>, path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            out.extend_from_slice(text.as_bytes());
            Ok(())
        }
    }
}

fn render_report(report: &FujitaReport, format: Format) -> Result<String, Failure> {
    match format {
        Format::Csv => Ok(report.to_csv()?),
        Format::Json => Ok(report.to_json()),
    }
}

fn render_body(p: &Polytope, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("vertex\n");
            for v in p.vertices() {
                s.push_str(&format_qvector(v));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string(p).expect("polytopes serialize");
            s.push('\n');
            s
        }
    }
}

fn execute(cmd: &Command, out: &mut Vec<u8>) -> Result<i32, Failure> {
    let mut text = String::new();
    let mut code = EXIT_OK;
    match cmd {
        Command::Validate(m) => {
            let s = load(m)?;
            let source = match s.source() {
                Source::Generators(g) => format!("generators ({} generators)", g.len()),
                Source::Toric(p) => format!("toric ({} polytopes)", p.len()),
            };
            text = format!("ok: mode {source}, d={}, r={}, bound={}\n", s.d(), s.r(), s.bound());
        }
        Command::Hilbert { model, m, list } => {
            let s = load(model)?;
            let entries = m
                .split(':')
                .map(|x| x.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::usage(format!("invalid multidegree {m:?}")))?;
            let piece = s.piece(&MultiDegree::new(entries))?;
            text = format!("{}\n", piece.len());
            if *list {
                for v in piece.iter() {
                    let cols: Vec<String> = v.iter().map(ToString::to_string).collect();
                    text.push_str(&cols.join(":"));
                    text.push('\n');
                }
            }
        }
        Command::Body { model, a, format } => {
            let s = load(model)?;
            let a = RationalDirection::parse(a)?;
            text = render_body(&okounkov_body(&s, &a)?, *format);
        }
        Command::Volume { model, a, k_max } => {
            let s = load(model)?;
            let dirs = parse_directions(a)?;
            let single = dirs.len() == 1 && k_max.is_none();
            for a in &dirs {
                let v = volume_geometric(&s, a)?;
                if single {
                    text = format!("{v}\n");
                    break;
                }
                text.push_str(&format!("{a} {v}\n"));
                if let Some(k) = k_max {
                    for (k, est) in volume_counting(&s, a, *k)? {
                        text.push_str(&format!("  k={k} {est}\n"));
                    }
                    let idx = match lattice_index(&s, a) {
                        Ok(i) => i.to_string(),
                        Err(Error::EmptyRay) => "empty-ray".to_string(),
                        Err(e) => return Err(e.into()),
                    };
                    text.push_str(&format!("  lattice_index {idx}\n"));
                }
            }
        }
        Command::Cone(m) => {
            let s = load(m)?;
            let cone = global_cone(&s)?;
            text.push_str(&format!("dim {}\nrays\n", cone.dim()));
            for r in cone.rays() {
                let cols: Vec<String> = r.iter().map(ToString::to_string).collect();
                text.push_str(&format!("  {}\n", cols.join(" ")));
            }
            text.push_str("halfspaces\n");
            for h in cone.halfspaces() {
                let cols: Vec<String> = h.normal.iter().map(ToString::to_string).collect();
                text.push_str(&format!("  {} >= {}\n", cols.join(" "), h.offset));
            }
        }
        Command::FujitaSweep { model, p, a, output } => {
            let s = load(model)?;
            let report = sweep(&s, &parse_p_list(p)?, &parse_directions(a)?)?;
            emit(out, output.out.as_ref(), &render_report(&report, output.format)?)?;
        }
        Command::FujitaVerify { model, epsilon, n_max, p, output } => {
            let s = load(model)?;
            let eps: Rat = parse_rat(epsilon)?;
            let report = verify_theorem(&s, &eps, *n_max, &parse_p_list(p)?)?;
            emit(out, output.out.as_ref(), &render_report(&report, output.format)?)?;
            if !report.passed() {
                code = EXIT_CHECK_FAILED;
            }
        }
        Command::Selftest => {
            let results = acceptance::run_all();
            text = acceptance::render(&results);
            if !results.iter().all(|r| r.passed()) {
                code = EXIT_CHECK_FAILED;
            }
        }
    }
    emit(out, None, &text)?;
    Ok(code)
}

/// Runs one invocation. Diagnostics go to `err`; the return value is the
/// process exit code.
pub fn run<I, T>(argv: I, threads: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let threads = match threads_from_env(threads) {
        Ok(t) => t,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli.command, &mut buf)),
            Err(e) => Err(Failure { code: EXIT_RESOURCE, message: e.to_string() }),
        },
        None => execute(&cli.command, &mut buf),
    };
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_CHECK_FAILED;
    }
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_lists() {
        assert_eq!(parse_p_list("1..8").unwrap(), (1..=8).collect::<Vec<_>>());
        assert_eq!(parse_p_list("3,1,2").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_p_list("1..3,6").unwrap(), vec![1, 2, 3, 6]);
        assert_eq!(parse_p_list("1..=2").unwrap(), vec![1, 2]);
        assert_eq!(parse_p_list("").unwrap(), Vec::<u32>::new());
        for bad in ["0..2", "3..1", "x", "1..y"] {
            assert_eq!(parse_p_list(bad).unwrap_err().code, EXIT_USAGE, "{bad}");
        }
    }

    #[test]
    fn thread_env() {
        assert_eq!(threads_from_env(None).unwrap(), None);
        assert_eq!(threads_from_env(Some("4")).unwrap(), Some(4));
        assert!(threads_from_env(Some("0")).is_err());
        assert!(threads_from_env(Some("many")).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::ResolutionExceeded { needed: 8, cap: 4 }), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::BeyondBound { degree: 9, bound: 4 }), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::ZeroDegreeGenerator { index: 0 }), EXIT_USAGE);
        assert_eq!(exit_code(&Error::ZeroVolume("1".into())), EXIT_CHECK_FAILED);
    }
}
