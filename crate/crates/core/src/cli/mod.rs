//! Command-line driver. [`run`] returns the exit status and both output
//! streams so it can be exercised without spawning a process.

mod parse;
mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::classify::{classify, Answer, Shape};
use crate::finabel::{image_chain, Homomorphism};
use crate::oracle::{p_groups, sweep, DEFAULT_CAP};
use crate::spgroup::{stab_index_mul, Example};
use crate::Parallelism;

pub use parse::{parse_descriptor, parse_element, parse_matrix, print_descriptor, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "scoh",
    version,
    about = "Stabilization indices and strong co-Hopficity of abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a group descriptor.
    Classify {
        /// Descriptor file, `-` for standard input.
        file: PathBuf,
    },
    /// Image chain of an endomorphism of a finite group.
    Chain {
        file: PathBuf,
        /// Matrix as nested lists, e.g. `[[2,1],[0,0]]`.
        #[arg(long)]
        matrix: String,
    },
    /// Stabilization index of multiplication on an sp-group.
    Spstab {
        file: PathBuf,
        /// Element as `q=A/B cI=R ...`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Exhaustive exponent-bound sweep over p-groups.
    Oracle {
        #[arg(long)]
        max_card: u64,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Worker threads; 0 uses the global pool.
        #[arg(long, conflicts_with = "sequential")]
        workers: Option<usize>,
        #[arg(long)]
        sequential: bool,
        /// Largest endomorphism count enumerated per group.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Classify one of the worked examples against its known verdicts.
    Example {
        #[arg(value_parser = ["ex0", "ex1", "ex3"])]
        id: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome::ok(EXIT_OK, text)
            };
        }
    };
    match execute(cli.command) {
        Ok(o) => o,
        Err(msg) => Outcome::usage(msg),
    }
}

fn read_input(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(|e| format!("stdin: {e}"))
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn read_descriptor(path: &Path) -> Result<crate::classify::GroupDescriptor, String> {
    let text = read_input(path)?;
    parse_descriptor(&text).map_err(|e| format!("{}:{e}", path.display()))
}

fn execute(cmd: Command) -> Result<Outcome, String> {
    match cmd {
        Command::Classify { file } => {
            let d = read_descriptor(&file)?;
            let c = classify(&d);
            let code = if c.group.answer == Answer::Unknown {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            };
            Ok(Outcome::ok(code, report::classification_report(&d, &c)))
        }
        Command::Chain { file, matrix } => {
            let d = read_descriptor(&file)?;
            let g = match d.shape() {
                Shape::Torsion(t) if d.flags().is_empty() => t.as_finite_group(),
                _ => None,
            }
            .ok_or("chain needs a finite torsion descriptor (tail=zero)")?;
            let m = parse_matrix(&matrix)?;
            let f = Homomorphism::from_big(m, &g, &g).map_err(|e| e.to_string())?;
            let chain = image_chain(&f).map_err(|e| e.to_string())?;
            let sizes: Vec<String> = chain.iter().map(|s| s.cardinality().to_string()).collect();
            let stab = chain.len() as u32 - 2;
            Ok(Outcome::ok(
                EXIT_OK,
                report::chain_report(&g.to_string(), &f.to_string(), &sizes, stab),
            ))
        }
        Command::Spstab { file, alpha } => {
            let d = read_descriptor(&file)?;
            let spec = match d.shape() {
                Shape::ERingSp(s) => *s,
                _ => return Err("spstab needs a spring descriptor".into()),
            };
            let x = parse_element(&alpha, &spec)?;
            let r = stab_index_mul(&x, &spec);
            Ok(Outcome::ok(EXIT_OK, report::spstab_report(&spec, &x, &r)))
        }
        Command::Oracle {
            max_card,
            primes,
            workers,
            sequential,
            cap,
        } => {
            let par = match (sequential, workers) {
                (true, _) => Parallelism::Sequential,
                (false, Some(n)) => Parallelism::Workers(n),
                (false, None) => Parallelism::default(),
            };
            let mut groups = Vec::new();
            for p in primes {
                if !crate::arith::is_prime(p) {
                    return Err(format!("{p} is not prime"));
                }
                groups.extend(p_groups(p, max_card));
            }
            let rep = sweep(&groups, cap, par);
            let code = if rep.is_clean() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            };
            Ok(Outcome::ok(code, rep.to_string()))
        }
        Command::Example { id } => {
            let ex: Example = id
                .parse()
                .map_err(|e: crate::spgroup::SpError| e.to_string())?;
            let (text, all) = report::example_report(ex, &classify(&ex.descriptor()));
            Ok(Outcome::ok(
                if all { EXIT_OK } else { EXIT_VIOLATION },
                text,
            ))
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let o = run(std::env::args_os());
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    o.code
}
