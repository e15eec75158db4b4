//! Command-line front end.
//!
//! Exit status: 0 on success or a passing check, 1 on usage or input
//! errors, 2 when a verification finds a counterexample.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cantor::{BasicSet, CantorPoint};
use crate::group::{enumerate_subgroup, Cover, GroupElement};
use crate::retraction::{maximal_even_prefixes, retract};
use crate::verifier::{run_campaign, Suite, TestCampaign};
use crate::witness::{build_witness, check_subspace_embedding, verify_witness, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "cantor-retract",
    version,
    about = "Retraction of the free Boolean group over the Cantor set and its continuity witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print r̂(F) and the maximal even decomposition of F
    Retract {
        /// Group element, e.g. "{0, 2, 22}"
        f: String,
    },
    /// Build the continuity witness for F and U, then verify it
    Witness {
        f: String,
        /// Basic neighbourhood of r(F), e.g. "2" or "*"
        u: String,
        /// Enumeration depth [default: deepest cover part + 2]
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Check (x + H_Γ) ∩ C ⊆ V_x over an enumerated piece of H_Γ
    Check {
        x: String,
        v_x: String,
        gamma: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// List elements of H_Γ on the tail-zero grid
    Enumerate {
        /// Cover, e.g. "{0, 2}"
        gamma: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Run a property campaign
    Campaign {
        /// Flat key = value configuration file
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides enum_depth
        #[arg(long)]
        depth: Option<usize>,
        /// Overrides enum_cap
        #[arg(long)]
        cap: Option<usize>,
        /// Restrict to these suites (repeatable)
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parse a value and print its canonical form
    Parse {
        #[arg(value_enum)]
        kind: Kind,
        text: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Point,
    Set,
    Element,
    Cover,
}

struct Failure(String);

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

fn parse_arg<T>(what: &str, text: &str) -> Result<T, Failure>
where
    T: std::str::FromStr,
    T::Err: Display,
{
    text.parse()
        .map_err(|e| Failure(format!("cannot parse {what} {text:?}: {e}")))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Retract { f } => cmd_retract(&f, out),
        Command::Witness { f, u, depth, cap } => cmd_witness(&f, &u, depth, cap, out),
        Command::Check {
            x,
            v_x,
            gamma,
            depth,
            cap,
        } => cmd_check(&x, &v_x, &gamma, depth, cap, out),
        Command::Enumerate { gamma, depth, cap } => cmd_enumerate(&gamma, depth, cap, out),
        Command::Campaign {
            config,
            seed,
            depth,
            cap,
            suites,
            format,
        } => cmd_campaign(config, seed, depth, cap, &suites, format, out),
        Command::Parse { kind, text } => cmd_parse(kind, &text, out),
    }
}

fn cmd_retract(text: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let f: GroupElement = parse_arg("group element", text)?;
    writeln!(out, "F = {f}")?;
    let parity = if f.is_odd() { "odd" } else { "even" };
    writeln!(out, "|F| = {} ({parity})", f.len())?;
    if let Ok(d) = maximal_even_prefixes(&f) {
        writeln!(out, "{d}")?;
    }
    match retract(&f) {
        Ok(x) => writeln!(out, "r = {x}")?,
        Err(_) => writeln!(
            out,
            "r = {} (even cardinality, extended value)",
            CantorPoint::zero()
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_witness(
    f_text: &str,
    u_text: &str,
    depth: Option<usize>,
    cap: usize,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let f: GroupElement = parse_arg("group element", f_text)?;
    let u: BasicSet = parse_arg("basic set", u_text)?;
    let report = build_witness(&f, &u)?;
    let depth = depth.unwrap_or_else(|| report.default_depth());
    let verification = verify_witness(&report, &f, depth, cap)?;
    writeln!(out, "F = {f}")?;
    writeln!(out, "{report}")?;
    writeln!(out, "depth = {depth}")?;
    writeln!(out, "cap = {cap}")?;
    writeln!(out, "{verification}")?;
    Ok(if verification.passed() {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    })
}

fn cmd_check(
    x_text: &str,
    v_text: &str,
    gamma_text: &str,
    depth: Option<usize>,
    cap: usize,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let x: CantorPoint = parse_arg("point", x_text)?;
    let v_x: BasicSet = parse_arg("basic set", v_text)?;
    let gamma: Cover = parse_arg("cover", gamma_text)?;
    let depth = depth.unwrap_or(gamma.max_prefix_len() + 2);
    let verification = check_subspace_embedding(&x, &v_x, &gamma, depth, cap)?;
    writeln!(out, "x = {x}")?;
    writeln!(out, "v_x = {v_x}")?;
    writeln!(out, "gamma = {gamma}")?;
    writeln!(out, "depth = {depth}")?;
    writeln!(out, "{verification}")?;
    Ok(if verification.passed() {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    })
}

fn cmd_enumerate(
    gamma_text: &str,
    depth: Option<usize>,
    cap: usize,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let gamma: Cover = parse_arg("cover", gamma_text)?;
    let depth = depth.unwrap_or(gamma.max_prefix_len() + 2);
    if depth < gamma.max_prefix_len() {
        return Err(Failure(format!(
            "depth {depth} is below the cover's prefix length {}",
            gamma.max_prefix_len()
        )));
    }
    let mut hs = enumerate_subgroup(&gamma, depth, cap);
    for h in hs.by_ref() {
        writeln!(out, "{h}")?;
    }
    match hs.cap_exceeded() {
        Some(w) => writeln!(out, "count = {} (warning: {w})", hs.emitted())?,
        None => writeln!(out, "count = {}", hs.emitted())?,
    }
    Ok(EXIT_OK)
}

fn cmd_campaign(
    config: Option<PathBuf>,
    seed: Option<u64>,
    depth: Option<usize>,
    cap: Option<usize>,
    suites: &[String],
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let mut c = match &config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            TestCampaign::from_config_str(&text)
                .map_err(|e| Failure(format!("{}: {e}", path.display())))?
        }
        None => TestCampaign::default(),
    };
    if let Some(seed) = seed {
        c.seed = seed;
    }
    if let Some(depth) = depth {
        c.enum_depth = depth;
    }
    if let Some(cap) = cap {
        c.enum_cap = cap;
    }
    if !suites.is_empty() {
        c.suites = suites
            .iter()
            .map(|s| s.parse::<Suite>())
            .collect::<Result<_, _>>()?;
    }
    let report = run_campaign(&c)?;
    match format {
        Format::Text => write!(out, "{}", report.to_text())?,
        Format::Lines => write!(out, "{}", report.to_lines())?,
    }
    Ok(if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    })
}

fn cmd_parse(kind: Kind, text: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let canonical = match kind {
        Kind::Point => parse_arg::<CantorPoint>("point", text)?.to_string(),
        Kind::Set => parse_arg::<BasicSet>("basic set", text)?.to_string(),
        Kind::Element => parse_arg::<GroupElement>("group element", text)?.to_string(),
        Kind::Cover => parse_arg::<Cover>("cover", text)?.to_string(),
    };
    writeln!(out, "{canonical}")?;
    Ok(EXIT_OK)
}
