//! The `zsl` command line: argument parsing, run configuration and exit codes.
//!
//! [`run`] never prints; it returns the exit code with the text destined for
//! stdout and stderr so the whole front end can be tested in-process.

pub mod certify;
mod commands;
pub mod report;

use clap::{Args, Parser, Subcommand};
use report::Format;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or inconsistent input; the message names the field.
    #[error("{0}")]
    Input(String),
    #[error("i/o: {0}")]
    Io(String),
}

/// Settings shared by every subcommand.
#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Worker threads; reports do not depend on this value.
    #[arg(long, global = true, env = "ZSL_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    /// Per-search length cap (atom length, factorization length or truncation level, by command).
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    /// Sort ground set elements lexicographically before assigning indices.
    #[arg(long, global = true)]
    pub canonicalize: bool,
}

const EXAMPLES: &str = "\
Examples:
  zsl davenport -i hypercube2.json
  zsl atoms -i g0.json --budget 9 -o atoms.json
  zsl delm -i g0.json --method both
  zsl unions -i g0.json --k 4
  zsl omega -i g0.json --atom 0 --mode both
  zsl fib --rank 5 --verify
  zsl fp --group 2,2 --budget 5
  zsl monext --h0 g0.json --d group:2 --check all
  zsl acm --spec acm.json
  zsl hnp --towers towers.json
  zsl certify --suite all
  ZSL_THREADS=4 zsl probe-r4 --budget 8

Exit codes: 0 success, 1 a checked property failed (the report holds a witness), 2 input error.";

#[derive(Parser, Debug)]
#[command(name = "zsl", version, about = "Zero-sum sequences over subsets of Z^r and the arithmetic of their monoids", after_help = EXAMPLES)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Atoms of B(G0), the block monoid over a ground set.
    #[command(after_help = "Example: zsl atoms -i g0.json --budget 9 --enumerator completion -o atoms.json")]
    Atoms {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// completion or brute-force.
        #[arg(long, default_value = "completion")]
        enumerator: String,
    },
    /// Davenport constant, exact when the enumeration completes.
    #[command(after_help = "Example: zsl davenport -i hypercube2.json  ->  {\"davenport\": 3, \"complete\": true}")]
    Davenport {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
    },
    /// Elementary Davenport constant.
    #[command(after_help = "Example: zsl delm -i g0.json --method both")]
    Delm {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// enumerate, formula or both.
        #[arg(long, default_value = "both")]
        method: String,
    },
    /// Upper bounds for the Davenport constant.
    #[command(after_help = "Example: zsl bounds -i g0.json")]
    Bounds {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
    },
    /// Rational elementary decomposition of a zero-sum sequence.
    #[command(
        after_help = "Example: zsl decompose -i g0.json --seq seq.json   (seq.json: {\"mult\": [1, \"3/2\", 0, ...]})"
    )]
    Decompose {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Sequence JSON: {"mult": [...]} with integer or "p/q" entries.
        #[arg(long)]
        seq: PathBuf,
    },
    /// Set of lengths of a zero-sum sequence, with its factorizations.
    #[command(after_help = "Example: zsl lengths -i g0.json --element seq.json")]
    Lengths {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Zero-sum sequence JSON: {"mult": [...]}.
        #[arg(long)]
        element: PathBuf,
    },
    /// Union of sets of lengths containing k, with rho_k and lambda_k.
    #[command(after_help = "Example: zsl unions -i g0.json --k 4 --strategy extremal")]
    Unions {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Length k contained in every set of lengths in the union.
        #[arg(long)]
        k: usize,
        /// exhaustive or extremal.
        #[arg(long, default_value = "exhaustive")]
        strategy: String,
    },
    /// Catenary degree of one element.
    #[command(after_help = "Example: zsl catenary -i g0.json --element seq.json")]
    Catenary {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Zero-sum sequence JSON: {"mult": [...]}.
        #[arg(long)]
        element: PathBuf,
    },
    /// Omega invariant of an atom.
    #[command(after_help = "Example: zsl omega -i g0.json --atom 0 --mode both --cover-budget 6")]
    Omega {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Index of the atom in the sorted atom list.
        #[arg(long)]
        atom: usize,
        /// minimal-cover, definition-budget or both.
        #[arg(long, default_value = "minimal-cover")]
        mode: String,
        /// Longest product searched by definition-budget; defaults to the bound that makes it complete.
        #[arg(long)]
        cover_budget: Option<u64>,
    },
    /// Tame degree of an atom.
    #[command(after_help = "Example: zsl tame -i g0.json --atom 3")]
    Tame {
        /// Ground set JSON: {"rank": r, "elements": [[...], ...]}.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Index of the atom in the sorted atom list.
        #[arg(long)]
        atom: usize,
        /// minimal-cover or definition-budget.
        #[arg(long, default_value = "minimal-cover")]
        strategy: String,
    },
    /// Fibonacci lower-bound witness over the signed hypercube.
    #[command(after_help = "Example: zsl fib --rank 5 --verify")]
    Fib {
        /// Rank r of the ambient lattice Z^r.
        #[arg(long)]
        rank: usize,
        /// Check that U is an atom (ranks up to 6).
        #[arg(long)]
        verify: bool,
    },
    /// Hypercube ground sets as JSON.
    #[command(after_help = "Example: zsl hypercube --rank 3 --signed > hypercube3.json")]
    Hypercube {
        /// Rank r of the ambient lattice Z^r.
        #[arg(long)]
        rank: usize,
        /// Include the negatives.
        #[arg(long)]
        signed: bool,
    },
    /// Finitely primary monoid of rank 1 and exponent 1 over a finite abelian group.
    #[command(after_help = "Example: zsl fp --group 2,2 --budget 5   (--group trivial for the trivial group)")]
    Fp {
        /// Cyclic orders n1,n2,... of the group; "trivial" for the trivial group.
        #[arg(long)]
        group: String,
    },
    /// Extension of B(G0) by a reduced monoid D.
    #[command(after_help = "Example: zsl monext --h0 g0.json --d group:2 --check all   (--d free:1 for N0)")]
    Monext {
        /// Ground set JSON of the base block monoid.
        #[arg(long)]
        h0: PathBuf,
        /// group:n1,n2,... or free:rank.
        #[arg(long)]
        d: String,
        /// theta, formulas, catenary, units or all.
        #[arg(long, default_value = "all")]
        check: String,
        /// Sampled element pairs for the formula checks.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Products of at most this many atoms are sampled.
        #[arg(long, default_value_t = 3)]
        level: usize,
        /// Elements tested by the catenary check.
        #[arg(long, default_value_t = 50)]
        elements: usize,
        /// Bound on the free coordinates of a free D.
        #[arg(long, default_value_t = 2)]
        truncation: u64,
    },
    /// Almost-constant monoid from a JSON spec.
    #[command(
        after_help = "Example: zsl acm --spec acm.json   (acm.json: {\"omega\": 5, \"c\": [\"1\",\"1\",\"1\",\"3/2\",\"3/2\"], \"lambda\": [[1,2],[3,4]]})"
    )]
    Acm {
        /// JSON with omega, c and lambda.
        #[arg(long)]
        spec: PathBuf,
        /// Products of at most this many atoms are checked.
        #[arg(long, default_value_t = 4)]
        level: usize,
        /// Bound on coordinates outside every tower.
        #[arg(long, default_value_t = 2)]
        truncation: u64,
    },
    /// Monoid of projective modules described by tower data.
    #[command(
        after_help = "Example: zsl hnp --towers towers.json   (towers.json: {\"udim\": 1, \"cycle_towers\": [{\"ranks\":[1,1]},{\"ranks\":[2,1]}], \"class_group\": []})"
    )]
    Hnp {
        /// JSON with udim, cycle_towers, faithful_towers and class_group.
        #[arg(long)]
        towers: PathBuf,
        #[arg(long, default_value_t = 4)]
        level: usize,
    },
    /// Replays the acceptance suite.
    #[command(
        after_help = "Examples:\n  zsl certify --suite all\n  zsl certify --suite hypercube-rank-2,tower-monoid --format table\n  zsl certify --list"
    )]
    Certify {
        /// all, or a comma-separated list of criterion names.
        #[arg(long, default_value = "all")]
        suite: String,
        /// List the criteria and exit.
        #[arg(long)]
        list: bool,
    },
    /// Lower bounds for the rank 4 signed hypercube.
    #[command(after_help = "Example: zsl probe-r4 --budget 8 --formula")]
    ProbeR4 {
        /// Also evaluate the elementary Davenport constant by the determinant formula.
        #[arg(long)]
        formula: bool,
    },
}

/// Exit code and the text for each stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                RunOutput { code, stdout: text, stderr: String::new() }
            } else {
                RunOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let failure = |e: CliError| RunOutput { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.config.threads as usize).build() {
        Ok(p) => p,
        Err(e) => return failure(CliError::Io(e.to_string())),
    };
    let outcome = match pool.install(|| commands::dispatch(&cli.command, &cli.config)) {
        Ok(o) => o,
        Err(e) => return failure(e),
    };
    let text = match report::render(&outcome.report, cli.config.format) {
        Ok(t) => t,
        Err(e) => return failure(e),
    };
    let code = if outcome.ok { 0 } else { 1 };
    let stderr = if outcome.ok { String::new() } else { "error: a checked property failed; see the report\n".into() };
    match &cli.config.output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => RunOutput { code, stdout: String::new(), stderr },
            Err(e) => failure(CliError::Io(format!("--output {}: {e}", path.display()))),
        },
        None => RunOutput { code, stdout: text, stderr },
    }
}
