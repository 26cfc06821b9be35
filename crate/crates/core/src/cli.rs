//! Command-line surface.
//!
//! ```text
//! qtower list-stages
//! qtower stats <stage> [--max-k N]
//! qtower build <stage> [-o PATH] [--max-k N]     (default PATH: <stage>.pres, `-` for stdout)
//! qtower export <stage> [--max-k N]              (same as `build <stage> -o -`)
//! qtower embed <p/q> --target {tq|q|tcalq} [--symbolic] [--max-k N]
//! qtower verify <suite> [--bounds LEN,ABS]
//! ```
//!
//! Besides the tower stages, the stage name `t_rat` denotes the truncated
//! recursive presentation of the two-generator group (relators `w_2..w_N`
//! for `N = --max-k`).
//!
//! Exit status: 0 on success, 1 if a verification suite reports a failure,
//! 2 on usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::pipeline::{self, build, build_t_q, embed_alpha, embed_alpha_symbolic, Rational, StageId};
use crate::presentations::Presentation;
use crate::verify::{check, Bounds, Suite};

/// Default truncation of the recursive two-generator presentation.
pub const DEFAULT_MAX_K: i64 = 64;

#[derive(Parser, Debug)]
#[command(name = "qtower", about = "Finitely presented overgroups of the rationals: stages, words and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the stage names.
    ListStages,
    /// Print `gens=<n> rels=<m>` for a stage.
    Stats {
        stage: String,
        #[arg(long = "max-k", default_value_t = DEFAULT_MAX_K)]
        max_k: i64,
    },
    /// Write the presentation file of a stage.
    Build {
        stage: String,
        #[arg(short = 'o')]
        output: Option<String>,
        #[arg(long = "max-k", default_value_t = DEFAULT_MAX_K)]
        max_k: i64,
    },
    /// Print the presentation file of a stage.
    Export {
        stage: String,
        #[arg(long = "max-k", default_value_t = DEFAULT_MAX_K)]
        max_k: i64,
    },
    /// Print the embedding word of a rational.
    Embed {
        #[arg(allow_hyphen_values = true)]
        rational: String,
        #[arg(long, value_enum)]
        target: Target,
        /// Print the unexpanded conjugate form (target `tq` only).
        #[arg(long)]
        symbolic: bool,
        /// Largest `k` tried when searching for `den | k!`.
        #[arg(long = "max-k", default_value_t = DEFAULT_MAX_K)]
        max_k: i64,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<Bounds>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    /// The two-generator recursively presented group.
    Tq,
    /// The finitely presented group `q_final`.
    Q,
    /// The two-generator finitely presented group `t_q_final`.
    Tcalq,
}

fn parse_bounds(text: &str) -> Result<Bounds, String> {
    let (len, abs) = text.split_once(',').ok_or("expected <len>,<abs>")?;
    let len: i64 = len.trim().parse().map_err(|_| "bad length bound")?;
    let abs: i64 = abs.trim().parse().map_err(|_| "bad coordinate bound")?;
    if len < 0 || abs < 0 {
        return Err("bounds must be non-negative".to_string());
    }
    Ok(Bounds { len, abs })
}

fn usage(message: impl std::fmt::Display) -> (i32, String) {
    (2, format!("error: {message}\n"))
}

fn resolve(stage: &str, max_k: i64) -> Result<Presentation, String> {
    if stage == "t_rat" {
        return build_t_q(max_k).map_err(|e| e.to_string());
    }
    let id: StageId = stage.parse().map_err(|e: pipeline::PipelineError| e.to_string())?;
    Ok(build(id).as_ref().clone())
}

/// Runs the command line `argv` (including the program name) and returns
/// the exit status and the text for standard output.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match cli.command {
        Command::ListStages => {
            let mut out = String::new();
            for s in StageId::ALL {
                let _ = writeln!(out, "{s}");
            }
            out.push_str("t_rat\n");
            (0, out)
        }
        Command::Stats { stage, max_k } => match resolve(&stage, max_k) {
            Ok(p) => {
                let (g, r) = p.stats();
                (0, format!("gens={g} rels={r}\n"))
            }
            Err(e) => usage(e),
        },
        Command::Export { stage, max_k } => match resolve(&stage, max_k) {
            Ok(p) => (0, p.export()),
            Err(e) => usage(e),
        },
        Command::Build { stage, output, max_k } => match resolve(&stage, max_k) {
            Ok(p) => {
                let path = output.unwrap_or_else(|| format!("{stage}.pres"));
                if path == "-" {
                    return (0, p.export());
                }
                match std::fs::write(PathBuf::from(&path), p.export()) {
                    Ok(()) => (0, format!("wrote {path}\n")),
                    Err(e) => (1, format!("error: cannot write {path}: {e}\n")),
                }
            }
            Err(e) => usage(e),
        },
        Command::Embed { rational, target, symbolic, max_k } => {
            let r: Rational = match rational.parse() {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            let result = match (target, symbolic) {
                (Target::Tq, true) => embed_alpha_symbolic(r, max_k),
                (_, true) => return usage("--symbolic is only available for --target tq"),
                (Target::Tq | Target::Q, false) => embed_alpha(r, max_k).map(|w| w.to_string()),
                (Target::Tcalq, false) => embed_alpha(r, max_k).map(|w| {
                    crate::words::substitute(&w, &pipeline::gamma()).expect("gamma is total on x, y").to_string()
                }),
            };
            match result {
                Ok(text) => (0, format!("{text}\n")),
                Err(e) => (1, format!("error: {e}\n")),
            }
        }
        Command::Verify { suite, bounds } => {
            let suite: Suite = match suite.parse() {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let report = check(suite, bounds.unwrap_or_default());
            (if report.all_pass() { 0 } else { 1 }, report.to_string())
        }
    }
}
