//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 parse or I/O error, 3 invalid system,
//! 4 a claim, proof or sweep check failed.
//!
//! Input paths that do not exist on disk but name a bundled file
//! (`examples/t5.ets`, `proofs/lemmas.reg`, ...) are read from the corpus
//! embedded in the binary.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};

use crate::corpus;
use crate::formula::{parse_formula, Formula};
use crate::model::{parse_system, EpistemicTransitionSystem};
use crate::proofkit::{bundled_registry, check_proof, parse_proof, LemmaRegistry, ProofError, Verdict};
use crate::semantics::{check_claim, parse_claims, Claim, EvalReport};
use crate::testgen::{run_sweep, SweepConfig, POOL_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "knowhow", version, about = "Model checker and proof checker for knowledge, strategy and know-how modalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a system file is well formed and serial.
    Validate { system: PathBuf },
    /// Evaluate a formula at a state, or every line of a claims file.
    Check {
        system: PathBuf,
        /// State name, or the claims file with --claims.
        target: String,
        #[arg(required_unless_present = "claims", conflicts_with = "claims")]
        formula: Option<String>,
        /// Treat the second argument as a claims file.
        #[arg(long)]
        claims: bool,
        /// Print the first witnessing profile of a true top-level S or H formula.
        #[arg(long)]
        witness: bool,
        /// Use the unmemoized oracle evaluator.
        #[arg(long)]
        naive: bool,
        /// Report evaluation times.
        #[arg(long)]
        timing: bool,
    },
    /// Check a proof script.
    Prove {
        proof: PathBuf,
        /// Lemma registry (defaults to the bundled one).
        #[arg(long)]
        lemmas: Option<PathBuf>,
    },
    /// Soundness sweep over random systems.
    Sweep {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Report elapsed time.
        #[arg(long)]
        timing: bool,
    },
    /// List the bundled corpus, or write it to a directory.
    Examples {
        #[arg(long, value_name = "DIR")]
        extract: Option<PathBuf>,
    },
}

/// Command failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_PARSE, message: format!("{}: {e}", path.display()) }
    }
}

fn read_input(path: &Path) -> io::Result<String> {
    match std::fs::read_to_string(path) {
        Err(e) if e.kind() == io::ErrorKind::NotFound => path
            .to_str()
            .and_then(corpus::file)
            .map(str::to_string)
            .ok_or(e),
        other => other,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    read_input(path).map_err(|e| Failure::parse(path, e))
}

fn load_system(path: &Path, out: &mut dyn Write) -> Result<EpistemicTransitionSystem, Failure> {
    let sys = parse_system(&read(path)?).map_err(|e| Failure::parse(path, e))?;
    let report = sys.validate();
    if !report.is_ok() {
        for v in &report.violations {
            let _ = writeln!(out, "invalid: {v}");
        }
        return Err(Failure {
            code: EXIT_INVALID,
            message: format!("{}: {} violation(s)", path.display(), report.violations.len()),
        });
    }
    Ok(sys)
}

fn micros(d: Duration) -> String {
    format!("{:.1}us", d.as_secs_f64() * 1e6)
}

fn print_report(
    sys: &EpistemicTransitionSystem,
    r: &EvalReport,
    witness: bool,
    timing: bool,
    out: &mut dyn Write,
) -> io::Result<()> {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    write!(out, "{status} line {}: {} ({})", r.claim.line, r.claim, r.verdict)?;
    if timing {
        write!(out, " in {}", micros(r.elapsed))?;
    }
    writeln!(out)?;
    if witness {
        if let Some(s) = &r.witness {
            writeln!(out, "  witness: {}", s.display(sys))?;
        }
    }
    Ok(())
}

fn cmd_check(
    system: &Path,
    target: &str,
    formula: Option<&str>,
    claims: bool,
    flags: (bool, bool, bool),
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (witness, naive, timing) = flags;
    let sys = load_system(system, out)?;
    let eval = |claim: &Claim| {
        check_claim(&sys, claim, naive).map_err(|e| Failure { code: EXIT_PARSE, message: e.to_string() })
    };
    if claims {
        let path = Path::new(target);
        let claims = parse_claims(&read(path)?).map_err(|e| Failure::parse(path, e))?;
        let mut passed = 0;
        let mut total = Duration::ZERO;
        for claim in &claims {
            let r = eval(claim).map_err(|f| Failure { message: format!("line {}: {}", claim.line, f.message), ..f })?;
            passed += usize::from(r.passed());
            total += r.elapsed;
            print_report(&sys, &r, witness, timing, out).map_err(io_failure)?;
        }
        write!(out, "{passed}/{} claims passed", claims.len()).map_err(io_failure)?;
        if timing {
            write!(out, " in {}", micros(total)).map_err(io_failure)?;
        }
        writeln!(out).map_err(io_failure)?;
        return Ok(if passed == claims.len() { EXIT_OK } else { EXIT_FAILED });
    }

    let text = formula.unwrap_or_default();
    let f: Formula = parse_formula(text).map_err(|e| Failure { code: EXIT_PARSE, message: format!("formula: {e}") })?;
    let claim = Claim { state: target.to_string(), formula: f, expected: None, line: 1 };
    let r = eval(&claim)?;
    let mut line = format!("{} |= {}: {}", target, claim.formula, r.verdict);
    if timing {
        line.push_str(&format!(" in {}", micros(r.elapsed)));
    }
    writeln!(out, "{line}").map_err(io_failure)?;
    if witness {
        match &r.witness {
            Some(s) => writeln!(out, "witness: {}", s.display(&sys)),
            None => writeln!(out, "witness: none"),
        }
        .map_err(io_failure)?;
    }
    Ok(if r.verdict { EXIT_OK } else { EXIT_FAILED })
}

fn io_failure(e: io::Error) -> Failure {
    Failure { code: EXIT_PARSE, message: e.to_string() }
}

fn proof_failure(e: ProofError) -> Failure {
    let code = match e {
        ProofError::Parse { .. } | ProofError::Io { .. } => EXIT_PARSE,
        ProofError::Rejected { .. } | ProofError::LemmaWithPremises { .. } => EXIT_FAILED,
    };
    Failure { code, message: format!("lemma registry: {e}") }
}

fn cmd_prove(proof: &Path, lemmas: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let script = parse_proof(&read(proof)?).map_err(|e| Failure::parse(proof, e))?;
    let registry = match lemmas {
        Some(path) => LemmaRegistry::load_with(path, &read_input),
        None => bundled_registry(),
    }
    .map_err(proof_failure)?;
    let verdict = check_proof(&script, &registry);
    let name = script.name.clone().unwrap_or_else(|| proof.display().to_string());
    writeln!(out, "{name}: {verdict}").map_err(io_failure)?;
    Ok(match verdict {
        Verdict::Accepted { .. } => EXIT_OK,
        Verdict::Rejected { .. } => EXIT_FAILED,
    })
}

fn cmd_sweep(seed: u64, count: usize, depth: usize, timing: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let config = SweepConfig { seed, count, depth, pool_cap: POOL_CAP, ..SweepConfig::default() };
    let report = run_sweep(&config).map_err(|e| Failure { code: EXIT_PARSE, message: e.to_string() })?;
    write!(out, "{report}\n{}", report.summary()).map_err(io_failure)?;
    if timing {
        writeln!(out, "elapsed_ms={}", report.elapsed.as_millis()).map_err(io_failure)?;
    }
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_examples(extract: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let Some(dir) = extract else {
        for (path, _) in corpus::FILES {
            writeln!(out, "{path}").map_err(io_failure)?;
        }
        return Ok(EXIT_OK);
    };
    for (path, text) in corpus::FILES {
        let target = dir.join(path);
        let write = || -> io::Result<()> {
            if let Some(parent) = target.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&target, text)
        };
        write().map_err(|e| Failure::parse(&target, e))?;
        writeln!(out, "wrote {}", target.display()).map_err(io_failure)?;
    }
    Ok(EXIT_OK)
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Validate { system } => load_system(system, out).and_then(|sys| {
            writeln!(
                out,
                "valid: {} states, {} agents, {} votes, {} full profiles",
                sys.state_count(),
                sys.agents().len(),
                sys.votes().len(),
                sys.full_profile_count()
            )
            .map_err(io_failure)?;
            Ok(EXIT_OK)
        }),
        Command::Check { system, target, formula, claims, witness, naive, timing } => cmd_check(
            system,
            target,
            formula.as_deref(),
            *claims,
            (*witness, *naive, *timing),
            out,
        ),
        Command::Prove { proof, lemmas } => cmd_prove(proof, lemmas.as_deref(), out),
        Command::Sweep { seed, count, depth, timing } => cmd_sweep(*seed, *count, *depth, *timing, out),
        Command::Examples { extract } => cmd_examples(extract.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
