//! Command-line toolkit for systems of communicating pushdown automata.
//!
//! The binary reads machines from the JSON format in [`format`] and exposes
//! membership search, language sampling and comparison, structural
//! analysis, the known-communication transform, compilation to a multi-head
//! machine, and decomposition of simple systems.
//!
//! Exit codes are uniform across subcommands:
//!
//! | code | meaning |
//! |------|---------|
//! | 0    | success / positive verdict |
//! | 1    | negative verdict (rejected, disagreement, violation) |
//! | 2    | undecided within the given limits |
//! | 3    | usage, parse, validation, or inapplicable-input error |
//! | 4    | internal or environment error (e.g. cannot write output) |

pub mod format;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use pcpa_core::harness::{
    check_switch_property, compare_languages, language_sample, MachineRef,
};
use pcpa_core::multihead::{mh_run_bounded, validate_mhpda};
use pcpa_core::search::run_bounded;
use pcpa_core::symbol::Symbol;
use pcpa_core::system::{classify, validate_system, Mode, PcpaSystem};
use pcpa_core::transform::{compile_to_multihead, decompose, is_simple, to_known_communication};
use pcpa_core::{SearchLimits, SearchOutcome, Trace};

use format::{parse_document, serialize_document, Document};

/// Exit code: success or positive verdict.
pub const EXIT_OK: i32 = 0;
/// Exit code: negative verdict (rejected, disagreement, violation found).
pub const EXIT_NEGATIVE: i32 = 1;
/// Exit code: undecided within the configured limits.
pub const EXIT_UNKNOWN: i32 = 2;
/// Exit code: usage, parse, validation, or inapplicable-input error.
pub const EXIT_INPUT: i32 = 3;
/// Exit code: internal or environment error.
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser)]
#[command(
    name = "pcpa",
    version,
    about = "Toolkit for parallel communicating pushdown automata systems",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LimitArgs {
    /// Maximum run length explored by the bounded search.
    #[arg(long, default_value_t = 10_000)]
    max_steps: u32,
    /// Maximum number of distinct configurations kept by the search.
    #[arg(long, default_value_t = 100_000)]
    max_configs: usize,
}

impl LimitArgs {
    fn to_limits(&self) -> SearchLimits {
        SearchLimits::new(self.max_steps, self.max_configs)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a machine file for structural problems.
    Validate {
        /// Machine file (pcpa or mhpda).
        file: PathBuf,
    },
    /// Decide whether a word is accepted, with a witness run on success.
    ///
    /// The word is split into one symbol per character, or at commas if it
    /// contains any ("ab" and "a,b" both mean a then b); an empty word is
    /// the empty string.
    Member {
        /// Machine file (pcpa or mhpda).
        file: PathBuf,
        /// Input word.
        word: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Classify every word up to a length bound.
    Sample {
        /// Machine file (pcpa or mhpda).
        file: PathBuf,
        /// Maximum word length to enumerate.
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Report structure: degree, queriers, query graph, simplicity.
    Analyze {
        /// Machine file (pcpa or mhpda).
        file: PathBuf,
    },
    /// Rewrite a system into an equivalent normal form.
    Transform {
        #[command(subcommand)]
        target: TransformTarget,
    },
    /// Compile a system into a different machine model.
    Compile {
        #[command(subcommand)]
        target: CompileTarget,
    },
    /// Split a simple system into centralized parts, one per querier.
    Decompose {
        /// System file (pcpa, returning, simple, with at least one querier).
        file: PathBuf,
        /// Directory for the part files (created if missing).
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Compare the languages of two machines up to a length bound.
    Compare {
        /// First machine file (pcpa or mhpda); enumeration follows its
        /// declared alphabet order.
        left: PathBuf,
        /// Second machine file (pcpa or mhpda).
        right: PathBuf,
        /// Maximum word length to enumerate.
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check the known-communication property on one input word.
    ///
    /// Explores every run of the system on the word and verifies that
    /// switch-marked states are entered exactly on a component's first
    /// usual move after serving a query.
    CheckSwitch {
        /// System file (pcpa, with known-communication annotations).
        file: PathBuf,
        /// Input word (same syntax as `member`).
        word: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Subcommand)]
enum TransformTarget {
    /// Rewrite a returning system into known-communication shape.
    Kc {
        /// System file (pcpa, returning mode).
        file: PathBuf,
        /// Write the result here instead of standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CompileTarget {
    /// Compile a centralized returning known-communication system into a
    /// multi-head machine (one head per component, a single stack).
    Mh {
        /// System file (pcpa, centralized returning, with
        /// known-communication annotations as produced by `transform kc`).
        file: PathBuf,
        /// Write the result here instead of standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// A failed command: the exit code and a message for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

/// Runs the command line given as `argv` (including the program name) and
/// returns the process exit code. All output goes to standard out/error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            eprint!("usage error: {e}");
            return EXIT_INPUT;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{}", failure.message);
            failure.code
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Member { file, word, limits } => cmd_member(&file, &word, &limits.to_limits()),
        Command::Sample {
            file,
            max_len,
            limits,
        } => cmd_sample(&file, max_len, &limits.to_limits()),
        Command::Analyze { file } => cmd_analyze(&file),
        Command::Transform {
            target: TransformTarget::Kc { file, out },
        } => cmd_transform_kc(&file, out.as_deref()),
        Command::Compile {
            target: CompileTarget::Mh { file, out },
        } => cmd_compile_mh(&file, out.as_deref()),
        Command::Decompose { file, out_dir } => cmd_decompose(&file, &out_dir),
        Command::Compare {
            left,
            right,
            max_len,
            limits,
        } => cmd_compare(&left, &right, max_len, &limits.to_limits()),
        Command::CheckSwitch { file, word, limits } => {
            cmd_check_switch(&file, &word, &limits.to_limits())
        }
    }
}

fn load_document(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("input error: cannot read {}: {e}", path.display())))?;
    parse_document(&text)
        .map_err(|e| Failure::input(format!("parse error: {}: {e}", path.display())))
}

fn load_system(path: &Path, wanted_by: &str) -> Result<PcpaSystem, Failure> {
    match load_document(path)? {
        Document::Pcpa(sys) => Ok(sys),
        Document::Mhpda(_) => Err(Failure::input(format!(
            "input error: {wanted_by} needs a pcpa file, but {} is an mhpda file",
            path.display()
        ))),
    }
}

/// Requires a structurally valid system, forwarding violations verbatim.
fn validated(path: &Path, sys: PcpaSystem) -> Result<PcpaSystem, Failure> {
    let report = validate_system(&sys);
    if report.is_valid() {
        Ok(sys)
    } else {
        let mut message = String::new();
        for v in &report.violations {
            let _ = writeln!(message, "validation error: {}: {v}", path.display());
        }
        message.pop();
        Err(Failure {
            code: EXIT_INPUT,
            message,
        })
    }
}

fn parse_word(text: &str) -> Result<Vec<Symbol>, Failure> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let pieces: Vec<String> = if text.contains(',') {
        text.split(',').map(str::to_owned).collect()
    } else {
        text.chars().map(String::from).collect()
    };
    pieces
        .iter()
        .map(|p| {
            Symbol::new(p)
                .map_err(|e| Failure::input(format!("parse error: word symbol {p:?}: {e}")))
        })
        .collect()
}

/// Words are rendered concatenated when every symbol is one character,
/// dot-joined otherwise, and as `_` when empty — matching configuration
/// rendering.
fn render_word(word: &[Symbol]) -> String {
    if word.is_empty() {
        return "_".to_owned();
    }
    let sep = if word.iter().any(|s| s.as_str().len() > 1) {
        "."
    } else {
        ""
    };
    word.iter()
        .map(|s| s.as_str())
        .collect::<Vec<_>>()
        .join(sep)
}

fn print_trace<C: std::fmt::Display>(trace: &Trace<C>) {
    println!("INIT {}", trace.configurations[0]);
    for (k, cfg) in trace.configurations.iter().enumerate().skip(1) {
        println!("STEP {k} {} {cfg}", trace.kinds[k - 1]);
    }
}

fn outcome_exit(outcome: SearchOutcome) -> i32 {
    match outcome {
        SearchOutcome::Accepted => EXIT_OK,
        SearchOutcome::Rejected => EXIT_NEGATIVE,
        SearchOutcome::Unknown => EXIT_UNKNOWN,
    }
}

fn cmd_validate(path: &Path) -> Result<i32, Failure> {
    match load_document(path)? {
        Document::Pcpa(sys) => {
            let sys = validated(path, sys)?;
            let class = classify(&sys);
            println!(
                "ok: valid pcpa system, degree {}, {} mode",
                class.degree,
                mode_word(class.mode)
            );
        }
        Document::Mhpda(machine) => {
            let problems = validate_mhpda(&machine);
            if !problems.is_empty() {
                let mut message = String::new();
                for p in &problems {
                    let _ = writeln!(message, "validation error: {}: {p}", path.display());
                }
                message.pop();
                return Err(Failure {
                    code: EXIT_INPUT,
                    message,
                });
            }
            println!(
                "ok: valid mhpda machine, {} head{}",
                machine.heads,
                if machine.heads == 1 { "" } else { "s" }
            );
        }
    }
    Ok(EXIT_OK)
}

fn mode_word(mode: Mode) -> &'static str {
    match mode {
        Mode::Returning => "returning",
        Mode::NonReturning => "non-returning",
    }
}

fn cmd_member(path: &Path, word_text: &str, limits: &SearchLimits) -> Result<i32, Failure> {
    let word = parse_word(word_text)?;
    match load_document(path)? {
        Document::Pcpa(sys) => {
            let sys = validated(path, sys)?;
            let verdict = run_bounded(&sys, &word, limits);
            println!("verdict: {}", verdict.outcome);
            println!("explored {} configurations", verdict.stats.explored);
            if let Some(trace) = &verdict.witness {
                print_trace(trace);
            }
            Ok(outcome_exit(verdict.outcome))
        }
        Document::Mhpda(machine) => {
            let verdict = mh_run_bounded(&machine, &word, limits);
            println!("verdict: {}", verdict.outcome);
            println!("explored {} configurations", verdict.stats.explored);
            if let Some(trace) = &verdict.witness {
                print_trace(trace);
            }
            Ok(outcome_exit(verdict.outcome))
        }
    }
}

fn machine_ref<'a>(doc: &'a Document) -> MachineRef<'a> {
    match doc {
        Document::Pcpa(sys) => MachineRef::System(sys),
        Document::Mhpda(machine) => MachineRef::Multihead(machine),
    }
}

fn cmd_sample(path: &Path, max_len: usize, limits: &SearchLimits) -> Result<i32, Failure> {
    let doc = load_document(path)?;
    let doc = match doc {
        Document::Pcpa(sys) => Document::Pcpa(validated(path, sys)?),
        machine => machine,
    };
    let sample = language_sample(machine_ref(&doc), max_len, limits);
    for word in &sample.accepted {
        println!("accepted {}", render_word(word));
    }
    for word in &sample.unknown {
        println!("unknown {}", render_word(word));
    }
    println!(
        "sampled words up to length {}: {} accepted, {} rejected, {} unknown",
        sample.max_len,
        sample.accepted.len(),
        sample.rejected.len(),
        sample.unknown.len()
    );
    Ok(if sample.unknown.is_empty() {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    })
}

fn cmd_analyze(path: &Path) -> Result<i32, Failure> {
    match load_document(path)? {
        Document::Mhpda(machine) => {
            let problems = validate_mhpda(&machine);
            println!("kind: mhpda machine");
            println!("heads: {}", machine.heads);
            println!("states: {}", machine.states.len());
            println!("transitions: {}", machine.transitions.len());
            println!("valid: {}", if problems.is_empty() { "yes" } else { "no" });
            Ok(EXIT_OK)
        }
        Document::Pcpa(sys) => {
            let sys = validated(path, sys)?;
            let class = classify(&sys);
            println!("kind: pcpa system");
            println!("degree: {}", class.degree);
            println!("mode: {}", mode_word(class.mode));
            for (i, comp) in sys.components.iter().enumerate() {
                println!(
                    "component {}: {} states, {} transitions, initial {}, bottom {}",
                    i + 1,
                    comp.states.len(),
                    comp.transitions.len(),
                    comp.initial,
                    comp.initial_stack
                );
            }
            if class.communicating() {
                for (symbol, &target) in &sys.query_map {
                    println!("query symbol {symbol} addresses component {}", target + 1);
                }
                let queriers: Vec<String> = class
                    .queriers
                    .iter()
                    .map(|&i| format!("component {}", i + 1))
                    .collect();
                println!("queriers: {}", queriers.join(", "));
                println!(
                    "centralized: {}",
                    if class.centralized { "yes" } else { "no" }
                );
            } else {
                println!("queriers: none");
                println!("centralized: yes (no queries at all)");
            }
            let annotated = sys.components.iter().filter(|c| c.kc_states.is_some()).count();
            println!(
                "known-communication annotations: {}",
                match annotated {
                    0 => "none".to_owned(),
                    n if n == sys.components.len() => "all components".to_owned(),
                    n => format!("{n} of {} components", sys.components.len()),
                }
            );
            if class.mode != Mode::Returning {
                println!("simplicity: not applicable (non-returning mode)");
                return Ok(EXIT_OK);
            }
            let report = is_simple(&sys).map_err(|e| {
                Failure::internal(format!("internal error: simplicity check failed: {e}"))
            })?;
            if report.is_simple() {
                println!("simplicity: simple");
                match decompose(&sys) {
                    Ok(parts) => println!(
                        "decomposition: {} centralized part{}",
                        parts.len(),
                        if parts.len() == 1 { "" } else { "s" }
                    ),
                    Err(_) => println!("decomposition: not applicable (no queriers)"),
                }
            } else {
                println!("simplicity: not simple");
                for v in &report.violations {
                    println!("  {v}");
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn emit_document(doc: &Document, out: Option<&Path>) -> Result<(), Failure> {
    let text = serialize_document(doc);
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| {
                Failure::internal(format!(
                    "internal error: cannot write {}: {e}",
                    path.display()
                ))
            })?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn cmd_transform_kc(path: &Path, out: Option<&Path>) -> Result<i32, Failure> {
    let sys = load_system(path, "transform kc")?;
    let kc = to_known_communication(&sys)
        .map_err(|e| Failure::input(format!("transform error: {}: {e}", path.display())))?;
    emit_document(&Document::Pcpa(kc), out)?;
    Ok(EXIT_OK)
}

fn cmd_compile_mh(path: &Path, out: Option<&Path>) -> Result<i32, Failure> {
    let sys = load_system(path, "compile mh")?;
    let machine = compile_to_multihead(&sys)
        .map_err(|e| Failure::input(format!("transform error: {}: {e}", path.display())))?;
    emit_document(&Document::Mhpda(machine), out)?;
    Ok(EXIT_OK)
}

fn cmd_decompose(path: &Path, out_dir: &Path) -> Result<i32, Failure> {
    let sys = load_system(path, "decompose")?;
    let parts = decompose(&sys)
        .map_err(|e| Failure::input(format!("transform error: {}: {e}", path.display())))?;
    std::fs::create_dir_all(out_dir).map_err(|e| {
        Failure::internal(format!(
            "internal error: cannot create {}: {e}",
            out_dir.display()
        ))
    })?;
    for (i, part) in parts.iter().enumerate() {
        let file = out_dir.join(format!("part{}.json", i + 1));
        std::fs::write(&file, serialize_document(&Document::Pcpa(part.clone()))).map_err(
            |e| {
                Failure::internal(format!(
                    "internal error: cannot write {}: {e}",
                    file.display()
                ))
            },
        )?;
        println!("wrote {}", file.display());
    }
    println!(
        "decomposed into {} part{}",
        parts.len(),
        if parts.len() == 1 { "" } else { "s" }
    );
    Ok(EXIT_OK)
}

fn cmd_compare(
    left_path: &Path,
    right_path: &Path,
    max_len: usize,
    limits: &SearchLimits,
) -> Result<i32, Failure> {
    let left = load_document(left_path)?;
    let right = load_document(right_path)?;
    let comparison = compare_languages(machine_ref(&left), machine_ref(&right), max_len, limits)
        .map_err(|e| Failure::input(format!("input error: {e}")))?;
    println!(
        "checked {} words up to length {max_len}",
        comparison.words_checked
    );
    println!("agreed accepted: {}", comparison.agreed_accepted);
    println!("agreed rejected: {}", comparison.agreed_rejected);
    println!("left undecided: {}", comparison.left_unknown.len());
    println!("right undecided: {}", comparison.right_unknown.len());
    println!("disagreements: {}", comparison.disagreements.len());
    for d in &comparison.disagreements {
        println!(
            "disagree {}: left {}, right {}",
            render_word(&d.word),
            d.left,
            d.right
        );
    }
    if !comparison.agrees() {
        Ok(EXIT_NEGATIVE)
    } else if comparison.fully_decided() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_UNKNOWN)
    }
}

fn cmd_check_switch(path: &Path, word_text: &str, limits: &SearchLimits) -> Result<i32, Failure> {
    let word = parse_word(word_text)?;
    let sys = load_system(path, "check-switch")?;
    let sys = validated(path, sys)?;
    let check = check_switch_property(&sys, &word, limits)
        .map_err(|e| Failure::input(format!("input error: {}: {e}", path.display())))?;
    match &check.violation {
        Some(v) => {
            println!("violation: {v}");
            println!("explored {} configuration/flag pairs", check.explored);
            Ok(EXIT_NEGATIVE)
        }
        None if check.truncated => {
            println!(
                "inconclusive: limits hit after {} configuration/flag pairs",
                check.explored
            );
            Ok(EXIT_UNKNOWN)
        }
        None => {
            println!(
                "ok: switch property holds on this word ({} configuration/flag pairs explored)",
                check.explored
            );
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_parse_per_character_or_at_commas() {
        let w = parse_word("ab").expect("parses");
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].as_str(), "a");
        let w = parse_word("aa,bb").expect("parses");
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].as_str(), "aa");
        assert!(parse_word("").expect("parses").is_empty());
        assert!(parse_word("a b").is_err());
        assert!(parse_word("a,,b").is_err());
    }

    #[test]
    fn word_rendering_matches_configuration_conventions() {
        assert_eq!(render_word(&[]), "_");
        let ab = parse_word("ab").unwrap();
        assert_eq!(render_word(&ab), "ab");
        let long = parse_word("aa,b").unwrap();
        assert_eq!(render_word(&long), "aa.b");
    }

    #[test]
    fn usage_errors_exit_with_input_code() {
        assert_eq!(run(["pcpa", "no-such-command"]), EXIT_INPUT);
        assert_eq!(run(["pcpa"]), EXIT_INPUT);
        assert_eq!(run(["pcpa", "--help"]), EXIT_OK);
        assert_eq!(run(["pcpa", "--version"]), EXIT_OK);
    }

    #[test]
    fn missing_file_is_an_input_error() {
        assert_eq!(
            run(["pcpa", "validate", "/no/such/file.json"]),
            EXIT_INPUT
        );
    }
}
