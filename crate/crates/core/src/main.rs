//! Command-line front end.
//!
//! Verdicts go to stdout and witnesses to files. Exit codes: 0 for SAT or
//! true, 1 for UNSAT or false, 2 for UNKNOWN, and 64 and above for errors
//! (64 usage, 65 bad input data, 66 unreadable input, 73 unwritable output,
//! 70 internal error).

use clap::{Parser, Subcommand, ValueEnum};
use hylo::blocktree::{realize, FiniteRep};
use hylo::checker::eval_named;
use hylo::formula::{fragment_of, parse, Formula};
use hylo::model::{Frame, HybridModel};
use hylo::oracle::{brute_global_sat, brute_sat};
use hylo::satellites::{parse_fo, print_fo, FOFormula};
use hylo::solver::{sat_complete, sat_transitive, Budget, SatResult, SolverError};
use hylo::translate as tr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NOINPUT: u8 = 66;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_CANTCREAT: u8 = 73;

/// `println!` that ignores a closed stdout, so piping into `head` does not
/// panic.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser, Debug)]
#[command(name = "hylo", version, about = "Hybrid logic toolkit")]
struct Cli {
    /// Worker threads for solver and oracle enumeration (output does not depend on it).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form and the fragment label of a formula.
    Parse {
        /// Formula to parse.
        #[arg(long)]
        formula: String,
    },
    /// Evaluate a formula at a state of a model.
    Check {
        /// Model file (JSON).
        #[arg(long)]
        model: PathBuf,
        /// Formula to evaluate.
        #[arg(long)]
        formula: String,
        /// State id.
        #[arg(long)]
        state: String,
        /// Variable assignment `$x=ID`; repeatable.
        #[arg(long = "assign", value_name = "$x=ID")]
        assign: Vec<String>,
    },
    /// Decide satisfiability of an HL-down sentence.
    Sat {
        /// Frame class.
        #[arg(long, value_enum, default_value_t = SatFrame::Trans)]
        frame: SatFrame,
        /// HL-down sentence.
        #[arg(long)]
        formula: String,
        /// Largest clique size tried before the refutation pass.
        #[arg(long, default_value_t = 4)]
        max_clique: usize,
        /// Largest number of tree nodes in a witness.
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
        /// Largest number of reference states in a witness.
        #[arg(long, default_value_t = 4)]
        max_c: usize,
        /// Run the refutation at the full clique bound however long it takes.
        #[arg(long)]
        exhaustive: bool,
        /// Where to write the witness representation.
        #[arg(long, default_value = "witness.json")]
        out: PathBuf,
    },
    /// Search all finite models of a frame class up to a size.
    Oracle {
        /// any, trans, complete, transitive-tree or linear.
        #[arg(long)]
        frame: Frame,
        /// Largest model size searched.
        #[arg(long)]
        max_states: usize,
        /// Sentence to satisfy.
        #[arg(long)]
        formula: String,
        /// Require the formula at every state.
        #[arg(long)]
        global: bool,
        /// Where to write the model found.
        #[arg(long, default_value = "model.json")]
        out: PathBuf,
    },
    /// Apply a translation or reduction.
    Translate {
        /// Translation to apply.
        #[arg(long, value_enum)]
        rule: Rule,
        /// Hybrid input.
        #[arg(long, conflicts_with = "fo", required_unless_present = "fo")]
        formula: Option<String>,
        /// First-order input.
        #[arg(long)]
        fo: Option<String>,
        /// First-order variable for the evaluation point (rule `st`).
        #[arg(long, default_value = "x")]
        anchor: String,
        /// Comma-separated alphabet (rule `string`).
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
        /// Write `R+` as a least fixpoint (rule `st`); that form does not parse back.
        #[arg(long)]
        lfp: bool,
    },
    /// Unravel a finite representation into a finite transitive model.
    Realize {
        /// Finite representation file (JSON), as written by `sat`.
        #[arg(long)]
        rep: PathBuf,
        /// Number of times each reference state is unrolled.
        #[arg(long)]
        depth: usize,
        /// Write the model here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SatFrame {
    Trans,
    Complete,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Rule {
    /// `U(a,b)` to `down`/`@` over all frames.
    #[value(name = "until-down", alias = "until_via_down")]
    UntilViaDown,
    /// `U(a,b)` to `down` with `F`/`P` over transitive frames.
    #[value(name = "until-down-tense", alias = "until_via_down_tense")]
    UntilViaDownTense,
    /// `S(a,b)` to `down` with `F`/`P` over transitive frames.
    #[value(name = "since-down-tense", alias = "since_via_down_tense")]
    SinceViaDownTense,
    /// ML to ML_U.
    #[value(name = "ml-until", alias = "ml_to_until")]
    MlToUntil,
    /// Global satisfiability of ML to satisfiability of ML_U.
    #[value(name = "globsat", alias = "globsat_reduction")]
    Globsat,
    /// `U` to `U++`.
    #[value(name = "u-upp", alias = "u_to_upp")]
    UToUpp,
    /// `U++` to `U`.
    #[value(name = "upp-u", alias = "upp_to_u")]
    UppToU,
    /// Standard translation into first-order logic.
    #[value(name = "st", alias = "standard_translation")]
    St,
    /// MC= sentence to HL-down over complete frames.
    #[value(name = "ht")]
    Ht,
    /// MC= satisfiability to HL-down satisfiability over transitive frames.
    #[value(name = "complete", alias = "complete_reduction")]
    CompleteReduction,
    /// One binary relation to a transitive one with four unary predicates.
    #[value(name = "zigzag")]
    Zigzag,
    /// Spy-point reduction into HL^@ over transitive frames.
    #[value(name = "spy-at", alias = "spy_at")]
    SpyAt,
    /// Spy-point reduction into HL-down with `F`/`P` over transitive frames.
    #[value(name = "spy-fp", alias = "spy_fp")]
    SpyFp,
    /// Transitive trees to the natural numbers, tense variant.
    #[value(name = "tt-nat-tense", alias = "tt_to_nat_tense")]
    TtToNatTense,
    /// Transitive trees to the natural numbers, `@` variant.
    #[value(name = "tt-nat-at", alias = "tt_to_nat_at")]
    TtToNatAt,
    /// `@` elimination over linear frames.
    #[value(name = "at-elim-linear", alias = "at_elim_linear")]
    AtElimLinear,
    /// FO over finite strings to HL-down over finite linear orders.
    #[value(name = "string", alias = "string_reduction")]
    String,
    /// `E` to `@` with a spy point.
    #[value(name = "e-at", alias = "exists_to_at")]
    ExistsToAt,
    /// Translation into PDL over trees.
    #[value(name = "pdl-translate", alias = "pdl_translate")]
    Pdl,
    /// Satisfiability over finite transitive trees to PDL over trees.
    #[value(name = "pdl", alias = "pdl_reduction")]
    PdlReduction,
    /// The rootless-tree variant of `pdl_reduction`.
    #[value(name = "pdl-flat", alias = "pdl_reduction_flat")]
    PdlReductionFlat,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn data(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_DATA, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_NOINPUT, message: format!("{}: {e}", path.display()) })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure { code: EXIT_CANTCREAT, message: format!("{}: {e}", path.display()) })
}

fn formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(Failure::data)
}

fn fo(text: &str) -> Result<FOFormula, Failure> {
    parse_fo(text).map_err(Failure::data)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_SOFTWARE);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Parse { formula: text } => {
            let f = formula(&text)?;
            say!("{f}");
            say!("fragment: {}", fragment_of(&f).label());
            Ok(0)
        }
        Command::Check { model, formula: text, state, assign } => {
            let m = HybridModel::from_json(&read(&model)?).map_err(Failure::data)?;
            let f = formula(&text)?;
            let g = assign.iter().map(|a| parse_assignment(a)).collect::<Result<Vec<_>, _>>()?;
            let holds = eval_named(&m, &g, &state, &f).map_err(Failure::data)?;
            say!("{holds}");
            Ok(if holds { 0 } else { 1 })
        }
        Command::Sat { frame, formula: text, max_clique, max_nodes, max_c, exhaustive, out } => {
            let f = formula(&text)?;
            let budget = Budget { max_clique, max_nodes, max_c, exhaustive };
            let result = match frame {
                SatFrame::Trans => sat_transitive(&f, &budget),
                SatFrame::Complete => sat_complete(&f, &budget),
            }
            .map_err(|e| match e {
                SolverError::WitnessRejected(_) => Failure { code: EXIT_SOFTWARE, message: e.to_string() },
                other => Failure::data(other),
            })?;
            say!("{result}");
            Ok(match result {
                SatResult::Sat(w) => {
                    write(&out, &w.rep.to_json(&w.guess))?;
                    say!("witness: {}", out.display());
                    0
                }
                SatResult::Unsat { .. } => 1,
                SatResult::Unknown(_) => 2,
            })
        }
        Command::Oracle { frame, max_states, formula: text, global, out } => {
            let f = formula(&text)?;
            let found = if global { brute_global_sat(&f, frame, max_states) } else { brute_sat(&f, frame, max_states) }
                .map_err(Failure::data)?;
            match found {
                Some(found) => {
                    write(&out, &found.model.to_json())?;
                    say!("found at state {}", found.model.name(found.state));
                    say!("model: {}", out.display());
                    Ok(0)
                }
                None => {
                    say!("not found within bound of {max_states} states over {frame} frames");
                    Ok(1)
                }
            }
        }
        Command::Translate { rule, formula: text, fo: fo_text, anchor, sigma, lfp } => {
            let output = translate(rule, text.as_deref(), fo_text.as_deref(), &anchor, &sigma, lfp)?;
            say!("{output}");
            Ok(0)
        }
        Command::Realize { rep, depth, out } => {
            let (rep, _) = FiniteRep::from_json(&read(&rep)?).map_err(Failure::data)?;
            let m = realize(&rep, depth).map_err(Failure::data)?;
            match out {
                Some(path) => write(&path, &m.to_json())?,
                None => say!("{}", m.to_json()),
            }
            Ok(0)
        }
    }
}

fn parse_assignment(text: &str) -> Result<(String, String), Failure> {
    let (var, state) = text.split_once('=').ok_or_else(|| Failure {
        code: EXIT_USAGE,
        message: format!("assignment '{text}' is not of the form $x=ID"),
    })?;
    let var = var.trim();
    Ok((var.strip_prefix('$').unwrap_or(var).to_string(), state.trim().to_string()))
}

fn need<'a>(text: Option<&'a str>, flag: &str, rule: Rule) -> Result<&'a str, Failure> {
    text.ok_or_else(|| Failure { code: EXIT_USAGE, message: format!("rule {rule:?} needs --{flag}") })
}

/// Split `U(a,b)` (or the `S` form when `since`) into its arguments.
fn binary(f: &Formula, since: bool) -> Result<(&Formula, &Formula), Failure> {
    match (f, since) {
        (Formula::Until(a, b), false) | (Formula::Since(a, b), true) => Ok((a, b)),
        _ => Err(Failure::data(format!("expected {}(a,b), got {f}", if since { "S" } else { "U" }))),
    }
}

fn translate(
    rule: Rule,
    text: Option<&str>,
    fo_text: Option<&str>,
    anchor: &str,
    sigma: &[String],
    lfp: bool,
) -> Result<String, Failure> {
    let hybrid = || need(text, "formula", rule).and_then(formula);
    let first_order = || need(fo_text, "fo", rule).and_then(fo);
    let done = |r: Result<Formula, tr::TranslateError>| r.map(|f| f.to_string()).map_err(Failure::data);
    let pdl =
        |r: Result<hylo::satellites::PdlFormula, tr::TranslateError>| r.map(|f| f.to_string()).map_err(Failure::data);
    match rule {
        Rule::UntilViaDown => {
            let f = hybrid()?;
            let (a, b) = binary(&f, false)?;
            Ok(tr::until_via_down(a, b).to_string())
        }
        Rule::UntilViaDownTense => {
            let f = hybrid()?;
            let (a, b) = binary(&f, false)?;
            Ok(tr::until_via_down_tense(a, b).to_string())
        }
        Rule::SinceViaDownTense => {
            let f = hybrid()?;
            let (a, b) = binary(&f, true)?;
            Ok(tr::since_via_down_tense(a, b).to_string())
        }
        Rule::MlToUntil => done(tr::ml_to_until(&hybrid()?)),
        Rule::Globsat => done(tr::globsat_reduction(&hybrid()?)),
        Rule::UToUpp => Ok(tr::u_to_upp(&hybrid()?).to_string()),
        Rule::UppToU => Ok(tr::upp_to_u(&hybrid()?).to_string()),
        Rule::St => tr::standard_translation(&hybrid()?, anchor).map(|a| print_fo(&a, lfp)).map_err(Failure::data),
        Rule::Ht => done(tr::ht(&first_order()?)),
        Rule::CompleteReduction => done(tr::complete_reduction(&first_order()?)),
        Rule::Zigzag => tr::zigzag(&first_order()?).map(|a| a.to_string()).map_err(Failure::data),
        Rule::SpyAt => done(tr::spy_at(&first_order()?)),
        Rule::SpyFp => done(tr::spy_fp(&first_order()?)),
        Rule::TtToNatTense => done(tr::tt_to_nat_tense(&hybrid()?)),
        Rule::TtToNatAt => done(tr::tt_to_nat_at(&hybrid()?)),
        Rule::AtElimLinear => Ok(tr::at_elim_linear(&hybrid()?).to_string()),
        Rule::String => {
            if sigma.is_empty() {
                return Err(Failure { code: EXIT_USAGE, message: "rule string needs --sigma".into() });
            }
            done(tr::string_reduction(&first_order()?, sigma))
        }
        Rule::ExistsToAt => Ok(tr::exists_to_at(&hybrid()?).to_string()),
        Rule::Pdl => pdl(tr::pdl_translate(&hybrid()?)),
        Rule::PdlReduction => pdl(tr::pdl_reduction(&hybrid()?)),
        Rule::PdlReductionFlat => pdl(tr::pdl_reduction_flat(&hybrid()?)),
    }
}
