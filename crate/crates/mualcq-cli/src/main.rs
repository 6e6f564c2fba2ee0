//! Command-line front end: parse and check concepts and TBoxes, evaluate
//! extensions over model files, run bounded satisfiability and implication
//! searches, translate to (deterministic) modal mu-calculus, stream models,
//! and run the property suites.
//!
//! Exit codes: 0 success / holds / satisfiable; 1 refuted, failed
//! well-formedness check or suite violation; 2 unknown up to the bound;
//! 64 usage error; 65 malformed input; 70 internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use mualcq::models::io::{parse_model, print_model};
use mualcq::models::{enumerate_interpretations, evaluate, satisfies_tbox, ElemSet, Signature, Valuation};
use mualcq::mucalc::{print_mu_formula, translate_q, translate_u};
use mualcq::reasoning::{
    closure_bound, implies_bounded, law_suite, sat_bounded, sat_bounded_in, theorem_suite,
    ImplicationVerdict, ReasoningError, SatVerdict, Strategy, SuiteCfg,
};
use mualcq::syntax::{
    free_variables, free_vars_to_atomics, parse_concept, parse_concept_with_free, parse_tbox,
    Concept, SyntaxError, TBox,
};

const EXIT_OK: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_INPUT: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(
    name = "mualcq",
    version,
    about = "Reasoner and translator for the description logic mu-ALCQ",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format for verdicts and models.
    #[arg(long, global = true, env = "MUALCQ_OUTPUT", default_value = "text")]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Direct,
    Internalized,
    Both,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Direct => Strategy::Direct,
            StrategyArg::Internalized => Strategy::Internalized,
            StrategyArg::Both => Strategy::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// Plain modal mu-calculus (concepts without number restrictions).
    Mu,
    /// Deterministic modal mu-calculus (any concept).
    Detmu,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and check well-formedness (TBox when the extension is
    /// .tbx, concept otherwise).
    Check { file: PathBuf },
    /// Search for a model in which the concept has a non-empty extension.
    Sat {
        concept: String,
        /// Restrict the search to models of this TBox.
        #[arg(long)]
        tbox: Option<PathBuf>,
        /// Largest domain size to try.
        #[arg(long, env = "MUALCQ_MAX_SIZE", default_value_t = 3)]
        max: usize,
    },
    /// Check whether the TBox implies an inclusion between two concepts.
    Implies {
        #[arg(long)]
        tbox: PathBuf,
        lhs: String,
        rhs: String,
        #[arg(long, env = "MUALCQ_MAX_SIZE", default_value_t = 3)]
        max: usize,
        #[arg(long, value_enum, default_value = "direct")]
        strategy: StrategyArg,
    },
    /// Print the extension of a concept in a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        concept: String,
        /// Free-variable binding `X=elem1,elem2`; repeatable.
        #[arg(long = "free")]
        free: Vec<String>,
    },
    /// Translate a concept to modal mu-calculus.
    Translate {
        concept: String,
        #[arg(long, value_enum)]
        target: Target,
    },
    /// Stream every model of the TBox with the given domain size.
    Models {
        #[arg(long)]
        tbox: PathBuf,
        #[arg(long)]
        size: usize,
    },
    /// Run the monotonicity-theorem and algebraic-law property suites.
    Suite {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, env = "MUALCQ_SEED", default_value_t = 0xA1C9)]
        seed: u64,
        /// Domain cap for the brute-force fixpoint oracle.
        #[arg(long, env = "MUALCQ_BRUTE_CAP", default_value_t = 4)]
        brute_cap: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::from(EXIT_OK);
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let output = cli.output;
    match run(cli.command, output) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.exit)
        }
    }
}

struct Failure {
    exit: u8,
    message: String,
}

fn input_err(message: impl ToString) -> Failure {
    Failure {
        exit: EXIT_INPUT,
        message: message.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_tbox(path: &Path) -> Result<TBox, Failure> {
    parse_tbox(&read(path)?).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

/// Parses a concept argument; free variables are read as atomic concepts,
/// which preserves satisfiability.
fn concept_arg(text: &str) -> Result<Concept, Failure> {
    let c = parse_concept(text).map_err(input_err)?;
    if !free_variables(&c).is_empty() {
        eprintln!("note: free variables are interpreted as atomic concepts");
        Ok(free_vars_to_atomics(&c))
    } else {
        Ok(c)
    }
}

fn reasoning_failure(e: ReasoningError) -> Failure {
    let exit = match e {
        ReasoningError::WitnessRecheckFailed | ReasoningError::StrategyDisagreement { .. } => {
            EXIT_INTERNAL
        }
        _ => EXIT_INPUT,
    };
    Failure {
        exit,
        message: e.to_string(),
    }
}

fn warn_uninterpreted(c: &Concept, interp: &mualcq::Interpretation) {
    for name in c.atomic_concepts() {
        if !interp.concept_names().any(|n| n == name) {
            eprintln!("warning: model does not interpret concept `{name}`; defaulting to the empty extension");
        }
    }
    for name in c.roles() {
        if !interp.role_names().any(|n| n == name) {
            eprintln!("warning: model does not interpret role `{name}`; defaulting to the empty extension");
        }
    }
}

fn run(command: Command, output: OutputFormat) -> Result<u8, Failure> {
    match command {
        Command::Check { file } => check_cmd(&file),
        Command::Sat { concept, tbox, max } => sat_cmd(&concept, tbox.as_deref(), max, output),
        Command::Implies {
            tbox,
            lhs,
            rhs,
            max,
            strategy,
        } => implies_cmd(&tbox, &lhs, &rhs, max, strategy.into(), output),
        Command::Eval {
            model,
            concept,
            free,
        } => eval_cmd(&model, &concept, &free),
        Command::Translate { concept, target } => translate_cmd(&concept, target),
        Command::Models { tbox, size } => models_cmd(&tbox, size, output),
        Command::Suite {
            samples,
            seed,
            brute_cap,
        } => suite_cmd(samples, seed, brute_cap),
    }
}

fn check_cmd(file: &Path) -> Result<u8, Failure> {
    let text = read(file)?;
    let is_tbox = file.extension().is_some_and(|e| e == "tbx");
    let outcome = if is_tbox {
        parse_tbox(&text).map(|k| format!("ok: TBox with {} inclusions", k.len()))
    } else {
        parse_concept(&text).map(|c| {
            let free = free_variables(&c);
            if free.is_empty() {
                "ok: closed concept".to_string()
            } else {
                let names: Vec<&str> = free.iter().map(String::as_str).collect();
                format!("ok: concept with free variables {}", names.join(", "))
            }
        })
    };
    match outcome {
        Ok(line) => {
            println!("{line}");
            Ok(EXIT_OK)
        }
        // Malformed text is an input error; a validation failure on
        // syntactically fine input is the check's negative verdict.
        Err(e @ SyntaxError::Parse { .. }) => Err(input_err(e)),
        Err(e) => {
            println!("rejected: {e}");
            Ok(EXIT_REFUTED)
        }
    }
}

fn print_sat_verdict(verdict: &SatVerdict, advisory: Option<u128>, output: OutputFormat) {
    match output {
        OutputFormat::Structured => {
            print!("{}", verdict.to_structured_text());
            if let (SatVerdict::UnknownUpTo { .. }, Some(bound)) = (verdict, advisory) {
                println!("advisory-complete-bound: {bound}");
            }
        }
        OutputFormat::Text => match verdict {
            SatVerdict::Satisfiable { witness, element } => {
                println!("satisfiable: element {element} in a model of size {}", witness.size());
                print!("{}", print_model(witness));
            }
            SatVerdict::UnknownUpTo { bound } => {
                println!("unknown up to size {bound} (not a proof of unsatisfiability)");
                if let Some(b) = advisory {
                    println!("advisory: bounded search is complete only if the size bound reaches {b}");
                }
            }
        },
    }
}

fn sat_cmd(
    concept: &str,
    tbox: Option<&Path>,
    max: usize,
    output: OutputFormat,
) -> Result<u8, Failure> {
    let c = concept_arg(concept)?;
    let verdict = match tbox {
        None => {
            let sig = Signature::of_concept(&c);
            sat_bounded(&c, max, &sig).map_err(reasoning_failure)?
        }
        Some(path) => {
            let k = load_tbox(path)?;
            let sig = Signature::of_inputs(&k, &[&c]);
            sat_bounded_in(&k, &c, max, &sig).map_err(reasoning_failure)?
        }
    };
    let advisory = Some(closure_bound(&c));
    print_sat_verdict(&verdict, advisory, output);
    Ok(match verdict {
        SatVerdict::Satisfiable { .. } => EXIT_OK,
        SatVerdict::UnknownUpTo { .. } => EXIT_UNKNOWN,
    })
}

fn implies_cmd(
    tbox: &Path,
    lhs: &str,
    rhs: &str,
    max: usize,
    strategy: Strategy,
    output: OutputFormat,
) -> Result<u8, Failure> {
    let k = load_tbox(tbox)?;
    let c = concept_arg(lhs)?;
    let d = concept_arg(rhs)?;
    let verdict = implies_bounded(&k, &c, &d, max, strategy).map_err(reasoning_failure)?;
    match output {
        OutputFormat::Structured => print!("{}", verdict.to_structured_text()),
        OutputFormat::Text => match &verdict {
            ImplicationVerdict::Refuted {
                counter_model,
                element,
            } => {
                println!(
                    "refuted: element {element} separates the concepts in a model of size {}",
                    counter_model.size()
                );
                print!("{}", print_model(counter_model));
            }
            ImplicationVerdict::HoldsUpTo { bound } => {
                let suffix = match strategy {
                    Strategy::Both => " (both strategies agree)",
                    _ => "",
                };
                println!("holds up to size {bound}{suffix}");
            }
        },
    }
    Ok(match verdict {
        ImplicationVerdict::HoldsUpTo { .. } => EXIT_OK,
        ImplicationVerdict::Refuted { .. } => EXIT_REFUTED,
    })
}

fn eval_cmd(model: &Path, concept: &str, free: &[String]) -> Result<u8, Failure> {
    let interp = parse_model(&read(model)?).map_err(input_err)?;

    let mut declared = Vec::new();
    let mut rho = Valuation::empty();
    for binding in free {
        let (var, elems) = binding
            .split_once('=')
            .ok_or_else(|| input_err(format!("--free expects `X=elem1,elem2`, got `{binding}`")))?;
        let mut set = ElemSet::EMPTY;
        for name in elems.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let idx = interp
                .index_of(name)
                .ok_or_else(|| input_err(format!("unknown element `{name}` in --free {var}")))?;
            set.insert(idx);
        }
        declared.push(var.trim().to_string());
        rho.set(var.trim(), set);
    }

    let c = parse_concept_with_free(concept, &declared).map_err(input_err)?;
    warn_uninterpreted(&c, &interp);
    let ext = evaluate(&c, &interp, &rho).map_err(input_err)?;
    println!("extension: [{}]", interp.names_of(ext).join(", "));
    Ok(EXIT_OK)
}

fn translate_cmd(concept: &str, target: Target) -> Result<u8, Failure> {
    let c = concept_arg(concept)?;
    match target {
        Target::Mu => {
            let phi = translate_q(&c).map_err(input_err)?;
            println!("formula: {}", print_mu_formula(&phi));
        }
        Target::Detmu => {
            let result = translate_u(&c);
            println!("formula: {}", print_mu_formula(&result.formula));
            for (role, fresh) in &result.fresh_roles {
                println!("fresh {role} -> {fresh}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn models_cmd(tbox: &Path, size: usize, output: OutputFormat) -> Result<u8, Failure> {
    let k = load_tbox(tbox)?;
    let sig = Signature::of_tbox(&k);
    let bits = sig.extension_bits(size);
    if bits > 32 {
        return Err(input_err(format!(
            "refusing to stream 2^{bits} interpretations; reduce --size"
        )));
    }
    let iter = enumerate_interpretations(&sig, size).map_err(input_err)?;
    let mut count = 0usize;
    for interp in iter {
        if satisfies_tbox(&interp, &k).is_ok() {
            count += 1;
            match output {
                OutputFormat::Text => {
                    println!("model {count}:");
                    print!("{}", print_model(&interp));
                    println!();
                }
                OutputFormat::Structured => {
                    print!("{}", print_model(&interp));
                    println!("---");
                }
            }
        }
    }
    println!("count: {count}");
    Ok(EXIT_OK)
}

fn suite_cmd(samples: usize, seed: u64, brute_cap: usize) -> Result<u8, Failure> {
    let cfg = SuiteCfg {
        seed,
        brute_force_cap: brute_cap,
        ..SuiteCfg::default()
    };
    let theorems = theorem_suite(samples, &cfg);
    println!("{theorems}");
    let laws = law_suite(samples, &cfg);
    println!("{laws}");
    if theorems.ok() && laws.ok() {
        println!("result: ok");
        Ok(EXIT_OK)
    } else {
        println!("result: violations found");
        Ok(EXIT_REFUTED)
    }
}
