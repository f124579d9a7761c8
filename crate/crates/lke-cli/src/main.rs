//! Command-line prover for the Lambek calculus family.

mod lexicon;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lke::label::CalculusSpec;
use lke::oracle::{oracle_prove, Verdict};
use lke::sequent::{parse_bracketing, parse_sequent, Sequent, Structure};
use lke::tableau::{prove, EngineError, ExpandOpts};

use lexicon::Lexicon;

const EXIT_THEOREM: u8 = 0;
const EXIT_NON_THEOREM: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_ORACLE_DISAGREES: u8 = 4;

const ORACLE_DEPTH: u32 = 3;

#[derive(Parser)]
#[command(name = "lke", about = "Labelled tableau prover for categorial calculi")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide derivability of a sequent
    Prove(ProveArgs),
}

#[derive(Args)]
struct ProveArgs {
    /// Calculus preset
    #[arg(long, value_parser = parse_calculus)]
    calculus: CalculusSpec,

    /// Sequent to prove, e.g. "NP, (NP\\S)/NP => S/NP"
    #[arg(long, conflicts_with_all = ["sentence", "batch"])]
    sequent: Option<String>,

    /// Sentence to parse via the lexicon, e.g. "John likes => S/NP"
    #[arg(long, requires = "lexicon", conflicts_with = "batch")]
    sentence: Option<String>,

    /// Batch file: one sequent per line, '#' comments
    #[arg(long)]
    batch: Option<String>,

    /// Lexicon file (TSV: word<TAB>category)
    #[arg(long)]
    lexicon: Option<String>,

    /// Disable the branching rule
    #[arg(long)]
    no_beta: bool,

    /// Cross-check the verdict against the sequent oracle
    #[arg(long)]
    oracle: bool,

    /// Antecedent bracketing for non-associative calculi, e.g. "( ( .. .. ) .. )"
    #[arg(long)]
    bracketing: Option<String>,

    /// Bound on derivation size
    #[arg(long)]
    limit: Option<usize>,

    /// Print search statistics
    #[arg(long)]
    stats: bool,

    /// Report every proving lexical assignment, not just the first
    #[arg(long)]
    all: bool,
}

fn parse_calculus(s: &str) -> Result<CalculusSpec, String> {
    CalculusSpec::preset(s)
        .ok_or_else(|| format!("unknown calculus '{s}' (expected NL, L, LP, LPC, LPE or LPCE)"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version output with code 0
            let code = if e.exit_code() == 0 { 0 } else { EXIT_USAGE };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Prove(args) => ExitCode::from(run_prove(&args)),
    }
}

fn expand_opts(args: &ProveArgs) -> ExpandOpts {
    let mut opts = ExpandOpts {
        beta_enabled: !args.no_beta,
        ..ExpandOpts::default()
    };
    if let Some(limit) = args.limit {
        opts.slf_limit = limit;
    }
    opts
}

fn run_prove(args: &ProveArgs) -> u8 {
    if let Some(path) = &args.batch {
        return run_batch(args, path);
    }
    let lexicon = match load_lexicon_arg(args) {
        Ok(l) => l,
        Err(code) => return code,
    };

    if let Some(text) = &args.sequent {
        let seq = match parse_sequent(text) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        };
        return check_sequent(args, &seq, true);
    }

    if let Some(text) = &args.sentence {
        let Some(lexicon) = lexicon else {
            eprintln!("error: --sentence requires --lexicon");
            return EXIT_USAGE;
        };
        return run_sentence(args, &lexicon, text);
    }

    eprintln!("error: one of --sequent, --sentence or --batch is required");
    EXIT_USAGE
}

fn load_lexicon_arg(args: &ProveArgs) -> Result<Option<Lexicon>, u8> {
    match &args.lexicon {
        None => Ok(None),
        Some(path) => match Lexicon::load(path) {
            Ok(l) => Ok(Some(l)),
            Err(e) => {
                eprintln!("error: {e}");
                Err(EXIT_USAGE)
            }
        },
    }
}

fn bracketing_for(args: &ProveArgs, seq: &Sequent) -> Result<Option<Structure>, u8> {
    match &args.bracketing {
        None => Ok(None),
        Some(p) => match parse_bracketing(p, &seq.antecedent) {
            Ok(st) => Ok(Some(st)),
            Err(e) => {
                eprintln!("error: {e}");
                Err(EXIT_USAGE)
            }
        },
    }
}

fn check_sequent(args: &ProveArgs, seq: &Sequent, print: bool) -> u8 {
    let bracketing = match bracketing_for(args, seq) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let opts = expand_opts(args);
    let result = match prove(
        &seq.antecedent,
        &seq.succedent,
        &args.calculus,
        &opts,
        bracketing.as_ref(),
    ) {
        Ok(r) => r,
        Err(EngineError::ResourceLimit { appended, limit }) => {
            eprintln!("resource limit exceeded: {appended} formulae (limit {limit})");
            return EXIT_RESOURCE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_RESOURCE;
        }
    };

    if args.oracle {
        let verdict = oracle_prove(seq, &args.calculus, ORACLE_DEPTH);
        let disagree = matches!(
            (result.theorem, verdict),
            (true, Verdict::Refuted) | (false, Verdict::Proved)
        );
        if disagree {
            println!(
                "ORACLE DISAGREEMENT: tableau says {}, oracle says {verdict}",
                if result.theorem { "theorem" } else { "non-theorem" }
            );
            return EXIT_ORACLE_DISAGREES;
        }
        if print {
            println!("oracle: {verdict}");
        }
    }

    if print {
        print!("{}", result.render());
        if args.stats {
            println!("{}", result.stats.record());
        }
    }
    if result.theorem {
        EXIT_THEOREM
    } else {
        EXIT_NON_THEOREM
    }
}

fn run_sentence(args: &ProveArgs, lexicon: &Lexicon, text: &str) -> u8 {
    let Some((words_part, succ_part)) = text.split_once("=>") else {
        eprintln!("error: expected '=>' in sentence");
        return EXIT_USAGE;
    };
    let succedent = match lke::parse_category(succ_part.trim()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let words: Vec<&str> = words_part.split_whitespace().collect();
    if words.is_empty() {
        eprintln!("error: no words before '=>'");
        return EXIT_USAGE;
    }
    let mut choices = Vec::new();
    for w in &words {
        match lexicon.lookup(w) {
            Some(cats) => choices.push(cats.to_vec()),
            None => {
                eprintln!("error: word '{w}' not in lexicon");
                return EXIT_USAGE;
            }
        }
    }

    // try assignments in lexicon order; first proof wins unless --all
    let mut idx = vec![0usize; choices.len()];
    let mut proved_any = false;
    let mut limited = false;
    loop {
        let assignment: Vec<lke::Category> = idx
            .iter()
            .zip(&choices)
            .map(|(i, c)| c[*i].clone())
            .collect();
        let seq = Sequent::new(assignment.clone(), succedent.clone());
        let code = check_sequent(args, &seq, false);
        match code {
            EXIT_THEOREM => {
                proved_any = true;
                let names: Vec<String> = words
                    .iter()
                    .zip(&assignment)
                    .map(|(w, c)| format!("{w}:{c}"))
                    .collect();
                println!("assignment: {}", names.join(" "));
                let bracketing = match bracketing_for(args, &seq) {
                    Ok(b) => b,
                    Err(code) => return code,
                };
                let r = prove(
                    &seq.antecedent,
                    &seq.succedent,
                    &args.calculus,
                    &expand_opts(args),
                    bracketing.as_ref(),
                )
                .expect("reproved assignment");
                print!("{}", r.render());
                if args.stats {
                    println!("{}", r.stats.record());
                }
                if !args.all {
                    return EXIT_THEOREM;
                }
            }
            EXIT_NON_THEOREM => {}
            EXIT_RESOURCE => limited = true,
            other => return other,
        }
        // advance the assignment odometer
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                if proved_any {
                    return EXIT_THEOREM;
                }
                println!("NOT A THEOREM");
                return if limited {
                    EXIT_RESOURCE
                } else {
                    EXIT_NON_THEOREM
                };
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn run_batch(args: &ProveArgs, path: &str) -> u8 {
    let content = match std::fs::read_to_string(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: cannot read {path}: {e}");
            return EXIT_USAGE;
        }
    };
    let mut worst = EXIT_THEOREM;
    for (n, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let seq = match parse_sequent(line) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: line {}: {e}", n + 1);
                return EXIT_USAGE;
            }
        };
        let code = check_sequent(args, &seq, false);
        let verdict = match code {
            EXIT_THEOREM => "THEOREM",
            EXIT_NON_THEOREM => "NOT A THEOREM",
            EXIT_RESOURCE => "RESOURCE LIMIT",
            EXIT_ORACLE_DISAGREES => "ORACLE DISAGREEMENT",
            _ => return code,
        };
        println!("{seq} : {verdict}");
        worst = worst.max(code);
    }
    worst
}
