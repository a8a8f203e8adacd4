use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ludics::behaviour::{parse_behaviour, parse_context, BehaviourPrinter};
use ludics::countermodel::{
    countermodel, render_model, render_report, verify_countermodel_membership, verify_defeat, CountermodelError,
};
use ludics::llp::{bullet, circ, isomorphic, parse_llp, parse_llp_list, prove_llp, StrictSequent};
use ludics::proofsys::{enumerate_members, render_branch, EnumMode};
use ludics::{
    evaluate_closed, normal_form, orthogonal, parse_document, parse_sequent, prove, Context, Polarity,
    ProofResult, Signature, Var, Verdict,
};

#[derive(Parser, Debug)]
#[command(name = "ludics", version, about = "Designs, behaviours, proof search and countermodels")]
struct Cli {
    /// Evaluation and search budget.
    #[arg(long, default_value_t = 100_000, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
    /// Depth of printed normal forms.
    #[arg(long, default_value_t = 8, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    /// Ethics members sampled by membership checks.
    #[arg(long, default_value_t = 20, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Report,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of a design; closed positive designs get a verdict.
    Normalize { file: PathBuf },
    /// Orthogonality of a positive design over x0 and a closed negative one.
    Orthogonal { positive: PathBuf, negative: PathBuf },
    /// Proof search on a sequent file.
    Prove { file: PathBuf },
    /// Countermodel of an underivable sequent, with its verification.
    Countermodel { file: PathBuf },
    /// Members of a context (or of one positive behaviour, bound to x0).
    Enumerate {
        /// Context text, or a path to a file holding it.
        behaviour: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        size: u64,
        /// Enumerate models (arbitrary conjunctions, daimon allowed).
        #[arg(long)]
        models: bool,
    },
    /// Polarized linear logic front end.
    #[command(subcommand)]
    Llp(LlpCommand),
}

#[derive(Subcommand, Debug)]
enum LlpCommand {
    /// Derivability of a strict sequent, given as a comma separated list.
    Check { formulas: String },
    /// The behaviour of a formula.
    Translate { formula: String },
    /// Translates there and back and compares up to isomorphism.
    Roundtrip { formula: String },
}

/// Output text and exit status of one invocation.
struct Outcome {
    out: String,
    code: u8,
}

impl Outcome {
    fn new(out: String, code: u8) -> Outcome {
        Outcome { out, code }
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Daimon => 0,
        Verdict::Omega => 1,
        Verdict::Unknown => 2,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn located(path: &Path, e: impl std::fmt::Display) -> anyhow::Error {
    anyhow::anyhow!("{}:{e}", path.display())
}

fn run(cli: &Cli) -> Result<Outcome> {
    let fuel = cli.fuel as usize;
    match &cli.command {
        Command::Normalize { file } => normalize(file, fuel, cli.depth as usize),
        Command::Orthogonal { positive, negative } => {
            let p = parse_document(&read(positive)?, &Signature::new()).map_err(|e| located(positive, e))?;
            let n = parse_document(&read(negative)?, &p.sig).map_err(|e| located(negative, e))?;
            let (Some(pd), Some(nd)) = (&p.expr, &n.expr) else { bail!("both files must contain a design") };
            p.defs.absorb(&n.defs).map_err(|e| located(negative, e))?;
            let out = orthogonal(pd, nd, &p.defs, fuel)?;
            Ok(Outcome::new(format!("{out}\n"), verdict_code(out.verdict)))
        }
        Command::Prove { file } => {
            let (s, defs) = parse_sequent(&read(file)?).map_err(|e| located(file, e))?;
            let result = prove(&s, &defs, fuel)?;
            let code = match result.verdict() {
                Some(true) => 0,
                Some(false) => 1,
                None => 2,
            };
            let out = match &result {
                ProofResult::Derived(d) => match cli.format {
                    Format::Text => format!("derivable\n{d}"),
                    Format::Report => format!("sequent: {s}\nresult: derivable\nproof_size: {}\n", d.size()),
                },
                ProofResult::Failed(b) | ProofResult::OutOfFuel(b) => {
                    let head = if code == 1 { "underivable" } else { "unknown" };
                    match cli.format {
                        Format::Text => format!("{head}\n{}", render_branch(b)),
                        Format::Report => format!("sequent: {s}\nresult: {head}\nbranch_length: {}\n", b.steps.len()),
                    }
                }
            };
            Ok(Outcome::new(out, code))
        }
        Command::Countermodel { file } => {
            let (s, defs) = parse_sequent(&read(file)?).map_err(|e| located(file, e))?;
            let (branch, m) = match countermodel(&s, &defs, fuel) {
                Ok(x) => x,
                Err(CountermodelError::Derived) => return Ok(Outcome::new("derivable: no countermodel\n".into(), 1)),
                Err(e) => return Err(e.into()),
            };
            let defeat = verify_defeat(&s, &m, fuel)?;
            let membership = verify_countermodel_membership(&s, &m, fuel, cli.samples as usize)?;
            let report = render_report(&s, &branch, &m, &defeat, Some(&membership));
            let out = match cli.format {
                Format::Text => format!("{}{report}", render_model(&m)),
                Format::Report => report,
            };
            let code = match defeat.verdict() {
                Verdict::Omega if membership.all_pass() => 0,
                Verdict::Unknown => 2,
                _ => 1,
            };
            Ok(Outcome::new(out, code))
        }
        Command::Enumerate { behaviour, size, models } => {
            let text = match std::fs::read_to_string(behaviour) {
                Ok(t) => t,
                Err(_) => behaviour.clone(),
            };
            let ctx = match parse_context(&text) {
                Ok((c, _)) => c,
                Err(first) => match parse_behaviour(&text, Polarity::Positive) {
                    Ok((b, _)) => {
                        let mut c = Context::new();
                        c.pos.push((Var::x0(), b));
                        c
                    }
                    Err(_) => bail!("{first}"),
                },
            };
            let mode = if *models { EnumMode::Models } else { EnumMode::Proofs };
            let found = enumerate_members(&ctx, *size as usize, mode);
            let mut out = String::new();
            for d in &found {
                let _ = writeln!(out, "{d}");
            }
            let _ = writeln!(out, "count: {}", found.len());
            Ok(Outcome::new(out, 0))
        }
        Command::Llp(cmd) => llp(cmd, fuel),
    }
}

fn normalize(file: &Path, fuel: usize, depth: usize) -> Result<Outcome> {
    let doc = parse_document(&read(file)?, &Signature::new()).map_err(|e| located(file, e))?;
    let Some(d) = &doc.expr else { bail!("{}: no design to normalize", file.display()) };
    let closed_positive = d.polarity(&doc.defs) == Some(Polarity::Positive) && d.free_vars().is_empty();
    if closed_positive {
        let out = evaluate_closed(d, &doc.defs, fuel)?;
        return Ok(Outcome::new(format!("{out}\n"), verdict_code(out.verdict)));
    }
    let nf = normal_form(d, &doc.defs, fuel, depth);
    let code = if nf.has_unknown() { 2 } else { 0 };
    Ok(Outcome::new(format!("{nf}\n"), code))
}

fn llp(cmd: &LlpCommand, fuel: usize) -> Result<Outcome> {
    match cmd {
        LlpCommand::Check { formulas } => {
            let s = StrictSequent::from_formulas(parse_llp_list(formulas)?)?;
            let proof = prove_llp(&s, fuel)?;
            let (head, code) = match proof.verdict {
                Some(true) => ("derivable", 0),
                Some(false) => ("underivable", 1),
                None => ("unknown", 2),
            };
            let mut out = format!("{s}\n{head}\n");
            if let Some(seq) = &proof.sequent {
                let _ = writeln!(out, "proof: {seq}");
            }
            Ok(Outcome::new(out, code))
        }
        LlpCommand::Translate { formula } => {
            let b = bullet(&parse_llp(formula)?)?;
            let mut p = BehaviourPrinter::new();
            let text = p.behaviour(&b);
            Ok(Outcome::new(format!("{}{text}\n", p.declarations()), 0))
        }
        LlpCommand::Roundtrip { formula } => {
            let f = parse_llp(formula)?;
            let back = circ(&bullet(&f)?);
            let iso = isomorphic(&f, &back);
            let out = format!("{f}\n{back}\n{}\n", if iso { "isomorphic" } else { "not isomorphic" });
            Ok(Outcome::new(out, if iso { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let worker = std::thread::Builder::new().stack_size(256 << 20).spawn(move || run(&cli));
    let result = match worker {
        Ok(h) => h.join().unwrap_or_else(|_| Err(anyhow::anyhow!("internal error"))),
        Err(e) => Err(e.into()),
    };
    match result {
        Ok(o) => {
            print!("{}", o.out);
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
