use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cau::corpus;
use cau::gen::{self, GenSpec};
use cau::machine;
use cau::naive;
use cau::rewrite::{self, RewriteError, SIGMA, SIGMA_TAU, TAU};
use cau::sigma;
use cau::surface;
use cau::syntax::{Term, Trail};
use cau::trace::TraceRow;

const EXIT_OK: u8 = 0;
const EXIT_PROPERTY_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FUEL: u8 = 3;
const EXIT_STUCK: u8 = 4;

#[derive(Parser)]
#[command(name = "cau", about = "Audited lambda calculus workbench", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a file and echo the elaborated term
    Parse { file: PathBuf },
    /// Reduce a term to a normal form or final value
    Reduce {
        #[arg(long, value_enum, default_value_t = Engine::Naive)]
        engine: Engine,
        /// Step budget (defaults to CAU_FUEL, or the engine default)
        #[arg(long)]
        max_steps: Option<u64>,
        /// Write a JSONL trace of every step
        #[arg(long)]
        trace: Option<PathBuf>,
        file: PathBuf,
    },
    /// Rewrite to a normal form of the chosen rule set
    Normalize {
        #[arg(long, value_enum)]
        rules: RuleArg,
        file: PathBuf,
    },
    /// Count the contractions recorded by the term's final bang trail
    InspectCount { file: PathBuf },
    /// Run a property of the calculus against generated terms
    Check {
        #[arg(long)]
        property: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 25)]
        size: u32,
    },
    /// Reproduce a worked example
    Demo {
        #[arg(value_enum)]
        which: DemoArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Naive,
    Sigma,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Tau,
    Sigma,
    Sigmatau,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DemoArg {
    Fig1,
    Example1,
    Example2,
    Example3,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Parse { file } => cmd_parse(&file),
        Cmd::Reduce {
            engine,
            max_steps,
            trace,
            file,
        } => cmd_reduce(engine, max_steps, trace.as_deref(), &file),
        Cmd::Normalize { rules, file } => cmd_normalize(rules, &file),
        Cmd::InspectCount { file } => cmd_inspect_count(&file),
        Cmd::Check {
            property,
            seed,
            count,
            size,
        } => cmd_check(&property, seed, count, size),
        Cmd::Demo { which } => cmd_demo(which),
    };
    ExitCode::from(code)
}

fn load_term(file: &std::path::Path) -> Result<Term, u8> {
    let text = fs::read_to_string(file).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", file.display());
        EXIT_USAGE
    })?;
    surface::parse_term(&text).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })
}

fn machine_fuel() -> u64 {
    std::env::var("CAU_FUEL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(100_000)
}

fn cmd_parse(file: &std::path::Path) -> u8 {
    match load_term(file) {
        Ok(t) => {
            println!("{t}");
            EXIT_OK
        }
        Err(code) => code,
    }
}

fn cmd_normalize(rules: RuleArg, file: &std::path::Path) -> u8 {
    let t = match load_term(file) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let rules = match rules {
        RuleArg::Tau => TAU,
        RuleArg::Sigma => SIGMA,
        RuleArg::Sigmatau => SIGMA_TAU,
    };
    match rewrite::normalize_term(&t, rules, rewrite::default_fuel()) {
        Ok(n) => {
            println!("{n}");
            EXIT_OK
        }
        Err(RewriteError::FuelExhausted(f)) => {
            eprintln!("error: no normal form within {f} rewrite steps");
            EXIT_FUEL
        }
    }
}

fn root_bang_trail(t: &Term) -> Option<&Trail> {
    match t {
        Term::Bang(q, _) => Some(q),
        Term::Annot(_, b) => root_bang_trail(b),
        _ => None,
    }
}

fn cmd_reduce(
    engine: Engine,
    max_steps: Option<u64>,
    trace: Option<&std::path::Path>,
    file: &std::path::Path,
) -> u8 {
    let t = match load_term(file) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let mut rows: Vec<TraceRow> = Vec::new();
    let code = match engine {
        Engine::Naive => reduce_naive(&t, max_steps, &mut rows),
        Engine::Sigma => reduce_sigma(&t, max_steps, &mut rows),
        Engine::Machine => reduce_machine(&t, max_steps, &mut rows),
    };
    if let Some(path) = trace {
        let file = match fs::File::create(path) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: cannot write trace {}: {e}", path.display());
                return EXIT_USAGE;
            }
        };
        if let Err(e) = cau::trace::write_rows(file, &rows) {
            eprintln!("error: cannot write trace: {e}");
            return EXIT_USAGE;
        }
    }
    code
}

fn redex_rule_name(kind: &naive::RedexKind) -> &'static str {
    match kind {
        naive::RedexKind::Beta => "beta",
        naive::RedexKind::BetaBang => "beta-bang",
        naive::RedexKind::Inspect { .. } => "inspect",
    }
}

fn path_string(path: &cau::path::TermPath) -> String {
    let parts: Vec<String> = path.0.iter().map(|c| c.to_string()).collect();
    if parts.is_empty() {
        "root".to_string()
    } else {
        parts.join(".")
    }
}

fn reduce_naive(t: &Term, max_steps: Option<u64>, rows: &mut Vec<TraceRow>) -> u8 {
    let fuel = max_steps.unwrap_or_else(rewrite::default_fuel);
    let mut cur = match naive::tau_normalize(t) {
        Ok(c) => c,
        Err(RewriteError::FuelExhausted(f)) => {
            eprintln!("error: no tau normal form within {f} steps");
            return EXIT_FUEL;
        }
    };
    for step in 0..fuel {
        let redexes = naive::find_principal_redexes(&cur);
        let Some((path, kind)) = redexes.first() else {
            println!("{cur}");
            return EXIT_OK;
        };
        cur = match naive::principal_contract(&cur, path)
            .map_err(|e| e.to_string())
            .and_then(|n| naive::tau_normalize(&n).map_err(|e| e.to_string()))
        {
            Ok(n) => n,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_STUCK;
            }
        };
        rows.push(TraceRow {
            step,
            engine: "naive".into(),
            rule: redex_rule_name(kind).into(),
            position: path_string(path),
            rendering: cur.to_string(),
            bang_trail: root_bang_trail(&cur).map(|q| q.to_string()),
        });
    }
    if naive::find_principal_redexes(&cur).is_empty() {
        println!("{cur}");
        EXIT_OK
    } else {
        eprintln!("error: step budget of {fuel} exhausted");
        EXIT_FUEL
    }
}

fn reduce_sigma(t: &Term, max_steps: Option<u64>, rows: &mut Vec<TraceRow>) -> u8 {
    let fuel = max_steps.unwrap_or_else(rewrite::default_fuel);
    let mut cur = t.clone();
    for step in 0..fuel {
        let redexes = sigma::beta_sigma_redexes(&cur);
        let Some((path, kind)) = redexes.first() else {
            println!("{cur}");
            return EXIT_OK;
        };
        cur = match sigma::beta_sigma_contract(&cur, path) {
            Ok(n) => n,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_STUCK;
            }
        };
        let bang_trail = root_bang_trail(&cur)
            .and_then(|q| sigma::sigmatau_normalize_trail(q).ok())
            .map(|q| q.to_string());
        rows.push(TraceRow {
            step,
            engine: "sigma".into(),
            rule: redex_rule_name(kind).into(),
            position: path_string(path),
            rendering: cur.to_string(),
            bang_trail,
        });
    }
    if sigma::beta_sigma_redexes(&cur).is_empty() {
        println!("{cur}");
        EXIT_OK
    } else {
        eprintln!("error: step budget of {fuel} exhausted");
        EXIT_FUEL
    }
}

const MACHINE_RULE_NAMES: [&str; 10] = [
    "app-split",
    "apply",
    "lam-value",
    "let-split",
    "let-open",
    "bang-enter",
    "bang-seal",
    "inspect-split",
    "inspect-apply",
    "lookup",
];

fn reduce_machine(t: &Term, max_steps: Option<u64>, rows: &mut Vec<TraceRow>) -> u8 {
    let c0 = match machine::inject(t) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let fuel = max_steps.unwrap_or_else(machine_fuel);
    let (outcome, trace) = match machine::run(&c0, fuel) {
        Ok(r) => r,
        Err(RewriteError::FuelExhausted(f)) => {
            eprintln!("error: trail normalization exhausted {f} steps");
            return EXIT_FUEL;
        }
    };
    for (step, (rule, cfg)) in trace.iter().enumerate() {
        rows.push(TraceRow {
            step: step as u64,
            engine: "machine".into(),
            rule: MACHINE_RULE_NAMES[*rule as usize - 1].into(),
            position: rule.to_string(),
            rendering: machine::denote_config(cfg)
                .map(|t| t.to_string())
                .unwrap_or_else(|e| format!("<{e}>")),
            bang_trail: None,
        });
    }
    match outcome {
        machine::RunOutcome::Final(v) => {
            let denoted = machine::value_term(&v);
            match sigma::sigmatau_normalize(&denoted) {
                Ok(n) => println!("{n}"),
                Err(_) => println!("{denoted}"),
            }
            EXIT_OK
        }
        machine::RunOutcome::Stuck(reason) => {
            eprintln!("error: machine stuck: {reason}");
            EXIT_STUCK
        }
        machine::RunOutcome::FuelExhausted => {
            eprintln!("error: step budget of {fuel} exhausted");
            EXIT_FUEL
        }
    }
}

fn cmd_inspect_count(file: &std::path::Path) -> u8 {
    let t = match load_term(file) {
        Ok(t) => t,
        Err(code) => return code,
    };
    // reduce to a normal form first so the trail is the complete history
    let mut cur = match naive::tau_normalize(&t) {
        Ok(c) => c,
        Err(_) => {
            eprintln!("error: no tau normal form within the fuel budget");
            return EXIT_FUEL;
        }
    };
    for _ in 0..rewrite::default_fuel() {
        match naive::cau_step(&cur) {
            Ok(Some(next)) => cur = next,
            Ok(None) => break,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_STUCK;
            }
        }
    }
    let Some(q) = root_bang_trail(&cur) else {
        eprintln!("error: reduced term has no bang at the root");
        return EXIT_STUCK;
    };
    let counted = match naive::apply_replacement(q, &corpus::theta_plus()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_STUCK;
        }
    };
    match corpus::beta_normalize(&counted).map(|n| corpus::church_decode(&n)) {
        Ok(Some(n)) => {
            println!("{n}");
            EXIT_OK
        }
        Ok(None) => {
            eprintln!("error: counter did not reduce to a numeral");
            EXIT_STUCK
        }
        Err(_) => {
            eprintln!("error: counting ran out of fuel");
            EXIT_FUEL
        }
    }
}

fn cmd_check(property: &str, seed: u64, count: u64, size: u32) -> u8 {
    let spec = match property {
        "machine-soundness" | "machine-validity" | "admissible-rules" => {
            GenSpec::pure_closed(seed, size)
        }
        "sigmatau-confluence" | "sigmatau-termination" | "simulation-backward" => {
            GenSpec::sigma_rich(seed, size)
        }
        _ => GenSpec::pure_open(seed, size),
    };
    match gen::check_property(property, &spec, count) {
        Ok(report) => {
            println!("{}", report.render());
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e} (known: {})", gen::PROPERTY_NAMES.join(", "));
            EXIT_USAGE
        }
    }
}

fn cmd_demo(which: DemoArg) -> u8 {
    match which {
        DemoArg::Fig1 => {
            let spec = GenSpec::pure_open(0, 5);
            let report = gen::check_property("fig1-anachronism", &spec, 1).expect("known name");
            println!("{}", report.render());
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILURE
            }
        }
        DemoArg::Example1 => {
            // let x = ! two in let y = ! six in plus x y, reduced to the end
            let t = Term::let_bang(
                Term::bang(Trail::Refl, cau::syntax::church(2)),
                Term::let_bang(
                    Term::bang(Trail::Refl, cau::syntax::church(6)),
                    Term::app(
                        Term::app(corpus::plus(), Term::Index(2)),
                        Term::Index(1),
                    ),
                ),
            );
            let mut cur = naive::tau_normalize(&t).expect("normalizes");
            while let Ok(Some(next)) = naive::cau_step(&cur) {
                cur = next;
            }
            println!("{cur}");
            let decoded = match &cur {
                Term::Annot(_, body) => corpus::church_decode(body),
                other => corpus::church_decode(other),
            };
            match decoded {
                Some(8) => {
                    println!("decoded: 8");
                    EXIT_OK
                }
                other => {
                    eprintln!("error: expected the numeral 8, decoded {other:?}");
                    EXIT_PROPERTY_FAILURE
                }
            }
        }
        DemoArg::Example2 => {
            let mut cur = naive::tau_normalize(&corpus::example2_term()).expect("normalizes");
            // print the trails in the shape the worked example displays them,
            // after checking they normalize to what the engine computed
            for expected in corpus::example2_trails() {
                cur = naive::cau_step(&cur)
                    .expect("steps")
                    .expect("has a redex");
                let Some(q) = root_bang_trail(&cur) else {
                    eprintln!("error: no bang at the root");
                    return EXIT_PROPERTY_FAILURE;
                };
                if naive::tau_normalize_trail(&expected).as_ref() != Ok(q) {
                    eprintln!("error: engine produced the trail {q}, expected {expected}");
                    return EXIT_PROPERTY_FAILURE;
                }
                println!("{expected}");
            }
            EXIT_OK
        }
        DemoArg::Example3 => {
            let counted = naive::apply_replacement(&corpus::example3_trail(), &corpus::theta_plus())
                .expect("pure trail");
            println!("{counted}");
            let normal = corpus::beta_normalize(&counted).expect("terminates");
            match corpus::church_decode(&normal) {
                Some(n) => {
                    println!("count: {n}");
                    EXIT_OK
                }
                None => {
                    eprintln!("error: counter did not reduce to a numeral");
                    EXIT_PROPERTY_FAILURE
                }
            }
        }
    }
}
