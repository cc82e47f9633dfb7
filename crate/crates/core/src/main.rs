use std::cmp::Ordering;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use grouplab::cesets::Scenario;
use grouplab::diagrams::{triples_below, ComputableGroup};
use grouplab::harness::{self, CheckSpec, ExperimentSpec, Group, GroupFile, HarnessError, Recipe};
use grouplab::orders::{self, OrderMode};
use grouplab::words::Word;

#[derive(Parser)]
#[command(name = "grouplab", version, about = "Staged group constructions, bounded checkers and orderability probes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a construction on a scenario and record the result.
    Construct {
        name: String,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Witness pair for markov-rp / markov-cg.
        #[arg(long)]
        property: Option<String>,
        /// Builtin replacing the positive witness of markov-cg.
        #[arg(long)]
        positive: Option<String>,
        /// Builtin replacing the negative witness of markov-cg.
        #[arg(long)]
        negative: Option<String>,
    },
    /// Evaluate one property and print the verdict as JSON.
    Check {
        property: String,
        /// Group file or builtin name.
        #[arg(long)]
        group: String,
        #[arg(long)]
        bound: Option<u64>,
        /// Commutator length, derived depth, class count or tuple size.
        #[arg(long = "class")]
        n: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        max_exp: Option<u64>,
        #[arg(long)]
        max_index: Option<u32>,
        #[arg(long)]
        code_max: Option<u64>,
        #[arg(long)]
        order_bound: Option<u64>,
        #[arg(long)]
        decider: Option<String>,
    },
    /// Power-series order on F(a, b) and the sign-vector refuter.
    Order {
        #[command(subcommand)]
        command: OrderCommand,
    },
    /// Run one experiment spec and print its report.
    Run { spec: PathBuf },
    /// Run every spec in a directory; fails if any expectation is missed.
    Suite { dir: PathBuf },
    /// Recursive presentations.
    Present {
        #[command(subcommand)]
        command: PresentCommand,
    },
    /// Atomic diagrams.
    Diagram {
        #[command(subcommand)]
        command: DiagramCommand,
    },
}

#[derive(Subcommand)]
enum OrderCommand {
    /// Compare two words over a, b.
    Compare {
        w: String,
        v: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Print the truncated series of a word.
    Expand {
        w: String,
        #[arg(long)]
        degree: usize,
    },
    /// Try every sign vector on the elements.
    Refute {
        #[arg(long)]
        group: String,
        /// Comma-separated words, or `#k` for a raw code.
        #[arg(long)]
        elements: String,
        #[arg(long, default_value = "left")]
        mode: OrderMode,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Stage for presentations.
        #[arg(long)]
        stage: Option<usize>,
    },
}

#[derive(Subcommand)]
enum PresentCommand {
    /// Print generators and relators released by a stage.
    Show {
        file: String,
        #[arg(long)]
        stage: usize,
    },
}

#[derive(Subcommand)]
enum DiagramCommand {
    /// Print the triples on codes below N as JSON lines.
    Dump {
        builtin: String,
        #[arg(long)]
        codes: u64,
        /// Stage whose triples are listed (default: large enough to name every code).
        #[arg(long)]
        stage: Option<usize>,
    },
}

fn parse_word(s: &str) -> Result<Word, HarnessError> {
    Word::parse(s).map_err(|e| HarnessError::Invalid(e.to_string()))
}

fn stdout_error(e: io::Error) -> HarnessError {
    HarnessError::Io { path: "<stdout>".into(), message: e.to_string() }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), HarnessError> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Construct { name, scenario, stage, out, property, positive, negative } => {
            let text = fs::read_to_string(&scenario)
                .map_err(|e| HarnessError::Io { path: scenario.display().to_string(), message: e.to_string() })?;
            let recipe = Recipe {
                property,
                positive,
                negative,
                ..Recipe::construction(&name, Scenario::from_json(&text)?)
            };
            let file = GroupFile::record(recipe, stage)?;
            let body = serde_json::to_string_pretty(&file)?;
            match out {
                Some(path) => fs::write(&path, body + "\n")
                    .map_err(|e| HarnessError::Io { path: path.display().to_string(), message: e.to_string() })?,
                None => println!("{body}"),
            }
            Ok(true)
        }
        Command::Check { property, group, bound, n, max_len, max_exp, max_index, code_max, order_bound, decider } => {
            let file = GroupFile::load(&group)?;
            let mut g = file.recipe.build()?;
            let budget = match (&g, harness::budget_override()?) {
                (_, Some(b)) => b,
                (Group::Presentation(_), None) => file.stage.map_or(harness::DEFAULT_STAGES as u64, |s| s as u64),
                (Group::Diagram { .. }, None) => harness::DEFAULT_CODES,
            };
            let check = CheckSpec {
                checker: property,
                bound,
                n,
                max_len,
                max_exp,
                max_index,
                code_max,
                order_bound,
                decider,
                ..CheckSpec::default()
            };
            print_json(&harness::run_check(&mut g, &check, budget)?)?;
            Ok(true)
        }
        Command::Order { command } => match command {
            OrderCommand::Compare { w, v, degree } => {
                let (w, v) = (parse_word(&w)?, parse_word(&v)?);
                let d = degree.unwrap_or_else(|| orders::certified_degree(&w, &v));
                let o = orders::magnus_compare(&w, &v, d)?;
                println!(
                    "{}",
                    match o {
                        Ordering::Less => "less",
                        Ordering::Equal => "equal",
                        Ordering::Greater => "greater",
                    }
                );
                Ok(true)
            }
            OrderCommand::Expand { w, degree } => {
                println!("{}", orders::magnus_expand(&parse_word(&w)?, degree)?);
                Ok(true)
            }
            OrderCommand::Refute { group, elements, mode, depth, stage } => {
                let file = GroupFile::load(&group)?;
                let mut g = file.recipe.build()?;
                let stage = stage.or(file.stage).unwrap_or(harness::DEFAULT_STAGES);
                let items: Vec<String> = elements.split(',').map(|s| s.trim().to_string()).collect();
                let v = harness::olf_on(&mut g, &items, depth, mode, stage)?;
                print_json(&v)?;
                Ok(true)
            }
        },
        Command::Run { spec } => {
            let text = fs::read_to_string(&spec)
                .map_err(|e| HarnessError::Io { path: spec.display().to_string(), message: e.to_string() })?;
            let report = harness::run_experiment(&ExperimentSpec::from_json(&text)?)?;
            print_json(&report)?;
            Ok(report.ok)
        }
        Command::Suite { dir } => {
            let stdout = io::stdout();
            let entries = harness::run_suite(&dir, &mut stdout.lock())?;
            Ok(entries.iter().all(|e| e.ok()))
        }
        Command::Present { command: PresentCommand::Show { file, stage } } => {
            let file = GroupFile::load(&file)?;
            let Group::Presentation(p) = file.recipe.build()? else {
                return Err(HarnessError::Invalid("not a presentation".into()));
            };
            let snap = p.snapshot(stage);
            let gens: Vec<String> = snap.generators.iter().map(|g| format!("{}@{}", g.generator, g.stage)).collect();
            let mut text = format!("{} at stage {stage}\ngens: {}\nrelators:\n", snap.name, gens.join(", "));
            for r in &snap.relators {
                text += &format!("  {}: {}\n", r.stage, r.word);
            }
            io::stdout().lock().write_all(text.as_bytes()).map_err(stdout_error)?;
            Ok(true)
        }
        Command::Diagram { command: DiagramCommand::Dump { builtin, codes, stage } } => {
            let Group::Diagram { mut diagram, .. } = harness::builtin(&builtin)? else {
                return Err(HarnessError::Invalid("not a diagram".into()));
            };
            let stage = match stage {
                Some(s) => s,
                None => {
                    let mut s = 0;
                    while diagram.codes_at(s)? < codes && s < 10_000 {
                        s += 1;
                    }
                    s
                }
            };
            let out = io::stdout();
            let mut out = out.lock();
            for t in triples_below(diagram.as_mut(), codes, stage)? {
                writeln!(out, "[{},{},{}]", t.0, t.1, t.2).map_err(stdout_error)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
