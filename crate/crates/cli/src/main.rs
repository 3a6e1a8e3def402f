//! Command-line harness: encode tree sets as block words, run the engines
//! and oracles on them, drive the verification suites, and time the deep
//! symbolic runs.
//!
//! Exit codes: 0 on success, 1 when a verification suite reports failures,
//! 2 on usage, parse or I/O errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use blindvass::blocks::{
    symbolic_max_visits, MachineKind, SymbolicWord, DEFAULT_LETTER_BUDGET, SEPARATOR,
};
use blindvass::encode::{embed_order, encode, FiniteOrder, TreeSet};
use blindvass::oracle::{
    chosen_block_trace, max_branch_hits, max_good_steps, TraceError, WitnessReport,
};
use blindvass::suites::{bench_csv, run, run_bench, BenchConfig, ExperimentConfig, Suite};
use blindvass::BigNat;

#[derive(Parser)]
#[command(
    name = "blindvass",
    version,
    about = "Blind-counter Büchi automata at finite scale"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a tree-set file as a block word (symbolic JSON or letters).
    Encode {
        /// Target automaton: a1 (one counter) or a2 (two counters).
        #[arg(long)]
        automaton: String,
        /// Tree-set JSON file: {"depth": d, "nodes": ["", "L", ...]}.
        #[arg(long)]
        tree_file: PathBuf,
        /// Number of phases to encode (at most depth + 1).
        #[arg(long)]
        phases: usize,
        /// Output format: symbolic or letters.
        #[arg(long, default_value = "symbolic")]
        format: String,
        /// Maximum letters a rendered word may use.
        #[arg(long, default_value_t = DEFAULT_LETTER_BUDGET)]
        letter_budget: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run an engine on a word file and check a visit threshold.
    Check {
        /// Target automaton: a1 or a2.
        #[arg(long)]
        automaton: String,
        /// Word file: symbolic JSON or an ASCII letter word, per --engine.
        #[arg(long)]
        word_file: PathBuf,
        /// Threshold K: succeed when some run reaches K accepting visits.
        #[arg(long)]
        min_accepting: usize,
        /// Which engine reads the word: symbolic or letters.
        #[arg(long, default_value = "symbolic")]
        engine: String,
        /// Refuse letter words longer than this.
        #[arg(long, default_value_t = DEFAULT_LETTER_BUDGET)]
        letter_budget: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the combinatorial witness oracle on a tree-set file.
    Oracle {
        /// a1 checks correct-chain good steps, a2 checks branch hits.
        #[arg(long)]
        automaton: String,
        #[arg(long)]
        tree_file: PathBuf,
        #[arg(long)]
        phases: usize,
        /// Optional threshold to compare the oracle value against.
        #[arg(long)]
        min_accepting: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run a verification suite; exits 1 if any case fails.
    Verify {
        /// One of: t1, t2, cross, invariants, orders.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_LETTER_BUDGET)]
        letter_budget: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Embed a linear-order file into the binary tree.
    ReduceOrder {
        /// Order JSON file: {"size": n, "leq": [[...]]}.
        #[arg(long)]
        order_file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Time the symbolic engines and the oracle dynamic programs; emits CSV.
    Bench {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Encode {
            automaton,
            tree_file,
            phases,
            format,
            letter_budget,
            out,
        } => cmd_encode(&automaton, &tree_file, phases, &format, letter_budget, &out),
        Command::Check {
            automaton,
            word_file,
            min_accepting,
            engine,
            letter_budget,
            out,
        } => cmd_check(
            &automaton,
            &word_file,
            min_accepting,
            &engine,
            letter_budget,
            &out,
        ),
        Command::Oracle {
            automaton,
            tree_file,
            phases,
            min_accepting,
            out,
        } => cmd_oracle(&automaton, &tree_file, phases, min_accepting, &out),
        Command::Verify {
            suite,
            max_depth,
            samples,
            seed,
            letter_budget,
            out,
        } => cmd_verify(&suite, max_depth, samples, seed, letter_budget, &out),
        Command::ReduceOrder { order_file, out } => cmd_reduce_order(&order_file, &out),
        Command::Bench { seed, out } => cmd_bench(seed, &out),
    }
}

fn parse_machine(s: &str) -> Result<MachineKind> {
    s.parse::<MachineKind>().map_err(|e| anyhow::anyhow!(e))
}

fn read_tree(path: &PathBuf) -> Result<TreeSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing tree set {}", path.display()))
}

fn write_output(out: &OutArg, contents: &str) -> Result<()> {
    match &out.out {
        Some(path) => {
            fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn cmd_encode(
    automaton: &str,
    tree_file: &PathBuf,
    phases: usize,
    format: &str,
    letter_budget: usize,
    out: &OutArg,
) -> Result<ExitCode> {
    let kind = parse_machine(automaton)?;
    let tree = read_tree(tree_file)?;
    let word = encode::<BigNat>(kind, &tree, phases)?;
    let contents = match format {
        "symbolic" => serde_json::to_string_pretty(&word)?,
        "letters" => word.render(phases, letter_budget)?,
        other => bail!("unknown format {other:?} (expected symbolic or letters)"),
    };
    write_output(out, &contents)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(
    automaton: &str,
    word_file: &PathBuf,
    min_accepting: usize,
    engine: &str,
    letter_budget: usize,
    out: &OutArg,
) -> Result<ExitCode> {
    let kind = parse_machine(automaton)?;
    let text = fs::read_to_string(word_file)
        .with_context(|| format!("reading {}", word_file.display()))?;

    let verdict = match engine {
        "symbolic" => {
            let word: SymbolicWord<BigNat> = serde_json::from_str(&text)
                .with_context(|| format!("parsing symbolic word {}", word_file.display()))?;
            let phases = word.phase_count();
            let cap = min_accepting.max(phases);
            let visits = symbolic_max_visits(kind, &word, phases, cap)?;
            let reached = matches!(visits, Some(v) if v >= min_accepting);
            let witness = match chosen_block_trace(kind, &word, phases, cap) {
                Ok(report) => Some(serde_json::to_value(&report)?),
                Err(TraceError::NoSurvivingRun) => None,
                // Words that run fine but are not canonical encodings have
                // no decodable witness.
                Err(TraceError::MalformedBlock { .. }) | Err(TraceError::LevelTooDeep) => None,
                Err(e) => return Err(e.into()),
            };
            serde_json::json!({
                "engine": "symbolic",
                "phases": phases,
                "visits": visits,
                "min_accepting": min_accepting,
                "reached_k": reached,
                "witness": witness,
            })
        }
        "letters" => {
            let word = text.trim_end_matches(['\n', '\r']);
            if word.len() > letter_budget {
                bail!(
                    "letter word has {} letters, over the budget of {letter_budget}",
                    word.len()
                );
            }
            let machine = kind.build();
            let phases = word.chars().filter(|&c| c == SEPARATOR).count();
            let cap = min_accepting.max(phases + 1);
            let outcome = machine.explore::<BigNat>(word, cap, true)?;
            let reached = matches!(outcome.visits, Some(v) if v >= min_accepting);
            serde_json::json!({
                "engine": "letters",
                "letters": word.len(),
                "visits": outcome.visits,
                "min_accepting": min_accepting,
                "reached_k": reached,
                "witness": outcome.accepting_positions.map(|positions| {
                    serde_json::json!({"kind": "letter_run", "accepting_positions": positions})
                }),
            })
        }
        other => bail!("unknown engine {other:?} (expected symbolic or letters)"),
    };

    write_output(out, &serde_json::to_string_pretty(&verdict)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(
    automaton: &str,
    tree_file: &PathBuf,
    phases: usize,
    min_accepting: Option<usize>,
    out: &OutArg,
) -> Result<ExitCode> {
    let kind = parse_machine(automaton)?;
    let tree = read_tree(tree_file)?;
    let report = match kind {
        MachineKind::A1 => {
            let (value, chain) = max_good_steps(&tree, phases)?;
            WitnessReport::chain(value, chain)
        }
        MachineKind::A2 => {
            let (value, branch) = max_branch_hits(&tree, phases)?;
            WitnessReport::branch(value, branch)
        }
    };
    let mut verdict = serde_json::to_value(&report)?;
    if let Some(k) = min_accepting {
        verdict["min_accepting"] = serde_json::json!(k);
        verdict["reached_k"] = serde_json::json!(report.value >= k);
    }
    write_output(out, &serde_json::to_string_pretty(&verdict)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    suite: &str,
    max_depth: Option<usize>,
    samples: Option<usize>,
    seed: u64,
    letter_budget: usize,
    out: &OutArg,
) -> Result<ExitCode> {
    let suite: Suite = suite.parse().map_err(|e: String| anyhow::anyhow!(e))?;
    let cfg = ExperimentConfig {
        max_depth,
        samples,
        seed,
        letter_budget,
    };
    let report = run(suite, &cfg);
    eprintln!(
        "suite {}: {} cases, {} failed, {} ms",
        report.suite,
        report.cases.len(),
        report.failed,
        report.wall_ms
    );
    write_output(out, &report.to_json_string())?;
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_reduce_order(order_file: &PathBuf, out: &OutArg) -> Result<ExitCode> {
    let text = fs::read_to_string(order_file)
        .with_context(|| format!("reading {}", order_file.display()))?;
    let order: FiniteOrder = serde_json::from_str(&text)
        .with_context(|| format!("parsing order {}", order_file.display()))?;
    let embedding = embed_order(&order)?;
    write_output(out, &serde_json::to_string_pretty(&embedding)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(seed: u64, out: &OutArg) -> Result<ExitCode> {
    let cfg = BenchConfig {
        seed,
        ..BenchConfig::default()
    };
    let rows = run_bench(&cfg);
    write_output(out, &bench_csv(&rows))?;
    Ok(ExitCode::SUCCESS)
}
