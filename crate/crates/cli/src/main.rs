//! Command-line front end for the Andrews–Curtis workbench.
//!
//! Exit codes: 0 affirmative/found, 1 negative and conclusive, 2 budget ran
//! out before a conclusion, 3 error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ac_workbench::equations::{self, Equation, EquationError};
use ac_workbench::finite::{self, FiniteGroup, GroupError};
use ac_workbench::search::{
    self, ClassifyConfig, ClassifyOutcome, Dedup, PathCertificate, SearchConfig, SearchError, SearchOutcome, Strategy,
};
use ac_workbench::{Letter, MoveError, MoveSequence, Tuple, Word, WordError};
use clap::{Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl Verdict {
    fn code(self) -> u8 {
        match self {
            Verdict::Yes => 0,
            Verdict::No => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

const ERROR_EXIT: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ac-workbench",
    version,
    about = "Andrews–Curtis moves, searches and finite quotients"
)]
struct Cli {
    /// Worker threads; results never depend on it.
    #[arg(long, global = true, env = "AC_WORKBENCH_THREADS")]
    threads: Option<usize>,
    /// Write the main artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct SearchArgs {
    /// Maximum total length of any visited tuple.
    #[arg(long, default_value_t = 12)]
    cap: usize,
    /// Maximum number of distinct states recorded.
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
    #[arg(long, default_value_t = Strategy::Bfs)]
    strategy: Strategy,
    #[arg(long, default_value_t = Dedup::Exact)]
    dedup: Dedup,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Freely reduce a word.
    Reduce {
        word: String,
        /// Rank of the free group; defaults to the largest letter used.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Apply a move file to a tuple.
    Apply { tuple: String, moves: PathBuf },
    /// Search for a path from a balanced tuple to the generator tuple.
    Search {
        tuple: String,
        #[command(flatten)]
        args: SearchArgs,
    },
    /// Replay a path certificate.
    Verify { certificate: PathBuf },
    /// Partition short rank-2 candidate pairs into components.
    Classify {
        /// Candidates have total length at most this.
        #[arg(long)]
        enum_cap: usize,
        #[command(flatten)]
        args: SearchArgs,
    },
    /// Print the Akbulut–Kirby pair AK(n) as a tuple file.
    Ak { n: usize },
    /// Decide whether a move sequence acts as the identity on every tuple.
    Identity {
        moves: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Conjugators of a tuple whose conjugate is moved by a sequence.
    Witness {
        moves: PathBuf,
        /// Tuple to conjugate; defaults to the generators.
        #[arg(long)]
        tuple: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Decide whether an equation is trivial; otherwise exhibit a non-solution.
    Equation {
        /// e.g. "x1 a x1' A"
        text: String,
        #[arg(long, default_value_t = 2)]
        constants: usize,
        #[arg(long)]
        variables: Option<usize>,
        #[arg(long, default_value_t = 2)]
        exponent_start: i64,
    },
    /// Full AC-group, kernel and orbits for a finite group.
    Finite {
        group: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Also print kernel generators as image lists.
        #[arg(long)]
        kernel_generators: bool,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `text` to `--out` if given, else stdout.
fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn inferred_rank(text: &str) -> usize {
    text.chars()
        .filter_map(Letter::from_char)
        .map(Letter::index)
        .max()
        .unwrap_or(1)
}

/// A tuple file path, or an inline tuple such as `(ab, b)`.
fn load_tuple(arg: &str, min_rank: usize) -> Result<Tuple, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(Tuple::parse_file(&read(path)?)?);
    }
    if !arg.trim_start().starts_with('(') {
        return Err(CliError::Usage(format!("{arg}: neither a file nor an inline tuple")));
    }
    let k = arg.split(',').count();
    Ok(Tuple::parse_inline(arg, inferred_rank(arg).max(k).max(min_rank))?)
}

fn search_config(a: &SearchArgs) -> SearchConfig {
    let mut cfg = SearchConfig::new(a.cap, a.budget)
        .with_strategy(a.strategy)
        .with_dedup(a.dedup);
    cfg.seed = a.seed;
    cfg
}

fn run(cli: &Cli) -> Result<Verdict, CliError> {
    let out = &cli.out;
    match &cli.command {
        Command::Reduce { word, rank } => {
            let w = Word::parse(word, rank.unwrap_or_else(|| inferred_rank(word)))?;
            emit(out, &format!("{}\n", w.to_text()?))?;
            Ok(Verdict::Yes)
        }
        Command::Apply { tuple, moves } => {
            let t = load_tuple(tuple, 1)?;
            let seq = MoveSequence::parse(&read(moves)?, t.size())?;
            emit(out, &seq.apply(&t)?.to_file())?;
            Ok(Verdict::Yes)
        }
        Command::Search { tuple, args } => {
            let t = load_tuple(tuple, 1)?;
            let cfg = search_config(args);
            let outcome = search::trivialize(&t, &cfg)?;
            println!(
                "# seed: {} strategy: {} dedup: {} cap: {} budget: {}",
                cfg.seed, cfg.strategy, cfg.dedup, cfg.length_cap, cfg.node_budget
            );
            println!("# start: {}", t.to_inline());
            match outcome {
                SearchOutcome::Found { certificate, states } => {
                    println!("result: found length {} states {}", certificate.moves.len(), states);
                    emit(out, &certificate.to_text())?;
                    Ok(Verdict::Yes)
                }
                SearchOutcome::Exhausted { states } => {
                    println!("result: exhausted states {states}");
                    Ok(Verdict::No)
                }
                SearchOutcome::BudgetExhausted { states } => {
                    println!("result: budget-exhausted states {states}");
                    Ok(Verdict::Inconclusive)
                }
            }
        }
        Command::Verify { certificate } => {
            let cert = PathCertificate::parse(&read(certificate)?)?;
            if cert.verify() {
                let trivial = cert.end == Tuple::generators(cert.end.size());
                println!(
                    "verified: yes end {} trivializes: {}",
                    cert.end.to_inline(),
                    yes_no(trivial)
                );
                Ok(Verdict::Yes)
            } else {
                println!("verified: no");
                Ok(Verdict::No)
            }
        }
        Command::Classify { enum_cap, args } => {
            let cfg = ClassifyConfig {
                enum_cap: *enum_cap,
                search_cap: args.cap,
                node_budget: args.budget,
            };
            println!("# seed: {}", args.seed);
            match search::classify(&cfg)? {
                ClassifyOutcome::Complete(report) => {
                    emit(out, &report.to_text())?;
                    Ok(Verdict::Yes)
                }
                ClassifyOutcome::BudgetExhausted { states, candidates } => {
                    println!("result: budget-exhausted states {states} candidates {candidates}");
                    Ok(Verdict::Inconclusive)
                }
            }
        }
        Command::Ak { n } => {
            emit(out, &search::ak(*n)?.to_file())?;
            Ok(Verdict::Yes)
        }
        Command::Identity { moves, k } => {
            let text = read(moves)?;
            let k = match k {
                Some(k) => *k,
                None => MoveSequence::infer_k(&text)?,
            };
            let identity = MoveSequence::parse(&text, k)?.is_identity();
            println!("identity: {}", yes_no(identity));
            Ok(if identity { Verdict::Yes } else { Verdict::No })
        }
        Command::Witness { moves, tuple, k } => {
            let text = read(moves)?;
            let k = match (k, tuple) {
                (Some(k), _) => *k,
                (None, Some(t)) => load_tuple(t, 2)?.size(),
                (None, None) => MoveSequence::infer_k(&text)?,
            };
            let seq = MoveSequence::parse(&text, k)?;
            let rank = seq.max_conjugator_index().max(k).max(2);
            let u = match tuple {
                Some(t) => load_tuple(t, rank)?,
                None => Tuple::new(
                    (1..=k)
                        .map(|i| Word::letter(Letter::gen(i), rank))
                        .collect::<Result<_, _>>()?,
                )?,
            };
            match equations::faithfulness_witness(&seq, &u)? {
                Some(h) => {
                    let conj: Vec<Word> = u
                        .entries()
                        .iter()
                        .zip(&h)
                        .map(|(ui, hi)| ui.conjugate(hi))
                        .collect::<Result<_, _>>()?;
                    let moved_from = Tuple::new(conj)?;
                    let moved_to = seq.apply(&moved_from)?;
                    let mut s = String::new();
                    for (i, hi) in h.iter().enumerate() {
                        s.push_str(&format!("h{} = {}\n", i + 1, or_one(hi)?));
                    }
                    s.push_str(&format!("{} -> {}\n", moved_from.to_inline(), moved_to.to_inline()));
                    emit(out, &s)?;
                    Ok(Verdict::Yes)
                }
                None => {
                    println!("witness: none (sequence is the identity)");
                    Ok(Verdict::No)
                }
            }
        }
        Command::Equation {
            text,
            constants,
            variables,
            exponent_start,
        } => {
            let m = variables.unwrap_or_else(|| Equation::count_variables(text));
            let eq = Equation::parse(text, *constants, m)?;
            if eq.is_trivial() {
                println!("trivial: yes");
                return Ok(Verdict::No);
            }
            let values = eq
                .find_nonsolution(*exponent_start)?
                .expect("nontrivial equation has a non-solution");
            let mut s = String::from("trivial: no\n");
            for (i, v) in values.iter().enumerate() {
                s.push_str(&format!("x{} = {}\n", i + 1, or_one(v)?));
            }
            s.push_str(&format!("value = {}\n", or_one(&eq.evaluate(&values)?)?));
            emit(out, &s)?;
            Ok(Verdict::Yes)
        }
        Command::Finite {
            group,
            k,
            kernel_generators,
        } => {
            let g = FiniteGroup::parse(&read(group)?)?;
            match finite::kernel_of_lambda(&g, *k) {
                Ok(report) => {
                    let mut s = format!("# order={} k={} n_k_size={}\n", g.order(), k, report.n_k_size);
                    s.push_str(&report.summary_line());
                    s.push('\n');
                    if *kernel_generators {
                        for p in &report.kernel_generators {
                            s.push_str(&format!("kernel {p}\n"));
                        }
                    }
                    emit(out, &s)?;
                    Ok(Verdict::Yes)
                }
                Err(GroupError::EmptyNk { .. }) => {
                    let sizes: Vec<String> = finite::orbits(&g, *k)?.iter().map(|o| o.len().to_string()).collect();
                    emit(out, &format!("n_k_size=0 orbit_sizes={}\n", sizes.join(",")))?;
                    Ok(Verdict::No)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

/// Word text with `1` for the identity, as in tuple files.
fn or_one(w: &Word) -> Result<String, CliError> {
    Ok(if w.is_empty() { "1".to_string() } else { w.to_text()? })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ERROR_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(ERROR_EXIT);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(v) => ExitCode::from(v.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}
