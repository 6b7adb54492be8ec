use std::io::{self, BufRead, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use jotto::artifacts::{self, Artifacts, DirSink};
use jotto::eval::{self, monte_carlo_hider_payoff, SolvedStrategies};
use jotto::solver::IterationRecord;
use jotto::{
    update_state, Dictionary, GameState, HiderStrategy, MixedOracularGuesser, SolveArtifacts, SolveConfig,
    SolveSink, TieBreak, WorkerPool,
};
use jotto_service::{HttpConfig, Role, Status};

#[derive(Parser)]
#[command(name = "jotto", version, about = "Approximate equilibrium strategies for two-player Jotto")]
struct Cli {
    /// Seed for every random draw; drawn from entropy when omitted.
    #[arg(long, global = true, env = "JOTTO_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter a word list and report or dump the playable words.
    Dict {
        #[command(flatten)]
        dict: DictArgs,
        /// Write the playable words to this file ("-" for stdout).
        #[arg(long)]
        dump_words: Option<PathBuf>,
        /// Print dictionary statistics.
        #[arg(long)]
        stats: bool,
    },
    /// Run fictitious play and write the artifact directory.
    Solve(SolveArgs),
    /// Score solved strategies against the benchmark.
    Eval(EvalArgs),
    /// Play a game in the terminal against the solved strategies.
    Play {
        #[arg(long)]
        artifacts: PathBuf,
        /// The side you play.
        #[arg(long, value_enum, default_value = "hider")]
        role: RoleArg,
    },
    /// Sample-based access to the mixed guesser.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Serve the HTTP game API.
    Serve(ServeArgs),
}

#[derive(Args, Clone)]
struct DictArgs {
    /// Word list, one word per line; the bundled list when omitted.
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Word length.
    #[arg(long, default_value_t = 5)]
    letters: usize,
}

impl DictArgs {
    fn load(&self) -> Result<Dictionary> {
        Ok(match &self.dict {
            Some(p) => Dictionary::from_path(p, self.letters)?,
            None => jotto::twl06(self.letters)?,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    LowestIndex,
    ConsistentFirst,
}

impl From<TieArg> for TieBreak {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::LowestIndex => TieBreak::LowestIndex,
            TieArg::ConsistentFirst => TieBreak::ConsistentFirst,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    /// You hide a word and answer the machine's guesses.
    Hider,
    /// You guess the machine's word.
    Guesser,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    dict: DictArgs,
    /// Iteration budget T.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    iters: u64,
    /// Stop once the best epsilon reaches this value.
    #[arg(long)]
    target_eps: Option<f64>,
    #[arg(long, env = "JOTTO_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[arg(long, env = "JOTTO_OUT_DIR", default_value = "jotto-out")]
    out_dir: PathBuf,
    /// Also keep every guess-count vector (needed for fast exact evaluation).
    #[arg(long)]
    save_ing: bool,
    #[arg(long, value_enum, default_value = "lowest-index")]
    tie_break: TieArg,
}

#[derive(Args)]
struct EvalArgs {
    /// Solve output directory.
    #[arg(long, conflicts_with_all = ["strategy_file", "t_star"])]
    artifacts: Option<PathBuf>,
    #[command(flatten)]
    dict: DictArgs,
    /// Strategy file from a solve, used with --t-star instead of --artifacts.
    #[arg(long, requires = "t_star")]
    strategy_file: Option<PathBuf>,
    #[arg(long)]
    t_star: Option<usize>,
    /// Exact expectations (the default).
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Monte Carlo estimates from this many games per matchup.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    mc: Option<u64>,
    /// Write the report as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "lowest-index")]
    tie_break: TieArg,
    #[arg(long, env = "JOTTO_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Bind one sampled guesser and play it against answers read from stdin.
    Sample {
        #[arg(long)]
        strategy_file: PathBuf,
        #[arg(long)]
        t_star: usize,
        #[command(flatten)]
        dict: DictArgs,
        /// Session counter; with the seed it fixes the sampled component.
        #[arg(long, default_value_t = 0)]
        counter: u64,
        #[arg(long, value_enum, default_value = "lowest-index")]
        tie_break: TieArg,
    },
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    artifacts: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    bind: IpAddr,
    /// Built web UI to serve at `/`.
    #[arg(long)]
    static_dir: Option<PathBuf>,
    /// Browser origin allowed by CORS; any origin when omitted.
    #[arg(long)]
    cors_origin: Option<String>,
    /// Append session events to this JSON-lines file.
    #[arg(long)]
    transcript_log: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or_else(rand::random);
    match cli.command {
        Command::Dict { dict, dump_words, stats } => cmd_dict(&dict, dump_words.as_deref(), stats),
        Command::Solve(args) => cmd_solve(args),
        Command::Eval(args) => cmd_eval(args, seed),
        Command::Play { artifacts, role } => {
            log::info!("seed {seed}");
            cmd_play(&artifacts, role, seed)
        }
        Command::Oracle(OracleCommand::Sample {
            strategy_file,
            t_star,
            dict,
            counter,
            tie_break,
        }) => {
            log::info!("seed {seed}");
            let dict = dict.load()?;
            let mix = MixedOracularGuesser::from_strategy_file(&strategy_file, t_star, seed, tie_break.into())?;
            oracle_sample(&dict, &mix, counter, io::stdin().lock(), io::stdout().lock())
        }
        Command::Serve(args) => {
            log::info!("seed {seed}");
            cmd_serve(args, seed)
        }
    }
}

fn cmd_dict(args: &DictArgs, dump: Option<&Path>, stats: bool) -> Result<()> {
    let d = args.load()?;
    if stats || dump.is_none() {
        let s = d.stats();
        println!("letters: {}", d.letters());
        println!("D = {}", d.len());
        println!("skipped lines: {}", s.skipped_lines);
        println!("duplicate letters: {}", s.duplicate_letters);
        println!("anagram excluded: {}", s.anagram_excluded);
    }
    match dump {
        Some(p) if p == Path::new("-") => d.write_words(io::stdout().lock())?,
        Some(p) => {
            let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            d.write_words(io::BufWriter::new(f))?;
        }
        None => {}
    }
    Ok(())
}

/// Writes artifacts and prints a progress line every `every` iterations.
struct Progress {
    inner: DirSink,
    every: usize,
}

impl SolveSink for Progress {
    fn strategy(&mut self, t: usize, s: &HiderStrategy) -> io::Result<()> {
        self.inner.strategy(t, s)
    }

    fn iteration(&mut self, r: &IterationRecord<'_>) -> io::Result<()> {
        self.inner.iteration(r)?;
        if r.t % self.every == 0 {
            println!("t={} eps={} eps*={} t*={}", r.t, r.eps.eps, r.best_eps, r.best_iteration);
        }
        Ok(())
    }

    fn finish(&mut self, a: &SolveArtifacts) -> io::Result<()> {
        self.inner.finish(a)
    }
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let dict = args.dict.load()?;
    let workers = match args.workers {
        Some(w) => w as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let tie: TieBreak = args.tie_break.into();
    let stop = Arc::new(AtomicBool::new(false));
    let flag = stop.clone();
    ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed)).context("installing Ctrl-C handler")?;

    log::info!(
        "solving {} words of {} letters, T={}, P={workers}, output {}",
        dict.len(),
        dict.letters(),
        args.iters,
        args.out_dir.display()
    );
    let sink = DirSink::create(&args.out_dir, &dict, tie, args.save_ing)?;
    let mut progress = Progress {
        inner: sink,
        every: if dict.letters() <= 3 { 1 } else { 10 },
    };
    let config = SolveConfig::new(args.iters as usize)
        .workers(workers)
        .tie_break(tie)
        .target_eps(args.target_eps)
        .stop_flag(stop);
    let a = jotto::solve(&dict, &config, &mut progress)?;
    if a.interrupted {
        log::warn!("interrupted after iteration {}", a.last_iteration());
    }
    println!(
        "done: iterations={} eps*={} t*={} out={}",
        a.last_iteration(),
        a.best_eps,
        a.best_iteration,
        args.out_dir.display()
    );
    Ok(())
}

fn cmd_eval(args: EvalArgs, seed: u64) -> Result<()> {
    let pool = WorkerPool::new(args.workers as usize)?;
    let tie: TieBreak;
    let dict: Dictionary;
    let strategies: Vec<HiderStrategy>;
    let loaded: Option<Artifacts>;
    match (&args.artifacts, &args.strategy_file) {
        (Some(dir), _) => {
            let a = Artifacts::load(dir)?;
            tie = a.tie_break();
            dict = a.dictionary.clone();
            strategies = a.strategies.clone();
            loaded = Some(a);
        }
        (None, Some(file)) => {
            tie = args.tie_break.into();
            dict = args.dict.load()?;
            strategies = artifacts::load_strategies(file, args.t_star.expect("required by clap"))?;
            loaded = None;
        }
        (None, None) => bail!("either --artifacts or --strategy-file with --t-star is required"),
    }
    let t_star = strategies.len() - 1;

    if let Some(games) = args.mc {
        log::info!("seed {seed}");
        let games = games as usize;
        let ours = MixedOracularGuesser::new(strategies.clone(), t_star, seed, tie)?;
        let bench = MixedOracularGuesser::new(vec![HiderStrategy::uniform(dict.len())], 0, seed, tie)?;
        let best = &strategies[t_star];
        let uniform = HiderStrategy::uniform(dict.len());
        let rows = [
            ("hider payoff vs benchmark", monte_carlo_hider_payoff(&dict, best, &bench, games, seed)?, 1.0),
            ("guesser payoff vs benchmark", monte_carlo_hider_payoff(&dict, &uniform, &ours, games, seed ^ 1)?, -1.0),
            ("self-play hider payoff", monte_carlo_hider_payoff(&dict, best, &ours, games, seed ^ 2)?, 1.0),
        ];
        for (name, e, sign) in rows {
            println!("{name:<28} {:>9.4} +/- {:.4} ({} games)", sign * e.mean, e.std_err, e.samples);
        }
        return Ok(());
    }

    let report = match &loaded {
        Some(a) => eval::evaluate(&dict, &a.solved(), tie, &pool)?,
        None => {
            let (ing, eps) = eval::replay_solve(&dict, &strategies, tie, &pool)?;
            let solved = SolvedStrategies {
                strategies: &strategies,
                ing_history: Some(&ing),
                eps_star: eps.eps,
                self_play_hider_payoff: eps.hider_actual_payoff,
                iterations: t_star,
                avg_iteration: Default::default(),
            };
            eval::evaluate(&dict, &solved, tie, &pool)?
        }
    };
    print!("{}", eval::format_table(std::slice::from_ref(&report)));
    if let Some(p) = &args.out {
        let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
        eval::write_csv(&[report], f)?;
    }
    Ok(())
}

fn cmd_play(dir: &Path, role: RoleArg, seed: u64) -> Result<()> {
    let m = jotto_service::manager_from_dir(dir, seed)?;
    let letters = m.context().expect("loaded").dictionary().letters();
    let mut input = io::stdin().lock();
    let mut line = String::new();
    let mut read = |prompt: &str| -> Result<Option<String>> {
        eprint!("{prompt}");
        line.clear();
        if input.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        Ok(Some(line.trim().to_owned()))
    };
    match role {
        RoleArg::Hider => {
            let mut s = m.create(Role::Hider)?;
            println!("think of a {letters}-letter word with no repeated letters");
            while s.status == Status::Active {
                let guess = s.pending_guess.clone().expect("active session has a guess");
                println!("guess {}: {guess}", s.guess_count + 1);
                let Some(text) = read(&format!("letters in common (0-{letters}): "))? else {
                    return Ok(());
                };
                let answer = match text.parse::<usize>() {
                    Ok(a) => a,
                    Err(_) => {
                        println!("enter a number from 0 to {letters}");
                        continue;
                    }
                };
                match m.answer(&s.id, answer) {
                    Ok(next) => s = next,
                    Err(jotto_service::ServiceError::Validation { message, .. }) => println!("{message}"),
                    Err(e) => return Err(e.into()),
                }
            }
            match s.status {
                Status::Finished => println!("found it in {} guesses", s.guess_count),
                _ => println!("no consistent words: answers contradict"),
            }
        }
        RoleArg::Guesser => {
            let s = m.create(Role::Guesser)?;
            println!("guess my {letters}-letter word");
            loop {
                let Some(word) = read("guess: ")? else { return Ok(()) };
                match m.guess(&s.id, &word) {
                    Ok(out) if out.win => {
                        println!("{letters}");
                        println!("you found it in {} guesses", out.session.guess_count);
                        return Ok(());
                    }
                    Ok(out) => println!("{}", out.answer),
                    Err(jotto_service::ServiceError::Validation { message, .. }) => println!("{message}"),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(())
}

/// Prints the sampled component and each guess, reading one answer per line.
fn oracle_sample<R: BufRead, W: Write>(
    dict: &Dictionary,
    mix: &MixedOracularGuesser,
    counter: u64,
    input: R,
    mut out: W,
) -> Result<()> {
    let session = mix.session(counter);
    writeln!(out, "t={}", session.t())?;
    let mut state = GameState::full(dict.len());
    let mut lines = input.lines();
    for n in 1..=dict.len() {
        let guess = session.next_guess(dict, &state)?;
        writeln!(out, "guess {n}: {}", dict.word(guess))?;
        out.flush()?;
        let Some(line) = lines.next() else { return Ok(()) };
        let text = line?;
        let answer: usize = text
            .trim()
            .parse()
            .with_context(|| format!("answer {:?} is not a number", text.trim()))?;
        if answer > dict.letters() {
            bail!("answer {answer} is outside 0..={}", dict.letters());
        }
        if answer == dict.letters() {
            writeln!(out, "solved in {n} guesses")?;
            return Ok(());
        }
        state = update_state(dict, &state, guess, answer);
        if state.count() == 0 {
            writeln!(out, "no consistent words: answers contradict")?;
            return Ok(());
        }
    }
    Ok(())
}

fn cmd_serve(args: ServeArgs, seed: u64) -> Result<()> {
    let mut m = jotto_service::manager_from_dir(&args.artifacts, seed)?;
    if let Some(p) = &args.transcript_log {
        m = m
            .with_transcript_log(p)
            .with_context(|| format!("opening transcript log {}", p.display()))?;
    }
    let config = HttpConfig {
        cors_origin: args.cors_origin,
        static_dir: args.static_dir,
    };
    let addr = SocketAddr::new(args.bind, args.port);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(jotto_service::serve(m, config, addr))
        .with_context(|| format!("serving on {addr}"))
}
