//! Exact evaluation against the benchmark opponent.
//!
//! Every matchup here has a closed-form expectation: both guessers are
//! deterministic once their mixture component is fixed, so a per-word guess
//! count vector and the hider's distribution determine the payoff. Monte
//! Carlo play is kept only as a cross-check.

use std::io::{self, Write};
use std::time::Duration;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dictionary::Dictionary;
use crate::engine::{EngineError, HiderStrategy, TieBreak};
use crate::oracle::{benchmark_hider, MixedOracularGuesser};
use crate::solver::{ang_update, comp_num_guesses, EpsilonReport, SolveError, WorkerPool};

/// Guesses the benchmark guesser needs for each word.
pub fn benchmark_guess_counts(
    dict: &Dictionary,
    tie: TieBreak,
    pool: &WorkerPool,
) -> Result<Vec<u32>, EngineError> {
    comp_num_guesses(dict, &benchmark_hider(dict), tie, pool)
}

/// Expected guesses when a hider playing `s_h` faces a guesser whose per-word
/// guess counts are `counts`.
pub fn expected_guesses(counts: &[u32], s_h: &HiderStrategy) -> f64 {
    counts.iter().zip(s_h.probs()).map(|(&g, p)| g as f64 * p).sum()
}

/// Hider payoff of `s_h` against the benchmark guesser.
pub fn eval_hider_vs_benchmark_guesser(
    dict: &Dictionary,
    s_h: &HiderStrategy,
    tie: TieBreak,
    pool: &WorkerPool,
) -> Result<f64, EngineError> {
    Ok(expected_guesses(&benchmark_guess_counts(dict, tie, pool)?, s_h))
}

/// Guesser payoff (negative) of the mixture over `strategies` against the
/// uniform hider. `ing_history`, when given, must hold the guess counts of
/// each strategy and replaces recomputing them.
pub fn eval_guesser_vs_benchmark_hider(
    dict: &Dictionary,
    strategies: &[HiderStrategy],
    ing_history: Option<&[Vec<u32>]>,
    tie: TieBreak,
    pool: &WorkerPool,
) -> Result<f64, EngineError> {
    let uniform = benchmark_hider(dict);
    let mut total = 0.0;
    match ing_history {
        Some(rows) => {
            for row in &rows[..strategies.len()] {
                total += expected_guesses(row, &uniform);
            }
        }
        None => {
            for s in strategies {
                total += expected_guesses(&comp_num_guesses(dict, s, tie, pool)?, &uniform);
            }
        }
    }
    Ok(-total / strategies.len() as f64)
}

/// Epsilon of the benchmark pair. The benchmark guesser is itself the greedy
/// response to the uniform hider, so only the hider can gain.
pub fn benchmark_eps_report(counts: &[u32], d: usize) -> EpsilonReport {
    let ang: Vec<f64> = counts.iter().map(|&g| g as f64).collect();
    EpsilonReport::compute(&ang, counts, &HiderStrategy::uniform(d))
}

pub fn eval_benchmark_eps(dict: &Dictionary, tie: TieBreak, pool: &WorkerPool) -> Result<f64, EngineError> {
    let counts = benchmark_guess_counts(dict, tie, pool)?;
    Ok(benchmark_eps_report(&counts, dict.len()).eps)
}

/// Recomputes the guess counts of every strategy and the epsilon report of
/// the last one, as the solver scored it. Needed when only a strategy file
/// is available.
pub fn replay_solve(
    dict: &Dictionary,
    strategies: &[HiderStrategy],
    tie: TieBreak,
    pool: &WorkerPool,
) -> Result<(Vec<Vec<u32>>, EpsilonReport), SolveError> {
    let last = strategies.last().ok_or(SolveError::NoIterations)?;
    let mut ang = vec![0.0; dict.len()];
    let mut history = Vec::with_capacity(strategies.len());
    for (t, s) in strategies.iter().enumerate() {
        let ing = comp_num_guesses(dict, s, tie, pool)?;
        if t == 0 {
            ang.iter_mut().zip(&ing).for_each(|(a, &g)| *a = g as f64);
        } else {
            ang_update(&mut ang, &ing, t)?;
        }
        history.push(ing);
    }
    let report = EpsilonReport::compute(&ang, history.last().unwrap(), last);
    Ok((history, report))
}

/// One column of the results table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub letters: usize,
    pub dictionary_size: usize,
    pub hider_payoff_vs_benchmark: f64,
    pub guesser_payoff_vs_benchmark: f64,
    pub overall_payoff: f64,
    pub benchmark_self_play_hider_payoff: f64,
    pub self_play_hider_payoff: f64,
    pub benchmark_eps: f64,
    pub our_eps: f64,
    pub iterations: usize,
    pub avg_iter_minutes: f64,
}

/// Inputs describing a finished solve.
pub struct SolvedStrategies<'a> {
    /// `s_{h,0}..=s_{h,t*}`.
    pub strategies: &'a [HiderStrategy],
    pub ing_history: Option<&'a [Vec<u32>]>,
    pub eps_star: f64,
    pub self_play_hider_payoff: f64,
    pub iterations: usize,
    pub avg_iteration: Duration,
}

pub fn evaluate(
    dict: &Dictionary,
    solved: &SolvedStrategies<'_>,
    tie: TieBreak,
    pool: &WorkerPool,
) -> Result<MatchReport, EngineError> {
    let counts = benchmark_guess_counts(dict, tie, pool)?;
    let best = solved.strategies.last().expect("at least s_{h,0}");
    let hider = expected_guesses(&counts, best);
    let guesser = eval_guesser_vs_benchmark_hider(dict, solved.strategies, solved.ing_history, tie, pool)?;
    let bench = benchmark_eps_report(&counts, dict.len());
    Ok(MatchReport {
        letters: dict.letters(),
        dictionary_size: dict.len(),
        hider_payoff_vs_benchmark: hider,
        guesser_payoff_vs_benchmark: guesser,
        overall_payoff: (hider + guesser) / 2.0,
        benchmark_self_play_hider_payoff: bench.hider_actual_payoff,
        self_play_hider_payoff: solved.self_play_hider_payoff,
        benchmark_eps: bench.eps,
        our_eps: solved.eps_star,
        iterations: solved.iterations,
        avg_iter_minutes: solved.avg_iteration.as_secs_f64() / 60.0,
    })
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

/// Plays `games` seeded games: the hider draws from `s_h`, the guesser
/// samples one mixture component per game. Returns the hider's payoff.
pub fn monte_carlo_hider_payoff(
    dict: &Dictionary,
    s_h: &HiderStrategy,
    guesser: &MixedOracularGuesser,
    games: usize,
    seed: u64,
) -> Result<Estimate, EngineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hidden_dist = WeightedIndex::new(s_h.probs())
        .map_err(|e| EngineError::InvalidDistribution(e.to_string()))?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for game in 0..games {
        let hidden = hidden_dist.sample(&mut rng);
        let g = guesser.session(game as u64).play_against(dict, hidden)? as f64;
        sum += g;
        sum_sq += g * g;
    }
    let n = games as f64;
    let mean = sum / n;
    let var = if games > 1 { (sum_sq - n * mean * mean) / (n - 1.0) } else { 0.0 };
    Ok(Estimate {
        mean,
        std_err: (var.max(0.0) / n).sqrt(),
        samples: games,
    })
}

const CSV_HEADER: &str = "letters,dictionary_size,hider_payoff_vs_benchmark,guesser_payoff_vs_benchmark,overall_payoff,benchmark_self_play_hider_payoff,self_play_hider_payoff,benchmark_eps,our_eps,iterations,avg_iter_minutes";

pub fn write_csv<W: Write>(rows: &[MatchReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.letters,
            r.dictionary_size,
            r.hider_payoff_vs_benchmark,
            r.guesser_payoff_vs_benchmark,
            r.overall_payoff,
            r.benchmark_self_play_hider_payoff,
            r.self_play_hider_payoff,
            r.benchmark_eps,
            r.our_eps,
            r.iterations,
            r.avg_iter_minutes
        )?;
    }
    out.flush()
}

/// Aligned text table, one column per report.
pub fn format_table(rows: &[MatchReport]) -> String {
    type Cell = fn(&MatchReport) -> String;
    let lines: [(&str, Cell); 10] = [
        ("Number of letters", |r| r.letters.to_string()),
        ("Dictionary size", |r| r.dictionary_size.to_string()),
        ("Our hider payoff vs. benchmark", |r| format!("{:.3}", r.hider_payoff_vs_benchmark)),
        ("Our guesser payoff vs. benchmark", |r| format!("{:.3}", r.guesser_payoff_vs_benchmark)),
        ("Our overall payoff vs. benchmark", |r| format!("{:.3}", r.overall_payoff)),
        ("Benchmark self-play hider payoff", |r| format!("{:.3}", r.benchmark_self_play_hider_payoff)),
        ("Our self-play hider payoff", |r| format!("{:.3}", r.self_play_hider_payoff)),
        ("Benchmark epsilon", |r| format!("{:.3}", r.benchmark_eps)),
        ("Our final epsilon", |r| format!("{:.3}", r.our_eps)),
        ("Number of iterations", |r| r.iterations.to_string()),
    ];
    let timing: Cell = |r| format!("{:.3e}", r.avg_iter_minutes);
    let all: Vec<(&str, Cell)> = lines
        .into_iter()
        .chain([("Avg time per iteration (minutes)", timing)])
        .collect();

    let label_w = all.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let cells: Vec<Vec<String>> = all.iter().map(|(_, f)| rows.iter().map(f).collect()).collect();
    let col_w: Vec<usize> = (0..rows.len())
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for ((label, _), row) in all.iter().zip(&cells) {
        out.push_str(&format!("{label:<label_w$}"));
        for (cell, w) in row.iter().zip(&col_w) {
            out.push_str(&format!(" | {cell:>w$}"));
        }
        out.push('\n');
    }
    out
}
