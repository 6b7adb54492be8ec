//! Fictitious play between the hider's exact best response and the guesser's
//! greedy best response.
//!
//! The guesser's average strategy is never represented. Its performance is
//! tracked through two per-word vectors: ING, the guesses the current GBR
//! needs to find each word, and ANG, the running average of ING over all
//! iterations. The hider strategies written to the strategy sink are enough
//! to replay the guesser later (see [`crate::oracle`]).

use std::io;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::Dictionary;
use crate::engine::{EngineError, GreedyGuesser, HiderStrategy, TieBreak};

/// Drift from one after mixing beyond which the mixed strategy is renormalised.
const MIX_RENORMALIZE_DRIFT: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("iteration index must be at least 1, got {0}")]
    InvalidIteration(usize),
    #[error("iteration budget must be at least 1")]
    NoIterations,
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("vectors differ in length: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("failed to build worker pool: {0}")]
    Pool(String),
    #[error("writing solve output failed at iteration {iteration} (output files are partial)")]
    Sink {
        iteration: usize,
        #[source]
        source: io::Error,
    },
}

/// Fixed-size pool that splits the dictionary into contiguous blocks, one per
/// worker. A single worker runs on the calling thread.
pub struct WorkerPool {
    workers: usize,
    pool: Option<rayon::ThreadPool>,
}

impl WorkerPool {
    pub fn new(workers: usize) -> Result<Self, SolveError> {
        if workers == 0 {
            return Err(SolveError::NoWorkers);
        }
        let pool = if workers == 1 {
            None
        } else {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .thread_name(|i| format!("jotto-worker-{i}"))
                    .build()
                    .map_err(|e| SolveError::Pool(e.to_string()))?,
            )
        };
        Ok(WorkerPool { workers, pool })
    }

    pub fn sequential() -> Self {
        WorkerPool {
            workers: 1,
            pool: None,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

fn fill_block(
    dict: &Dictionary,
    h: &HiderStrategy,
    tie: TieBreak,
    first: usize,
    slots: &mut [u32],
) -> Result<(), EngineError> {
    let mut guesser = GreedyGuesser::new(dict, h, tie)?;
    for (offset, slot) in slots.iter_mut().enumerate() {
        *slot = guesser.guesses_to_find(first + offset)?;
    }
    Ok(())
}

/// Guesses the greedy best response to `h` needs to find each word (ING).
///
/// Every word's game is simulated independently, so the result does not
/// depend on the number of workers.
pub fn comp_num_guesses(
    dict: &Dictionary,
    h: &HiderStrategy,
    tie: TieBreak,
    pool: &WorkerPool,
) -> Result<Vec<u32>, EngineError> {
    if h.len() != dict.len() {
        return Err(EngineError::DimensionMismatch {
            expected: dict.len(),
            got: h.len(),
        });
    }
    let d = dict.len();
    let mut out = vec![0u32; d];
    match &pool.pool {
        None => fill_block(dict, h, tie, 0, &mut out)?,
        Some(threads) => {
            let block = d.div_ceil(pool.workers);
            threads.install(|| {
                out.par_chunks_mut(block)
                    .enumerate()
                    .try_for_each(|(b, slots)| fill_block(dict, h, tie, b * block, slots))
            })?;
        }
    }
    Ok(out)
}

/// Hider best response to the guesser's average: uniform over the words that
/// take the most guesses on average.
pub fn hider_br(ang: &[f64]) -> HiderStrategy {
    let max = ang.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties = ang.iter().filter(|&&x| x == max).count();
    let p = 1.0 / ties as f64;
    HiderStrategy::new_unchecked(ang.iter().map(|&x| if x == max { p } else { 0.0 }).collect())
}

/// Fictitious-play averaging: `(1 - 1/(t+1)) * old + 1/(t+1) * br`.
pub fn fp_mix_update(
    old: &HiderStrategy,
    br: &HiderStrategy,
    t: usize,
) -> Result<HiderStrategy, SolveError> {
    if t < 1 {
        return Err(SolveError::InvalidIteration(t));
    }
    if old.len() != br.len() {
        return Err(SolveError::DimensionMismatch(old.len(), br.len()));
    }
    let w = 1.0 / (t as f64 + 1.0);
    let mut mixed: Vec<f64> = old
        .probs()
        .iter()
        .zip(br.probs())
        .map(|(o, b)| (1.0 - w) * o + w * b)
        .collect();
    let total: f64 = mixed.iter().sum();
    if (total - 1.0).abs() > MIX_RENORMALIZE_DRIFT {
        mixed.iter_mut().for_each(|p| *p /= total);
    }
    Ok(HiderStrategy::new_unchecked(mixed))
}

/// Folds iteration `t`'s guess counts into the running average, in place.
pub fn ang_update(ang: &mut [f64], ing: &[u32], t: usize) -> Result<(), SolveError> {
    if t < 1 {
        return Err(SolveError::InvalidIteration(t));
    }
    if ang.len() != ing.len() {
        return Err(SolveError::DimensionMismatch(ang.len(), ing.len()));
    }
    let w = 1.0 / (t as f64 + 1.0);
    for (a, &g) in ang.iter_mut().zip(ing) {
        *a = (1.0 - w) * *a + w * g as f64;
    }
    Ok(())
}

pub fn hider_br_payoff(ang: &[f64]) -> f64 {
    ang.iter().copied().fold(0.0, f64::max)
}

pub fn hider_actual_payoff(ang: &[f64], s_h: &HiderStrategy) -> f64 {
    ang.iter().zip(s_h.probs()).map(|(a, p)| a * p).sum()
}

pub fn guesser_br_payoff(ing: &[u32], s_h: &HiderStrategy) -> f64 {
    -ing.iter()
        .zip(s_h.probs())
        .map(|(&g, p)| g as f64 * p)
        .sum::<f64>()
}

pub fn guesser_actual_payoff(ang: &[f64], s_h: &HiderStrategy) -> f64 {
    -hider_actual_payoff(ang, s_h)
}

/// How far each side is from its (greedy, for the guesser) best response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub hider_br_payoff: f64,
    pub hider_actual_payoff: f64,
    pub guesser_br_payoff: f64,
    pub guesser_actual_payoff: f64,
    pub eps_hider: f64,
    /// Can be slightly negative: the greedy response is not a true best response.
    pub eps_guesser: f64,
    pub eps: f64,
}

impl EpsilonReport {
    pub fn compute(ang: &[f64], ing: &[u32], s_h: &HiderStrategy) -> Self {
        let hider_br = hider_br_payoff(ang);
        let hider_actual = hider_actual_payoff(ang, s_h);
        let guesser_br = guesser_br_payoff(ing, s_h);
        let guesser_actual = -hider_actual;
        let eps_hider = hider_br - hider_actual;
        let eps_guesser = guesser_br - guesser_actual;
        EpsilonReport {
            hider_br_payoff: hider_br,
            hider_actual_payoff: hider_actual,
            guesser_br_payoff: guesser_br,
            guesser_actual_payoff: guesser_actual,
            eps_hider,
            eps_guesser,
            eps: eps_hider.max(eps_guesser),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Fictitious-play iterations after the uniform initialisation.
    pub iterations: usize,
    pub workers: usize,
    pub tie_break: TieBreak,
    /// Stop as soon as the best epsilon reaches this value.
    pub target_eps: Option<f64>,
    /// Checked before every iteration; when set the solve finishes with the
    /// iterations completed so far.
    pub stop: Option<Arc<AtomicBool>>,
}

impl SolveConfig {
    pub fn new(iterations: usize) -> Self {
        SolveConfig {
            iterations,
            workers: 1,
            tie_break: TieBreak::default(),
            target_eps: None,
            stop: None,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn tie_break(mut self, tie: TieBreak) -> Self {
        self.tie_break = tie;
        self
    }

    pub fn target_eps(mut self, eps: Option<f64>) -> Self {
        self.target_eps = eps;
        self
    }

    pub fn stop_flag(mut self, flag: Arc<AtomicBool>) -> Self {
        self.stop = Some(flag);
        self
    }
}

/// Everything known at the end of one iteration.
#[derive(Debug)]
pub struct IterationRecord<'a> {
    pub t: usize,
    pub eps: EpsilonReport,
    pub best_eps: f64,
    pub best_iteration: usize,
    pub ing: &'a [u32],
    pub elapsed: Duration,
}

/// Receives solver output as it is produced.
pub trait SolveSink {
    /// Hider average strategy `s_{h,t}`, called before its iteration is scored.
    fn strategy(&mut self, t: usize, s: &HiderStrategy) -> io::Result<()>;

    fn iteration(&mut self, _record: &IterationRecord<'_>) -> io::Result<()> {
        Ok(())
    }

    fn finish(&mut self, _artifacts: &SolveArtifacts) -> io::Result<()> {
        Ok(())
    }
}

/// Keeps every strategy and ING vector in memory.
#[derive(Debug, Default, Clone)]
pub struct MemorySink {
    pub strategies: Vec<HiderStrategy>,
    pub ing_history: Vec<Vec<u32>>,
}

impl SolveSink for MemorySink {
    fn strategy(&mut self, _t: usize, s: &HiderStrategy) -> io::Result<()> {
        self.strategies.push(s.clone());
        Ok(())
    }

    fn iteration(&mut self, record: &IterationRecord<'_>) -> io::Result<()> {
        self.ing_history.push(record.ing.to_vec());
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveArtifacts {
    /// `s_{h,t*}`.
    pub best_hider_strategy: HiderStrategy,
    pub best_iteration: usize,
    pub best_eps: f64,
    /// One report per completed iteration, starting with `t = 0`.
    pub eps_history: Vec<EpsilonReport>,
    /// ANG after the best iteration; dotted with the best strategy this gives
    /// the self-play value of the solved pair.
    pub best_ang: Vec<f64>,
    pub interrupted: bool,
    pub avg_iteration: Duration,
}

impl SolveArtifacts {
    /// Last completed iteration index.
    pub fn last_iteration(&self) -> usize {
        self.eps_history.len() - 1
    }

    /// Hider payoff when the solved hider meets the solved mixed guesser.
    pub fn self_play_hider_payoff(&self) -> f64 {
        self.eps_history[self.best_iteration].hider_actual_payoff
    }
}

/// Runs fictitious play from the uniform hider strategy for
/// `config.iterations` iterations, keeping the iterate with the smallest
/// epsilon (earliest on ties).
pub fn solve(
    dict: &Dictionary,
    config: &SolveConfig,
    sink: &mut dyn SolveSink,
) -> Result<SolveArtifacts, SolveError> {
    if config.iterations == 0 {
        return Err(SolveError::NoIterations);
    }
    let pool = WorkerPool::new(config.workers)?;
    let sink_err = |iteration| move |source| SolveError::Sink { iteration, source };
    let started = Instant::now();

    let mut s_h = HiderStrategy::uniform(dict.len());
    sink.strategy(0, &s_h).map_err(sink_err(0))?;
    let ing = comp_num_guesses(dict, &s_h, config.tie_break, &pool)?;
    let mut ang: Vec<f64> = ing.iter().map(|&g| g as f64).collect();
    let report = EpsilonReport::compute(&ang, &ing, &s_h);
    let mut best_eps = report.eps;
    let mut best_iteration = 0;
    let mut best_strategy = s_h.clone();
    let mut best_ang = ang.clone();
    let mut eps_history = vec![report];
    sink.iteration(&IterationRecord {
        t: 0,
        eps: report,
        best_eps,
        best_iteration,
        ing: &ing,
        elapsed: started.elapsed(),
    })
    .map_err(sink_err(0))?;

    let mut interrupted = false;
    for t in 1..=config.iterations {
        if config.target_eps.is_some_and(|target| best_eps <= target) {
            break;
        }
        if config.stop.as_ref().is_some_and(|f| f.load(Ordering::Relaxed)) {
            log::info!("solve interrupted after iteration {}", t - 1);
            interrupted = true;
            break;
        }
        let iter_start = Instant::now();
        let br = hider_br(&ang);
        s_h = fp_mix_update(&s_h, &br, t)?;
        sink.strategy(t, &s_h).map_err(sink_err(t))?;
        let ing = comp_num_guesses(dict, &s_h, config.tie_break, &pool)?;
        ang_update(&mut ang, &ing, t)?;
        let report = EpsilonReport::compute(&ang, &ing, &s_h);
        if report.eps < best_eps {
            best_eps = report.eps;
            best_iteration = t;
            best_strategy.clone_from(&s_h);
            best_ang.clone_from(&ang);
        }
        eps_history.push(report);
        sink.iteration(&IterationRecord {
            t,
            eps: report,
            best_eps,
            best_iteration,
            ing: &ing,
            elapsed: iter_start.elapsed(),
        })
        .map_err(sink_err(t))?;
    }

    let artifacts = SolveArtifacts {
        best_hider_strategy: best_strategy,
        best_iteration,
        best_eps,
        avg_iteration: started.elapsed() / eps_history.len() as u32,
        eps_history,
        best_ang,
        interrupted,
    };
    sink.finish(&artifacts)
        .map_err(sink_err(artifacts.last_iteration()))?;
    Ok(artifacts)
}
