//! Playable strategies.
//!
//! The solved guesser is a mixed oracular strategy: a uniform distribution
//! over the greedy best responses to the hider strategies `s_{h,0}..s_{h,t*}`.
//! A session commits to one of those pure oracles when it starts and keeps
//! it for the whole game.
//!
//! The benchmark opponent hides uniformly and guesses with the greedy best
//! response to the uniform hider.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artifacts::{self, ArtifactError};
use crate::dictionary::Dictionary;
use crate::solver::{comp_num_guesses, WorkerPool};
use crate::engine::{update_state, EngineError, GameState, GreedyGuesser, HiderStrategy, TieBreak};

/// Uniform mixture over greedy guessers, one per strategy-file line `0..=t*`.
#[derive(Debug, Clone)]
pub struct MixedOracularGuesser {
    strategies: Arc<Vec<HiderStrategy>>,
    t_star: usize,
    seed: u64,
    tie: TieBreak,
}

impl MixedOracularGuesser {
    /// Keeps `strategies[0..=t_star]`; fails if there are not enough lines.
    pub fn new(
        mut strategies: Vec<HiderStrategy>,
        t_star: usize,
        seed: u64,
        tie: TieBreak,
    ) -> Result<Self, ArtifactError> {
        if strategies.len() <= t_star {
            return Err(ArtifactError::Mismatch(format!(
                "t* = {t_star} but only {} strategies are available",
                strategies.len()
            )));
        }
        strategies.truncate(t_star + 1);
        Ok(MixedOracularGuesser {
            strategies: Arc::new(strategies),
            t_star,
            seed,
            tie,
        })
    }

    pub fn from_strategy_file(
        path: impl AsRef<Path>,
        t_star: usize,
        seed: u64,
        tie: TieBreak,
    ) -> Result<Self, ArtifactError> {
        let strategies = artifacts::load_strategies(path.as_ref(), t_star)?;
        Self::new(strategies, t_star, seed, tie)
    }

    pub fn t_star(&self) -> usize {
        self.t_star
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn strategies(&self) -> &[HiderStrategy] {
        &self.strategies
    }

    /// The mixture component used by session number `counter`. Deterministic
    /// in `(seed, counter)`.
    pub fn sample_t(&self, counter: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(counter);
        rng.random_range(0..=self.t_star)
    }

    pub fn session(&self, counter: u64) -> GuesserSession {
        self.session_with_t(self.sample_t(counter))
    }

    /// A session bound to component `t` regardless of the seed.
    ///
    /// # Panics
    /// If `t > t_star`.
    pub fn session_with_t(&self, t: usize) -> GuesserSession {
        assert!(t <= self.t_star, "component {t} outside 0..={}", self.t_star);
        GuesserSession {
            strategies: Arc::clone(&self.strategies),
            t,
            tie: self.tie,
        }
    }
}

/// A pure oracular guesser: the greedy best response to one hider strategy.
#[derive(Debug, Clone)]
pub struct GuesserSession {
    strategies: Arc<Vec<HiderStrategy>>,
    t: usize,
    tie: TieBreak,
}

impl GuesserSession {
    /// A session outside any mixture, responding to `h` directly.
    pub fn fixed(h: HiderStrategy, tie: TieBreak) -> Self {
        GuesserSession {
            strategies: Arc::new(vec![h]),
            t: 0,
            tie,
        }
    }

    /// Index of the mixture component this session committed to.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn hider_strategy(&self) -> &HiderStrategy {
        &self.strategies[self.t]
    }

    pub fn next_guess(&self, dict: &Dictionary, state: &GameState) -> Result<usize, EngineError> {
        GreedyGuesser::new(dict, self.hider_strategy(), self.tie)?.next_guess(state)
    }

    /// Guesses needed to find `hidden` from the start of a game.
    pub fn play_against(&self, dict: &Dictionary, hidden: usize) -> Result<u32, EngineError> {
        GreedyGuesser::new(dict, self.hider_strategy(), self.tie)?.guesses_to_find(hidden)
    }

    /// Guesses needed for every hidden word.
    pub fn guess_counts(&self, dict: &Dictionary) -> Result<Vec<u32>, EngineError> {
        comp_num_guesses(dict, self.hider_strategy(), self.tie, &WorkerPool::sequential())
    }

    /// Full game transcript against `hidden`: `(guess, answer)` pairs.
    pub fn transcript(&self, dict: &Dictionary, hidden: usize) -> Result<Vec<(usize, usize)>, EngineError> {
        let mut g = GreedyGuesser::new(dict, self.hider_strategy(), self.tie)?;
        let mut state = GameState::full(dict.len());
        let mut out = Vec::new();
        for _ in 0..dict.len() {
            let guess = g.next_guess(&state)?;
            let answer = dict.common(hidden, guess) as usize;
            out.push((guess, answer));
            if answer == dict.letters() {
                return Ok(out);
            }
            state = update_state(dict, &state, guess, answer);
        }
        Err(EngineError::GuessLimitExceeded {
            word: dict.word(hidden).to_owned(),
            limit: dict.len(),
        })
    }
}

/// Uniform distribution over the dictionary.
pub fn benchmark_hider(dict: &Dictionary) -> HiderStrategy {
    HiderStrategy::uniform(dict.len())
}

/// Greedy best response to the uniform hider.
pub fn benchmark_guesser(dict: &Dictionary, state: &GameState, tie: TieBreak) -> Result<usize, EngineError> {
    GreedyGuesser::new(dict, &benchmark_hider(dict), tie)?.next_guess(state)
}

/// The benchmark guesser as a session object.
pub fn benchmark_session(dict: &Dictionary, tie: TieBreak) -> GuesserSession {
    GuesserSession::fixed(benchmark_hider(dict), tie)
}
