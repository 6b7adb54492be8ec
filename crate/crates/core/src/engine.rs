//! The guesser's side of the game: knowledge-base tracking and the greedy
//! best response (GBR) to a hider distribution.
//!
//! The GBR is a pure oracular strategy. It never materialises a policy table;
//! given the hider distribution it maps any game state to a guess on demand,
//! picking the word that eliminates the most still-consistent words in
//! expectation.

use std::collections::HashMap;

use bitvec::prelude::*;
use thiserror::Error;

use crate::dictionary::Dictionary;

/// Probability vectors must sum to one within this tolerance.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("game state has no consistent words")]
    EmptyState,
    #[error("vector has {got} entries but the dictionary has {expected} words")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),
    #[error("game against {word} exceeded {limit} guesses")]
    GuessLimitExceeded { word: String, limit: usize },
    #[error("answer {answer} outside 0..={letters}")]
    AnswerOutOfRange { answer: usize, letters: usize },
}

/// The guesser's knowledge base: bit `i` is set while word `i` is still
/// consistent with every guess/answer pair seen so far.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    bits: BitVec<u64, Lsb0>,
}

impl GameState {
    /// All words consistent: the state at the start of a game.
    pub fn full(d: usize) -> Self {
        GameState {
            bits: bitvec![u64, Lsb0; 1; d],
        }
    }

    /// Only word `k` consistent.
    pub fn singleton(d: usize, k: usize) -> Self {
        let mut bits = bitvec![u64, Lsb0; 0; d];
        bits.set(k, true);
        GameState { bits }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        GameState {
            bits: bits.iter().copied().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_consistent(&self, i: usize) -> bool {
        self.bits[i]
    }

    /// Number of consistent words.
    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn consistent(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    /// True when every consistent word here is also consistent in `other`.
    pub fn is_subset_of(&self, other: &GameState) -> bool {
        self.bits.len() == other.bits.len()
            && self.bits.iter_ones().all(|i| other.bits[i])
    }
}

/// A hider mixed strategy: probability of hiding each dictionary word.
#[derive(Debug, Clone, PartialEq)]
pub struct HiderStrategy(Vec<f64>);

impl HiderStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self, EngineError> {
        if probs.is_empty() {
            return Err(EngineError::InvalidDistribution("no entries".into()));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(EngineError::InvalidDistribution(format!(
                "entry {i} is {p}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(EngineError::InvalidDistribution(format!(
                "entries sum to {total}"
            )));
        }
        Ok(HiderStrategy(probs))
    }

    pub(crate) fn new_unchecked(probs: Vec<f64>) -> Self {
        HiderStrategy(probs)
    }

    pub fn uniform(d: usize) -> Self {
        HiderStrategy(vec![1.0 / d as f64; d])
    }

    pub fn point_mass(d: usize, k: usize) -> Self {
        let mut probs = vec![0.0; d];
        probs[k] = 1.0;
        HiderStrategy(probs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Distribution over the answers `0..=L` to a guess.
#[derive(Debug, Clone, PartialEq)]
pub struct AnswerDistribution(Vec<f64>);

impl AnswerDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.0
    }
}

/// How the greedy guesser resolves exact ties between best-scoring words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Lowest index among all maximisers. When exactly one word is still
    /// consistent it is guessed directly, since every word then scores zero.
    #[default]
    LowestIndex,
    /// Consistent maximisers before inconsistent ones, then lowest index.
    ConsistentFirst,
}

/// Per-answer hider mass and consistent-word counts for one guess.
struct Partition {
    mass: Vec<f64>,
    count: Vec<usize>,
}

impl Partition {
    fn new(letters: usize) -> Self {
        Partition {
            mass: vec![0.0; letters + 1],
            count: vec![0; letters + 1],
        }
    }

    fn fill(&mut self, row: &[u8], probs: &[f64], consistent: &[usize]) {
        self.mass.fill(0.0);
        self.count.fill(0);
        for &k in consistent {
            let j = row[k] as usize;
            self.mass[j] += probs[k];
            self.count[j] += 1;
        }
    }

    /// Answer probabilities. Falls back to uniform weighting over the
    /// consistent words when they carry no hider mass.
    fn answer_probs(&self, n: usize, out: &mut [f64]) {
        let total: f64 = self.mass.iter().sum();
        if total > 0.0 {
            for (o, m) in out.iter_mut().zip(&self.mass) {
                *o = m / total;
            }
        } else {
            for (o, c) in out.iter_mut().zip(&self.count) {
                *o = *c as f64 / n as f64;
            }
        }
    }

    fn expected_elims(&self, n: usize, answer: &mut [f64]) -> f64 {
        self.answer_probs(n, answer);
        let mut e = 0.0;
        for (a, c) in answer.iter().zip(&self.count) {
            e += a * (n - c) as f64;
        }
        e
    }
}

fn check_dims(dict: &Dictionary, h: &HiderStrategy, s: &GameState) -> Result<(), EngineError> {
    for got in [h.len(), s.len()] {
        if got != dict.len() {
            return Err(EngineError::DimensionMismatch {
                expected: dict.len(),
                got,
            });
        }
    }
    Ok(())
}

/// Probability of each answer `0..=L` when `guess` is played, given that the
/// hidden word is drawn from `h` restricted to the consistent words.
pub fn answer_probs(
    dict: &Dictionary,
    guess: usize,
    h: &HiderStrategy,
    s: &GameState,
) -> Result<AnswerDistribution, EngineError> {
    check_dims(dict, h, s)?;
    let consistent: Vec<usize> = s.consistent().collect();
    if consistent.is_empty() {
        return Err(EngineError::EmptyState);
    }
    let mut part = Partition::new(dict.letters());
    part.fill(dict.common_row(guess), h.probs(), &consistent);
    let mut out = vec![0.0; dict.letters() + 1];
    part.answer_probs(consistent.len(), &mut out);
    Ok(AnswerDistribution(out))
}

/// Consistent words eliminated if `guess` receives `answer`.
pub fn num_elims(dict: &Dictionary, guess: usize, s: &GameState, answer: usize) -> usize {
    let row = dict.common_row(guess);
    s.consistent().filter(|&k| row[k] as usize != answer).count()
}

/// Expected number of consistent words eliminated by `guess` against `h`.
pub fn exp_num_elims(
    dict: &Dictionary,
    guess: usize,
    h: &HiderStrategy,
    s: &GameState,
) -> Result<f64, EngineError> {
    check_dims(dict, h, s)?;
    let consistent: Vec<usize> = s.consistent().collect();
    if consistent.is_empty() {
        return Err(EngineError::EmptyState);
    }
    let mut part = Partition::new(dict.letters());
    let mut answer = vec![0.0; dict.letters() + 1];
    part.fill(dict.common_row(guess), h.probs(), &consistent);
    Ok(part.expected_elims(consistent.len(), &mut answer))
}

/// Knowledge base after `guess` drew `answer`.
pub fn update_state(dict: &Dictionary, s: &GameState, guess: usize, answer: usize) -> GameState {
    let row = dict.common_row(guess);
    let mut next = s.clone();
    for k in s.consistent() {
        if row[k] as usize != answer {
            next.bits.set(k, false);
        }
    }
    next
}

/// The greedy best response to a fixed hider distribution.
///
/// Holds reusable scratch buffers and a cache of decisions already made, so
/// one instance per thread. The guess is a pure function of the state, so
/// cached answers are exactly what a fresh computation would return.
pub struct GreedyGuesser<'a> {
    dict: &'a Dictionary,
    h: &'a HiderStrategy,
    tie: TieBreak,
    part: Partition,
    answer: Vec<f64>,
    consistent: Vec<usize>,
    memo: HashMap<GameState, usize>,
}

impl<'a> GreedyGuesser<'a> {
    pub fn new(dict: &'a Dictionary, h: &'a HiderStrategy, tie: TieBreak) -> Result<Self, EngineError> {
        if h.len() != dict.len() {
            return Err(EngineError::DimensionMismatch {
                expected: dict.len(),
                got: h.len(),
            });
        }
        Ok(GreedyGuesser {
            dict,
            h,
            tie,
            part: Partition::new(dict.letters()),
            answer: vec![0.0; dict.letters() + 1],
            consistent: Vec::with_capacity(dict.len()),
            memo: HashMap::new(),
        })
    }

    /// Index of the word to guess in state `s`. Scores every dictionary word,
    /// consistent or not, in `O(D^2 L)` unless the state was seen before.
    pub fn next_guess(&mut self, s: &GameState) -> Result<usize, EngineError> {
        if let Some(&g) = self.memo.get(s) {
            return Ok(g);
        }
        let g = self.compute_guess(s)?;
        self.memo.insert(s.clone(), g);
        Ok(g)
    }

    fn compute_guess(&mut self, s: &GameState) -> Result<usize, EngineError> {
        if s.len() != self.dict.len() {
            return Err(EngineError::DimensionMismatch {
                expected: self.dict.len(),
                got: s.len(),
            });
        }
        self.consistent.clear();
        self.consistent.extend(s.consistent());
        let n = self.consistent.len();
        match (n, self.tie) {
            (0, _) => return Err(EngineError::EmptyState),
            (1, TieBreak::LowestIndex) => return Ok(self.consistent[0]),
            _ => {}
        }

        let probs = self.h.probs();
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        let mut best_consistent = false;
        for i in 0..self.dict.len() {
            self.part.fill(self.dict.common_row(i), probs, &self.consistent);
            let score = self.part.expected_elims(n, &mut self.answer);
            let better = match self.tie {
                TieBreak::LowestIndex => score > best_score,
                TieBreak::ConsistentFirst => {
                    score > best_score
                        || (score == best_score && !best_consistent && s.is_consistent(i))
                }
            };
            if better {
                best = i;
                best_score = score;
                best_consistent = s.is_consistent(i);
            }
        }
        Ok(best)
    }

    /// Plays a full game against `hidden` starting from the full state and
    /// returns the number of guesses used, including the final correct one.
    pub fn guesses_to_find(&mut self, hidden: usize) -> Result<u32, EngineError> {
        let d = self.dict.len();
        let letters = self.dict.letters();
        let mut state = GameState::full(d);
        for n in 1..=d {
            let guess = self.next_guess(&state)?;
            let answer = self.dict.common(hidden, guess) as usize;
            if answer == letters {
                return Ok(n as u32);
            }
            state = update_state(self.dict, &state, guess, answer);
        }
        Err(EngineError::GuessLimitExceeded {
            word: self.dict.word(hidden).to_owned(),
            limit: d,
        })
    }
}

/// One-shot greedy best response: the guess for state `s` against `h`.
pub fn guesser_gbr(
    dict: &Dictionary,
    h: &HiderStrategy,
    s: &GameState,
    tie: TieBreak,
) -> Result<usize, EngineError> {
    GreedyGuesser::new(dict, h, tie)?.next_guess(s)
}
