//! Approximate equilibrium strategies for two-player hider/guesser Jotto.
//!
//! The guesser's strategy space is far too large to write down, so it is
//! kept in *oracular form*: an algorithm that produces a move for any game
//! state on demand. Fictitious play alternates the hider's exact best
//! response with the guesser's greedy best response ([`engine`]), and the
//! guesser's average strategy is recovered afterwards as a uniform mixture
//! of greedy responses to the hider's per-iteration strategies ([`oracle`]).
//!
//! | module | contents |
//! |---|---|
//! | [`dictionary`] | word-list filtering and the common-letter table |
//! | [`engine`] | game state, answer distributions, greedy best response |
//! | [`solver`] | fictitious play, epsilons, best-iterate selection |
//! | [`strategy_file`], [`artifacts`] | on-disk solve output |
//! | [`oracle`] | mixed oracular guesser and the benchmark strategies |
//! | [`eval`] | head-to-head and self-play evaluation, report tables |

pub mod artifacts;
pub mod dictionary;
pub mod engine;
pub mod eval;
pub mod oracle;
pub mod solver;
pub mod strategy_file;

pub use dictionary::{num_common_letters, Dictionary, DictionaryError, Rejection};
pub use engine::{
    answer_probs, exp_num_elims, guesser_gbr, num_elims, update_state, AnswerDistribution,
    EngineError, GameState, GreedyGuesser, HiderStrategy, TieBreak,
};
pub use oracle::{benchmark_guesser, benchmark_hider, GuesserSession, MixedOracularGuesser};
pub use solver::{
    comp_num_guesses, solve, EpsilonReport, MemorySink, SolveArtifacts, SolveConfig, SolveError,
    SolveSink, WorkerPool,
};

/// TWL06 words of two to five letters, unfiltered, one per line.
pub const TWL06_SHORT: &str = include_str!("../data/twl06_2to5.txt");

/// The playable `letters`-letter dictionary built from [`TWL06_SHORT`].
pub fn twl06(letters: usize) -> Result<Dictionary, DictionaryError> {
    Dictionary::from_reader(TWL06_SHORT.as_bytes(), letters)
}
