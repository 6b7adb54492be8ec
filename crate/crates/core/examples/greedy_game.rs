//! The benchmark guesser (greedy response to a uniform hider) finding a word.
//!
//! ```text
//! cargo run -p jotto --example greedy_game -- 4 JOLT
//! ```

use jotto::oracle::benchmark_session;
use jotto::{exp_num_elims, twl06, update_state, GameState, HiderStrategy, TieBreak};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let letters: usize = args.next().map_or(Ok(5), |a| a.parse())?;
    let d = twl06(letters)?;
    let hidden = match args.next() {
        Some(w) => d.check_word(&w).map_err(|why| format!("{w}: {why}"))?,
        None => d.len() / 2,
    };
    println!("{} words, hidden word {}", d.len(), d.word(hidden));

    let uniform = HiderStrategy::uniform(d.len());
    let session = benchmark_session(&d, TieBreak::default());
    let mut state = GameState::full(d.len());
    for (n, (guess, answer)) in session.transcript(&d, hidden)?.into_iter().enumerate() {
        let score = exp_num_elims(&d, guess, &uniform, &state)?;
        println!(
            "{:>2}. {}  answer {answer}  ({} candidates, expected eliminations {score:.2})",
            n + 1,
            d.word(guess),
            state.count()
        );
        state = update_state(&d, &state, guess, answer);
    }
    Ok(())
}
