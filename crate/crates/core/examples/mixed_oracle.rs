//! Replaying a solve's strategy file as a mixed guesser: each session commits
//! to one iterate and then plays its greedy response.
//!
//! ```text
//! cargo run -p jotto --example mixed_oracle
//! ```

use jotto::artifacts::{self, DirSink};
use jotto::{solve, twl06, MixedOracularGuesser, SolveConfig, TieBreak};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = twl06(2)?;
    let dir = tempfile::tempdir()?;
    let mut sink = DirSink::create(dir.path(), &d, TieBreak::default(), false)?;
    let a = solve(&d, &SolveConfig::new(200), &mut sink)?;
    drop(sink);

    let mix = MixedOracularGuesser::from_strategy_file(
        dir.path().join(artifacts::STRATEGY_FILE),
        a.best_iteration,
        2024,
        TieBreak::default(),
    )?;
    let hidden = d.index_of("OX").expect("OX is playable");
    for counter in 0..5 {
        let s = mix.session(counter);
        let words: Vec<String> = s
            .transcript(&d, hidden)?
            .iter()
            .map(|&(g, ans)| format!("{}:{ans}", d.word(g)))
            .collect();
        println!("session {counter} t={:<3} {}", s.t(), words.join(" "));
    }
    Ok(())
}
