//! Fictitious play on the 51-word two-letter game.
//!
//! ```text
//! cargo run --release -p jotto --example solve_two_letter -- 2000
//! ```
//!
//! The full 22212-iteration run takes a few minutes in release mode.

use jotto::{solve, twl06, MemorySink, SolveConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let iters: usize = std::env::args().nth(1).map_or(Ok(2000), |a| a.parse())?;
    let d = twl06(2)?;
    let mut sink = MemorySink::default();
    let a = solve(&d, &SolveConfig::new(iters), &mut sink)?;

    for t in [0, 1, 10, 100, 1000, 10000, iters] {
        if let Some(r) = a.eps_history.get(t) {
            println!("t={t:<6} eps={:.4} (hider {:.4}, guesser {:.4})", r.eps, r.eps_hider, r.eps_guesser);
        }
    }
    println!("best eps {:.4} at t={}", a.best_eps, a.best_iteration);

    let mut support: Vec<(f64, &str)> = a
        .best_hider_strategy
        .probs()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 1e-3)
        .map(|(i, &p)| (p, d.word(i)))
        .collect();
    support.sort_by(|x, y| y.0.total_cmp(&x.0));
    println!("hider words above 0.1%:");
    for (p, w) in support {
        println!("  {w} {p:.3}");
    }
    Ok(())
}
