//! Exact head-to-head evaluation against the benchmark, with a Monte Carlo
//! cross-check of one matchup.
//!
//! ```text
//! cargo run --release -p jotto --example benchmark_eval -- 2 3000
//! ```

use jotto::eval::{self, monte_carlo_hider_payoff, SolvedStrategies};
use jotto::{solve, twl06, HiderStrategy, MemorySink, MixedOracularGuesser, SolveConfig, TieBreak, WorkerPool};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let letters: usize = args.next().map_or(Ok(2), |a| a.parse())?;
    let iters: usize = args.next().map_or(Ok(3000), |a| a.parse())?;
    let d = twl06(letters)?;
    let tie = TieBreak::default();
    let pool = WorkerPool::new(std::thread::available_parallelism().map_or(1, |n| n.get()))?;

    let mut sink = MemorySink::default();
    let a = solve(&d, &SolveConfig::new(iters).workers(pool.workers()), &mut sink)?;
    let t_star = a.best_iteration;
    let solved = SolvedStrategies {
        strategies: &sink.strategies[..=t_star],
        ing_history: Some(&sink.ing_history),
        eps_star: a.best_eps,
        self_play_hider_payoff: a.self_play_hider_payoff(),
        iterations: a.last_iteration(),
        avg_iteration: a.avg_iteration,
    };
    let report = eval::evaluate(&d, &solved, tie, &pool)?;
    print!("{}", eval::format_table(std::slice::from_ref(&report)));

    let bench = MixedOracularGuesser::new(vec![HiderStrategy::uniform(d.len())], 0, 1, tie)?;
    let mc = monte_carlo_hider_payoff(&d, &a.best_hider_strategy, &bench, 20_000, 7)?;
    println!(
        "\nhider vs benchmark, 20000 sampled games: {:.3} +/- {:.3} (exact {:.3})",
        mc.mean, mc.std_err, report.hider_payoff_vs_benchmark
    );
    Ok(())
}
