//! Solves the two-letter game in memory and serves it over HTTP until Ctrl-C.
//!
//! ```text
//! cargo run -p jotto-service --example serve_solved -- 8080
//! curl -s -XPOST localhost:8080/sessions -H 'content-type: application/json' -d '{"role":"hider"}'
//! ```

use std::net::SocketAddr;

use jotto::{solve, twl06, MemorySink, SolveConfig, TieBreak};
use jotto_service::{serve, GameContext, HttpConfig, SessionManager};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let port: u16 = std::env::args().nth(1).map_or(Ok(8080), |a| a.parse())?;
    let d = twl06(2)?;
    let mut sink = MemorySink::default();
    let a = solve(&d, &SolveConfig::new(500), &mut sink)?;
    let ctx = GameContext::new(d, sink.strategies, a.best_iteration, a.best_eps, TieBreak::default(), 1, "in-memory solve")?;
    println!("serving on port {port}");
    serve(SessionManager::new(ctx, 1), HttpConfig::default(), SocketAddr::from(([127, 0, 0, 1], port))).await?;
    Ok(())
}
