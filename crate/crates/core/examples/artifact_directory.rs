//! Writing a solve to disk and loading it back, as the command-line tool and
//! the game service do.
//!
//! ```text
//! cargo run -p jotto --example artifact_directory -- /tmp/jotto-2
//! ```

use jotto::artifacts::{Artifacts, DirSink};
use jotto::{eval, solve, twl06, SolveConfig, TieBreak, WorkerPool};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "jotto-out".into());
    let d = twl06(2)?;
    let mut sink = DirSink::create(&dir, &d, TieBreak::default(), true)?;
    solve(&d, &SolveConfig::new(500), &mut sink)?;
    drop(sink);

    for entry in std::fs::read_dir(&dir)? {
        let entry = entry?;
        println!("{:>10}  {}", entry.metadata()?.len(), entry.file_name().to_string_lossy());
    }

    let loaded = Artifacts::load(&dir)?;
    println!("\nt* = {}, eps* = {:.4}", loaded.t_star(), loaded.summary.eps_star);
    let report = eval::evaluate(&loaded.dictionary, &loaded.solved(), loaded.tie_break(), &WorkerPool::sequential())?;
    print!("{}", eval::format_table(&[report]));
    Ok(())
}
