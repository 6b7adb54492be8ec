//! Both game modes driven through the session manager, without HTTP.
//!
//! ```text
//! cargo run -p jotto-service --example play_session
//! ```

use jotto::{solve, twl06, MemorySink, SolveConfig, TieBreak};
use jotto_service::{GameContext, Role, SessionManager, Status};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = twl06(2)?;
    let mut sink = MemorySink::default();
    let a = solve(&d, &SolveConfig::new(300), &mut sink)?;
    let ctx = GameContext::new(d.clone(), sink.strategies, a.best_iteration, a.best_eps, TieBreak::default(), 11, "example")?;
    let m = SessionManager::new(ctx, 11);

    // Human hides "OX" and answers honestly.
    let secret = "OX";
    let mut s = m.create(Role::Hider)?;
    while s.status == Status::Active {
        let guess = s.pending_guess.clone().unwrap();
        let answer = jotto::num_common_letters(&guess, secret);
        println!("machine guesses {guess}, human answers {answer}");
        s = m.answer(&s.id, answer)?;
    }
    println!("found in {} guesses (committed to iterate {})\n", s.guess_count, s.sampled_t.unwrap());

    // Human guesses the machine's word by trying words in order.
    let s = m.create(Role::Guesser)?;
    for w in d.words() {
        let out = m.guess(&s.id, w)?;
        if out.win {
            println!("machine was hiding {}, found after {} guesses", out.session.secret.unwrap(), out.session.guess_count);
            break;
        }
    }
    Ok(())
}
