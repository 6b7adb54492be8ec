//! Live Jotto games against solved strategies.
//!
//! [`SessionManager`] holds sessions in memory. A human either hides a word
//! and answers the machine guesser, or guesses the machine's secret, which is
//! drawn from the solved hider strategy. [`http::router`] exposes the manager
//! as a JSON API:
//!
//! | method | path | body |
//! |---|---|---|
//! | `POST` | `/sessions` | `{"role": "hider" \| "guesser"}` |
//! | `POST` | `/sessions/{id}/answer` | `{"answer": n}` |
//! | `POST` | `/sessions/{id}/guess` | `{"word": "..."}` |
//! | `GET` | `/sessions/{id}` | |
//! | `GET` | `/meta` | |

pub mod http;
pub mod session;

pub use http::{router, serve, HttpConfig};
pub use session::{
    manager_from_dir, GameContext, GuessOutcome, Meta, Move, Role, ServiceError, SessionManager, SessionView,
    Status,
};
