use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use jotto::artifacts::{ArtifactError, Artifacts};
use jotto::engine::EngineError;
use jotto::oracle::GuesserSession;
use jotto::{update_state, Dictionary, GameState, HiderStrategy, MixedOracularGuesser, Rejection, TieBreak};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_IDLE_EXPIRY: Duration = Duration::from_secs(24 * 60 * 60);
const PURGE_EVERY: u64 = 64;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("no solve artifacts are loaded")]
    Unavailable,
    #[error("no session with id {0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{message}")]
    Validation {
        message: String,
        reason: Option<Rejection>,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Which side the human plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// The human hides a word and answers the machine's guesses.
    Hider,
    /// The human guesses the machine's secret word.
    Guesser,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Active,
    Finished,
    /// The human's answers ruled out every word.
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub guess: String,
    pub answer: usize,
}

/// What the client sees of a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub role: Role,
    pub status: Status,
    pub transcript: Vec<Move>,
    pub guess_count: usize,
    /// The machine's guess awaiting an answer (human hider only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pending_guess: Option<String>,
    /// Revealed once the game is over.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub secret: Option<String>,
    /// Mixture component the machine guesser committed to, revealed once the game is over.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// Reply to a human guess.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuessOutcome {
    pub answer: usize,
    pub win: bool,
    pub session: SessionView,
}

/// Dictionary size, word length and where the strategies came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub letters: usize,
    pub dictionary_size: usize,
    pub t_star: usize,
    pub eps_star: f64,
    pub iterations: usize,
    pub source: String,
}

/// Read-only game data shared by every session.
#[derive(Debug)]
pub struct GameContext {
    dict: Dictionary,
    mixture: MixedOracularGuesser,
    secret_dist: WeightedIndex<f64>,
    best: HiderStrategy,
    meta: Meta,
}

impl GameContext {
    /// Builds a context from the strategy sequence of a solve. Strategy
    /// `t_star` hides secrets and `0..=t_star` back the machine guesser.
    pub fn new(
        dict: Dictionary,
        strategies: Vec<HiderStrategy>,
        t_star: usize,
        eps_star: f64,
        tie: TieBreak,
        seed: u64,
        source: impl Into<String>,
    ) -> Result<Self, ArtifactError> {
        let iterations = strategies.len().saturating_sub(1);
        let mixture = MixedOracularGuesser::new(strategies, t_star, seed, tie)?;
        let best = mixture.strategies()[t_star].clone();
        if best.len() != dict.len() {
            return Err(ArtifactError::Mismatch(format!(
                "strategy has {} entries, dictionary has {} words",
                best.len(),
                dict.len()
            )));
        }
        let secret_dist = WeightedIndex::new(best.probs())
            .map_err(|e| ArtifactError::Mismatch(format!("unusable hider strategy: {e}")))?;
        let meta = Meta {
            letters: dict.letters(),
            dictionary_size: dict.len(),
            t_star,
            eps_star,
            iterations,
            source: source.into(),
        };
        Ok(GameContext {
            dict,
            mixture,
            secret_dist,
            best,
            meta,
        })
    }

    pub fn from_artifacts(a: Artifacts, seed: u64) -> Result<Self, ArtifactError> {
        let tie = a.tie_break();
        let source = a.dir.display().to_string();
        let iterations = a.summary.iterations_completed;
        let mut ctx = GameContext::new(
            a.dictionary,
            a.strategies,
            a.summary.t_star,
            a.summary.eps_star,
            tie,
            seed,
            source,
        )?;
        ctx.meta.iterations = iterations;
        Ok(ctx)
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    pub fn hider_strategy(&self) -> &HiderStrategy {
        &self.best
    }
}

#[derive(Debug)]
enum Machine {
    Guesser {
        oracle: GuesserSession,
        state: GameState,
        pending: Option<usize>,
    },
    Hider {
        secret: usize,
    },
}

#[derive(Debug)]
struct GameSession {
    id: String,
    role: Role,
    machine: Machine,
    transcript: Vec<(usize, usize)>,
    status: Status,
    last_used: Instant,
}

impl GameSession {
    fn view(&self, dict: &Dictionary) -> SessionView {
        let over = self.status != Status::Active;
        let (pending_guess, secret, sampled_t) = match &self.machine {
            Machine::Guesser { oracle, pending, .. } => (
                pending.map(|g| dict.word(g).to_owned()),
                None,
                over.then(|| oracle.t()),
            ),
            Machine::Hider { secret } => (None, over.then(|| dict.word(*secret).to_owned()), None),
        };
        SessionView {
            id: self.id.clone(),
            role: self.role,
            status: self.status,
            transcript: self
                .transcript
                .iter()
                .map(|&(g, a)| Move {
                    guess: dict.word(g).to_owned(),
                    answer: a,
                })
                .collect(),
            guess_count: self.transcript.len(),
            pending_guess,
            secret,
            sampled_t,
            message: (self.status == Status::Contradiction)
                .then(|| "no consistent words: answers contradict".to_owned()),
        }
    }

    fn check_active(&self) -> Result<(), ServiceError> {
        match self.status {
            Status::Active => Ok(()),
            _ => Err(ServiceError::Conflict(format!("session {} is over", self.id))),
        }
    }
}

#[derive(Serialize)]
struct LogEvent<'a> {
    at: u64,
    session: &'a str,
    event: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    role: Option<Role>,
    #[serde(skip_serializing_if = "Option::is_none")]
    guess: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    answer: Option<usize>,
    status: Status,
}

/// In-memory session store.
///
/// Each session sits behind its own lock, so mutations of one session are
/// serialized while different sessions proceed independently.
#[derive(Debug)]
pub struct SessionManager {
    ctx: Option<Arc<GameContext>>,
    sessions: Mutex<HashMap<String, Arc<Mutex<GameSession>>>>,
    seed: u64,
    counter: AtomicU64,
    idle_expiry: Duration,
    log: Option<Mutex<File>>,
}

impl SessionManager {
    pub fn new(ctx: GameContext, seed: u64) -> Self {
        SessionManager {
            ctx: Some(Arc::new(ctx)),
            sessions: Mutex::default(),
            seed,
            counter: AtomicU64::new(0),
            idle_expiry: DEFAULT_IDLE_EXPIRY,
            log: None,
        }
    }

    /// A manager without artifacts: every new session is refused.
    pub fn unavailable() -> Self {
        SessionManager {
            ctx: None,
            sessions: Mutex::default(),
            seed: 0,
            counter: AtomicU64::new(0),
            idle_expiry: DEFAULT_IDLE_EXPIRY,
            log: None,
        }
    }

    pub fn with_idle_expiry(mut self, expiry: Duration) -> Self {
        self.idle_expiry = expiry;
        self
    }

    /// Appends one JSON line per session event to `path`.
    pub fn with_transcript_log(mut self, path: &Path) -> io::Result<Self> {
        let f = OpenOptions::new().create(true).append(true).open(path)?;
        self.log = Some(Mutex::new(f));
        Ok(self)
    }

    pub fn context(&self) -> Option<&GameContext> {
        self.ctx.as_deref()
    }

    pub fn meta(&self) -> Result<Meta, ServiceError> {
        Ok(self.ctx()?.meta.clone())
    }

    fn ctx(&self) -> Result<&GameContext, ServiceError> {
        self.ctx.as_deref().ok_or(ServiceError::Unavailable)
    }

    pub fn create(&self, role: Role) -> Result<SessionView, ServiceError> {
        let ctx = self.ctx()?;
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(n);
        let id = format!("{:016x}{:016x}", rng.next_u64(), rng.next_u64());
        let machine = match role {
            Role::Hider => {
                let oracle = ctx.mixture.session(n);
                let state = GameState::full(ctx.dict.len());
                let first = oracle.next_guess(&ctx.dict, &state)?;
                Machine::Guesser {
                    oracle,
                    state,
                    pending: Some(first),
                }
            }
            Role::Guesser => Machine::Hider {
                secret: ctx.secret_dist.sample(&mut rng),
            },
        };
        let session = GameSession {
            id: id.clone(),
            role,
            machine,
            transcript: Vec::new(),
            status: Status::Active,
            last_used: Instant::now(),
        };
        let view = session.view(&ctx.dict);
        self.log_event(&LogEvent {
            at: unix_now(),
            session: &id,
            event: "create",
            role: Some(role),
            guess: view.pending_guess.as_deref(),
            answer: None,
            status: Status::Active,
        });
        let mut map = self.sessions.lock().unwrap();
        // Sweeping on every create would make creation linear in the store size.
        if n % PURGE_EVERY == 0 {
            self.purge_expired(&mut map);
        }
        map.insert(id, Arc::new(Mutex::new(session)));
        log::debug!("session {} created, role {role:?}", view.id);
        Ok(view)
    }

    pub fn get(&self, id: &str) -> Result<SessionView, ServiceError> {
        let ctx = self.ctx()?;
        let entry = self.lookup(id)?;
        let mut s = entry.lock().unwrap();
        s.last_used = Instant::now();
        Ok(s.view(&ctx.dict))
    }

    /// The human hider answers the machine's pending guess.
    pub fn answer(&self, id: &str, answer: usize) -> Result<SessionView, ServiceError> {
        let ctx = self.ctx()?;
        let dict = &ctx.dict;
        let entry = self.lookup(id)?;
        let mut guard = entry.lock().unwrap();
        let s = &mut *guard;
        s.last_used = Instant::now();
        if s.role != Role::Hider {
            return Err(ServiceError::Conflict("answers come from the hider; this session's human guesses".into()));
        }
        s.check_active()?;
        if answer > dict.letters() {
            return Err(ServiceError::Validation {
                message: format!("answer must be between 0 and {}, got {answer}", dict.letters()),
                reason: None,
            });
        }
        let Machine::Guesser { oracle, state, pending } = &mut s.machine else {
            unreachable!("hider role always has a machine guesser")
        };
        let guess = pending.take().expect("active guesser session has a pending guess");
        s.transcript.push((guess, answer));
        if answer == dict.letters() {
            s.status = Status::Finished;
        } else {
            *state = update_state(dict, state, guess, answer);
            if state.count() == 0 {
                s.status = Status::Contradiction;
            } else {
                *pending = Some(oracle.next_guess(dict, state)?);
            }
        }
        self.log_event(&LogEvent {
            at: unix_now(),
            session: id,
            event: "answer",
            role: None,
            guess: Some(dict.word(guess)),
            answer: Some(answer),
            status: s.status,
        });
        Ok(s.view(dict))
    }

    /// The human guesser tries a word against the machine's secret.
    pub fn guess(&self, id: &str, word: &str) -> Result<GuessOutcome, ServiceError> {
        let ctx = self.ctx()?;
        let dict = &ctx.dict;
        let entry = self.lookup(id)?;
        let mut s = entry.lock().unwrap();
        s.last_used = Instant::now();
        let Machine::Hider { secret } = s.machine else {
            return Err(ServiceError::Conflict("guesses come from the guesser; this session's human hides".into()));
        };
        s.check_active()?;
        let g = dict.check_word(word).map_err(|reason| ServiceError::Validation {
            message: format!("{:?} {reason}", word.trim()),
            reason: Some(reason),
        })?;
        let answer = dict.common(secret, g) as usize;
        s.transcript.push((g, answer));
        let win = answer == dict.letters();
        if win {
            s.status = Status::Finished;
        }
        self.log_event(&LogEvent {
            at: unix_now(),
            session: id,
            event: "guess",
            role: None,
            guess: Some(dict.word(g)),
            answer: Some(answer),
            status: s.status,
        });
        Ok(GuessOutcome {
            answer,
            win,
            session: s.view(dict),
        })
    }

    /// Number of live sessions after dropping expired ones.
    pub fn live_sessions(&self) -> usize {
        let mut map = self.sessions.lock().unwrap();
        self.purge_expired(&mut map);
        map.len()
    }

    fn lookup(&self, id: &str) -> Result<Arc<Mutex<GameSession>>, ServiceError> {
        let mut map = self.sessions.lock().unwrap();
        let entry = map.get(id).cloned().ok_or_else(|| ServiceError::NotFound(id.to_owned()))?;
        let expired = match entry.try_lock() {
            Ok(s) => s.last_used.elapsed() >= self.idle_expiry,
            Err(_) => false,
        };
        if expired {
            map.remove(id);
            return Err(ServiceError::NotFound(id.to_owned()));
        }
        Ok(entry)
    }

    fn purge_expired(&self, map: &mut HashMap<String, Arc<Mutex<GameSession>>>) {
        let expiry = self.idle_expiry;
        // A session locked by an in-flight request is in use, so it stays.
        map.retain(|_, s| match s.try_lock() {
            Ok(s) => s.last_used.elapsed() < expiry,
            Err(_) => true,
        });
    }

    fn log_event(&self, event: &LogEvent<'_>) {
        let Some(log) = &self.log else { return };
        let mut line = serde_json::to_string(event).expect("log events serialize");
        line.push('\n');
        if let Err(e) = log.lock().unwrap().write_all(line.as_bytes()) {
            log::warn!("transcript log write failed: {e}");
        }
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Loads a solve directory into a ready manager.
pub fn manager_from_dir(dir: impl Into<PathBuf>, seed: u64) -> Result<SessionManager, ArtifactError> {
    let a = Artifacts::load(dir.into())?;
    Ok(SessionManager::new(GameContext::from_artifacts(a, seed)?, seed))
}
