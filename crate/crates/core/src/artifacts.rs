//! On-disk layout of a solve run.
//!
//! ```text
//! <out-dir>/
//!   strategy.txt      one hider strategy per iteration
//!   eps.csv           t,eps_hider,eps_guesser,eps
//!   ing.txt           per-iteration guess counts (only with save_ing)
//!   words.txt         filtered dictionary, index order
//!   source_words.txt  words needed to rebuild the dictionary
//!   summary.json      t*, eps*, dictionary shape, timing
//! ```

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::{Dictionary, DictionaryError};
use crate::engine::{HiderStrategy, TieBreak};
use crate::eval::SolvedStrategies;
use crate::solver::{IterationRecord, SolveArtifacts, SolveSink};
use crate::strategy_file::{self, StrategyFileError};

pub const STRATEGY_FILE: &str = "strategy.txt";
pub const EPS_FILE: &str = "eps.csv";
pub const ING_FILE: &str = "ing.txt";
pub const WORDS_FILE: &str = "words.txt";
pub const SOURCE_FILE: &str = "source_words.txt";
pub const SUMMARY_FILE: &str = "summary.json";

pub const EPS_HEADER: &str = "t,eps_hider,eps_guesser,eps";

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("I/O error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid summary {path}")]
    Summary {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Dictionary(#[from] DictionaryError),
    #[error("invalid strategy file {path}")]
    Strategy {
        path: PathBuf,
        #[source]
        source: StrategyFileError,
    },
    #[error("artifact mismatch: {0}")]
    Mismatch(String),
}

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> ArtifactError + '_ {
    move |source| ArtifactError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreakName {
    LowestIndex,
    ConsistentFirst,
}

impl From<TieBreak> for TieBreakName {
    fn from(t: TieBreak) -> Self {
        match t {
            TieBreak::LowestIndex => TieBreakName::LowestIndex,
            TieBreak::ConsistentFirst => TieBreakName::ConsistentFirst,
        }
    }
}

impl From<TieBreakName> for TieBreak {
    fn from(t: TieBreakName) -> Self {
        match t {
            TieBreakName::LowestIndex => TieBreak::LowestIndex,
            TieBreakName::ConsistentFirst => TieBreak::ConsistentFirst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub letters: usize,
    pub dictionary_size: usize,
    pub iterations_completed: usize,
    pub t_star: usize,
    pub eps_star: f64,
    pub tie_break: TieBreakName,
    pub interrupted: bool,
    pub has_ing: bool,
    pub avg_iteration_secs: f64,
    /// Hider payoff at `t*` when both solved strategies play each other.
    pub self_play_hider_payoff: f64,
}

/// Streams solver output into an artifact directory.
pub struct DirSink {
    dir: PathBuf,
    letters: usize,
    dictionary_size: usize,
    tie_break: TieBreak,
    strategy: BufWriter<File>,
    eps: BufWriter<File>,
    ing: Option<BufWriter<File>>,
}

impl DirSink {
    /// Creates `dir` if needed and writes the dictionary files.
    pub fn create(
        dir: impl AsRef<Path>,
        dict: &Dictionary,
        tie_break: TieBreak,
        save_ing: bool,
    ) -> Result<Self, ArtifactError> {
        let dir = dir.as_ref().to_owned();
        fs::create_dir_all(&dir).map_err(io_at(&dir))?;
        let create = |name: &str| -> Result<BufWriter<File>, ArtifactError> {
            let p = dir.join(name);
            File::create(&p).map(BufWriter::new).map_err(io_at(&p))
        };
        let mut words = create(WORDS_FILE)?;
        dict.write_words(&mut words).map_err(io_at(&dir.join(WORDS_FILE)))?;
        let mut source = create(SOURCE_FILE)?;
        dict.write_source(&mut source).map_err(io_at(&dir.join(SOURCE_FILE)))?;
        let strategy = create(STRATEGY_FILE)?;
        let mut eps = create(EPS_FILE)?;
        writeln!(eps, "{EPS_HEADER}").map_err(io_at(&dir.join(EPS_FILE)))?;
        let ing = if save_ing { Some(create(ING_FILE)?) } else { None };
        Ok(DirSink {
            dir,
            letters: dict.letters(),
            dictionary_size: dict.len(),
            tie_break,
            strategy,
            eps,
            ing,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

impl SolveSink for DirSink {
    fn strategy(&mut self, _t: usize, s: &HiderStrategy) -> io::Result<()> {
        strategy_file::write_strategy_line(&mut self.strategy, s)
    }

    fn iteration(&mut self, r: &IterationRecord<'_>) -> io::Result<()> {
        writeln!(
            self.eps,
            "{},{},{},{}",
            r.t, r.eps.eps_hider, r.eps.eps_guesser, r.eps.eps
        )?;
        if let Some(ing) = &mut self.ing {
            strategy_file::write_ing_line(ing, r.ing)?;
        }
        Ok(())
    }

    fn finish(&mut self, a: &SolveArtifacts) -> io::Result<()> {
        self.strategy.flush()?;
        self.eps.flush()?;
        if let Some(ing) = &mut self.ing {
            ing.flush()?;
        }
        let summary = Summary {
            letters: self.letters,
            dictionary_size: self.dictionary_size,
            iterations_completed: a.last_iteration(),
            t_star: a.best_iteration,
            eps_star: a.best_eps,
            tie_break: self.tie_break.into(),
            interrupted: a.interrupted,
            has_ing: self.ing.is_some(),
            avg_iteration_secs: a.avg_iteration.as_secs_f64(),
            self_play_hider_payoff: a.self_play_hider_payoff(),
        };
        let text = serde_json::to_string_pretty(&summary).map_err(io::Error::other)?;
        fs::write(self.dir.join(SUMMARY_FILE), text + "\n")
    }
}

/// A finished solve loaded back from disk, truncated to iterations `0..=t*`.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub dir: PathBuf,
    pub dictionary: Dictionary,
    pub summary: Summary,
    pub strategies: Vec<HiderStrategy>,
    pub ing_history: Option<Vec<Vec<u32>>>,
}

impl Artifacts {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, ArtifactError> {
        let dir = dir.as_ref().to_owned();
        let summary = read_summary(&dir)?;
        let dictionary = Dictionary::from_path(dir.join(SOURCE_FILE), summary.letters)?;
        if dictionary.len() != summary.dictionary_size {
            return Err(ArtifactError::Mismatch(format!(
                "summary says {} words, {} rebuilds {}",
                summary.dictionary_size,
                SOURCE_FILE,
                dictionary.len()
            )));
        }
        let strategies = load_strategies(&dir.join(STRATEGY_FILE), summary.t_star)?;
        if strategies[0].len() != dictionary.len() {
            return Err(ArtifactError::Mismatch(format!(
                "strategy file has {} fields per line, dictionary has {} words",
                strategies[0].len(),
                dictionary.len()
            )));
        }
        let ing_history = if summary.has_ing {
            let p = dir.join(ING_FILE);
            let f = File::open(&p).map_err(io_at(&p))?;
            let rows = strategy_file::read_ing_history(BufReader::new(f), Some(summary.t_star + 1))
                .map_err(|source| ArtifactError::Strategy { path: p, source })?;
            Some(rows)
        } else {
            None
        };
        Ok(Artifacts {
            dir,
            dictionary,
            summary,
            strategies,
            ing_history,
        })
    }

    pub fn t_star(&self) -> usize {
        self.summary.t_star
    }

    pub fn best_hider_strategy(&self) -> &HiderStrategy {
        &self.strategies[self.summary.t_star]
    }

    pub fn tie_break(&self) -> TieBreak {
        self.summary.tie_break.into()
    }

    /// Evaluation inputs backed by this directory.
    pub fn solved(&self) -> SolvedStrategies<'_> {
        SolvedStrategies {
            strategies: &self.strategies,
            ing_history: self.ing_history.as_deref(),
            eps_star: self.summary.eps_star,
            self_play_hider_payoff: self.summary.self_play_hider_payoff,
            iterations: self.summary.iterations_completed,
            avg_iteration: Duration::from_secs_f64(self.summary.avg_iteration_secs),
        }
    }
}

pub fn read_summary(dir: &Path) -> Result<Summary, ArtifactError> {
    let p = dir.join(SUMMARY_FILE);
    let text = fs::read_to_string(&p).map_err(io_at(&p))?;
    serde_json::from_str(&text).map_err(|source| ArtifactError::Summary { path: p, source })
}

/// Reads strategies `0..=t_star` from a strategy file.
pub fn load_strategies(path: &Path, t_star: usize) -> Result<Vec<HiderStrategy>, ArtifactError> {
    let f = File::open(path).map_err(io_at(path))?;
    strategy_file::read_strategies(BufReader::new(f), Some(t_star + 1)).map_err(|source| {
        ArtifactError::Strategy {
            path: path.to_owned(),
            source,
        }
    })
}
