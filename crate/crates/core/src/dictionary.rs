//! Word lists restricted to the playable Jotto vocabulary.
//!
//! A playable word has `L` distinct letters and no anagram among the other
//! candidates. When several candidates share a letter multiset, every one of
//! them is dropped. Surviving words are sorted so that word indices (and
//! everything derived from them) are stable across runs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("failed to read dictionary {path}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("word length must be between 1 and 26, got {0}")]
    InvalidLength(usize),
    #[error("empty dictionary: no {letters}-letter words survive filtering")]
    Empty { letters: usize },
}

/// Why a candidate string is not a playable word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    Length,
    NonAlphabetic,
    DuplicateLetters,
    AnagramExcluded,
    Unknown,
}

impl Rejection {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            Rejection::Length => "length",
            Rejection::NonAlphabetic => "non_alphabetic",
            Rejection::DuplicateLetters => "duplicate_letters",
            Rejection::AnagramExcluded => "anagram_excluded",
            Rejection::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rejection::Length => "wrong length",
            Rejection::NonAlphabetic => "contains characters outside A-Z",
            Rejection::DuplicateLetters => "has duplicate letters",
            Rejection::AnagramExcluded => "excluded because an anagram is also a word",
            Rejection::Unknown => "not in the dictionary",
        };
        f.write_str(s)
    }
}

/// Counts of input lines that did not become dictionary words.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FilterStats {
    /// Lines that were blank, the wrong length or not alphabetic.
    pub skipped_lines: usize,
    pub duplicate_letters: usize,
    pub anagram_excluded: usize,
}

/// A filtered word list of fixed length together with its common-letter table.
#[derive(Debug, Clone)]
pub struct Dictionary {
    letters: usize,
    words: Vec<String>,
    masks: Vec<u32>,
    comm: Vec<u8>,
    anagram_excluded: BTreeSet<String>,
    stats: FilterStats,
}

/// Number of common letters between two words, counting every pair of equal
/// characters. For words with distinct letters this is the size of the
/// intersection of their letter sets.
pub fn num_common_letters(a: &str, b: &str) -> usize {
    a.bytes()
        .map(|ca| b.bytes().filter(|&cb| cb == ca).count())
        .sum()
}

fn letter_mask(word: &str) -> u32 {
    word.bytes().fold(0, |m, c| m | 1 << (c - b'A'))
}

fn normalize(line: &str) -> String {
    line.trim().to_uppercase()
}

fn shape_check(word: &str, letters: usize) -> Result<(), Rejection> {
    if !word.bytes().all(|c| c.is_ascii_uppercase()) {
        return Err(Rejection::NonAlphabetic);
    }
    if word.len() != letters {
        return Err(Rejection::Length);
    }
    if letter_mask(word).count_ones() as usize != letters {
        return Err(Rejection::DuplicateLetters);
    }
    Ok(())
}

impl Dictionary {
    /// Reads one word per line (LF or CRLF) and keeps the playable
    /// `letters`-letter words.
    pub fn from_reader<R: BufRead>(reader: R, letters: usize) -> Result<Self, DictionaryError> {
        let mut lines = Vec::new();
        for line in reader.lines() {
            lines.push(line.map_err(|source| DictionaryError::Io {
                path: "<stream>".into(),
                source,
            })?);
        }
        Self::from_words(lines, letters)
    }

    pub fn from_path(path: impl AsRef<Path>, letters: usize) -> Result<Self, DictionaryError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| DictionaryError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_reader(BufReader::new(file), letters).map_err(|e| match e {
            DictionaryError::Io { source, .. } => DictionaryError::Io {
                path: path.display().to_string(),
                source,
            },
            other => other,
        })
    }

    pub fn from_words<I, S>(raw: I, letters: usize) -> Result<Self, DictionaryError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        if letters == 0 || letters > 26 {
            return Err(DictionaryError::InvalidLength(letters));
        }
        let mut stats = FilterStats::default();
        let mut candidates = BTreeSet::new();
        for line in raw {
            let word = normalize(line.as_ref());
            match shape_check(&word, letters) {
                Ok(()) => {
                    candidates.insert(word);
                }
                Err(Rejection::DuplicateLetters) => stats.duplicate_letters += 1,
                Err(_) => stats.skipped_lines += 1,
            }
        }

        let mut by_letters: BTreeMap<u32, Vec<String>> = BTreeMap::new();
        for word in candidates {
            by_letters.entry(letter_mask(&word)).or_default().push(word);
        }
        let mut words = Vec::new();
        let mut anagram_excluded = BTreeSet::new();
        for (_, mut class) in by_letters {
            if class.len() == 1 {
                words.push(class.pop().unwrap());
            } else {
                stats.anagram_excluded += class.len();
                anagram_excluded.extend(class);
            }
        }
        if words.is_empty() {
            return Err(DictionaryError::Empty { letters });
        }
        words.sort();
        if stats.skipped_lines > 0 {
            log::debug!(
                "skipped {} input lines that are not {}-letter alphabetic words",
                stats.skipped_lines,
                letters
            );
        }

        let masks: Vec<u32> = words.iter().map(|w| letter_mask(w)).collect();
        let d = words.len();
        let mut comm = vec![0u8; d * d];
        for i in 0..d {
            for j in i..d {
                let c = (masks[i] & masks[j]).count_ones() as u8;
                comm[i * d + j] = c;
                comm[j * d + i] = c;
            }
        }
        Ok(Dictionary {
            letters,
            words,
            masks,
            comm,
            anagram_excluded,
            stats,
        })
    }

    /// Word length `L`.
    pub fn letters(&self) -> usize {
        self.letters
    }

    /// Number of words `D`.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, index: usize) -> &str {
        &self.words[index]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.words.binary_search_by(|w| w.as_str().cmp(word)).ok()
    }

    pub fn stats(&self) -> FilterStats {
        self.stats
    }

    /// Precomputed common-letter count between words `i` and `j`.
    #[inline]
    pub fn common(&self, i: usize, j: usize) -> u8 {
        self.comm[i * self.words.len() + j]
    }

    /// Row `i` of the common-letter table.
    #[inline]
    pub fn common_row(&self, i: usize) -> &[u8] {
        let d = self.words.len();
        &self.comm[i * d..(i + 1) * d]
    }

    /// Bitmask of the letters of word `i` (bit 0 = 'A').
    pub fn letter_mask(&self, index: usize) -> u32 {
        self.masks[index]
    }

    /// Looks up a guess typed by a player, explaining why it is rejected.
    pub fn check_word(&self, word: &str) -> Result<usize, Rejection> {
        let word = normalize(word);
        shape_check(&word, self.letters)?;
        if let Some(i) = self.index_of(&word) {
            return Ok(i);
        }
        if self.anagram_excluded.contains(&word) {
            Err(Rejection::AnagramExcluded)
        } else {
            Err(Rejection::Unknown)
        }
    }

    /// Writes the filtered words one per line in index order.
    pub fn write_words<W: Write>(&self, mut out: W) -> io::Result<()> {
        for w in &self.words {
            writeln!(out, "{w}")?;
        }
        out.flush()
    }

    /// Writes the words this dictionary was built from that are needed to
    /// rebuild it exactly, including the anagram-excluded ones.
    pub fn write_source<W: Write>(&self, mut out: W) -> io::Result<()> {
        let all: BTreeSet<&String> = self.words.iter().chain(&self.anagram_excluded).collect();
        for w in all {
            writeln!(out, "{w}")?;
        }
        out.flush()
    }
}
