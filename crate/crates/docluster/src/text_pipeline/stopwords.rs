//! Stopword lists: high-frequency function words removed before weighting.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Embedded default list, same file format as user-supplied lists.
const BUILTIN: &str = include_str!("../../data/stopwords.txt");

/// Where a stopword list came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopwordSource {
    Builtin,
    File(PathBuf),
}

impl fmt::Display for StopwordSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopwordSource::Builtin => f.write_str("builtin"),
            StopwordSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// A set of lowercase words to drop from token streams.
///
/// Membership is case-insensitive: entries are lowercased when the list is
/// parsed and queries are lowercased before lookup.
#[derive(Debug, Clone)]
pub struct StopwordList {
    words: BTreeSet<String>,
    source: StopwordSource,
}

impl StopwordList {
    /// The builtin list of common English function words (~125 entries).
    pub fn builtin() -> Self {
        StopwordList {
            words: parse(BUILTIN),
            source: StopwordSource::Builtin,
        }
    }

    /// Load a list from a UTF-8 file: one word per line, `#` lines ignored.
    pub fn from_file(path: &Path) -> io::Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(StopwordList {
            words: parse(&text),
            source: StopwordSource::File(path.to_path_buf()),
        })
    }

    /// Build a list from an explicit word set (mainly for tests).
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopwordList {
            words: words
                .into_iter()
                .map(|w| w.as_ref().to_lowercase())
                .collect(),
            source: StopwordSource::Builtin,
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        if word.chars().any(char::is_uppercase) {
            self.words.contains(&word.to_lowercase())
        } else {
            self.words.contains(word)
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source(&self) -> &StopwordSource {
        &self.source
    }
}

fn parse(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn builtin_contains_core_words() {
        let list = StopwordList::builtin();
        for w in ["a", "an", "the", "how", "when"] {
            assert!(list.contains(w), "builtin list must contain {w:?}");
        }
        assert!(list.len() >= 120);
        assert_eq!(*list.source(), StopwordSource::Builtin);
    }

    #[test]
    fn membership_is_case_insensitive() {
        let list = StopwordList::builtin();
        assert!(list.contains("The"));
        assert!(list.contains("WHEN"));
        assert!(!list.contains("badminton"));
    }

    #[test]
    fn file_format_skips_comments_and_blanks() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# custom list\n\nfoo\nBar\n  baz  ").unwrap();
        let list = StopwordList::from_file(f.path()).unwrap();
        assert_eq!(list.len(), 3);
        assert!(list.contains("foo"));
        assert!(list.contains("bar"));
        assert!(list.contains("baz"));
        assert!(!list.contains("#"));
    }
}
