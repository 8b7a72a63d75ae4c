//! A small, fixed-rule suffix stemmer.
//!
//! This is deliberately not Porter or Snowball. A single suffix rule is
//! applied per token, picked longest-suffix-first from a fixed table:
//!
//! | suffix  | replacement | guards                                         |
//! |---------|-------------|------------------------------------------------|
//! | `-sses` | `-ss`       |                                                |
//! | `-ies`  | `-y`        | token length ≥ 4                               |
//! | `-ing`  | (removed)   | remaining stem ≥ 2 chars and contains a vowel  |
//! | `-ed`   | (removed)   | same, and the stem must not end in `e`         |
//! | `-s`    | (removed)   | token length > 3 and token does not end in `ss`|
//!
//! After `-ing`/`-ed` removal the stripped stem is looked up in a restore
//! table (`defin` → `define`, `runn` → `run`, ...) so that forms which
//! dropped a final `e` or doubled a consonant come back out whole.
//!
//! The output must itself be a fixed point of the table: if the stripped
//! form would still match a rule, the token is returned unchanged instead.
//! That conservative check makes `stem` idempotent for every input, which
//! callers rely on when re-processing already-stemmed text.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::Path;

/// Embedded default restore table, same file format as user-supplied ones.
const BUILTIN_EXCEPTIONS: &str = include_str!("../../data/stem_exceptions.tsv");

/// Rule-table stemmer with a restore dictionary for `-ing`/`-ed` strips.
#[derive(Debug, Clone)]
pub struct Stemmer {
    exceptions: HashMap<String, String>,
}

impl Default for Stemmer {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Stemmer {
    /// Stemmer with the embedded restore table.
    pub fn builtin() -> Self {
        Stemmer {
            exceptions: parse_exceptions(BUILTIN_EXCEPTIONS),
        }
    }

    /// Load a restore table from a UTF-8 file: one
    /// `stripped-form<TAB>restored-form` pair per line, `#` lines ignored.
    pub fn from_exceptions_file(path: &Path) -> io::Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(Stemmer {
            exceptions: parse_exceptions(&text),
        })
    }

    /// Stemmer with no restore table (suffix rules only).
    pub fn without_exceptions() -> Self {
        Stemmer {
            exceptions: HashMap::new(),
        }
    }

    /// Reduce a lowercase token to its stem. Idempotent and total.
    pub fn stem(&self, token: &str) -> String {
        match self.strip_once(token) {
            Some(stripped) if self.strip_once(&stripped).is_none() => stripped,
            _ => token.to_string(),
        }
    }

    /// Apply the longest matching suffix rule, or None when no rule fires.
    fn strip_once(&self, token: &str) -> Option<String> {
        let n = token.chars().count();
        if let Some(head) = token.strip_suffix("sses") {
            return Some(format!("{head}ss"));
        }
        if n >= 4 {
            if let Some(head) = token.strip_suffix("ies") {
                return Some(format!("{head}y"));
            }
        }
        if let Some(head) = token.strip_suffix("ing") {
            if strippable(head) {
                return Some(self.restore(head));
            }
        }
        if let Some(head) = token.strip_suffix("ed") {
            if strippable(head) && !head.ends_with('e') {
                return Some(self.restore(head));
            }
        }
        if n > 3 && !token.ends_with("ss") {
            if let Some(head) = token.strip_suffix('s') {
                return Some(head.to_string());
            }
        }
        None
    }

    fn restore(&self, stem: &str) -> String {
        match self.exceptions.get(stem) {
            Some(restored) => restored.clone(),
            None => stem.to_string(),
        }
    }
}

fn strippable(stem: &str) -> bool {
    stem.chars().count() >= 2 && stem.chars().any(is_vowel)
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn parse_exceptions(text: &str) -> HashMap<String, String> {
    text.lines()
        .map(str::trim_end)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| {
            let (stripped, restored) = l.split_once('\t')?;
            Some((stripped.to_lowercase(), restored.to_lowercase()))
        })
        .collect()
}
