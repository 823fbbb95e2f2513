//! Word lists used by the encoder: adparticles, personal particles and the
//! common-name prefix lexicon, plus the builder that derives prefixes from a
//! word-frequency list and a list of author names.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

const BUNDLED_ADPARTICLES: &str = include_str!("../data/adparticles.txt");
const BUNDLED_PARTICLES: &str = include_str!("../data/particles.txt");
const BUNDLED_PREFIXES: &str = include_str!("../data/prefixes.txt");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: invalid entry {entry:?} (letters only)")]
    InvalidEntry { line: usize, entry: String },
    #[error("line {line}: malformed frequency line: {reason}")]
    MalformedFrequency { line: usize, reason: String },
    #[error("prefix {prefix:?} is a prefix of author name {name:?}")]
    PrefixOfAuthor { prefix: String, name: String },
    #[error("invalid lexicon entry {0:?} (letters only)")]
    BadWord(String),
}

/// Characters allowed inside a lexicon entry.
fn is_entry_char(c: char) -> bool {
    c.is_alphabetic()
        || c == '-'
        || c == '\''
        || c == '\u{2019}'
        || ('\u{0300}'..='\u{036F}').contains(&c)
}

fn valid_entry(entry: &str) -> bool {
    entry.chars().next().is_some_and(char::is_alphabetic) && entry.chars().all(is_entry_char)
}

/// Iterates `(line_number, content)` with comments stripped and whitespace
/// trimmed, skipping blank lines.
fn content_lines(source: &str) -> impl Iterator<Item = (usize, &str)> {
    source.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or_default().trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Parses a one-entry-per-line lexicon. Entries are case-folded and
/// deduplicated; file order is kept.
pub fn load_lexicon(source: &str) -> Result<Vec<String>, LexiconError> {
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for (line, entry) in content_lines(source) {
        if !valid_entry(entry) {
            return Err(LexiconError::InvalidEntry {
                line,
                entry: entry.to_string(),
            });
        }
        let folded = entry.to_lowercase();
        if seen.insert(folded.clone()) {
            entries.push(folded);
        }
    }
    Ok(entries)
}

/// A common-word candidate and how often it occurs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixCandidate {
    pub word: String,
    pub frequency: u64,
}

impl PrefixCandidate {
    pub fn new(word: impl Into<String>, frequency: u64) -> Self {
        PrefixCandidate {
            word: word.into(),
            frequency,
        }
    }
}

/// Parses `word<TAB>count` lines, same comment rules as [`load_lexicon`].
pub fn parse_frequency_list(source: &str) -> Result<Vec<PrefixCandidate>, LexiconError> {
    content_lines(source)
        .map(|(line, content)| {
            let malformed = |reason: &str| LexiconError::MalformedFrequency {
                line,
                reason: reason.to_string(),
            };
            let (word, count) = content
                .split_once('\t')
                .ok_or_else(|| malformed("expected word<TAB>count"))?;
            let word = word.trim();
            if !valid_entry(word) {
                return Err(malformed(&format!("{word:?} is not a word")));
            }
            let frequency = count
                .trim()
                .parse::<u64>()
                .map_err(|e| malformed(&format!("count {:?}: {e}", count.trim())))?;
            Ok(PrefixCandidate::new(word.to_lowercase(), frequency))
        })
        .collect()
}

/// Character trie.
#[derive(Clone, Debug, Default)]
struct Trie {
    nodes: Vec<TrieNode>,
}

#[derive(Clone, Debug, Default)]
struct TrieNode {
    children: HashMap<char, usize>,
    terminal: bool,
}

impl Trie {
    fn new() -> Self {
        Trie {
            nodes: vec![TrieNode::default()],
        }
    }

    fn insert(&mut self, word: &str) {
        let mut node = 0;
        for c in word.chars() {
            node = match self.nodes[node].children.get(&c) {
                Some(&next) => next,
                None => {
                    let next = self.nodes.len();
                    self.nodes.push(TrieNode::default());
                    self.nodes[node].children.insert(c, next);
                    next
                }
            };
        }
        self.nodes[node].terminal = true;
    }

    /// Number of leading chars of `word` that can be walked in the trie.
    fn walk(&self, word: &str) -> usize {
        let mut node = 0;
        let mut depth = 0;
        for c in word.chars() {
            match self.nodes.get(node).and_then(|n| n.children.get(&c)) {
                Some(&next) => {
                    node = next;
                    depth += 1;
                }
                None => break,
            }
        }
        depth
    }

    /// True when some inserted entry is a prefix of `word`.
    fn contains_prefix_of(&self, word: &str) -> bool {
        let mut node = 0;
        for c in word.chars() {
            match self.nodes.get(node).and_then(|n| n.children.get(&c)) {
                Some(&next) => {
                    if self.nodes[next].terminal {
                        return true;
                    }
                    node = next;
                }
                None => return false,
            }
        }
        false
    }
}

/// Case-folded author names arranged for prefix queries.
#[derive(Clone, Debug, Default)]
pub struct AuthorPrefixIndex {
    trie: Trie,
    names: Vec<String>,
}

impl AuthorPrefixIndex {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut trie = Trie::new();
        let mut names: Vec<String> = names
            .into_iter()
            .map(|n| n.as_ref().to_lowercase())
            .collect();
        names.sort();
        names.dedup();
        for name in &names {
            trie.insert(name);
        }
        AuthorPrefixIndex { trie, names }
    }

    /// True when `prefix` starts at least one name.
    pub fn is_author_prefix(&self, prefix: &str) -> bool {
        self.trie.walk(prefix) == prefix.chars().count()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The shortest prefix of `word` that starts no author name, if any.
    pub fn shortest_nonauthor_prefix(&self, word: &str) -> Option<String> {
        let depth = self.trie.walk(word);
        let len = word.chars().count();
        (depth < len).then(|| word.chars().take(depth + 1).collect())
    }
}

/// See [`AuthorPrefixIndex::shortest_nonauthor_prefix`].
pub fn shortest_nonauthor_prefix(word: &str, author_names: &AuthorPrefixIndex) -> Option<String> {
    author_names.shortest_nonauthor_prefix(&word.to_lowercase())
}

/// A lexicon prefix with the cumulative frequency of the words it covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixEntry {
    pub prefix: String,
    pub frequency: u64,
}

/// Maps every candidate to its shortest non-author prefix, sums frequencies
/// per prefix and keeps the `top_k` most frequent. Ties are broken by the
/// prefix text.
pub fn build_prefix_lexicon(
    candidates: &[PrefixCandidate],
    author_names: &AuthorPrefixIndex,
    top_k: usize,
) -> Vec<PrefixEntry> {
    if top_k == 0 {
        return Vec::new();
    }
    let mut totals: BTreeMap<String, u64> = BTreeMap::new();
    for candidate in candidates {
        if let Some(prefix) = shortest_nonauthor_prefix(&candidate.word, author_names) {
            *totals.entry(prefix).or_default() += candidate.frequency;
        }
    }
    let mut ranked: Vec<PrefixEntry> = totals
        .into_iter()
        .map(|(prefix, frequency)| PrefixEntry { prefix, frequency })
        .collect();
    // BTreeMap order is already lexicographic; a stable sort keeps it for ties.
    ranked.sort_by_key(|e| std::cmp::Reverse(e.frequency));
    ranked.truncate(top_k);
    ranked
}

/// The three word lists consumed by the encoder.
#[derive(Clone, Debug, Default)]
pub struct LexiconSet {
    pub adparticles: BTreeSet<String>,
    pub personal_particles: BTreeSet<String>,
    prefixes: Vec<String>,
    prefix_trie: Trie,
}

impl LexiconSet {
    pub fn new(
        adparticles: BTreeSet<String>,
        personal_particles: BTreeSet<String>,
        prefixes: Vec<String>,
    ) -> Result<Self, LexiconError> {
        let fold = |set: BTreeSet<String>| -> Result<BTreeSet<String>, LexiconError> {
            set.into_iter()
                .map(|w| {
                    if valid_entry(&w) {
                        Ok(w.to_lowercase())
                    } else {
                        Err(LexiconError::BadWord(w))
                    }
                })
                .collect()
        };
        let adparticles = fold(adparticles)?;
        let personal_particles = fold(personal_particles)?;
        let prefixes = fold(prefixes.into_iter().collect())?;
        Ok(LexiconSet {
            adparticles,
            personal_particles,
            prefixes: Vec::new(),
            prefix_trie: Trie::new(),
        }
        .with_prefixes(prefixes))
    }

    /// The lists shipped with the crate.
    pub fn bundled() -> Self {
        let load = |src| load_lexicon(src).expect("bundled lexicon is valid");
        LexiconSet::new(
            load(BUNDLED_ADPARTICLES).into_iter().collect(),
            load(BUNDLED_PARTICLES).into_iter().collect(),
            load(BUNDLED_PREFIXES),
        )
        .expect("bundled lexicon is valid")
    }

    /// The bundled lists, parsed once and shared.
    pub fn bundled_shared() -> Arc<LexiconSet> {
        static SHARED: OnceLock<Arc<LexiconSet>> = OnceLock::new();
        Arc::clone(SHARED.get_or_init(|| Arc::new(LexiconSet::bundled())))
    }

    /// Raw text of the bundled prefix file, in frequency-rank order.
    pub fn bundled_prefix_source() -> &'static str {
        BUNDLED_PREFIXES
    }

    pub fn without_prefixes(self) -> Self {
        self.with_prefixes(BTreeSet::new())
    }

    fn with_prefixes(mut self, prefixes: BTreeSet<String>) -> Self {
        let mut trie = Trie::new();
        for p in &prefixes {
            trie.insert(p);
        }
        self.prefixes = prefixes.into_iter().collect();
        self.prefix_trie = trie;
        self
    }

    pub fn with_adparticles(mut self, words: Vec<String>) -> Self {
        self.adparticles = words.into_iter().collect();
        self
    }

    pub fn with_personal_particles(mut self, words: Vec<String>) -> Self {
        self.personal_particles = words.into_iter().collect();
        self
    }

    /// Replaces the prefix lexicon; entries must already be valid
    /// (e.g. produced by [`load_lexicon`]).
    pub fn with_prefix_list(self, prefixes: Vec<String>) -> Self {
        self.with_prefixes(prefixes.into_iter().map(|p| p.to_lowercase()).collect())
    }

    /// Sorted, deduplicated prefixes.
    pub fn prefixes(&self) -> &[String] {
        &self.prefixes
    }

    /// True when a lexicon prefix starts the case-folded `word`.
    pub fn has_prefix_of(&self, word: &str) -> bool {
        !self.prefixes.is_empty() && self.prefix_trie.contains_prefix_of(word)
    }

    /// Fails when some prefix would lowercase one of the given names.
    pub fn verify_against(&self, names: &AuthorPrefixIndex) -> Result<(), LexiconError> {
        for prefix in &self.prefixes {
            if names.is_author_prefix(prefix) {
                let name = names
                    .names()
                    .iter()
                    .find(|n| n.starts_with(prefix.as_str()))
                    .cloned()
                    .unwrap_or_default();
                return Err(LexiconError::PrefixOfAuthor {
                    prefix: prefix.clone(),
                    name,
                });
            }
        }
        Ok(())
    }
}
