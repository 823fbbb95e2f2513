//! Independent reference implementations used by the property tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::LazyLock;

/// Author templates as printed, in their original order.
pub const LOWER: [&str; 11] = [
    "nIn", "nIIn", "In", "Inn", "IIn", "IIIn", "nInn", "nnIn", "IInn", "nn", "nnn",
];
pub const UPPER: [&str; 11] = [
    "[nN]IN",
    "[nN]IIN",
    "IN",
    "I[nN]N",
    "IIN",
    "IIIN",
    "[nN]I[nN]N",
    "[nN]NIN",
    "II[nN]N",
    "[nN]N",
    "[nN][nN]N",
];

pub fn templates(upper: bool) -> &'static [&'static str; 11] {
    if upper {
        &UPPER
    } else {
        &LOWER
    }
}

fn expand(template: &str) -> String {
    template.replace('I', "(?:Ip?)")
}

fn alternation(upper: bool) -> String {
    let alts: Vec<String> = templates(upper).iter().map(|t| expand(t)).collect();
    format!("(?:{})", alts.join("|"))
}

/// The single-block layout as a Perl-style regex with lookahead.
pub fn block_regex(upper: bool) -> fancy_regex::Regex {
    let a = alternation(upper);
    fancy_regex::Regex::new(&format!("L{a}(?:[,;&L]+{a})*(?=L)")).unwrap()
}

static BLOCK_REGEXES: LazyLock<[fancy_regex::Regex; 2]> =
    LazyLock::new(|| [block_regex(false), block_regex(true)]);
static AUTHOR_ORACLES: LazyLock<[AuthorOracle; 2]> =
    LazyLock::new(|| [AuthorOracle::new(false), AuthorOracle::new(true)]);

/// Compiled once per process.
pub fn cached_block_regex(upper: bool) -> &'static fancy_regex::Regex {
    &BLOCK_REGEXES[usize::from(upper)]
}

/// Compiled once per process.
pub fn cached_author_oracle(upper: bool) -> &'static AuthorOracle {
    &AUTHOR_ORACLES[usize::from(upper)]
}

/// Block spans (leading line break excluded) found by `regex`.
pub fn oracle_blocks(regex: &fancy_regex::Regex, codes: &str) -> Vec<(usize, usize)> {
    regex
        .find_iter(codes)
        .map(|m| {
            let m = m.unwrap();
            (m.start() + 1, m.end())
        })
        .collect()
}

pub struct AuthorOracle {
    anchored: Vec<regex::Regex>,
}

impl AuthorOracle {
    pub fn new(upper: bool) -> Self {
        AuthorOracle {
            anchored: templates(upper)
                .iter()
                .map(|t| regex::Regex::new(&format!("^(?:{})", expand(t))).unwrap())
                .collect(),
        }
    }

    /// Longest alternative matching at `at`, as (end, template index).
    pub fn longest_at(&self, codes: &str, at: usize) -> Option<(usize, usize)> {
        self.anchored
            .iter()
            .enumerate()
            .filter_map(|(i, re)| re.find(&codes[at..]).map(|m| (at + m.end(), i)))
            .max_by_key(|&(end, _)| end)
    }

    /// True when `codes` is exactly one author.
    pub fn full_match(&self, codes: &str) -> Option<usize> {
        self.longest_at(codes, 0)
            .filter(|&(end, _)| end == codes.len())
            .map(|(_, i)| i)
    }

    /// Non-overlapping leftmost-longest author matches: (start, end, template).
    pub fn scan(&self, codes: &str) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut at = 0;
        while at < codes.len() {
            match self.longest_at(codes, at) {
                Some((end, i)) => {
                    out.push((at, end, i));
                    at = end;
                }
                None => at += 1,
            }
        }
        out
    }
}

/// Authors of a block: the block split at separator runs.
pub fn split_block(codes: &str, start: usize, end: usize) -> Vec<(usize, usize)> {
    let bytes = codes.as_bytes();
    let is_sep = |b: u8| matches!(b, b',' | b';' | b'&' | b'L');
    let mut out = Vec::new();
    let mut i = start;
    while i < end {
        let s = i;
        while i < end && !is_sep(bytes[i]) {
            i += 1;
        }
        out.push((s, i));
        while i < end && is_sep(bytes[i]) {
            i += 1;
        }
    }
    out
}

/// All-prefix enumeration: each word's shortest prefix that starts no name,
/// frequencies summed per prefix, sorted by frequency then text, top `k`.
pub fn brute_force_prefixes(
    candidates: &[(String, u64)],
    names: &[String],
    top_k: usize,
) -> Vec<(String, u64)> {
    let mut totals: BTreeMap<String, u64> = BTreeMap::new();
    for (word, freq) in candidates {
        let chars: Vec<char> = word.chars().collect();
        for len in 1..=chars.len() {
            let prefix: String = chars[..len].iter().collect();
            if !names.iter().any(|n| n.starts_with(&prefix)) {
                *totals.entry(prefix).or_default() += freq;
                break;
            }
        }
    }
    let mut ranked: Vec<(String, u64)> = totals.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(top_k);
    ranked
}
