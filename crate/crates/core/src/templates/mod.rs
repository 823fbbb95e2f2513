//! Author, layout and scape templates, and their matching over a
//! [`CodeString`].

pub mod pattern;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize, Serializer};

use crate::encoder::{Code, CodeString};
pub use pattern::{Capture, Match, Pattern, PatternError, PatternErrorKind, SymbolSet};

/// Author alternatives for mixed-case names; `I` stands for an initial.
pub const LOWER_ALTERNATIVES: [&str; 11] = [
    "nIn", "nIIn", "In", "Inn", "IIn", "IIIn", "nInn", "nnIn", "IInn", "nn", "nnn",
];

/// Author alternatives admitting an all-uppercase surname.
pub const UPPER_ALTERNATIVES: [&str; 11] = [
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

/// An initial: one uppercase letter, optionally followed by a period.
pub const INITIAL: &str = "(?:Ip?)";

/// Separators allowed between two authors of one block.
pub const SEPARATOR: &str = "[,;&L]+";

/// Default number of address lines allowed between two author blocks.
pub const DEFAULT_MAX_GAP_LINES: usize = 7;

/// Upper bound on the number of blocks chained into one layout.
pub const DEFAULT_MAX_BLOCKS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Lower,
    Upper,
}

impl Variant {
    pub fn alternatives(self) -> &'static [&'static str; 11] {
        match self {
            Variant::Lower => &LOWER_ALTERNATIVES,
            Variant::Upper => &UPPER_ALTERNATIVES,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Lower => "lower",
            Variant::Upper => "upper",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScapeRule {
    S1,
    S2,
    S3,
    S4,
}

impl ScapeRule {
    pub const ALL: [ScapeRule; 4] = [ScapeRule::S1, ScapeRule::S2, ScapeRule::S3, ScapeRule::S4];

    /// The template as usually written.
    pub fn template(self) -> &'static str {
        match self {
            ScapeRule::S1 => "aL+[nN]{1,2}",
            ScapeRule::S2 => "a[nNw]&L+[nN]{1,2}",
            ScapeRule::S3 => ":L+[nN]{1,2}",
            ScapeRule::S4 => "[nN]*&L[nN]L",
        }
    }

    /// The template with the masked part marked as the `mask` group.
    fn pattern_source(self) -> &'static str {
        match self {
            ScapeRule::S1 => "aL+(?<mask>[nN]{1,2})",
            ScapeRule::S2 => "a[nNw]&L+(?<mask>[nN]{1,2})",
            ScapeRule::S3 => ":L+(?<mask>[nN]{1,2})",
            ScapeRule::S4 => "[nN]*&L(?<mask>[nN])L",
        }
    }

    fn pattern(self) -> &'static Pattern {
        static PATTERNS: OnceLock<[Pattern; 4]> = OnceLock::new();
        let patterns = PATTERNS.get_or_init(|| {
            ScapeRule::ALL
                .map(|rule| Pattern::new(rule.pattern_source()).expect("scape templates compile"))
        });
        &patterns[self as usize]
    }
}

impl fmt::Display for ScapeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", *self as usize + 1)
    }
}

/// Which template produced a match.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    /// Author alternative, indexed in the order of [`Variant::alternatives`].
    Author {
        variant: Variant,
        alternative: usize,
    },
    Block(Variant),
    Scape(ScapeRule),
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::Author {
                variant,
                alternative,
            } => write!(f, "{variant}:{}", variant.alternatives()[*alternative]),
            RuleId::Block(variant) => write!(f, "block:{variant}"),
            RuleId::Scape(rule) => write!(f, "{rule}"),
        }
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rule) = ScapeRule::ALL.into_iter().find(|r| r.to_string() == s) {
            return Ok(RuleId::Scape(rule));
        }
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| format!("unknown rule {s:?}"))?;
        let variant = match head {
            "lower" => Some(Variant::Lower),
            "upper" => Some(Variant::Upper),
            _ => None,
        };
        match (head, variant) {
            ("block", _) => match tail {
                "lower" => Ok(RuleId::Block(Variant::Lower)),
                "upper" => Ok(RuleId::Block(Variant::Upper)),
                _ => Err(format!("unknown rule {s:?}")),
            },
            (_, Some(variant)) => variant
                .alternatives()
                .iter()
                .position(|alt| *alt == tail)
                .map(|alternative| RuleId::Author {
                    variant,
                    alternative,
                })
                .ok_or_else(|| format!("unknown {variant} alternative {tail:?}")),
            _ => Err(format!("unknown rule {s:?}")),
        }
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchKind {
    Author,
    Block,
    ScapeMask,
}

/// A matched range of code symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CodeMatch {
    pub start: usize,
    pub end: usize,
    pub kind: MatchKind,
    pub rule: RuleId,
}

impl CodeMatch {
    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }
}

/// A run of authors delimited by line breaks. `block_span` excludes the
/// leading line break and stops before the trailing one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatch {
    pub block_span: CodeMatch,
    pub authors: Vec<CodeMatch>,
    pub separators: Vec<Range<usize>>,
}

/// Compiled author and block templates for one variant.
#[derive(Debug)]
pub struct PatternVariant {
    variant: Variant,
    authors: Pattern,
    block: Pattern,
}

fn template_length(alternative: &str) -> usize {
    let mut len = 0;
    let mut in_class = false;
    for c in alternative.chars() {
        match c {
            '[' => in_class = true,
            ']' => {
                in_class = false;
                len += 1;
            }
            _ if !in_class => len += 1,
            _ => {}
        }
    }
    len
}

/// Alternation over the author templates, longest first, with each
/// alternative in a group named `alt<index>`.
fn author_alternation(variant: Variant) -> String {
    let alternatives = variant.alternatives();
    let mut order: Vec<usize> = (0..alternatives.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(template_length(alternatives[i])));
    let parts: Vec<String> = order
        .iter()
        .map(|&i| format!("(?<alt{i}>{})", alternatives[i].replace('I', INITIAL)))
        .collect();
    format!("(?:{})", parts.join("|"))
}

impl PatternVariant {
    fn compile(variant: Variant) -> Self {
        let author = author_alternation(variant);
        let block = format!("L(?<author>{author})(?:(?<sep>{SEPARATOR})(?<author>{author}))*(?=L)");
        PatternVariant {
            variant,
            authors: Pattern::new(&author).expect("author templates compile"),
            block: Pattern::new(&block).expect("block template compiles"),
        }
    }

    pub fn get(variant: Variant) -> &'static PatternVariant {
        static COMPILED: OnceLock<[PatternVariant; 2]> = OnceLock::new();
        let compiled = COMPILED.get_or_init(|| {
            [
                PatternVariant::compile(Variant::Lower),
                PatternVariant::compile(Variant::Upper),
            ]
        });
        &compiled[variant as usize]
    }

    pub fn lower() -> &'static PatternVariant {
        PatternVariant::get(Variant::Lower)
    }

    pub fn upper() -> &'static PatternVariant {
        PatternVariant::get(Variant::Upper)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn author_pattern(&self) -> &Pattern {
        &self.authors
    }

    pub fn block_pattern(&self) -> &Pattern {
        &self.block
    }

    /// Maps the `alt<i>` capture that sits inside `captures` to its rule.
    fn rule_of(&self, pattern: &Pattern, captures: &[Capture], start: usize, end: usize) -> RuleId {
        let alternative = captures
            .iter()
            .filter(|c| c.start == start && c.end == end)
            .find_map(|c| {
                pattern
                    .group_name(c.group)?
                    .strip_prefix("alt")?
                    .parse()
                    .ok()
            })
            .expect("every author match passes through one alternative");
        RuleId::Author {
            variant: self.variant,
            alternative,
        }
    }
}

/// All non-overlapping author matches, leftmost first, preferring the
/// longest alternative at each position.
pub fn match_authors(code: &CodeString<'_>, variant: &PatternVariant) -> Vec<CodeMatch> {
    let pattern = &variant.authors;
    pattern
        .find_iter(code.codes())
        .into_iter()
        .map(|m| CodeMatch {
            start: m.start,
            end: m.end,
            kind: MatchKind::Author,
            rule: variant.rule_of(pattern, &m.captures, m.start, m.end),
        })
        .collect()
}

/// Every single-block layout: a line break, an author, then any number of
/// separator-author pairs, followed by a line break that is left unconsumed.
pub fn match_single_block(code: &CodeString<'_>, variant: &PatternVariant) -> Vec<BlockMatch> {
    let pattern = &variant.block;
    let author_group = pattern.group_id("author");
    let sep_group = pattern.group_id("sep");
    pattern
        .find_iter(code.codes())
        .into_iter()
        .map(|m| {
            let mut authors = Vec::new();
            let mut separators = Vec::new();
            for capture in &m.captures {
                if Some(capture.group) == author_group {
                    authors.push(CodeMatch {
                        start: capture.start,
                        end: capture.end,
                        kind: MatchKind::Author,
                        rule: variant.rule_of(pattern, &m.captures, capture.start, capture.end),
                    });
                } else if Some(capture.group) == sep_group {
                    separators.push(capture.start..capture.end);
                }
            }
            BlockMatch {
                block_span: CodeMatch {
                    start: m.start + 1,
                    end: m.end,
                    kind: MatchKind::Block,
                    rule: RuleId::Block(variant.variant),
                },
                authors,
                separators,
            }
        })
        .collect()
}

/// Number of lines (`L` followed by non-`L` symbols) between the end of
/// `before` and the leading line break of `after`.
fn gap_lines(codes: &[Code], before: &BlockMatch, after: &BlockMatch) -> usize {
    let leading = after.block_span.start - 1;
    codes[before.block_span.end..leading]
        .iter()
        .filter(|&&c| c == Code::Line)
        .count()
}

/// Chains single blocks separated by at most `max_gap_lines` lines and
/// returns the chain holding the most authors (the earliest on ties).
pub fn match_multi_block(
    code: &CodeString<'_>,
    variant: &PatternVariant,
    max_gap_lines: usize,
) -> Vec<BlockMatch> {
    match_multi_block_capped(code, variant, max_gap_lines, DEFAULT_MAX_BLOCKS)
}

/// [`match_multi_block`] with an explicit cap on blocks per chain.
pub fn match_multi_block_capped(
    code: &CodeString<'_>,
    variant: &PatternVariant,
    max_gap_lines: usize,
    max_blocks: usize,
) -> Vec<BlockMatch> {
    let max_blocks = max_blocks.max(1);
    let blocks = match_single_block(code, variant);
    let mut chains: Vec<Vec<BlockMatch>> = Vec::new();
    for block in blocks {
        match chains.last_mut() {
            Some(chain)
                if chain.len() < max_blocks
                    && chain.last().is_some_and(|prev| {
                        gap_lines(code.codes(), prev, &block) <= max_gap_lines
                    }) =>
            {
                chain.push(block)
            }
            _ => chains.push(vec![block]),
        }
    }
    let authors = |chain: &Vec<BlockMatch>| chain.iter().map(|b| b.authors.len()).sum::<usize>();
    let mut best: Option<Vec<BlockMatch>> = None;
    for chain in chains {
        if best.as_ref().is_none_or(|b| authors(&chain) > authors(b)) {
            best = Some(chain);
        }
    }
    best.unwrap_or_default()
}

/// Rewrites to `w` the capitalized words that the scape templates identify
/// as title continuations, applying S1..S4 until nothing changes.
pub fn apply_scape_masks<'a>(code: &CodeString<'a>) -> (CodeString<'a>, Vec<CodeMatch>) {
    let mut codes = code.codes().to_vec();
    let mut fired = Vec::new();
    loop {
        let mut changed = false;
        for rule in ScapeRule::ALL {
            let pattern = rule.pattern();
            let mask = pattern.group_id("mask");
            for m in pattern.find_iter(&codes) {
                for capture in m.captures.iter().filter(|c| Some(c.group) == mask) {
                    for c in &mut codes[capture.start..capture.end] {
                        if c.is_name() {
                            *c = Code::Word;
                            changed = true;
                        }
                    }
                }
                fired.push(CodeMatch {
                    start: m.start,
                    end: m.end,
                    kind: MatchKind::ScapeMask,
                    rule: RuleId::Scape(rule),
                });
            }
        }
        if !changed {
            break;
        }
    }
    (code.with_codes(codes), fired)
}
