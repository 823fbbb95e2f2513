//! The extraction pipeline and the parsing of matched spans into names.

use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::encoder::{encode, Code, CodeString, EncoderConfig, Span};
use crate::lexicon::LexiconSet;
use crate::templates::{
    apply_scape_masks, match_multi_block_capped, BlockMatch, CodeMatch, PatternVariant, RuleId,
    Variant, DEFAULT_MAX_BLOCKS, DEFAULT_MAX_GAP_LINES,
};

/// How the two author template variants are combined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantPolicy {
    /// Lower variant; the upper one only when the lower finds nothing.
    LowerThenUpper,
    /// Upper variant; the lower one only when the upper finds nothing.
    UpperThenLower,
    /// Both; the one with more authors wins, the lower one on ties.
    #[default]
    BestOfBoth,
}

#[derive(Clone, Debug)]
pub struct ExtractConfig {
    pub lexicons: Arc<LexiconSet>,
    /// Address lines allowed between two author blocks.
    pub max_gap_lines: usize,
    pub max_blocks: usize,
    pub variant_policy: VariantPolicy,
    pub apostrophe_is_letter: bool,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig::new(LexiconSet::bundled_shared())
    }
}

impl ExtractConfig {
    pub fn new(lexicons: Arc<LexiconSet>) -> Self {
        ExtractConfig {
            lexicons,
            max_gap_lines: DEFAULT_MAX_GAP_LINES,
            max_blocks: DEFAULT_MAX_BLOCKS,
            variant_policy: VariantPolicy::default(),
            apostrophe_is_letter: true,
        }
    }

    pub fn encoder_config(&self) -> EncoderConfig {
        EncoderConfig::new(Arc::clone(&self.lexicons))
            .with_apostrophe_is_letter(self.apostrophe_is_letter)
    }
}

/// A person name in natural order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorName {
    pub given: Vec<String>,
    pub initials: Vec<String>,
    /// Last name word, with any annexed particles.
    pub surname: String,
    /// The source text exactly as it appears.
    pub raw: String,
    pub span: Span,
}

/// One author block of the selected layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockInfo {
    /// Indices into [`ExtractionResult::authors`].
    pub authors: Range<usize>,
    pub span: Span,
    /// Code symbols of each separator run, e.g. `","` or `"&L"`.
    pub separators: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ExtractionResult<'a> {
    pub authors: Vec<AuthorName>,
    /// Template alternative that matched each author.
    pub author_rules: Vec<RuleId>,
    pub blocks: Vec<BlockInfo>,
    pub variant_used: Variant,
    pub fired_scapes: Vec<CodeMatch>,
    /// The encoded text before scape masking.
    pub encoded: CodeString<'a>,
    /// The encoded text the layout templates ran on.
    pub masked: CodeString<'a>,
    pub warnings: Vec<String>,
}

fn author_count(blocks: &[BlockMatch]) -> usize {
    blocks.iter().map(|b| b.authors.len()).sum()
}

/// Runs the full pipeline on one title page.
pub fn extract<'a>(text: &'a str, config: &ExtractConfig) -> ExtractionResult<'a> {
    let encoded = encode(text, &config.encoder_config());
    let (masked, fired_scapes) = apply_scape_masks(&encoded);
    let run = |variant| {
        match_multi_block_capped(
            &masked,
            PatternVariant::get(variant),
            config.max_gap_lines,
            config.max_blocks,
        )
    };
    let sequential = |first: Variant, second: Variant| {
        let blocks = run(first);
        if author_count(&blocks) > 0 {
            return (first, blocks);
        }
        let fallback = run(second);
        if author_count(&fallback) > 0 {
            (second, fallback)
        } else {
            (first, blocks)
        }
    };
    let (variant_used, chosen) = match config.variant_policy {
        VariantPolicy::LowerThenUpper => sequential(Variant::Lower, Variant::Upper),
        VariantPolicy::UpperThenLower => sequential(Variant::Upper, Variant::Lower),
        VariantPolicy::BestOfBoth => {
            let lower = run(Variant::Lower);
            let upper = run(Variant::Upper);
            if author_count(&upper) > author_count(&lower) {
                (Variant::Upper, upper)
            } else {
                (Variant::Lower, lower)
            }
        }
    };

    let mut authors = Vec::new();
    let mut author_rules = Vec::new();
    let mut blocks = Vec::new();
    for block in &chosen {
        let first = authors.len();
        for author in &block.authors {
            authors.push(parse_author_span(author, &masked));
            author_rules.push(author.rule);
        }
        let separators = block
            .separators
            .iter()
            .map(|range| {
                masked.codes()[range.clone()]
                    .iter()
                    .map(|c| c.as_char())
                    .collect()
            })
            .collect();
        blocks.push(BlockInfo {
            authors: first..authors.len(),
            span: masked.source_span(block.block_span.start, block.block_span.end),
            separators,
        });
    }

    let warnings = warnings(&masked, &authors);
    ExtractionResult {
        authors,
        author_rules,
        blocks,
        variant_used,
        fired_scapes,
        encoded,
        masked,
        warnings,
    }
}

/// Flags lines made only of name symbols that are too long for any template
/// and contributed no author.
fn warnings(code: &CodeString<'_>, authors: &[AuthorName]) -> Vec<String> {
    let mut warnings = Vec::new();
    let codes = code.codes();
    let mut line_start = 0;
    for i in 1..=codes.len() {
        if i < codes.len() && codes[i] != Code::Line {
            continue;
        }
        let line = line_start + 1..i;
        line_start = i;
        if line.is_empty() {
            continue;
        }
        let symbols = &codes[line.clone()];
        let name_like = symbols.iter().all(|c| {
            matches!(
                c,
                Code::Name | Code::UpperName | Code::Initial | Code::Period
            )
        });
        let words = symbols
            .iter()
            .filter(|c| c.is_name() || **c == Code::Initial)
            .count();
        if !name_like || words <= 3 {
            continue;
        }
        let span = code.source_span(line.start, line.end);
        if authors
            .iter()
            .any(|a| a.span.start < span.end && span.start < a.span.end)
        {
            continue;
        }
        warnings.push(format!(
            "bytes {}..{}: name-like line matched no author template: {:?}",
            span.start,
            span.end,
            &code.source()[span.range()]
        ));
    }
    if authors.is_empty() {
        warnings.push("no author block found".to_string());
    }
    warnings
}

/// All-uppercase pieces become capitalized: "VAN GOGH" -> "Van Gogh",
/// "HARTREE-FOCK" -> "Hartree-Fock". Mixed-case pieces are left alone.
fn normalize_upper(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut piece = String::new();
    let flush = |piece: &mut String, out: &mut String| {
        let letters = piece.chars().filter(|c| c.is_alphabetic());
        if letters.clone().count() > 0 && letters.clone().all(char::is_uppercase) {
            let mut seen_first = false;
            for c in piece.chars() {
                if c.is_alphabetic() && !seen_first {
                    seen_first = true;
                    out.push(c);
                } else {
                    out.extend(c.to_lowercase());
                }
            }
        } else {
            out.push_str(piece);
        }
        piece.clear();
    };
    for c in text.chars() {
        if c.is_whitespace() || c == '-' {
            flush(&mut piece, &mut out);
            out.push(c);
        } else {
            piece.push(c);
        }
    }
    flush(&mut piece, &mut out);
    out
}

/// Last word of a token whose text may carry annexed particles.
fn head_word(text: &str) -> &str {
    text.rsplit(char::is_whitespace).next().unwrap_or(text)
}

/// Splits a matched author span into given names, initials and surname.
/// The last name symbol is the surname; all-uppercase words are normalized
/// in `given` and `surname` and kept verbatim in `raw`.
pub fn parse_author_span(m: &CodeMatch, code: &CodeString<'_>) -> AuthorName {
    let codes = &code.codes()[m.range()];
    assert!(
        codes.last().is_some_and(|c| c.is_name()),
        "author match must end with a name symbol"
    );
    let mut names = Vec::new();
    let mut initials = Vec::new();
    for (offset, symbol) in codes.iter().enumerate() {
        let text = code.text_of(m.start + offset);
        match symbol {
            Code::Name => names.push(text.to_string()),
            Code::UpperName => names.push(normalize_upper(text)),
            Code::Initial => initials.push(head_word(text).to_string()),
            Code::Period => {}
            other => panic!("unexpected symbol {other} in author match"),
        }
    }
    let surname = names.pop().unwrap_or_default();
    let span = code.source_span(m.start, m.end);
    AuthorName {
        given: names,
        initials,
        surname,
        raw: code.source()[span.range()].to_string(),
        span,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::templates::MatchKind;

    fn names(result: &ExtractionResult<'_>) -> Vec<String> {
        result.authors.iter().map(|a| a.surname.clone()).collect()
    }

    fn prefix_free_config() -> ExtractConfig {
        ExtractConfig::new(Arc::new(LexiconSet::bundled().without_prefixes()))
    }

    fn author_match(start: usize, end: usize) -> CodeMatch {
        CodeMatch {
            start,
            end,
            kind: MatchKind::Author,
            rule: RuleId::Block(Variant::Lower),
        }
    }

    #[test]
    fn newton_title_page() {
        let text = "Philosophiæ Naturalis Principia Mathematica\nIsaac Newton\n";
        for config in [ExtractConfig::default(), prefix_free_config()] {
            let result = extract(text, &config);
            assert_eq!(result.authors.len(), 1);
            assert_eq!(result.authors[0].given, ["Isaac"]);
            assert_eq!(result.authors[0].surname, "Newton");
            assert_eq!(result.authors[0].raw, "Isaac Newton");
            assert_eq!(result.variant_used, Variant::Lower);
        }
    }

    #[test]
    fn title_continuation_is_not_an_author() {
        let result = extract(
            "Nonlinear Theory of\nShallow Shells\n",
            &prefix_free_config(),
        );
        assert!(result.authors.is_empty());
        assert_eq!(result.fired_scapes.len(), 1);
        assert!(result.warnings.iter().any(|w| w.contains("no author")));
    }

    #[test]
    fn three_authors_with_separators() {
        let text =
            "Some Title\nAlice B. Carol, David Frank and Grace Hopper\nInstitute of Things\n";
        let result = extract(text, &ExtractConfig::default());
        assert_eq!(names(&result), ["Carol", "Frank", "Hopper"]);
        assert_eq!(result.authors[0].initials, ["B"]);
        assert_eq!(result.blocks.len(), 1);
        assert_eq!(result.blocks[0].separators, [",", "&"]);
    }

    #[test]
    fn empty_text() {
        let result = extract("", &ExtractConfig::default());
        assert!(result.authors.is_empty());
        assert_eq!(result.encoded.to_string(), "L");
    }

    #[test]
    fn parse_examples() {
        let config = prefix_free_config().encoder_config();
        let text = "Isaac B. Newton";
        let code = encode(text, &config);
        assert_eq!(code.to_string(), "LnIpnL");
        let name = parse_author_span(&author_match(1, 5), &code);
        assert_eq!(name.given, ["Isaac"]);
        assert_eq!(name.initials, ["B"]);
        assert_eq!(name.surname, "Newton");

        let text = "ISAAC NEWTON";
        let code = encode(text, &config);
        let name = parse_author_span(&author_match(1, 3), &code);
        assert_eq!(name.given, ["Isaac"]);
        assert_eq!(name.surname, "Newton");
        assert_eq!(name.raw, "ISAAC NEWTON");

        let text = "Vincent van Gogh";
        let code = encode(text, &config);
        assert_eq!(code.to_string(), "LnnL");
        let name = parse_author_span(&author_match(1, 3), &code);
        assert_eq!(name.given, ["Vincent"]);
        assert_eq!(name.surname, "van Gogh");
    }

    #[test]
    #[should_panic(expected = "must end with a name symbol")]
    fn parse_rejects_non_name_ending() {
        let code = CodeString::from_symbols("LnIL").unwrap();
        parse_author_span(&author_match(1, 3), &code);
    }

    #[test]
    fn upper_normalization() {
        assert_eq!(normalize_upper("NEWTON"), "Newton");
        assert_eq!(normalize_upper("HARTREE-FOCK"), "Hartree-Fock");
        assert_eq!(normalize_upper("van GOGH"), "van Gogh");
        assert_eq!(normalize_upper("O'BRIEN"), "O'brien");
        assert_eq!(normalize_upper("ÉMILE"), "Émile");
    }

    #[test]
    fn variant_policies() {
        let text = "A Study of Things\nJOHN SMITH, MARY JONES\n";
        let mut config = prefix_free_config();
        let both = extract(text, &config);
        assert_eq!(both.variant_used, Variant::Upper);
        assert_eq!(names(&both), ["Smith", "Jones"]);

        config.variant_policy = VariantPolicy::LowerThenUpper;
        let seq = extract(text, &config);
        assert_eq!(seq.variant_used, Variant::Upper);

        // the lower variant finds one author here, so it is kept
        let text = "A Study of Things\nJohn Smith\nMARY JONES, PAUL KING\n";
        let seq = extract(text, &config);
        assert_eq!(seq.variant_used, Variant::Lower);
        assert_eq!(names(&seq), ["Smith"]);
        config.variant_policy = VariantPolicy::BestOfBoth;
        let both = extract(text, &config);
        assert_eq!(both.variant_used, Variant::Upper);
        assert_eq!(names(&both), ["Jones", "King"]);
    }

    #[test]
    fn long_name_lines_warn() {
        let result = extract("Anna Maria Luisa Theresa Weber\n", &prefix_free_config());
        assert!(result.authors.is_empty());
        assert!(result.warnings.iter().any(|w| w.contains("name-like")));
    }

    #[test]
    fn multi_block_with_addresses() {
        let text = "On the Theory of Everything\n\
                    John Smith\n\
                    Department of Physics, University of Nowhere\n\
                    Mary Jones\n\
                    Institute for Studies, Somewhere\n";
        let result = extract(text, &prefix_free_config());
        assert_eq!(names(&result), ["Smith", "Jones"]);
        assert_eq!(result.blocks.len(), 2);
        assert_eq!(result.blocks[1].authors, 1..2);
    }
}
