//! Extraction of the author field from plain-text title pages.
//!
//! The text is reduced to a short code string (one symbol per word, initial,
//! punctuation mark or line break), capitalized fragments that belong to
//! titles are masked, and author blocks are located with a small set of
//! capitalization templates. Matched spans map back to the source through the
//! span table kept alongside every code symbol.
//!
//! ```
//! use capline::{extract, ExtractConfig};
//!
//! let text = "Philosophiæ Naturalis Principia Mathematica\nIsaac Newton\n";
//! let result = extract(text, &ExtractConfig::default());
//! assert_eq!(result.authors.len(), 1);
//! assert_eq!(result.authors[0].surname, "Newton");
//! ```

pub mod encoder;
pub mod extractor;
pub mod lexicon;
pub mod templates;

pub use encoder::{
    annex_personal_particles, apply_prefix_lowercasing, classify_word, encode, tokenize, Code,
    CodeString, EncodeError, EncoderConfig, Span, Token, TokenKind,
};
pub use extractor::{
    extract, parse_author_span, AuthorName, BlockInfo, ExtractConfig, ExtractionResult,
    VariantPolicy,
};
pub use lexicon::{
    build_prefix_lexicon, load_lexicon, parse_frequency_list, shortest_nonauthor_prefix,
    AuthorPrefixIndex, LexiconError, LexiconSet, PrefixCandidate, PrefixEntry,
};
pub use templates::{
    apply_scape_masks, match_authors, match_multi_block, match_single_block, BlockMatch, CodeMatch,
    MatchKind, PatternVariant, RuleId, ScapeRule, Variant,
};
