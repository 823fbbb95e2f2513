//! Tokenization of source text into the twelve-symbol code alphabet.
//!
//! Every emitted symbol keeps the byte range of the source text it stands
//! for, so any match on the code string can be mapped back to the text.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::LexiconSet;

/// One symbol of the code alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// `N`: all-uppercase word.
    UpperName,
    /// `n`: capitalized word.
    Name,
    /// `I`: single uppercase letter.
    Initial,
    /// `w`: word starting with a lowercase letter.
    Word,
    /// `p`
    Period,
    /// `,`
    Comma,
    /// `;`
    Semicolon,
    /// `:`
    Colon,
    /// `&`: the conjunction "and".
    And,
    /// `L`: line break, including the text boundaries.
    Line,
    /// `a`: adparticle.
    Adparticle,
    /// `o`: any other non-space character.
    Other,
}

impl Code {
    pub const ALL: [Code; 12] = [
        Code::UpperName,
        Code::Name,
        Code::Initial,
        Code::Word,
        Code::Period,
        Code::Comma,
        Code::Semicolon,
        Code::Colon,
        Code::And,
        Code::Line,
        Code::Adparticle,
        Code::Other,
    ];

    pub const fn as_char(self) -> char {
        match self {
            Code::UpperName => 'N',
            Code::Name => 'n',
            Code::Initial => 'I',
            Code::Word => 'w',
            Code::Period => 'p',
            Code::Comma => ',',
            Code::Semicolon => ';',
            Code::Colon => ':',
            Code::And => '&',
            Code::Line => 'L',
            Code::Adparticle => 'a',
            Code::Other => 'o',
        }
    }

    pub fn from_char(c: char) -> Option<Code> {
        Code::ALL.iter().copied().find(|code| code.as_char() == c)
    }

    /// Position of the symbol in [`Code::ALL`].
    pub const fn index(self) -> usize {
        self as usize
    }

    /// `n` or `N`.
    pub fn is_name(self) -> bool {
        matches!(self, Code::Name | Code::UpperName)
    }

    pub fn kind(self) -> TokenKind {
        match self {
            Code::UpperName | Code::Name | Code::Word | Code::And | Code::Adparticle => {
                TokenKind::Word
            }
            Code::Initial => TokenKind::Initial,
            Code::Period | Code::Comma | Code::Semicolon | Code::Colon => TokenKind::Punctuation,
            Code::Line => TokenKind::LineBreak,
            Code::Other => TokenKind::Other,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Half-open byte range into the source text.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub const fn len(&self) -> usize {
        self.end - self.start
    }

    pub const fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Initial,
    Punctuation,
    LineBreak,
    Other,
}

/// One source unit together with its code symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    pub span: Span,
    pub code: Code,
}

impl<'a> Token<'a> {
    fn new(text: &'a str, span: Span, code: Code) -> Self {
        Token {
            kind: code.kind(),
            text,
            span,
            code,
        }
    }

    /// The word that decides the classification. For a token with annexed
    /// particles ("van Gogh") this is the last word; otherwise the whole text.
    pub fn head(&self) -> &'a str {
        match self.text.rfind(char::is_whitespace) {
            Some(i) if self.kind == TokenKind::Word || self.kind == TokenKind::Initial => {
                let ws = self.text[i..].chars().next().map_or(1, char::len_utf8);
                &self.text[i + ws..]
            }
            _ => self.text,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("cannot classify an empty word")]
    EmptyWord,
    #[error("{0:?} is not a word: it contains non-letter characters")]
    NotAWord(String),
}

#[derive(Clone, Debug)]
pub struct EncoderConfig {
    pub lexicons: Arc<LexiconSet>,
    /// Treat `'` and `’` as letters so that "O'Brien" stays one word.
    pub apostrophe_is_letter: bool,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig::new(LexiconSet::bundled_shared())
    }
}

impl EncoderConfig {
    pub fn new(lexicons: Arc<LexiconSet>) -> Self {
        EncoderConfig {
            lexicons,
            apostrophe_is_letter: true,
        }
    }

    /// No adparticles, no personal particles, no prefixes.
    pub fn bare() -> Self {
        EncoderConfig::new(Arc::new(LexiconSet::default()))
    }

    pub fn with_apostrophe_is_letter(mut self, flag: bool) -> Self {
        self.apostrophe_is_letter = flag;
        self
    }

    fn is_apostrophe(&self, c: char) -> bool {
        self.apostrophe_is_letter && (c == '\'' || c == '\u{2019}')
    }

    fn is_word_char(&self, c: char) -> bool {
        c.is_alphabetic() || c == '-' || self.is_apostrophe(c) || is_combining_mark(c)
    }
}

fn is_combining_mark(c: char) -> bool {
    matches!(c,
        '\u{0300}'..='\u{036F}'
        | '\u{1AB0}'..='\u{1AFF}'
        | '\u{1DC0}'..='\u{1DFF}'
        | '\u{20D0}'..='\u{20FF}'
        | '\u{FE20}'..='\u{FE2F}')
}

/// Classifies a single word into `N`, `n`, `I`, `w`, `a` or `&`.
pub fn classify_word(word: &str, config: &EncoderConfig) -> Result<Code, EncodeError> {
    if word.is_empty() {
        return Err(EncodeError::EmptyWord);
    }
    let mut chars = word.chars();
    let first = chars.next().unwrap_or_default();
    if !first.is_alphabetic() || !chars.all(|c| config.is_word_char(c)) {
        return Err(EncodeError::NotAWord(word.to_string()));
    }
    Ok(classify_letters(word, config))
}

fn classify_letters(word: &str, config: &EncoderConfig) -> Code {
    let folded = word.to_lowercase();
    if folded == "and" {
        return Code::And;
    }
    if config.lexicons.adparticles.contains(&folded) {
        return Code::Adparticle;
    }
    classify_case(word)
}

/// Capitalization class of a word, ignoring the lexicons.
fn classify_case(word: &str) -> Code {
    let mut letters = word.chars().filter(|c| c.is_alphabetic());
    let Some(first) = letters.next() else {
        return Code::Other;
    };
    if !first.is_uppercase() {
        return Code::Word;
    }
    let mut count = 1;
    let mut all_upper = true;
    for c in letters {
        count += 1;
        if !c.is_uppercase() {
            all_upper = false;
        }
    }
    match (count, all_upper) {
        (1, _) => Code::Initial,
        (_, true) => Code::UpperName,
        _ => Code::Name,
    }
}

/// Splits text into tokens and classifies each one. No particle annexation
/// or prefix lowercasing is applied, and no boundary line breaks are added.
pub fn tokenize<'a>(text: &'a str, config: &EncoderConfig) -> Vec<Token<'a>> {
    let mut tokens = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some((start, c)) = iter.next() {
        let mut end = start + c.len_utf8();
        let code = if c.is_alphabetic() {
            while let Some(&(i, next)) = iter.peek() {
                if !config.is_word_char(next) {
                    break;
                }
                end = i + next.len_utf8();
                iter.next();
            }
            classify_letters(&text[start..end], config)
        } else {
            match c {
                '\r' => {
                    if let Some(&(i, '\n')) = iter.peek() {
                        end = i + 1;
                        iter.next();
                    }
                    Code::Line
                }
                '\n' => Code::Line,
                _ if c.is_whitespace() => continue,
                '.' => Code::Period,
                ',' => Code::Comma,
                ';' => Code::Semicolon,
                ':' => Code::Colon,
                '&' => Code::And,
                _ => Code::Other,
            }
        };
        tokens.push(Token::new(&text[start..end], Span::new(start, end), code));
    }
    tokens
}

/// Merges every run of personal particles ("van", "de la", ...) into the word
/// that follows it. The merged token takes its code from that word.
///
/// `source` must be the text the tokens were cut from.
pub fn annex_personal_particles<'a>(
    tokens: Vec<Token<'a>>,
    source: &'a str,
    config: &EncoderConfig,
) -> Vec<Token<'a>> {
    let particles = &config.lexicons.personal_particles;
    if particles.is_empty() {
        return tokens;
    }
    let is_particle = |t: &Token<'_>| {
        t.kind == TokenKind::Word
            && !t.text.contains(char::is_whitespace)
            && particles.contains(&t.text.to_lowercase())
    };
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if !is_particle(&tokens[i]) {
            out.push(tokens[i]);
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < tokens.len() && is_particle(&tokens[j]) && only_spaces_between(source, &tokens, j)
        {
            j += 1;
        }
        let head = tokens.get(j).filter(|head| {
            matches!(
                head.code,
                Code::Name | Code::UpperName | Code::Initial | Code::Word
            ) && only_spaces_between(source, &tokens, j)
        });
        match head {
            Some(head) => {
                let span = Span::new(tokens[i].span.start, head.span.end);
                out.push(Token::new(&source[span.range()], span, head.code));
                i = j + 1;
            }
            None => {
                out.extend_from_slice(&tokens[i..j]);
                i = j;
            }
        }
    }
    out
}

/// True when token `j` follows token `j - 1` separated only by spaces or
/// tabs (no line break, no punctuation). Always true for `j == 0`.
fn only_spaces_between(source: &str, tokens: &[Token<'_>], j: usize) -> bool {
    if j == 0 || j >= tokens.len() {
        return j == 0;
    }
    let gap = &source[tokens[j - 1].span.end..tokens[j].span.start];
    !gap.is_empty() && gap.chars().all(|c| c == ' ' || c == '\t' || c == '\u{a0}')
}

/// Recodes as `w` every word of two or more letters whose head word starts
/// with an entry of the prefix lexicon. Adparticles and "and" keep their codes.
pub fn apply_prefix_lowercasing<'a>(
    mut tokens: Vec<Token<'a>>,
    config: &EncoderConfig,
) -> Vec<Token<'a>> {
    let prefixes = &config.lexicons;
    if prefixes.prefixes().is_empty() {
        return tokens;
    }
    for token in &mut tokens {
        if matches!(token.code, Code::Name | Code::UpperName)
            && prefixes.has_prefix_of(&token.head().to_lowercase())
        {
            token.code = Code::Word;
        }
    }
    tokens
}

/// The encoded text: one code symbol per token plus a parallel span table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeString<'a> {
    codes: Vec<Code>,
    spans: Vec<Span>,
    source: &'a str,
}

impl<'a> CodeString<'a> {
    /// Builds a code string directly from its symbols. The symbols themselves
    /// act as the source: symbol `i` maps to byte `i`.
    pub fn from_symbols(symbols: &'a str) -> Result<Self, EncodeError> {
        let codes = symbols
            .chars()
            .map(|c| Code::from_char(c).ok_or_else(|| EncodeError::NotAWord(c.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let spans = (0..codes.len()).map(|i| Span::new(i, i + 1)).collect();
        Ok(CodeString {
            codes,
            spans,
            source: symbols,
        })
    }

    fn from_tokens(tokens: &[Token<'a>], source: &'a str) -> Self {
        let mut codes = Vec::with_capacity(tokens.len() + 2);
        let mut spans = Vec::with_capacity(tokens.len() + 2);
        if tokens.first().is_none_or(|t| t.code != Code::Line) {
            codes.push(Code::Line);
            spans.push(Span::new(0, 0));
        }
        for token in tokens {
            codes.push(token.code);
            spans.push(token.span);
        }
        if tokens.last().is_some_and(|t| t.code != Code::Line) {
            codes.push(Code::Line);
            spans.push(Span::new(source.len(), source.len()));
        }
        CodeString {
            codes,
            spans,
            source,
        }
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn source(&self) -> &'a str {
        self.source
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Source text of symbol `i`.
    pub fn text_of(&self, i: usize) -> &'a str {
        &self.source[self.spans[i].range()]
    }

    /// Source range covered by symbols `start..end`.
    pub fn source_span(&self, start: usize, end: usize) -> Span {
        Span::new(self.spans[start].start, self.spans[end - 1].end)
    }

    /// Same spans and source with some symbols replaced.
    pub(crate) fn with_codes(&self, codes: Vec<Code>) -> Self {
        debug_assert_eq!(codes.len(), self.codes.len());
        CodeString {
            codes,
            spans: self.spans.clone(),
            source: self.source,
        }
    }
}

impl fmt::Display for CodeString<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for code in &self.codes {
            write!(f, "{}", code.as_char())?;
        }
        Ok(())
    }
}

/// Full encoding pipeline: tokenize, annex personal particles, lowercase
/// lexicon prefixes, then add the boundary line breaks.
pub fn encode<'a>(text: &'a str, config: &EncoderConfig) -> CodeString<'a> {
    let tokens = tokenize(text, config);
    let tokens = annex_personal_particles(tokens, text, config);
    let tokens = apply_prefix_lowercasing(tokens, config);
    CodeString::from_tokens(&tokens, text)
}
