//! Library side of the `capline` command: lexicon options, output formats
//! and the golden-corpus evaluation harness.

pub mod corpus;
pub mod eval;
pub mod options;
pub mod output;

pub use corpus::{CorpusCase, CorpusError, Expectation, ExpectedAuthor};
pub use eval::{evaluate, CaseOutcome, EvalReport};
pub use options::{LexiconOptions, Policy};
pub use output::{encode_dump, ResultRecord};
