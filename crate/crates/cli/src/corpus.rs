use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use capline::templates::RuleId;
use serde::{Deserialize, Serialize};

/// An author as written in an expectation file.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExpectedAuthor {
    #[serde(default)]
    pub given: Vec<String>,
    #[serde(default)]
    pub initials: Vec<String>,
    pub surname: String,
}

impl From<&capline::AuthorName> for ExpectedAuthor {
    fn from(name: &capline::AuthorName) -> Self {
        ExpectedAuthor {
            given: name.given.clone(),
            initials: name.initials.clone(),
            surname: name.surname.clone(),
        }
    }
}

/// Contents of a `<case>.json` file. Extra fields such as `raw` or `span`
/// are accepted and ignored, so saved `extract` output can be used as is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub authors: Vec<ExpectedAuthor>,
    #[serde(default)]
    pub tags: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("missing expectation file {0}")]
    MissingExpectation(PathBuf),
    #[error("{path}: invalid expectation: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("duplicate expected author {0:?}")]
    DuplicateAuthor(String),
    #[error("unknown tag {0:?}")]
    UnknownTag(String),
}

impl Expectation {
    pub fn parse(json: &str) -> Result<Self, CorpusError> {
        let expectation: Expectation =
            serde_json::from_str(json).map_err(|source| CorpusError::Json {
                path: PathBuf::new(),
                source,
            })?;
        expectation.validate()?;
        Ok(expectation)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut seen = BTreeSet::new();
        for author in &self.authors {
            if !seen.insert(author) {
                return Err(CorpusError::DuplicateAuthor(author.surname.clone()));
            }
        }
        for tag in &self.tags {
            if !is_valid_tag(tag) {
                return Err(CorpusError::UnknownTag(tag.clone()));
            }
        }
        Ok(())
    }
}

/// Tags name an author alternative (`lower:nIn`, `upper:[nN]N`) or a
/// scape rule (`S1`..`S4`).
pub fn is_valid_tag(tag: &str) -> bool {
    matches!(
        tag.parse::<RuleId>(),
        Ok(RuleId::Author { .. } | RuleId::Scape(_))
    )
}

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: String,
    pub input_path: PathBuf,
    pub text: String,
    pub expectation: Expectation,
}

/// A `.txt` file whose expectation could not be loaded.
#[derive(Debug)]
pub struct InvalidCase {
    pub name: String,
    pub error: CorpusError,
}

#[derive(Debug, Default)]
pub struct Corpus {
    pub cases: Vec<CorpusCase>,
    pub invalid: Vec<InvalidCase>,
}

fn case_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn load_case(input_path: &Path) -> Result<CorpusCase, CorpusError> {
    let read = |path: &Path| {
        fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })
    };
    let text = read(input_path)?;
    let json_path = input_path.with_extension("json");
    if !json_path.is_file() {
        return Err(CorpusError::MissingExpectation(json_path));
    }
    let expectation = Expectation::parse(&read(&json_path)?).map_err(|e| match e {
        CorpusError::Json { source, .. } => CorpusError::Json {
            path: json_path.clone(),
            source,
        },
        other => other,
    })?;
    Ok(CorpusCase {
        name: case_name(input_path),
        input_path: input_path.to_path_buf(),
        text,
        expectation,
    })
}

/// Loads every `*.txt` in `dir` (sorted by file name) with its sibling
/// `*.json` expectation.
pub fn load_corpus(dir: &Path) -> Result<Corpus, CorpusError> {
    let entries = fs::read_dir(dir).map_err(|source| CorpusError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut inputs = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|source| CorpusError::Io {
                path: dir.to_path_buf(),
                source,
            })?
            .path();
        if path.extension().is_some_and(|e| e == "txt") && path.is_file() {
            inputs.push(path);
        }
    }
    inputs.sort();
    let mut corpus = Corpus::default();
    for path in inputs {
        match load_case(&path) {
            Ok(case) => corpus.cases.push(case),
            Err(error) => corpus.invalid.push(InvalidCase {
                name: case_name(&path),
                error,
            }),
        }
    }
    Ok(corpus)
}
