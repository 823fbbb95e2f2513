use std::fmt::Write as _;

use capline::{AuthorName, CodeString, ExtractionResult, Variant};
use serde::{Deserialize, Serialize};

/// One `extract` result as written in JSON mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub path: String,
    pub authors: Vec<AuthorName>,
    pub variant: Variant,
    pub warnings: Vec<String>,
}

impl ResultRecord {
    pub fn new(path: impl Into<String>, result: &ExtractionResult<'_>) -> Self {
        ResultRecord {
            path: path.into(),
            authors: result.authors.clone(),
            variant: result.variant_used,
            warnings: result.warnings.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    path: &'a str,
    error: &'a str,
}

pub fn error_json(path: &str, error: &str) -> String {
    serde_json::to_string(&ErrorRecord { path, error }).expect("records serialize")
}

pub const TSV_HEADER: &str = "path\tgiven\tinitials\tsurname\traw";

fn tsv_field(value: &str) -> String {
    value
        .chars()
        .map(|c| {
            if c == '\t' || c == '\n' || c == '\r' {
                ' '
            } else {
                c
            }
        })
        .collect()
}

/// One line per author, without the header.
pub fn tsv_rows(record: &ResultRecord) -> String {
    let mut out = String::new();
    for author in &record.authors {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            tsv_field(&record.path),
            tsv_field(&author.given.join(" ")),
            tsv_field(&author.initials.join(" ")),
            tsv_field(&author.surname),
            tsv_field(&author.raw),
        );
    }
    out
}

/// The code string, optionally followed by one row per symbol:
/// index, symbol, start and end byte offsets, and the quoted source slice.
pub fn encode_dump(code: &CodeString<'_>, spans: bool) -> String {
    let mut out = format!("{code}\n");
    if spans {
        for (i, (symbol, span)) in code.codes().iter().zip(code.spans()).enumerate() {
            let _ = writeln!(
                out,
                "{i}\t{symbol}\t{}\t{}\t{:?}",
                span.start,
                span.end,
                &code.source()[span.range()]
            );
        }
    }
    out
}
