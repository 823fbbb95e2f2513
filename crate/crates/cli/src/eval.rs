use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use anyhow::Result;
use capline::templates::Variant;
use capline::{extract, Code, ExtractConfig, ExtractionResult};
use serde::Serialize;

use crate::corpus::{Corpus, CorpusCase, ExpectedAuthor};
use crate::options::LexiconOptions;

/// Features the bundled corpus must exercise, besides the 22 author
/// alternatives and the four scape rules.
pub const LAYOUT_FEATURES: [&str; 10] = [
    "sep:comma",
    "sep:semicolon",
    "sep:and",
    "sep:linebreak",
    "layout:1-block",
    "layout:2-block",
    "layout:3-block",
    "particle",
    "prefix-lexicon",
    "all-caps",
];

/// Prefix counts tried by [`lexicon_sensitivity`]; `None` is the full list.
pub const SENSITIVITY_SIZES: [Option<usize>; 7] = [
    Some(0),
    Some(10),
    Some(25),
    Some(50),
    Some(100),
    Some(200),
    None,
];

pub fn required_features() -> Vec<String> {
    let mut out = Vec::new();
    for variant in [Variant::Lower, Variant::Upper] {
        for alt in variant.alternatives() {
            out.push(format!("{variant}:{alt}"));
        }
    }
    out.extend((1..=4).map(|i| format!("S{i}")));
    out.extend(LAYOUT_FEATURES.iter().map(|f| f.to_string()));
    out
}

/// Coverage features observed in one extraction.
pub fn case_features(result: &ExtractionResult<'_>) -> BTreeSet<String> {
    let mut features = BTreeSet::new();
    features.extend(result.author_rules.iter().map(|r| r.to_string()));
    features.extend(result.fired_scapes.iter().map(|m| m.rule.to_string()));
    for block in &result.blocks {
        for sep in &block.separators {
            if sep.chars().all(|c| c == 'L') {
                features.insert("sep:linebreak".to_string());
            }
            for (c, name) in [(',', "sep:comma"), (';', "sep:semicolon"), ('&', "sep:and")] {
                if sep.contains(c) {
                    features.insert(name.to_string());
                }
            }
        }
    }
    if !result.blocks.is_empty() {
        features.insert(format!("layout:{}-block", result.blocks.len()));
    }
    if result
        .authors
        .iter()
        .any(|a| a.surname.contains(char::is_whitespace))
    {
        features.insert("particle".to_string());
    }
    let code = &result.encoded;
    let lowered = (0..code.len()).any(|i| {
        code.codes()[i] == Code::Word
            && code
                .text_of(i)
                .split_whitespace()
                .last()
                .and_then(|w| w.chars().next())
                .is_some_and(char::is_uppercase)
    });
    if lowered {
        features.insert("prefix-lexicon".to_string());
    }
    if result.variant_used == Variant::Upper && !result.authors.is_empty() {
        features.insert("all-caps".to_string());
    }
    features
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub name: String,
    pub passed: bool,
    pub reasons: Vec<String>,
    pub expected: Vec<ExpectedAuthor>,
    pub predicted: Vec<ExpectedAuthor>,
    pub features: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SensitivityPoint {
    /// Number of prefixes actually used.
    pub prefixes: usize,
    pub exact_match_rate: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EvalReport {
    pub cases: Vec<CaseOutcome>,
    pub precision: f64,
    pub recall: f64,
    pub exact_match_rate: f64,
    /// Feature → names of the cases exercising it.
    pub coverage: BTreeMap<String, Vec<String>>,
    pub missing_coverage: Vec<String>,
    pub sensitivity: Vec<SensitivityPoint>,
}

impl EvalReport {
    /// True when there is at least one case and every case passed.
    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for case in &self.cases {
            let status = if case.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status}\t{}", case.name);
            if !case.reasons.is_empty() {
                let _ = write!(out, "\t{}", case.reasons.join("; "));
            }
            out.push('\n');
        }
        let passed = self.cases.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "cases: {passed}/{} passed", self.cases.len());
        let _ = writeln!(
            out,
            "precision: {:.4}  recall: {:.4}  exact-match: {:.4}",
            self.precision, self.recall, self.exact_match_rate
        );
        let _ = writeln!(out, "coverage:");
        for feature in required_features() {
            let cases = self.coverage.get(&feature).map_or(0, Vec::len);
            let _ = writeln!(out, "  {feature}\t{cases}");
        }
        if !self.missing_coverage.is_empty() {
            let _ = writeln!(out, "missing coverage: {}", self.missing_coverage.join(" "));
        }
        if !self.sensitivity.is_empty() {
            let _ = writeln!(out, "prefix lexicon sensitivity:");
            for point in &self.sensitivity {
                let _ = writeln!(out, "  {}\t{:.4}", point.prefixes, point.exact_match_rate);
            }
        }
        out
    }
}

/// Size of the multiset intersection.
fn overlap(a: &[ExpectedAuthor], b: &[ExpectedAuthor]) -> usize {
    let mut counts: BTreeMap<&ExpectedAuthor, usize> = BTreeMap::new();
    for x in a {
        *counts.entry(x).or_default() += 1;
    }
    b.iter()
        .filter(|y| match counts.get_mut(y) {
            Some(n) if *n > 0 => {
                *n -= 1;
                true
            }
            _ => false,
        })
        .count()
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

fn run_case(case: &CorpusCase, config: &ExtractConfig) -> (CaseOutcome, BTreeSet<String>) {
    let result = extract(&case.text, config);
    let predicted: Vec<ExpectedAuthor> = result.authors.iter().map(Into::into).collect();
    let features = case_features(&result);
    let expected = case.expectation.authors.clone();
    let mut reasons = Vec::new();
    if predicted != expected {
        let show = |list: &[ExpectedAuthor]| {
            list.iter()
                .map(|a| a.surname.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        };
        reasons.push(format!(
            "expected [{}], got [{}]",
            show(&expected),
            show(&predicted)
        ));
    }
    for tag in &case.expectation.tags {
        if !features.contains(tag) {
            reasons.push(format!("tag {tag} not exercised"));
        }
    }
    let outcome = CaseOutcome {
        name: case.name.clone(),
        passed: reasons.is_empty(),
        reasons,
        expected,
        predicted,
        features: features.iter().cloned().collect(),
    };
    (outcome, features)
}

/// Runs extraction on every case. Invalid cases count as failures.
pub fn evaluate(corpus: &Corpus, config: &ExtractConfig) -> EvalReport {
    let mut report = EvalReport::default();
    let (mut hits, mut predicted, mut expected) = (0, 0, 0);
    for case in &corpus.cases {
        let (outcome, features) = run_case(case, config);
        hits += overlap(&outcome.expected, &outcome.predicted);
        predicted += outcome.predicted.len();
        expected += outcome.expected.len();
        for feature in features {
            report
                .coverage
                .entry(feature)
                .or_default()
                .push(case.name.clone());
        }
        report.cases.push(outcome);
    }
    for invalid in &corpus.invalid {
        report.cases.push(CaseOutcome {
            name: invalid.name.clone(),
            passed: false,
            reasons: vec![format!("invalid case: {}", invalid.error)],
            expected: Vec::new(),
            predicted: Vec::new(),
            features: Vec::new(),
        });
    }
    report.cases.sort_by(|a, b| a.name.cmp(&b.name));
    report.precision = ratio(hits, predicted);
    report.recall = ratio(hits, expected);
    let exact = report.cases.iter().filter(|c| c.passed).count();
    report.exact_match_rate = if report.cases.is_empty() {
        0.0
    } else {
        exact as f64 / report.cases.len() as f64
    };
    report.missing_coverage = required_features()
        .into_iter()
        .filter(|f| !report.coverage.contains_key(f))
        .collect();
    report
}

/// Exact-match rate with the top-k prefixes of the configured lexicon, for
/// each size in [`SENSITIVITY_SIZES`].
pub fn lexicon_sensitivity(
    corpus: &Corpus,
    options: &LexiconOptions,
) -> Result<Vec<SensitivityPoint>> {
    let ranked = options.ranked_prefixes()?;
    let base = options.lexicons()?;
    SENSITIVITY_SIZES
        .iter()
        .map(|size| {
            let k = size.map_or(ranked.len(), |k| k.min(ranked.len()));
            let lexicons = base.clone().with_prefix_list(ranked[..k].to_vec());
            let report = evaluate(corpus, &options.config_with(lexicons));
            Ok(SensitivityPoint {
                prefixes: k,
                exact_match_rate: report.exact_match_rate,
            })
        })
        .collect()
}
