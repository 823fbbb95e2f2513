use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use capline_cli::ResultRecord;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn capline(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capline"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    fs::read_to_string(golden_dir().join(name)).unwrap()
}

#[test]
fn extract_newton_json() {
    let out = capline(
        &["extract", "newton.txt", "--format", "json"],
        &golden_dir(),
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("newton.jsonl"));
    let record: ResultRecord = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record.authors.len(), 1);
    assert_eq!(record.authors[0].given, ["Isaac"]);
    assert_eq!(record.authors[0].surname, "Newton");
}

#[test]
fn extract_empty_file_succeeds_with_no_authors() {
    let out = capline(&["extract", "empty.txt"], &golden_dir());
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["authors"], serde_json::json!([]));
}

#[test]
fn extract_tsv_golden() {
    let out = capline(&["extract", "page.txt", "--format", "tsv"], &golden_dir());
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("page.tsv"));
}

#[test]
fn extract_keeps_argument_order_and_reports_unreadable_files() {
    let dir = golden_dir();
    let args = [
        "extract",
        "page.txt",
        "missing.txt",
        "newton.txt",
        "empty.txt",
    ];
    let out = capline(&args, &dir);
    assert!(out.status.success());
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let paths: Vec<&str> = lines.iter().map(|v| v["path"].as_str().unwrap()).collect();
    assert_eq!(paths, &args[1..]);
    assert!(lines[1]["error"].is_string());

    let again = capline(&args, &dir);
    assert_eq!(out.stdout, again.stdout);

    let all_missing = capline(&["extract", "missing.txt", "also-missing.txt"], &dir);
    assert!(!all_missing.status.success());
}

#[test]
fn encode_newton_with_spans() {
    let dir = golden_dir();
    let plain = capline(&["encode", "newton.txt", "--no-prefixes"], &dir);
    assert_eq!(stdout(&plain), "LnnnnLnnL\n");
    let spans = capline(&["encode", "newton.txt", "--no-prefixes", "--spans"], &dir);
    assert_eq!(stdout(&spans), golden("newton.spans"));

    let text = golden("newton.txt");
    for row in stdout(&spans).lines().skip(1) {
        let fields: Vec<&str> = row.split('\t').collect();
        let (start, end): (usize, usize) = (fields[2].parse().unwrap(), fields[3].parse().unwrap());
        assert_eq!(format!("{:?}", &text[start..end]), fields[4]);
    }
}

#[test]
fn encode_empty_file() {
    let out = capline(&["encode", "empty.txt"], &golden_dir());
    assert!(out.status.success());
    assert_eq!(stdout(&out), "L\n");
    assert!(!capline(&["encode", "missing.txt"], &golden_dir())
        .status
        .success());
}

#[test]
fn build_lexicon_examples() {
    let dir = tempfile::tempdir().unwrap();
    let names = golden_dir().join("names.txt");
    let run = |freqs: &str, top_k: &str| {
        let freq_path = dir.path().join("freqs.tsv");
        let out_path = dir.path().join("prefixes.txt");
        let _ = fs::remove_file(&out_path);
        fs::write(&freq_path, freqs).unwrap();
        let out = capline(
            &[
                "build-lexicon",
                "--names",
                names.to_str().unwrap(),
                "--freqs",
                freq_path.to_str().unwrap(),
                "--top-k",
                top_k,
                "-o",
                out_path.to_str().unwrap(),
            ],
            dir.path(),
        );
        (out, fs::read_to_string(&out_path).unwrap_or_default())
    };

    let (out, text) = run("nonlinear\t10\n", "50");
    assert!(out.status.success());
    assert_eq!(capline::load_lexicon(&text).unwrap(), ["no"]);

    let (out, text) = run("", "50");
    assert!(out.status.success());
    assert!(text.is_empty());

    let (_, text) = run("zeta\t5\nalpha\t5\n", "1");
    assert_eq!(capline::load_lexicon(&text).unwrap(), ["a"]);

    let (out, _) = run("ok\t1\nbroken line\n", "5");
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn evaluate_empty_dir_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = capline(&["evaluate", dir.path().to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    assert!(stdout(&out).contains("cases: 0/0"));
}

#[test]
fn evaluate_reports_failing_and_invalid_cases() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path();
    fs::copy(golden_dir().join("newton.txt"), path.join("newton.txt")).unwrap();
    fs::write(
        path.join("newton.json"),
        r#"{"authors":[{"given":["Isaac"],"initials":[],"surname":"Newton"}],"tags":["lower:nn"]}"#,
    )
    .unwrap();
    let out = capline(
        &["evaluate", path.to_str().unwrap(), "--format", "json"],
        path,
    );
    assert!(out.status.success(), "{}", stdout(&out));

    fs::write(path.join("wrong.txt"), "A title\n\nAda Lovelace\n").unwrap();
    fs::write(
        path.join("wrong.json"),
        r#"{"authors":[{"surname":"Babbage"}]}"#,
    )
    .unwrap();
    let out = capline(
        &["evaluate", path.to_str().unwrap(), "--format", "json"],
        path,
    );
    assert!(!out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rate = report["exact_match_rate"].as_f64().unwrap();
    assert!(rate < 1.0 && rate > 0.0);

    fs::remove_file(path.join("wrong.json")).unwrap();
    let out = capline(&["evaluate", path.to_str().unwrap()], path);
    assert!(!out.status.success());
    assert!(stdout(&out).contains("missing expectation"));
}

#[test]
fn bundled_corpus_evaluates_clean() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let out = capline(&["evaluate", corpus.to_str().unwrap()], &corpus);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(!stdout(&out).contains("missing coverage"));
}
