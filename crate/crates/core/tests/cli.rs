use std::fs;
use std::path::Path;
use std::process::Command;

use clegr_core::eval::{EvalReport, Prediction};
use clegr_core::forge::DatasetRecord;
use clegr_core::io::{read_jsonl, sha256_file, write_jsonl, Manifest};
use clegr_core::textualize::PromptRecord;

fn forge(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_clegr-forge")).args(args).env("CLEGR_FORGE_JOBS", "2").output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn generate(dir: &Path, extra: &[&str]) {
    let mut args = vec!["generate", "--out", dir.to_str().unwrap(), "--n-graphs", "6", "--seed", "11"];
    args.extend_from_slice(extra);
    forge(&args);
}

#[test]
fn generate_is_reproducible_and_manifest_hashes_match() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    generate(&a, &[]);
    generate(&b, &["--jobs", "1"]);
    for f in ["graphs.jsonl", "dataset.jsonl"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let m: Manifest = serde_json::from_str(&fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m.n_graphs, 6);
    assert_eq!(m.n_questions, 6 * 44);
    for (name, entry) in &m.files {
        assert_eq!(entry.sha256, sha256_file(&a.join(name)).unwrap());
    }
}

#[test]
fn config_file_and_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.toml");
    fs::write(&cfg, "domain = \"network\"\nsubset = \"reasoning\"\nper_template = 1\n").unwrap();
    let out = tmp.path().join("net");
    forge(&["generate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--n-graphs", "3"]);
    let records: Vec<DatasetRecord> = read_jsonl(&out.join("dataset.jsonl")).unwrap();
    assert!(!records.is_empty() && records.len() <= 3 * 11);

    fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_clegr-forge"))
        .args(["generate", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("x").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(!tmp.path().join("x/dataset.jsonl").exists());
}

#[test]
fn stats_export_evaluate_split() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("d");
    generate(&d, &[]);
    let p = |name: &str| d.join(name).to_str().unwrap().to_string();

    let stats = forge(&["stats", &p("graphs.jsonl"), "--json", &p("stats.json")]);
    assert!(String::from_utf8(stats.stdout).unwrap().starts_with("graphs"));
    assert!(d.join("stats.json").exists());

    forge(&["export-prompts", "--dataset", &p("dataset.jsonl"), "--graphs", &p("graphs.jsonl"), "--out", &p("prompts.jsonl"), "--sentences", &p("sentences.jsonl")]);
    let prompts: Vec<PromptRecord> = read_jsonl(&d.join("prompts.jsonl")).unwrap();
    let records: Vec<DatasetRecord> = read_jsonl(&d.join("dataset.jsonl")).unwrap();
    assert_eq!(prompts.len(), records.len());
    assert!(prompts.iter().all(|r| r.prompt.starts_with("--- Nodes ---\n")));

    let gold: Vec<Prediction> = records.iter().map(|r| Prediction { question_id: r.question_id.clone(), prediction: r.answer.clone() }).collect();
    write_jsonl(&d.join("gold.jsonl"), &gold).unwrap();
    forge(&["evaluate", "--predictions", &p("gold.jsonl"), "--dataset", &p("dataset.jsonl"), "--out", &p("report.json"), "--scores-csv", &p("scores.csv")]);
    let report: EvalReport = serde_json::from_str(&fs::read_to_string(d.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.overall_accuracy, 1.0);
    assert_eq!(fs::read_to_string(d.join("scores.csv")).unwrap().lines().count(), records.len() + 1);

    write_jsonl(&d.join("partial.jsonl"), &gold[..1]).unwrap();
    let missing = Command::new(env!("CARGO_BIN_EXE_clegr-forge"))
        .args(["evaluate", "--predictions", &p("partial.jsonl"), "--dataset", &p("dataset.jsonl"), "--out", &p("r2.json")])
        .output()
        .unwrap();
    assert!(!missing.status.success());
    forge(&["evaluate", "--allow-missing", "--predictions", &p("partial.jsonl"), "--dataset", &p("dataset.jsonl"), "--out", &p("r2.json")]);

    forge(&["split", "--dataset", &p("dataset.jsonl"), "--out", &p("resplit.jsonl"), "--seed", "3"]);
    let resplit: Vec<DatasetRecord> = read_jsonl(&d.join("resplit.jsonl")).unwrap();
    assert_eq!(resplit.len(), records.len());
    for (a, b) in records.iter().zip(&resplit) {
        assert_eq!((&a.question_id, &a.answer), (&b.question_id, &b.answer));
    }
}

#[test]
fn help_lists_config_defaults() {
    let out = forge(&["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("merge_threshold"), "{text}");
}
