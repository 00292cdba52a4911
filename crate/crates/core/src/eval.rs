//! Scoring of free-text predictions against gold answers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::forge::DatasetRecord;
use crate::templates::OutputType;

pub const NUMERIC_RTOL: f64 = 1e-5;
pub const NUMERIC_ATOL: f64 = 1e-8;

static NUMBER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[-+]?\d+(?:\.\d+)?").expect("valid regex"));

/// Lowercase, keep only `[a-z0-9 ]`, collapse whitespace, trim.
pub fn normalize_text(s: &str) -> String {
    let lowered = s.to_lowercase();
    let kept: String = lowered
        .chars()
        .map(|c| if c.is_whitespace() { ' ' } else { c })
        .filter(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || *c == ' ')
        .collect();
    kept.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn parse_boolean(s: &str) -> Option<bool> {
    match normalize_text(s).split(' ').next()? {
        "yes" | "true" => Some(true),
        "no" | "false" => Some(false),
        _ => None,
    }
}

pub fn parse_number(s: &str) -> Option<f64> {
    if let Ok(v) = s.trim().parse::<f64>() {
        if v.is_finite() {
            return Some(v);
        }
    }
    NUMBER.find(s).and_then(|m| m.as_str().parse().ok())
}

pub fn numbers_close(pred: f64, gold: f64) -> bool {
    (pred - gold).abs() <= NUMERIC_ATOL + NUMERIC_RTOL * gold.abs()
}

/// `(correct, abs_error)`; the error is `None` when nothing parses.
pub fn score_numeric(pred: &str, gold: f64) -> (bool, Option<f64>) {
    match parse_number(pred) {
        Some(p) => (numbers_close(p, gold), Some((p - gold).abs())),
        None => (false, None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub correct: bool,
}

fn as_set<'a>(items: impl IntoIterator<Item = &'a str>) -> BTreeSet<String> {
    items.into_iter().map(normalize_text).filter(|s| !s.is_empty()).collect()
}

/// Gold list answers are serialised with `", "`; predictions are split on commas.
pub fn score_set(pred_text: &str, gold: &[String]) -> SetScore {
    let pred = as_set(pred_text.split(','));
    let gold = as_set(gold.iter().map(String::as_str));
    let hit = pred.intersection(&gold).count() as f64;
    let precision = if pred.is_empty() { 0.0 } else { hit / pred.len() as f64 };
    let recall = if gold.is_empty() { 0.0 } else { hit / gold.len() as f64 };
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    SetScore { precision, recall, f1, correct: pred == gold }
}

/// Normalised full-string match; with `prefix`, the prediction only has to
/// start with the gold answer.
pub fn score_categorical(pred: &str, gold: &str, prefix: bool) -> bool {
    let (p, g) = (normalize_text(pred), normalize_text(gold));
    if prefix {
        p == g || p.starts_with(&format!("{g} "))
    } else {
        p == g
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringOptions {
    pub categorical_prefix: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParsedValue {
    Bool(bool),
    Number(f64),
    Text(String),
    Set(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredRecord {
    pub question_id: String,
    pub template_id: String,
    pub group: String,
    pub answer_type: OutputType,
    pub correct: bool,
    pub parsed_pred: Option<ParsedValue>,
    /// Gold label of a boolean question.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gold_bool: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set_score: Option<SetScore>,
}

pub fn score_record(record: &DatasetRecord, prediction: &str, opts: ScoringOptions) -> Result<ScoredRecord> {
    let mut scored = ScoredRecord {
        question_id: record.question_id.clone(),
        template_id: record.template_id.clone(),
        group: record.group.to_string(),
        answer_type: record.output_type,
        correct: false,
        parsed_pred: None,
        gold_bool: None,
        abs_error: None,
        set_score: None,
    };
    let bad_gold = || ForgeError::Mismatch(format!("{}: gold answer `{}` is not {}", record.question_id, record.answer, record.output_type));
    match record.output_type {
        OutputType::String => {
            scored.correct = score_categorical(prediction, &record.answer, opts.categorical_prefix);
            scored.parsed_pred = Some(ParsedValue::Text(normalize_text(prediction)));
        }
        OutputType::Boolean => {
            let gold = parse_boolean(&record.answer).ok_or_else(bad_gold)?;
            let pred = parse_boolean(prediction);
            scored.gold_bool = Some(gold);
            scored.correct = pred == Some(gold);
            scored.parsed_pred = pred.map(ParsedValue::Bool);
        }
        OutputType::Numeric => {
            let gold = record.answer.trim().parse::<f64>().map_err(|_| bad_gold())?;
            let (correct, err) = score_numeric(prediction, gold);
            scored.correct = correct;
            scored.abs_error = err;
            scored.parsed_pred = parse_number(prediction).map(ParsedValue::Number);
        }
        OutputType::List => {
            let gold: Vec<String> = record.answer.split(", ").map(str::to_string).collect();
            let s = score_set(prediction, &gold);
            scored.correct = s.correct;
            scored.set_score = Some(s);
            scored.parsed_pred = Some(ParsedValue::Set(as_set(prediction.split(',')).into_iter().collect()));
        }
    }
    if scored.parsed_pred.is_none() {
        log::debug!("{}: unparseable prediction {prediction:?}", record.question_id);
    }
    Ok(scored)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoricalStats {
    pub n: usize,
    pub accuracy: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BooleanStats {
    pub n: usize,
    pub accuracy: f64,
    pub f1: f64,
    pub mcc: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericStats {
    pub n: usize,
    pub n_parsed: usize,
    pub accuracy: f64,
    /// Over parseable predictions only; `None` when there are none.
    pub mae: Option<f64>,
    pub rmse: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetStats {
    pub n: usize,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PerTypeStats {
    pub categorical: Option<CategoricalStats>,
    pub boolean: Option<BooleanStats>,
    pub numeric: Option<NumericStats>,
    pub set: Option<SetStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_records: usize,
    pub overall_accuracy: f64,
    pub per_type: PerTypeStats,
    pub per_group: BTreeMap<String, f64>,
    pub per_template: BTreeMap<String, f64>,
}

fn accuracy<'a>(rs: impl IntoIterator<Item = &'a ScoredRecord>) -> (usize, f64) {
    let (n, hits) = rs.into_iter().fold((0, 0), |(n, h), r| (n + 1, h + r.correct as usize));
    (n, if n == 0 { 0.0 } else { hits as f64 / n as f64 })
}

/// Matthews correlation from a confusion matrix; 0 when a marginal is empty.
pub fn mcc(tp: f64, tn: f64, fp: f64, fn_: f64) -> f64 {
    let denom = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
    if denom == 0.0 {
        0.0
    } else {
        (tp * tn - fp * fn_) / denom.sqrt()
    }
}

/// F1 of the positive class; 0 when there are no positives at all.
pub fn binary_f1(tp: f64, fp: f64, fn_: f64) -> f64 {
    let denom = 2.0 * tp + fp + fn_;
    if denom == 0.0 { 0.0 } else { 2.0 * tp / denom }
}

fn boolean_stats(rs: &[&ScoredRecord]) -> BooleanStats {
    let (mut tp, mut tn, mut fp, mut fn_) = (0.0, 0.0, 0.0, 0.0);
    for r in rs {
        // an unparseable prediction counts as the wrong label
        let gold = r.gold_bool.unwrap_or(false);
        let pred = match &r.parsed_pred {
            Some(ParsedValue::Bool(b)) => *b,
            _ => !gold,
        };
        match (pred, gold) {
            (true, true) => tp += 1.0,
            (false, false) => tn += 1.0,
            (true, false) => fp += 1.0,
            (false, true) => fn_ += 1.0,
        }
    }
    let (n, acc) = accuracy(rs.iter().copied());
    BooleanStats { n, accuracy: acc, f1: binary_f1(tp, fp, fn_), mcc: mcc(tp, tn, fp, fn_) }
}

fn numeric_stats(rs: &[&ScoredRecord]) -> NumericStats {
    let errs: Vec<f64> = rs.iter().filter_map(|r| r.abs_error).collect();
    let (n, acc) = accuracy(rs.iter().copied());
    let k = errs.len() as f64;
    NumericStats {
        n,
        n_parsed: errs.len(),
        accuracy: acc,
        mae: (!errs.is_empty()).then(|| errs.iter().sum::<f64>() / k),
        rmse: (!errs.is_empty()).then(|| (errs.iter().map(|e| e * e).sum::<f64>() / k).sqrt()),
    }
}

fn set_stats(rs: &[&ScoredRecord]) -> SetStats {
    let scores: Vec<SetScore> = rs.iter().filter_map(|r| r.set_score).collect();
    let k = scores.len().max(1) as f64;
    let (n, acc) = accuracy(rs.iter().copied());
    SetStats {
        n,
        accuracy: acc,
        precision: scores.iter().map(|s| s.precision).sum::<f64>() / k,
        recall: scores.iter().map(|s| s.recall).sum::<f64>() / k,
        f1: scores.iter().map(|s| s.f1).sum::<f64>() / k,
    }
}

pub fn aggregate(scored: &[ScoredRecord]) -> Result<EvalReport> {
    if scored.is_empty() {
        return Err(ForgeError::EmptyInput);
    }
    let of = |t: OutputType| scored.iter().filter(|r| r.answer_type == t).collect::<Vec<_>>();
    let (cat, boolean, num, set) = (of(OutputType::String), of(OutputType::Boolean), of(OutputType::Numeric), of(OutputType::List));
    let per_type = PerTypeStats {
        categorical: (!cat.is_empty()).then(|| {
            let (n, accuracy) = accuracy(cat.iter().copied());
            CategoricalStats { n, accuracy }
        }),
        boolean: (!boolean.is_empty()).then(|| boolean_stats(&boolean)),
        numeric: (!num.is_empty()).then(|| numeric_stats(&num)),
        set: (!set.is_empty()).then(|| set_stats(&set)),
    };
    let grouped = |key: fn(&ScoredRecord) -> &str| {
        let mut buckets: BTreeMap<String, Vec<&ScoredRecord>> = BTreeMap::new();
        for r in scored {
            buckets.entry(key(r).to_string()).or_default().push(r);
        }
        buckets.into_iter().map(|(k, v)| (k, accuracy(v).1)).collect::<BTreeMap<_, _>>()
    };
    Ok(EvalReport {
        n_records: scored.len(),
        overall_accuracy: accuracy(scored).1,
        per_type,
        per_group: grouped(|r| &r.group),
        per_template: grouped(|r| &r.template_id),
    })
}

/// One line of a predictions file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub question_id: String,
    pub prediction: String,
}

/// Scores every dataset record. Predictions for unknown or repeated ids are
/// errors; records without a prediction are errors unless `allow_missing`,
/// in which case they are scored as an empty answer.
pub fn evaluate(
    dataset: &[DatasetRecord],
    predictions: &[Prediction],
    allow_missing: bool,
    opts: ScoringOptions,
) -> Result<(EvalReport, Vec<ScoredRecord>)> {
    let known: BTreeSet<&str> = dataset.iter().map(|r| r.question_id.as_str()).collect();
    let mut by_id: HashMap<&str, &str> = HashMap::with_capacity(predictions.len());
    for p in predictions {
        if !known.contains(p.question_id.as_str()) {
            return Err(ForgeError::Mismatch(format!("prediction for unknown question `{}`", p.question_id)));
        }
        if by_id.insert(&p.question_id, &p.prediction).is_some() {
            return Err(ForgeError::Mismatch(format!("duplicate prediction for `{}`", p.question_id)));
        }
    }
    let mut scored = Vec::with_capacity(dataset.len());
    let mut missing = 0;
    for r in dataset {
        let pred = match by_id.get(r.question_id.as_str()) {
            Some(p) => *p,
            None if allow_missing => {
                missing += 1;
                ""
            }
            None => return Err(ForgeError::Mismatch(format!("no prediction for question `{}`", r.question_id))),
        };
        scored.push(score_record(r, pred, opts)?);
    }
    if missing > 0 {
        log::warn!("{missing} questions had no prediction and were scored incorrect");
    }
    Ok((aggregate(&scored)?, scored))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normalisation() {
        assert_eq!(normalize_text("Red Line!"), "red line");
        assert_eq!(normalize_text("  CLEAN "), "clean");
        assert_eq!(normalize_text("v2.0"), "v20");
        assert_eq!(normalize_text("a\t\nb"), "a b");
    }

    #[test]
    fn booleans() {
        assert_eq!(parse_boolean("True"), Some(true));
        assert_eq!(parse_boolean("no, it does not"), Some(false));
        assert_eq!(parse_boolean("maybe"), None);
        assert_eq!(parse_boolean(""), None);
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_number("12"), Some(12.0));
        assert_eq!(parse_number("There are 7 stations"), Some(7.0));
        assert_eq!(parse_number("none"), None);
        assert_eq!(parse_number("-3.5 degrees"), Some(-3.5));
        assert_eq!(score_numeric("7", 7.0), (true, Some(0.0)));
        assert!(score_numeric("7.0000001", 7.0).0);
        assert_eq!(score_numeric("6", 7.0), (false, Some(1.0)));
        assert_eq!(score_numeric("n/a", 7.0), (false, None));
    }

    #[test]
    fn sets() {
        let gold = vec!["A".to_string(), "B".to_string()];
        let full = score_set("b, a", &gold);
        assert_eq!((full.precision, full.recall, full.f1, full.correct), (1.0, 1.0, 1.0, true));
        let half = score_set("A", &gold);
        assert_eq!((half.precision, half.recall), (1.0, 0.5));
        assert_abs_diff_eq!(half.f1, 2.0 / 3.0, epsilon = 1e-12);
        let empty = score_set("", &gold);
        assert_eq!((empty.precision, empty.recall, empty.f1, empty.correct), (0.0, 0.0, 0.0, false));
    }

    #[test]
    fn categorical_prefix_flag() {
        assert!(score_categorical("Jazz.", "jazz", false));
        assert!(!score_categorical("jazz music", "jazz", false));
        assert!(score_categorical("jazz music", "jazz", true));
        assert!(!score_categorical("jazzy", "jazz", true));
    }

    #[test]
    fn mcc_values() {
        assert_eq!(mcc(1.0, 1.0, 1.0, 1.0), 0.0);
        assert_eq!(mcc(2.0, 2.0, 0.0, 0.0), 1.0);
        assert_eq!(mcc(3.0, 0.0, 0.0, 0.0), 0.0);
        assert_eq!(mcc(0.0, 0.0, 2.0, 2.0), -1.0);
    }

    #[test]
    fn empty_aggregate_errors() {
        assert!(matches!(aggregate(&[]), Err(ForgeError::EmptyInput)));
    }
}
