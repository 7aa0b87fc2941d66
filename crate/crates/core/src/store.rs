//! The feature store: one CSV row per analyzed document plus a JSON schema.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{Discipline, LanguageGroup};
use crate::error::{Error, Result};
use crate::profile::{FeatureRow, StyleProfile, METRIC_COUNT, METRIC_NAMES};

pub const KEY_COLUMNS: [&str; 5] = ["doc_id", "period", "discipline", "language_group", "country"];

pub fn header() -> Vec<&'static str> {
    KEY_COLUMNS.iter().chain(METRIC_NAMES.iter()).copied().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnInfo {
    pub name: String,
    pub unit: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreSchema {
    pub columns: Vec<ColumnInfo>,
    pub config_hash: String,
    pub rows: usize,
}

fn describe(name: &str) -> (&'static str, &'static str) {
    match name {
        "doc_id" => ("id", "document identifier"),
        "period" => ("ordinal", "quarter index from the first quarter of the window start year"),
        "discipline" => ("label", "discipline of the primary category"),
        "language_group" => ("label", "first-author language group"),
        "country" => ("label", "first-author country, empty when unknown"),
        "avg_word_length" => ("characters", "mean length of lexical words"),
        "word_count" => ("words", "word tokens"),
        "content_tokens" | "function_tokens" => ("words", "word tokens of the class"),
        "content_types" | "function_types" => ("types", "distinct words of the class"),
        "lexical_density_types" | "lexical_density_tokens" => ("ratio", "content share among classified words"),
        "mattr50" => ("ratio", "moving-average type-token ratio, window 50"),
        "range_log_aw" | "frequency_log_aw" => ("log10", "mean norm value over covered words"),
        "sentence_count" => ("sentences", "sentences"),
        "tunit_count" => ("t-units", "t-units"),
        "clause_count" => ("clauses", "finite clauses"),
        "mlc" => ("words", "mean length of clause"),
        "mls" => ("words", "mean length of sentence"),
        "mltu" => ("words", "mean length of t-unit"),
        "tus" => ("ratio", "t-units per sentence"),
        "adjacent_overlap_all" | "adjacent_overlap_argument" => ("ratio", "shared types between adjacent sentences"),
        "lsa_all_sent" => ("cosine", "mean similarity of adjacent sentences"),
        "basic_connectives" | "order" | "reason_and_purpose" | "all_logical" | "all_temporal" => ("per word", "connective matches per word"),
        "fre" => ("score", "Flesch reading ease"),
        "ndc" => ("score", "New Dale-Chall"),
        "polarity" => ("score", "sentence-averaged polarity in [-1, 1]"),
        "objectivity" => ("score", "1 - subjectivity"),
        "subjectivity" => ("score", "sentence-averaged subjectivity"),
        "llm_adj_count" | "llm_adv_count" => ("words", "listed marker words"),
        "llm_adj_rate" | "llm_adv_rate" => ("per 1000 words", "listed marker words per 1000 word tokens"),
        _ => ("", ""),
    }
}

impl StoreSchema {
    pub fn new(config_hash: &str, rows: usize) -> Self {
        StoreSchema {
            columns: header()
                .into_iter()
                .map(|name| {
                    let (unit, description) = describe(name);
                    ColumnInfo {
                        name: name.to_string(),
                        unit: unit.to_string(),
                        description: description.to_string(),
                    }
                })
                .collect(),
            config_hash: config_hash.to_string(),
            rows,
        }
    }
}

/// Path of the schema written next to `store`.
pub fn schema_path(store: &Path) -> PathBuf {
    let mut name = store.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".schema.json");
    store.with_file_name(name)
}

fn format_value(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// Writes rows in doc_id order together with the schema file.
pub fn write_store(path: &Path, rows: &[FeatureRow], config_hash: &str) -> Result<()> {
    let mut sorted: Vec<&FeatureRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::io(path, std::io::Error::other(e));
    w.write_record(header()).map_err(io)?;
    for r in sorted {
        let mut rec = vec![
            r.doc_id.clone(),
            r.period.to_string(),
            r.discipline.name().to_string(),
            r.language_group.name().to_string(),
            r.country.clone().unwrap_or_default(),
        ];
        rec.extend(r.profile.values.iter().map(|v| format_value(*v)));
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let schema = serde_json::to_string_pretty(&StoreSchema::new(config_hash, rows.len())).expect("schema serializes");
    let sp = schema_path(path);
    fs::write(&sp, schema + "\n").map_err(|e| Error::io(sp, e))
}

pub fn read_schema(store: &Path) -> Result<Option<StoreSchema>> {
    let sp = schema_path(store);
    if !sp.is_file() {
        return Ok(None);
    }
    let text = fs::read_to_string(&sp).map_err(|e| Error::io(&sp, e))?;
    serde_json::from_str(&text).map(Some).map_err(|e| Error::Schema(format!("{}: {e}", sp.display())))
}

/// Reads a store. Key columns are mandatory; metric columns absent from the
/// file are reported by name unless `allow_missing_metrics` is set, in which
/// case they read as undefined.
pub fn read_store(path: &Path, allow_missing_metrics: bool) -> Result<Vec<FeatureRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_store_str(&text, allow_missing_metrics)
}

pub fn read_store_str(text: &str, allow_missing_metrics: bool) -> Result<Vec<FeatureRow>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Schema(e.to_string()))?.clone();
    let index: BTreeMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let missing: Vec<&str> = header()
        .into_iter()
        .filter(|c| !index.contains_key(c))
        .filter(|c| !allow_missing_metrics || KEY_COLUMNS.contains(c))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Schema(format!("feature store lacks columns: {}", missing.join(", "))));
    }
    let metric_cols: Vec<Option<usize>> = METRIC_NAMES.iter().map(|m| index.get(m).copied()).collect();
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Schema(format!("line {line}: {e}")))?;
        let field = |name: &str| rec.get(index[name]).unwrap_or("");
        let bad = |what: &str, v: &str| Error::Schema(format!("line {line}: invalid {what} `{v}`"));
        let period = field("period").parse::<u32>().map_err(|_| bad("period", field("period")))?;
        let discipline: Discipline = field("discipline").parse().map_err(|_| bad("discipline", field("discipline")))?;
        let language_group: LanguageGroup = field("language_group").parse().map_err(|_| bad("language_group", field("language_group")))?;
        let country = Some(field("country").to_string()).filter(|c| !c.is_empty());
        let mut values = Vec::with_capacity(METRIC_COUNT);
        for (m, col) in METRIC_NAMES.iter().zip(&metric_cols) {
            let cell = col.and_then(|c| rec.get(c)).unwrap_or("");
            values.push(if cell.is_empty() {
                None
            } else {
                Some(cell.parse::<f64>().map_err(|_| bad(m, cell))?)
            });
        }
        rows.push(FeatureRow {
            doc_id: field("doc_id").to_string(),
            period,
            discipline,
            language_group,
            country,
            profile: StyleProfile { values },
        });
    }
    Ok(rows)
}
