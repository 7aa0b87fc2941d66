//! The per-document metric vector and the full analysis battery.

use serde::{Deserialize, Serialize};

use crate::cohesion::cohesion_profile;
use crate::corpus::{Discipline, LanguageGroup};
use crate::error::{Error, Result};
use crate::lexical::lexical_profile_with_norms;
use crate::markers::llm_marker_profile;
use crate::readability::readability_scores;
use crate::resources::Resources;
use crate::sentiment::{sentiment_scores, SentimentOptions};
use crate::syntax::{syntactic_profile, SyntaxOptions};
use crate::textkit::AnalyzedText;

/// Column order of every metric, fixed across runs.
pub const METRIC_NAMES: [&str; 35] = [
    "avg_word_length",
    "word_count",
    "content_tokens",
    "content_types",
    "function_tokens",
    "function_types",
    "lexical_density_types",
    "lexical_density_tokens",
    "mattr50",
    "range_log_aw",
    "frequency_log_aw",
    "sentence_count",
    "tunit_count",
    "clause_count",
    "mlc",
    "mls",
    "mltu",
    "tus",
    "adjacent_overlap_all",
    "adjacent_overlap_argument",
    "lsa_all_sent",
    "basic_connectives",
    "order",
    "reason_and_purpose",
    "all_logical",
    "all_temporal",
    "fre",
    "ndc",
    "polarity",
    "objectivity",
    "subjectivity",
    "llm_adj_count",
    "llm_adv_count",
    "llm_adj_rate",
    "llm_adv_rate",
];

pub const METRIC_COUNT: usize = METRIC_NAMES.len();

pub fn metric_index(name: &str) -> Result<usize> {
    METRIC_NAMES
        .iter()
        .position(|m| *m == name)
        .ok_or_else(|| Error::InvalidMetric(name.to_string()))
}

/// One value per entry of [`METRIC_NAMES`]; `None` marks an undefined metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleProfile {
    pub values: Vec<Option<f64>>,
}

impl Default for StyleProfile {
    fn default() -> Self {
        StyleProfile {
            values: vec![None; METRIC_COUNT],
        }
    }
}

impl StyleProfile {
    pub fn get(&self, name: &str) -> Result<Option<f64>> {
        Ok(self.values[metric_index(name)?])
    }

    pub fn set(&mut self, name: &str, value: Option<f64>) {
        let i = metric_index(name).expect("known metric");
        self.values[i] = value.filter(|v| v.is_finite());
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, Option<f64>)> + '_ {
        METRIC_NAMES.iter().copied().zip(self.values.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ProfileOptions {
    pub syntax: SyntaxOptions,
    pub sentiment: SentimentOptions,
    /// Divide shared types by the union instead of the earlier sentence's types.
    pub symmetric_overlap: bool,
}

/// A failure of one metric family on one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricError {
    pub family: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentAnalysis {
    pub profile: StyleProfile,
    pub errors: Vec<MetricError>,
}

/// Runs every metric family on a raw abstract. Only an empty text is fatal;
/// other failures leave their columns empty and are reported in `errors`.
pub fn analyze_document(raw: &str, resources: &Resources, options: &ProfileOptions) -> Result<DocumentAnalysis> {
    let analyzed = resources.textkit.analyze_raw(raw)?;
    Ok(profile_of(&analyzed, resources, options))
}

pub fn profile_of(analyzed: &AnalyzedText, res: &Resources, options: &ProfileOptions) -> DocumentAnalysis {
    let mut p = StyleProfile::default();
    let mut errors = Vec::new();
    let mut fail = |family: &str, e: Error| {
        errors.push(MetricError {
            family: family.to_string(),
            message: e.to_string(),
        })
    };
    let f = |n: usize| Some(n as f64);

    match lexical_profile_with_norms(analyzed, &res.norms) {
        Ok(l) => {
            p.set("avg_word_length", Some(l.avg_word_length));
            p.set("word_count", f(l.word_count));
            p.set("content_tokens", f(l.content_tokens));
            p.set("content_types", f(l.content_types));
            p.set("function_tokens", f(l.function_tokens));
            p.set("function_types", f(l.function_types));
            p.set("lexical_density_types", Some(l.lexical_density_types));
            p.set("lexical_density_tokens", Some(l.lexical_density_tokens));
            p.set("mattr50", Some(l.mattr50));
            p.set("range_log_aw", l.range_log_aw);
            p.set("frequency_log_aw", l.frequency_log_aw);
        }
        Err(e) => fail("lexical", e),
    }

    match syntactic_profile(analyzed, &options.syntax) {
        Ok(s) => {
            p.set("sentence_count", f(s.sentence_count));
            p.set("tunit_count", f(s.tunit_count));
            p.set("clause_count", f(s.clause_count));
            p.set("mlc", Some(s.mlc));
            p.set("mls", Some(s.mls));
            p.set("mltu", s.mltu);
            p.set("tus", Some(s.tus));
        }
        Err(e) => fail("syntax", e),
    }

    let c = cohesion_profile(analyzed, &res.connectives, res.vectors.as_ref(), options.symmetric_overlap);
    p.set("adjacent_overlap_all", c.adjacent_overlap_all);
    p.set("adjacent_overlap_argument", c.adjacent_overlap_argument);
    p.set("lsa_all_sent", c.lsa_all_sent);
    p.set("basic_connectives", Some(c.connectives.basic_connectives));
    p.set("order", Some(c.connectives.order));
    p.set("reason_and_purpose", Some(c.connectives.reason_and_purpose));
    p.set("all_logical", Some(c.connectives.all_logical));
    p.set("all_temporal", Some(c.connectives.all_temporal));

    match readability_scores(analyzed, &res.easy_words) {
        Ok(r) => {
            p.set("fre", Some(r.fre));
            p.set("ndc", Some(r.ndc));
        }
        Err(e) => fail("readability", e),
    }

    match sentiment_scores(analyzed, &res.sentiment, &options.sentiment) {
        Ok(s) => {
            p.set("polarity", Some(s.polarity));
            p.set("objectivity", Some(s.objectivity));
            p.set("subjectivity", Some(s.subjectivity));
        }
        Err(e) => fail("sentiment", e),
    }

    let m = llm_marker_profile(analyzed, &res.llm_words);
    p.set("llm_adj_count", f(m.llm_adj_count));
    p.set("llm_adv_count", f(m.llm_adv_count));
    p.set("llm_adj_rate", Some(m.llm_adj_rate));
    p.set("llm_adv_rate", Some(m.llm_adv_rate));

    DocumentAnalysis { profile: p, errors }
}

/// A profile with the labels needed for grouping and period bucketing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub doc_id: String,
    pub period: u32,
    pub discipline: Discipline,
    pub language_group: LanguageGroup,
    pub country: Option<String>,
    pub profile: StyleProfile,
}
