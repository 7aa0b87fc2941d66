//! Config-driven commands: validate, sample, analyze, report, new-words and
//! pos-shift.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io::BufReader;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{
    assign_period, classify_document, filter_records, join_author_countries, parse_records, sample_per_period, DocumentRecord,
    FilterConfig, JoinReport, LanguageGroup, ParseError, PeriodIndex, RejectionTally,
};
use crate::driftstats::{build_grouped, change_rate, fit_trend, shift_test, GroupKey, Grouping, ResidualLevel, TrendFit};
use crate::error::{Error, Result};
use crate::markers::{detect_new_words, pos_category_shift, vocabulary_counts, CategoryCounts, NewWordConfig};
use crate::profile::{analyze_document, FeatureRow, ProfileOptions, METRIC_NAMES};
use crate::resources::{ResourcePaths, ResourceReport, Resources};
use crate::store::{read_schema, read_store, write_store};
use crate::textkit::TextOptions;

/// Inclusive span of calendar years, written `2014-2022` or `2023`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Self {
        YearRange { start, end }
    }

    pub fn periods(&self, start_year: i32) -> RangeInclusive<u32> {
        let first = ((self.start - start_year) * 4).max(0) as u32;
        let last = ((self.end - start_year) * 4 + 3).max(0) as u32;
        first..=last
    }

    pub fn overlaps(&self, other: &YearRange) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

impl FromStr for YearRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |p: &str| p.trim().parse::<i32>().map_err(|_| format!("invalid year range `{s}`"));
        let (a, b) = match s.split_once('-') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let y = parse(s)?;
                (y, y)
            }
        };
        if a > b {
            return Err(format!("year range `{s}` is reversed"));
        }
        Ok(YearRange::new(a, b))
    }
}

impl TryFrom<String> for YearRange {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<YearRange> for String {
    fn from(r: YearRange) -> String {
        r.to_string()
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}-{}", self.start, self.end)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PosShiftConfig {
    pub before_year: i32,
    pub after_year: i32,
    pub top_k: usize,
    pub threshold: f64,
}

impl Default for PosShiftConfig {
    fn default() -> Self {
        PosShiftConfig {
            before_year: 2022,
            after_year: 2023,
            top_k: 10,
            threshold: 0.04,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// JSONL corpus.
    pub corpus: Option<PathBuf>,
    /// `doc_id,country` CSV.
    pub sidecar: Option<PathBuf>,
    pub resources: ResourcePaths,
    pub text: TextOptions,
    pub filter: FilterConfig,
    pub group_by: Grouping,
    /// Documents kept per period; all when unset.
    pub sample_per_period: Option<usize>,
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    pub output_dir: PathBuf,
    pub fit_window: YearRange,
    pub post_window: YearRange,
    pub residual_level: ResidualLevel,
    pub profile: ProfileOptions,
    pub change_years: (i32, i32),
    pub new_words: NewWordConfig,
    pub pos_shift: PosShiftConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus: None,
            sidecar: None,
            resources: ResourcePaths::default(),
            text: TextOptions::default(),
            filter: FilterConfig::default(),
            group_by: Grouping::None,
            sample_per_period: None,
            seed: 0,
            workers: 0,
            output_dir: PathBuf::from("out"),
            fit_window: YearRange::new(2014, 2022),
            post_window: YearRange::new(2023, 2023),
            residual_level: ResidualLevel::Document,
            profile: ProfileOptions::default(),
            change_years: (2022, 2023),
            new_words: NewWordConfig::default(),
            pos_shift: PosShiftConfig::default(),
        }
    }
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

impl PipelineConfig {
    /// Reads a JSON config; relative paths are taken from the config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: PipelineConfig =
            serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.resolve_paths(&base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        resolve(base, &mut self.corpus);
        resolve(base, &mut self.sidecar);
        let r = &mut self.resources;
        for p in [
            &mut r.dir,
            &mut r.pos_lexicon,
            &mut r.pos_context,
            &mut r.pos_morphology,
            &mut r.abbreviations,
            &mut r.function_words,
            &mut r.syllable_exceptions,
            &mut r.easy_words,
            &mut r.norms,
            &mut r.connectives,
            &mut r.sentiment,
            &mut r.negations,
            &mut r.intensifiers,
            &mut r.llm_adjectives,
            &mut r.llm_adverbs,
            &mut r.country_groups,
            &mut r.disciplines,
            &mut r.vectors,
        ] {
            resolve(base, p);
        }
        if self.output_dir.is_relative() {
            self.output_dir = base.join(&self.output_dir);
        }
    }

    pub fn check(&self) -> Result<()> {
        self.filter.validate()?;
        if self.fit_window.overlaps(&self.post_window) {
            return Err(Error::InvalidConfig(format!("fit window {} overlaps post window {}", self.fit_window, self.post_window)));
        }
        let (lo, hi) = (self.filter.window.start_year(), self.filter.window.end.format("%Y").to_string().parse::<i32>().unwrap_or(i32::MAX));
        for (name, w) in [("fit", self.fit_window), ("post", self.post_window)] {
            if w.start < lo || w.end > hi {
                return Err(Error::InvalidConfig(format!("{name} window {w} lies outside the corpus window {lo}-{hi}")));
            }
        }
        if self.sample_per_period == Some(0) {
            return Err(Error::InvalidConfig("sample_per_period must be at least 1".into()));
        }
        for p in [&self.corpus, &self.sidecar].into_iter().flatten() {
            if !p.is_file() {
                return Err(Error::io(p, std::io::Error::new(std::io::ErrorKind::NotFound, "file not found")));
            }
        }
        Ok(())
    }

    fn corpus_path(&self) -> Result<&Path> {
        self.corpus.as_deref().ok_or_else(|| Error::InvalidConfig("no corpus configured".into()))
    }

    pub fn store_path(&self) -> PathBuf {
        self.output_dir.join("features.csv")
    }

    fn start_year(&self) -> i32 {
        self.filter.window.start_year()
    }

    /// Hash of everything that changes the analysis of a document.
    pub fn analysis_hash(&self, resources: &ResourceReport) -> String {
        #[derive(Serialize)]
        struct Key<'a> {
            text: &'a TextOptions,
            profile: &'a ProfileOptions,
            resources: &'a str,
        }
        let key = Key {
            text: &self.text,
            profile: &self.profile,
            resources: &resources.digest,
        };
        let json = serde_json::to_string(&key).expect("hash key serializes");
        format!("{:x}", Sha256::digest(json.as_bytes()))
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))
    }
}

/// Loads resources named by the config, falling back on the environment
/// directory and then the bundled files.
pub fn load_resources(cfg: &PipelineConfig) -> Result<Resources> {
    let env = std::env::var_os(crate::resources::RESOURCE_DIR_ENV).map(PathBuf::from);
    Resources::load_with_options(&cfg.resources, env.as_deref(), cfg.text)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::io(path, std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn fmt_f(v: f64) -> String {
    format!("{v}")
}

/// One line of the errors sidecar.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ErrorRow {
    pub stage: String,
    pub doc_id: String,
    pub line: Option<usize>,
    pub message: String,
}

fn write_errors(path: &Path, errors: &[ErrorRow]) -> Result<()> {
    let rows: Vec<Vec<String>> = errors
        .iter()
        .map(|e| vec![e.stage.clone(), e.doc_id.clone(), e.line.map(|l| l.to_string()).unwrap_or_default(), e.message.clone()])
        .collect();
    write_csv(path, &["stage", "doc_id", "line", "message"], &rows)
}

/// Filtered, classified and optionally sampled corpus.
#[derive(Debug, Clone, Default)]
pub struct LoadedCorpus {
    pub records: Vec<(DocumentRecord, PeriodIndex)>,
    pub parse_errors: Vec<ParseError>,
    pub rejected: RejectionTally,
    pub join: Option<JoinReport>,
}

pub fn load_corpus(cfg: &PipelineConfig, res: &Resources) -> Result<LoadedCorpus> {
    let path = cfg.corpus_path()?;
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let (mut records, parse_errors) = parse_records(BufReader::new(file))?;
    let join = match &cfg.sidecar {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            Some(join_author_countries(&mut records, &text)?)
        }
        None => None,
    };
    let (kept, rejected) = filter_records(records, &cfg.filter, &res.textkit, &res.disciplines);
    let mut kept: Vec<DocumentRecord> = kept.into_iter().map(|r| classify_document(r, &res.disciplines, &res.country_groups)).collect();
    if let Some(n) = cfg.sample_per_period {
        kept = sample_per_period(&kept, n, cfg.seed, &cfg.filter.window)?;
    }
    let records = kept
        .into_iter()
        .map(|r| {
            let p = assign_period(r.submitted_at, &cfg.filter.window)?;
            Ok((r, p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LoadedCorpus {
        records,
        parse_errors,
        rejected,
        join,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub resources: ResourceReport,
    pub corpus_records: Option<usize>,
    pub parse_errors: usize,
    /// Share of lexical tokens of a corpus sample found in the norms.
    pub norms_coverage: Option<f64>,
}

pub fn cmd_validate(cfg: &PipelineConfig) -> Result<ValidationReport> {
    cfg.check()?;
    let res = load_resources(cfg)?;
    let mut report = ValidationReport {
        resources: res.report.clone(),
        corpus_records: None,
        parse_errors: 0,
        norms_coverage: None,
    };
    if let Some(path) = &cfg.corpus {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let (records, errors) = parse_records(BufReader::new(file))?;
        report.corpus_records = Some(records.len());
        report.parse_errors = errors.len();
        let mut words = Vec::new();
        for r in records.iter().take(200) {
            if let Ok(a) = res.textkit.analyze_raw(&r.abstract_text) {
                words.extend(a.lexical_words().map(|t| t.normalized.clone()));
            }
        }
        report.norms_coverage = res.norms_coverage(words.iter().map(String::as_str));
    }
    Ok(report)
}

pub fn cmd_sample(cfg: &PipelineConfig) -> Result<usize> {
    cfg.check()?;
    let res = load_resources(cfg)?;
    let corpus = load_corpus(cfg, &res)?;
    ensure_dir(&cfg.output_dir)?;
    let rows: Vec<Vec<String>> = corpus.records.iter().map(|(r, p)| vec![r.doc_id.clone(), p.ordinal.to_string()]).collect();
    write_csv(&cfg.output_dir.join("sample.csv"), &["doc_id", "period"], &rows)?;
    Ok(rows.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeSummary {
    pub rows: usize,
    pub computed: usize,
    pub reused: usize,
    pub errors: usize,
    pub parse_errors: usize,
    pub rejected: RejectionTally,
    pub config_hash: String,
}

/// Analyzes every retained document into the feature store. Rows of an
/// existing store written under the same analysis hash are reused.
pub fn cmd_analyze(cfg: &PipelineConfig) -> Result<AnalyzeSummary> {
    cfg.check()?;
    let res = load_resources(cfg)?;
    let corpus = load_corpus(cfg, &res)?;
    let hash = cfg.analysis_hash(&res.report);
    ensure_dir(&cfg.output_dir)?;
    let store = cfg.store_path();

    let mut previous: HashMap<String, FeatureRow> = HashMap::new();
    if store.is_file() && read_schema(&store)?.is_some_and(|s| s.config_hash == hash) {
        match read_store(&store, false) {
            Ok(rows) => previous = rows.into_iter().map(|r| (r.doc_id.clone(), r)).collect(),
            Err(e) => log::warn!("ignoring unreadable feature store: {e}"),
        }
    }

    let mut errors: Vec<ErrorRow> = corpus
        .parse_errors
        .iter()
        .map(|e| ErrorRow {
            stage: format!("parse:{}", e.reason),
            doc_id: String::new(),
            line: Some(e.line),
            message: e.detail.clone(),
        })
        .collect();

    type Outcome = (Option<FeatureRow>, Vec<ErrorRow>, bool);
    let analyze_one = |(rec, period): &(DocumentRecord, PeriodIndex)| -> Outcome {
        let make = |profile| FeatureRow {
            doc_id: rec.doc_id.clone(),
            period: period.ordinal,
            discipline: rec.discipline,
            language_group: rec.language_group,
            country: rec.first_author_country.clone(),
            profile,
        };
        if let Some(old) = previous.get(&rec.doc_id) {
            let fresh = make(old.profile.clone());
            if &fresh == old {
                return (Some(fresh), Vec::new(), true);
            }
        }
        match analyze_document(&rec.abstract_text, &res, &cfg.profile) {
            Ok(a) => {
                let errs = a
                    .errors
                    .into_iter()
                    .map(|e| ErrorRow {
                        stage: format!("metric:{}", e.family),
                        doc_id: rec.doc_id.clone(),
                        line: None,
                        message: e.message,
                    })
                    .collect();
                (Some(make(a.profile)), errs, false)
            }
            Err(e) => (
                None,
                vec![ErrorRow {
                    stage: format!("analyze:{}", e.kind()),
                    doc_id: rec.doc_id.clone(),
                    line: None,
                    message: e.to_string(),
                }],
                false,
            ),
        }
    };
    let outcomes: Vec<Outcome> = cfg.pool()?.install(|| corpus.records.par_iter().map(analyze_one).collect());

    let mut rows = Vec::with_capacity(outcomes.len());
    let mut reused = 0;
    for (row, errs, was_reused) in outcomes {
        rows.extend(row);
        errors.extend(errs);
        reused += usize::from(was_reused);
    }
    write_store(&store, &rows, &hash)?;
    write_errors(&cfg.output_dir.join("errors.csv"), &errors)?;
    log::info!("analyzed {} documents ({} reused)", rows.len(), reused);
    Ok(AnalyzeSummary {
        rows: rows.len(),
        computed: rows.len() - reused,
        reused,
        errors: errors.len(),
        parse_errors: corpus.parse_errors.len(),
        rejected: corpus.rejected,
        config_hash: hash,
    })
}

pub const SHIFT_HEADER: [&str; 14] = [
    "group",
    "metric",
    "r_squared",
    "slope",
    "intercept",
    "predicted_mean",
    "observed_mean",
    "ks_stat",
    "p_value",
    "cohens_d",
    "n_pre",
    "n_post",
    "missing",
    "status",
];
pub const CHANGE_HEADER: [&str; 6] = ["group", "metric", "year_a", "year_b", "change_pct", "status"];
pub const MEANS_HEADER: [&str; 7] = ["group", "metric", "period", "year", "quarter", "mean", "n"];
pub const NEW_WORDS_HEADER: [&str; 5] = ["period", "year", "quarter", "word", "count"];
pub const POS_SHIFT_HEADER: [&str; 7] = ["group", "category", "before", "after", "change_pct", "flagged", "top_words"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub documents: usize,
    pub groups: Vec<String>,
    pub fit_window: YearRange,
    pub post_window: YearRange,
    /// (group, metric) pairs with p < 0.001.
    pub significant: Vec<(String, String)>,
    pub tests_run: usize,
    pub tests_failed: usize,
    pub warnings: Vec<String>,
}

struct MetricReport {
    shift: Vec<Vec<String>>,
    change: Vec<Vec<String>>,
    means: Vec<Vec<String>>,
    significant: Vec<(String, String)>,
    failed: usize,
}

fn report_metric(rows: &[FeatureRow], metric: &str, cfg: &PipelineConfig) -> Result<MetricReport> {
    let start = cfg.start_year();
    let fit_periods = cfg.fit_window.periods(start);
    let post_periods = cfg.post_window.periods(start);
    let mut groups = build_grouped(rows, metric, Grouping::None)?;
    if cfg.group_by != Grouping::None {
        groups.extend(build_grouped(rows, metric, cfg.group_by)?);
    }
    let mut out = MetricReport {
        shift: Vec::new(),
        change: Vec::new(),
        means: Vec::new(),
        significant: Vec::new(),
        failed: 0,
    };
    for (key, series) in &groups {
        let g = key.to_string();
        let fit: Result<TrendFit> = fit_trend(series, fit_periods.clone());
        let test = fit.as_ref().map_err(|e| Error::InsufficientData(e.to_string())).and_then(|f| {
            shift_test(series, f, post_periods.clone(), cfg.residual_level)
        });
        let mut row = vec![g.clone(), metric.to_string()];
        match (&fit, &test) {
            (Ok(f), Ok(t)) => {
                row.extend([fmt_f(f.r_squared), fmt_f(f.slope), fmt_f(f.intercept)]);
                row.extend([fmt_f(t.predicted_mean), fmt_f(t.observed_mean), fmt_f(t.ks_stat), fmt_f(t.p_value)]);
                row.push(t.cohens_d.map(fmt_f).unwrap_or_default());
                row.extend([t.n_pre.to_string(), t.n_post.to_string(), series.missing.to_string(), "ok".into()]);
                if t.p_value < 0.001 {
                    out.significant.push((g.clone(), metric.to_string()));
                }
            }
            (fit, test) => {
                let err = test.as_ref().err().or(fit.as_ref().err()).expect("one side failed");
                let fit_cols = fit.as_ref().map(|f| [fmt_f(f.r_squared), fmt_f(f.slope), fmt_f(f.intercept)]).unwrap_or_default();
                row.extend(fit_cols);
                row.extend(std::iter::repeat(String::new()).take(5));
                row.extend([String::new(), String::new(), series.missing.to_string()]);
                let kind = match err {
                    Error::InsufficientData(_) => "insufficient_data",
                    other => other.kind(),
                };
                row.push(kind.to_string());
                out.failed += 1;
            }
        }
        out.shift.push(row);

        let (ya, yb) = cfg.change_years;
        let (value, status) = match change_rate(series, ya, yb, start) {
            Ok(v) => (fmt_f(v), "ok".to_string()),
            Err(e) => (String::new(), e.kind().to_string()),
        };
        out.change.push(vec![g.clone(), metric.to_string(), ya.to_string(), yb.to_string(), value, status]);

        for (p, (m, n)) in series.period_means() {
            let pi = PeriodIndex::from_ordinal(p, start);
            out.means.push(vec![g.clone(), metric.to_string(), p.to_string(), pi.year.to_string(), pi.quarter.to_string(), fmt_f(m), n.to_string()]);
        }
    }
    Ok(out)
}

/// Shift tests, change rates and period means for every metric and group,
/// plus the token-level tables when a corpus is configured.
pub fn cmd_report(cfg: &PipelineConfig) -> Result<ReportSummary> {
    cfg.check()?;
    let store = cfg.store_path();
    let rows = read_store(&store, false)?;
    ensure_dir(&cfg.output_dir)?;
    let reports: Vec<Result<MetricReport>> = cfg.pool()?.install(|| METRIC_NAMES.par_iter().map(|m| report_metric(&rows, m, cfg)).collect());
    let mut shift = Vec::new();
    let mut change = Vec::new();
    let mut means = Vec::new();
    let mut significant = Vec::new();
    let mut failed = 0;
    for r in reports {
        let r = r?;
        shift.extend(r.shift);
        change.extend(r.change);
        means.extend(r.means);
        significant.extend(r.significant);
        failed += r.failed;
    }
    let mut warnings = Vec::new();
    if failed > 0 {
        let msg = format!("{failed} shift tests could not be run; see the status column");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let tests_run = shift.len();
    let out = &cfg.output_dir;
    write_csv(&out.join("shift_tests.csv"), &SHIFT_HEADER, &shift)?;
    write_csv(&out.join("change_rates.csv"), &CHANGE_HEADER, &change)?;
    write_csv(&out.join("period_means.csv"), &MEANS_HEADER, &means)?;

    if cfg.corpus.is_some() {
        let res = load_resources(cfg)?;
        let corpus = load_corpus(cfg, &res)?;
        if let Err(e) = new_words_table(cfg, &res, &corpus) {
            warnings.push(format!("new-word table skipped: {e}"));
        }
        if let Err(e) = pos_shift_table(cfg, &res, &corpus) {
            warnings.push(format!("pos-shift table skipped: {e}"));
        }
    }

    let mut groups: Vec<String> = shift.iter().map(|r| r[0].clone()).collect();
    groups.sort();
    groups.dedup();
    let summary = ReportSummary {
        documents: rows.len(),
        groups,
        fit_window: cfg.fit_window,
        post_window: cfg.post_window,
        significant,
        tests_run,
        tests_failed: failed,
        warnings,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    let path = out.join("summary.json");
    fs::write(&path, json + "\n").map_err(|e| Error::io(path, e))?;
    Ok(summary)
}

fn new_words_table(cfg: &PipelineConfig, res: &Resources, corpus: &LoadedCorpus) -> Result<usize> {
    let n_periods = cfg.filter.window.period_count() as usize;
    let per_doc: Vec<(u32, HashMap<String, usize>)> = cfg.pool()?.install(|| {
        corpus
            .records
            .par_iter()
            .filter_map(|(r, p)| res.textkit.analyze_raw(&r.abstract_text).ok().map(|a| (p.ordinal, vocabulary_counts(&a))))
            .collect()
    });
    let mut periods: Vec<HashMap<String, usize>> = vec![HashMap::new(); n_periods];
    for (p, counts) in per_doc {
        let bucket = &mut periods[p as usize];
        for (w, c) in counts {
            *bucket.entry(w).or_insert(0) += c;
        }
    }
    let report = detect_new_words(&periods, &cfg.new_words)?;
    let start = cfg.start_year();
    let mut rows = Vec::new();
    for (p, words) in &report.periods {
        let pi = PeriodIndex::from_ordinal(*p as u32, start);
        for (w, c) in words {
            rows.push(vec![p.to_string(), pi.year.to_string(), pi.quarter.to_string(), w.clone(), c.to_string()]);
        }
    }
    write_csv(&cfg.output_dir.join("new_words.csv"), &NEW_WORDS_HEADER, &rows)?;
    Ok(report.total())
}

fn pos_shift_table(cfg: &PipelineConfig, res: &Resources, corpus: &LoadedCorpus) -> Result<usize> {
    let ps = cfg.pos_shift;
    let key_of = |r: &DocumentRecord| -> String {
        let probe = FeatureRow {
            doc_id: String::new(),
            period: 0,
            discipline: r.discipline,
            language_group: r.language_group,
            country: r.first_author_country.clone(),
            profile: Default::default(),
        };
        GroupKey::of(&probe, cfg.group_by).to_string()
    };
    let tagged: Vec<(String, bool, CategoryCounts)> = cfg.pool()?.install(|| {
        corpus
            .records
            .par_iter()
            .filter(|(_, p)| p.year == ps.before_year || p.year == ps.after_year)
            .filter_map(|(r, p)| {
                let a = res.textkit.analyze_raw(&r.abstract_text).ok()?;
                let mut c = CategoryCounts::default();
                c.add_text(&a, &res.llm_words);
                Some((key_of(r), p.year == ps.after_year, c))
            })
            .collect()
    });
    let mut samples: BTreeMap<String, (CategoryCounts, CategoryCounts)> = BTreeMap::new();
    for (key, after, counts) in tagged {
        for k in ["all".to_string(), key] {
            let entry = samples.entry(k).or_default();
            if after {
                entry.1.merge(&counts);
            } else {
                entry.0.merge(&counts);
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::InsufficientData(format!("no documents in {} or {}", ps.before_year, ps.after_year)));
    }
    let mut rows = Vec::new();
    for (group, (before, after)) in &samples {
        let table = pos_category_shift(before, after, ps.top_k, ps.threshold);
        for r in table.rows {
            rows.push(vec![
                group.clone(),
                r.category.name().to_string(),
                r.before.to_string(),
                r.after.to_string(),
                fmt_f(100.0 * r.change),
                r.flagged.to_string(),
                r.top_words.join(" "),
            ]);
        }
    }
    write_csv(&cfg.output_dir.join("pos_shift.csv"), &POS_SHIFT_HEADER, &rows)?;
    Ok(rows.len())
}

pub fn cmd_new_words(cfg: &PipelineConfig) -> Result<usize> {
    cfg.check()?;
    let res = load_resources(cfg)?;
    let corpus = load_corpus(cfg, &res)?;
    ensure_dir(&cfg.output_dir)?;
    new_words_table(cfg, &res, &corpus)
}

pub fn cmd_pos_shift(cfg: &PipelineConfig) -> Result<usize> {
    cfg.check()?;
    let res = load_resources(cfg)?;
    let corpus = load_corpus(cfg, &res)?;
    ensure_dir(&cfg.output_dir)?;
    pos_shift_table(cfg, &res, &corpus)
}

/// Language group label used in POS-shift tables.
pub fn group_label(g: LanguageGroup) -> &'static str {
    g.name()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_corpus, CorpusConfig};

    fn setup(dir: &Path) -> PipelineConfig {
        let c = generate_corpus(Resources::bundled(), &CorpusConfig::default()).unwrap();
        fs::write(dir.join("corpus.jsonl"), &c.jsonl).unwrap();
        fs::write(dir.join("countries.csv"), &c.countries_csv).unwrap();
        PipelineConfig {
            corpus: Some(dir.join("corpus.jsonl")),
            sidecar: Some(dir.join("countries.csv")),
            output_dir: dir.join("out"),
            workers: 1,
            ..Default::default()
        }
    }

    #[test]
    fn year_range_parsing() {
        assert_eq!("2014-2022".parse::<YearRange>().unwrap(), YearRange::new(2014, 2022));
        assert_eq!("2023".parse::<YearRange>().unwrap().periods(2014), 36..=39);
        assert!("2023-2014".parse::<YearRange>().is_err());
        let json = serde_json::to_string(&YearRange::new(2014, 2022)).unwrap();
        assert_eq!(json, "\"2014-2022\"");
    }

    #[test]
    fn overlapping_windows_are_rejected() {
        let cfg = PipelineConfig {
            post_window: YearRange::new(2022, 2023),
            ..Default::default()
        };
        assert!(matches!(cfg.check(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        fs::write(&p, r#"{"seed": 3, "bogus": 1}"#).unwrap();
        assert!(matches!(PipelineConfig::load(&p), Err(Error::InvalidConfig(_))));
        fs::write(&p, r#"{"seed": 3, "corpus": "data.jsonl", "fit_window": "2015-2021"}"#).unwrap();
        let cfg = PipelineConfig::load(&p).unwrap();
        assert_eq!(cfg.corpus.unwrap(), dir.path().join("data.jsonl"));
        assert_eq!(cfg.fit_window, YearRange::new(2015, 2021));
    }

    #[test]
    fn analyze_resumes_and_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = setup(dir.path());
        cfg.new_words.min_count = 1;
        let first = cmd_analyze(&cfg).unwrap();
        assert_eq!(first.rows, 200);
        assert_eq!(first.reused, 0);
        let bytes = fs::read(cfg.store_path()).unwrap();
        let second = cmd_analyze(&cfg).unwrap();
        assert_eq!((second.computed, second.reused), (0, 200));
        assert_eq!(fs::read(cfg.store_path()).unwrap(), bytes);

        let summary = cmd_report(&cfg).unwrap();
        assert_eq!(summary.documents, 200);
        assert!(cfg.output_dir.join("shift_tests.csv").is_file());
        assert!(cfg.output_dir.join("pos_shift.csv").is_file());
        let nw = fs::read_to_string(cfg.output_dir.join("new_words.csv")).unwrap();
        assert!(nw.lines().any(|l| l.ends_with(",chatgpt,") || l.contains(",chatgpt,")), "{nw}");
    }

    #[test]
    fn report_without_post_data_warns() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = setup(dir.path());
        cmd_analyze(&cfg).unwrap();
        cfg.corpus = None;
        cfg.sidecar = None;
        cfg.fit_window = YearRange::new(2014, 2017);
        cfg.post_window = YearRange::new(2018, 2018);
        let rows = read_store(&cfg.store_path(), false).unwrap();
        let early: Vec<FeatureRow> = rows.into_iter().filter(|r| r.period < 16).collect();
        write_store(&cfg.store_path(), &early, "x").unwrap();
        let s = cmd_report(&cfg).unwrap();
        assert_eq!(s.tests_failed, s.tests_run);
        assert!(!s.warnings.is_empty());
        let text = fs::read_to_string(cfg.output_dir.join("shift_tests.csv")).unwrap();
        assert!(text.lines().skip(1).all(|l| l.ends_with(",insufficient_data")));
    }
}
