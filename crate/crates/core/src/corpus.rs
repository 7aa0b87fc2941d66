//! Corpus records: parsing, filtering, period bucketing, classification,
//! sampling and the author-country sidecar.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textkit::TextKit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Discipline {
    ComputerScience,
    Physics,
    Mathematics,
    Other,
}

impl Discipline {
    pub fn name(self) -> &'static str {
        match self {
            Discipline::ComputerScience => "ComputerScience",
            Discipline::Physics => "Physics",
            Discipline::Mathematics => "Mathematics",
            Discipline::Other => "Other",
        }
    }
}

impl fmt::Display for Discipline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Discipline {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_lowercase().replace([' ', '_'], "").as_str() {
            "computerscience" | "cs" => Ok(Discipline::ComputerScience),
            "physics" => Ok(Discipline::Physics),
            "mathematics" | "math" => Ok(Discipline::Mathematics),
            "other" => Ok(Discipline::Other),
            _ => Err(format!("unknown discipline `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LanguageGroup {
    NES,
    NNES,
    Unknown,
}

impl LanguageGroup {
    pub fn name(self) -> &'static str {
        match self {
            LanguageGroup::NES => "NES",
            LanguageGroup::NNES => "NNES",
            LanguageGroup::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for LanguageGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LanguageGroup {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_uppercase().as_str() {
            "NES" => Ok(LanguageGroup::NES),
            "NNES" => Ok(LanguageGroup::NNES),
            "UNKNOWN" => Ok(LanguageGroup::Unknown),
            _ => Err(format!("unknown language group `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub doc_id: String,
    pub title: String,
    pub abstract_text: String,
    pub categories: Vec<String>,
    pub primary_category: String,
    pub discipline: Discipline,
    pub submitted_at: NaiveDate,
    pub doi: Option<String>,
    pub authors: Option<Vec<String>>,
    pub first_author_country: Option<String>,
    pub language_group: LanguageGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseError {
    pub line: usize,
    /// `invalid_json`, `missing_field` or `invalid_field`.
    pub reason: String,
    pub detail: String,
}

#[derive(Deserialize)]
struct RawRecord {
    id: Option<serde_json::Value>,
    title: Option<String>,
    #[serde(rename = "abstract")]
    abstract_text: Option<String>,
    categories: Option<CategoryField>,
    doi: Option<String>,
    submitted: Option<String>,
    authors: Option<AuthorField>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CategoryField {
    List(Vec<String>),
    Spaced(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AuthorField {
    List(Vec<String>),
    Joined(String),
}

fn parse_line(line: &str) -> std::result::Result<DocumentRecord, (String, String)> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| {
        let reason = if e.is_data() { "invalid_field" } else { "invalid_json" };
        (reason.to_string(), e.to_string())
    })?;
    let missing = |f: &str| ("missing_field".to_string(), f.to_string());
    let doc_id = match raw.id {
        Some(serde_json::Value::String(s)) if !s.trim().is_empty() => s.trim().to_string(),
        Some(serde_json::Value::Number(n)) => n.to_string(),
        Some(_) => return Err(("invalid_field".into(), "id".into())),
        None => return Err(missing("id")),
    };
    let abstract_text = raw.abstract_text.ok_or_else(|| missing("abstract"))?;
    let submitted = raw.submitted.ok_or_else(|| missing("submitted"))?;
    let submitted_at = NaiveDate::parse_from_str(submitted.trim(), "%Y-%m-%d")
        .map_err(|_| ("invalid_field".to_string(), format!("submitted `{submitted}` is not YYYY-MM-DD")))?;
    let categories: Vec<String> = match raw.categories {
        Some(CategoryField::List(v)) => v.into_iter().map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect(),
        Some(CategoryField::Spaced(s)) => s.split_whitespace().map(str::to_string).collect(),
        None => Vec::new(),
    };
    let authors = raw.authors.map(|a| match a {
        AuthorField::List(v) => v,
        AuthorField::Joined(s) => s.split([',', ';']).map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect(),
    });
    Ok(DocumentRecord {
        doc_id,
        title: raw.title.unwrap_or_default().trim().to_string(),
        abstract_text,
        primary_category: categories.first().cloned().unwrap_or_default(),
        categories,
        discipline: Discipline::Other,
        submitted_at,
        doi: raw.doi.filter(|d| !d.trim().is_empty()),
        authors,
        first_author_country: None,
        language_group: LanguageGroup::Unknown,
    })
}

/// Reads JSONL records. Malformed lines become [`ParseError`]s; only a
/// failing reader is fatal.
pub fn parse_records<R: BufRead>(reader: R) -> Result<(Vec<DocumentRecord>, Vec<ParseError>)> {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<corpus stream>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line) {
            Ok(r) => records.push(r),
            Err((reason, detail)) => errors.push(ParseError {
                line: i + 1,
                reason,
                detail,
            }),
        }
    }
    Ok((records, errors))
}

pub fn parse_records_str(text: &str) -> (Vec<DocumentRecord>, Vec<ParseError>) {
    parse_records(text.as_bytes()).expect("reading from memory cannot fail")
}

/// Inclusive date range of the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl Default for CorpusWindow {
    fn default() -> Self {
        CorpusWindow {
            start: NaiveDate::from_ymd_opt(2014, 1, 1).unwrap(),
            end: NaiveDate::from_ymd_opt(2023, 12, 31).unwrap(),
        }
    }
}

impl CorpusWindow {
    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    pub fn start_year(&self) -> i32 {
        self.start.year()
    }

    /// Number of quarterly periods from the start year's Q1 through `end`.
    pub fn period_count(&self) -> u32 {
        PeriodIndex::of(self.end, self.start_year()).ordinal + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PeriodIndex {
    pub ordinal: u32,
    pub year: i32,
    pub quarter: u32,
}

impl PeriodIndex {
    fn of(date: NaiveDate, start_year: i32) -> Self {
        let quarter = (date.month() + 2) / 3;
        let ordinal = ((date.year() - start_year) * 4) as u32 + quarter - 1;
        PeriodIndex {
            ordinal,
            year: date.year(),
            quarter,
        }
    }

    pub fn from_ordinal(ordinal: u32, start_year: i32) -> Self {
        PeriodIndex {
            ordinal,
            year: start_year + (ordinal / 4) as i32,
            quarter: ordinal % 4 + 1,
        }
    }
}

pub fn assign_period(date: NaiveDate, window: &CorpusWindow) -> Result<PeriodIndex> {
    if !window.contains(date) {
        return Err(Error::OutOfWindow(date));
    }
    Ok(PeriodIndex::of(date, window.start_year()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterConfig {
    pub min_abstract_tokens: usize,
    /// Any of `title`, `categories`, `authors`.
    pub required_fields: Vec<String>,
    pub excluded_months: Vec<(i32, u32)>,
    pub window: CorpusWindow,
    pub allowed_disciplines: Vec<Discipline>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            min_abstract_tokens: 50,
            required_fields: vec!["title".into(), "categories".into()],
            excluded_months: vec![(2022, 12)],
            window: CorpusWindow::default(),
            allowed_disciplines: vec![Discipline::ComputerScience, Discipline::Physics, Discipline::Mathematics],
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        for f in &self.required_fields {
            if !matches!(f.as_str(), "title" | "categories" | "authors") {
                return Err(Error::InvalidConfig(format!("unknown required field `{f}`")));
            }
        }
        if self.window.start > self.window.end {
            return Err(Error::InvalidConfig("corpus window starts after it ends".into()));
        }
        if self.excluded_months.iter().any(|(_, m)| !(1..=12).contains(m)) {
            return Err(Error::InvalidConfig("excluded month outside 1..=12".into()));
        }
        Ok(())
    }
}

/// Prefix rules mapping a category code to a discipline; longest prefix wins.
#[derive(Debug, Clone)]
pub struct DisciplineTable {
    prefixes: Vec<(String, Discipline)>,
}

impl DisciplineTable {
    pub fn new(mut prefixes: Vec<(String, Discipline)>) -> Self {
        for p in &mut prefixes {
            p.0 = p.0.to_lowercase();
        }
        prefixes.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        DisciplineTable { prefixes }
    }

    /// CSV `prefix,discipline`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (line, row) in csv_pairs("disciplines", text)? {
            let d: Discipline = row.1.parse().map_err(|e: String| Error::resource("disciplines", Some(line), e))?;
            rows.push((row.0, d));
        }
        if rows.is_empty() {
            return Err(Error::resource("disciplines", None, "no prefixes"));
        }
        Ok(DisciplineTable::new(rows))
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn classify(&self, category: &str) -> Discipline {
        let c = category.trim().to_lowercase();
        self.prefixes
            .iter()
            .find(|(p, _)| c.starts_with(p.as_str()))
            .map_or(Discipline::Other, |(_, d)| *d)
    }
}

/// Country name or ISO code -> language group.
#[derive(Debug, Clone, Default)]
pub struct CountryGroupTable {
    groups: HashMap<String, LanguageGroup>,
}

impl CountryGroupTable {
    /// CSV `country,group` with group NES or NNES.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut groups = HashMap::new();
        for (line, (country, group)) in csv_pairs("country groups", text)? {
            let g = match group.trim().to_uppercase().as_str() {
                "NES" => LanguageGroup::NES,
                "NNES" => LanguageGroup::NNES,
                other => return Err(Error::resource("country groups", Some(line), format!("group `{other}` is not NES or NNES"))),
            };
            groups.insert(country.trim().to_uppercase(), g);
        }
        if groups.is_empty() {
            return Err(Error::resource("country groups", None, "no countries"));
        }
        Ok(CountryGroupTable { groups })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, country: &str) -> LanguageGroup {
        self.groups.get(&country.trim().to_uppercase()).copied().unwrap_or(LanguageGroup::Unknown)
    }
}

fn csv_pairs(name: &str, text: &str) -> Result<Vec<(usize, (String, String))>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::resource(name, Some(line), e.to_string()))?;
        if rec.len() != 2 || rec[0].is_empty() {
            return Err(Error::resource(name, Some(line), "expected two non-empty columns"));
        }
        out.push((line, (rec[0].to_string(), rec[1].to_string())));
    }
    Ok(out)
}

pub fn classify_document(mut record: DocumentRecord, disciplines: &DisciplineTable, countries: &CountryGroupTable) -> DocumentRecord {
    record.discipline = disciplines.classify(&record.primary_category);
    record.language_group = record.first_author_country.as_deref().map_or(LanguageGroup::Unknown, |c| countries.group(c));
    record
}

/// Rejected-record counts keyed by reason.
pub type RejectionTally = BTreeMap<String, usize>;

/// Word tokens of the raw abstract, the unit of the minimum-length rule.
pub fn abstract_token_count(kit: &TextKit, abstract_text: &str) -> usize {
    kit.tokenize(abstract_text).iter().filter(|t| t.kind.is_word()).count()
}

fn rejection(record: &DocumentRecord, config: &FilterConfig, kit: &TextKit, disciplines: &DisciplineTable) -> Option<&'static str> {
    for f in &config.required_fields {
        let missing = match f.as_str() {
            "title" => record.title.is_empty(),
            "categories" => record.categories.is_empty(),
            "authors" => record.authors.as_ref().map_or(true, Vec::is_empty),
            _ => false,
        };
        if missing {
            return Some(match f.as_str() {
                "title" => "missing_title",
                "categories" => "missing_categories",
                _ => "missing_authors",
            });
        }
    }
    if !config.window.contains(record.submitted_at) {
        return Some("out_of_window");
    }
    let ym = (record.submitted_at.year(), record.submitted_at.month());
    if config.excluded_months.contains(&ym) {
        return Some("excluded_month");
    }
    if abstract_token_count(kit, &record.abstract_text) < config.min_abstract_tokens {
        return Some("too_short");
    }
    if !config.allowed_disciplines.contains(&disciplines.classify(&record.primary_category)) {
        return Some("discipline_not_allowed");
    }
    None
}

/// Drops records that fail any rule; each rejected record is tallied under
/// its first failing reason. Retained records come back sorted by doc_id
/// with their discipline set.
pub fn filter_records(
    records: Vec<DocumentRecord>,
    config: &FilterConfig,
    kit: &TextKit,
    disciplines: &DisciplineTable,
) -> (Vec<DocumentRecord>, RejectionTally) {
    use rayon::prelude::*;
    let verdicts: Vec<Option<&'static str>> = records.par_iter().map(|r| rejection(r, config, kit, disciplines)).collect();
    let mut kept = Vec::new();
    let mut tally = RejectionTally::new();
    for (mut r, v) in records.into_iter().zip(verdicts) {
        match v {
            Some(reason) => *tally.entry(reason.to_string()).or_insert(0) += 1,
            None => {
                r.discipline = disciplines.classify(&r.primary_category);
                kept.push(r);
            }
        }
    }
    kept.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    (kept, tally)
}

/// Up to `n` records per period, uniformly without replacement. The result
/// is sorted by doc_id and depends only on the inputs and `seed`.
pub fn sample_per_period(records: &[DocumentRecord], n: usize, seed: u64, window: &CorpusWindow) -> Result<Vec<DocumentRecord>> {
    if n == 0 {
        return Err(Error::InvalidConfig("sample size must be at least 1".into()));
    }
    let mut by_period: BTreeMap<u32, Vec<&DocumentRecord>> = BTreeMap::new();
    for r in records {
        let p = assign_period(r.submitted_at, window)?;
        by_period.entry(p.ordinal).or_default().push(r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (_, mut docs) in by_period {
        docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        if docs.len() <= n {
            out.extend(docs.into_iter().cloned());
        } else {
            out.extend(sample(&mut rng, docs.len(), n).into_iter().map(|i| docs[i].clone()));
        }
    }
    out.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct JoinReport {
    pub sidecar_rows: usize,
    pub matched: usize,
}

/// Fills `first_author_country` from a `doc_id,country` CSV.
pub fn join_author_countries(records: &mut [DocumentRecord], sidecar: &str) -> Result<JoinReport> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(sidecar.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Schema(format!("country sidecar: {e}")))?.clone();
    if headers.len() > 0 && (headers.get(0) != Some("doc_id") || headers.get(1) != Some("country")) {
        return Err(Error::Schema(format!("country sidecar header must be `doc_id,country`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut map: HashMap<String, String> = HashMap::new();
    let mut dups: HashSet<String> = HashSet::new();
    let mut rows = 0;
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Schema(format!("country sidecar line {}: {e}", i + 2)))?;
        if rec.len() != 2 {
            return Err(Error::Schema(format!("country sidecar line {}: expected 2 columns", i + 2)));
        }
        rows += 1;
        if map.insert(rec[0].to_string(), rec[1].to_string()).is_some() {
            dups.insert(rec[0].to_string());
        }
    }
    if !dups.is_empty() {
        let mut ids: Vec<String> = dups.into_iter().collect();
        ids.sort();
        return Err(Error::Ambiguity(ids));
    }
    let mut matched = 0;
    for r in records.iter_mut() {
        if let Some(c) = map.get(&r.doc_id) {
            r.first_author_country = Some(c.clone());
            matched += 1;
        }
    }
    Ok(JoinReport {
        sidecar_rows: rows,
        matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::Resources;

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn words(n: usize) -> String {
        vec!["word"; n].join(" ")
    }

    fn line(id: &str, abs: &str, submitted: &str) -> String {
        serde_json::json!({"id": id, "title": "T", "abstract": abs, "categories": ["cs.CL"], "doi": null, "submitted": submitted}).to_string()
    }

    #[test]
    fn parse_good_and_bad_lines() {
        let text = format!(
            "{}\n{}\n{}\n",
            line("a", "x y", "2020-01-01"),
            r#"{"id": "b", "title": "T", "categories": ["cs.CL"], "submitted": "2020-01-01"}"#,
            line("c", "x y", "2020-02-02")
        );
        let (recs, errs) = parse_records_str(&text);
        assert_eq!(recs.iter().map(|r| r.doc_id.as_str()).collect::<Vec<_>>(), ["a", "c"]);
        assert_eq!(errs.len(), 1);
        assert_eq!((errs[0].line, errs[0].reason.as_str(), errs[0].detail.as_str()), (2, "missing_field", "abstract"));
        assert_eq!(recs[0].language_group, LanguageGroup::Unknown);
        let (_, errs) = parse_records_str("{not json\n");
        assert_eq!(errs[0].reason, "invalid_json");
    }

    #[test]
    fn filter_rules() {
        let r = Resources::bundled();
        let text = [
            line("short", &words(49), "2020-01-01"),
            line("dec", &words(60), "2022-12-05"),
            line("ok", &words(51), "2023-03-01"),
        ]
        .join("\n");
        let (recs, _) = parse_records_str(&text);
        let (kept, tally) = filter_records(recs, &FilterConfig::default(), &r.textkit, &r.disciplines);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].doc_id, "ok");
        assert_eq!(kept[0].discipline, Discipline::ComputerScience);
        assert_eq!(tally["too_short"], 1);
        assert_eq!(tally["excluded_month"], 1);
    }

    #[test]
    fn periods() {
        let w = CorpusWindow::default();
        assert_eq!(assign_period(date(2014, 1, 15), &w).unwrap().ordinal, 0);
        assert_eq!(assign_period(date(2023, 11, 20), &w).unwrap().ordinal, 39);
        assert_eq!(assign_period(date(2018, 7, 1), &w).unwrap().ordinal, 18);
        assert!(matches!(assign_period(date(2024, 1, 1), &w), Err(Error::OutOfWindow(_))));
        assert_eq!(w.period_count(), 40);
        // brute-force month enumeration
        let mut expected = 0;
        for y in 2014..=2023 {
            for m in 1..=12u32 {
                let p = assign_period(date(y, m, 1), &w).unwrap();
                assert_eq!(p.ordinal, expected + (m - 1) / 3);
                assert_eq!(PeriodIndex::from_ordinal(p.ordinal, 2014), p);
            }
            expected += 4;
        }
    }

    #[test]
    fn classification() {
        let r = Resources::bundled();
        let (mut recs, _) = parse_records_str(&line("d1", "x", "2020-01-01"));
        recs[0].categories = vec!["math.CO".into(), "cs.DM".into()];
        recs[0].primary_category = "math.CO".into();
        recs[0].first_author_country = Some("china".into());
        let c = classify_document(recs[0].clone(), &r.disciplines, &r.country_groups);
        assert_eq!(c.discipline, Discipline::Mathematics);
        assert_eq!(c.language_group, LanguageGroup::NNES);
        assert_eq!(r.country_groups.group("CANADA"), LanguageGroup::NES);
        assert_eq!(r.country_groups.group("Atlantis"), LanguageGroup::Unknown);
        assert_eq!(r.disciplines.classify("hep-th"), Discipline::Physics);
        assert_eq!(r.disciplines.classify("math-ph"), Discipline::Physics);
        assert_eq!(r.disciplines.classify("q-bio.GN"), Discipline::Other);
        let again = classify_document(c.clone(), &r.disciplines, &r.country_groups);
        assert_eq!(again, c);
    }

    #[test]
    fn sidecar_join() {
        let r = Resources::bundled();
        let (mut recs, _) = parse_records_str(&format!("{}\n{}", line("d1", "x", "2020-01-01"), line("d2", "x", "2020-01-01")));
        let rep = join_author_countries(&mut recs, "doc_id,country\nd1,JAPAN\n").unwrap();
        assert_eq!(rep.matched, 1);
        let c = classify_document(recs[0].clone(), &r.disciplines, &r.country_groups);
        assert_eq!(c.language_group, LanguageGroup::NNES);
        assert_eq!(recs[1].first_author_country, None);
        let before = recs.clone();
        join_author_countries(&mut recs, "doc_id,country\n").unwrap();
        assert_eq!(recs, before);
        let err = join_author_countries(&mut recs, "doc_id,country\nd1,JAPAN\nd1,CHINA\n").unwrap_err();
        assert!(matches!(err, Error::Ambiguity(ids) if ids == vec!["d1".to_string()]));
    }

    #[test]
    fn sampling() {
        let w = CorpusWindow::default();
        let text: Vec<String> = (0..5).map(|i| line(&format!("d{i}"), "x", "2020-01-01")).collect();
        let (recs, _) = parse_records_str(&text.join("\n"));
        assert_eq!(sample_per_period(&recs, 10, 1, &w).unwrap().len(), 5);
        let a = sample_per_period(&recs, 2, 7, &w).unwrap();
        let b = sample_per_period(&recs, 2, 7, &w).unwrap();
        assert_eq!(a, b);
        let three = &recs[..3];
        let mut hits = [0usize; 3];
        for seed in 0..10_000 {
            let s = sample_per_period(three, 1, seed, &w).unwrap();
            let idx = three.iter().position(|r| r.doc_id == s[0].doc_id).unwrap();
            hits[idx] += 1;
        }
        for h in hits {
            assert!((h as f64 / 10_000.0 - 1.0 / 3.0).abs() < 0.02, "{hits:?}");
        }
    }
}
