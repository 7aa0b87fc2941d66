//! LLM-preferred word rates, new-word emergence and POS-category shifts.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textkit::{AnalyzedText, TokenKind};

/// What the loader dropped while building an [`LlmWordList`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordListReport {
    pub adjective_rows: usize,
    pub adverb_rows: usize,
    pub duplicate_adjectives: Vec<String>,
    pub duplicate_adverbs: Vec<String>,
    /// Words listed under both heads; kept as adjectives only.
    pub cross_listed: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct LlmWordList {
    pub adjectives: BTreeSet<String>,
    pub adverbs: BTreeSet<String>,
    pub report: WordListReport,
}

fn dedupe<'a>(lines: impl Iterator<Item = &'a str>, rows: &mut usize, dups: &mut Vec<String>) -> BTreeSet<String> {
    let mut set = BTreeSet::new();
    for w in lines.map(|l| l.trim().to_lowercase()).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        *rows += 1;
        if !set.insert(w.clone()) {
            dups.push(w);
        }
    }
    dups.sort();
    set
}

impl LlmWordList {
    /// Two one-word-per-line lists. Repeats are dropped and reported.
    pub fn from_lists(adjectives: &str, adverbs: &str) -> Result<Self> {
        let mut report = WordListReport::default();
        let adjectives = dedupe(adjectives.lines(), &mut report.adjective_rows, &mut report.duplicate_adjectives);
        let mut adverbs = dedupe(adverbs.lines(), &mut report.adverb_rows, &mut report.duplicate_adverbs);
        report.cross_listed = adjectives.intersection(&adverbs).cloned().collect();
        for w in &report.cross_listed {
            adverbs.remove(w);
        }
        if adjectives.is_empty() || adverbs.is_empty() {
            return Err(Error::resource("llm word list", None, "adjective and adverb lists must both be non-empty"));
        }
        if !report.duplicate_adjectives.is_empty() || !report.duplicate_adverbs.is_empty() {
            log::info!(
                "llm word lists: dropped {} repeated adjectives and {} repeated adverbs",
                report.duplicate_adjectives.len(),
                report.duplicate_adverbs.len()
            );
        }
        Ok(LlmWordList {
            adjectives,
            adverbs,
            report,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerProfile {
    pub llm_adj_count: usize,
    pub llm_adv_count: usize,
    /// Per 1000 word tokens.
    pub llm_adj_rate: f64,
    pub llm_adv_rate: f64,
}

pub fn llm_marker_profile(analyzed: &AnalyzedText, list: &LlmWordList) -> MarkerProfile {
    let (mut adj, mut adv) = (0, 0);
    for tok in analyzed.lexical_words() {
        if list.adjectives.contains(&tok.normalized) {
            adj += 1;
        } else if list.adverbs.contains(&tok.normalized) {
            adv += 1;
        }
    }
    let words = analyzed.word_count();
    let rate = |c: usize| if words == 0 { 0.0 } else { 1000.0 * c as f64 / words as f64 };
    MarkerProfile {
        llm_adj_count: adj,
        llm_adv_count: adv,
        llm_adj_rate: rate(adj),
        llm_adv_rate: rate(adv),
    }
}

/// Lettered word types and their counts, the vocabulary unit for new-word detection.
pub fn vocabulary_counts(analyzed: &AnalyzedText) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for tok in analyzed.tokens.iter().filter(|t| t.kind == TokenKind::Word) {
        *counts.entry(tok.normalized.clone()).or_insert(0) += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NewWordConfig {
    pub min_count: usize,
    pub min_prior_periods: usize,
}

impl Default for NewWordConfig {
    fn default() -> Self {
        NewWordConfig {
            min_count: 5,
            min_prior_periods: 4,
        }
    }
}

/// period position -> new words with counts, most frequent first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewWordReport {
    pub periods: BTreeMap<usize, Vec<(String, usize)>>,
}

impl NewWordReport {
    pub fn total(&self) -> usize {
        self.periods.values().map(Vec::len).sum()
    }
}

/// A word is new in period `t` when it occurs at least `min_count` times
/// there and never in periods `0..t`. Only periods with at least
/// `min_prior_periods` periods before them are eligible.
pub fn detect_new_words(periods: &[HashMap<String, usize>], config: &NewWordConfig) -> Result<NewWordReport> {
    if config.min_count == 0 || config.min_prior_periods == 0 {
        return Err(Error::InvalidConfig("new-word thresholds must be at least 1".into()));
    }
    if periods.len() <= config.min_prior_periods {
        return Err(Error::InsufficientHistory {
            have: periods.len().saturating_sub(1),
            need: config.min_prior_periods,
        });
    }
    let mut seen: HashSet<&str> = HashSet::new();
    let mut report = NewWordReport::default();
    for (t, counts) in periods.iter().enumerate() {
        if t >= config.min_prior_periods {
            let mut fresh: Vec<(String, usize)> = counts
                .iter()
                .filter(|(w, &c)| c >= config.min_count && !seen.contains(w.as_str()))
                .map(|(w, &c)| (w.clone(), c))
                .collect();
            fresh.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            if !fresh.is_empty() {
                report.periods.insert(t, fresh);
            }
        }
        seen.extend(counts.iter().filter(|(_, &c)| c > 0).map(|(w, _)| w.as_str()));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PosCategory {
    CC,
    IN,
    VBZ,
    VBN,
    RB,
    NN,
    JJS,
    LlmAdjectives,
    LlmAdverbs,
}

impl PosCategory {
    pub const ALL: [PosCategory; 9] = [
        PosCategory::CC,
        PosCategory::IN,
        PosCategory::VBZ,
        PosCategory::VBN,
        PosCategory::RB,
        PosCategory::NN,
        PosCategory::JJS,
        PosCategory::LlmAdjectives,
        PosCategory::LlmAdverbs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PosCategory::CC => "CC",
            PosCategory::IN => "IN",
            PosCategory::VBZ => "VBZ",
            PosCategory::VBN => "VBN",
            PosCategory::RB => "RB",
            PosCategory::NN => "NN",
            PosCategory::JJS => "JJS",
            PosCategory::LlmAdjectives => "LLM-adjectives",
            PosCategory::LlmAdverbs => "LLM-adverbs",
        }
    }

    fn tag(self) -> Option<&'static str> {
        match self {
            PosCategory::LlmAdjectives | PosCategory::LlmAdverbs => None,
            other => Some(other.name()),
        }
    }
}

impl fmt::Display for PosCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Word frequencies per category for one sample of documents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub counts: BTreeMap<PosCategory, HashMap<String, u64>>,
}

impl CategoryCounts {
    pub fn add(&mut self, category: PosCategory, word: &str, n: u64) {
        *self.counts.entry(category).or_default().entry(word.to_string()).or_insert(0) += n;
    }

    /// Tallies one analyzed document: exact Penn tags for the POS categories,
    /// list membership for the LLM categories.
    pub fn add_text(&mut self, analyzed: &AnalyzedText, list: &LlmWordList) {
        for tok in analyzed.lexical_words() {
            for cat in PosCategory::ALL {
                let hit = match cat.tag() {
                    Some(tag) => tok.pos == tag,
                    None if cat == PosCategory::LlmAdjectives => list.adjectives.contains(&tok.normalized),
                    None => list.adverbs.contains(&tok.normalized),
                };
                if hit {
                    self.add(cat, &tok.normalized, 1);
                }
            }
        }
    }

    pub fn merge(&mut self, other: &CategoryCounts) {
        for (cat, words) in &other.counts {
            for (w, n) in words {
                self.add(*cat, w, *n);
            }
        }
    }

    fn get(&self, cat: PosCategory, word: &str) -> u64 {
        self.counts.get(&cat).and_then(|m| m.get(word)).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosCategoryRow {
    pub category: PosCategory,
    pub top_words: Vec<String>,
    pub before: u64,
    pub after: u64,
    /// (after - before) / before.
    pub change: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PosCategoryTable {
    pub rows: Vec<PosCategoryRow>,
    /// Categories with no words in the baseline sample.
    pub omitted: Vec<PosCategory>,
}

pub fn relative_change(before: u64, after: u64) -> f64 {
    (after as f64 - before as f64) / before as f64
}

/// Compares the summed frequency of each category's top-`k` baseline words
/// between two samples; flags changes of at least `threshold` in magnitude.
pub fn pos_category_shift(before: &CategoryCounts, after: &CategoryCounts, k: usize, threshold: f64) -> PosCategoryTable {
    let mut table = PosCategoryTable::default();
    for cat in PosCategory::ALL {
        let mut words: Vec<(&String, &u64)> = before.counts.get(&cat).map(|m| m.iter().filter(|(_, &n)| n > 0).collect()).unwrap_or_default();
        if words.is_empty() {
            log::warn!("category {cat} has no words in the baseline sample; omitted");
            table.omitted.push(cat);
            continue;
        }
        words.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
        words.truncate(k);
        let top_words: Vec<String> = words.iter().map(|(w, _)| (*w).clone()).collect();
        let b: u64 = words.iter().map(|(_, &n)| n).sum();
        let a: u64 = top_words.iter().map(|w| after.get(cat, w)).sum();
        let change = relative_change(b, a);
        table.rows.push(PosCategoryRow {
            category: cat,
            top_words,
            before: b,
            after: a,
            change,
            flagged: change.abs() >= threshold,
        });
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::Resources;
    use proptest::prelude::*;

    fn analyze(text: &str) -> AnalyzedText {
        Resources::bundled().textkit.analyze(text).unwrap()
    }

    #[test]
    fn bundled_list_dedupes_table_repeats() {
        let list = &Resources::bundled().llm_words;
        assert_eq!(list.report.adjective_rows, 100);
        assert!(list.report.duplicate_adjectives.contains(&"versatile".to_string()));
        assert!(list.report.duplicate_adjectives.contains(&"noteworthy".to_string()));
        assert_eq!(list.adjectives.len(), 100 - list.report.duplicate_adjectives.len());
        assert!(list.adjectives.is_disjoint(&list.adverbs));
    }

    #[test]
    fn marker_examples() {
        let list = &Resources::bundled().llm_words;
        let p = llm_marker_profile(&analyze("We meticulously test the model."), list);
        assert_eq!(p.llm_adv_count, 1);
        assert!((p.llm_adv_rate - 200.0).abs() < 1e-12);
        let p = llm_marker_profile(&analyze("A pivotal and notable result."), list);
        assert_eq!(p.llm_adj_count, 2);
        let p = llm_marker_profile(&analyze("Cats sleep."), list);
        assert_eq!((p.llm_adj_rate, p.llm_adv_rate), (0.0, 0.0));
    }

    fn period(words: &[(&str, usize)]) -> HashMap<String, usize> {
        words.iter().map(|(w, c)| (w.to_string(), *c)).collect()
    }

    #[test]
    fn new_word_in_last_period() {
        let mut periods: Vec<_> = (0..5).map(|_| period(&[("model", 100)])).collect();
        periods[4].insert("gpt-3.5-turbo".into(), 65);
        let r = detect_new_words(&periods, &NewWordConfig::default()).unwrap();
        assert_eq!(r.periods[&4], vec![("gpt-3.5-turbo".to_string(), 65)]);
        assert_eq!(r.total(), 1);
    }

    #[test]
    fn insufficient_history() {
        let periods: Vec<_> = (0..4).map(|_| period(&[("a", 9)])).collect();
        assert!(matches!(
            detect_new_words(&periods, &NewWordConfig::default()),
            Err(Error::InsufficientHistory { have: 3, need: 4 })
        ));
    }

    #[test]
    fn table_deltas() {
        for (b, a, printed) in [(3675u64, 4169u64, 13.44), (39943, 36652, -8.24), (1080, 1014, -6.11)] {
            assert!((100.0 * relative_change(b, a) - printed).abs() < 0.01);
        }
    }

    #[test]
    fn shift_on_identical_samples_is_zero() {
        let list = &Resources::bundled().llm_words;
        let mut c = CategoryCounts::default();
        c.add_text(&analyze("The largest model is trained and significantly improves comprehensive results of tests."), list);
        let t = pos_category_shift(&c, &c, 10, 0.04);
        assert!(t.rows.iter().all(|r| r.change == 0.0 && !r.flagged));
        assert!(t.rows.iter().any(|r| r.category == PosCategory::JJS));
    }

    #[test]
    fn top_k_by_baseline() {
        let mut before = CategoryCounts::default();
        let mut after = CategoryCounts::default();
        for (i, w) in ["a", "b", "c"].iter().enumerate() {
            before.add(PosCategory::NN, w, 10 - i as u64);
            after.add(PosCategory::NN, w, 10);
        }
        after.add(PosCategory::NN, "z", 1000);
        let t = pos_category_shift(&before, &after, 2, 0.04);
        let row = &t.rows[0];
        assert_eq!(row.top_words, vec!["a", "b"]);
        assert_eq!((row.before, row.after), (19, 20));
        assert!(row.flagged);
        assert_eq!(t.omitted.len(), 8);
    }

    fn brute_new_words(periods: &[HashMap<String, usize>], cfg: &NewWordConfig) -> BTreeSet<(usize, String)> {
        let mut out = BTreeSet::new();
        for t in cfg.min_prior_periods..periods.len() {
            for (w, &c) in &periods[t] {
                if c >= cfg.min_count && (0..t).all(|s| periods[s].get(w).copied().unwrap_or(0) == 0) {
                    out.insert((t, w.clone()));
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn new_words_match_oracle(raw in prop::collection::vec(prop::collection::hash_map(0u16..60, 0usize..12, 0..40), 5..9)) {
            let periods: Vec<HashMap<String, usize>> = raw.iter().map(|m| m.iter().map(|(k, v)| (format!("w{k}"), *v)).collect()).collect();
            let cfg = NewWordConfig { min_count: 3, min_prior_periods: 2 };
            let r = detect_new_words(&periods, &cfg).unwrap();
            let got: BTreeSet<(usize, String)> = r.periods.iter().flat_map(|(t, ws)| ws.iter().map(move |(w, _)| (*t, w.clone()))).collect();
            prop_assert_eq!(got.len(), r.total());
            prop_assert_eq!(got, brute_new_words(&periods, &cfg));
        }

        #[test]
        fn swap_maps_change(counts in prop::collection::vec((1u64..500, 1u64..500), 1..8)) {
            let mut a = CategoryCounts::default();
            let mut b = CategoryCounts::default();
            for (i, (x, y)) in counts.iter().enumerate() {
                a.add(PosCategory::RB, &format!("w{i}"), *x);
                b.add(PosCategory::RB, &format!("w{i}"), *y);
            }
            // k covers every word, so both directions use the same word set
            let c = pos_category_shift(&a, &b, 10, 0.04).rows[0].change;
            let back = pos_category_shift(&b, &a, 10, 0.04).rows[0].change;
            prop_assert!((back - (-c / (1.0 + c))).abs() < 1e-9 * back.abs().max(1.0));
        }

        #[test]
        fn marker_rates_survive_duplication(reps in 1usize..4) {
            let list = &Resources::bundled().llm_words;
            let text = "We present a comprehensive and innovative study. It is notably robust.";
            let one = llm_marker_profile(&analyze(text), list);
            let many = llm_marker_profile(&analyze(&vec![text; reps].join(" ")), list);
            prop_assert!((one.llm_adj_rate - many.llm_adj_rate).abs() < 1e-9);
            prop_assert_eq!(many.llm_adj_count, one.llm_adj_count * reps);
        }
    }
}
