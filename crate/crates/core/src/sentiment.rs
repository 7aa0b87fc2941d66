//! Lexicon-based polarity and subjectivity.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textkit::{AnalyzedText, Token};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentScore {
    pub polarity: f64,
    pub subjectivity: f64,
    pub objectivity: f64,
}

impl SentimentScore {
    fn new(polarity: f64, subjectivity: f64) -> Self {
        SentimentScore {
            polarity,
            subjectivity,
            objectivity: 1.0 - subjectivity,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    pos: Option<String>,
    polarity: f64,
    subjectivity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SentimentOptions {
    /// How many preceding word tokens are searched for a negation.
    pub negation_window: usize,
}

impl Default for SentimentOptions {
    fn default() -> Self {
        SentimentOptions { negation_window: 3 }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    entries: HashMap<String, Vec<Entry>>,
    negations: HashSet<String>,
    intensifiers: HashMap<String, f64>,
    duplicates: usize,
}

impl SentimentLexicon {
    /// Entries from CSV `word,pos,polarity,subjectivity` (pos may be blank),
    /// negations from a one-column `word` CSV and intensifiers from
    /// `word,multiplier`.
    pub fn from_csv(lexicon: &str, negations: &str, intensifiers: &str) -> Result<Self> {
        let mut lex = SentimentLexicon::default();
        for (line, row) in csv_rows("sentiment lexicon", lexicon, 4)? {
            let polarity = number("sentiment lexicon", line, &row[2])?;
            let subjectivity = number("sentiment lexicon", line, &row[3])?;
            let pos = (!row[1].is_empty()).then(|| row[1].to_uppercase());
            lex.insert(&row[0], pos.as_deref(), polarity, subjectivity)
                .map_err(|reason| Error::resource("sentiment lexicon", Some(line), reason))?;
        }
        for (_, row) in csv_rows("negations", negations, 1)? {
            lex.negations.insert(row[0].to_lowercase());
        }
        for (line, row) in csv_rows("intensifiers", intensifiers, 2)? {
            let m = number("intensifiers", line, &row[1])?;
            if m <= 0.0 {
                return Err(Error::resource("intensifiers", Some(line), "multiplier must be positive"));
            }
            lex.intensifiers.insert(row[0].to_lowercase(), m);
        }
        if lex.entries.is_empty() {
            return Err(Error::resource("sentiment lexicon", None, "lexicon is empty"));
        }
        Ok(lex)
    }

    /// Adds one entry; a repeated (word, pos) pair keeps the first value.
    pub fn insert(&mut self, word: &str, pos: Option<&str>, polarity: f64, subjectivity: f64) -> std::result::Result<(), String> {
        if !(-1.0..=1.0).contains(&polarity) {
            return Err(format!("polarity {polarity} outside [-1, 1]"));
        }
        if !(0.0..=1.0).contains(&subjectivity) {
            return Err(format!("subjectivity {subjectivity} outside [0, 1]"));
        }
        let pos = pos.map(str::to_string);
        let list = self.entries.entry(word.trim().to_lowercase()).or_default();
        if list.iter().any(|e| e.pos == pos) {
            self.duplicates += 1;
            return Ok(());
        }
        list.push(Entry {
            pos,
            polarity,
            subjectivity,
        });
        Ok(())
    }

    pub fn add_negation(&mut self, word: &str) {
        self.negations.insert(word.to_lowercase());
    }

    pub fn add_intensifier(&mut self, word: &str, multiplier: f64) {
        assert!(multiplier > 0.0, "intensifier multiplier must be positive");
        self.intensifiers.insert(word.to_lowercase(), multiplier);
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn negation_count(&self) -> usize {
        self.negations.len()
    }

    pub fn intensifier_count(&self) -> usize {
        self.intensifiers.len()
    }

    /// Entry for a token: a POS-qualified entry whose tag prefixes the
    /// token's tag wins over an unqualified one.
    fn lookup(&self, tok: &Token) -> Option<(f64, f64)> {
        let list = self.entries.get(&tok.normalized)?;
        let qualified = list.iter().find(|e| e.pos.as_deref().is_some_and(|p| tok.pos.starts_with(p)));
        qualified
            .or_else(|| list.iter().find(|e| e.pos.is_none()))
            .map(|e| (e.polarity, e.subjectivity))
    }

    /// Copy with every polarity negated.
    pub fn mirrored(&self) -> Self {
        let mut out = self.clone();
        for list in out.entries.values_mut() {
            for e in list {
                e.polarity = -e.polarity;
            }
        }
        out
    }
}

fn csv_rows(name: &str, text: &str, columns: usize) -> Result<Vec<(usize, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::resource(name, Some(line), e.to_string()))?;
        if rec.len() != columns {
            return Err(Error::resource(name, Some(line), format!("expected {columns} columns, found {}", rec.len())));
        }
        if rec[0].is_empty() {
            continue;
        }
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(rows)
}

fn number(name: &str, line: usize, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::resource(name, Some(line), format!("`{s}` is not a number")))
}

/// Sentence-averaged sentiment. Within a sentence every lexicon match
/// contributes its polarity and subjectivity; a negation among the preceding
/// `negation_window` word tokens flips the polarity and an intensifier
/// directly before it scales the polarity, which is then clamped to [-1, 1].
/// Negation and intensifier words are not scored themselves.
pub fn sentiment_scores(analyzed: &AnalyzedText, lexicon: &SentimentLexicon, options: &SentimentOptions) -> Result<SentimentScore> {
    if lexicon.is_empty() {
        return Err(Error::resource("sentiment lexicon", None, "lexicon is empty"));
    }
    let (mut pol_sum, mut subj_sum, mut matched) = (0.0, 0.0, 0usize);
    for sentence in analyzed.sentence_iter() {
        let words: Vec<&Token> = sentence.iter().filter(|t| t.is_lexical()).collect();
        let (mut sp, mut ss, mut n) = (0.0, 0.0, 0usize);
        for (i, tok) in words.iter().enumerate() {
            if lexicon.negations.contains(&tok.normalized) {
                continue;
            }
            let next_is_match = words.get(i + 1).is_some_and(|t| lexicon.lookup(t).is_some());
            if lexicon.intensifiers.contains_key(&tok.normalized) && next_is_match {
                continue;
            }
            let Some((mut p, s)) = lexicon.lookup(tok) else {
                continue;
            };
            let from = i.saturating_sub(options.negation_window);
            if words[from..i].iter().any(|t| lexicon.negations.contains(&t.normalized)) {
                p = -p;
            }
            if i > 0 {
                if let Some(m) = lexicon.intensifiers.get(&words[i - 1].normalized) {
                    p *= m;
                }
            }
            sp += p.clamp(-1.0, 1.0);
            ss += s;
            n += 1;
        }
        if n > 0 {
            pol_sum += sp / n as f64;
            subj_sum += ss / n as f64;
            matched += 1;
        }
    }
    if matched == 0 {
        return Ok(SentimentScore::new(0.0, 0.0));
    }
    Ok(SentimentScore::new(pol_sum / matched as f64, subj_sum / matched as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::Resources;
    use proptest::prelude::*;

    fn analyze(text: &str) -> AnalyzedText {
        Resources::bundled().textkit.analyze(text).unwrap()
    }

    fn small() -> SentimentLexicon {
        let mut lex = SentimentLexicon::default();
        lex.insert("good", None, 0.8, 0.9).unwrap();
        lex.insert("bad", None, -0.6, 0.7).unwrap();
        lex.insert("novel", Some("JJ"), 0.5, 0.6).unwrap();
        lex.add_negation("not");
        lex.add_intensifier("very", 1.5);
        lex
    }

    #[test]
    fn zero_match_document() {
        let s = sentiment_scores(&analyze("The cat sat."), &small(), &SentimentOptions::default()).unwrap();
        assert_eq!(s, SentimentScore { polarity: 0.0, subjectivity: 0.0, objectivity: 1.0 });
    }

    #[test]
    fn singleton_entry() {
        let s = sentiment_scores(&analyze("This is good."), &small(), &SentimentOptions::default()).unwrap();
        assert!((s.polarity - 0.8).abs() < 1e-12);
        assert!((s.subjectivity - 0.9).abs() < 1e-12);
        assert!((s.objectivity - 0.1).abs() < 1e-12);
    }

    #[test]
    fn negation_window() {
        let lex = small();
        let o = SentimentOptions::default();
        let s = sentiment_scores(&analyze("This is not really all good."), &lex, &o).unwrap();
        assert!((s.polarity + 0.8).abs() < 1e-12);
        let s = sentiment_scores(&analyze("This is not really all that good."), &lex, &o).unwrap();
        assert!((s.polarity - 0.8).abs() < 1e-12);
    }

    #[test]
    fn intensifier_scales_then_clamps() {
        let lex = small();
        let o = SentimentOptions::default();
        let s = sentiment_scores(&analyze("It is very bad."), &lex, &o).unwrap();
        assert!((s.polarity + 0.9).abs() < 1e-12);
        let s = sentiment_scores(&analyze("It is very good."), &lex, &o).unwrap();
        assert_eq!(s.polarity, 1.0);
        assert!((s.subjectivity - 0.9).abs() < 1e-12);
    }

    #[test]
    fn sentence_weighted_mean() {
        let s = sentiment_scores(&analyze("Good and good and bad. Nothing here. Bad."), &small(), &SentimentOptions::default()).unwrap();
        let first = (0.8 + 0.8 - 0.6) / 3.0;
        assert!((s.polarity - (first - 0.6) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn bad_rows_are_reported() {
        let err = SentimentLexicon::from_csv("word,pos,polarity,subjectivity\ngood,,0.5,0.5\nbad,,-2,0.5\n", "word\n", "word,multiplier\n").unwrap_err();
        assert!(matches!(err, Error::InvalidResource { line: Some(3), .. }));
        let err = SentimentLexicon::from_csv("word,pos,polarity,subjectivity\n", "word\n", "word,multiplier\n").unwrap_err();
        assert!(matches!(err, Error::InvalidResource { line: None, .. }));
        let err = SentimentLexicon::from_csv("word,pos,polarity,subjectivity\ngood,,0.5,0.5\n", "word\n", "word,multiplier\nvery,0\n").unwrap_err();
        assert!(matches!(err, Error::InvalidResource { line: Some(2), .. }));
    }

    #[test]
    fn bundled_lexicon_scores_academic_text() {
        let r = Resources::bundled();
        let s = sentiment_scores(&analyze("We propose a simple and effective method. Results are excellent."), &r.sentiment, &SentimentOptions::default()).unwrap();
        assert!(s.polarity > 0.0);
        assert_eq!(s.objectivity, 1.0 - s.subjectivity);
    }

    proptest! {
        #[test]
        fn mirrored_lexicon_negates_polarity(idx in prop::collection::vec(0usize..6, 1..20), split in 1usize..5) {
            let vocab = ["good", "bad", "very", "not", "model", "data"];
            let words: Vec<&str> = idx.iter().map(|&i| vocab[i]).collect();
            let mut text = String::new();
            for (i, w) in words.iter().enumerate() {
                text.push_str(w);
                text.push(if (i + 1) % split == 0 { '.' } else { ' ' });
                text.push(' ');
            }
            text.push_str("End.");
            let a = analyze(&text);
            let lex = small();
            let o = SentimentOptions::default();
            let s = sentiment_scores(&a, &lex, &o).unwrap();
            let m = sentiment_scores(&a, &lex.mirrored(), &o).unwrap();
            prop_assert!((s.polarity + m.polarity).abs() < 1e-12);
            prop_assert_eq!(s.subjectivity, m.subjectivity);
            prop_assert_eq!(s.objectivity, 1.0 - s.subjectivity);
            prop_assert!((-1.0..=1.0).contains(&s.polarity));
        }

        #[test]
        fn sentence_order_invariant(perm in Just(vec!["Good data.", "Bad model.", "Very good results.", "Not bad at all."]).prop_shuffle()) {
            let lex = small();
            let o = SentimentOptions::default();
            let base = sentiment_scores(&analyze("Good data. Bad model. Very good results. Not bad at all."), &lex, &o).unwrap();
            let s = sentiment_scores(&analyze(&perm.join(" ")), &lex, &o).unwrap();
            prop_assert!((s.polarity - base.polarity).abs() < 1e-12);
            prop_assert!((s.subjectivity - base.subjectivity).abs() < 1e-12);
        }
    }
}
