//! Cohesion: adjacent lexical overlap, semantic overlap and connectives.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textkit::{AnalyzedText, Token, WordClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectiveCategory {
    BasicConnectives,
    AllLogical,
    AllTemporal,
    ReasonAndPurpose,
    Order,
}

impl ConnectiveCategory {
    pub const ALL: [ConnectiveCategory; 5] = [
        ConnectiveCategory::BasicConnectives,
        ConnectiveCategory::AllLogical,
        ConnectiveCategory::AllTemporal,
        ConnectiveCategory::ReasonAndPurpose,
        ConnectiveCategory::Order,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConnectiveCategory::BasicConnectives => "basic_connectives",
            ConnectiveCategory::AllLogical => "all_logical",
            ConnectiveCategory::AllTemporal => "all_temporal",
            ConnectiveCategory::ReasonAndPurpose => "reason_and_purpose",
            ConnectiveCategory::Order => "order",
        }
    }
}

impl fmt::Display for ConnectiveCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConnectiveCategory {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.trim().to_lowercase().replace(['-', ' '], "_");
        ConnectiveCategory::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| format!("unknown connective category `{s}`"))
    }
}

/// Connective expressions grouped by category.
#[derive(Debug, Clone, Default)]
pub struct ConnectiveLexicon {
    // expression tokens -> categories listing it
    expressions: HashMap<Vec<String>, Vec<ConnectiveCategory>>,
    by_first: HashMap<String, Vec<Vec<String>>>,
    duplicates: usize,
}

impl ConnectiveLexicon {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (ConnectiveCategory, S)>,
        S: AsRef<str>,
    {
        let mut lex = ConnectiveLexicon::default();
        for (cat, expr) in entries {
            lex.insert(cat, expr.as_ref());
        }
        lex
    }

    fn insert(&mut self, cat: ConnectiveCategory, expr: &str) {
        let words: Vec<String> = expr.split_whitespace().map(str::to_lowercase).collect();
        if words.is_empty() {
            return;
        }
        let cats = self.expressions.entry(words.clone()).or_default();
        if cats.contains(&cat) {
            self.duplicates += 1;
            return;
        }
        if cats.is_empty() {
            let bucket = self.by_first.entry(words[0].clone()).or_default();
            bucket.push(words);
            bucket.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        }
        cats.push(cat);
    }

    /// CSV with header `category,expression`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lex = ConnectiveLexicon::default();
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        for (i, row) in reader.records().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| Error::resource("connectives", Some(line), e.to_string()))?;
            if row.len() != 2 {
                return Err(Error::resource("connectives", Some(line), "expected `category,expression`"));
            }
            let cat: ConnectiveCategory = row[0].parse().map_err(|e: String| Error::resource("connectives", Some(line), e))?;
            lex.insert(cat, &row[1]);
        }
        if lex.expressions.is_empty() {
            return Err(Error::resource("connectives", None, "no expressions"));
        }
        Ok(lex)
    }

    pub fn len(&self) -> usize {
        self.expressions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expressions.is_empty()
    }

    /// Repeated (category, expression) rows dropped on load.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn category_sizes(&self) -> BTreeMap<ConnectiveCategory, usize> {
        let mut sizes: BTreeMap<ConnectiveCategory, usize> = ConnectiveCategory::ALL.iter().map(|c| (*c, 0)).collect();
        for cats in self.expressions.values() {
            for c in cats {
                *sizes.get_mut(c).unwrap() += 1;
            }
        }
        sizes
    }

    /// Longest expression starting at `tokens[i]`, with its length.
    fn match_at(&self, tokens: &[&str], i: usize) -> Option<(usize, &[ConnectiveCategory])> {
        let candidates = self.by_first.get(tokens[i])?;
        for expr in candidates {
            let n = expr.len();
            if i + n <= tokens.len() && expr.iter().zip(&tokens[i..i + n]).all(|(a, b)| a == b) {
                return Some((n, &self.expressions[expr]));
            }
        }
        None
    }
}

/// Matches per word token for each category.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConnectiveRates {
    pub basic_connectives: f64,
    pub all_logical: f64,
    pub all_temporal: f64,
    pub reason_and_purpose: f64,
    pub order: f64,
}

impl ConnectiveRates {
    pub fn get(&self, cat: ConnectiveCategory) -> f64 {
        match cat {
            ConnectiveCategory::BasicConnectives => self.basic_connectives,
            ConnectiveCategory::AllLogical => self.all_logical,
            ConnectiveCategory::AllTemporal => self.all_temporal,
            ConnectiveCategory::ReasonAndPurpose => self.reason_and_purpose,
            ConnectiveCategory::Order => self.order,
        }
    }

    fn get_mut(&mut self, cat: ConnectiveCategory) -> &mut f64 {
        match cat {
            ConnectiveCategory::BasicConnectives => &mut self.basic_connectives,
            ConnectiveCategory::AllLogical => &mut self.all_logical,
            ConnectiveCategory::AllTemporal => &mut self.all_temporal,
            ConnectiveCategory::ReasonAndPurpose => &mut self.reason_and_purpose,
            ConnectiveCategory::Order => &mut self.order,
        }
    }
}

/// Raw match counts per category.
pub fn connective_counts(analyzed: &AnalyzedText, lexicon: &ConnectiveLexicon) -> BTreeMap<ConnectiveCategory, usize> {
    let mut counts: BTreeMap<ConnectiveCategory, usize> = ConnectiveCategory::ALL.iter().map(|c| (*c, 0)).collect();
    for sentence in analyzed.sentence_iter() {
        let norm: Vec<&str> = sentence.iter().map(|t| t.normalized.as_str()).collect();
        let mut i = 0;
        while i < norm.len() {
            match lexicon.match_at(&norm, i) {
                Some((n, cats)) => {
                    for c in cats {
                        *counts.get_mut(c).unwrap() += 1;
                    }
                    i += n;
                }
                None => i += 1,
            }
        }
    }
    counts
}

pub fn connective_rates(analyzed: &AnalyzedText, lexicon: &ConnectiveLexicon) -> ConnectiveRates {
    let words = analyzed.word_count();
    let mut rates = ConnectiveRates::default();
    if words == 0 {
        return rates;
    }
    for (cat, n) in connective_counts(analyzed, lexicon) {
        *rates.get_mut(cat) = n as f64 / words as f64;
    }
    rates
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapMode {
    /// Content-word types.
    All,
    /// Noun and pronoun types.
    Argument,
}

fn overlap_types(sentence: &[Token], mode: OverlapMode) -> HashSet<&str> {
    sentence
        .iter()
        .filter(|t| match mode {
            OverlapMode::All => t.word_class == WordClass::Content,
            OverlapMode::Argument => t.is_noun_or_pronoun(),
        })
        .map(|t| t.normalized.as_str())
        .collect()
}

/// Mean overlap of adjacent type sets. Each pair scores shared types over the
/// earlier set's size, or over the union when `symmetric`; an empty
/// denominator scores 0.
pub fn overlap_of_sets<T: Eq + std::hash::Hash>(sets: &[HashSet<T>], symmetric: bool) -> Result<f64> {
    if sets.len() < 2 {
        return Err(Error::InsufficientSentences);
    }
    let mut total = 0.0;
    for pair in sets.windows(2) {
        let shared = pair[0].intersection(&pair[1]).count();
        let denom = if symmetric { pair[0].union(&pair[1]).count() } else { pair[0].len() };
        if denom > 0 {
            total += shared as f64 / denom as f64;
        }
    }
    Ok(total / (sets.len() - 1) as f64)
}

pub fn adjacent_overlap(analyzed: &AnalyzedText, mode: OverlapMode, symmetric: bool) -> Result<f64> {
    let sets: Vec<HashSet<&str>> = analyzed.sentence_iter().map(|s| overlap_types(s, mode)).collect();
    overlap_of_sets(&sets, symmetric)
}

/// Word vectors read from `word v1 v2 ... vk` lines.
#[derive(Debug, Clone, Default)]
pub struct VectorSpace {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl VectorSpace {
    pub fn from_text(text: &str) -> Result<Self> {
        let mut space = VectorSpace::default();
        for (i, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            // optional word2vec-style "count dim" header
            if i == 0 && fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok()) {
                continue;
            }
            let values: Vec<f64> = fields[1..]
                .iter()
                .map(|v| v.parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::resource("vectors", Some(i + 1), "non-numeric vector component"))?;
            if values.is_empty() {
                return Err(Error::resource("vectors", Some(i + 1), "word without vector"));
            }
            if space.dim == 0 {
                space.dim = values.len();
            } else if values.len() != space.dim {
                return Err(Error::resource(
                    "vectors",
                    Some(i + 1),
                    format!("expected {} components, found {}", space.dim, values.len()),
                ));
            }
            space.vectors.insert(fields[0].to_lowercase(), values);
        }
        if space.vectors.is_empty() {
            return Err(Error::resource("vectors", None, "no vectors"));
        }
        Ok(space)
    }

    pub fn from_map(vectors: HashMap<String, Vec<f64>>) -> Result<Self> {
        let dim = vectors.values().next().map_or(0, Vec::len);
        if dim == 0 || vectors.values().any(|v| v.len() != dim) {
            return Err(Error::resource("vectors", None, "vectors must share one non-zero dimension"));
        }
        Ok(VectorSpace { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }
}

fn dense_sentence_vector(sentence: &[Token], space: &VectorSpace) -> Vec<f64> {
    let mut sum = vec![0.0; space.dim];
    let mut n = 0usize;
    for tok in sentence.iter().filter(|t| t.word_class == WordClass::Content) {
        if let Some(v) = space.get(&tok.normalized) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
            n += 1;
        }
    }
    if n > 0 {
        sum.iter_mut().for_each(|s| *s /= n as f64);
    }
    sum
}

fn tf_vector(sentence: &[Token]) -> HashMap<&str, f64> {
    let mut tf = HashMap::new();
    for tok in sentence.iter().filter(|t| t.word_class == WordClass::Content) {
        *tf.entry(tok.normalized.as_str()).or_insert(0.0) += 1.0;
    }
    tf
}

fn cosine_dense(a: &[f64], b: &[f64]) -> Option<f64> {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (na > 0.0 && nb > 0.0).then(|| (dot / (na * nb)).clamp(-1.0, 1.0))
}

fn cosine_sparse(a: &HashMap<&str, f64>, b: &HashMap<&str, f64>) -> Option<f64> {
    let dot: f64 = a.iter().filter_map(|(k, x)| b.get(k).map(|y| x * y)).sum();
    let na: f64 = a.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|x| x * x).sum::<f64>().sqrt();
    (na > 0.0 && nb > 0.0).then(|| (dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Mean cosine between adjacent sentence vectors over content words. Uses
/// mean word vectors from `space`, or raw term frequencies when `None`.
/// Pairs with a zero vector on either side are skipped.
pub fn semantic_overlap(analyzed: &AnalyzedText, space: Option<&VectorSpace>) -> Result<f64> {
    if analyzed.sentence_count() < 2 {
        return Err(Error::InsufficientSentences);
    }
    let sentences: Vec<&[Token]> = analyzed.sentence_iter().collect();
    let cosines: Vec<f64> = match space {
        Some(space) => {
            let vecs: Vec<Vec<f64>> = sentences.iter().map(|s| dense_sentence_vector(s, space)).collect();
            vecs.windows(2).filter_map(|p| cosine_dense(&p[0], &p[1])).collect()
        }
        None => {
            let vecs: Vec<HashMap<&str, f64>> = sentences.iter().map(|s| tf_vector(s)).collect();
            vecs.windows(2).filter_map(|p| cosine_sparse(&p[0], &p[1])).collect()
        }
    };
    if cosines.is_empty() {
        return Err(Error::InsufficientData("no adjacent sentence pair has content vectors on both sides".into()));
    }
    Ok(cosines.iter().sum::<f64>() / cosines.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CohesionProfile {
    pub adjacent_overlap_all: Option<f64>,
    pub adjacent_overlap_argument: Option<f64>,
    pub lsa_all_sent: Option<f64>,
    pub connectives: ConnectiveRates,
}

pub fn cohesion_profile(
    analyzed: &AnalyzedText,
    lexicon: &ConnectiveLexicon,
    space: Option<&VectorSpace>,
    symmetric: bool,
) -> CohesionProfile {
    CohesionProfile {
        adjacent_overlap_all: adjacent_overlap(analyzed, OverlapMode::All, symmetric).ok(),
        adjacent_overlap_argument: adjacent_overlap(analyzed, OverlapMode::Argument, symmetric).ok(),
        lsa_all_sent: semantic_overlap(analyzed, space).ok(),
        connectives: connective_rates(analyzed, lexicon),
    }
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
    fn overlap_identical_and_disjoint() {
        let a = analyze("The model learns features. The model learns features.");
        assert_eq!(adjacent_overlap(&a, OverlapMode::All, false).unwrap(), 1.0);
        let b = analyze("The model learns features. Cats chase mice.");
        assert_eq!(adjacent_overlap(&b, OverlapMode::All, false).unwrap(), 0.0);
        let c = analyze("One sentence only.");
        assert!(matches!(adjacent_overlap(&c, OverlapMode::All, false), Err(Error::InsufficientSentences)));
    }

    #[test]
    fn three_sentence_oracle() {
        let a = analyze("Neural models learn features quickly. The features help models. Cats like features.");
        let sets: Vec<HashSet<String>> = a
            .sentence_iter()
            .map(|s| s.iter().filter(|t| t.word_class == WordClass::Content).map(|t| t.normalized.clone()).collect())
            .collect();
        let mut expected = 0.0;
        for i in 0..2 {
            let shared = sets[i].iter().filter(|w| sets[i + 1].contains(*w)).count();
            expected += shared as f64 / sets[i].len() as f64;
        }
        expected /= 2.0;
        assert!((adjacent_overlap(&a, OverlapMode::All, false).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn symmetric_overlap_is_order_free() {
        let a = analyze("Neural models learn features quickly. The features help models. Cats like features.");
        let b = analyze("Cats like features. The features help models. Neural models learn features quickly.");
        let fa = adjacent_overlap(&a, OverlapMode::All, true).unwrap();
        let fb = adjacent_overlap(&b, OverlapMode::All, true).unwrap();
        assert!((fa - fb).abs() < 1e-12);
    }

    #[test]
    fn modes_agree_when_type_sets_agree() {
        // every content word is a noun and there are no pronouns or other content words
        let a = analyze("Models, data. Data, graphs. Graphs, models.");
        let all = adjacent_overlap(&a, OverlapMode::All, false).unwrap();
        let arg = adjacent_overlap(&a, OverlapMode::Argument, false).unwrap();
        assert_eq!(all, arg);
    }

    #[test]
    fn semantic_overlap_tf() {
        let a = analyze("The model learns features. The model learns features.");
        assert!((semantic_overlap(&a, None).unwrap() - 1.0).abs() < 1e-12);
        let b = analyze("Models. Cats.");
        assert_eq!(semantic_overlap(&b, None).unwrap(), 0.0);
    }

    #[test]
    fn semantic_overlap_scale_invariant() {
        let a = analyze("Neural models learn features. Robust features help training.");
        let mut m = HashMap::new();
        for (i, w) in ["neural", "models", "learn", "features", "robust", "help", "training"].iter().enumerate() {
            m.insert(w.to_string(), vec![1.0 + i as f64, (i as f64).sin(), 0.5 - i as f64 * 0.1]);
        }
        let scaled: HashMap<String, Vec<f64>> = m.iter().map(|(k, v)| (k.clone(), v.iter().map(|x| x * 3.7).collect())).collect();
        let s1 = semantic_overlap(&a, Some(&VectorSpace::from_map(m).unwrap())).unwrap();
        let s2 = semantic_overlap(&a, Some(&VectorSpace::from_map(scaled).unwrap())).unwrap();
        assert!((s1 - s2).abs() < 1e-12);
    }

    #[test]
    fn vector_file_dimension_mismatch() {
        let err = VectorSpace::from_text("a 1 2\nb 1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::InvalidResource { line: Some(2), .. }));
    }

    #[test]
    fn connective_examples() {
        let lex = &Resources::bundled().connectives;
        let a = analyze("Models and data matter for good results in practice here.");
        assert_eq!(a.word_count(), 10);
        let counts = connective_counts(&a, lex);
        assert!(counts[&ConnectiveCategory::BasicConnectives] >= 1);
        let a = analyze("Models and data matter a lot in practice here today.");
        assert!((connective_rates(&a, lex).basic_connectives - 0.1).abs() < 1e-12);
        let a = analyze("To begin with, next we test.");
        assert_eq!(connective_counts(&a, lex)[&ConnectiveCategory::Order], 2);
        let a = analyze("Cats sleep.");
        assert_eq!(connective_rates(&a, lex), ConnectiveRates::default());
    }

    #[test]
    fn longest_match_wins() {
        let lex = ConnectiveLexicon::new([
            (ConnectiveCategory::Order, "first"),
            (ConnectiveCategory::Order, "first of all"),
            (ConnectiveCategory::AllLogical, "first of all"),
        ]);
        let a = analyze("First of all we test.");
        let counts = connective_counts(&a, &lex);
        assert_eq!(counts[&ConnectiveCategory::Order], 1);
        assert_eq!(counts[&ConnectiveCategory::AllLogical], 1);
    }

    #[test]
    fn unknown_category_is_rejected() {
        let err = ConnectiveLexicon::from_csv("category,expression\nbasic_connectives,and\nmisc,so\n").unwrap_err();
        assert!(matches!(err, Error::InvalidResource { line: Some(3), .. }));
    }

    #[test]
    fn bundled_lexicon_covers_all_categories() {
        let sizes = Resources::bundled().connectives.category_sizes();
        assert_eq!(sizes.len(), 5);
        assert!(sizes.values().all(|&n| n > 0));
    }

    proptest! {
        #[test]
        fn overlap_bounds_and_reversal(sets in prop::collection::vec(prop::collection::hash_set(0u8..12, 0..6), 2..8)) {
            let a = overlap_of_sets(&sets, false).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            let mut rev = sets.clone();
            rev.reverse();
            prop_assert!((overlap_of_sets(&sets, true).unwrap() - overlap_of_sets(&rev, true).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn connective_counts_add_under_concatenation(n1 in 0usize..4, n2 in 0usize..4) {
            let lex = &Resources::bundled().connectives;
            let s1 = "We train models and test them. ".repeat(n1 + 1);
            let s2 = "Data grows because sensors spread. ".repeat(n2 + 1);
            let a1 = analyze(&s1);
            let a2 = analyze(&s2);
            let both = analyze(&format!("{s1}{s2}"));
            let c1 = connective_counts(&a1, lex);
            let c2 = connective_counts(&a2, lex);
            let cb = connective_counts(&both, lex);
            for cat in ConnectiveCategory::ALL {
                prop_assert_eq!(cb[&cat], c1[&cat] + c2[&cat]);
            }
            let weighted = connective_rates(&a1, lex).basic_connectives * a1.word_count() as f64
                + connective_rates(&a2, lex).basic_connectives * a2.word_count() as f64;
            prop_assert!((connective_rates(&both, lex).basic_connectives * both.word_count() as f64 - weighted).abs() < 1e-9);
        }
    }
}
