//! Synthetic abstracts and corpora for tests, demos and benchmarks.
//!
//! Abstracts are filled from sentence templates. Every adjective slot takes a
//! word from the LLM adjective list with probability `llm_adj_prob` and a
//! matched neutral adjective otherwise. Each neutral adjective mirrors one
//! LLM adjective in length, syllables, difficulty, norms coverage and
//! sentiment, so raising the probability moves the marker rate and leaves the
//! other metrics nearly untouched.

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusWindow, PeriodIndex};
use crate::error::{Error, Result};
use crate::readability::EasyWords;
use crate::resources::Resources;

const TEMPLATES: &[&str] = &[
    "We propose a {adj} {noun} for {noun} {nouns}.",
    "The {adj} {noun} {verbs} the {noun} of {adj} {nouns}.",
    "Our {noun} {verbs} {adj} {nouns} and we {verb} the {noun} on {num} {nouns}.",
    "Experiments on {num} {adj} {nouns} show that the {noun} {verbs} the {noun} {adv}.",
    "However, the {noun} is {adj} when the {nouns} are {adj}.",
    "In this paper, we study the {noun} of {adj} {nouns}.",
    "Furthermore, we show that the {adj} {noun} {verbs} the {noun}.",
    "These {nouns} {verb} the {noun} {adv}; the {noun} is {adj}.",
    "Finally, we discuss {adj} {nouns} for the {noun}.",
    "As a result, the {noun} {verbs} {num} {nouns} in {adj} {nouns}.",
    "We also {verb} the {adj} {noun} because the {nouns} are {adj}.",
    "The {noun} {verbs} the {noun}, but the {nouns} remain {adj}.",
];

const NOUNS: &[(&str, &str)] = &[
    ("model", "models"),
    ("method", "methods"),
    ("network", "networks"),
    ("graph", "graphs"),
    ("system", "systems"),
    ("approach", "approaches"),
    ("task", "tasks"),
    ("feature", "features"),
    ("signal", "signals"),
    ("structure", "structures"),
    ("theory", "theories"),
    ("estimate", "estimates"),
    ("solution", "solutions"),
    ("problem", "problems"),
    ("equation", "equations"),
    ("field", "fields"),
    ("particle", "particles"),
    ("state", "states"),
    ("sample", "samples"),
];

const VERBS: &[(&str, &str)] = &[
    ("improve", "improves"),
    ("reduce", "reduces"),
    ("capture", "captures"),
    ("predict", "predicts"),
    ("describe", "describes"),
    ("explain", "explains"),
];

const ADVERBS: &[&str] = &["quickly", "clearly", "directly", "largely", "closely", "often"];

const NUMBERS: &[&str] = &["two", "three", "four", "five", "six", "ten"];

/// Paired adjective pools; `neutral[i]` mirrors `llm[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjectivePools {
    pub llm: Vec<String>,
    pub neutral: Vec<String>,
}

fn signature(word: &str, res: &Resources, easy: &EasyWords) -> (usize, u32, bool, bool) {
    (
        word.chars().count(),
        res.textkit.count_syllables(word),
        easy.is_difficult_word(word),
        res.norms.get(word).is_some(),
    )
}

fn sentiment_free(word: &str, res: &Resources) -> bool {
    let a = res.textkit.analyze(word);
    a.map(|a| {
        let s = crate::sentiment::sentiment_scores(&a, &res.sentiment, &Default::default());
        s.map_or(true, |s| s.polarity == 0.0 && s.subjectivity == 0.0)
    })
    .unwrap_or(false)
}

impl AdjectivePools {
    /// Pairs each usable LLM adjective with a distinct lexicon adjective of
    /// the same shape. LLM adjectives without a partner are left out.
    pub fn matched(res: &Resources) -> Result<Self> {
        let tagger = res.textkit.tagger();
        let easy = &res.easy_words;
        let mut candidates: Vec<String> = NEUTRAL_ADJECTIVES
            .iter()
            .filter(|w| tagger.lexicon_tag(w) == Some("JJ"))
            .filter(|w| !res.llm_words.adjectives.contains(**w) && !res.llm_words.adverbs.contains(**w))
            .filter(|w| sentiment_free(w, res))
            .map(|w| w.to_string())
            .collect();
        candidates.sort();
        candidates.dedup();
        let mut pools = AdjectivePools {
            llm: Vec::new(),
            neutral: Vec::new(),
        };
        for adj in &res.llm_words.adjectives {
            if tagger.lexicon_tag(adj) != Some("JJ") || !sentiment_free(adj, res) {
                continue;
            }
            let sig = signature(adj, res, easy);
            if let Some(pos) = candidates.iter().position(|c| signature(c, res, easy) == sig) {
                pools.llm.push(adj.clone());
                pools.neutral.push(candidates.remove(pos));
            }
        }
        if pools.llm.len() < 3 {
            return Err(Error::InsufficientData(format!("only {} matched adjective pairs", pools.llm.len())));
        }
        Ok(pools)
    }
}

// plain descriptive adjectives to draw partners from
const NEUTRAL_ADJECTIVES: &[&str] = &[
    "linear", "random", "finite", "global", "local", "formal", "direct", "simple", "single", "double", "binary",
    "digital", "thermal", "spatial", "spectral", "nuclear", "quantum", "optical", "magnetic", "electric", "elastic",
    "discrete", "periodic", "standard", "general", "typical", "regular", "natural", "uniform", "internal", "external",
    "vertical", "parallel", "sequential", "empirical", "numerical", "analytical", "statistical", "structural",
    "functional", "temporal", "geometric", "algebraic", "symmetric", "asymmetric", "dynamical", "stochastic",
    "classical", "relativistic", "topological", "combinatorial", "computational", "experimental", "theoretical",
    "dimensional", "conventional", "operational", "additional", "particular", "different", "similar", "separate",
    "previous", "current", "recent", "related", "relevant", "specific", "available", "observed", "measured",
    "physical", "chemical", "biological", "molecular", "atomic", "cosmic", "solar", "stellar", "galactic", "planetary",
    "orbital", "angular", "vector", "scalar", "tensor", "matrix", "lateral", "central", "partial", "total", "initial",
    "final", "maximal", "minimal", "optimal", "normal", "residual", "sparse", "dense", "smooth", "rough", "stable",
    "unstable", "compact", "convex", "concave", "bounded", "closed", "open", "large", "small", "short", "long", "wide",
    "narrow", "deep", "shallow", "early", "late", "annual", "daily", "mutual", "joint", "common", "rare", "frequent",
    "explicit", "implicit", "exact", "approximate", "nonlinear", "multiple", "several", "various", "distinct",
    "equivalent", "comparable", "continuous", "consecutive", "successive", "subsequent", "preliminary", "auxiliary",
    "hierarchical", "distributed", "decentralized", "adaptive", "interactive", "predictive", "descriptive",
    "qualitative", "quantitative", "conditional", "marginal", "posterior", "prior", "latent", "hidden", "visible",
    "neural", "textual", "visual", "acoustic", "semantic", "syntactic", "lexical", "logical", "causal", "canonical",
    "diagonal", "orthogonal", "tangential", "longitudinal", "transverse", "radial", "axial", "planar", "cubic",
    "spherical", "cylindrical", "hexagonal", "triangular", "rectangular", "circular", "elliptical", "parabolic",
    "hyperbolic", "exponential", "logarithmic", "polynomial", "integral", "differential", "variational",
];

/// Shape of one synthetic abstract.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AbstractConfig {
    /// Sentences are added until the abstract reaches this many words.
    pub target_words: usize,
    /// Relative half-width of the uniform spread around `target_words`.
    pub length_spread: f64,
    pub llm_adj_prob: f64,
}

impl Default for AbstractConfig {
    fn default() -> Self {
        AbstractConfig {
            target_words: 170,
            length_spread: 0.3,
            llm_adj_prob: 0.3,
        }
    }
}

fn pick<'a, R: Rng>(rng: &mut R, pool: &'a [&'a str]) -> &'a str {
    pool.choose(rng).expect("non-empty pool")
}

fn fill<R: Rng>(rng: &mut R, template: &str, pools: &AdjectivePools, p: f64) -> String {
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = open + rest[open..].find('}').expect("closed slot");
        let slot = &rest[open + 1..close];
        let word = match slot {
            "adj" => {
                let i = rng.gen_range(0..pools.llm.len());
                if rng.gen_bool(p) {
                    pools.llm[i].clone()
                } else {
                    pools.neutral[i].clone()
                }
            }
            "noun" => NOUNS.choose(rng).unwrap().0.to_string(),
            "nouns" => NOUNS.choose(rng).unwrap().1.to_string(),
            "verb" => VERBS.choose(rng).unwrap().0.to_string(),
            "verbs" => VERBS.choose(rng).unwrap().1.to_string(),
            "adv" => pick(rng, ADVERBS).to_string(),
            "num" => pick(rng, NUMBERS).to_string(),
            other => unreachable!("unknown slot {other}"),
        };
        if word.starts_with(['a', 'e', 'i', 'o', 'u']) && (out.ends_with(" a ") || out == "a ") {
            out.insert(out.len() - 1, 'n');
        }
        out.push_str(&word);
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    out
}

pub fn generate_abstract<R: Rng>(rng: &mut R, pools: &AdjectivePools, config: &AbstractConfig) -> String {
    let mut sentences: Vec<String> = Vec::new();
    let mut words = 0;
    let spread = (config.target_words as f64 * config.length_spread.clamp(0.0, 1.0)).round() as usize;
    let target = rng.gen_range(config.target_words - spread..=config.target_words + spread);
    while words < target {
        let template = pick(rng, TEMPLATES);
        let s = fill(rng, template, pools, config.llm_adj_prob);
        words += s.split_whitespace().count();
        sentences.push(s);
    }
    sentences.join(" ")
}

/// Settings for a synthetic JSONL corpus with a country sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusConfig {
    pub docs_per_period: usize,
    pub window: CorpusWindow,
    pub seed: u64,
    pub abstract_config: AbstractConfig,
    /// LLM adjective probability from `shift_year` on.
    pub shifted_llm_adj_prob: Option<f64>,
    pub shift_year: i32,
    /// Terms that start appearing in documents from the given year.
    pub novel_terms: Vec<(i32, String)>,
    /// (year, month) pairs no document is dated in.
    pub avoid_months: Vec<(i32, u32)>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            docs_per_period: 5,
            window: CorpusWindow::default(),
            seed: 0,
            abstract_config: AbstractConfig::default(),
            shifted_llm_adj_prob: None,
            shift_year: 2023,
            novel_terms: vec![(2023, "chatgpt".into())],
            avoid_months: vec![(2022, 12)],
        }
    }
}

const CATEGORIES: &[&str] = &["cs.LG", "cs.CL", "cs.CV", "math.PR", "math.AP", "hep-th", "cond-mat.str-el", "quant-ph", "astro-ph.GA"];
const COUNTRIES: &[&str] = &["United States", "United Kingdom", "China", "Germany", "India", "Canada", "Japan", "Australia"];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    /// One JSON object per line.
    pub jsonl: String,
    /// `doc_id,country` CSV.
    pub countries_csv: String,
}

pub fn generate_corpus(res: &Resources, config: &CorpusConfig) -> Result<SyntheticCorpus> {
    let pools = AdjectivePools::matched(res)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let start = config.window.start_year();
    let mut jsonl = String::new();
    let mut countries = String::from("doc_id,country\n");
    let mut serial = 0usize;
    for ordinal in 0..config.window.period_count() {
        let period = PeriodIndex::from_ordinal(ordinal, start);
        let mut ac = config.abstract_config;
        if let Some(p) = config.shifted_llm_adj_prob.filter(|_| period.year >= config.shift_year) {
            ac.llm_adj_prob = p;
        }
        for _ in 0..config.docs_per_period {
            serial += 1;
            let id = format!("{}.{:05}", period.year % 100 * 100 + period.quarter as i32 * 3, serial);
            let mut month = (period.quarter - 1) * 3 + rng.gen_range(1..=3);
            if config.avoid_months.contains(&(period.year, month)) {
                month = (period.quarter - 1) * 3 + 1;
            }
            let day = rng.gen_range(1..=28);
            let date = NaiveDate::from_ymd_opt(period.year, month, day).expect("valid date");
            let mut text = generate_abstract(&mut rng, &pools, &ac);
            for (year, term) in &config.novel_terms {
                if period.year >= *year && rng.gen_bool(0.5) {
                    text.push_str(&format!(" We compare the {} {} with {term}.", pick(&mut rng, &["simple", "linear"]), NOUNS.choose(&mut rng).unwrap().0));
                }
            }
            let cat = pick(&mut rng, CATEGORIES);
            let record = serde_json::json!({
                "id": id,
                "title": format!("On {} {}", pools.neutral.choose(&mut rng).unwrap(), NOUNS.choose(&mut rng).unwrap().1),
                "abstract": text,
                "categories": cat,
                "submitted": date.format("%Y-%m-%d").to_string(),
                "authors": ["A. Author", "B. Author"],
            });
            jsonl.push_str(&record.to_string());
            jsonl.push('\n');
            countries.push_str(&format!("{id},{}\n", pick(&mut rng, COUNTRIES)));
        }
    }
    Ok(SyntheticCorpus {
        jsonl,
        countries_csv: countries,
    })
}
