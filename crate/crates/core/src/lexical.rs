//! Lexical density, diversity (TTR / MATTR) and sophistication.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textkit::{AnalyzedText, WordClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexicalProfile {
    pub word_count: usize,
    pub avg_word_length: f64,
    pub content_tokens: usize,
    pub content_types: usize,
    pub function_tokens: usize,
    pub function_types: usize,
    pub lexical_density_tokens: f64,
    pub lexical_density_types: f64,
    pub mattr50: f64,
    /// `None` when no word of the text appears in the norms table.
    pub range_log_aw: Option<f64>,
    pub frequency_log_aw: Option<f64>,
}

pub const MATTR_WINDOW: usize = 50;

/// Counts, densities and MATTR-50 of an analyzed text. Sophistication fields
/// are left empty; see [`sophistication`].
pub fn lexical_profile(analyzed: &AnalyzedText) -> Result<LexicalProfile> {
    let word_count = analyzed.word_count();
    if word_count == 0 {
        return Err(Error::EmptyText);
    }
    let total_chars: usize = analyzed.words().map(|t| t.char_length).sum();

    let mut content_types = HashSet::new();
    let mut function_types = HashSet::new();
    let (mut content_tokens, mut function_tokens) = (0usize, 0usize);
    for tok in analyzed.words() {
        match tok.word_class {
            WordClass::Content => {
                content_tokens += 1;
                content_types.insert(tok.normalized.as_str());
            }
            WordClass::Function => {
                function_tokens += 1;
                function_types.insert(tok.normalized.as_str());
            }
            WordClass::Other => {}
        }
    }

    let lexical: Vec<&str> = analyzed.lexical_words().map(|t| t.normalized.as_str()).collect();
    let mattr50 = mattr(&lexical, MATTR_WINDOW)?;

    Ok(LexicalProfile {
        word_count,
        avg_word_length: total_chars as f64 / word_count as f64,
        content_tokens,
        content_types: content_types.len(),
        function_tokens,
        function_types: function_types.len(),
        lexical_density_tokens: ratio(content_tokens, content_tokens + function_tokens),
        lexical_density_types: ratio(content_types.len(), content_types.len() + function_types.len()),
        mattr50,
        range_log_aw: None,
        frequency_log_aw: None,
    })
}

// a text with no classified words has no content words either
fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Distinct types over tokens.
pub fn ttr<S: AsRef<str>>(tokens: &[S]) -> Result<f64> {
    if tokens.is_empty() {
        return Err(Error::EmptyText);
    }
    let types: HashSet<&str> = tokens.iter().map(|t| t.as_ref()).collect();
    Ok(types.len() as f64 / tokens.len() as f64)
}

/// Moving-average TTR: mean TTR over every contiguous window of `window`
/// tokens; plain TTR when the text is shorter than the window.
pub fn mattr<S: AsRef<str>>(tokens: &[S], window: usize) -> Result<f64> {
    if window < 2 {
        return Err(Error::InvalidConfig(format!("MATTR window must be at least 2, got {window}")));
    }
    if tokens.is_empty() {
        return Err(Error::EmptyText);
    }
    if tokens.len() <= window {
        return ttr(tokens);
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in &tokens[..window] {
        *counts.entry(t.as_ref()).or_default() += 1;
    }
    let mut distinct_sum = counts.len();
    for i in window..tokens.len() {
        let out = tokens[i - window].as_ref();
        let c = counts.get_mut(out).expect("token in window");
        *c -= 1;
        if *c == 0 {
            counts.remove(out);
        }
        *counts.entry(tokens[i].as_ref()).or_default() += 1;
        distinct_sum += counts.len();
    }
    let windows = tokens.len() - window + 1;
    Ok(distinct_sum as f64 / (windows * window) as f64)
}

/// Word -> (log10 frequency, log10 range) table.
#[derive(Debug, Clone, Default)]
pub struct Norms {
    entries: HashMap<String, (f64, f64)>,
}

impl Norms {
    pub fn new(entries: HashMap<String, (f64, f64)>) -> Self {
        Norms { entries }
    }

    /// Parses `word<TAB>log_frequency<TAB>log_range` lines; `#` starts a comment.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::resource(
                    "norms",
                    Some(lineno),
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            let parse = |s: &str, what: &str| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::resource("norms", Some(lineno), format!("{what} `{s}` is not a number")))
            };
            let freq = parse(cols[1], "log_frequency")?;
            let range = parse(cols[2], "log_range")?;
            entries.insert(cols[0].trim().to_lowercase(), (freq, range));
        }
        Ok(Norms { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<(f64, f64)> {
        self.entries.get(word).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sophistication {
    pub frequency_log_aw: f64,
    pub range_log_aw: f64,
    /// Share of tokens found in the norms table.
    pub coverage: f64,
}

/// Means of the norm values over every token present in `norms`.
pub fn sophistication<S: AsRef<str>>(tokens: &[S], norms: &Norms) -> Result<Sophistication> {
    if norms.is_empty() {
        return Err(Error::resource("norms", None, "norms table is empty"));
    }
    let (mut freq, mut range, mut hits) = (0.0, 0.0, 0usize);
    for tok in tokens {
        if let Some((f, r)) = norms.get(tok.as_ref()) {
            freq += f;
            range += r;
            hits += 1;
        }
    }
    if hits == 0 {
        return Err(Error::NoCoverage);
    }
    Ok(Sophistication {
        frequency_log_aw: freq / hits as f64,
        range_log_aw: range / hits as f64,
        coverage: hits as f64 / tokens.len() as f64,
    })
}

/// [`lexical_profile`] with sophistication filled in from `norms`.
pub fn lexical_profile_with_norms(analyzed: &AnalyzedText, norms: &Norms) -> Result<LexicalProfile> {
    let mut profile = lexical_profile(analyzed)?;
    let lexical: Vec<&str> = analyzed.lexical_words().map(|t| t.normalized.as_str()).collect();
    match sophistication(&lexical, norms) {
        Ok(s) => {
            profile.frequency_log_aw = Some(s.frequency_log_aw);
            profile.range_log_aw = Some(s.range_log_aw);
        }
        Err(Error::NoCoverage) => {}
        Err(e) => return Err(e),
    }
    Ok(profile)
}
