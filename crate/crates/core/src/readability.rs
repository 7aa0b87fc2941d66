//! New Dale-Chall and Flesch Reading Ease.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textkit::{AnalyzedText, Token, TokenKind};

/// The Dale-Chall familiar-word list.
#[derive(Debug, Clone)]
pub struct EasyWords {
    words: HashSet<String>,
}

impl EasyWords {
    pub fn new<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: HashSet<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        if words.is_empty() {
            return Err(Error::resource("easy words", None, "list is empty"));
        }
        Ok(EasyWords { words })
    }

    /// One word per line; blank lines and `#` comments ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::new(text.lines().filter(|l| !l.trim_start().starts_with('#')))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// True when neither `word` nor any regular base form of it is listed.
    /// Hyphenated words are easy when every lettered part is easy.
    pub fn is_difficult_word(&self, word: &str) -> bool {
        let word = word.to_lowercase();
        if !word.chars().any(char::is_alphabetic) {
            return false;
        }
        if self.is_easy_form(&word) {
            return false;
        }
        if word.contains('-') {
            let mut parts = word.split('-').filter(|p| p.chars().any(char::is_alphabetic)).peekable();
            if parts.peek().is_some() && parts.all(|p| self.is_easy_form(p)) {
                return false;
            }
        }
        true
    }

    fn is_easy_form(&self, word: &str) -> bool {
        self.words.contains(word) || base_forms(word).iter().any(|b| self.words.contains(b))
    }
}

/// Candidate base forms for regular -s/-es/-ies/-ed/-ied/-ing inflections.
pub fn base_forms(word: &str) -> Vec<String> {
    let mut out = Vec::new();
    let undouble = |stem: &str, out: &mut Vec<String>| {
        let b = stem.as_bytes();
        if b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] && !matches!(b[b.len() - 1], b'a' | b'e' | b'i' | b'o' | b'u') {
            out.push(stem[..stem.len() - 1].to_string());
        }
    };
    if let Some(stem) = word.strip_suffix("ies") {
        if !stem.is_empty() {
            out.push(format!("{stem}y"));
        }
    }
    if let Some(stem) = word.strip_suffix("es") {
        if !stem.is_empty() {
            out.push(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix('s') {
        if !stem.is_empty() && !stem.ends_with('s') {
            out.push(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix("ied") {
        if !stem.is_empty() {
            out.push(format!("{stem}y"));
        }
    }
    if let Some(stem) = word.strip_suffix("ed") {
        if !stem.is_empty() {
            out.push(stem.to_string());
            out.push(format!("{stem}e"));
            undouble(stem, &mut out);
        }
    }
    if let Some(stem) = word.strip_suffix("ing") {
        if stem.len() >= 2 {
            out.push(stem.to_string());
            out.push(format!("{stem}e"));
            undouble(stem, &mut out);
        }
    }
    out
}

/// Numbers, math placeholders and clitics are never difficult.
pub fn is_difficult(token: &Token, easy: &EasyWords) -> bool {
    token.kind == TokenKind::Word && !token.normalized.starts_with(['\'', '\u{2019}']) && easy.is_difficult_word(&token.normalized)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadabilityInputs {
    pub n_words: usize,
    pub n_sentences: usize,
    pub n_syllables: usize,
    pub n_difficult_words: usize,
    /// Denominator of the syllables-per-word ratio: alphabetic words only.
    pub n_syllable_words: usize,
}

impl ReadabilityInputs {
    /// Inputs where every word takes part in the syllable ratio.
    pub fn new(n_words: usize, n_sentences: usize, n_syllables: usize, n_difficult_words: usize) -> Self {
        ReadabilityInputs {
            n_words,
            n_sentences,
            n_syllables,
            n_difficult_words,
            n_syllable_words: n_words,
        }
    }

    pub fn from_text(analyzed: &AnalyzedText, easy: &EasyWords) -> Self {
        let mut inputs = ReadabilityInputs::new(analyzed.word_count(), analyzed.sentence_count(), 0, 0);
        inputs.n_syllable_words = 0;
        for tok in analyzed.words() {
            if tok.kind == TokenKind::Word {
                inputs.n_syllable_words += 1;
                inputs.n_syllables += tok.syllables as usize;
            }
            if is_difficult(tok, easy) {
                inputs.n_difficult_words += 1;
            }
        }
        inputs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityScores {
    pub ndc: f64,
    pub fre: f64,
}

pub fn ndc_score(inputs: &ReadabilityInputs) -> Result<f64> {
    if inputs.n_words == 0 || inputs.n_sentences == 0 {
        return Err(Error::EmptyText);
    }
    let words = inputs.n_words as f64;
    Ok(0.1579 * (100.0 * inputs.n_difficult_words as f64 / words) + 0.0496 * (words / inputs.n_sentences as f64))
}

pub fn fre_score(inputs: &ReadabilityInputs) -> Result<f64> {
    if inputs.n_words == 0 || inputs.n_sentences == 0 || inputs.n_syllable_words == 0 {
        return Err(Error::EmptyText);
    }
    let words = inputs.n_words as f64;
    Ok(206.835
        - 1.015 * (words / inputs.n_sentences as f64)
        - 84.6 * (inputs.n_syllables as f64 / inputs.n_syllable_words as f64))
}

pub fn readability_scores(analyzed: &AnalyzedText, easy: &EasyWords) -> Result<ReadabilityScores> {
    let inputs = ReadabilityInputs::from_text(analyzed, easy);
    Ok(ReadabilityScores {
        ndc: ndc_score(&inputs)?,
        fre: fre_score(&inputs)?,
    })
}
