//! Text-processing kernel shared by every metric module: markup stripping,
//! tokenization, sentence splitting, POS tagging, syllables and word classes.

mod markup;
mod syllables;
mod tagger;
mod tokenize;

use std::collections::HashSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

pub use markup::{strip_markup, MATH_PLACEHOLDER};
pub use syllables::SyllableCounter;
pub use tagger::PosTagger;
pub use tokenize::{split_sentences, RawToken, TokenKind, Tokenizer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WordClass {
    Content,
    Function,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub normalized: String,
    pub pos: String,
    pub syllables: u32,
    pub char_length: usize,
    pub word_class: WordClass,
    pub kind: TokenKind,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind.is_word()
    }

    pub fn is_lexical(&self) -> bool {
        self.kind.is_lexical()
    }

    pub fn is_noun_or_pronoun(&self) -> bool {
        self.kind == TokenKind::Word && (self.pos.starts_with("NN") || self.pos.starts_with("PRP"))
    }
}

/// Tokens of a text with their sentence spans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzedText {
    pub tokens: Vec<Token>,
    pub sentences: Vec<Range<usize>>,
}

impl AnalyzedText {
    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn word_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_word()).count()
    }

    pub fn sentence(&self, i: usize) -> &[Token] {
        &self.tokens[self.sentences[i].clone()]
    }

    pub fn sentence_iter(&self) -> impl Iterator<Item = &[Token]> + '_ {
        self.sentences.iter().map(|r| &self.tokens[r.clone()])
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> + '_ {
        self.tokens.iter().filter(|t| t.is_word())
    }

    /// Word tokens that count toward vocabulary statistics (no math placeholders).
    pub fn lexical_words(&self) -> impl Iterator<Item = &Token> + '_ {
        self.tokens.iter().filter(|t| t.is_lexical())
    }
}

/// Tokenizer switches kept configurable for sensitivity runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TextOptions {
    /// Split `state-of-the-art` into its parts instead of one token.
    pub split_hyphens: bool,
    /// Count math placeholders as word slots.
    pub math_as_word: bool,
}

impl Default for TextOptions {
    fn default() -> Self {
        TextOptions {
            split_hyphens: false,
            math_as_word: true,
        }
    }
}

const AUXILIARIES: [&str; 17] = [
    "be", "am", "is", "are", "was", "were", "been", "being", "have", "has", "had", "having", "do", "does", "did",
    "doing", "done",
];

/// Tags under which a listed function word keeps its function reading.
fn function_pos(tag: &str, normalized: &str) -> bool {
    if tag.starts_with("VB") {
        return AUXILIARIES.contains(&normalized);
    }
    !(tag.starts_with("NN") || matches!(tag, "FW" | "UH" | "SYM"))
}

fn content_pos(tag: &str) -> bool {
    ["NN", "VB", "JJ", "RB"].iter().any(|p| tag.starts_with(p))
}

/// Loaded lexicons plus the processing pipeline.
#[derive(Debug, Clone)]
pub struct TextKit {
    tokenizer: Tokenizer,
    tagger: PosTagger,
    syllables: SyllableCounter,
    function_words: HashSet<String>,
    options: TextOptions,
}

impl TextKit {
    pub fn new(
        abbreviations: &[String],
        mut tagger: PosTagger,
        syllables: SyllableCounter,
        function_words: HashSet<String>,
    ) -> Self {
        tagger.insert_word(MATH_PLACEHOLDER, "NN");
        TextKit {
            tokenizer: Tokenizer::new(abbreviations),
            tagger,
            syllables,
            function_words,
            options: TextOptions::default(),
        }
    }

    pub fn with_options(mut self, options: TextOptions) -> Self {
        self.options = options;
        self
    }

    pub fn options(&self) -> TextOptions {
        self.options
    }

    pub fn tagger(&self) -> &PosTagger {
        &self.tagger
    }

    pub fn function_words(&self) -> &HashSet<String> {
        &self.function_words
    }

    pub fn count_syllables(&self, word: &str) -> u32 {
        self.syllables.count(word)
    }

    /// Tags a tokenized sentence.
    pub fn tag_pos<S: AsRef<str>>(&self, words: &[S]) -> Vec<String> {
        self.tagger.tag(words)
    }

    pub fn tokenize(&self, text: &str) -> Vec<RawToken> {
        let raw = self.tokenizer.tokenize(text);
        if !self.options.split_hyphens {
            return raw;
        }
        let mut out = Vec::with_capacity(raw.len());
        for tok in raw {
            if tok.kind != TokenKind::Word || !tok.surface.contains('-') {
                out.push(tok);
                continue;
            }
            for (i, part) in tok.surface.split('-').enumerate() {
                if i > 0 {
                    out.push(RawToken {
                        surface: "-".into(),
                        kind: TokenKind::Punct,
                    });
                }
                if part.is_empty() {
                    continue;
                }
                let kind = if part.chars().any(char::is_alphabetic) {
                    TokenKind::Word
                } else {
                    TokenKind::Number
                };
                out.push(RawToken {
                    surface: part.to_string(),
                    kind,
                });
            }
        }
        out
    }

    /// Full analysis of markup-free text.
    pub fn analyze(&self, clean: &str) -> Result<AnalyzedText> {
        let mut raw = self.tokenize(clean);
        if !self.options.math_as_word {
            raw.retain(|t| t.kind != TokenKind::Math);
        }
        if raw.is_empty() {
            return Err(Error::EmptyText);
        }
        let sentences = split_sentences(&raw);
        let mut tokens = Vec::with_capacity(raw.len());
        for span in &sentences {
            let slice = &raw[span.clone()];
            let surfaces: Vec<&str> = slice.iter().map(|t| t.surface.as_str()).collect();
            let tags = self.tagger.tag(&surfaces);
            for (tok, pos) in slice.iter().zip(tags) {
                tokens.push(self.build_token(tok, pos));
            }
        }
        Ok(AnalyzedText { tokens, sentences })
    }

    /// Strips markup and analyzes in one step.
    pub fn analyze_raw(&self, raw: &str) -> Result<AnalyzedText> {
        self.analyze(&strip_markup(raw))
    }

    fn build_token(&self, raw: &RawToken, pos: String) -> Token {
        let normalized = raw.surface.to_lowercase();
        let syllables = match raw.kind {
            TokenKind::Word => self.syllables.count(&raw.surface),
            _ => 0,
        };
        let word_class = if raw.kind != TokenKind::Word {
            WordClass::Other
        } else if self.function_words.contains(&normalized) && function_pos(&pos, &normalized) {
            WordClass::Function
        } else if content_pos(&pos) {
            WordClass::Content
        } else {
            WordClass::Other
        };
        Token {
            char_length: raw.surface.chars().count(),
            surface: raw.surface.clone(),
            normalized,
            pos,
            syllables,
            word_class,
            kind: raw.kind,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::Resources;
    use proptest::prelude::*;

    fn kit() -> &'static TextKit {
        &Resources::bundled().textkit
    }

    #[test]
    fn counts_words_and_sentences() {
        let a = kit().analyze("We propose X. It works.").unwrap();
        assert_eq!(a.sentence_count(), 2);
        assert_eq!(a.word_count(), 5);
        let a = kit().analyze("We propose a method. It works well.").unwrap();
        assert_eq!(a.word_count(), 7);
    }

    #[test]
    fn abbreviation_does_not_split() {
        let a = kit().analyze("Smith et al. show Y.").unwrap();
        assert_eq!(a.sentence_count(), 1);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(kit().analyze("   "), Err(Error::EmptyText)));
    }

    #[test]
    fn table_categories_are_producible() {
        let k = kit();
        assert_eq!(k.tag_pos(&["and"]), vec!["CC"]);
        assert_eq!(k.tag_pos(&["most", "of", "them"])[1], "IN");
        assert_eq!(k.tag_pos(&["it", "is"]), vec!["PRP", "VBZ"]);
        assert_eq!(k.tag_pos(&["the", "largest"]), vec!["DT", "JJS"]);
        assert_eq!(k.tag_pos(&["the", "model"]), vec!["DT", "NN"]);
        assert_eq!(k.tag_pos(&["it", "works", "significantly"])[2], "RB");
        assert_eq!(k.tag_pos(&["it", "was", "found"])[2], "VBN");
    }

    #[test]
    fn math_placeholder_is_other_class_word() {
        let a = kit().analyze("Let MATHEXPR be a prime.").unwrap();
        let m = a.tokens.iter().find(|t| t.kind == TokenKind::Math).unwrap();
        assert_eq!(m.word_class, WordClass::Other);
        assert_eq!(m.syllables, 0);
        assert_eq!(a.word_count(), 5);
    }

    #[test]
    fn word_classes() {
        let a = kit().analyze("The model predicts the outcome.").unwrap();
        let classes: Vec<_> = a.words().map(|t| (t.normalized.as_str(), t.word_class)).collect();
        assert_eq!(
            classes,
            vec![
                ("the", WordClass::Function),
                ("model", WordClass::Content),
                ("predicts", WordClass::Content),
                ("the", WordClass::Function),
                ("outcome", WordClass::Content),
            ]
        );
    }

    #[test]
    fn hyphen_switch_splits_compounds() {
        let k = kit().clone().with_options(TextOptions {
            split_hyphens: true,
            ..TextOptions::default()
        });
        let a = k.analyze("A state-of-the-art model.").unwrap();
        assert_eq!(a.word_count(), 6);
        assert_eq!(kit().analyze("A state-of-the-art model.").unwrap().word_count(), 3);
    }

    fn sentence() -> impl Strategy<Value = String> {
        let words = prop::sample::select(vec![
            "model", "data", "we", "show", "that", "the", "method", "converges", "quickly", "results", "improve",
        ]);
        prop::collection::vec(words, 1..10).prop_map(|ws| {
            let mut s = ws.join(" ");
            s[..1].make_ascii_uppercase();
            s.push('.');
            s
        })
    }

    proptest! {
        #[test]
        fn analysis_is_deterministic(text in sentence()) {
            prop_assert_eq!(kit().analyze(&text).unwrap(), kit().analyze(&text).unwrap());
        }

        #[test]
        fn sentence_counts_add_under_concatenation(a in prop::collection::vec(sentence(), 1..4), b in prop::collection::vec(sentence(), 1..4)) {
            let (ta, tb) = (a.join(" "), b.join(" "));
            let joined = format!("{ta} {tb}");
            let na = kit().analyze(&ta).unwrap().sentence_count();
            let nb = kit().analyze(&tb).unwrap().sentence_count();
            prop_assert_eq!(kit().analyze(&joined).unwrap().sentence_count(), na + nb);
        }

        #[test]
        fn span_lengths_cover_tokens(a in prop::collection::vec(sentence(), 1..5)) {
            let at = kit().analyze(&a.join(" ")).unwrap();
            let total: usize = at.sentences.iter().map(|r| r.len()).sum();
            prop_assert_eq!(total, at.tokens.len());
            prop_assert!(at.word_count() <= at.tokens.len());
        }

        #[test]
        fn hyphen_syllables_are_additive(a in "[a-z]{1,8}", b in "[a-z]{1,8}") {
            let k = kit();
            prop_assert_eq!(k.count_syllables(&format!("{a}-{b}")), k.count_syllables(&a) + k.count_syllables(&b));
        }
    }
}
