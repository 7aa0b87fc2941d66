//! Tokenizer and sentence splitter.

use std::collections::HashSet;
use std::ops::Range;

use super::markup::MATH_PLACEHOLDER;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum TokenKind {
    /// Contains at least one letter.
    Word,
    /// Digits with optional internal `.`/`,`.
    Number,
    /// The inline-math placeholder.
    Math,
    Punct,
    Symbol,
}

impl TokenKind {
    /// Words, numbers and math placeholders all occupy a word slot.
    pub fn is_word(self) -> bool {
        matches!(self, TokenKind::Word | TokenKind::Number | TokenKind::Math)
    }

    /// Word slots that participate in vocabulary statistics (math excluded).
    pub fn is_lexical(self) -> bool {
        matches!(self, TokenKind::Word | TokenKind::Number)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    pub kind: TokenKind,
}

/// Splits clean text into tokens. Abbreviations in `abbreviations` (lowercase,
/// with their dots, e.g. `e.g.`) are kept whole so their periods never end a
/// sentence.
#[derive(Debug, Clone, Default)]
pub struct Tokenizer {
    abbreviations: Vec<String>,
}

impl Tokenizer {
    pub fn new<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set: HashSet<String> = HashSet::new();
        for entry in abbreviations {
            // multi-word entries ("et al.") are matched on their final piece
            if let Some(last) = entry.as_ref().split_whitespace().last() {
                if last.ends_with('.') {
                    set.insert(last.to_lowercase());
                }
            }
        }
        let mut abbreviations: Vec<String> = set.into_iter().collect();
        abbreviations.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        Tokenizer { abbreviations }
    }

    pub fn tokenize(&self, text: &str) -> Vec<RawToken> {
        let chars: Vec<char> = text.chars().collect();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_alphanumeric() {
                if let Some(len) = self.math_at(&chars, i) {
                    tokens.push(RawToken {
                        surface: MATH_PLACEHOLDER.to_string(),
                        kind: TokenKind::Math,
                    });
                    i += len;
                    continue;
                }
                if let Some(len) = self.abbreviation_at(&chars, i) {
                    tokens.push(RawToken {
                        surface: chars[i..i + len].iter().collect(),
                        kind: TokenKind::Word,
                    });
                    i += len;
                    continue;
                }
                let end = scan_word(&chars, i);
                let surface: String = chars[i..end].iter().collect();
                push_word(&mut tokens, surface);
                i = end;
                continue;
            }
            if c == '.' && chars.get(i + 1) == Some(&'.') && chars.get(i + 2) == Some(&'.') {
                tokens.push(RawToken {
                    surface: "...".into(),
                    kind: TokenKind::Punct,
                });
                i += 3;
                continue;
            }
            let kind = if is_punct(c) {
                TokenKind::Punct
            } else {
                TokenKind::Symbol
            };
            tokens.push(RawToken {
                surface: c.to_string(),
                kind,
            });
            i += 1;
        }
        tokens
    }

    fn math_at(&self, chars: &[char], i: usize) -> Option<usize> {
        let len = MATH_PLACEHOLDER.len();
        if i + len > chars.len() {
            return None;
        }
        let matches = chars[i..i + len]
            .iter()
            .zip(MATH_PLACEHOLDER.chars())
            .all(|(a, b)| *a == b);
        let boundary = chars.get(i + len).map_or(true, |c| !c.is_alphanumeric());
        (matches && boundary).then_some(len)
    }

    fn abbreviation_at(&self, chars: &[char], i: usize) -> Option<usize> {
        for abbr in &self.abbreviations {
            let n = abbr.chars().count();
            if i + n > chars.len() {
                continue;
            }
            let hit = chars[i..i + n]
                .iter()
                .zip(abbr.chars())
                .all(|(a, b)| a.to_lowercase().eq(std::iter::once(b)));
            let boundary = chars.get(i + n).map_or(true, |c| !c.is_alphanumeric());
            if hit && boundary {
                return Some(n);
            }
        }
        // personal initials: "J. Smith"
        let c = chars[i];
        if c.is_uppercase()
            && chars.get(i + 1) == Some(&'.')
            && chars.get(i + 2).is_some_and(|c| c.is_whitespace())
            && chars.get(i + 3).is_some_and(|c| c.is_uppercase())
            && chars.get(i + 4).is_some_and(|c| c.is_lowercase())
            && (i == 0 || !chars[i - 1].is_alphanumeric())
            && !SENTENCE_OPENERS.contains(&next_word(chars, i + 3).as_str())
        {
            return Some(2);
        }
        None
    }
}

// capitalized words that after "X." signal a new sentence rather than a surname
const SENTENCE_OPENERS: &[&str] = &[
    "A", "An", "As", "Based", "By", "Finally", "For", "Furthermore", "Here", "However", "In", "It", "Its", "Moreover",
    "Our", "Such", "The", "Then", "There", "These", "They", "This", "Thus", "To", "Using", "We", "When", "While",
];

fn next_word(chars: &[char], at: usize) -> String {
    chars[at..].iter().take_while(|c| c.is_alphabetic()).collect()
}

fn scan_word(chars: &[char], start: usize) -> usize {
    let mut j = start;
    while j < chars.len() {
        let c = chars[j];
        if c.is_alphanumeric() {
            j += 1;
            continue;
        }
        let next_alnum = chars.get(j + 1).is_some_and(|n| n.is_alphanumeric());
        let next_digit = chars.get(j + 1).is_some_and(|n| n.is_ascii_digit());
        let prev_digit = j > start && chars[j - 1].is_ascii_digit();
        let joins = match c {
            '-' | '_' | '\'' | '\u{2019}' => next_alnum,
            '.' => next_digit && j > start,
            ',' => prev_digit && thousands_group(chars, j + 1),
            _ => false,
        };
        if !joins {
            break;
        }
        j += 1;
    }
    j
}

fn thousands_group(chars: &[char], at: usize) -> bool {
    (0..3).all(|k| chars.get(at + k).is_some_and(|c| c.is_ascii_digit()))
        && !chars.get(at + 3).is_some_and(|c| c.is_ascii_digit())
}

fn push_word(tokens: &mut Vec<RawToken>, surface: String) {
    for piece in split_clitics(&surface) {
        let kind = if piece.chars().any(char::is_alphabetic) {
            TokenKind::Word
        } else if piece.chars().any(|c| c.is_ascii_digit()) {
            TokenKind::Number
        } else {
            TokenKind::Symbol
        };
        tokens.push(RawToken {
            surface: piece.to_string(),
            kind,
        });
    }
}

fn split_clitics(word: &str) -> Vec<&str> {
    for suffix in ["n't", "n\u{2019}t"] {
        if word.len() > suffix.len() && word.to_lowercase().ends_with(suffix) {
            let cut = word.len() - suffix.len();
            return vec![&word[..cut], &word[cut..]];
        }
    }
    for suffix in ["'s", "\u{2019}s"] {
        if word.len() > suffix.len() && word.ends_with(suffix) {
            let cut = word.len() - suffix.len();
            return vec![&word[..cut], &word[cut..]];
        }
    }
    vec![word]
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2010}'..='\u{2027}' | '\u{00ab}' | '\u{00bb}' | '\u{2039}' | '\u{203a}'
        )
}

fn is_terminal(surface: &str) -> bool {
    matches!(surface, "." | "!" | "?" | "...")
}

fn opens_sentence(token: &RawToken) -> bool {
    match token.kind {
        TokenKind::Math | TokenKind::Number => true,
        _ => token
            .surface
            .chars()
            .next()
            .is_some_and(|c| c.is_uppercase() || matches!(c, '(' | '[' | '"' | '\'' | '\u{201c}')),
    }
}

/// Sentence spans over `tokens`: a terminal `.`/`!`/`?` ends a sentence when
/// the next token could start one.
pub fn split_sentences(tokens: &[RawToken]) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut start = 0;
    for i in 0..tokens.len() {
        if !is_terminal(&tokens[i].surface) {
            continue;
        }
        let boundary = match tokens.get(i + 1) {
            None => true,
            Some(next) => opens_sentence(next),
        };
        if boundary {
            spans.push(start..i + 1);
            start = i + 1;
        }
    }
    if start < tokens.len() {
        spans.push(start..tokens.len());
    }
    spans
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok() -> Tokenizer {
        Tokenizer::new(["et al.", "e.g.", "i.e.", "cf.", "fig.", "eq."])
    }

    fn surfaces(text: &str) -> Vec<String> {
        tok().tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn hyphenated_compounds_stay_whole() {
        assert_eq!(surfaces("state-of-the-art gpt-3.5-turbo."), vec!["state-of-the-art", "gpt-3.5-turbo", "."]);
    }

    #[test]
    fn numbers_and_percentages() {
        let toks = tok().tokenize("about 3.5 and 1,000 (10%)");
        let kinds: Vec<_> = toks.iter().map(|t| (t.surface.as_str(), t.kind)).collect();
        assert_eq!(
            kinds,
            vec![
                ("about", TokenKind::Word),
                ("3.5", TokenKind::Number),
                ("and", TokenKind::Word),
                ("1,000", TokenKind::Number),
                ("(", TokenKind::Punct),
                ("10", TokenKind::Number),
                ("%", TokenKind::Punct),
                (")", TokenKind::Punct),
            ]
        );
    }

    #[test]
    fn abbreviations_are_single_tokens() {
        assert_eq!(surfaces("Smith et al. show"), vec!["Smith", "et", "al.", "show"]);
        assert_eq!(surfaces("methods, e.g. SGD"), vec!["methods", ",", "e.g.", "SGD"]);
        assert_eq!(surfaces("as in Fig. 2"), vec!["as", "in", "Fig.", "2"]);
    }

    #[test]
    fn clitics_split() {
        assert_eq!(surfaces("model's output doesn't"), vec!["model", "'s", "output", "does", "n't"]);
    }

    #[test]
    fn math_placeholder_is_its_own_token() {
        let toks = tok().tokenize("MATHEXPR-means on MATHEXPR.");
        assert_eq!(toks[0].kind, TokenKind::Math);
        assert_eq!(toks[1].surface, "-");
        assert_eq!(toks[2].surface, "means");
        assert_eq!(toks[4].kind, TokenKind::Math);
    }

    #[test]
    fn sentence_boundaries() {
        let t = tok();
        let toks = t.tokenize("We propose X. It works.");
        assert_eq!(split_sentences(&toks).len(), 2);
        let toks = t.tokenize("Smith et al. show Y.");
        assert_eq!(split_sentences(&toks).len(), 1);
        let toks = t.tokenize("Values rise to 3.5 in 2020. Then they fall");
        assert_eq!(split_sentences(&toks), vec![0..7, 7..10]);
        let toks = t.tokenize("as shown by J. Smith and others.");
        assert_eq!(split_sentences(&toks).len(), 1);
    }
}
