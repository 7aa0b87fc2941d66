//! Clause and T-unit heuristics and the sentence-level complexity indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textkit::{AnalyzedText, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntaxOptions {
    /// Let sentences without a finite verb contribute zero T-units.
    pub allow_zero_tunits: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntacticProfile {
    pub sentence_count: usize,
    pub clause_count: usize,
    pub tunit_count: usize,
    pub mls: f64,
    pub mlc: f64,
    /// Undefined when no sentence has a T-unit (zero-T-unit mode only).
    pub mltu: Option<f64>,
    pub tus: f64,
}

fn is_finite(tok: &Token) -> bool {
    matches!(tok.pos.as_str(), "VBZ" | "VBP" | "VBD" | "MD")
}

// tokens that may continue a verb group: "has not yet been shown"
fn continues_group(tok: &Token) -> bool {
    tok.pos.starts_with("VB") || tok.pos.starts_with("RB") || tok.pos == "MD"
}

/// Start indices of the finite verb groups in `sentence`.
fn finite_groups(sentence: &[Token]) -> Vec<usize> {
    let mut starts = Vec::new();
    let mut i = 0;
    while i < sentence.len() {
        if is_finite(&sentence[i]) {
            starts.push(i);
            i += 1;
            while i < sentence.len() && continues_group(&sentence[i]) {
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    starts
}

/// Finite verb groups in a tagged sentence, at least 1.
pub fn count_clauses(sentence: &[Token]) -> usize {
    finite_groups(sentence).len().max(1)
}

fn is_subject_like(tok: &Token) -> bool {
    tok.pos == "PRP" || tok.pos.starts_with("NN") || matches!(tok.pos.as_str(), "DT" | "EX" | "CD")
}

fn blocks_subject(tok: &Token) -> bool {
    matches!(tok.pos.as_str(), "WDT" | "WP" | "WRB" | "IN" | ",") || tok.normalized == "that" || tok.kind == TokenKind::Punct
}

/// Whether `tokens` opens with a subject followed by its finite verb, with no
/// relative marker, preposition or punctuation in between.
fn opens_independent_clause(tokens: &[Token]) -> bool {
    let mut subject = false;
    for tok in tokens {
        if is_finite(tok) {
            return subject;
        }
        if blocks_subject(tok) {
            return false;
        }
        if is_subject_like(tok) {
            subject = true;
        }
    }
    false
}

fn tunits_raw(sentence: &[Token]) -> usize {
    let has_finite = |s: &[Token]| s.iter().any(is_finite);
    if !has_finite(sentence) {
        return 0;
    }
    let mut units = 1;
    let mut left_start = 0;
    for (i, tok) in sentence.iter().enumerate() {
        let joiner = tok.pos == "CC" || tok.surface == ";";
        if !joiner || i + 1 >= sentence.len() {
            continue;
        }
        if has_finite(&sentence[left_start..i]) && opens_independent_clause(&sentence[i + 1..]) {
            units += 1;
            left_start = i + 1;
        }
    }
    units
}

/// 1 + coordinating conjunctions or semicolons joining two independent
/// clauses. Verbless sentences give 1, or 0 with `allow_zero_tunits`.
pub fn count_tunits(sentence: &[Token], options: &SyntaxOptions) -> usize {
    let n = tunits_raw(sentence);
    if options.allow_zero_tunits {
        n
    } else {
        n.max(1)
    }
}

pub fn syntactic_profile(analyzed: &AnalyzedText, options: &SyntaxOptions) -> Result<SyntacticProfile> {
    let sentence_count = analyzed.sentence_count();
    if sentence_count == 0 {
        return Err(Error::EmptyText);
    }
    let (mut clauses, mut tunits) = (0, 0);
    for s in analyzed.sentence_iter() {
        clauses += count_clauses(s);
        tunits += count_tunits(s, options);
    }
    let words = analyzed.word_count() as f64;
    Ok(SyntacticProfile {
        sentence_count,
        clause_count: clauses,
        tunit_count: tunits,
        mls: words / sentence_count as f64,
        mlc: words / clauses as f64,
        mltu: (tunits > 0).then(|| words / tunits as f64),
        tus: tunits as f64 / sentence_count as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::Resources;
    use proptest::prelude::*;

    fn analyze(text: &str) -> AnalyzedText {
        Resources::bundled().textkit.analyze(text).unwrap()
    }

    fn clauses(text: &str) -> usize {
        count_clauses(analyze(text).sentence(0))
    }

    fn tunits(text: &str) -> usize {
        count_tunits(analyze(text).sentence(0), &SyntaxOptions::default())
    }

    #[test]
    fn clause_examples() {
        assert_eq!(clauses("The method works."), 1);
        assert_eq!(clauses("We show that it converges because the step is small."), 3);
        assert_eq!(clauses("A novel approach."), 1);
        assert_eq!(clauses("This result has been shown before."), 1);
    }

    #[test]
    fn tunit_examples() {
        assert_eq!(tunits("We train the model and we evaluate it."), 2);
        assert_eq!(tunits("We train and evaluate the model."), 1);
        assert_eq!(tunits("The model is simple."), 1);
        assert_eq!(tunits("The bound is tight; the rate is optimal."), 2);
        assert_eq!(tunits("We use graphs and trees, which are sparse."), 1);
    }

    #[test]
    fn zero_tunit_switch() {
        let a = analyze("A novel approach.");
        assert_eq!(count_tunits(a.sentence(0), &SyntaxOptions { allow_zero_tunits: true }), 0);
        assert_eq!(count_tunits(a.sentence(0), &SyntaxOptions::default()), 1);
        let p = syntactic_profile(&a, &SyntaxOptions { allow_zero_tunits: true }).unwrap();
        assert_eq!(p.mltu, None);
        assert_eq!(p.tus, 0.0);
    }

    #[test]
    fn profile_arithmetic() {
        let a = analyze("The simple model predicts every outcome of the test well.");
        assert_eq!(a.word_count(), 10);
        let p = syntactic_profile(&a, &SyntaxOptions::default()).unwrap();
        assert_eq!((p.mls, p.mlc, p.mltu, p.tus), (10.0, 10.0, Some(10.0), 1.0));
        let b = analyze("The simple model predicts every outcome of the test well. The simple model predicts every outcome of the test well for the tiny data today.");
        let p = syntactic_profile(&b, &SyntaxOptions::default()).unwrap();
        assert_eq!(b.word_count(), 25);
        assert_eq!((p.mls, p.tus), (12.5, 1.0));
    }

    proptest! {
        #[test]
        fn counts_add_under_concatenation(i in 0usize..6, j in 0usize..6) {
            let pool = [
                "We train the model and we evaluate it.",
                "The bound is tight; the rate is optimal.",
                "A novel approach.",
                "We show that it converges because the step is small.",
                "Results improve when data grows.",
                "Experiments on three benchmarks confirm the gains.",
            ];
            let o = SyntaxOptions::default();
            let a = syntactic_profile(&analyze(pool[i]), &o).unwrap();
            let b = syntactic_profile(&analyze(pool[j]), &o).unwrap();
            let ab = syntactic_profile(&analyze(&format!("{} {}", pool[i], pool[j])), &o).unwrap();
            prop_assert_eq!(ab.clause_count, a.clause_count + b.clause_count);
            prop_assert_eq!(ab.tunit_count, a.tunit_count + b.tunit_count);
            prop_assert_eq!(ab.sentence_count, 2);
        }

        #[test]
        fn indices_ignore_vocabulary(renames in prop::collection::vec(0usize..4, 3)) {
            // same tag sequence, different nouns
            let nouns = ["model", "network", "method", "system"];
            let text = format!("The {} improves the {} and the {} remains stable.", nouns[renames[0]], nouns[renames[1]], nouns[renames[2]]);
            let base = syntactic_profile(&analyze("The model improves the method and the system remains stable."), &SyntaxOptions::default()).unwrap();
            let p = syntactic_profile(&analyze(&text), &SyntaxOptions::default()).unwrap();
            prop_assert_eq!(p, base);
        }
    }
}
