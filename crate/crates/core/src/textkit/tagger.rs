//! Transformation-based part-of-speech tagger.
//!
//! Tagging runs in three passes over a sentence:
//!
//! 1. lexicon lookup (most frequent tag of a known word);
//! 2. unknown words start as `NNP` (title case), `CD` (numeric) or `NN`, and
//!    `NN` guesses are refined by the morphological rules;
//! 3. contextual rules rewrite tags left to right, each seeing the rewrites
//!    already made to its left.
//!
//! The rule files use the classic Brill rule formats.

use std::collections::HashMap;

use crate::error::{Error, Result};

const PAD: &str = "STAART";

type TagId = u16;

#[derive(Debug, Clone, Default)]
struct Tagset {
    names: Vec<String>,
    ids: HashMap<String, TagId>,
}

impl Tagset {
    fn intern(&mut self, tag: &str) -> TagId {
        if let Some(&id) = self.ids.get(tag) {
            return id;
        }
        let id = self.names.len() as TagId;
        self.names.push(tag.to_string());
        self.ids.insert(tag.to_string(), id);
        id
    }

    fn name(&self, id: TagId) -> &str {
        &self.names[id as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MorphCmd {
    Char,
    HasPref,
    HasSuf,
    AddPref,
    AddSuf,
    DeletePref,
    DeleteSuf,
    GoodLeft,
    GoodRight,
}

impl MorphCmd {
    fn parse(s: &str) -> Option<(Self, bool)> {
        let lower = s.to_ascii_lowercase();
        let (conditional, name) = match lower.strip_prefix('f') {
            Some(rest) if rest != "" && Self::from_name(rest).is_some() => (true, rest.to_string()),
            _ => (false, lower),
        };
        Self::from_name(&name).map(|c| (c, conditional))
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "char" => MorphCmd::Char,
            "haspref" => MorphCmd::HasPref,
            "hassuf" => MorphCmd::HasSuf,
            "addpref" => MorphCmd::AddPref,
            "addsuf" => MorphCmd::AddSuf,
            "deletepref" => MorphCmd::DeletePref,
            "deletesuf" => MorphCmd::DeleteSuf,
            "goodleft" => MorphCmd::GoodLeft,
            "goodright" => MorphCmd::GoodRight,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
struct MorphRule {
    /// Only fires when the current tag equals this one.
    from: Option<TagId>,
    affix: String,
    cmd: MorphCmd,
    to: TagId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CtxCmd {
    PrevTag,
    NextTag,
    Prev2Tag,
    Next2Tag,
    Prev1Or2Tag,
    Next1Or2Tag,
    Prev1Or2Or3Tag,
    Next1Or2Or3Tag,
    SurroundTag,
    CurWd,
    PrevWd,
    NextWd,
    Prev1Or2Wd,
    Next1Or2Wd,
    PrevWdTag,
    NextWdTag,
    WdPrevTag,
    WdNextTag,
    WdAnd2Aft,
    WdAnd2TagBfr,
    WdAnd2TagAft,
    LBigram,
    RBigram,
    PrevBigram,
    NextBigram,
}

impl CtxCmd {
    fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "prevtag" => CtxCmd::PrevTag,
            "nexttag" => CtxCmd::NextTag,
            "prev2tag" => CtxCmd::Prev2Tag,
            "next2tag" => CtxCmd::Next2Tag,
            "prev1or2tag" => CtxCmd::Prev1Or2Tag,
            "next1or2tag" => CtxCmd::Next1Or2Tag,
            "prev1or2or3tag" => CtxCmd::Prev1Or2Or3Tag,
            "next1or2or3tag" => CtxCmd::Next1Or2Or3Tag,
            "surroundtag" => CtxCmd::SurroundTag,
            "curwd" => CtxCmd::CurWd,
            "prevwd" => CtxCmd::PrevWd,
            "nextwd" => CtxCmd::NextWd,
            "prev1or2wd" => CtxCmd::Prev1Or2Wd,
            "next1or2wd" => CtxCmd::Next1Or2Wd,
            "prevwdtag" => CtxCmd::PrevWdTag,
            "nextwdtag" => CtxCmd::NextWdTag,
            "wdprevtag" => CtxCmd::WdPrevTag,
            "wdnexttag" => CtxCmd::WdNextTag,
            "wdand2aft" => CtxCmd::WdAnd2Aft,
            "wdand2tagbfr" => CtxCmd::WdAnd2TagBfr,
            "wdand2tagaft" => CtxCmd::WdAnd2TagAft,
            "lbigram" => CtxCmd::LBigram,
            "rbigram" => CtxCmd::RBigram,
            "prevbigram" => CtxCmd::PrevBigram,
            "nextbigram" => CtxCmd::NextBigram,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
struct ContextRule {
    /// `None` matches any tag (`*`).
    from: Option<TagId>,
    to: TagId,
    cmd: CtxCmd,
    x: String,
    y: String,
}

/// Lexicon plus morphological and contextual rewrite rules.
#[derive(Debug, Clone)]
pub struct PosTagger {
    tags: Tagset,
    lexicon: HashMap<String, TagId>,
    morphology: Vec<MorphRule>,
    context: Vec<ContextRule>,
    /// Rule indices per source tag, ascending; wildcard rules are merged in.
    context_by_tag: Vec<Vec<usize>>,
    nn: TagId,
    nnp: TagId,
    cd: TagId,
}

impl PosTagger {
    /// Builds a tagger from the lexicon (`word TAG ...`), morphology and context rule files.
    pub fn from_sources(lexicon: &str, morphology: &str, context: &str) -> Result<Self> {
        let mut tags = Tagset::default();
        let nn = tags.intern("NN");
        let nnp = tags.intern("NNP");
        let cd = tags.intern("CD");

        let mut lex = HashMap::new();
        for (lineno, line) in rule_lines(lexicon) {
            let mut parts = line.split_whitespace();
            let (Some(word), Some(tag)) = (parts.next(), parts.next()) else {
                return Err(Error::resource("pos lexicon", Some(lineno), "expected `word TAG`"));
            };
            let id = tags.intern(tag);
            lex.entry(word.to_string()).or_insert(id);
        }

        let mut morph = Vec::new();
        for (lineno, line) in rule_lines(morphology) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::resource("pos morphology", Some(lineno), "unrecognized rule");
            // "ly hassuf 2 RB x" or "NN s fhassuf 1 NNS x"
            let rule = if parts.len() >= 4 && MorphCmd::parse(parts[1]).is_some_and(|(_, c)| !c) {
                let (cmd, _) = MorphCmd::parse(parts[1]).ok_or_else(bad)?;
                MorphRule {
                    from: None,
                    affix: parts[0].to_string(),
                    cmd,
                    to: tags.intern(parts[parts.len() - 2]),
                }
            } else if parts.len() >= 5 && MorphCmd::parse(parts[2]).is_some() {
                let (cmd, _) = MorphCmd::parse(parts[2]).ok_or_else(bad)?;
                MorphRule {
                    from: Some(tags.intern(parts[0])),
                    affix: parts[1].to_string(),
                    cmd,
                    to: tags.intern(parts[parts.len() - 2]),
                }
            } else {
                return Err(bad());
            };
            morph.push(rule);
        }

        let mut ctx = Vec::new();
        for (lineno, line) in rule_lines(context) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() < 4 {
                return Err(Error::resource("pos context", Some(lineno), "expected `FROM TO CMD X [Y]`"));
            }
            let cmd = CtxCmd::parse(parts[2])
                .ok_or_else(|| Error::resource("pos context", Some(lineno), format!("unknown command {}", parts[2])))?;
            ctx.push(ContextRule {
                from: (parts[0] != "*").then(|| tags.intern(parts[0])),
                to: tags.intern(parts[1]),
                cmd,
                x: parts[3].to_string(),
                y: parts.get(4).map(|s| s.to_string()).unwrap_or_default(),
            });
        }

        let mut context_by_tag = vec![Vec::new(); tags.names.len()];
        for (idx, rule) in ctx.iter().enumerate() {
            match rule.from {
                Some(t) => context_by_tag[t as usize].push(idx),
                None => context_by_tag.iter_mut().for_each(|v| v.push(idx)),
            }
        }

        Ok(PosTagger {
            tags,
            lexicon: lex,
            morphology: morph,
            context: ctx,
            context_by_tag,
            nn,
            nnp,
            cd,
        })
    }

    /// Adds or overrides a lexicon entry.
    pub fn insert_word(&mut self, word: &str, tag: &str) {
        let id = self.tags.intern(tag);
        if self.context_by_tag.len() < self.tags.names.len() {
            let wildcard: Vec<usize> = (0..self.context.len()).filter(|&i| self.context[i].from.is_none()).collect();
            self.context_by_tag.resize(self.tags.names.len(), wildcard);
        }
        self.lexicon.insert(word.to_string(), id);
    }

    pub fn lexicon_len(&self) -> usize {
        self.lexicon.len()
    }

    pub fn lexicon_tag(&self, word: &str) -> Option<&str> {
        self.lexicon.get(word).map(|&id| self.tags.name(id))
    }

    /// Tags one sentence. Unknown words that no rule resolves fall back to `NN`.
    pub fn tag<S: AsRef<str>>(&self, words: &[S]) -> Vec<String> {
        let words: Vec<&str> = words.iter().map(|w| w.as_ref()).collect();
        let mut tags: Vec<Option<TagId>> = words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                self.lexicon
                    .get(*w)
                    .copied()
                    .or_else(|| if i == 0 { self.lexicon.get(&w.to_lowercase()).copied() } else { None })
            })
            .collect();

        for i in 0..words.len() {
            if tags[i].is_some() {
                continue;
            }
            let w = words[i];
            let guess = if is_title(w) {
                self.nnp
            } else if is_numeric(w) {
                self.cd
            } else {
                let prev = (i > 0).then(|| words[i - 1]);
                let next = words.get(i + 1).copied();
                self.apply_morphology(w, self.nn, prev, next)
            };
            tags[i] = Some(guess);
        }

        let mut tags: Vec<TagId> = tags.into_iter().map(|t| t.unwrap_or(self.nn)).collect();
        self.apply_context(&words, &mut tags);
        tags.into_iter().map(|t| self.tags.name(t).to_string()).collect()
    }

    fn apply_morphology(&self, word: &str, mut tag: TagId, prev: Option<&str>, next: Option<&str>) -> TagId {
        for rule in &self.morphology {
            if rule.from.is_some_and(|f| f != tag) {
                continue;
            }
            let x = rule.affix.as_str();
            let hit = match rule.cmd {
                MorphCmd::Char => word.contains(x),
                MorphCmd::HasPref => word.starts_with(x),
                MorphCmd::HasSuf => word.ends_with(x),
                MorphCmd::AddPref => self.lexicon.contains_key(&format!("{x}{word}")),
                MorphCmd::AddSuf => self.lexicon.contains_key(&format!("{word}{x}")),
                MorphCmd::DeletePref => word
                    .strip_prefix(x)
                    .is_some_and(|rest| self.lexicon.contains_key(rest)),
                MorphCmd::DeleteSuf => word
                    .strip_suffix(x)
                    .is_some_and(|rest| self.lexicon.contains_key(rest)),
                MorphCmd::GoodLeft => next == Some(x),
                MorphCmd::GoodRight => prev == Some(x),
            };
            if hit {
                tag = rule.to;
            }
        }
        tag
    }

    fn apply_context(&self, words: &[&str], tags: &mut [TagId]) {
        const PAD_N: usize = 3;
        let n = words.len();
        let word_at = |k: isize| -> &str {
            if k < 0 || k as usize >= n {
                PAD
            } else {
                words[k as usize]
            }
        };
        for i in 0..n {
            // rules are selected by the tag the word had before this pass,
            // while neighbours are read with their updated tags
            let original = tags[i] as usize;
            for &rule_idx in &self.context_by_tag[original] {
                let rule = &self.context[rule_idx];
                let ii = i as isize;
                let tag_at = |k: isize| -> &str {
                    if k < 0 || k as usize >= n {
                        PAD
                    } else {
                        self.tags.name(tags[k as usize])
                    }
                };
                let (x, y) = (rule.x.as_str(), rule.y.as_str());
                let hit = match rule.cmd {
                    CtxCmd::PrevTag => x == tag_at(ii - 1),
                    CtxCmd::NextTag => x == tag_at(ii + 1),
                    CtxCmd::Prev2Tag => x == tag_at(ii - 2),
                    CtxCmd::Next2Tag => x == tag_at(ii + 2),
                    CtxCmd::Prev1Or2Tag => x == tag_at(ii - 1) || x == tag_at(ii - 2),
                    CtxCmd::Next1Or2Tag => x == tag_at(ii + 1) || x == tag_at(ii + 2),
                    CtxCmd::Prev1Or2Or3Tag => (1..=PAD_N as isize).any(|d| x == tag_at(ii - d)),
                    CtxCmd::Next1Or2Or3Tag => (1..=PAD_N as isize).any(|d| x == tag_at(ii + d)),
                    CtxCmd::SurroundTag => x == tag_at(ii - 1) && y == tag_at(ii + 1),
                    CtxCmd::CurWd => x == word_at(ii),
                    CtxCmd::PrevWd => x == word_at(ii - 1),
                    CtxCmd::NextWd => x == word_at(ii + 1),
                    CtxCmd::Prev1Or2Wd => x == word_at(ii - 1) || x == word_at(ii - 2),
                    CtxCmd::Next1Or2Wd => x == word_at(ii + 1) || x == word_at(ii + 2),
                    CtxCmd::PrevWdTag => x == word_at(ii - 1) && y == tag_at(ii - 1),
                    CtxCmd::NextWdTag => x == word_at(ii + 1) && y == tag_at(ii + 1),
                    CtxCmd::WdPrevTag => x == tag_at(ii - 1) && y == word_at(ii),
                    CtxCmd::WdNextTag => x == word_at(ii) && y == tag_at(ii + 1),
                    CtxCmd::WdAnd2Aft => x == word_at(ii) && y == word_at(ii + 2),
                    CtxCmd::WdAnd2TagBfr => x == tag_at(ii - 2) && y == word_at(ii),
                    CtxCmd::WdAnd2TagAft => x == word_at(ii) && y == tag_at(ii + 2),
                    CtxCmd::LBigram => x == word_at(ii - 1) && y == word_at(ii),
                    CtxCmd::RBigram => x == word_at(ii) && y == word_at(ii + 1),
                    CtxCmd::PrevBigram => x == tag_at(ii - 2) && y == tag_at(ii - 1),
                    CtxCmd::NextBigram => x == tag_at(ii + 1) && y == tag_at(ii + 2),
                };
                if hit {
                    tags[i] = rule.to;
                }
            }
        }
    }
}

fn rule_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with(";;;"))
}

fn is_title(w: &str) -> bool {
    let mut chars = w.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    first.is_uppercase() && chars.all(|c| !c.is_alphabetic() || c.is_lowercase())
}

fn is_numeric(w: &str) -> bool {
    w.chars().any(|c| c.is_ascii_digit())
        && w.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | '-' | '/' | ':' | '%'))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEX: &str = "the DT\ncat NN\nsat VBD\non IN\nmat NN\nto TO\nrun VB\nVB VB\n";
    const MORPH: &str = "NN s fhassuf 1 NNS x\nly hassuf 2 RB x\n";
    const CTX: &str = "NN VB PREVTAG TO\n";

    fn tagger() -> PosTagger {
        PosTagger::from_sources(LEX, MORPH, CTX).unwrap()
    }

    #[test]
    fn lexicon_lookup() {
        assert_eq!(tagger().tag(&["the", "cat", "sat"]), vec!["DT", "NN", "VBD"]);
    }

    #[test]
    fn morphology_refines_unknown_words() {
        let t = tagger();
        assert_eq!(t.tag(&["dogs"]), vec!["NNS"]);
        assert_eq!(t.tag(&["quickly"]), vec!["RB"]);
        assert_eq!(t.tag(&["blorp"]), vec!["NN"]);
        assert_eq!(t.tag(&["the", "Zorg"]), vec!["DT", "NNP"]);
        assert_eq!(t.tag(&["42"]), vec!["CD"]);
    }

    #[test]
    fn context_rules_see_left_rewrites() {
        assert_eq!(tagger().tag(&["to", "blorp"]), vec!["TO", "VB"]);
    }

    #[test]
    fn sentence_initial_capital_uses_lowercase_entry() {
        assert_eq!(tagger().tag(&["The", "cat"]), vec!["DT", "NN"]);
    }

    #[test]
    fn malformed_rules_are_reported_with_line() {
        let err = PosTagger::from_sources(LEX, MORPH, "NN VB\n").unwrap_err();
        assert!(matches!(err, Error::InvalidResource { line: Some(1), .. }));
    }
}
