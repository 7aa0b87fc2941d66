//! Rule-based English syllable counter with an exception dictionary.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct SyllableCounter {
    exceptions: HashMap<String, u32>,
}

impl SyllableCounter {
    pub fn new(exceptions: HashMap<String, u32>) -> Self {
        SyllableCounter { exceptions }
    }

    /// Parses a `word,syllables` CSV (header optional).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut exceptions = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || (i == 0 && line.eq_ignore_ascii_case("word,syllables")) {
                continue;
            }
            let (word, count) = line
                .split_once(',')
                .ok_or_else(|| Error::resource("syllable exceptions", Some(i + 1), "expected `word,syllables`"))?;
            let count: u32 = count
                .trim()
                .parse()
                .map_err(|_| Error::resource("syllable exceptions", Some(i + 1), "syllable count is not an integer"))?;
            exceptions.insert(word.trim().to_lowercase(), count);
        }
        Ok(SyllableCounter { exceptions })
    }

    pub fn len(&self) -> usize {
        self.exceptions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exceptions.is_empty()
    }

    /// Syllables in `word`. Hyphenated tokens are the sum of their parts; a
    /// part with no letters contributes 0 and a part with letters at least 1.
    pub fn count(&self, word: &str) -> u32 {
        word.split('-').map(|part| self.count_part(part)).sum()
    }

    fn count_part(&self, part: &str) -> u32 {
        let lower = part.to_lowercase();
        if let Some(&n) = self.exceptions.get(&lower) {
            return n;
        }
        let letters: Vec<char> = lower.chars().filter(|c| c.is_alphabetic()).collect();
        if letters.is_empty() {
            return 0;
        }
        heuristic(&letters).max(1)
    }
}

fn is_vowel(letters: &[char], i: usize) -> bool {
    match letters[i] {
        'a' | 'e' | 'i' | 'o' | 'u' | 'à'..='æ' | 'è'..='ï' | 'ò'..='ö' | 'ù'..='ü' => true,
        // y is a vowel except word-initially or right after another vowel ("play")
        'y' => i > 0 && !matches!(letters[i - 1], 'a' | 'e' | 'i' | 'o' | 'u'),
        _ => false,
    }
}

/// Vowel pairs normally pronounced as two syllables.
const HIATUS: [&str; 7] = ["ia", "io", "eo", "ua", "uo", "ii", "iu"];

fn heuristic(letters: &[char]) -> u32 {
    let word: String = letters.iter().collect();
    let n = letters.len();
    let mut count = 0u32;
    let mut i = 0;
    while i < n {
        if is_vowel(letters, i) {
            count += 1;
            let start = i;
            while i + 1 < n && is_vowel(letters, i + 1) {
                i += 1;
            }
            let group: String = letters[start..=i].iter().collect();
            count += hiatus_extra(&word, start, &group);
        }
        i += 1;
    }

    let ends = |s: &str| word.ends_with(s);
    let before = |k: usize| -> Option<char> { n.checked_sub(k + 1).map(|j| letters[j]) };
    let consonant = |c: Option<char>| c.is_some_and(|c| !matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y'));

    if count > 1 {
        let sounded_ue = ends("ue") && !matches!(before(2), Some('q' | 'g'));
        if ends("e") && !ends("ee") && !ends("ie") && !ends("ye") && !ends("oe") && !sounded_ue {
            // silent final e, except consonant + "le" ("table") which keeps its syllable
            let le_syllable = ends("le") && consonant(before(2)) && before(2) != Some('l');
            if !le_syllable {
                count -= 1;
            }
        } else if ends("ed") && consonant(before(2)) && !matches!(before(2), Some('t' | 'd')) {
            count -= 1;
        } else if ends("es")
            && consonant(before(2))
            && !matches!(before(2), Some('s' | 'x' | 'z' | 'c' | 'g'))
            && !(ends("hes") && matches!(before(3), Some('c' | 's')))
            && !(ends("les") && consonant(before(3)))
        {
            count -= 1;
        }
    }
    count
}

fn hiatus_extra(word: &str, start: usize, group: &str) -> u32 {
    if group.chars().count() < 2 {
        return 0;
    }
    let pair: String = group.chars().take(2).collect();
    if !HIATUS.contains(&pair.as_str()) {
        return 0;
    }
    let tail: String = word.chars().skip(start).collect();
    // -tion/-sion/-cial/-tial/-cious and friends glide into one syllable
    let prev: Option<char> = start.checked_sub(1).and_then(|p| word.chars().nth(p));
    match pair.as_str() {
        "io" | "ia" | "iu" if matches!(prev, Some('t' | 'c' | 's' | 'x' | 'g')) && !tail.starts_with("ior") => 0,
        "ua" if matches!(prev, Some('q' | 'g')) => 0,
        "uo" if matches!(prev, Some('q')) => 0,
        _ => 1,
    }
}
