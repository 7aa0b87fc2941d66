//! Lexicons, norms and word lists, bundled or loaded from disk.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cohesion::{ConnectiveLexicon, VectorSpace};
use crate::corpus::{CountryGroupTable, DisciplineTable};
use crate::error::{Error, Result};
use crate::lexical::Norms;
use crate::markers::LlmWordList;
use crate::readability::EasyWords;
use crate::sentiment::SentimentLexicon;
use crate::textkit::{PosTagger, SyllableCounter, TextKit, TextOptions};

/// Environment variable naming a directory that replaces the bundled files.
pub const RESOURCE_DIR_ENV: &str = "LINGSHIFT_RESOURCES";

macro_rules! bundled_files {
    ($($field:ident => $file:literal),* $(,)?) => {
        /// Optional per-file overrides. Unset fields fall back to `dir`, then
        /// to the bundled copy.
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(default, deny_unknown_fields)]
        pub struct ResourcePaths {
            pub dir: Option<PathBuf>,
            $(pub $field: Option<PathBuf>,)*
            /// Word vectors for semantic overlap; none bundled.
            pub vectors: Option<PathBuf>,
        }

        impl ResourcePaths {
            fn lookup(&self, field: &str) -> (Option<&PathBuf>, &'static str, &'static str) {
                match field {
                    $(stringify!($field) => (self.$field.as_ref(), $file, include_str!(concat!("../resources/", $file))),)*
                    _ => unreachable!("unknown resource {field}"),
                }
            }

            fn field_names() -> &'static [&'static str] {
                &[$(stringify!($field)),*]
            }
        }
    };
}

bundled_files! {
    pos_lexicon => "pos_lexicon.txt",
    pos_context => "pos_context.txt",
    pos_morphology => "pos_morphology.txt",
    abbreviations => "abbreviations.txt",
    function_words => "function_words.txt",
    syllable_exceptions => "syllable_exceptions.csv",
    easy_words => "easy_words.txt",
    norms => "norms.tsv",
    connectives => "connectives.csv",
    sentiment => "sentiment.csv",
    negations => "negations.csv",
    intensifiers => "intensifiers.csv",
    llm_adjectives => "llm_adjectives.txt",
    llm_adverbs => "llm_adverbs.txt",
    country_groups => "country_groups.csv",
    disciplines => "disciplines.csv",
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceInfo {
    pub name: String,
    /// `bundled` or the file path read.
    pub origin: String,
    pub entries: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub resources: Vec<ResourceInfo>,
    /// Words listed as both LLM adjective and adverb.
    pub llm_cross_listed: Vec<String>,
    pub llm_duplicate_adjectives: Vec<String>,
    pub llm_duplicate_adverbs: Vec<String>,
    /// SHA-256 over every loaded file, in load order.
    pub digest: String,
}

#[derive(Debug, Clone)]
pub struct Resources {
    pub textkit: TextKit,
    pub easy_words: EasyWords,
    pub norms: Norms,
    pub connectives: ConnectiveLexicon,
    pub sentiment: SentimentLexicon,
    pub llm_words: LlmWordList,
    pub country_groups: CountryGroupTable,
    pub disciplines: DisciplineTable,
    pub vectors: Option<VectorSpace>,
    pub report: ResourceReport,
}

struct Source {
    text: String,
    origin: String,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

impl Resources {
    /// The resources compiled into the library.
    pub fn bundled() -> &'static Resources {
        static BUNDLED: OnceLock<Resources> = OnceLock::new();
        BUNDLED.get_or_init(|| Resources::load(&ResourcePaths::default(), None).expect("bundled resources are valid"))
    }

    /// Loads with precedence: explicit file > `paths.dir` > `env_dir` > bundled.
    pub fn load(paths: &ResourcePaths, env_dir: Option<&Path>) -> Result<Resources> {
        Self::load_with_options(paths, env_dir, TextOptions::default())
    }

    pub fn load_with_options(paths: &ResourcePaths, env_dir: Option<&Path>, options: TextOptions) -> Result<Resources> {
        let dir = paths.dir.as_deref().or(env_dir);
        let get = |field: &str| -> Result<Source> {
            let (explicit, file, bundled) = paths.lookup(field);
            let path = match (explicit, dir) {
                (Some(p), _) => Some(p.clone()),
                (None, Some(d)) if d.join(file).is_file() => Some(d.join(file)),
                _ => None,
            };
            match path {
                Some(p) => Ok(Source {
                    text: read(&p)?,
                    origin: p.display().to_string(),
                }),
                None => Ok(Source {
                    text: bundled.to_string(),
                    origin: "bundled".to_string(),
                }),
            }
        };
        let mut report = ResourceReport::default();
        let mut hasher = Sha256::new();
        let mut note = |name: &str, src: &Source, entries: usize, duplicates: usize| {
            hasher.update(name.as_bytes());
            hasher.update([0]);
            hasher.update(src.text.as_bytes());
            hasher.update([0]);
            report.resources.push(ResourceInfo {
                name: name.to_string(),
                origin: src.origin.clone(),
                entries,
                duplicates,
            });
        };

        let (lex, morph, ctx) = (get("pos_lexicon")?, get("pos_morphology")?, get("pos_context")?);
        let tagger = PosTagger::from_sources(&lex.text, &morph.text, &ctx.text)?;
        note("pos_lexicon", &lex, tagger.lexicon_len(), 0);
        note("pos_morphology", &morph, lines(&morph.text).count(), 0);
        note("pos_context", &ctx, lines(&ctx.text).count(), 0);

        let abbr = get("abbreviations")?;
        let abbreviations: Vec<String> = lines(&abbr.text).map(str::to_string).collect();
        note("abbreviations", &abbr, abbreviations.len(), 0);

        let fw = get("function_words")?;
        let listed: Vec<String> = lines(&fw.text).map(str::to_lowercase).collect();
        let function_words: HashSet<String> = listed.iter().cloned().collect();
        if function_words.is_empty() {
            return Err(Error::resource("function_words", None, "list is empty"));
        }
        note("function_words", &fw, function_words.len(), listed.len() - function_words.len());

        let syl = get("syllable_exceptions")?;
        let syllables = SyllableCounter::from_csv(&syl.text)?;
        note("syllable_exceptions", &syl, syllables.len(), 0);

        let textkit = TextKit::new(&abbreviations, tagger, syllables, function_words).with_options(options);

        let easy = get("easy_words")?;
        let easy_words = EasyWords::from_text(&easy.text)?;
        note("easy_words", &easy, easy_words.len(), 0);

        let nsrc = get("norms")?;
        let norms = Norms::from_tsv(&nsrc.text)?;
        note("norms", &nsrc, norms.len(), 0);

        let csrc = get("connectives")?;
        let connectives = ConnectiveLexicon::from_csv(&csrc.text)?;
        note("connectives", &csrc, connectives.len(), connectives.duplicates());

        let (s, n, i) = (get("sentiment")?, get("negations")?, get("intensifiers")?);
        let sentiment = SentimentLexicon::from_csv(&s.text, &n.text, &i.text)?;
        note("sentiment", &s, sentiment.len(), sentiment.duplicates());
        note("negations", &n, sentiment.negation_count(), 0);
        note("intensifiers", &i, sentiment.intensifier_count(), 0);

        let (adj, adv) = (get("llm_adjectives")?, get("llm_adverbs")?);
        let llm_words = LlmWordList::from_lists(&adj.text, &adv.text)?;
        let r = &llm_words.report;
        note("llm_adjectives", &adj, llm_words.adjectives.len(), r.duplicate_adjectives.len());
        note("llm_adverbs", &adv, llm_words.adverbs.len(), r.duplicate_adverbs.len());

        let cg = get("country_groups")?;
        let country_groups = CountryGroupTable::from_csv(&cg.text)?;
        note("country_groups", &cg, country_groups.len(), 0);

        let ds = get("disciplines")?;
        let disciplines = DisciplineTable::from_csv(&ds.text)?;
        note("disciplines", &ds, disciplines.len(), 0);

        let vectors = match &paths.vectors {
            Some(p) => {
                let src = Source {
                    text: read(p)?,
                    origin: p.display().to_string(),
                };
                let space = VectorSpace::from_text(&src.text)?;
                note("vectors", &src, space.len(), 0);
                Some(space)
            }
            None => None,
        };
        report.digest = format!("{:x}", hasher.finalize());

        report.llm_cross_listed = r.cross_listed.clone();
        report.llm_duplicate_adjectives = r.duplicate_adjectives.clone();
        report.llm_duplicate_adverbs = r.duplicate_adverbs.clone();
        Ok(Resources {
            textkit,
            easy_words,
            norms,
            connectives,
            sentiment,
            llm_words,
            country_groups,
            disciplines,
            vectors,
            report,
        })
    }

    /// Names of the file-backed resources, in load order.
    pub fn resource_names() -> &'static [&'static str] {
        ResourcePaths::field_names()
    }

    /// Share of lexical tokens covered by the norms table.
    pub fn norms_coverage<'a>(&self, words: impl IntoIterator<Item = &'a str>) -> Option<f64> {
        let (mut hit, mut total) = (0usize, 0usize);
        for w in words {
            total += 1;
            if self.norms.get(w).is_some() {
                hit += 1;
            }
        }
        (total > 0).then(|| hit as f64 / total as f64)
    }
}
