//! Lexicon resources: verb classes, entity types, generic heads, the gold-NE
//! type map, and the pair exclusion list. Each resource has an embedded
//! default and can be overridden by a file of the same name in the lexicon
//! directory (`--lexicons` or `NOTIONAL_LEXICON_DIR`).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Entity types used both for antecedents and for nominal governors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityType {
    Person,
    Organization,
    Place,
    Object,
    Time,
    Quantity,
    Abstract,
    Event,
}

impl EntityType {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityType::Person => "PERSON",
            EntityType::Organization => "ORGANIZATION",
            EntityType::Place => "PLACE",
            EntityType::Object => "OBJECT",
            EntityType::Time => "TIME",
            EntityType::Quantity => "QUANTITY",
            EntityType::Abstract => "ABSTRACT",
            EntityType::Event => "EVENT",
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "PERSON" => EntityType::Person,
            "ORGANIZATION" => EntityType::Organization,
            "PLACE" => EntityType::Place,
            "OBJECT" => EntityType::Object,
            "TIME" => EntityType::Time,
            "QUANTITY" => EntityType::Quantity,
            "ABSTRACT" => EntityType::Abstract,
            "EVENT" => EntityType::Event,
            other => return Err(Error::Invalid(format!("unknown entity type `{other}`"))),
        })
    }
}

/// Verb lemma -> semantic classes, with the merge map and rarity threshold.
#[derive(Debug, Clone)]
pub struct VerbClassLexicon {
    /// lemma -> (class, rank); rank 1 is the lemma's most frequent class.
    classes: HashMap<String, Vec<(String, u32)>>,
    merge_map: HashMap<String, String>,
    pub min_class_count: usize,
}

pub const DEFAULT_MIN_CLASS_COUNT: usize = 60;

impl VerbClassLexicon {
    pub fn parse(classes_tsv: &str, merges_tsv: &str, min_class_count: usize) -> Result<Self> {
        let mut classes: HashMap<String, Vec<(String, u32)>> = HashMap::new();
        for (i, line) in non_comment_lines(classes_tsv) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 3 {
                return Err(Error::Format {
                    path: "verb classes".into(),
                    line: i,
                    detail: "expected `lemma<TAB>class<TAB>rank`".into(),
                });
            }
            let rank: u32 = cols[2].trim().parse().map_err(|_| Error::Format {
                path: "verb classes".into(),
                line: i,
                detail: format!("bad rank `{}`", cols[2]),
            })?;
            classes
                .entry(cols[0].to_lowercase())
                .or_default()
                .push((cols[1].to_string(), rank));
        }
        let mut merge_map = HashMap::new();
        for (i, line) in non_comment_lines(merges_tsv) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 {
                return Err(Error::Format {
                    path: "class merges".into(),
                    line: i,
                    detail: "expected `class<TAB>superclass`".into(),
                });
            }
            merge_map.insert(cols[0].to_string(), cols[1].to_string());
        }
        Ok(VerbClassLexicon {
            classes,
            merge_map,
            min_class_count,
        })
    }

    /// Majority class of a lemma after merging, before rarity collapsing.
    /// Absent lemmas resolve to `OTHER`. Ties break lexicographically.
    pub fn raw_class(&self, lemma: &str) -> String {
        let entry = match self.classes.get(&lemma.to_lowercase()) {
            Some(e) => e,
            None => return "OTHER".to_string(),
        };
        let best = entry
            .iter()
            .min_by(|(ca, ra), (cb, rb)| ra.cmp(rb).then_with(|| ca.cmp(cb)))
            .expect("non-empty class list");
        self.merge_map
            .get(&best.0)
            .cloned()
            .unwrap_or_else(|| best.0.clone())
    }
}

/// Collapse classes attested fewer than `min_class_count` times to `OTHER`.
/// `counts` holds attestation counts over the extracted pairs. Entity-backed
/// (`ENT:`-prefixed) and `NONE` values pass through untouched.
pub fn collapse_rare_class(class: &str, counts: &HashMap<String, usize>, min: usize) -> String {
    if class == "OTHER" || class == "NONE" || class.starts_with("ENT:") {
        return class.to_string();
    }
    if counts.get(class).copied().unwrap_or(0) >= min {
        class.to_string()
    } else {
        "OTHER".to_string()
    }
}

/// Head-lemma entity lexicon plus the gold-NE tag map.
#[derive(Debug, Clone)]
pub struct EntityTypeLexicon {
    lemmas: HashMap<String, EntityType>,
    ner_map: HashMap<String, EntityType>,
}

impl EntityTypeLexicon {
    pub fn parse(entities_tsv: &str, ner_tsv: &str) -> Result<Self> {
        let mut lemmas = HashMap::new();
        for (i, line) in non_comment_lines(entities_tsv) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 {
                return Err(Error::Format {
                    path: "entity types".into(),
                    line: i,
                    detail: "expected `lemma<TAB>type`".into(),
                });
            }
            lemmas.insert(cols[0].to_lowercase(), cols[1].trim().parse()?);
        }
        let mut ner_map = HashMap::new();
        for (i, line) in non_comment_lines(ner_tsv) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 {
                return Err(Error::Format {
                    path: "ner map".into(),
                    line: i,
                    detail: "expected `tag<TAB>type`".into(),
                });
            }
            ner_map.insert(cols[0].to_string(), cols[1].trim().parse()?);
        }
        Ok(EntityTypeLexicon { lemmas, ner_map })
    }

    pub fn from_ner_tag(&self, tag: &str) -> Option<EntityType> {
        self.ner_map.get(tag).copied()
    }

    /// Lemma lookup with a crude plural fallback.
    pub fn from_lemma(&self, lemma: &str) -> Option<EntityType> {
        let l = lemma.to_lowercase();
        if let Some(t) = self.lemmas.get(&l) {
            return Some(*t);
        }
        singularize(&l).and_then(|s| self.lemmas.get(&s).copied())
    }
}

/// Strip a plural suffix: `minutes` -> `minute`, `churches` -> `church`.
pub fn singularize(word: &str) -> Option<String> {
    if let Some(stem) = word.strip_suffix("ies") {
        if !stem.is_empty() {
            return Some(format!("{stem}y"));
        }
    }
    if let Some(stem) = word.strip_suffix("es") {
        if stem.ends_with("ch")
            || stem.ends_with("sh")
            || stem.ends_with('x')
            || stem.ends_with('s')
        {
            return Some(stem.to_string());
        }
    }
    word.strip_suffix('s')
        .filter(|stem| !stem.is_empty() && !stem.ends_with('s'))
        .map(str::to_string)
}

/// Case-insensitive set of generic heads (`anyone`, `someone`, ...).
#[derive(Debug, Clone)]
pub struct GenericList {
    words: HashSet<String>,
}

impl GenericList {
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        GenericList { words }
    }

    pub fn contains(&self, head_form: &str) -> bool {
        self.words.contains(&head_form.to_lowercase())
    }
}

/// Pairs to drop, keyed by document id and span. A record matching either the
/// antecedent or the anaphor span drops the pair. Spans use the pairs-file
/// syntax `sentence:start-end`.
#[derive(Debug, Clone, Default)]
pub struct ExclusionList {
    entries: HashSet<(String, usize, usize, usize)>,
}

impl ExclusionList {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashSet::new();
        for (i, line) in non_comment_lines(text) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 {
                return Err(Error::Format {
                    path: "exclusions".into(),
                    line: i,
                    detail: "expected `doc_id<TAB>sentence:start-end`".into(),
                });
            }
            let (sent, span) = parse_span(cols[1]).ok_or_else(|| Error::Format {
                path: "exclusions".into(),
                line: i,
                detail: format!("bad span `{}`", cols[1]),
            })?;
            entries.insert((cols[0].to_string(), sent, span.0, span.1));
        }
        Ok(ExclusionList { entries })
    }

    pub fn contains(&self, doc_id: &str, sentence: usize, span: (usize, usize)) -> bool {
        self.entries
            .contains(&(doc_id.to_string(), sentence, span.0, span.1))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `sentence:start-end` -> (sentence, (start, end))
pub fn parse_span(s: &str) -> Option<(usize, (usize, usize))> {
    let (sent, rest) = s.split_once(':')?;
    let (a, b) = rest.split_once('-')?;
    Some((
        sent.trim().parse().ok()?,
        (a.trim().parse().ok()?, b.trim().parse().ok()?),
    ))
}

fn non_comment_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// All lexicon resources used by extraction and featurization.
#[derive(Debug, Clone)]
pub struct LexiconSet {
    pub verb_classes: VerbClassLexicon,
    pub entity_types: EntityTypeLexicon,
    pub generic: GenericList,
    pub exclusions: ExclusionList,
}

impl LexiconSet {
    pub fn default_set() -> Self {
        LexiconSet {
            verb_classes: VerbClassLexicon::parse(
                include_str!("../../../resources/lexicons/verb_classes.tsv"),
                include_str!("../../../resources/lexicons/class_merges.tsv"),
                DEFAULT_MIN_CLASS_COUNT,
            )
            .expect("bundled verb lexicon is well-formed"),
            entity_types: EntityTypeLexicon::parse(
                include_str!("../../../resources/lexicons/entity_types.tsv"),
                include_str!("../../../resources/lexicons/ner_map.tsv"),
            )
            .expect("bundled entity lexicon is well-formed"),
            generic: GenericList::parse(include_str!("../../../resources/lexicons/generic.txt")),
            exclusions: ExclusionList::default(),
        }
    }

    /// Defaults overridden by any of `verb_classes.tsv`, `class_merges.tsv`,
    /// `entity_types.tsv`, `ner_map.tsv`, `generic.txt`, `exclusions.tsv`
    /// present in `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str, fallback: &str| -> Result<String> {
            let p = dir.join(name);
            if p.is_file() {
                Ok(std::fs::read_to_string(p)?)
            } else {
                Ok(fallback.to_string())
            }
        };
        let classes = read(
            "verb_classes.tsv",
            include_str!("../../../resources/lexicons/verb_classes.tsv"),
        )?;
        let merges = read(
            "class_merges.tsv",
            include_str!("../../../resources/lexicons/class_merges.tsv"),
        )?;
        let entities = read(
            "entity_types.tsv",
            include_str!("../../../resources/lexicons/entity_types.tsv"),
        )?;
        let ner = read(
            "ner_map.tsv",
            include_str!("../../../resources/lexicons/ner_map.tsv"),
        )?;
        let generic = read(
            "generic.txt",
            include_str!("../../../resources/lexicons/generic.txt"),
        )?;
        let exclusions_path = dir.join("exclusions.tsv");
        let exclusions = if exclusions_path.is_file() {
            ExclusionList::parse(&std::fs::read_to_string(exclusions_path)?)?
        } else {
            ExclusionList::default()
        };
        Ok(LexiconSet {
            verb_classes: VerbClassLexicon::parse(&classes, &merges, DEFAULT_MIN_CLASS_COUNT)?,
            entity_types: EntityTypeLexicon::parse(&entities, &ner)?,
            generic: GenericList::parse(&generic),
            exclusions,
        })
    }
}
