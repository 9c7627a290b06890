//! Feature extraction for agreement pairs: the 18-feature inventory over
//! anaphor (`n_`) and antecedent (`t_`) plus pair-level measurements.
//!
//! Verb-class features need two corpus-global passes: raw classes are
//! counted over every extracted pair first, then classes attested below the
//! lexicon threshold collapse to `OTHER` (entity-backed `ENT:` classes and
//! `NONE` are exempt).

use std::collections::HashMap;
use std::str::FromStr;

use crate::conll::{Document, Genre, Mention};
use crate::error::{Error, Result};
use crate::extract::{is_first_person, AgreementPair, Label, PairRecord};
use crate::lexicon::{collapse_rare_class, EntityType, LexiconSet};
use crate::syntax::{
    collapse_pos, governor_of, CoarseFunction, FineFunction, GovernorInfo, HeadRuleTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Article {
    Def,
    Indef,
    Dem,
    None_,
}

impl Article {
    pub fn as_str(self) -> &'static str {
        match self {
            Article::Def => "def",
            Article::Indef => "indef",
            Article::Dem => "dem",
            Article::None_ => "none",
        }
    }
}

impl FromStr for Article {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "def" => Article::Def,
            "indef" => Article::Indef,
            "dem" => Article::Dem,
            "none" => Article::None_,
            other => return Err(Error::Invalid(format!("unknown article `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfStat {
    Given,
    New,
}

impl InfStat {
    pub fn as_str(self) -> &'static str {
        match self {
            InfStat::Given => "given",
            InfStat::New => "new",
        }
    }
}

/// The 18 core features of one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub n_person: u8,
    pub n_func: CoarseFunction,
    pub n_parent_pos: String,
    pub n_parent_class: String,
    pub n_position_pct: f64,
    pub t_func: FineFunction,
    pub t_parent_pos: String,
    pub t_parent_class: String,
    pub t_entity: EntityType,
    pub t_art: Article,
    pub t_infstat: InfStat,
    pub t_generic: bool,
    pub t_length_tokens: usize,
    pub t_length_chars: usize,
    pub t_position_pct: f64,
    pub distance_tokens: usize,
    pub doc_length_tokens: usize,
    pub genre: Genre,
}

pub const FEATURES_HEADER: [&str; 19] = [
    "n_person",
    "n_func",
    "n_parent_pos",
    "n_parent_class",
    "n_position_pct",
    "t_func",
    "t_parent_pos",
    "t_parent_class",
    "t_entity",
    "t_art",
    "t_infstat",
    "t_generic",
    "t_length_tokens",
    "t_length_chars",
    "t_position_pct",
    "distance_tokens",
    "doc_length_tokens",
    "genre",
    "label",
];

/// Features that encode as raw numbers; everything else is categorical.
pub const NUMERIC_FEATURES: [&str; 6] = [
    "n_position_pct",
    "t_position_pct",
    "t_length_tokens",
    "t_length_chars",
    "distance_tokens",
    "doc_length_tokens",
];

impl FeatureVector {
    pub fn to_row(&self, label: Label) -> Vec<String> {
        vec![
            self.n_person.to_string(),
            self.n_func.to_string(),
            self.n_parent_pos.clone(),
            self.n_parent_class.clone(),
            self.n_position_pct.to_string(),
            self.t_func.to_string(),
            self.t_parent_pos.clone(),
            self.t_parent_class.clone(),
            self.t_entity.to_string(),
            self.t_art.as_str().to_string(),
            self.t_infstat.as_str().to_string(),
            self.t_generic.to_string(),
            self.t_length_tokens.to_string(),
            self.t_length_chars.to_string(),
            self.t_position_pct.to_string(),
            self.distance_tokens.to_string(),
            self.doc_length_tokens.to_string(),
            self.genre.to_string(),
            label.to_string(),
        ]
    }
}

const MEASURE_UNITS: [&str; 20] = [
    "second",
    "minute",
    "hour",
    "day",
    "week",
    "month",
    "year",
    "decade",
    "century",
    "mile",
    "kilometer",
    "meter",
    "foot",
    "inch",
    "pound",
    "ton",
    "dollar",
    "cent",
    "percent",
    "degree",
];

/// Entity type of a mention head: gold named-entity tag first, then the
/// `N of <plural unit>` measure construction, then the head-lemma lexicon,
/// `ABSTRACT` as the fallback.
pub fn entity_type(mention: &Mention, doc: &Document, lex: &LexiconSet) -> Result<EntityType> {
    let head = mention
        .head_token
        .ok_or_else(|| Error::Invalid("mention head not computed".into()))?;
    let sent = &doc.sentences[mention.sentence_index];
    Ok(entity_type_of_token(head, sent, doc, lex))
}

fn entity_type_of_token(
    token: usize,
    sent: &crate::conll::Sentence,
    _doc: &Document,
    lex: &LexiconSet,
) -> EntityType {
    for (start, end, tag) in &sent.ner_spans {
        if *start <= token && token <= *end {
            if let Some(t) = lex.entity_types.from_ner_tag(tag) {
                return t;
            }
        }
    }
    if let Some(t) = measure_construction(token, sent) {
        return t;
    }
    lex.entity_types
        .from_lemma(&sent.tokens[token].lemma)
        .unwrap_or(EntityType::Abstract)
}

/// `couple of minutes`, `number of dollars`: head + `of` + plural unit noun.
fn measure_construction(head: usize, sent: &crate::conll::Sentence) -> Option<EntityType> {
    let of = sent.tokens.get(head + 1)?;
    if of.form.to_lowercase() != "of" {
        return None;
    }
    let upper = (head + 5).min(sent.tokens.len());
    for tok in &sent.tokens[head + 2..upper] {
        if tok.pos == "NNS" {
            let lemma = crate::lexicon::singularize(&tok.form.to_lowercase())
                .unwrap_or_else(|| tok.form.to_lowercase());
            if MEASURE_UNITS.contains(&lemma.as_str()) {
                return Some(EntityType::Quantity);
            }
            return None;
        }
    }
    None
}

/// Raw (pre-collapse) class of a governor: verb classes for verbal
/// governors, `ENT:<type>` for nominal governors, `NONE` otherwise.
pub fn governor_raw_class(
    info: &GovernorInfo,
    sentence_index: usize,
    doc: &Document,
    lex: &LexiconSet,
) -> String {
    let gov = match info.governor_token {
        Some(g) => g,
        None => return "NONE".to_string(),
    };
    let sent = &doc.sentences[sentence_index];
    let pos = info.governor_pos.as_str();
    if pos.starts_with("VB") || pos == "MD" {
        lex.verb_classes.raw_class(&sent.tokens[gov].lemma)
    } else if pos.starts_with("NN") {
        format!("ENT:{}", entity_type_of_token(gov, sent, doc, lex))
    } else {
        "NONE".to_string()
    }
}

/// Majority class, merge map, then rarity collapse against `counts`.
pub fn verb_class(lemma: &str, lex: &LexiconSet, counts: &HashMap<String, usize>) -> String {
    let raw = lex.verb_classes.raw_class(lemma);
    collapse_rare_class(&raw, counts, lex.verb_classes.min_class_count)
}

fn article_of(mention: &Mention, sent: &crate::conll::Sentence) -> Article {
    for i in mention.span.0..=mention.span.1 {
        let tok = &sent.tokens[i];
        if tok.pos == "DT" {
            return match tok.form.to_lowercase().as_str() {
                "the" => Article::Def,
                "a" | "an" => Article::Indef,
                "this" | "that" | "these" | "those" => Article::Dem,
                _ => Article::None_,
            };
        }
    }
    Article::None_
}

/// Governor facts for both sides of a pair, before class collapsing.
#[derive(Debug, Clone)]
pub struct PairGovernors {
    pub anaphor: GovernorInfo,
    pub anaphor_raw_class: String,
    pub antecedent: GovernorInfo,
    pub antecedent_raw_class: String,
}

pub fn pair_governors(
    pair: &AgreementPair,
    doc: &Document,
    lex: &LexiconSet,
    rules: &HeadRuleTable,
) -> Result<PairGovernors> {
    let ana = governor_of(&pair.anaphor, doc, rules)?;
    let ant = governor_of(&pair.antecedent, doc, rules)?;
    let ana_class = governor_raw_class(&ana, pair.anaphor.sentence_index, doc, lex);
    let ant_class = governor_raw_class(&ant, pair.antecedent.sentence_index, doc, lex);
    Ok(PairGovernors {
        anaphor: ana,
        anaphor_raw_class: ana_class,
        antecedent: ant,
        antecedent_raw_class: ant_class,
    })
}

/// Build the feature vector for one pair given precomputed governors and the
/// corpus-wide class counts.
pub fn featurize(
    pair: &AgreementPair,
    doc: &Document,
    lex: &LexiconSet,
    governors: &PairGovernors,
    class_counts: &HashMap<String, usize>,
) -> Result<FeatureVector> {
    let min = lex.verb_classes.min_class_count;
    let ant = &pair.antecedent;
    let ana = &pair.anaphor;
    let ant_sent = &doc.sentences[ant.sentence_index];
    let ant_head = ant
        .head_token
        .ok_or_else(|| Error::Invalid("antecedent head not computed".into()))?;
    let ana_head = ana
        .head_token
        .ok_or_else(|| Error::Invalid("anaphor head not computed".into()))?;
    let t_head_doc = doc.doc_index(ant.sentence_index, ant_head);
    let n_head_doc = doc.doc_index(ana.sentence_index, ana_head);
    if n_head_doc <= t_head_doc {
        return Err(Error::Invalid(format!(
            "anaphor does not follow antecedent in {}",
            pair.doc_id
        )));
    }
    let doc_len = doc.token_count;
    let forms: Vec<&str> = (ant.span.0..=ant.span.1)
        .map(|i| ant_sent.tokens[i].form.as_str())
        .collect();
    let t_length_tokens = forms.len();
    let t_length_chars =
        forms.iter().map(|f| f.len()).sum::<usize>() + t_length_tokens.saturating_sub(1);

    Ok(FeatureVector {
        n_person: if is_first_person(&pair.anaphor_form) {
            1
        } else {
            3
        },
        n_func: governors.anaphor.function_coarse,
        n_parent_pos: collapse_pos(&governors.anaphor.governor_pos),
        n_parent_class: collapse_rare_class(&governors.anaphor_raw_class, class_counts, min),
        n_position_pct: 100.0 * n_head_doc as f64 / doc_len as f64,
        t_func: governors.antecedent.function_fine,
        t_parent_pos: governors.antecedent.governor_pos.clone(),
        t_parent_class: collapse_rare_class(&governors.antecedent_raw_class, class_counts, min),
        t_entity: entity_type(ant, doc, lex)?,
        t_art: article_of(ant, ant_sent),
        t_infstat: if ant.ordinal_in_chain > 0 {
            InfStat::Given
        } else {
            InfStat::New
        },
        t_generic: lex.generic.contains(&pair.antecedent_head_form),
        t_length_tokens,
        t_length_chars,
        t_position_pct: 100.0 * t_head_doc as f64 / doc_len as f64,
        distance_tokens: n_head_doc - t_head_doc,
        doc_length_tokens: doc_len,
        genre: pair.genre,
    })
}

/// Locate a pairs-file record in its parsed document.
pub fn resolve_record(record: &PairRecord, doc: &Document) -> Result<AgreementPair> {
    let find = |sentence: usize, span: (usize, usize)| -> Result<Mention> {
        doc.chains
            .iter()
            .flat_map(|c| c.mentions.iter())
            .find(|m| m.sentence_index == sentence && m.span == span)
            .copied()
            .ok_or_else(|| Error::Schema {
                path: record.doc_id.clone(),
                column: "span".into(),
                detail: format!("no mention at {sentence}:{}-{}", span.0, span.1),
            })
    };
    let antecedent = find(record.antecedent_sentence, record.antecedent_span)?;
    let anaphor = find(record.anaphor_sentence, record.anaphor_span)?;
    let head = antecedent
        .head_token
        .ok_or_else(|| Error::Invalid("mention head not computed".into()))?;
    let head_form = doc.sentences[antecedent.sentence_index].tokens[head]
        .form
        .to_lowercase();
    if head_form != record.antecedent_head {
        return Err(Error::Schema {
            path: record.doc_id.clone(),
            column: "antecedent_head".into(),
            detail: format!(
                "expected `{}`, corpus has `{head_form}`",
                record.antecedent_head
            ),
        });
    }
    Ok(AgreementPair {
        doc_id: record.doc_id.clone(),
        genre: record.genre,
        antecedent,
        anaphor,
        label: record.label,
        anaphor_form: record.anaphor_form.clone(),
        antecedent_head_form: record.antecedent_head.clone(),
        type_iii_flag: record.type_iii_flag,
    })
}

/// Featurize pairs-file records against their documents: resolves mentions,
/// runs the corpus-global class-count pass, then emits vectors in input
/// order.
pub fn featurize_records(
    records: &[PairRecord],
    docs: &[Document],
    lex: &LexiconSet,
    rules: &HeadRuleTable,
) -> Result<Vec<(FeatureVector, Label)>> {
    let by_id: HashMap<&str, &Document> = docs.iter().map(|d| (d.doc_id.as_str(), d)).collect();
    let mut resolved = Vec::with_capacity(records.len());
    for record in records {
        let doc = by_id
            .get(record.doc_id.as_str())
            .ok_or_else(|| Error::Schema {
                path: record.doc_id.clone(),
                column: "doc_id".into(),
                detail: "document not found in corpus".into(),
            })?;
        let pair = resolve_record(record, doc)?;
        let governors = pair_governors(&pair, doc, lex, rules)?;
        resolved.push((pair, *doc, governors));
    }
    let class_counts = count_classes(resolved.iter().map(|(_, _, g)| g));
    resolved
        .iter()
        .map(|(pair, doc, governors)| {
            Ok((
                featurize(pair, doc, lex, governors, &class_counts)?,
                pair.label,
            ))
        })
        .collect()
}

/// Attestation counts of raw verb classes over both governor slots.
pub fn count_classes<'a>(
    governors: impl Iterator<Item = &'a PairGovernors>,
) -> HashMap<String, usize> {
    let mut counts: HashMap<String, usize> = HashMap::new();
    for g in governors {
        for class in [&g.anaphor_raw_class, &g.antecedent_raw_class] {
            if class.as_str() != "NONE" && !class.starts_with("ENT:") {
                *counts.entry(class.clone()).or_default() += 1;
            }
        }
    }
    counts
}

/// A parsed features file: rows of named string values plus labels.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub labels: Vec<Label>,
}

impl FeatureTable {
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Schema {
            path: path.into(),
            column: "-".into(),
            detail: "empty features file".into(),
        })?;
        let cols: Vec<String> = header.split('\t').map(str::to_string).collect();
        let label_idx = cols
            .iter()
            .position(|c| c == "label")
            .ok_or_else(|| Error::Schema {
                path: path.into(),
                column: "label".into(),
                detail: "missing column".into(),
            })?;
        let feature_names: Vec<String> = cols
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != label_idx)
            .map(|(_, c)| c.clone())
            .collect();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (line_no, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty())
            .skip(1)
        {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != cols.len() {
                return Err(Error::Format {
                    path: path.into(),
                    line: line_no + 1,
                    detail: format!("expected {} columns, found {}", cols.len(), fields.len()),
                });
            }
            labels.push(fields[label_idx].parse()?);
            rows.push(
                fields
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != label_idx)
                    .map(|(_, f)| f.to_string())
                    .collect(),
            );
        }
        Ok(FeatureTable {
            feature_names,
            rows,
            labels,
        })
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.feature_names
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }
}
