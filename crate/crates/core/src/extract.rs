//! Antecedent–anaphor pair selection.
//!
//! A pair is a singular-headed lexical NP (head tagged NN or NNP) whose next
//! chain mention is a single-token first- or third-person pronoun. Second
//! person is skipped outright: its number is ambiguous. The corpus-wide
//! attestation filter then keeps only pairs whose head form is attested with
//! a plural pronoun somewhere in the corpus, so that strict-only heads never
//! reach the classifier.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::conll::{Document, Genre, Mention};
use crate::error::{Error, Result};
use crate::lexicon::{parse_span, ExclusionList};

pub const PLURAL_PRONOUNS: [&str; 10] = [
    "they",
    "them",
    "their",
    "theirs",
    "themselves",
    "we",
    "us",
    "our",
    "ours",
    "ourselves",
];
pub const SINGULAR_PRONOUNS: [&str; 16] = [
    "it", "its", "itself", "he", "him", "his", "himself", "she", "her", "hers", "herself", "i",
    "me", "my", "mine", "myself",
];
pub const SECOND_PERSON_PRONOUNS: [&str; 5] = ["you", "your", "yours", "yourself", "yourselves"];
pub const FIRST_PERSON_PRONOUNS: [&str; 10] = [
    "i",
    "me",
    "my",
    "mine",
    "myself",
    "we",
    "us",
    "our",
    "ours",
    "ourselves",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Strict,
    Notional,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Strict => "strict",
            Label::Notional => "notional",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Label::Strict),
            "notional" => Ok(Label::Notional),
            other => Err(Error::Invalid(format!("unknown label `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AgreementPair {
    pub doc_id: String,
    pub genre: Genre,
    pub antecedent: Mention,
    pub anaphor: Mention,
    pub label: Label,
    pub anaphor_form: String,
    /// Lowercased surface form of the antecedent head token.
    pub antecedent_head_form: String,
    /// Manual annotation passthrough; never set by extraction.
    pub type_iii_flag: Option<bool>,
}

fn pronoun_label(form: &str) -> Option<Label> {
    let f = form.to_lowercase();
    if PLURAL_PRONOUNS.contains(&f.as_str()) {
        Some(Label::Notional)
    } else if SINGULAR_PRONOUNS.contains(&f.as_str()) {
        Some(Label::Strict)
    } else {
        None
    }
}

pub fn is_first_person(form: &str) -> bool {
    FIRST_PERSON_PRONOUNS.contains(&form.to_lowercase().as_str())
}

/// Extract qualifying pairs from one document, in antecedent order.
/// Non-qualifying mentions are skipped silently; excluded spans are dropped.
pub fn extract_pairs(doc: &Document, exclusions: &ExclusionList) -> Result<Vec<AgreementPair>> {
    let genre = doc
        .genre
        .ok_or_else(|| Error::Invalid(format!("document {} has no genre", doc.doc_id)))?;
    let mut pairs = Vec::new();
    for chain in &doc.chains {
        for window in chain.mentions.windows(2) {
            let (antecedent, anaphor) = (&window[0], &window[1]);
            let head = antecedent.head_token.ok_or_else(|| {
                Error::Invalid("mention head not computed; run annotate_heads first".into())
            })?;
            let head_tok = &doc.sentences[antecedent.sentence_index].tokens[head];
            if head_tok.pos != "NN" && head_tok.pos != "NNP" {
                continue;
            }
            if anaphor.span.0 != anaphor.span.1 {
                continue;
            }
            let ana_tok = &doc.sentences[anaphor.sentence_index].tokens[anaphor.span.0];
            let label = match pronoun_label(&ana_tok.form) {
                Some(l) => l,
                None => continue, // second person or not a pronoun
            };
            if exclusions.contains(&doc.doc_id, antecedent.sentence_index, antecedent.span)
                || exclusions.contains(&doc.doc_id, anaphor.sentence_index, anaphor.span)
            {
                continue;
            }
            pairs.push(AgreementPair {
                doc_id: doc.doc_id.clone(),
                genre,
                antecedent: *antecedent,
                anaphor: *anaphor,
                label,
                anaphor_form: ana_tok.form.clone(),
                antecedent_head_form: head_tok.form.to_lowercase(),
                type_iii_flag: None,
            });
        }
    }
    pairs.sort_by_key(|p| {
        (
            p.antecedent.sentence_index,
            p.antecedent.span.0,
            p.antecedent.span.1,
            p.anaphor.sentence_index,
            p.anaphor.span.0,
        )
    });
    Ok(pairs)
}

/// Keep exactly the pairs whose head form is attested with a plural pronoun
/// somewhere in `pairs`. Order-preserving and idempotent.
pub fn attestation_filter(pairs: Vec<AgreementPair>) -> Vec<AgreementPair> {
    let attested: HashSet<&str> = pairs
        .iter()
        .filter(|p| p.label == Label::Notional)
        .map(|p| p.antecedent_head_form.as_str())
        .collect();
    let attested: HashSet<String> = attested.into_iter().map(str::to_string).collect();
    pairs
        .into_iter()
        .filter(|p| attested.contains(&p.antecedent_head_form))
        .collect()
}

fn span_str(sentence: usize, span: (usize, usize)) -> String {
    format!("{sentence}:{}-{}", span.0, span.1)
}

pub const PAIRS_HEADER: [&str; 8] = [
    "doc_id",
    "genre",
    "antecedent_span",
    "antecedent_head",
    "anaphor_span",
    "anaphor_form",
    "label",
    "type_iii",
];

/// One TSV row per pair, matching [`PAIRS_HEADER`].
pub fn pair_to_row(pair: &AgreementPair) -> Vec<String> {
    vec![
        pair.doc_id.clone(),
        pair.genre.to_string(),
        span_str(pair.antecedent.sentence_index, pair.antecedent.span),
        pair.antecedent_head_form.clone(),
        span_str(pair.anaphor.sentence_index, pair.anaphor.span),
        pair.anaphor_form.clone(),
        pair.label.to_string(),
        pair.type_iii_flag
            .map(|b| b.to_string())
            .unwrap_or_default(),
    ]
}

/// A pairs-file row resolved back to spans; used to re-join rows with parsed
/// documents at featurization time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub doc_id: String,
    pub genre: Genre,
    pub antecedent_sentence: usize,
    pub antecedent_span: (usize, usize),
    pub antecedent_head: String,
    pub anaphor_sentence: usize,
    pub anaphor_span: (usize, usize),
    pub anaphor_form: String,
    pub label: Label,
    pub type_iii_flag: Option<bool>,
}

/// Parse a pairs TSV (header required; `#` meta lines skipped).
pub fn parse_pairs_tsv(text: &str, path: &str) -> Result<Vec<PairRecord>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Schema {
        path: path.into(),
        column: "-".into(),
        detail: "empty pairs file".into(),
    })?;
    let cols: Vec<&str> = header.split('\t').collect();
    for want in PAIRS_HEADER {
        if !cols.contains(&want) {
            return Err(Error::Schema {
                path: path.into(),
                column: want.into(),
                detail: "missing column".into(),
            });
        }
    }
    let idx = |name: &str| cols.iter().position(|c| *c == name).expect("checked");
    let (i_doc, i_genre, i_aspan, i_head, i_nspan, i_nform, i_label, i_t3) = (
        idx("doc_id"),
        idx("genre"),
        idx("antecedent_span"),
        idx("antecedent_head"),
        idx("anaphor_span"),
        idx("anaphor_form"),
        idx("label"),
        idx("type_iii"),
    );
    let mut out = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < cols.len() {
            return Err(Error::Format {
                path: path.into(),
                line: line_no + 1,
                detail: format!("expected {} columns, found {}", cols.len(), fields.len()),
            });
        }
        let (asent, aspan) = parse_span(fields[i_aspan]).ok_or_else(|| Error::Schema {
            path: path.into(),
            column: "antecedent_span".into(),
            detail: format!("bad span `{}`", fields[i_aspan]),
        })?;
        let (nsent, nspan) = parse_span(fields[i_nspan]).ok_or_else(|| Error::Schema {
            path: path.into(),
            column: "anaphor_span".into(),
            detail: format!("bad span `{}`", fields[i_nspan]),
        })?;
        out.push(PairRecord {
            doc_id: fields[i_doc].to_string(),
            genre: fields[i_genre].parse()?,
            antecedent_sentence: asent,
            antecedent_span: aspan,
            antecedent_head: fields[i_head].to_string(),
            anaphor_sentence: nsent,
            anaphor_span: nspan,
            anaphor_form: fields[i_nform].to_string(),
            label: fields[i_label].parse()?,
            type_iii_flag: match fields[i_t3] {
                "" => None,
                "true" => Some(true),
                "false" => Some(false),
                other => {
                    return Err(Error::Schema {
                        path: path.into(),
                        column: "type_iii".into(),
                        detail: format!("bad flag `{other}`"),
                    })
                }
            },
        });
    }
    Ok(out)
}
