//! End-to-end orchestration shared by the command-line tool and the tests:
//! corpus directory in, pair and feature tables out.

use std::path::Path;

use crate::conll::{load_corpus, Document, GenreMap};
use crate::error::Result;
use crate::extract::{
    attestation_filter, extract_pairs, pair_to_row, AgreementPair, Label, PairRecord, PAIRS_HEADER,
};
use crate::features::{featurize_records, FeatureVector, FEATURES_HEADER};
use crate::lexicon::LexiconSet;
use crate::syntax::{annotate_heads, HeadRuleTable};

/// Parse and annotate every document under `corpus_dir`.
pub fn load_annotated_corpus(
    corpus_dir: &Path,
    genre_map: &GenreMap,
    rules: &HeadRuleTable,
) -> Result<Vec<Document>> {
    let mut docs = load_corpus(corpus_dir, genre_map)?;
    for doc in &mut docs {
        annotate_heads(doc, rules);
    }
    Ok(docs)
}

/// Extract pairs from annotated documents and apply the corpus-wide
/// attestation filter. Documents are processed in their given (sorted)
/// order; pairs keep document order.
pub fn extract_all(docs: &[Document], lex: &LexiconSet) -> Result<Vec<AgreementPair>> {
    let mut pairs = Vec::new();
    for doc in docs {
        pairs.extend(extract_pairs(doc, &lex.exclusions)?);
    }
    Ok(attestation_filter(pairs))
}

pub fn pairs_tsv(pairs: &[AgreementPair]) -> String {
    let mut out = PAIRS_HEADER.join("\t");
    out.push('\n');
    for pair in pairs {
        out.push_str(&pair_to_row(pair).join("\t"));
        out.push('\n');
    }
    out
}

pub fn features_tsv(rows: &[(FeatureVector, Label)]) -> String {
    let mut out = FEATURES_HEADER.join("\t");
    out.push('\n');
    for (fv, label) in rows {
        out.push_str(&fv.to_row(*label).join("\t"));
        out.push('\n');
    }
    out
}

/// Featurize pair records against the corpus.
pub fn featurize_all(
    records: &[PairRecord],
    docs: &[Document],
    lex: &LexiconSet,
    rules: &HeadRuleTable,
) -> Result<Vec<(FeatureVector, Label)>> {
    featurize_records(records, docs, lex, rules)
}

/// Convert freshly extracted pairs to records (the in-memory equivalent of
/// writing and re-reading the pairs file).
pub fn pairs_to_records(pairs: &[AgreementPair]) -> Vec<PairRecord> {
    pairs
        .iter()
        .map(|p| PairRecord {
            doc_id: p.doc_id.clone(),
            genre: p.genre,
            antecedent_sentence: p.antecedent.sentence_index,
            antecedent_span: p.antecedent.span,
            antecedent_head: p.antecedent_head_form.clone(),
            anaphor_sentence: p.anaphor.sentence_index,
            anaphor_span: p.anaphor.span,
            anaphor_form: p.anaphor_form.clone(),
            label: p.label,
            type_iii_flag: p.type_iii_flag,
        })
        .collect()
}
