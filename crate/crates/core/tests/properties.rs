//! Property tests: CoNLL column round-trips over generated trees, filter
//! order-independence, and corpus-wide syntax invariants on the fixtures.

use std::path::PathBuf;

use proptest::prelude::*;

use notional_core::conll::{parse_conll, GenreMap, Mention};
use notional_core::extract::{attestation_filter, AgreementPair, Label};
use notional_core::pipeline;
use notional_core::syntax::{governor_of, FineFunction, HeadRuleTable};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

// ---- generated CoNLL round-trip -------------------------------------------

/// A random constituent skeleton over `n` leaves, built independently of the
/// library's tree types: returns per-token (opens, closes).
fn random_brackets(
    n: usize,
    labels: &[&'static str],
    rng_vals: &[u8],
) -> (Vec<Vec<&'static str>>, Vec<usize>) {
    let mut opens = vec![Vec::new(); n];
    let mut closes = vec![0usize; n];
    let mut cursor = 0usize;
    // recursive random partition driven by the byte stream
    fn split(
        lo: usize,
        hi: usize,
        depth: usize,
        labels: &[&'static str],
        rng_vals: &[u8],
        cursor: &mut usize,
        opens: &mut Vec<Vec<&'static str>>,
        closes: &mut Vec<usize>,
    ) {
        let take = |cursor: &mut usize| {
            let v = rng_vals[*cursor % rng_vals.len()];
            *cursor += 1;
            v as usize
        };
        let label = labels[take(cursor) % labels.len()];
        opens[lo].push(label);
        closes[hi] += 1;
        let width = hi - lo + 1;
        if width == 1 || depth >= 4 {
            return;
        }
        // cut into two parts at a random point; sometimes recurse only left
        let cut = lo + take(cursor) % (width - 1);
        if take(cursor) % 3 != 0 {
            split(lo, cut, depth + 1, labels, rng_vals, cursor, opens, closes);
        }
        if take(cursor) % 3 != 0 {
            split(
                cut + 1,
                hi,
                depth + 1,
                labels,
                rng_vals,
                cursor,
                opens,
                closes,
            );
        }
    }
    split(
        0,
        n - 1,
        0,
        labels,
        rng_vals,
        &mut cursor,
        &mut opens,
        &mut closes,
    );
    (opens, closes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conll_columns_round_trip(
        n in 1usize..8,
        bytes in proptest::collection::vec(any::<u8>(), 32),
        mention_seed in any::<u8>(),
    ) {
        let labels = ["S", "NP", "VP", "ADJP", "X"];
        let (opens, closes) = random_brackets(n, &labels, &bytes);
        // synthesize the parse-bit column directly from the skeleton
        let bits: Vec<String> = (0..n)
            .map(|i| {
                let mut s = String::new();
                for l in &opens[i] {
                    s.push('(');
                    s.push_str(l);
                }
                s.push('*');
                s.push_str(&")".repeat(closes[i]));
                s
            })
            .collect();
        // non-overlapping single/double token mentions
        let mut coref: Vec<String> = vec!["-".into(); n];
        let mut entity = 1i64;
        let mut i = 0usize;
        while i < n {
            match mention_seed.wrapping_add(i as u8) % 4 {
                0 => {
                    coref[i] = format!("({entity})");
                    entity += 1;
                    i += 1;
                }
                1 if i + 1 < n => {
                    coref[i] = format!("({entity}");
                    coref[i + 1] = format!("{entity})");
                    entity += 1;
                    i += 2;
                }
                _ => i += 1,
            }
        }
        let open_count: usize = coref.iter().map(|c| c.matches('(').count()).sum();
        let body: Vec<String> = (0..n)
            .map(|i| format!("p/p/p 0 {i} w{i} NN {} - - - - * {}", bits[i], coref[i]))
            .collect();
        let text = format!(
            "#begin document (p/p/p); part 000\n{}\n#end document\n",
            body.join("\n")
        );
        let doc = parse_conll(&text, "p/p/p").unwrap();
        prop_assert_eq!(doc.parse_bit_column(), bits);
        prop_assert_eq!(doc.coref_column(), coref);
        let mention_count: usize = doc.chains.iter().map(|c| c.mentions.len()).sum();
        prop_assert_eq!(mention_count, open_count);
    }

    #[test]
    fn attestation_filter_is_order_independent(
        heads in proptest::collection::vec(0u8..6, 1..40),
        labels in proptest::collection::vec(any::<bool>(), 40),
        rotate in 0usize..40,
    ) {
        let mk = |head: u8, notional: bool, i: usize| AgreementPair {
            doc_id: format!("d{i}"),
            genre: notional_core::conll::Genre::News,
            antecedent: Mention {
                entity_id: 1,
                sentence_index: 0,
                span: (0, 0),
                head_token: Some(0),
                ordinal_in_chain: 0,
            },
            anaphor: Mention {
                entity_id: 1,
                sentence_index: 1,
                span: (0, 0),
                head_token: Some(0),
                ordinal_in_chain: 1,
            },
            label: if notional { Label::Notional } else { Label::Strict },
            anaphor_form: "x".into(),
            antecedent_head_form: format!("head{head}"),
            type_iii_flag: None,
        };
        let pairs: Vec<AgreementPair> = heads
            .iter()
            .enumerate()
            .map(|(i, h)| mk(*h, labels[i % labels.len()], i))
            .collect();
        let mut rotated = pairs.clone();
        rotated.rotate_left(rotate % pairs.len().max(1));
        let kept: std::collections::BTreeSet<String> = attestation_filter(pairs)
            .into_iter()
            .map(|p| p.doc_id)
            .collect();
        let kept_rotated: std::collections::BTreeSet<String> = attestation_filter(rotated)
            .into_iter()
            .map(|p| p.doc_id)
            .collect();
        prop_assert_eq!(kept, kept_rotated);
    }
}

// ---- fixture-corpus invariants --------------------------------------------

#[test]
fn fixture_round_trips_byte_for_byte() {
    let corpus = fixtures().join("corpus");
    for entry in walk_conll(&corpus) {
        let text = std::fs::read_to_string(&entry).unwrap();
        let doc = parse_conll(&text, "x").unwrap();
        let mut want_bits = Vec::new();
        let mut want_coref = Vec::new();
        for line in text.lines() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            want_bits.push(cols[5].to_string());
            want_coref.push(cols.last().unwrap().to_string());
        }
        assert_eq!(doc.parse_bit_column(), want_bits, "{entry:?}");
        assert_eq!(doc.coref_column(), want_coref, "{entry:?}");
    }
}

fn walk_conll(dir: &std::path::Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for entry in walkdir(dir) {
        out.push(entry);
    }
    out.sort();
    out
}

fn walkdir(dir: &std::path::Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(walkdir(&path));
        } else if path.to_string_lossy().ends_with("conll") {
            out.push(path);
        }
    }
    out
}

#[test]
fn coarse_function_collapses_fine_on_every_fixture_mention() {
    let docs = pipeline::load_annotated_corpus(
        &fixtures().join("corpus"),
        &GenreMap::default_map(),
        &HeadRuleTable::default_table(),
    )
    .unwrap();
    let rules = HeadRuleTable::default_table();
    let mut seen = 0usize;
    for doc in &docs {
        for chain in &doc.chains {
            for mention in &chain.mentions {
                let g = governor_of(mention, doc, &rules).unwrap();
                assert_eq!(g.function_coarse, g.function_fine.coarse());
                if let Some(gov) = g.governor_token {
                    let inside = mention.span.0 <= gov && gov <= mention.span.1;
                    assert!(
                        !inside || g.function_fine == FineFunction::Poss,
                        "governor inside non-possessive mention in {}",
                        doc.doc_id
                    );
                }
                seen += 1;
            }
        }
    }
    assert!(seen > 40, "fixture corpus should exercise many mentions");
}

#[test]
fn genre_assignment_is_total_on_fixture_corpus() {
    let docs = pipeline::load_annotated_corpus(
        &fixtures().join("corpus"),
        &GenreMap::default_map(),
        &HeadRuleTable::default_table(),
    )
    .unwrap();
    assert_eq!(docs.len(), 20);
    assert!(docs.iter().all(|d| d.genre.is_some()));
    let genres: std::collections::BTreeSet<_> = docs.iter().filter_map(|d| d.genre).collect();
    assert_eq!(genres.len(), 7, "all seven genres covered");
}
