//! Reader for CoNLL-2012-style coreference files.
//!
//! A file holds one document split into parts, each bracketed by
//! `#begin document (<id>); part NNN` / `#end document`. Rows are
//! whitespace-separated columns; we consume document id, part, word index,
//! form, POS, parse bit, lemma, speaker, named entities and coreference
//! (the last column). Coreference chains are scoped to their part;
//! token and sentence indices run through the whole document.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Coreference bracket kind attached to a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorefBoundary {
    Open,
    Close,
    OpenClose,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub index_in_sentence: usize,
    pub index_in_document: usize,
    pub form: String,
    pub pos: String,
    /// Raw constituent bracket fragment, e.g. `(TOP(S(NP*`.
    pub parse_bit: String,
    /// Predicate lemma column when annotated, lowercased form otherwise.
    pub lemma: String,
    pub speaker: String,
    /// Raw named-entity column value, e.g. `(ORG*` or `*`.
    pub ner_tag: String,
    pub coref_tags: Vec<(i64, CorefBoundary)>,
}

/// Node of a constituent tree. Leaves carry the POS label and span one token.
#[derive(Debug, Clone)]
pub struct ConstituentNode {
    pub label: String,
    /// Inclusive within-sentence token span.
    pub span: (usize, usize),
    pub children: Vec<ConstituentNode>,
    /// Within-sentence index of the lexical head; filled by the syntax pass.
    pub head_token: Option<usize>,
}

impl ConstituentNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Phrase label with function tags and indices stripped: `NP-TMP` -> `NP`.
    pub fn base_label(&self) -> &str {
        let l = self.label.as_str();
        let cut = l.find(['-', '=']).filter(|&i| i > 0).unwrap_or(l.len());
        &l[..cut]
    }
}

#[derive(Debug, Clone)]
pub struct Sentence {
    /// Document-wide sentence index (runs across parts).
    pub index: usize,
    pub part: usize,
    pub tokens: Vec<Token>,
    pub tree: ConstituentNode,
    /// Named-entity spans `(start, end, type)`, within-sentence indices.
    pub ner_spans: Vec<(usize, usize, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mention {
    pub entity_id: i64,
    pub sentence_index: usize,
    /// Inclusive within-sentence token span.
    pub span: (usize, usize),
    /// Within-sentence index of the head token; filled by the syntax pass.
    pub head_token: Option<usize>,
    /// 0-based position within its chain, in document order.
    pub ordinal_in_chain: usize,
}

#[derive(Debug, Clone)]
pub struct CorefChain {
    pub entity_id: i64,
    pub part: usize,
    pub mentions: Vec<Mention>,
}

/// The seven coarse text types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Genre {
    BcConv,
    BcNews,
    Phone,
    News,
    Bible,
    Translations,
    Web,
}

impl Genre {
    pub const ALL: [Genre; 7] = [
        Genre::BcConv,
        Genre::BcNews,
        Genre::Phone,
        Genre::News,
        Genre::Bible,
        Genre::Translations,
        Genre::Web,
    ];

    pub fn is_spoken(self) -> bool {
        matches!(self, Genre::BcConv | Genre::BcNews | Genre::Phone)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Genre::BcConv => "bc.conv",
            Genre::BcNews => "bc.news",
            Genre::Phone => "phone",
            Genre::News => "news",
            Genre::Bible => "bible",
            Genre::Translations => "translations",
            Genre::Web => "web",
        }
    }
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Genre {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bc.conv" => Genre::BcConv,
            "bc.news" => Genre::BcNews,
            "phone" => Genre::Phone,
            "news" => Genre::News,
            "bible" => Genre::Bible,
            "translations" => Genre::Translations,
            "web" => Genre::Web,
            other => return Err(Error::Invalid(format!("unknown genre `{other}`"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Document {
    pub doc_id: String,
    pub genre: Option<Genre>,
    pub sentences: Vec<Sentence>,
    pub chains: Vec<CorefChain>,
    pub token_count: usize,
}

impl Document {
    pub fn sentence(&self, index: usize) -> &Sentence {
        &self.sentences[index]
    }

    /// Document-wide index of a token addressed by (sentence, within-sentence).
    pub fn doc_index(&self, sentence: usize, token: usize) -> usize {
        self.sentences[sentence].tokens[token].index_in_document
    }

    /// Regenerate the parse-bit column from the trees (round-trip check).
    pub fn parse_bit_column(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.token_count);
        for sent in &self.sentences {
            let mut opens: Vec<Vec<&str>> = vec![Vec::new(); sent.tokens.len()];
            let mut closes = vec![0usize; sent.tokens.len()];
            collect_brackets(&sent.tree, &mut opens, &mut closes);
            for i in 0..sent.tokens.len() {
                let mut bit = String::new();
                for label in &opens[i] {
                    bit.push('(');
                    bit.push_str(label);
                }
                bit.push('*');
                for _ in 0..closes[i] {
                    bit.push(')');
                }
                out.push(bit);
            }
        }
        out
    }

    /// Regenerate the coreference column from the parsed tags (round-trip check).
    pub fn coref_column(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.token_count);
        for sent in &self.sentences {
            for tok in &sent.tokens {
                if tok.coref_tags.is_empty() {
                    out.push("-".to_string());
                } else {
                    let parts: Vec<String> = tok
                        .coref_tags
                        .iter()
                        .map(|(e, b)| match b {
                            CorefBoundary::Open => format!("({e}"),
                            CorefBoundary::Close => format!("{e})"),
                            CorefBoundary::OpenClose => format!("({e})"),
                        })
                        .collect();
                    out.push(parts.join("|"));
                }
            }
        }
        out
    }
}

fn collect_brackets<'a>(
    node: &'a ConstituentNode,
    opens: &mut Vec<Vec<&'a str>>,
    closes: &mut Vec<usize>,
) {
    if node.is_leaf() {
        return;
    }
    opens[node.span.0].push(&node.label);
    closes[node.span.1] += 1;
    for c in &node.children {
        collect_brackets(c, opens, closes);
    }
}

/// Ordered prefix -> genre map; the longest matching prefix wins.
#[derive(Debug, Clone)]
pub struct GenreMap {
    entries: Vec<(String, Genre)>,
}

impl GenreMap {
    pub fn from_entries(entries: Vec<(String, Genre)>) -> Self {
        GenreMap { entries }
    }

    /// One `prefix<TAB>genre` per line; `#` comments and blanks ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (prefix, genre) = match (cols.next(), cols.next()) {
                (Some(p), Some(g)) => (p, g),
                _ => {
                    return Err(Error::Format {
                        path: "genre map".into(),
                        line: i + 1,
                        detail: "expected `prefix<TAB>genre`".into(),
                    })
                }
            };
            entries.push((prefix.to_string(), genre.parse()?));
        }
        Ok(GenreMap { entries })
    }

    pub fn default_map() -> Self {
        Self::parse(include_str!("../../../resources/lexicons/genre_map.tsv"))
            .expect("bundled genre map is well-formed")
    }
}

/// Longest-prefix genre lookup.
pub fn assign_genre(doc_id: &str, map: &GenreMap) -> Result<Genre> {
    map.entries
        .iter()
        .filter(|(prefix, _)| doc_id.starts_with(prefix.as_str()))
        .max_by_key(|(prefix, _)| prefix.len())
        .map(|(_, g)| *g)
        .ok_or_else(|| Error::UnmappedDocument(doc_id.to_string()))
}

/// Minimum column count: id, part, index, form, POS, parse, lemma,
/// frameset, sense, speaker, NE, coreference.
const MIN_COLUMNS: usize = 12;

/// Parse one CoNLL file into a document. `fallback_doc_id` is used when the
/// begin-document sentinel does not name an id.
pub fn parse_conll(file_text: &str, fallback_doc_id: &str) -> Result<Document> {
    let mut doc_id: Option<String> = None;
    let mut sentences: Vec<Sentence> = Vec::new();
    let mut chains: Vec<CorefChain> = Vec::new();
    let mut part = 0usize;
    let mut in_part = false;
    let mut doc_offset = 0usize;

    // per-part coreference state: entity -> stack of (sentence, start)
    let mut open_mentions: HashMap<i64, Vec<(usize, usize)>> = HashMap::new();
    let mut part_mentions: Vec<(i64, usize, (usize, usize))> = Vec::new();

    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    let path = fallback_doc_id;

    let flush_sentence = |rows: &mut Vec<(usize, Vec<String>)>,
                          sentences: &mut Vec<Sentence>,
                          open_mentions: &mut HashMap<i64, Vec<(usize, usize)>>,
                          part_mentions: &mut Vec<(i64, usize, (usize, usize))>,
                          doc_offset: &mut usize,
                          part: usize|
     -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        let sent_index = sentences.len();
        let mut tokens = Vec::with_capacity(rows.len());
        let mut ner_spans = Vec::new();
        let mut ner_open: Option<(usize, String)> = None;
        for (i, (line_no, cols)) in rows.iter().enumerate() {
            let coref_field = cols.last().expect("checked").as_str();
            let coref_tags = parse_coref_field(coref_field, path, *line_no)?;
            for (entity, boundary) in &coref_tags {
                match boundary {
                    CorefBoundary::Open => {
                        open_mentions
                            .entry(*entity)
                            .or_default()
                            .push((sent_index, i));
                    }
                    CorefBoundary::Close => {
                        let stack = open_mentions.entry(*entity).or_default();
                        match stack.pop() {
                            Some((s, start)) if s == sent_index => {
                                part_mentions.push((*entity, s, (start, i)));
                            }
                            _ => {
                                return Err(Error::MalformedCoref {
                                    path: path.into(),
                                    entity: *entity,
                                    sentence: sent_index,
                                    detail: "close bracket without matching open".into(),
                                })
                            }
                        }
                    }
                    CorefBoundary::OpenClose => {
                        part_mentions.push((*entity, sent_index, (i, i)));
                    }
                }
            }
            let ner_field = &cols[10];
            parse_ner_field(ner_field, i, &mut ner_open, &mut ner_spans);
            let lemma_col = &cols[6];
            let form = cols[3].clone();
            tokens.push(Token {
                index_in_sentence: i,
                index_in_document: *doc_offset + i,
                form: form.clone(),
                pos: cols[4].clone(),
                parse_bit: cols[5].clone(),
                lemma: if lemma_col == "-" {
                    form.to_lowercase()
                } else {
                    lemma_col.clone()
                },
                speaker: if cols[9] == "-" {
                    String::new()
                } else {
                    cols[9].clone()
                },
                ner_tag: ner_field.clone(),
                coref_tags,
            });
        }
        // unterminated NE span: tolerate, drop it
        for (entity, stack) in open_mentions.iter() {
            if let Some((s, _)) = stack.last() {
                if *s == sent_index {
                    return Err(Error::MalformedCoref {
                        path: path.into(),
                        entity: *entity,
                        sentence: sent_index,
                        detail: "open bracket not closed within its sentence".into(),
                    });
                }
            }
        }
        let tree = parse_tree_from_bits(&tokens, path, rows[0].0)?;
        *doc_offset += tokens.len();
        sentences.push(Sentence {
            index: sent_index,
            part,
            tokens,
            tree,
            ner_spans,
        });
        rows.clear();
        Ok(())
    };

    for (line_idx, line) in file_text.lines().enumerate() {
        let line_no = line_idx + 1;
        let trimmed = line.trim();
        if trimmed.starts_with("#begin document") {
            if let Some(open) = trimmed.find('(') {
                if let Some(close) = trimmed[open..].find(')') {
                    let id = &trimmed[open + 1..open + close];
                    if doc_id.is_none() && !id.is_empty() {
                        doc_id = Some(id.to_string());
                    }
                }
            }
            if let Some(p) = trimmed.rsplit("part ").next() {
                if let Ok(n) = p.trim().parse::<usize>() {
                    part = n;
                }
            }
            in_part = true;
            continue;
        }
        if trimmed.starts_with("#end document") {
            flush_sentence(
                &mut rows,
                &mut sentences,
                &mut open_mentions,
                &mut part_mentions,
                &mut doc_offset,
                part,
            )?;
            // close out the part: chains are part-scoped
            finish_part_chains(&mut chains, &mut part_mentions, part, path)?;
            open_mentions.clear();
            in_part = false;
            continue;
        }
        if trimmed.is_empty() {
            flush_sentence(
                &mut rows,
                &mut sentences,
                &mut open_mentions,
                &mut part_mentions,
                &mut doc_offset,
                part,
            )?;
            continue;
        }
        if !in_part {
            continue;
        }
        let cols: Vec<String> = trimmed.split_whitespace().map(str::to_string).collect();
        if cols.len() < MIN_COLUMNS {
            return Err(Error::Format {
                path: path.into(),
                line: line_no,
                detail: format!(
                    "expected at least {MIN_COLUMNS} columns, found {}",
                    cols.len()
                ),
            });
        }
        rows.push((line_no, cols));
    }
    if in_part {
        flush_sentence(
            &mut rows,
            &mut sentences,
            &mut open_mentions,
            &mut part_mentions,
            &mut doc_offset,
            part,
        )?;
        finish_part_chains(&mut chains, &mut part_mentions, part, path)?;
    }

    let token_count = sentences.iter().map(|s| s.tokens.len()).sum();
    Ok(Document {
        doc_id: doc_id.unwrap_or_else(|| fallback_doc_id.to_string()),
        genre: None,
        sentences,
        chains,
        token_count,
    })
}

fn finish_part_chains(
    chains: &mut Vec<CorefChain>,
    part_mentions: &mut Vec<(i64, usize, (usize, usize))>,
    part: usize,
    path: &str,
) -> Result<()> {
    let mut by_entity: HashMap<i64, Vec<(usize, (usize, usize))>> = HashMap::new();
    for (entity, sent, span) in part_mentions.drain(..) {
        by_entity.entry(entity).or_default().push((sent, span));
    }
    let mut ids: Vec<i64> = by_entity.keys().copied().collect();
    ids.sort_unstable();
    for entity_id in ids {
        let mut spans = by_entity.remove(&entity_id).expect("present");
        spans.sort_unstable_by_key(|(sent, (start, end))| (*sent, *start, *end));
        for w in spans.windows(2) {
            if w[0] == w[1] {
                return Err(Error::MalformedCoref {
                    path: path.into(),
                    entity: entity_id,
                    sentence: w[0].0,
                    detail: "duplicate mention span in chain".into(),
                });
            }
        }
        let mentions = spans
            .into_iter()
            .enumerate()
            .map(|(ordinal, (sent, span))| Mention {
                entity_id,
                sentence_index: sent,
                span,
                head_token: None,
                ordinal_in_chain: ordinal,
            })
            .collect();
        chains.push(CorefChain {
            entity_id,
            part,
            mentions,
        });
    }
    Ok(())
}

fn parse_coref_field(field: &str, path: &str, line_no: usize) -> Result<Vec<(i64, CorefBoundary)>> {
    if field == "-" || field == "_" {
        return Ok(Vec::new());
    }
    let mut tags = Vec::new();
    for piece in field.split('|') {
        let (entity, boundary) = if let Some(rest) = piece.strip_prefix('(') {
            if let Some(num) = rest.strip_suffix(')') {
                (num, CorefBoundary::OpenClose)
            } else {
                (rest, CorefBoundary::Open)
            }
        } else if let Some(num) = piece.strip_suffix(')') {
            (num, CorefBoundary::Close)
        } else {
            return Err(Error::Format {
                path: path.into(),
                line: line_no,
                detail: format!("bad coreference tag `{piece}`"),
            });
        };
        let id: i64 = entity.parse().map_err(|_| Error::Format {
            path: path.into(),
            line: line_no,
            detail: format!("bad coreference entity id `{entity}`"),
        })?;
        tags.push((id, boundary));
    }
    Ok(tags)
}

fn parse_ner_field(
    field: &str,
    token_index: usize,
    open: &mut Option<(usize, String)>,
    spans: &mut Vec<(usize, usize, String)>,
) {
    let field = field.trim();
    if field == "*" || field == "-" {
        return;
    }
    if let Some(rest) = field.strip_prefix('(') {
        if let Some(label) = rest.strip_suffix(')') {
            spans.push((
                token_index,
                token_index,
                label.trim_end_matches('*').to_string(),
            ));
        } else {
            *open = Some((token_index, rest.trim_end_matches('*').to_string()));
        }
    } else if field.ends_with(')') {
        if let Some((start, label)) = open.take() {
            spans.push((start, token_index, label));
        }
    }
}

/// Rebuild the constituent tree of one sentence from per-token parse bits.
fn parse_tree_from_bits(
    tokens: &[Token],
    path: &str,
    first_line: usize,
) -> Result<ConstituentNode> {
    // stack of open nodes: (label, start, children)
    let mut stack: Vec<(String, usize, Vec<ConstituentNode>)> = Vec::new();
    let mut roots: Vec<ConstituentNode> = Vec::new();

    for (i, tok) in tokens.iter().enumerate() {
        let line = first_line + i;
        let bit = tok.parse_bit.as_str();
        let mut rest = bit;
        let mut seen_star = false;
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix('(') {
                let end = r.find(['(', '*', ')']).unwrap_or(r.len());
                let label = &r[..end];
                if label.is_empty() || seen_star {
                    return Err(Error::MalformedParse {
                        path: path.into(),
                        line,
                        detail: format!("bad bracket in parse bit `{bit}`"),
                    });
                }
                stack.push((label.to_string(), i, Vec::new()));
                rest = &r[end..];
            } else if let Some(r) = rest.strip_prefix('*') {
                if seen_star {
                    return Err(Error::MalformedParse {
                        path: path.into(),
                        line,
                        detail: format!("multiple terminals in parse bit `{bit}`"),
                    });
                }
                seen_star = true;
                let leaf = ConstituentNode {
                    label: tok.pos.clone(),
                    span: (i, i),
                    children: Vec::new(),
                    head_token: None,
                };
                match stack.last_mut() {
                    Some((_, _, children)) => children.push(leaf),
                    None => roots.push(leaf),
                }
                rest = r;
            } else if let Some(r) = rest.strip_prefix(')') {
                let (label, start, children) = match stack.pop() {
                    Some(frame) => frame,
                    None => {
                        return Err(Error::MalformedParse {
                            path: path.into(),
                            line,
                            detail: "unbalanced closing bracket".into(),
                        })
                    }
                };
                let node = ConstituentNode {
                    label,
                    span: (start, i),
                    children,
                    head_token: None,
                };
                match stack.last_mut() {
                    Some((_, _, siblings)) => siblings.push(node),
                    None => roots.push(node),
                }
                rest = r;
            } else {
                return Err(Error::MalformedParse {
                    path: path.into(),
                    line,
                    detail: format!("unexpected character in parse bit `{bit}`"),
                });
            }
        }
        if !seen_star {
            return Err(Error::MalformedParse {
                path: path.into(),
                line,
                detail: format!("parse bit `{bit}` has no terminal"),
            });
        }
    }
    if !stack.is_empty() {
        return Err(Error::MalformedParse {
            path: path.into(),
            line: first_line + tokens.len().saturating_sub(1),
            detail: "unclosed bracket at end of sentence".into(),
        });
    }
    if roots.len() == 1 {
        Ok(roots.into_iter().next().expect("one root"))
    } else {
        // No single covering bracket; wrap fragments under a synthetic TOP.
        let span = (0, tokens.len().saturating_sub(1));
        Ok(ConstituentNode {
            label: "TOP".to_string(),
            span,
            children: roots,
            head_token: None,
        })
    }
}

/// Parse every `*conll` file under `dir`, assign genres, and sort by doc id.
/// Documents whose id no genre prefix covers are skipped with a warning on
/// stderr.
pub fn load_corpus(dir: &Path, map: &GenreMap) -> Result<Vec<Document>> {
    let mut files: Vec<_> = walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .map(|n| n.ends_with("conll"))
                .unwrap_or(false)
        })
        .collect();
    files.sort();
    let mut docs = Vec::with_capacity(files.len());
    for path in files {
        let text = std::fs::read_to_string(&path)?;
        let rel = path
            .strip_prefix(dir)
            .unwrap_or(&path)
            .with_extension("")
            .to_string_lossy()
            .replace('\\', "/");
        let mut doc = parse_conll(&text, &rel)?;
        match assign_genre(&doc.doc_id, map) {
            Ok(genre) => {
                doc.genre = Some(genre);
                docs.push(doc);
            }
            Err(_) => {
                eprintln!("warning: skipping {}: no genre mapping", doc.doc_id);
            }
        }
    }
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(doc: &str, idx: usize, form: &str, pos: &str, bit: &str, coref: &str) -> String {
        format!("{doc} 0 {idx} {form} {pos} {bit} - - - - * {coref}")
    }

    fn wrap(doc: &str, rows: &[String]) -> String {
        let mut s = format!("#begin document ({doc}); part 000\n");
        s.push_str(&rows.join("\n"));
        s.push_str("\n#end document\n");
        s
    }

    #[test]
    fn single_token_mention_from_open_close_bracket() {
        let doc = "x/y/z";
        let text = wrap(
            doc,
            &[
                row(doc, 0, "The", "DT", "(TOP(S(NP*", "-"),
                row(doc, 1, "city", "NN", "*)", "-"),
                row(doc, 2, "shines", "VBZ", "(VP*)", "(3)"),
                row(doc, 3, ".", ".", "*))", "-"),
            ],
        );
        let d = parse_conll(&text, doc).unwrap();
        assert_eq!(d.chains.len(), 1);
        let chain = &d.chains[0];
        assert_eq!(chain.entity_id, 3);
        assert_eq!(chain.mentions.len(), 1);
        assert_eq!(chain.mentions[0].span, (2, 2));
    }

    #[test]
    fn parse_bits_reconstruct_np_under_s() {
        let doc = "x/y/z";
        let text = wrap(
            doc,
            &[
                row(doc, 0, "the", "DT", "(TOP(S(NP*", "-"),
                row(doc, 1, "government", "NN", "*)", "-"),
                row(doc, 2, "voted", "VBD", "(VP*)", "-"),
                row(doc, 3, ".", ".", "*))", "-"),
            ],
        );
        let d = parse_conll(&text, doc).unwrap();
        let tree = &d.sentences[0].tree;
        assert_eq!(tree.label, "TOP");
        let s = &tree.children[0];
        assert_eq!(s.label, "S");
        let np = &s.children[0];
        assert_eq!(np.label, "NP");
        assert_eq!(np.span, (0, 1));
        assert!(np.children.iter().all(|c| c.is_leaf()));
    }

    #[test]
    fn no_coref_brackets_no_chains() {
        let doc = "x/y/z";
        let text = wrap(
            doc,
            &[
                row(doc, 0, "Rain", "NN", "(TOP(S(NP*)", "-"),
                row(doc, 1, "fell", "VBD", "(VP*)", "-"),
                row(doc, 2, ".", ".", "*))", "-"),
            ],
        );
        let d = parse_conll(&text, doc).unwrap();
        assert!(d.chains.is_empty());
        assert_eq!(d.token_count, 3);
    }

    #[test]
    fn unbalanced_parse_is_reported_with_line() {
        let doc = "x/y/z";
        let text = wrap(
            doc,
            &[
                row(doc, 0, "Rain", "NN", "(TOP(S(NP*)", "-"),
                row(doc, 1, "fell", "VBD", "(VP*", "-"),
                row(doc, 2, ".", ".", "*))", "-"),
            ],
        );
        match parse_conll(&text, doc) {
            Err(Error::MalformedParse { line, .. }) => assert!(line > 0),
            other => panic!("expected malformed-parse error, got {other:?}"),
        }
    }

    #[test]
    fn unbalanced_coref_names_entity_and_sentence() {
        let doc = "x/y/z";
        let text = wrap(
            doc,
            &[
                row(doc, 0, "Rain", "NN", "(TOP(S(NP*)", "(7"),
                row(doc, 1, "fell", "VBD", "(VP*)", "-"),
                row(doc, 2, ".", ".", "*))", "-"),
            ],
        );
        match parse_conll(&text, doc) {
            Err(Error::MalformedCoref {
                entity, sentence, ..
            }) => {
                assert_eq!(entity, 7);
                assert_eq!(sentence, 0);
            }
            other => panic!("expected malformed-coref error, got {other:?}"),
        }
    }

    #[test]
    fn short_rows_are_format_errors() {
        let doc = "x/y/z";
        let text = wrap(doc, &[format!("{doc} 0 0 Rain NN (TOP* -")]);
        assert!(matches!(parse_conll(&text, doc), Err(Error::Format { .. })));
    }

    #[test]
    fn genre_longest_prefix_wins() {
        let map = GenreMap::default_map();
        assert_eq!(
            assign_genre("nw/wsj/00/wsj_0001", &map).unwrap(),
            Genre::News
        );
        assert_eq!(
            assign_genre("pt/nt/40/40_matthew", &map).unwrap(),
            Genre::Bible
        );
        assert_eq!(
            assign_genre("nw/xinhua/00/chtb_0001", &map).unwrap(),
            Genre::Translations
        );
        assert!(matches!(
            assign_genre("zz/unknown/doc", &map),
            Err(Error::UnmappedDocument(_))
        ));
    }

    #[test]
    fn token_count_is_sum_of_sentence_lengths() {
        let doc = "x/y/z";
        let text = wrap(
            doc,
            &[
                row(doc, 0, "Rain", "NN", "(TOP(S(NP*)", "-"),
                row(doc, 1, "fell", "VBD", "(VP*)", "-"),
                row(doc, 2, ".", ".", "*))", "-"),
            ],
        );
        let d = parse_conll(&text, doc).unwrap();
        assert_eq!(
            d.token_count,
            d.sentences.iter().map(|s| s.tokens.len()).sum::<usize>()
        );
        let indices: Vec<usize> = d
            .sentences
            .iter()
            .flat_map(|s| s.tokens.iter().map(|t| t.index_in_document))
            .collect();
        assert!(indices.windows(2).all(|w| w[1] == w[0] + 1));
    }
}
