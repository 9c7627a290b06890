//! Lexical heads and per-mention grammatical function.
//!
//! Heads come from a percolation table over Penn Treebank labels. Verb
//! phrases percolate through embedded VPs, so auxiliaries and modals never
//! head their clause and the governor of a subject is the content verb.
//! The governor of a mention is the head of the first ancestor of the
//! mention head whose own head differs; the function label is read off the
//! local configuration (see [`governor_of`]).

use std::collections::HashMap;
use std::fmt;

use crate::conll::{ConstituentNode, Document, Mention, Sentence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

/// Ordered head-search passes per phrase label.
#[derive(Debug, Clone)]
pub struct HeadRuleTable {
    passes: HashMap<String, Vec<(Direction, Vec<String>)>>,
}

impl HeadRuleTable {
    /// `label<TAB>direction<TAB>priority,list` per line; repeated labels are
    /// ordered passes. An empty priority list takes the direction-most child.
    pub fn parse(text: &str) -> Result<Self> {
        let mut passes: HashMap<String, Vec<(Direction, Vec<String>)>> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 {
                return Err(Error::Format {
                    path: "head rules".into(),
                    line: i + 1,
                    detail: "expected `label<TAB>direction[<TAB>priorities]`".into(),
                });
            }
            let direction = match cols[1] {
                "left" => Direction::LeftToRight,
                "right" => Direction::RightToLeft,
                other => {
                    return Err(Error::Format {
                        path: "head rules".into(),
                        line: i + 1,
                        detail: format!("bad direction `{other}`"),
                    })
                }
            };
            let prios = cols
                .get(2)
                .map(|s| {
                    s.split(',')
                        .map(str::trim)
                        .filter(|p| !p.is_empty())
                        .map(str::to_string)
                        .collect()
                })
                .unwrap_or_default();
            passes
                .entry(cols[0].to_string())
                .or_default()
                .push((direction, prios));
        }
        Ok(HeadRuleTable { passes })
    }

    pub fn default_table() -> Self {
        Self::parse(include_str!("../../../resources/lexicons/head_rules.tsv"))
            .expect("bundled head rules are well-formed")
    }
}

/// Within-sentence index of the lexical head of `node`.
pub fn find_head(node: &ConstituentNode, rules: &HeadRuleTable) -> usize {
    if node.is_leaf() {
        return node.span.0;
    }
    find_head(choose_head_child(node, rules), rules)
}

fn choose_head_child<'a>(node: &'a ConstituentNode, rules: &HeadRuleTable) -> &'a ConstituentNode {
    let children = &node.children;
    if let Some(passes) = rules.passes.get(node.base_label()) {
        for (direction, prios) in passes {
            let scan: Box<dyn Iterator<Item = &ConstituentNode>> = match direction {
                Direction::LeftToRight => Box::new(children.iter()),
                Direction::RightToLeft => Box::new(children.iter().rev()),
            };
            if prios.is_empty() {
                if let Some(c) = scan.into_iter().next() {
                    return c;
                }
                continue;
            }
            for prio in prios {
                let found = match direction {
                    Direction::LeftToRight => children.iter().find(|c| c.base_label() == prio),
                    Direction::RightToLeft => {
                        children.iter().rev().find(|c| c.base_label() == prio)
                    }
                };
                if let Some(c) = found {
                    return c;
                }
            }
        }
    }
    // default: rightmost child
    children.last().expect("internal node has children")
}

/// Fill `head_token` for every tree node and mention of the document.
pub fn annotate_heads(doc: &mut Document, rules: &HeadRuleTable) {
    for sent in &mut doc.sentences {
        fill_heads(&mut sent.tree, rules);
    }
    for chain in &mut doc.chains {
        for mention in &mut chain.mentions {
            let sent = &doc.sentences[mention.sentence_index];
            mention.head_token = Some(head_of_span(&sent.tree, sent, mention.span, rules));
        }
    }
}

fn fill_heads(node: &mut ConstituentNode, rules: &HeadRuleTable) {
    for c in &mut node.children {
        fill_heads(c, rules);
    }
    node.head_token = Some(find_head(node, rules));
}

/// Head of an arbitrary span: the exact-span constituent when one exists,
/// otherwise the covering node's head if inside the span, otherwise the
/// rightmost noun-tagged token of the span.
pub fn head_of_span(
    tree: &ConstituentNode,
    sent: &Sentence,
    span: (usize, usize),
    rules: &HeadRuleTable,
) -> usize {
    if let Some(node) = find_exact(tree, span) {
        return node.head_token.unwrap_or_else(|| find_head(node, rules));
    }
    let mut cover = tree;
    while let Some(c) = cover
        .children
        .iter()
        .find(|c| c.span.0 <= span.0 && span.1 <= c.span.1)
    {
        cover = c;
    }
    let h = cover.head_token.unwrap_or_else(|| find_head(cover, rules));
    if span.0 <= h && h <= span.1 {
        return h;
    }
    (span.0..=span.1)
        .rev()
        .find(|&i| sent.tokens[i].pos.starts_with("NN"))
        .unwrap_or(span.1)
}

fn find_exact(node: &ConstituentNode, span: (usize, usize)) -> Option<&ConstituentNode> {
    if node.span == span {
        return Some(node);
    }
    node.children
        .iter()
        .filter(|c| c.span.0 <= span.0 && span.1 <= c.span.1)
        .find_map(|c| find_exact(c, span))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FineFunction {
    Nsubj,
    Nsubjpass,
    Dobj,
    Iobj,
    Poss,
    Pobj,
    Csubj,
    Ccomp,
    Advcl,
    Conj,
    Appos,
    Other,
    Root,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoarseFunction {
    Subj,
    Obj,
    Poss,
    Clausal,
    Other,
    Root,
}

impl FineFunction {
    pub fn coarse(self) -> CoarseFunction {
        use FineFunction::*;
        match self {
            Nsubj | Nsubjpass | Csubj => CoarseFunction::Subj,
            Dobj | Iobj | Pobj => CoarseFunction::Obj,
            Poss => CoarseFunction::Poss,
            Ccomp | Advcl => CoarseFunction::Clausal,
            Root => CoarseFunction::Root,
            Conj | Appos | Other => CoarseFunction::Other,
        }
    }

    pub fn as_str(self) -> &'static str {
        use FineFunction::*;
        match self {
            Nsubj => "nsubj",
            Nsubjpass => "nsubjpass",
            Dobj => "dobj",
            Iobj => "iobj",
            Poss => "poss",
            Pobj => "pobj",
            Csubj => "csubj",
            Ccomp => "ccomp",
            Advcl => "advcl",
            Conj => "conj",
            Appos => "appos",
            Other => "other",
            Root => "root",
        }
    }
}

impl CoarseFunction {
    pub fn as_str(self) -> &'static str {
        match self {
            CoarseFunction::Subj => "subj",
            CoarseFunction::Obj => "obj",
            CoarseFunction::Poss => "poss",
            CoarseFunction::Clausal => "clausal",
            CoarseFunction::Other => "other",
            CoarseFunction::Root => "root",
        }
    }
}

impl fmt::Display for FineFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for CoarseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GovernorInfo {
    /// Within-sentence index of the governing token; `None` at the root.
    pub governor_token: Option<usize>,
    /// POS of the governor, `NONE` at the root.
    pub governor_pos: String,
    pub function_fine: FineFunction,
    pub function_coarse: CoarseFunction,
}

impl GovernorInfo {
    fn root() -> Self {
        GovernorInfo {
            governor_token: None,
            governor_pos: "NONE".into(),
            function_fine: FineFunction::Root,
            function_coarse: CoarseFunction::Root,
        }
    }
}

/// `VBP`/`VBZ` collapse to `VBpres`; every other tag is unchanged. Applied to
/// the anaphor's governor POS only.
pub fn collapse_pos(tag: &str) -> String {
    match tag {
        "VBP" | "VBZ" => "VBpres".to_string(),
        other => other.to_string(),
    }
}

const BE_FORMS: [&str; 11] = [
    "be", "is", "are", "was", "were", "been", "being", "am", "'s", "'re", "'m",
];
const GET_FORMS: [&str; 5] = ["get", "gets", "got", "gotten", "getting"];

fn is_aux_passive(tok_form: &str, tok_lemma: &str) -> bool {
    let f = tok_form.to_lowercase();
    let l = tok_lemma.to_lowercase();
    BE_FORMS.contains(&f.as_str())
        || BE_FORMS.contains(&l.as_str())
        || GET_FORMS.contains(&f.as_str())
        || GET_FORMS.contains(&l.as_str())
}

fn is_copula(tok_form: &str, tok_lemma: &str) -> bool {
    let f = tok_form.to_lowercase();
    let l = tok_lemma.to_lowercase();
    l == "be" || BE_FORMS.contains(&f.as_str())
}

const ADVCL_MARKERS: [&str; 16] = [
    "because", "if", "although", "though", "while", "since", "when", "after", "before", "unless",
    "until", "as", "once", "whereas", "so", "whenever",
];

fn is_clause(label: &str) -> bool {
    matches!(label, "S" | "SINV" | "SQ" | "SBARQ")
}

fn is_nominal(label: &str) -> bool {
    matches!(label, "NP" | "NML" | "NX" | "WHNP" | "QP")
}

/// Governing token, POS and grammatical function for a mention.
pub fn governor_of(
    mention: &Mention,
    doc: &Document,
    rules: &HeadRuleTable,
) -> Result<GovernorInfo> {
    let sent = &doc.sentences[mention.sentence_index];
    let head = mention.head_token.ok_or_else(|| {
        Error::Invalid("mention head not computed; run annotate_heads first".into())
    })?;

    // Path from the root to the head's leaf.
    let mut path: Vec<&ConstituentNode> = Vec::new();
    let mut node = &sent.tree;
    loop {
        path.push(node);
        if node.is_leaf() {
            break;
        }
        node = node
            .children
            .iter()
            .find(|c| c.span.0 <= head && head <= c.span.1)
            .ok_or_else(|| Error::Invalid("tree spans do not partition parent".into()))?;
    }
    let head_of = |n: &ConstituentNode| n.head_token.unwrap_or_else(|| find_head(n, rules));

    // Maximal projection: deepest path position whose every descendant-side
    // parent shares the mention head.
    let mut m_idx = path.len() - 1;
    while m_idx > 0 && head_of(path[m_idx - 1]) == head {
        m_idx -= 1;
    }
    if m_idx == 0 {
        return Ok(GovernorInfo::root());
    }
    let projection = path[m_idx];
    let parent = path[m_idx - 1];
    let governor = head_of(parent);
    let gov_pos = sent.tokens[governor].pos.clone();

    let fine = classify(mention, projection, parent, governor, sent)?;
    if let ClassifiedAs::Plain(fine) = fine {
        return Ok(GovernorInfo {
            governor_token: Some(governor),
            governor_pos: gov_pos,
            function_fine: fine,
            function_coarse: fine.coarse(),
        });
    }
    // Copular lift: the mention is a predicate nominal, so it heads its
    // clause in dependency terms; the governor is whatever governs the clause.
    let ClassifiedAs::PredicateNominal = fine else {
        unreachable!()
    };
    lift_predicate_nominal(&path[..m_idx], head_of, sent)
}

enum ClassifiedAs {
    Plain(FineFunction),
    PredicateNominal,
}

fn classify(
    mention: &Mention,
    projection: &ConstituentNode,
    parent: &ConstituentNode,
    governor: usize,
    sent: &Sentence,
) -> Result<ClassifiedAs> {
    use FineFunction::*;
    let span = mention.span;
    let last_tok = &sent.tokens[span.1];
    let single_possessive =
        span.0 == span.1 && matches!(sent.tokens[span.0].pos.as_str(), "PRP$" | "WP$");
    let possessive_marked = last_tok.pos == "POS";
    let parent_label = parent.base_label();

    if (single_possessive || possessive_marked) && is_nominal(parent_label) {
        return Ok(ClassifiedAs::Plain(Poss));
    }
    if parent_label == "PP" {
        return Ok(ClassifiedAs::Plain(Pobj));
    }

    // position of the projection and of the parent's head child
    let proj_idx = parent
        .children
        .iter()
        .position(|c| std::ptr::eq(c, projection))
        .ok_or_else(|| Error::Invalid("projection not a child of its parent".into()))?;
    let head_child_idx = parent
        .children
        .iter()
        .position(|c| c.span.0 <= governor && governor <= c.span.1)
        .unwrap_or(proj_idx);
    if head_child_idx < proj_idx {
        let between = &parent.children[head_child_idx + 1..proj_idx];
        if between.iter().any(|c| c.base_label() == "CC") {
            return Ok(ClassifiedAs::Plain(Conj));
        }
        if is_nominal(parent_label)
            && is_nominal(projection.base_label())
            && between.iter().any(|c| c.label == ",")
        {
            return Ok(ClassifiedAs::Plain(Appos));
        }
    }

    if is_clause(parent_label) {
        if span.1 < governor {
            let gov_tok = &sent.tokens[governor];
            let passive = gov_tok.pos == "VBN"
                && sent.tokens[span.1 + 1..governor]
                    .iter()
                    .any(|t| is_aux_passive(&t.form, &t.lemma));
            return Ok(ClassifiedAs::Plain(if passive { Nsubjpass } else { Nsubj }));
        }
        if parent_label == "SINV" {
            return Ok(ClassifiedAs::Plain(Nsubj));
        }
        return Ok(ClassifiedAs::Plain(Other));
    }

    if parent_label == "VP" && governor < span.0 {
        let gov_tok = &sent.tokens[governor];
        if is_copula(&gov_tok.form, &gov_tok.lemma) && is_nominal(projection.base_label()) {
            return Ok(ClassifiedAs::PredicateNominal);
        }
        // argument NPs following the verb, skipping function-tagged adverbials
        let arg_nps: Vec<usize> = parent
            .children
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                *i > head_child_idx && is_nominal(c.base_label()) && c.label == c.base_label()
            })
            .map(|(i, _)| i)
            .collect();
        if arg_nps.len() >= 2 && arg_nps.first() == Some(&proj_idx) {
            return Ok(ClassifiedAs::Plain(Iobj));
        }
        return Ok(ClassifiedAs::Plain(Dobj));
    }

    Ok(ClassifiedAs::Plain(Other))
}

/// Resolve the function of a predicate-nominal mention: it stands for its
/// copular clause, so the governor is the head of the first ancestor above
/// that clause with a different head, and the label reflects how the clause
/// embeds (`ccomp`, `advcl`, `csubj`, or `root`).
fn lift_predicate_nominal(
    ancestors: &[&ConstituentNode],
    head_of: impl Fn(&ConstituentNode) -> usize,
    sent: &Sentence,
) -> Result<GovernorInfo> {
    use FineFunction::*;
    // deepest clause node among the ancestors (the copular clause)
    let clause_pos = match ancestors.iter().rposition(|n| is_clause(n.base_label())) {
        Some(p) => p,
        None => return Ok(GovernorInfo::root()),
    };
    let clause_head = head_of(ancestors[clause_pos]);
    let mut advcl_marked = false;
    let mut idx = clause_pos;
    while idx > 0 {
        idx -= 1;
        let node = ancestors[idx];
        if node.base_label() == "SBAR" {
            let marker = node.children.iter().find(|c| c.base_label() == "IN");
            if let Some(m) = marker {
                let form = sent.tokens[m.span.0].form.to_lowercase();
                if ADVCL_MARKERS.contains(&form.as_str()) {
                    advcl_marked = true;
                }
            }
        }
        let h = head_of(node);
        if h != clause_head {
            let fine = if advcl_marked {
                Advcl
            } else if is_clause(node.base_label()) {
                // the copular clause (or its SBAR wrapper) sits in subject position
                let wrapped_end = ancestors[idx + 1].span.1;
                if wrapped_end < h {
                    Csubj
                } else {
                    Ccomp
                }
            } else {
                Ccomp
            };
            return Ok(GovernorInfo {
                governor_token: Some(h),
                governor_pos: sent.tokens[h].pos.clone(),
                function_fine: fine,
                function_coarse: fine.coarse(),
            });
        }
    }
    Ok(GovernorInfo::root())
}
