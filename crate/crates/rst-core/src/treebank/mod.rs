//! Domain model for RST discourse trees: tokens, EDUs, binary trees with
//! nuclearity and relation labels, serialization to the rs3 and bracketed
//! formats, structural validation, and corpus statistics.

mod bracketed;
mod relations;
mod rs3;

pub use bracketed::{read_bracketed, write_bracketed};
pub use relations::{RelationAliases, RelationClass, RelationLabel, RelationVariant};
pub use rs3::{read_rs3, write_rs3};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type EduId = u32;

/// Dependency head of a token: either the syntactic root or another token,
/// addressed by 0-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Head {
    Root,
    Index(usize),
}

/// A surface token with its morphosyntactic annotation. `pos`, `deprel`,
/// `head` and `cluster` stay unset until an external annotation is aligned
/// onto the document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 0-based position within the document.
    pub index: usize,
    pub surface: String,
    #[serde(default)]
    pub pos: Option<String>,
    #[serde(default)]
    pub deprel: Option<String>,
    #[serde(default)]
    pub head: Option<Head>,
    /// Brown-cluster bit-string, when a cluster table has been attached.
    #[serde(default)]
    pub cluster: Option<String>,
}

impl Token {
    pub fn new(index: usize, surface: impl Into<String>) -> Self {
        Token {
            index,
            surface: surface.into(),
            pos: None,
            deprel: None,
            head: None,
            cluster: None,
        }
    }
}

/// An elementary discourse unit: a contiguous, inclusive token span.
/// EDU ids are 1-based and dense; EDU k+1 starts right after EDU k ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edu {
    pub id: EduId,
    pub start: usize,
    pub end: usize,
    pub text: String,
}

impl Edu {
    pub fn token_count(&self) -> usize {
        self.end - self.start + 1
    }
}

/// Nuclearity pattern of an internal node: left nucleus, right nucleus, or
/// multinuclear.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Nuclearity {
    NS,
    SN,
    NN,
}

impl fmt::Display for Nuclearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nuclearity::NS => write!(f, "NS"),
            Nuclearity::SN => write!(f, "SN"),
            Nuclearity::NN => write!(f, "NN"),
        }
    }
}

impl std::str::FromStr for Nuclearity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NS" => Ok(Nuclearity::NS),
            "SN" => Ok(Nuclearity::SN),
            "NN" => Ok(Nuclearity::NN),
            other => Err(format!("unknown nuclearity `{other}`")),
        }
    }
}

/// Inclusive range of EDU ids covered by a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EduRange {
    pub first: EduId,
    pub last: EduId,
}

impl fmt::Display for EduRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.first, self.last)
    }
}

/// An RST discourse tree. Internal nodes are canonically binary; a child
/// vector longer than two can only come from a not-yet-binarized n-ary
/// multinuclear rs3 group and is rejected by [`validate`] until
/// [`binarize`] has run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RstTree {
    Leaf(Edu),
    Internal {
        nuclearity: Nuclearity,
        relation: RelationLabel,
        children: Vec<RstTree>,
    },
}

impl RstTree {
    pub fn leaf(edu: Edu) -> Self {
        RstTree::Leaf(edu)
    }

    /// Binary internal node. `left` must end right before `right` starts.
    pub fn internal(
        nuclearity: Nuclearity,
        relation: RelationLabel,
        left: RstTree,
        right: RstTree,
    ) -> Self {
        RstTree::Internal {
            nuclearity,
            relation,
            children: vec![left, right],
        }
    }

    /// N-ary multinuclear node as produced by the rs3 reader.
    pub fn nary(relation: RelationLabel, children: Vec<RstTree>) -> Self {
        RstTree::Internal {
            nuclearity: Nuclearity::NN,
            relation,
            children,
        }
    }

    pub fn span(&self) -> EduRange {
        match self {
            RstTree::Leaf(edu) => EduRange {
                first: edu.id,
                last: edu.id,
            },
            RstTree::Internal { children, .. } => EduRange {
                first: children.first().expect("internal node has children").span().first,
                last: children.last().expect("internal node has children").span().last,
            },
        }
    }

    pub fn leaves(&self) -> Vec<&Edu> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Edu>) {
        match self {
            RstTree::Leaf(edu) => out.push(edu),
            RstTree::Internal { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            RstTree::Leaf(_) => 0,
            RstTree::Internal { children, .. } => {
                1 + children.iter().map(|c| c.internal_count()).sum::<usize>()
            }
        }
    }

    pub fn is_binary(&self) -> bool {
        match self {
            RstTree::Leaf(_) => true,
            RstTree::Internal { children, .. } => {
                children.len() == 2 && children.iter().all(|c| c.is_binary())
            }
        }
    }

    /// Left child of a binary internal node.
    pub fn left(&self) -> Option<&RstTree> {
        match self {
            RstTree::Internal { children, .. } if children.len() == 2 => Some(&children[0]),
            _ => None,
        }
    }

    /// Right child of a binary internal node.
    pub fn right(&self) -> Option<&RstTree> {
        match self {
            RstTree::Internal { children, .. } if children.len() == 2 => Some(&children[1]),
            _ => None,
        }
    }
}

/// Origin of a corpus document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    Etemad,
    Shargh,
    Meidan,
    Other,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Etemad => write!(f, "Etemad"),
            Source::Shargh => write!(f, "Shargh"),
            Source::Meidan => write!(f, "Meidan"),
            Source::Other => write!(f, "Other"),
        }
    }
}

impl Source {
    /// Infer the source from a document id prefix; anything unrecognized is
    /// `Other`.
    pub fn from_doc_id(doc_id: &str) -> Source {
        let lower = doc_id.to_lowercase();
        if lower.starts_with("etemad") {
            Source::Etemad
        } else if lower.starts_with("shargh") {
            Source::Shargh
        } else if lower.starts_with("meidan") {
            Source::Meidan
        } else {
            Source::Other
        }
    }
}

/// A corpus document: tokens, the EDU partition over them, and, when
/// annotated, the discourse tree whose leaves enumerate the EDUs in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub source: Source,
    pub tokens: Vec<Token>,
    pub edus: Vec<Edu>,
    pub tree: Option<RstTree>,
}

impl Document {
    /// Build a document from whitespace-tokenized EDU texts. Token spans and
    /// EDU ids are derived; no tree is attached.
    pub fn from_edu_texts(doc_id: impl Into<String>, edu_texts: &[&str]) -> Document {
        let doc_id = doc_id.into();
        let source = Source::from_doc_id(&doc_id);
        let mut tokens = Vec::new();
        let mut edus = Vec::new();
        for (i, text) in edu_texts.iter().enumerate() {
            let start = tokens.len();
            for surf in text.split_whitespace() {
                tokens.push(Token::new(tokens.len(), surf));
            }
            let end = tokens.len().saturating_sub(1);
            edus.push(Edu {
                id: (i + 1) as EduId,
                start,
                end,
                text: text.split_whitespace().collect::<Vec<_>>().join(" "),
            });
        }
        Document {
            doc_id,
            source,
            tokens,
            edus,
            tree: None,
        }
    }

    /// Check the EDU partition invariants: dense 1-based ids, contiguous
    /// non-overlapping spans covering exactly the token range.
    pub fn check_edu_partition(&self) -> Result<(), TreebankError> {
        let mut expected_start = 0usize;
        for (i, edu) in self.edus.iter().enumerate() {
            if edu.id as usize != i + 1 {
                return Err(TreebankError::BadEduPartition {
                    doc_id: self.doc_id.clone(),
                    detail: format!("EDU at position {i} has id {}", edu.id),
                });
            }
            if edu.start != expected_start || edu.end < edu.start {
                return Err(TreebankError::BadEduPartition {
                    doc_id: self.doc_id.clone(),
                    detail: format!("EDU {} spans [{},{}]", edu.id, edu.start, edu.end),
                });
            }
            expected_start = edu.end + 1;
        }
        if !self.edus.is_empty() && expected_start != self.tokens.len() {
            return Err(TreebankError::BadEduPartition {
                doc_id: self.doc_id.clone(),
                detail: format!(
                    "EDUs cover {} tokens but document has {}",
                    expected_start,
                    self.tokens.len()
                ),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum TreebankError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("node {child} points at undeclared parent {parent}")]
    DanglingParent { child: String, parent: String },
    #[error("multiple root nodes: {0:?}")]
    MultipleRoots(Vec<String>),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("document `{0}` has no tree")]
    MissingTree(String),
    #[error("parse error at offset {offset}: {message}")]
    ParseError { offset: usize, message: String },
    #[error("mononuclear node over {span} has {arity} children")]
    NonBinaryMononuclear { span: EduRange, arity: usize },
    #[error("bad EDU partition in `{doc_id}`: {detail}")]
    BadEduPartition { doc_id: String, detail: String },
}

/// Deviation from the treebank's structural contract, as reported by
/// [`validate`]. Violations are collected, never thrown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonBinaryNode { span: EduRange, arity: usize },
    /// The (nuclearity, relation) pair is absent from the legality table.
    IllegalNuclearityForRelation {
        span: EduRange,
        nuclearity: Nuclearity,
        relation: RelationLabel,
    },
    /// `Span` is a serialization placeholder, never a node relation.
    SpanRelationOnInternal { span: EduRange },
    /// NN node with a mononuclear label, or NS/SN with a multinuclear one.
    VariantMismatch {
        span: EduRange,
        nuclearity: Nuclearity,
        relation: RelationLabel,
    },
    /// Adjacent children do not cover adjacent EDU ranges.
    NonContiguousChildren { span: EduRange },
}

/// Set of (nuclearity, relation) pairs a parser may predict. Learned from
/// gold trees by `parser::learn_legal_pairs` or supplied by hand.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegalityTable {
    pairs: std::collections::BTreeSet<(Nuclearity, RelationLabel)>,
}

impl LegalityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, nuclearity: Nuclearity, relation: RelationLabel) {
        self.pairs.insert((nuclearity, relation));
    }

    pub fn contains(&self, nuclearity: Nuclearity, relation: &RelationLabel) -> bool {
        self.pairs.contains(&(nuclearity, relation.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Nuclearity, RelationLabel)> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Every (direction, relation) pair expressible in the relation
    /// inventory. Used by generators and as a permissive default.
    pub fn full_inventory() -> Self {
        let mut table = LegalityTable::new();
        for class in RelationClass::all() {
            if class == RelationClass::Span {
                continue;
            }
            if class.supports(RelationVariant::Mono) {
                let label = RelationLabel::mono(class);
                table.insert(Nuclearity::NS, label.clone());
                table.insert(Nuclearity::SN, label);
            }
            if class.supports(RelationVariant::Multi) {
                table.insert(Nuclearity::NN, RelationLabel::multi(class));
            }
        }
        table
    }
}

/// Validate a tree against the annotation guideline: binary arity, child
/// contiguity, variant agreement, no `Span` node labels, and membership in
/// the legality table when one is supplied.
pub fn validate(tree: &RstTree, legality: Option<&LegalityTable>) -> Vec<Violation> {
    let mut violations = Vec::new();
    walk_validate(tree, legality, &mut violations);
    violations
}

fn walk_validate(tree: &RstTree, legality: Option<&LegalityTable>, out: &mut Vec<Violation>) {
    let RstTree::Internal {
        nuclearity,
        relation,
        children,
    } = tree
    else {
        return;
    };
    let span = tree.span();
    if children.len() != 2 {
        out.push(Violation::NonBinaryNode {
            span,
            arity: children.len(),
        });
    }
    for pair in children.windows(2) {
        if pair[0].span().last + 1 != pair[1].span().first {
            out.push(Violation::NonContiguousChildren { span });
        }
    }
    if relation.class == RelationClass::Span {
        out.push(Violation::SpanRelationOnInternal { span });
    } else {
        let expected = match nuclearity {
            Nuclearity::NN => RelationVariant::Multi,
            _ => RelationVariant::Mono,
        };
        if relation.variant != expected {
            out.push(Violation::VariantMismatch {
                span,
                nuclearity: *nuclearity,
                relation: relation.clone(),
            });
        } else if let Some(table) = legality {
            if !table.contains(*nuclearity, relation) {
                out.push(Violation::IllegalNuclearityForRelation {
                    span,
                    nuclearity: *nuclearity,
                    relation: relation.clone(),
                });
            }
        }
    }
    for c in children {
        walk_validate(c, legality, out);
    }
}

/// Expand n-ary multinuclear nodes into right-branching binary chains; each
/// introduced node carries the original NN relation. Already-binary trees
/// come back unchanged. N-ary mononuclear nodes are a guideline violation
/// and an error.
pub fn binarize(tree: RstTree) -> Result<RstTree, TreebankError> {
    match tree {
        RstTree::Leaf(edu) => Ok(RstTree::Leaf(edu)),
        RstTree::Internal {
            nuclearity,
            relation,
            children,
        } => {
            let span = EduRange {
                first: children.first().map(|c| c.span().first).unwrap_or(0),
                last: children.last().map(|c| c.span().last).unwrap_or(0),
            };
            let arity = children.len();
            let mut kids = children
                .into_iter()
                .map(binarize)
                .collect::<Result<Vec<_>, _>>()?;
            if arity < 2 {
                return Err(TreebankError::NonBinaryMononuclear { span, arity });
            }
            if arity > 2 && nuclearity != Nuclearity::NN {
                return Err(TreebankError::NonBinaryMononuclear { span, arity });
            }
            let mut node = kids.pop().expect("arity >= 2");
            while let Some(left) = kids.pop() {
                node = RstTree::internal(Nuclearity::NN, relation.clone(), left, node);
            }
            if arity == 2 {
                // preserve the original nuclearity/relation of plain binary nodes
                if let RstTree::Internal {
                    nuclearity: n,
                    relation: r,
                    ..
                } = &mut node
                {
                    *n = nuclearity;
                    *r = relation;
                }
            }
            Ok(node)
        }
    }
}

/// Aggregate counts over a set of annotated documents.
///
/// Nucleus/satellite counts count node sides: each NS/SN node contributes
/// one nucleus and one satellite, each NN node two nuclei. The relation
/// histogram follows the same side convention: a mononuclear attachment
/// contributes one `Span` count for the nucleus side and one relation count
/// for the satellite side; a multinuclear node contributes its relation
/// twice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub documents: usize,
    pub avg_words_per_doc: f64,
    pub edu_count: usize,
    /// Internal-node count.
    pub span_count: usize,
    pub nucleus_count: usize,
    pub satellite_count: usize,
    /// Attachment-side counts and percentages, keyed by labeled relation.
    pub relation_histogram: BTreeMap<RelationLabel, (u64, f64)>,
}

impl CorpusStats {
    /// Histogram with mononuclear and multinuclear variants of the same
    /// class merged into one line.
    pub fn merged_histogram(&self) -> BTreeMap<RelationClass, (u64, f64)> {
        let mut merged: BTreeMap<RelationClass, (u64, f64)> = BTreeMap::new();
        for (label, (count, pct)) in &self.relation_histogram {
            let entry = merged.entry(label.class).or_insert((0, 0.0));
            entry.0 += count;
            entry.1 += pct;
        }
        merged
    }
}

pub fn corpus_stats(docs: &[Document]) -> Result<CorpusStats, TreebankError> {
    let mut stats = CorpusStats {
        documents: docs.len(),
        avg_words_per_doc: 0.0,
        edu_count: 0,
        span_count: 0,
        nucleus_count: 0,
        satellite_count: 0,
        relation_histogram: BTreeMap::new(),
    };
    let mut total_words = 0usize;
    for doc in docs {
        let tree = doc
            .tree
            .as_ref()
            .ok_or_else(|| TreebankError::MissingTree(doc.doc_id.clone()))?;
        total_words += doc.tokens.len();
        stats.edu_count += doc.edus.len();
        tally_tree(tree, &mut stats);
    }
    if !docs.is_empty() {
        stats.avg_words_per_doc = total_words as f64 / docs.len() as f64;
    }
    let total_sides: u64 = stats.relation_histogram.values().map(|(c, _)| *c).sum();
    if total_sides > 0 {
        for (count, pct) in stats.relation_histogram.values_mut() {
            *pct = *count as f64 * 100.0 / total_sides as f64;
        }
    }
    Ok(stats)
}

fn tally_tree(tree: &RstTree, stats: &mut CorpusStats) {
    let RstTree::Internal {
        nuclearity,
        relation,
        children,
    } = tree
    else {
        return;
    };
    stats.span_count += 1;
    let mut bump = |label: RelationLabel| {
        stats.relation_histogram.entry(label).or_insert((0, 0.0)).0 += 1;
    };
    match nuclearity {
        Nuclearity::NN => {
            stats.nucleus_count += children.len();
            for _ in children {
                bump(relation.clone());
            }
        }
        _ => {
            stats.nucleus_count += 1;
            stats.satellite_count += 1;
            bump(RelationLabel::mono(RelationClass::Span));
            bump(relation.clone());
        }
    }
    for c in children {
        tally_tree(c, stats);
    }
}
