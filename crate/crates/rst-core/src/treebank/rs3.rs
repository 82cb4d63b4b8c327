//! Reader and writer for the rs3 XML corpus format.
//!
//! A file declares its relation inventory in the header, then a body of
//! `<segment>` leaves and `<group>` nodes. A satellite attaches to its
//! nucleus node with a mononuclear relname; the nucleus attaches to a
//! covering `span` group with `relname="span"`; multinuclear units attach
//! to a `multinuc` group sharing one relname. N-ary multinuclear groups
//! are kept n-ary here and split by [`super::binarize`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{
    Document, Edu, EduId, Nuclearity, RelationAliases, RelationClass, RelationLabel,
    RelationVariant, RstTree, Source, Token, TreebankError,
};

pub fn read_rs3(xml: &str) -> Result<Document, TreebankError> {
    read_rs3_with(xml, &RelationAliases::default())
}

pub fn read_rs3_with(xml: &str, aliases: &RelationAliases) -> Result<Document, TreebankError> {
    let parsed = roxmltree::Document::parse(xml)
        .map_err(|e| TreebankError::MalformedXml(e.to_string()))?;
    let root = parsed.root_element();
    if root.tag_name().name() != "rst" {
        return Err(TreebankError::MalformedXml(format!(
            "expected <rst> root, found <{}>",
            root.tag_name().name()
        )));
    }

    // header: relname -> declared types
    let mut declared: BTreeMap<String, Vec<RelType>> = BTreeMap::new();
    for rel in root
        .descendants()
        .filter(|n| n.has_tag_name("rel"))
    {
        let name = rel
            .attribute("name")
            .ok_or_else(|| TreebankError::MalformedXml("<rel> without name".into()))?;
        let ty = match rel.attribute("type") {
            Some("rst") | None => RelType::Rst,
            Some("multinuc") => RelType::Multinuc,
            Some(other) => {
                return Err(TreebankError::MalformedXml(format!(
                    "unknown relation type `{other}`"
                )))
            }
        };
        declared
            .entry(super::relations::normalize_relation_name(name))
            .or_default()
            .push(ty);
    }

    let body = root
        .descendants()
        .find(|n| n.has_tag_name("body"))
        .ok_or_else(|| TreebankError::MalformedXml("missing <body>".into()))?;

    let mut nodes: BTreeMap<u32, Node> = BTreeMap::new();
    for child in body.children().filter(|n| n.is_element()) {
        let tag = child.tag_name().name();
        if tag != "segment" && tag != "group" {
            continue;
        }
        let id = parse_id(child.attribute("id"), "id")?;
        let parent = match child.attribute("parent") {
            Some(p) => Some(parse_id(Some(p), "parent")?),
            None => None,
        };
        let relname = child.attribute("relname").map(|s| s.to_string());
        let kind = if tag == "segment" {
            let text = child.text().unwrap_or("").trim().to_string();
            NodeKind::Segment { text }
        } else {
            match child.attribute("type") {
                Some("span") => NodeKind::SpanGroup,
                Some("multinuc") => NodeKind::MultinucGroup,
                other => {
                    return Err(TreebankError::MalformedXml(format!(
                        "group {id} has type {other:?}, expected span or multinuc"
                    )))
                }
            }
        };
        if nodes
            .insert(
                id,
                Node {
                    id,
                    parent,
                    relname,
                    kind,
                },
            )
            .is_some()
        {
            return Err(TreebankError::MalformedXml(format!("duplicate id {id}")));
        }
    }

    for node in nodes.values() {
        if let Some(p) = node.parent {
            if !nodes.contains_key(&p) {
                return Err(TreebankError::DanglingParent {
                    child: node.id.to_string(),
                    parent: p.to_string(),
                });
            }
        }
    }

    // EDUs in segment-id order; tokens re-derived by whitespace split
    let mut tokens: Vec<Token> = Vec::new();
    let mut edus: Vec<Edu> = Vec::new();
    let mut edu_of_segment: BTreeMap<u32, EduId> = BTreeMap::new();
    for node in nodes.values() {
        let NodeKind::Segment { text } = &node.kind else {
            continue;
        };
        let words: Vec<&str> = text.split_whitespace().collect();
        if words.is_empty() {
            return Err(TreebankError::MalformedXml(format!(
                "segment {} has no tokens",
                node.id
            )));
        }
        let start = tokens.len();
        for w in &words {
            tokens.push(Token::new(tokens.len(), *w));
        }
        let id = (edus.len() + 1) as EduId;
        edus.push(Edu {
            id,
            start,
            end: tokens.len() - 1,
            text: words.join(" "),
        });
        edu_of_segment.insert(node.id, id);
    }
    if edus.is_empty() {
        return Err(TreebankError::MalformedXml("no segments".into()));
    }

    let roots: Vec<u32> = nodes
        .values()
        .filter(|n| n.parent.is_none())
        .map(|n| n.id)
        .collect();
    let any_structure = nodes.values().any(|n| n.parent.is_some())
        || nodes.values().any(|n| !matches!(n.kind, NodeKind::Segment { .. }));

    let tree = if roots.len() == 1 && (any_structure || edus.len() == 1) {
        let builder = TreeBuilder {
            nodes: &nodes,
            declared: &declared,
            aliases,
            edu_of_segment: &edu_of_segment,
            edus: &edus,
        };
        let mut visiting = std::collections::BTreeSet::new();
        Some(builder.build(roots[0], &mut visiting)?)
    } else if !any_structure {
        None
    } else if roots.is_empty() {
        return Err(TreebankError::MalformedXml(
            "no root node (parent cycle?)".into(),
        ));
    } else {
        return Err(TreebankError::MultipleRoots(
            roots.iter().map(|r| r.to_string()).collect(),
        ));
    };

    Ok(Document {
        doc_id: String::new(),
        source: Source::Other,
        tokens,
        edus,
        tree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RelType {
    Rst,
    Multinuc,
}

#[derive(Debug)]
enum NodeKind {
    Segment { text: String },
    SpanGroup,
    MultinucGroup,
}

#[derive(Debug)]
struct Node {
    id: u32,
    parent: Option<u32>,
    relname: Option<String>,
    kind: NodeKind,
}

fn parse_id(attr: Option<&str>, what: &str) -> Result<u32, TreebankError> {
    let raw = attr
        .ok_or_else(|| TreebankError::MalformedXml(format!("missing {what} attribute")))?;
    raw.parse()
        .map_err(|_| TreebankError::MalformedXml(format!("non-numeric {what} `{raw}`")))
}

struct TreeBuilder<'a> {
    nodes: &'a BTreeMap<u32, Node>,
    declared: &'a BTreeMap<String, Vec<RelType>>,
    aliases: &'a RelationAliases,
    edu_of_segment: &'a BTreeMap<u32, EduId>,
    edus: &'a [Edu],
}

impl<'a> TreeBuilder<'a> {
    fn build(
        &self,
        id: u32,
        visiting: &mut std::collections::BTreeSet<u32>,
    ) -> Result<RstTree, TreebankError> {
        if !visiting.insert(id) {
            return Err(TreebankError::MalformedXml(format!(
                "cycle through node {id}"
            )));
        }
        let node = &self.nodes[&id];
        let base = match &node.kind {
            NodeKind::Segment { .. } => {
                let edu_id = self.edu_of_segment[&id];
                RstTree::Leaf(self.edus[(edu_id - 1) as usize].clone())
            }
            NodeKind::SpanGroup => {
                let span_children = self.children_of(id, EdgeKind::Span)?;
                match span_children.as_slice() {
                    [nucleus] => self.build(nucleus.0, visiting)?,
                    [] => {
                        return Err(TreebankError::MalformedXml(format!(
                            "span group {id} has no nucleus child"
                        )))
                    }
                    many => {
                        return Err(TreebankError::MalformedXml(format!(
                            "span group {id} has {} span children",
                            many.len()
                        )))
                    }
                }
            }
            NodeKind::MultinucGroup => {
                let nuc_children = self.children_of(id, EdgeKind::Multinuc)?;
                if nuc_children.len() < 2 {
                    return Err(TreebankError::MalformedXml(format!(
                        "multinuc group {id} has {} nucleus children",
                        nuc_children.len()
                    )));
                }
                let mut built: Vec<(RstTree, RelationClass)> = Vec::new();
                for (child_id, class) in &nuc_children {
                    built.push((self.build(*child_id, visiting)?, class.expect("multinuc edge")));
                }
                built.sort_by_key(|(t, _)| t.span().first);
                let class = built[0].1;
                if built.iter().any(|(_, c)| *c != class) {
                    return Err(TreebankError::MalformedXml(format!(
                        "multinuc group {id} children disagree on relation"
                    )));
                }
                RstTree::Internal {
                    nuclearity: Nuclearity::NN,
                    relation: RelationLabel::multi(class),
                    children: built.into_iter().map(|(t, _)| t).collect(),
                }
            }
        };
        let result = self.attach_satellites(id, base, visiting);
        visiting.remove(&id);
        result
    }

    /// Fold the satellites pointing at `id` around the built nucleus,
    /// nearest span first so the combined spans stay contiguous; the
    /// adjacent right satellite wins a distance tie.
    fn attach_satellites(
        &self,
        id: u32,
        nucleus: RstTree,
        visiting: &mut std::collections::BTreeSet<u32>,
    ) -> Result<RstTree, TreebankError> {
        let sat_edges = self.children_of(id, EdgeKind::Satellite)?;
        let mut sats: Vec<(RstTree, RelationClass)> = Vec::new();
        for (child_id, class) in &sat_edges {
            sats.push((self.build(*child_id, visiting)?, class.expect("satellite edge")));
        }
        let mut node = nucleus;
        while !sats.is_empty() {
            let span = node.span();
            let mut best: Option<(usize, u32, bool)> = None; // (index, distance, is_right)
            for (i, (sat, _)) in sats.iter().enumerate() {
                let s = sat.span();
                let (dist, is_right) = if s.last < span.first {
                    (span.first - s.last, false)
                } else {
                    (s.first.saturating_sub(span.last), true)
                };
                let better = match best {
                    None => true,
                    Some((_, d, r)) => dist < d || (dist == d && is_right && !r),
                };
                if better {
                    best = Some((i, dist, is_right));
                }
            }
            let (idx, _, is_right) = best.expect("non-empty satellite list");
            let (sat, class) = sats.remove(idx);
            let relation = RelationLabel::mono(class);
            node = if is_right {
                RstTree::internal(Nuclearity::NS, relation, node, sat)
            } else {
                RstTree::internal(Nuclearity::SN, relation, sat, node)
            };
        }
        Ok(node)
    }

    /// Children of `id` filtered by edge kind, with the relation class for
    /// non-span edges.
    fn children_of(
        &self,
        id: u32,
        want: EdgeKind,
    ) -> Result<Vec<(u32, Option<RelationClass>)>, TreebankError> {
        let mut out = Vec::new();
        for node in self.nodes.values() {
            if node.parent != Some(id) {
                continue;
            }
            let (kind, class) = self.classify_edge(node)?;
            if kind == want {
                out.push((node.id, class));
            }
        }
        Ok(out)
    }

    fn classify_edge(
        &self,
        child: &Node,
    ) -> Result<(EdgeKind, Option<RelationClass>), TreebankError> {
        let raw = child.relname.as_deref().unwrap_or("");
        let normalized = super::relations::normalize_relation_name(raw);
        if normalized == "span" {
            return Ok((EdgeKind::Span, None));
        }
        let class = self
            .aliases
            .resolve(raw)
            .ok_or_else(|| TreebankError::UnknownRelation(raw.to_string()))?;
        let parent_is_multinuc = child
            .parent
            .and_then(|p| self.nodes.get(&p))
            .map(|p| matches!(p.kind, NodeKind::MultinucGroup))
            .unwrap_or(false);
        let declared_multinuc = match self.declared.get(&normalized) {
            Some(types) => types.contains(&RelType::Multinuc),
            None => class.supports(RelationVariant::Multi),
        };
        if parent_is_multinuc && declared_multinuc {
            Ok((EdgeKind::Multinuc, Some(class)))
        } else {
            Ok((EdgeKind::Satellite, Some(class)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EdgeKind {
    Span,
    Multinuc,
    Satellite,
}

/// Serialize an annotated document back to rs3. Inverse of [`read_rs3`] on
/// the tree: structure, nuclearity, and relation classes survive the round
/// trip.
pub fn write_rs3(doc: &Document) -> Result<String, TreebankError> {
    let tree = doc
        .tree
        .as_ref()
        .ok_or_else(|| TreebankError::MissingTree(doc.doc_id.clone()))?;

    // collect the relation inventory in use
    let mut rels: std::collections::BTreeSet<(String, &'static str)> = std::collections::BTreeSet::new();
    collect_relations(tree, &mut rels);

    let mut writer = Rs3Writer {
        doc,
        next_group_id: (tree.leaves().len() as u32) + 1,
        segments: BTreeMap::new(),
        groups: Vec::new(),
    };
    let root_id = writer.emit(tree, None)?;
    let _ = root_id;

    let mut xml = String::new();
    xml.push_str("<rst>\n  <header>\n    <relations>\n");
    for (name, ty) in &rels {
        let _ = writeln!(xml, "      <rel name=\"{}\" type=\"{}\" />", escape(name), ty);
    }
    xml.push_str("    </relations>\n  </header>\n  <body>\n");
    for (id, seg) in &writer.segments {
        let attach = match &seg.attach {
            Some((p, rel)) => format!(" parent=\"{p}\" relname=\"{}\"", escape(rel)),
            None => String::new(),
        };
        let _ = writeln!(
            xml,
            "    <segment id=\"{id}\"{attach}>{}</segment>",
            escape(&seg.text)
        );
    }
    for group in &writer.groups {
        let attach = match &group.attach {
            Some((p, rel)) => format!(" parent=\"{p}\" relname=\"{}\"", escape(rel)),
            None => String::new(),
        };
        let _ = writeln!(
            xml,
            "    <group id=\"{}\" type=\"{}\"{attach} />",
            group.id, group.ty
        );
    }
    xml.push_str("  </body>\n</rst>\n");
    Ok(xml)
}

/// Multinuclear relnames get an `-nn` suffix so a class used in both
/// variants cannot produce an ambiguous header declaration.
fn relname_for(class: RelationClass, nuclearity: Nuclearity) -> String {
    let base = super::relations::normalize_relation_name(class.name());
    if nuclearity == Nuclearity::NN {
        format!("{base}-nn")
    } else {
        base
    }
}

fn collect_relations(tree: &RstTree, out: &mut std::collections::BTreeSet<(String, &'static str)>) {
    if let RstTree::Internal {
        nuclearity,
        relation,
        children,
    } = tree
    {
        let ty = if *nuclearity == Nuclearity::NN {
            "multinuc"
        } else {
            "rst"
        };
        out.insert((relname_for(relation.class, *nuclearity), ty));
        for c in children {
            collect_relations(c, out);
        }
    }
}

struct SegmentOut {
    text: String,
    attach: Option<(u32, String)>,
}

struct GroupOut {
    id: u32,
    ty: &'static str,
    attach: Option<(u32, String)>,
}

struct Rs3Writer<'a> {
    doc: &'a Document,
    next_group_id: u32,
    segments: BTreeMap<u32, SegmentOut>,
    groups: Vec<GroupOut>,
}

impl<'a> Rs3Writer<'a> {
    /// Emit the rs3 node for a subtree and return its id. The parent
    /// attachment for that id is supplied by the caller afterwards via
    /// `attach`, except for satellites which are wired here.
    fn emit(
        &mut self,
        tree: &RstTree,
        attach: Option<(u32, String)>,
    ) -> Result<u32, TreebankError> {
        match tree {
            RstTree::Leaf(edu) => {
                let text = if edu.text.is_empty() {
                    self.doc
                        .edus
                        .get((edu.id as usize).saturating_sub(1))
                        .map(|e| e.text.clone())
                        .unwrap_or_default()
                } else {
                    edu.text.clone()
                };
                self.segments.insert(edu.id, SegmentOut { text, attach });
                Ok(edu.id)
            }
            RstTree::Internal {
                nuclearity,
                relation,
                children,
            } => {
                let relname = relname_for(relation.class, *nuclearity);
                if *nuclearity == Nuclearity::NN {
                    let gid = self.fresh_group("multinuc", attach);
                    for child in children {
                        self.emit(child, Some((gid, relname.clone())))?;
                    }
                    Ok(gid)
                } else {
                    let (nucleus, satellite) = match nuclearity {
                        Nuclearity::NS => (&children[0], &children[1]),
                        Nuclearity::SN => (&children[1], &children[0]),
                        Nuclearity::NN => unreachable!(),
                    };
                    let gid = self.fresh_group("span", attach);
                    let nucleus_id = self.emit(nucleus, Some((gid, "span".to_string())))?;
                    self.emit(satellite, Some((nucleus_id, relname)))?;
                    Ok(gid)
                }
            }
        }
    }

    fn fresh_group(&mut self, ty: &'static str, attach: Option<(u32, String)>) -> u32 {
        let id = self.next_group_id;
        self.next_group_id += 1;
        self.groups.push(GroupOut { id, ty, attach });
        id
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGURE1: &str = r#"<rst>
  <header>
    <relations>
      <rel name="enablement" type="rst" />
    </relations>
  </header>
  <body>
    <segment id="1">باید لایحه تصویب شود</segment>
    <segment id="2" parent="1" relname="enablement">تا تابعیت برسد</segment>
  </body>
</rst>"#;

    #[test]
    fn reads_two_segment_satellite_attachment() {
        let doc = read_rs3(FIGURE1).unwrap();
        assert_eq!(doc.edus.len(), 2);
        let tree = doc.tree.as_ref().unwrap();
        match tree {
            RstTree::Internal {
                nuclearity,
                relation,
                children,
            } => {
                assert_eq!(*nuclearity, Nuclearity::NS);
                assert_eq!(relation.class, RelationClass::Enablement);
                assert_eq!(children.len(), 2);
            }
            _ => panic!("expected internal node"),
        }
        doc.check_edu_partition().unwrap();
    }

    #[test]
    fn reads_single_segment_as_leaf() {
        let doc = read_rs3("<rst><header/><body><segment id=\"1\">تنها</segment></body></rst>")
            .unwrap();
        assert_eq!(doc.edus.len(), 1);
        assert!(matches!(doc.tree, Some(RstTree::Leaf(_))));
    }

    #[test]
    fn dangling_parent_is_an_error() {
        let xml = "<rst><header/><body><segment id=\"1\" parent=\"9\" relname=\"joint\">a</segment></body></rst>";
        assert!(matches!(
            read_rs3(xml),
            Err(TreebankError::DanglingParent { .. })
        ));
    }

    #[test]
    fn unknown_relation_is_an_error() {
        let xml = r#"<rst><header/><body>
            <segment id="1">a</segment>
            <segment id="2" parent="1" relname="frobnication">b</segment>
        </body></rst>"#;
        assert!(matches!(
            read_rs3(xml),
            Err(TreebankError::UnknownRelation(_))
        ));
    }

    #[test]
    fn multiple_roots_is_an_error() {
        let xml = r#"<rst><header/><body>
            <segment id="1">a</segment>
            <segment id="2">b</segment>
            <segment id="3" parent="2" relname="elaboration">c</segment>
        </body></rst>"#;
        assert!(matches!(
            read_rs3(xml),
            Err(TreebankError::MultipleRoots(_))
        ));
    }

    #[test]
    fn segmentation_only_file_has_no_tree() {
        let xml = r#"<rst><header/><body>
            <segment id="1">a b</segment>
            <segment id="2">c</segment>
        </body></rst>"#;
        let doc = read_rs3(xml).unwrap();
        assert!(doc.tree.is_none());
        assert_eq!(doc.edus.len(), 2);
        assert_eq!(doc.tokens.len(), 3);
    }

    #[test]
    fn nary_multinuc_group_is_preserved() {
        let xml = r#"<rst>
          <header><relations><rel name="joint" type="multinuc" /></relations></header>
          <body>
            <segment id="1" parent="4" relname="joint">a</segment>
            <segment id="2" parent="4" relname="joint">b</segment>
            <segment id="3" parent="4" relname="joint">c</segment>
            <group id="4" type="multinuc" />
          </body>
        </rst>"#;
        let doc = read_rs3(xml).unwrap();
        match doc.tree.as_ref().unwrap() {
            RstTree::Internal { children, .. } => assert_eq!(children.len(), 3),
            _ => panic!(),
        }
        let binary = super::super::binarize(doc.tree.clone().unwrap()).unwrap();
        assert!(binary.is_binary());
    }

    #[test]
    fn write_then_read_round_trips_figure1() {
        let doc = read_rs3(FIGURE1).unwrap();
        let xml = write_rs3(&doc).unwrap();
        let back = read_rs3(&xml).unwrap();
        assert_eq!(back.tree, doc.tree);
        assert_eq!(back.edus, doc.edus);
    }

    #[test]
    fn write_requires_tree() {
        let doc = Document::from_edu_texts("d", &["a"]);
        assert!(matches!(write_rs3(&doc), Err(TreebankError::MissingTree(_))));
    }

    #[test]
    fn left_branching_three_edu_round_trip() {
        // (Elaboration NS (Elaboration NS e1 e2) e3) built via rs3:
        // span group over 1-2, satellite 3 on that group
        let xml = r#"<rst>
          <header><relations><rel name="elaboration" type="rst" /></relations></header>
          <body>
            <segment id="1" parent="4" relname="span">a</segment>
            <segment id="2" parent="1" relname="elaboration">b</segment>
            <segment id="3" parent="4" relname="elaboration">c</segment>
            <group id="4" type="span" />
          </body>
        </rst>"#;
        let doc = read_rs3(xml).unwrap();
        let tree = doc.tree.as_ref().unwrap();
        assert_eq!(tree.span().first, 1);
        assert_eq!(tree.span().last, 3);
        let left = tree.left().unwrap();
        assert_eq!(left.span().last, 2);
        let rewritten = write_rs3(&doc).unwrap();
        let back = read_rs3(&rewritten).unwrap();
        assert_eq!(back.tree, doc.tree);
    }

    #[test]
    fn xml_escaping_survives() {
        let mut doc = Document::from_edu_texts("d", &["a & b", "c < d"]);
        doc.tree = Some(RstTree::internal(
            Nuclearity::NS,
            RelationLabel::mono(RelationClass::Elaboration),
            RstTree::Leaf(doc.edus[0].clone()),
            RstTree::Leaf(doc.edus[1].clone()),
        ));
        let xml = write_rs3(&doc).unwrap();
        let back = read_rs3(&xml).unwrap();
        assert_eq!(back.tree, doc.tree);
    }
}
