//! Line-oriented bracketed tree format:
//! `node := (EDU <id>) | (<REL> <NUC> node node...)` with NUC in
//! {NS, SN, NN}. Leaves reference EDU ids; EDU text is not carried.

use super::{
    Edu, EduId, Nuclearity, RelationAliases, RelationLabel, RelationVariant, RstTree,
    TreebankError,
};

/// Render a tree in bracketed form, e.g. `(Enablement NS (EDU 1) (EDU 2))`.
pub fn write_bracketed(tree: &RstTree) -> String {
    let mut out = String::new();
    render(tree, &mut out);
    out
}

fn render(tree: &RstTree, out: &mut String) {
    match tree {
        RstTree::Leaf(edu) => {
            out.push_str("(EDU ");
            out.push_str(&edu.id.to_string());
            out.push(')');
        }
        RstTree::Internal {
            nuclearity,
            relation,
            children,
        } => {
            out.push('(');
            out.push_str(&relation.class.name().to_string());
            out.push(' ');
            out.push_str(&nuclearity.to_string());
            for c in children {
                out.push(' ');
                render(c, out);
            }
            out.push(')');
        }
    }
}

/// Parse one bracketed tree. Leaves become one-token EDUs whose token spans
/// are derived from the id (the format does not carry text).
pub fn read_bracketed(text: &str) -> Result<RstTree, TreebankError> {
    let aliases = RelationAliases::default();
    let mut parser = Parser {
        chars: text.char_indices().peekable(),
        text,
        aliases: &aliases,
    };
    parser.skip_ws();
    let tree = parser.node()?;
    parser.skip_ws();
    if let Some(&(offset, _)) = parser.chars.peek() {
        return Err(TreebankError::ParseError {
            offset,
            message: "trailing input after tree".into(),
        });
    }
    Ok(tree)
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    aliases: &'a RelationAliases,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn offset(&mut self) -> usize {
        self.chars
            .peek()
            .map(|&(i, _)| i)
            .unwrap_or(self.text.len())
    }

    fn expect(&mut self, want: char) -> Result<(), TreebankError> {
        let offset = self.offset();
        match self.chars.next() {
            Some((_, c)) if c == want => Ok(()),
            Some((_, c)) => Err(TreebankError::ParseError {
                offset,
                message: format!("expected `{want}`, found `{c}`"),
            }),
            None => Err(TreebankError::ParseError {
                offset,
                message: format!("expected `{want}`, found end of input"),
            }),
        }
    }

    fn word(&mut self) -> Result<(usize, String), TreebankError> {
        self.skip_ws();
        let start = self.offset();
        let mut w = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            w.push(c);
            self.chars.next();
        }
        if w.is_empty() {
            return Err(TreebankError::ParseError {
                offset: start,
                message: "expected a symbol".into(),
            });
        }
        Ok((start, w))
    }

    fn node(&mut self) -> Result<RstTree, TreebankError> {
        self.skip_ws();
        self.expect('(')?;
        let (head_offset, head) = self.word()?;
        if head == "EDU" {
            let (id_offset, id_str) = self.word()?;
            let id: EduId = id_str.parse().map_err(|_| TreebankError::ParseError {
                offset: id_offset,
                message: format!("bad EDU id `{id_str}`"),
            })?;
            self.skip_ws();
            self.expect(')')?;
            return Ok(RstTree::Leaf(Edu {
                id,
                start: (id - 1) as usize,
                end: (id - 1) as usize,
                text: String::new(),
            }));
        }
        let class = self
            .aliases
            .resolve(&head)
            .ok_or_else(|| TreebankError::ParseError {
                offset: head_offset,
                message: format!("unknown relation `{head}`"),
            })?;
        let (nuc_offset, nuc_str) = self.word()?;
        let nuclearity: Nuclearity =
            nuc_str
                .parse()
                .map_err(|message| TreebankError::ParseError {
                    offset: nuc_offset,
                    message,
                })?;
        let variant = match nuclearity {
            Nuclearity::NN => RelationVariant::Multi,
            _ => RelationVariant::Mono,
        };
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some(&(_, '(')) => children.push(self.node()?),
                Some(&(_, ')')) => {
                    self.chars.next();
                    break;
                }
                Some(&(offset, c)) => {
                    return Err(TreebankError::ParseError {
                        offset,
                        message: format!("expected `(` or `)`, found `{c}`"),
                    })
                }
                None => {
                    let offset = self.text.len();
                    return Err(TreebankError::ParseError {
                        offset,
                        message: "unclosed node".into(),
                    });
                }
            }
        }
        if children.len() < 2 {
            return Err(TreebankError::ParseError {
                offset: head_offset,
                message: format!("node needs at least two children, has {}", children.len()),
            });
        }
        Ok(RstTree::Internal {
            nuclearity,
            relation: RelationLabel { class, variant },
            children,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::RelationClass;
    use super::*;

    #[test]
    fn parses_two_edu_tree() {
        let tree = read_bracketed("(Enablement NS (EDU 1) (EDU 2))").unwrap();
        match &tree {
            RstTree::Internal {
                nuclearity,
                relation,
                children,
            } => {
                assert_eq!(*nuclearity, Nuclearity::NS);
                assert_eq!(relation.class, RelationClass::Enablement);
                assert_eq!(relation.variant, RelationVariant::Mono);
                assert_eq!(children.len(), 2);
            }
            _ => panic!("expected internal node"),
        }
        assert_eq!(write_bracketed(&tree), "(Enablement NS (EDU 1) (EDU 2))");
    }

    #[test]
    fn parses_single_leaf() {
        let tree = read_bracketed("(EDU 1)").unwrap();
        assert!(matches!(tree, RstTree::Leaf(ref e) if e.id == 1));
    }

    #[test]
    fn parses_multinuclear() {
        let tree = read_bracketed("(Joint NN (EDU 1) (EDU 2))").unwrap();
        match &tree {
            RstTree::Internal {
                nuclearity,
                relation,
                ..
            } => {
                assert_eq!(*nuclearity, Nuclearity::NN);
                assert_eq!(relation.variant, RelationVariant::Multi);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn error_carries_offset() {
        let err = read_bracketed("(Enablement XX (EDU 1) (EDU 2))").unwrap_err();
        match err {
            TreebankError::ParseError { offset, .. } => assert_eq!(offset, 12),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_trailing_garbage() {
        assert!(read_bracketed("(EDU 1) junk").is_err());
    }

    #[test]
    fn rejects_single_child_node() {
        assert!(read_bracketed("(Joint NN (EDU 1))").is_err());
    }
}
