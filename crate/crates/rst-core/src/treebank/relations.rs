//! The 18-class coarse relation inventory, nuclearity variants, and
//! relation-name normalization with an editable alias table.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::TreebankError;

/// Coarse relation classes of the treebank.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum RelationClass {
    Span,
    Joint,
    Elaboration,
    SameUnit,
    Contrast,
    Explanation,
    Attribution,
    Cause,
    Background,
    Evaluation,
    TopicComment,
    Condition,
    Temporal,
    Summary,
    Enablement,
    Comparison,
    TopicChange,
    MannerMeans,
}

impl RelationClass {
    pub fn all() -> [RelationClass; 18] {
        use RelationClass::*;
        [
            Span, Joint, Elaboration, SameUnit, Contrast, Explanation, Attribution, Cause,
            Background, Evaluation, TopicComment, Condition, Temporal, Summary, Enablement,
            Comparison, TopicChange, MannerMeans,
        ]
    }

    /// Canonical display name.
    pub fn name(self) -> &'static str {
        use RelationClass::*;
        match self {
            Span => "Span",
            Joint => "Joint",
            Elaboration => "Elaboration",
            SameUnit => "Same-Unit",
            Contrast => "Contrast",
            Explanation => "Explanation",
            Attribution => "Attribution",
            Cause => "Cause",
            Background => "Background",
            Evaluation => "Evaluation",
            TopicComment => "Topic-Comment",
            Condition => "Condition",
            Temporal => "Temporal",
            Summary => "Summary",
            Enablement => "Enablement",
            Comparison => "Comparison",
            TopicChange => "Topic-Change",
            MannerMeans => "Manner-Means",
        }
    }

    /// Which nuclearity variants the class admits. `Span` is the
    /// nucleus-side placeholder and only exists mononuclear; `Joint` and
    /// `Same-Unit` are inherently multinuclear.
    pub fn supports(self, variant: RelationVariant) -> bool {
        use RelationClass::*;
        match self {
            Span | Elaboration | Attribution | Background | Enablement | Summary
            | MannerMeans => variant == RelationVariant::Mono,
            Joint | SameUnit => variant == RelationVariant::Multi,
            Contrast | Explanation | Cause | Evaluation | TopicComment | Condition
            | Temporal | Comparison | TopicChange => true,
        }
    }
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum RelationVariant {
    Mono,
    Multi,
}

/// A relation class together with its nuclearity variant. Multinuclear
/// variants render with an `-NN` suffix (`Cause-NN`), mirroring report
/// conventions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationLabel {
    pub class: RelationClass,
    pub variant: RelationVariant,
}

impl RelationLabel {
    pub fn mono(class: RelationClass) -> Self {
        RelationLabel {
            class,
            variant: RelationVariant::Mono,
        }
    }

    pub fn multi(class: RelationClass) -> Self {
        RelationLabel {
            class,
            variant: RelationVariant::Multi,
        }
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            RelationVariant::Mono => f.write_str(self.class.name()),
            RelationVariant::Multi => write!(f, "{}-NN", self.class.name()),
        }
    }
}

/// Case-fold and map space/underscore separators to hyphens. This is the
/// only implicit normalization; everything else goes through the alias
/// table.
pub fn normalize_relation_name(raw: &str) -> String {
    raw.trim()
        .to_lowercase()
        .chars()
        .map(|c| if c == ' ' || c == '_' { '-' } else { c })
        .collect()
}

/// Maps normalized relation names to inventory classes. Ships with the
/// canonical class names plus a fine-grained alias list; both can be
/// extended from a TSV file (`<from>\t<to-class-name>` per line).
#[derive(Debug, Clone)]
pub struct RelationAliases {
    map: BTreeMap<String, RelationClass>,
}

impl Default for RelationAliases {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        for class in RelationClass::all() {
            let name = normalize_relation_name(class.name());
            // "-nn"-suffixed names come from multinuclear report labels and
            // from the rs3 writer, which keeps multinuc relnames distinct
            map.insert(format!("{name}-nn"), class);
            map.insert(name, class);
        }
        // common fine-grained names collapse to their coarse class
        let fine: &[(&str, RelationClass)] = &[
            ("antithesis", RelationClass::Contrast),
            ("concession", RelationClass::Contrast),
            ("elaboration-additional", RelationClass::Elaboration),
            ("elaboration-general-specific", RelationClass::Elaboration),
            ("elaboration-part-whole", RelationClass::Elaboration),
            ("elaboration-object-attribute", RelationClass::Elaboration),
            ("elaboration-set-member", RelationClass::Elaboration),
            ("example", RelationClass::Elaboration),
            ("definition", RelationClass::Elaboration),
            ("evidence", RelationClass::Explanation),
            ("reason", RelationClass::Explanation),
            ("motivation", RelationClass::Explanation),
            ("result", RelationClass::Cause),
            ("consequence", RelationClass::Cause),
            ("cause-result", RelationClass::Cause),
            ("purpose", RelationClass::Enablement),
            ("means", RelationClass::MannerMeans),
            ("manner", RelationClass::MannerMeans),
            ("list", RelationClass::Joint),
            ("disjunction", RelationClass::Joint),
            ("sequence", RelationClass::Temporal),
            ("temporal-before", RelationClass::Temporal),
            ("temporal-after", RelationClass::Temporal),
            ("temporal-same-time", RelationClass::Temporal),
            ("inverted-sequence", RelationClass::Temporal),
            ("restatement", RelationClass::Summary),
            ("analogy", RelationClass::Comparison),
            ("preference", RelationClass::Comparison),
            ("proportion", RelationClass::Comparison),
            ("hypothetical", RelationClass::Condition),
            ("contingency", RelationClass::Condition),
            ("otherwise", RelationClass::Condition),
            ("problem-solution", RelationClass::TopicComment),
            ("question-answer", RelationClass::TopicComment),
            ("statement-response", RelationClass::TopicComment),
            ("rhetorical-question", RelationClass::TopicComment),
            ("comment", RelationClass::Evaluation),
            ("interpretation", RelationClass::Evaluation),
            ("conclusion", RelationClass::Evaluation),
            ("topic-shift", RelationClass::TopicChange),
            ("topic-drift", RelationClass::TopicChange),
            ("circumstance", RelationClass::Background),
        ];
        for (name, class) in fine {
            map.insert((*name).to_string(), *class);
        }
        RelationAliases { map }
    }
}

impl RelationAliases {
    /// Extend the table from TSV text: `<from>\t<to>` per line, `#` comments
    /// allowed. `to` must resolve through the table built so far.
    pub fn extend_from_tsv(&mut self, tsv: &str) -> Result<(), TreebankError> {
        for (lineno, line) in tsv.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(from), Some(to)) = (cols.next(), cols.next()) else {
                return Err(TreebankError::ParseError {
                    offset: lineno,
                    message: format!("alias line {} needs two tab-separated columns", lineno + 1),
                });
            };
            let class = self.resolve(to).ok_or_else(|| {
                TreebankError::UnknownRelation(to.to_string())
            })?;
            self.map.insert(normalize_relation_name(from), class);
        }
        Ok(())
    }

    pub fn resolve(&self, raw: &str) -> Option<RelationClass> {
        self.map.get(&normalize_relation_name(raw)).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_names_resolve() {
        let aliases = RelationAliases::default();
        assert_eq!(aliases.resolve("Same-Unit"), Some(RelationClass::SameUnit));
        assert_eq!(aliases.resolve("same_unit"), Some(RelationClass::SameUnit));
        assert_eq!(aliases.resolve("Topic Comment"), Some(RelationClass::TopicComment));
        assert_eq!(aliases.resolve("MANNER-MEANS"), Some(RelationClass::MannerMeans));
        assert_eq!(aliases.resolve("frobnication"), None);
    }

    #[test]
    fn fine_grained_aliases_collapse() {
        let aliases = RelationAliases::default();
        assert_eq!(
            aliases.resolve("elaboration-additional"),
            Some(RelationClass::Elaboration)
        );
        assert_eq!(aliases.resolve("purpose"), Some(RelationClass::Enablement));
    }

    #[test]
    fn tsv_extension() {
        let mut aliases = RelationAliases::default();
        aliases
            .extend_from_tsv("# custom\nzusammenhang\tJoint\n")
            .unwrap();
        assert_eq!(aliases.resolve("zusammenhang"), Some(RelationClass::Joint));
        assert!(aliases.extend_from_tsv("x\tnot-a-class\n").is_err());
    }

    #[test]
    fn multinuclear_rendering() {
        assert_eq!(RelationLabel::multi(RelationClass::Cause).to_string(), "Cause-NN");
        assert_eq!(RelationLabel::mono(RelationClass::Cause).to_string(), "Cause");
        assert_eq!(
            RelationLabel::multi(RelationClass::Contrast).to_string(),
            "Contrast-NN"
        );
    }

    #[test]
    fn variant_capability() {
        assert!(RelationClass::Joint.supports(RelationVariant::Multi));
        assert!(!RelationClass::Joint.supports(RelationVariant::Mono));
        assert!(RelationClass::Elaboration.supports(RelationVariant::Mono));
        assert!(!RelationClass::Elaboration.supports(RelationVariant::Multi));
        assert!(RelationClass::Cause.supports(RelationVariant::Mono));
        assert!(RelationClass::Cause.supports(RelationVariant::Multi));
    }
}
