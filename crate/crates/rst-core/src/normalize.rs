//! Deterministic Persian text normalization applied before tokenization:
//! character unification, ZWNJ affix joining, and punctuation padding, in
//! that order.

use std::collections::BTreeMap;

use thiserror::Error;

pub const ZWNJ: char = '\u{200C}';

#[derive(Debug, Error)]
pub enum NormalizeError {
    #[error("bad table line {line}: {detail}")]
    BadTableLine { line: usize, detail: String },
}

/// One-to-one character replacement table. The default ships the standard
/// Arabic-to-Persian unification set: Yeh variants to Farsi Yeh, Arabic Kaf
/// to Keheh, Arabic-Indic digits to their Extended forms.
#[derive(Debug, Clone)]
pub struct CharTable {
    map: BTreeMap<char, char>,
}

impl Default for CharTable {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        map.insert('\u{064A}', '\u{06CC}'); // ي Arabic Yeh
        map.insert('\u{0649}', '\u{06CC}'); // ى Alef Maksura
        map.insert('\u{06D2}', '\u{06CC}'); // ے Yeh Barree
        map.insert('\u{0643}', '\u{06A9}'); // ك Arabic Kaf
        for i in 0..10u32 {
            // ٠..٩ to ۰..۹
            let from = char::from_u32(0x0660 + i).unwrap();
            let to = char::from_u32(0x06F0 + i).unwrap();
            map.insert(from, to);
        }
        CharTable { map }
    }
}

impl CharTable {
    /// Parse a TSV table, one `<from>\t<to>` pair of single characters per
    /// line; `#` comments and blank lines are skipped.
    pub fn from_tsv(tsv: &str) -> Result<Self, NormalizeError> {
        let mut map = BTreeMap::new();
        for (i, line) in tsv.lines().enumerate() {
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(from), Some(to)) = (cols.next(), cols.next()) else {
                return Err(NormalizeError::BadTableLine {
                    line: i + 1,
                    detail: "need two tab-separated columns".into(),
                });
            };
            let parse_one = |s: &str| -> Result<char, NormalizeError> {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(NormalizeError::BadTableLine {
                        line: i + 1,
                        detail: format!("`{s}` is not a single character"),
                    }),
                }
            };
            map.insert(parse_one(from)?, parse_one(to)?);
        }
        Ok(CharTable { map })
    }

    pub fn apply(&self, text: &str) -> String {
        text.chars()
            .map(|c| self.map.get(&c).copied().unwrap_or(c))
            .collect()
    }
}

/// Replace every character in the default unification table; nothing else
/// changes and the character count is preserved.
pub fn normalize_chars(text: &str) -> String {
    CharTable::default().apply(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffixPosition {
    Prefix,
    Suffix,
}

/// Affix-join rules: which space-separated affixes get reattached to their
/// neighbor with a ZWNJ. Defaults cover the imperfective prefix می and the
/// plural suffix ها (with its suffix chain).
#[derive(Debug, Clone)]
pub struct AffixRules {
    prefixes: Vec<String>,
    suffixes: Vec<String>,
}

impl Default for AffixRules {
    fn default() -> Self {
        AffixRules {
            prefixes: vec!["می".to_string(), "نمی".to_string()],
            suffixes: vec!["ها".to_string()],
        }
    }
}

impl AffixRules {
    /// Parse `<affix>\t<prefix|suffix>` lines.
    pub fn from_tsv(tsv: &str) -> Result<Self, NormalizeError> {
        let mut rules = AffixRules {
            prefixes: Vec::new(),
            suffixes: Vec::new(),
        };
        for (i, line) in tsv.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            match (cols.next(), cols.next()) {
                (Some(affix), Some("prefix")) => rules.prefixes.push(affix.to_string()),
                (Some(affix), Some("suffix")) => rules.suffixes.push(affix.to_string()),
                _ => {
                    return Err(NormalizeError::BadTableLine {
                        line: i + 1,
                        detail: "expected `<affix>\\t<prefix|suffix>`".into(),
                    })
                }
            }
        }
        Ok(rules)
    }
}

fn is_persian_letter(c: char) -> bool {
    c.is_alphabetic()
        && matches!(c,
            '\u{0600}'..='\u{06FF}'
            | '\u{0750}'..='\u{077F}'
            | '\u{FB50}'..='\u{FDFF}'
            | '\u{FE70}'..='\u{FEFF}')
}

/// Word made only of Persian letters (ZWNJ allowed inside). URLs and
/// digit-bearing tokens never qualify, so ZWNJ is never inserted into them.
fn is_persian_word(token: &str) -> bool {
    !token.is_empty()
        && !token.contains("://")
        && !token.chars().any(|c| c.is_ascii_digit())
        && token.chars().all(|c| is_persian_letter(c) || c == ZWNJ)
}

/// Join affixes to their neighbors with ZWNJ: a prefix rule fires when the
/// token equals the prefix and the next token is a Persian word; a suffix
/// rule fires when a token starting with the suffix follows a Persian word.
/// Existing ZWNJ and all other spacing are preserved byte for byte.
pub fn normalize_words(text: &str) -> String {
    normalize_words_with(text, &AffixRules::default())
}

pub fn normalize_words_with(text: &str, rules: &AffixRules) -> String {
    // tokens with the gaps between them, so untouched spacing survives
    let mut pieces: Vec<(usize, usize)> = Vec::new(); // byte ranges of tokens
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                pieces.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        pieces.push((s, text.len()));
    }

    let mut out = String::with_capacity(text.len());
    let mut cursor = 0usize;
    for (idx, &(s, e)) in pieces.iter().enumerate() {
        let gap = &text[cursor..s];
        let token = &text[s..e];
        let join = if idx == 0 {
            false
        } else {
            let prev = {
                let (ps, pe) = pieces[idx - 1];
                &text[ps..pe]
            };
            let prefix_fires =
                rules.prefixes.iter().any(|p| p == prev) && is_persian_word(token);
            let suffix_fires = rules
                .suffixes
                .iter()
                .any(|suf| token.starts_with(suf.as_str()) && is_persian_word(token))
                && is_persian_word(prev);
            prefix_fires || suffix_fires
        };
        if join && !gap.is_empty() {
            out.push(ZWNJ);
        } else {
            out.push_str(gap);
        }
        out.push_str(token);
        cursor = e;
    }
    out.push_str(&text[cursor..]);
    out
}

const PUNCTUATION: &[char] = &[
    '\u{060C}', // ، Arabic comma
    '\u{061B}', // ؛ Arabic semicolon
    '\u{061F}', // ؟ Arabic question mark
    '.', '!', ':', '«', '»', '(', ')', '"', '…', '-',
];

/// Surround each punctuation mark with single spaces, collapse whitespace
/// runs, and trim. Non-whitespace characters are never deleted.
pub fn pad_punctuation(text: &str) -> String {
    let mut spaced = String::with_capacity(text.len() + 16);
    for c in text.chars() {
        if PUNCTUATION.contains(&c) {
            spaced.push(' ');
            spaced.push(c);
            spaced.push(' ');
        } else {
            spaced.push(c);
        }
    }
    let mut out = String::with_capacity(spaced.len());
    let mut last_was_space = true; // trims leading whitespace
    for c in spaced.chars() {
        if c.is_whitespace() {
            if !last_was_space {
                out.push(' ');
            }
            last_was_space = true;
        } else {
            out.push(c);
            last_was_space = false;
        }
    }
    while out.ends_with(' ') {
        out.pop();
    }
    out
}

/// Whitespace tokenization; ZWNJ-joined words stay single tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(|t| t.to_string()).collect()
}

/// The full composition: characters, then affixes, then punctuation. Affix
/// joining runs once more after padding, because padding can expose an
/// affix that was glued to a punctuation mark; the extra pass makes the
/// composition a fixed point.
pub fn normalize_text(text: &str) -> String {
    normalize_words(&pad_punctuation(&normalize_words(&normalize_chars(text))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unifies_arabic_kaf() {
        assert_eq!(normalize_chars("\u{0643}\u{062A}\u{0627}\u{0628}"), "کتاب");
    }

    #[test]
    fn unifies_final_arabic_yeh() {
        assert_eq!(
            normalize_chars("\u{0645}\u{0648}\u{0633}\u{064A}"),
            "\u{0645}\u{0648}\u{0633}\u{06CC}"
        );
    }

    #[test]
    fn ascii_is_untouched() {
        let text = "plain ASCII text 123.";
        assert_eq!(normalize_chars(text), text);
    }

    #[test]
    fn char_count_is_preserved() {
        let text = "\u{0643}abc\u{064A} ٤٥";
        assert_eq!(normalize_chars(text).chars().count(), text.chars().count());
    }

    #[test]
    fn joins_imperfective_prefix() {
        assert_eq!(normalize_words("می روم"), "می\u{200C}روم");
    }

    #[test]
    fn joins_plural_suffix() {
        assert_eq!(normalize_words("کتاب ها"), "کتاب\u{200C}ها");
        assert_eq!(normalize_words("کتاب های"), "کتاب\u{200C}های");
    }

    #[test]
    fn already_joined_is_unchanged() {
        let text = "می\u{200C}روم";
        assert_eq!(normalize_words(text), text);
    }

    #[test]
    fn no_zwnj_into_digit_or_url_tokens() {
        assert_eq!(normalize_words("می 123"), "می 123");
        assert_eq!(normalize_words("می http://x"), "می http://x");
    }

    #[test]
    fn pads_question_mark() {
        assert_eq!(pad_punctuation("می\u{200C}دانی؟"), "می\u{200C}دانی ؟");
    }

    #[test]
    fn pads_arabic_comma() {
        assert_eq!(pad_punctuation("a،b"), "a ، b");
    }

    #[test]
    fn collapses_whitespace() {
        assert_eq!(pad_punctuation("a  b"), "a b");
    }

    #[test]
    fn tokenize_splits_on_spaces_only() {
        assert_eq!(
            tokenize("می\u{200C}دانی ؟"),
            vec!["می\u{200C}دانی".to_string(), "؟".to_string()]
        );
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(tokenize("a ، b"), vec!["a", "،", "b"]);
    }

    #[test]
    fn custom_tables_load() {
        let table = CharTable::from_tsv("\u{0643}\t\u{06A9}\n# comment\n").unwrap();
        assert_eq!(table.apply("\u{0643}"), "\u{06A9}");
        assert!(CharTable::from_tsv("ab\tc").is_err());

        let rules = AffixRules::from_tsv("تر\tsuffix\nبی\tprefix\n").unwrap();
        assert_eq!(normalize_words_with("مهم تر", &rules), "مهم\u{200C}تر");
        assert!(AffixRules::from_tsv("x\tnowhere").is_err());
    }

    fn sample_texts() -> Vec<String> {
        vec![
            "باید لایحه اعطای تابعیت تصویب شود، تا تابعیت برسد.".to_string(),
            "می روم و كتاب ها را می خوانم؟".to_string(),
            "a  b ،c (د) «ه» ٤٢".to_string(),
            "".to_string(),
            "می\u{200C}دانی؟ بله!".to_string(),
            "کتاب ها. می روم.".to_string(),
            "این کتاب ها،است".to_string(),
        ]
    }

    #[test]
    fn all_normalizers_are_idempotent() {
        for text in sample_texts() {
            let c = normalize_chars(&text);
            assert_eq!(normalize_chars(&c), c);
            let w = normalize_words(&c);
            assert_eq!(normalize_words(&w), w);
            let p = pad_punctuation(&w);
            assert_eq!(pad_punctuation(&p), p);
            let full = normalize_text(&text);
            assert_eq!(normalize_text(&full), full);
        }
    }

    #[test]
    fn padding_never_deletes_non_whitespace() {
        for text in sample_texts() {
            let before: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
            let after: Vec<char> = pad_punctuation(&text)
                .chars()
                .filter(|c| !c.is_whitespace())
                .collect();
            assert_eq!(before, after);
        }
    }

    #[test]
    fn token_count_is_stable_under_repadding() {
        for text in sample_texts() {
            let once = tokenize(&pad_punctuation(&text));
            let twice = tokenize(&pad_punctuation(&pad_punctuation(&text)));
            assert_eq!(once, twice);
        }
    }
}
