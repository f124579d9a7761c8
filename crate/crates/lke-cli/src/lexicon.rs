//! Word-to-category lexicon, loaded from TSV.

use std::collections::BTreeMap;
use std::fmt;

use lke::category::{parse_category, Category};

/// Case-sensitive mapping from words to candidate categories. A word may
/// carry several categories; their order follows the file.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<Category>>,
}

#[derive(Debug)]
pub enum LexiconError {
    Io(String, std::io::Error),
    Parse { line: usize, msg: String },
    DuplicateEntry { line: usize, word: String, category: String },
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconError::Io(path, e) => write!(f, "cannot read {path}: {e}"),
            LexiconError::Parse { line, msg } => write!(f, "lexicon line {line}: {msg}"),
            LexiconError::DuplicateEntry { line, word, category } => {
                write!(f, "lexicon line {line}: duplicate entry {word} -> {category}")
            }
        }
    }
}

impl std::error::Error for LexiconError {}

impl Lexicon {
    /// Parse TSV lines `word<TAB>category`. `#`-prefixed and blank lines
    /// are ignored.
    pub fn load(path: &str) -> Result<Lexicon, LexiconError> {
        let content = std::fs::read_to_string(path)
            .map_err(|e| LexiconError::Io(path.to_string(), e))?;
        Lexicon::parse(&content)
    }

    pub fn parse(content: &str) -> Result<Lexicon, LexiconError> {
        let mut lex = Lexicon::default();
        for (i, raw) in content.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((word, cat_text)) = raw.split_once('\t') else {
                return Err(LexiconError::Parse {
                    line,
                    msg: "expected word<TAB>category".to_string(),
                });
            };
            let word = word.trim();
            if word.is_empty() {
                return Err(LexiconError::Parse {
                    line,
                    msg: "empty word".to_string(),
                });
            }
            let category = parse_category(cat_text.trim()).map_err(|e| LexiconError::Parse {
                line,
                msg: e.to_string(),
            })?;
            let cats = lex.entries.entry(word.to_string()).or_default();
            if cats.contains(&category) {
                return Err(LexiconError::DuplicateEntry {
                    line,
                    word: word.to_string(),
                    category: category.to_string(),
                });
            }
            cats.push(category);
        }
        Ok(lex)
    }

    pub fn lookup(&self, word: &str) -> Option<&[Category]> {
        self.entries.get(word).map(|v| v.as_slice())
    }
}
