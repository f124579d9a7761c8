//! Category expressions: binary trees of atoms under `/`, `\` and `•`.
//!
//! Concrete syntax: `/`, `\` and `*` (product; `•` accepted on input) all
//! have equal precedence. A chain of one repeated operator associates to
//! the left; mixing distinct operators at the same nesting level requires
//! parentheses.

use std::fmt;

/// An atomic grammatical category such as `S`, `NP` or `PP`.
///
/// Names match `[A-Za-z][A-Za-z0-9]*`; equality is by name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: &str) -> Result<Atom, ParseError> {
        let mut chars = name.chars();
        let ok = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric()),
            _ => false,
        };
        if ok {
            Ok(Atom(name.to_string()))
        } else {
            Err(ParseError {
                pos: 0,
                msg: format!("invalid atom name: {name:?}"),
            })
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A category: an atom or a binary connective node.
///
/// `Over(x, y)` renders as `x/y` (an `x` missing a `y` to its right);
/// `Under(y, x)` renders as `y\x` (an `x` missing a `y` to its left);
/// `Product(x, y)` renders as `x*y`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Atom(Atom),
    Over(Box<Category>, Box<Category>),
    Under(Box<Category>, Box<Category>),
    Product(Box<Category>, Box<Category>),
}

impl Category {
    pub fn atom(name: &str) -> Category {
        Category::Atom(Atom::new(name).expect("invalid atom name"))
    }

    /// `result / argument`
    pub fn over(result: Category, argument: Category) -> Category {
        Category::Over(Box::new(result), Box::new(argument))
    }

    /// `argument \ result`
    pub fn under(argument: Category, result: Category) -> Category {
        Category::Under(Box::new(argument), Box::new(result))
    }

    pub fn product(left: Category, right: Category) -> Category {
        Category::Product(Box::new(left), Box::new(right))
    }

    /// Number of atom occurrences.
    pub fn size(&self) -> usize {
        match self {
            Category::Atom(_) => 1,
            Category::Over(a, b) | Category::Under(a, b) | Category::Product(a, b) => {
                a.size() + b.size()
            }
        }
    }

    /// Number of connective nodes.
    pub fn connectives(&self) -> usize {
        self.size() - 1
    }

    /// All distinct subtrees including `self`, in increasing-size order,
    /// ties broken by rendered text.
    pub fn subformulae(&self) -> Vec<Category> {
        fn walk(c: &Category, out: &mut Vec<Category>) {
            match c {
                Category::Atom(_) => {}
                Category::Over(a, b) | Category::Under(a, b) | Category::Product(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
            if !out.contains(c) {
                out.push(c.clone());
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_by(|a, b| {
            a.size()
                .cmp(&b.size())
                .then_with(|| a.to_string().cmp(&b.to_string()))
        });
        out
    }

    /// Signed occurrence count of `atom` in `self`. An atom in positive
    /// position counts +1; crossing into the argument of `/` or `\` flips
    /// the polarity; `*` preserves it on both children.
    pub fn atom_count(&self, atom: &Atom, polarity: Polarity) -> i64 {
        match self {
            Category::Atom(a) => {
                if a == atom {
                    match polarity {
                        Polarity::Positive => 1,
                        Polarity::Negative => -1,
                    }
                } else {
                    0
                }
            }
            Category::Over(result, argument) => {
                result.atom_count(atom, polarity) + argument.atom_count(atom, polarity.flip())
            }
            Category::Under(argument, result) => {
                result.atom_count(atom, polarity) + argument.atom_count(atom, polarity.flip())
            }
            Category::Product(a, b) => {
                a.atom_count(atom, polarity) + b.atom_count(atom, polarity)
            }
        }
    }

    /// All atoms occurring in `self`, deduplicated, in name order.
    pub fn atoms(&self) -> Vec<Atom> {
        fn walk(c: &Category, out: &mut Vec<Atom>) {
            match c {
                Category::Atom(a) => {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                Category::Over(a, b) | Category::Under(a, b) | Category::Product(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out
    }

    fn connective(&self) -> Option<char> {
        match self {
            Category::Atom(_) => None,
            Category::Over(..) => Some('/'),
            Category::Under(..) => Some('\\'),
            Category::Product(..) => Some('*'),
        }
    }
}

/// Polarity of an atom occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Minimal parentheses: a left child with the same connective
        // continues a left-associated chain; everything else compound is
        // parenthesized.
        fn go(c: &Category, f: &mut fmt::Formatter<'_>, parent: Option<char>) -> fmt::Result {
            let conn = c.connective();
            match c {
                Category::Atom(a) => f.write_str(a.name()),
                Category::Over(a, b) | Category::Under(a, b) | Category::Product(a, b) => {
                    let op = conn.unwrap();
                    let needs = parent.is_some();
                    if needs {
                        f.write_str("(")?;
                    }
                    // left child of the same operator needs no parens
                    match a.connective() {
                        Some(cc) if cc == op => go(a, f, None)?,
                        _ => go(a, f, Some(op))?,
                    }
                    f.write_fmt(format_args!("{op}"))?;
                    go(b, f, Some(op))?;
                    if needs {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, None)
    }
}

/// Error raised by the category parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.msg, self.pos)
    }
}

impl std::error::Error for ParseError {}

/// Parse a category expression.
pub fn parse_category(text: &str) -> Result<Category, ParseError> {
    let mut p = Parser::new(text);
    let c = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(c)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Parser {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn operator(&mut self) -> Option<char> {
        match self.peek() {
            Some('/') => Some('/'),
            Some('\\') => Some('\\'),
            Some('*') | Some('\u{2022}') => Some('*'),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Category, ParseError> {
        let mut acc = self.term()?;
        let mut chain_op: Option<char> = None;
        while let Some(op) = self.operator() {
            match chain_op {
                None => chain_op = Some(op),
                Some(prev) if prev == op => {}
                Some(prev) => {
                    return Err(self.err(&format!(
                        "mixing '{prev}' and '{op}' requires parentheses"
                    )))
                }
            }
            self.pos += 1; // consume operator
            let rhs = self.term()?;
            acc = match op {
                '/' => Category::over(acc, rhs),
                '\\' => Category::under(acc, rhs),
                '*' => Category::product(acc, rhs),
                _ => unreachable!(),
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Category, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && self.chars[self.pos].is_ascii_alphanumeric()
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                Ok(Category::Atom(Atom(name)))
            }
            Some(c) => Err(self.err(&format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
