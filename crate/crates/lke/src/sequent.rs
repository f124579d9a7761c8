//! Sequents and antecedent bracketings.

use std::fmt;

use crate::category::{parse_category, Category, ParseError};

/// A sequent `A1, ..., An |- B` with a nonempty antecedent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub antecedent: Vec<Category>,
    pub succedent: Category,
}

impl Sequent {
    pub fn new(antecedent: Vec<Category>, succedent: Category) -> Sequent {
        assert!(!antecedent.is_empty(), "antecedent must be nonempty");
        Sequent {
            antecedent,
            succedent,
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.antecedent.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, " => {}", self.succedent)
    }
}

/// A binary bracketing of the antecedent, used by the non-associative
/// calculi where derivability is bracketing-sensitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Leaf(Category),
    Node(Box<Structure>, Box<Structure>),
}

impl Structure {
    /// Default bracketing: all grouping to the right.
    pub fn right_nested(cats: &[Category]) -> Structure {
        assert!(!cats.is_empty());
        let mut it = cats.iter().rev();
        let mut acc = Structure::Leaf(it.next().unwrap().clone());
        for c in it {
            acc = Structure::Node(Box::new(Structure::Leaf(c.clone())), Box::new(acc));
        }
        acc
    }

    pub fn leaves(&self) -> Vec<&Category> {
        match self {
            Structure::Leaf(c) => vec![c],
            Structure::Node(l, r) => {
                let mut out = l.leaves();
                out.extend(r.leaves());
                out
            }
        }
    }

    /// The antecedent product category this bracketing denotes.
    pub fn product(&self) -> Category {
        match self {
            Structure::Leaf(c) => c.clone(),
            Structure::Node(l, r) => Category::product(l.product(), r.product()),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Leaf(c) => write!(f, "{c}"),
            Structure::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

/// Parse `A1, A2, ... => B`.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let Some((lhs, rhs)) = text.split_once("=>") else {
        return Err(ParseError {
            pos: 0,
            msg: "expected '=>' in sequent".to_string(),
        });
    };
    let succedent = parse_category(rhs.trim())?;
    let mut antecedent = Vec::new();
    for part in lhs.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(ParseError {
                pos: 0,
                msg: "empty antecedent formula".to_string(),
            });
        }
        antecedent.push(parse_category(part)?);
    }
    if antecedent.is_empty() {
        return Err(ParseError {
            pos: 0,
            msg: "antecedent must be nonempty".to_string(),
        });
    }
    Ok(Sequent::new(antecedent, succedent))
}

/// Parse a bracketing pattern such as `( ( .. .. ) .. )`, where each run
/// of dots is a slot. The slots are filled with `cats` left to right.
pub fn parse_bracketing(pattern: &str, cats: &[Category]) -> Result<Structure, ParseError> {
    enum Tok {
        Open,
        Close,
        Slot,
    }
    let mut toks = Vec::new();
    let mut chars = pattern.chars().peekable();
    let mut pos = 0usize;
    while let Some(c) = chars.next() {
        pos += 1;
        match c {
            '(' => toks.push(Tok::Open),
            ')' => toks.push(Tok::Close),
            '.' => {
                while let Some('.') = chars.peek() {
                    chars.next();
                    pos += 1;
                }
                toks.push(Tok::Slot);
            }
            c if c.is_whitespace() => {}
            c => {
                return Err(ParseError {
                    pos,
                    msg: format!("unexpected character '{c}' in bracketing"),
                })
            }
        }
    }

    fn parse(
        toks: &[Tok],
        i: &mut usize,
        slot: &mut usize,
        cats: &[Category],
    ) -> Result<Structure, ParseError> {
        match toks.get(*i) {
            Some(Tok::Slot) => {
                *i += 1;
                let c = cats.get(*slot).ok_or(ParseError {
                    pos: *i,
                    msg: "more slots than antecedent formulas".to_string(),
                })?;
                *slot += 1;
                Ok(Structure::Leaf(c.clone()))
            }
            Some(Tok::Open) => {
                *i += 1;
                let l = parse(toks, i, slot, cats)?;
                let r = parse(toks, i, slot, cats)?;
                match toks.get(*i) {
                    Some(Tok::Close) => {
                        *i += 1;
                        Ok(Structure::Node(Box::new(l), Box::new(r)))
                    }
                    _ => Err(ParseError {
                        pos: *i,
                        msg: "expected ')' in bracketing".to_string(),
                    }),
                }
            }
            _ => Err(ParseError {
                pos: *i,
                msg: "expected slot or '(' in bracketing".to_string(),
            }),
        }
    }

    let mut i = 0;
    let mut slot = 0;
    let st = parse(&toks, &mut i, &mut slot, cats)?;
    if i != toks.len() {
        return Err(ParseError {
            pos: i,
            msg: "trailing input in bracketing".to_string(),
        });
    }
    if slot != cats.len() {
        return Err(ParseError {
            pos: i,
            msg: format!("bracketing has {slot} slots for {} formulas", cats.len()),
        });
    }
    Ok(st)
}
