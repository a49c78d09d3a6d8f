//! A small categorial grammar for sentence-level sanity checking.
//!
//! Categories are built from the atoms `n` (noun phrase) and `s` (sentence)
//! with two directional constructors: `x\y` looks for an `x` immediately to
//! its left and yields `y`; `y/x` looks for an `x` immediately to its right.
//! An intransitive verb is `n\s`, a transitive verb `(n\s)/n`. A token
//! sequence is grammatical when repeated cancellation of adjacent pairs can
//! reduce it to a single `s` — the check searches over reduction orders, so
//! no grammatical reading is missed by greedy bad luck.

use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A syntactic category.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Category {
    /// The atom `n`.
    Noun,
    /// The atom `s`.
    Sentence,
    /// `arg\result`: consumes `arg` on the left.
    Under(Box<Category>, Box<Category>),
    /// `result/arg`: consumes `arg` on the right.
    Over(Box<Category>, Box<Category>),
}

impl Category {
    /// Shorthand for `arg\result`.
    pub fn under(arg: Category, result: Category) -> Category {
        Category::Under(Box::new(arg), Box::new(result))
    }

    /// Shorthand for `result/arg`.
    pub fn over(result: Category, arg: Category) -> Category {
        Category::Over(Box::new(result), Box::new(arg))
    }

    /// The category of an intransitive predicate, `n\s`.
    pub fn intransitive() -> Category {
        Category::under(Category::Noun, Category::Sentence)
    }

    /// The category of a transitive predicate, `(n\s)/n`.
    pub fn transitive() -> Category {
        Category::over(Category::intransitive(), Category::Noun)
    }

    /// Parses the textual notation: `n`, `s`, `\`, `/` and parentheses.
    /// The operators associate to the left, so `n\s/n` reads `(n\s)/n`.
    pub fn parse(text: &str) -> Result<Category> {
        let tokens: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let cat =
            parse_expr(&tokens, &mut pos).ok_or_else(|| Error::BadCategory(text.to_string()))?;
        if pos != tokens.len() {
            return Err(Error::BadCategory(text.to_string()));
        }
        Ok(cat)
    }

    fn is_atom(&self) -> bool {
        matches!(self, Category::Noun | Category::Sentence)
    }
}

fn parse_expr(tokens: &[char], pos: &mut usize) -> Option<Category> {
    let mut left = parse_atom(tokens, pos)?;
    while let Some(&op) = tokens.get(*pos) {
        if op != '\\' && op != '/' {
            break;
        }
        *pos += 1;
        let right = parse_atom(tokens, pos)?;
        left = match op {
            '\\' => Category::under(left, right),
            _ => Category::over(left, right),
        };
    }
    Some(left)
}

fn parse_atom(tokens: &[char], pos: &mut usize) -> Option<Category> {
    match tokens.get(*pos)? {
        'n' => {
            *pos += 1;
            Some(Category::Noun)
        }
        's' => {
            *pos += 1;
            Some(Category::Sentence)
        }
        '(' => {
            *pos += 1;
            let inner = parse_expr(tokens, pos)?;
            if tokens.get(*pos) == Some(&')') {
                *pos += 1;
                Some(inner)
            } else {
                None
            }
        }
        _ => None,
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atomized(c: &Category) -> String {
            if c.is_atom() {
                c.to_string()
            } else {
                format!("({c})")
            }
        }
        match self {
            Category::Noun => write!(f, "n"),
            Category::Sentence => write!(f, "s"),
            Category::Under(arg, result) => {
                write!(f, "{}\\{}", atomized(arg), atomized(result))
            }
            Category::Over(result, arg) => {
                write!(f, "{}/{}", atomized(result), atomized(arg))
            }
        }
    }
}

impl Serialize for Category {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The categories an adjacent pair can cancel to. At most one rule applies
/// per direction, so the result has zero, one, or two entries.
pub fn reduce_pair(left: &Category, right: &Category) -> Vec<Category> {
    let mut out = Vec::new();
    if let Category::Under(arg, result) = right {
        if **arg == *left {
            out.push((**result).clone());
        }
    }
    if let Category::Over(result, arg) = left {
        if **arg == *right {
            out.push((**result).clone());
        }
    }
    out
}

/// True when the sequence reduces to a single `s`.
///
/// Cancellation is tried left to right at every step, backtracking across
/// reduction orders; dead-end states are remembered so the search stays
/// cheap on the sentence lengths this pipeline sees. The empty sequence is
/// not a sentence.
pub fn check_grammar(categories: &[Category]) -> bool {
    fn search(seq: Vec<Category>, dead: &mut HashSet<Vec<Category>>) -> bool {
        if seq.len() == 1 {
            return seq[0] == Category::Sentence;
        }
        if dead.contains(&seq) {
            return false;
        }
        for i in 0..seq.len() - 1 {
            for reduced in reduce_pair(&seq[i], &seq[i + 1]) {
                let mut next = Vec::with_capacity(seq.len() - 1);
                next.extend_from_slice(&seq[..i]);
                next.push(reduced);
                next.extend_from_slice(&seq[i + 2..]);
                if search(next, dead) {
                    return true;
                }
            }
        }
        dead.insert(seq);
        false
    }
    if categories.is_empty() {
        return false;
    }
    search(categories.to_vec(), &mut HashSet::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(s: &str) -> Category {
        Category::parse(s).unwrap()
    }

    #[test]
    fn parses_the_core_inventory() {
        assert_eq!(parsed("n"), Category::Noun);
        assert_eq!(parsed("s"), Category::Sentence);
        assert_eq!(parsed("n\\s"), Category::intransitive());
        assert_eq!(parsed("(n\\s)/n"), Category::transitive());
    }

    #[test]
    fn operators_associate_left() {
        assert_eq!(parsed("n\\s/n"), Category::transitive());
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "x", "n\\", "(n\\s", "n)s", "n s"] {
            assert!(Category::parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn display_roundtrips_through_parse() {
        for text in ["n", "s", "n\\s", "(n\\s)/n", "s/(n\\s)", "(n\\s)\\(n\\s)"] {
            let cat = parsed(text);
            assert_eq!(Category::parse(&cat.to_string()).unwrap(), cat);
        }
    }

    #[test]
    fn transitive_clause_is_grammatical() {
        assert!(check_grammar(&[
            Category::Noun,
            Category::transitive(),
            Category::Noun
        ]));
    }

    #[test]
    fn intransitive_clause_is_grammatical() {
        assert!(check_grammar(&[Category::Noun, Category::intransitive()]));
    }

    #[test]
    fn bare_noun_is_not_a_sentence() {
        assert!(!check_grammar(&[Category::Noun]));
    }

    #[test]
    fn bare_s_is_a_sentence() {
        assert!(check_grammar(&[Category::Sentence]));
    }

    #[test]
    fn empty_sequence_is_rejected() {
        assert!(!check_grammar(&[]));
    }

    #[test]
    fn leftover_material_fails() {
        assert!(!check_grammar(&[Category::Noun, Category::Sentence]));
        assert!(!check_grammar(&[
            Category::Noun,
            Category::transitive(),
            Category::Noun,
            Category::Noun
        ]));
    }

    #[test]
    fn cancellation_is_direction_sensitive() {
        // The transitive verb wants its object on the right, not the left.
        assert!(!check_grammar(&[
            Category::Noun,
            Category::Noun,
            Category::transitive()
        ]));
    }

    #[test]
    fn backtracking_survives_a_wrong_first_reduction() {
        // In [n, n\n, (n\n)\(n\s)] the leftmost cancellation n + n\n → n
        // strands the third category for good; only reducing the middle
        // pair first leads to s. A greedy one-pass check would say no.
        let nn = Category::under(Category::Noun, Category::Noun);
        let tricky = vec![
            Category::Noun,
            nn.clone(),
            Category::under(nn, Category::intransitive()),
        ];
        assert!(check_grammar(&tricky));
    }
}
