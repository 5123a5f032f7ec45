use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a symbol inside its [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered set of distinct printable tokens. Symbol `k` renders as `tokens[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    tokens: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Result<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() || tokens.len() > 255 {
            return Err(Error::Alphabet(format!("size {} not in 1..=255", tokens.len())));
        }
        let mut seen = HashMap::new();
        for (k, t) in tokens.iter().enumerate() {
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(Error::Alphabet(format!("bad token {t:?}")));
            }
            if let Some(prev) = seen.insert(t.as_str(), k) {
                return Err(Error::Alphabet(format!("token {t:?} repeated at {prev} and {k}")));
            }
        }
        Ok(Alphabet { tokens })
    }

    /// Alphabet `"0","1",…` of the given size.
    pub fn digits(size: usize) -> Self {
        Alphabet::new((0..size).map(|k| k.to_string())).expect("digit alphabet")
    }

    /// Alphabet `"1",…,"j"`.
    pub fn one_based(j: usize) -> Self {
        Alphabet::new((1..=j).map(|k| k.to_string())).expect("digit alphabet")
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.tokens.len() as u8).map(Symbol)
    }

    pub fn token(&self, s: Symbol) -> &str {
        &self.tokens[s.index()]
    }

    pub fn symbol(&self, token: &str) -> Option<Symbol> {
        self.tokens.iter().position(|t| t == token).map(|k| Symbol(k as u8))
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.index() < self.tokens.len()
    }

    /// True when every token is a single character, so words render without separators.
    pub fn is_compact(&self) -> bool {
        self.tokens.iter().all(|t| t.chars().count() == 1)
    }

    /// Appends fresh tokens; existing symbols keep their indices.
    pub fn extended<S: Into<String>>(&self, fresh: impl IntoIterator<Item = S>) -> Result<Self> {
        Alphabet::new(self.tokens.iter().cloned().chain(fresh.into_iter().map(Into::into)))
    }

    /// A token not yet present, derived from `stem`.
    pub fn fresh_token(&self, stem: &str) -> String {
        if self.symbol(stem).is_none() {
            return stem.to_string();
        }
        (1..)
            .map(|k| format!("{stem}{k}"))
            .find(|t| self.symbol(t).is_none())
            .unwrap()
    }

    pub fn render(&self, w: &[Symbol]) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        w.iter().map(|&s| self.token(s)).collect::<Vec<_>>().join(sep)
    }

    /// Parses a rendered word: single characters for compact alphabets, whitespace-separated tokens otherwise.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        let pieces: Vec<String> = if self.is_compact() && !text.contains(char::is_whitespace) {
            text.chars().map(String::from).collect()
        } else {
            text.split_whitespace().map(String::from).collect()
        };
        pieces
            .iter()
            .map(|p| {
                self.symbol(p)
                    .ok_or_else(|| Error::Alphabet(format!("token {p:?} not in alphabet")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn check(&self, w: &[Symbol]) -> Result<()> {
        match w.iter().find(|s| !self.contains(**s)) {
            Some(s) => Err(Error::Alphabet(format!("symbol {} outside alphabet of size {}", s.0, self.len()))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.tokens.join(","))
    }
}

/// A finite word. Ordering is length first, then lexicographic by symbol index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_indices(ix: &[u8]) -> Self {
        Word(ix.iter().map(|&k| Symbol(k)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn constant(s: Symbol, n: usize) -> Self {
        Word(vec![s; n])
    }
}

impl std::ops::Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Alphabet::new(["a", "b", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new((0..256).map(|k| k.to_string())).is_err());
    }

    #[test]
    fn render_and_parse_round_trip() {
        let a = Alphabet::digits(3);
        let w = a.parse("0120").unwrap();
        assert_eq!(w, Word::from_indices(&[0, 1, 2, 0]));
        assert_eq!(a.render(&w), "0120");
        let b = Alphabet::new(["x1", "x2"]).unwrap();
        let v = b.parse("x2 x1 x1").unwrap();
        assert_eq!(b.render(&v), "x2 x1 x1");
    }

    #[test]
    fn extension_keeps_indices() {
        let a = Alphabet::one_based(2);
        let b = a.extended(["A1", "b"]).unwrap();
        assert_eq!(b.symbol("1"), Some(Symbol(0)));
        assert_eq!(b.symbol("b"), Some(Symbol(3)));
        assert_eq!(b.fresh_token("b"), "b1");
    }

    #[test]
    fn length_lex_order() {
        let mut ws = vec![Word::from_indices(&[1]), Word::from_indices(&[0, 0]), Word::from_indices(&[0])];
        ws.sort();
        assert_eq!(ws, vec![Word::from_indices(&[0]), Word::from_indices(&[1]), Word::from_indices(&[0, 0])]);
        assert!(Word::empty() < Word::from_indices(&[0]));
    }
}
