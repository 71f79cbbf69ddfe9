//! Words in named generators with integer exponents, written `g`, `g^-1`, `g^3`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator symbol raised to a nonzero power.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub power: i32,
}

/// Product of letters, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn generator(name: &str) -> Self {
        Self(vec![Letter { name: name.to_owned(), power: 1 }])
    }

    /// Parses a single token `name` or `name^k`.
    pub fn parse_token(token: &str) -> Result<Letter> {
        let token = token.trim();
        let (name, power) = match token.split_once('^') {
            Some((n, p)) => {
                let p: i32 = p.trim().parse().map_err(|_| Error::Word(format!("bad exponent in {token:?}")))?;
                (n.trim(), p)
            }
            None => (token, 1),
        };
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '*') {
            return Err(Error::Word(format!("bad generator symbol {token:?}")));
        }
        Ok(Letter { name: name.to_owned(), power })
    }

    pub fn from_tokens<T: AsRef<str>>(tokens: &[T]) -> Result<Self> {
        let letters = tokens
            .iter()
            .map(|t| Self::parse_token(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self(letters.into_iter().filter(|l| l.power != 0).collect()))
    }

    /// Parses tokens separated by whitespace or `*`.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split(|c: char| c.is_whitespace() || c == '*').filter(|s| !s.is_empty()).collect();
        Self::from_tokens(&tokens)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| Letter { name: l.name.clone(), power: -l.power }).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn tokens(&self) -> Vec<String> {
        self.0
            .iter()
            .map(|l| if l.power == 1 { l.name.clone() } else { format!("{}^{}", l.name, l.power) })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&self.tokens().join(" "))
    }
}

/// Serialized form: a token list, or one string of tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordSpec {
    Tokens(Vec<String>),
    Text(String),
}

impl WordSpec {
    pub fn to_word(&self) -> Result<Word> {
        match self {
            Self::Tokens(t) => Word::from_tokens(t),
            Self::Text(s) => Word::parse(s),
        }
    }
}

impl From<&Word> for WordSpec {
    fn from(w: &Word) -> Self {
        Self::Tokens(w.tokens())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let w = Word::parse("s r s^-1 q^2").unwrap();
        assert_eq!(w.0.len(), 4);
        assert_eq!(w.0[2].power, -1);
        assert_eq!(w.to_string(), "s r s^-1 q^2");
        assert_eq!(w.inverse().to_string(), "q^-2 s r^-1 s^-1");
        assert!(Word::parse("g^x").is_err());
        assert_eq!(Word::parse("").unwrap(), Word::empty());
    }
}
