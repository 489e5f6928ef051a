//! Generator alphabets and freely reduced words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
}

impl Generator {
    pub fn new(name: impl Into<String>) -> Self {
        Generator { name: name.into() }
    }
}

/// Returns true when `name` is usable as a generator symbol.
pub fn valid_generator_name(name: &str) -> bool {
    let core = name.trim_end_matches('\'');
    let mut chars = core.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Checks the alphabet invariants: valid, pairwise distinct names.
pub fn check_alphabet(gens: &[Generator]) -> Result<()> {
    for (i, g) in gens.iter().enumerate() {
        if !valid_generator_name(&g.name) {
            return Err(Error::InvalidParameter(format!("bad generator name `{}`", g.name)));
        }
        if gens[..i].iter().any(|h| h.name == g.name) {
            return Err(Error::InvalidParameter(format!("duplicate generator `{}`", g.name)));
        }
    }
    Ok(())
}

/// One letter of a word: a generator index and a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inv: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inv: true }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn gen(gen: usize) -> Self {
        GroupWord { letters: vec![Letter::pos(gen)] }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = GroupWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// `gen^exp` as a word.
    pub fn power_of(gen: usize, exp: i64) -> Self {
        let l = if exp >= 0 { Letter::pos(gen) } else { Letter::neg(gen) };
        GroupWord { letters: vec![l; exp.unsigned_abs() as usize] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends a letter, cancelling against the last one when possible.
    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn pow(&self, n: i64) -> GroupWord {
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        let mut w = GroupWord::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `self * other * self^-1`
    pub fn conjugate(&self, other: &GroupWord) -> GroupWord {
        self.mul(other).mul(&self.inverse())
    }

    /// Relabels generator indices; the result is reduced again.
    pub fn map_gens(&self, f: impl Fn(usize) -> usize) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().map(|l| Letter { gen: f(l.gen), inv: l.inv }))
    }

    /// Substitutes a word for every generator.
    pub fn substitute(&self, f: impl Fn(usize) -> GroupWord) -> GroupWord {
        let mut w = GroupWord::identity();
        for l in &self.letters {
            let image = f(l.gen);
            w = w.mul(&if l.inv { image.inverse() } else { image });
        }
        w
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    pub fn display<'a>(&'a self, gens: &'a [Generator]) -> WordDisplay<'a> {
        WordDisplay { word: self, gens }
    }

    /// Parses `t*a^-2*b` (also whitespace separated); `1` is the identity.
    pub fn parse(text: &str, gens: &[Generator]) -> Result<GroupWord> {
        let err = |reason: &str| Error::WordSyntax { text: text.to_string(), reason: reason.to_string() };
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(err("empty word"));
        }
        if trimmed == "1" {
            return Ok(GroupWord::identity());
        }
        let mut w = GroupWord::identity();
        for tok in trimmed.split(|c: char| c == '*' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| err("bad exponent"))?;
                    if e.unsigned_abs() > 1 << 16 {
                        return Err(err("exponent too large"));
                    }
                    (n, e)
                }
                None => (tok, 1),
            };
            let idx = gens
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            w = w.mul(&GroupWord::power_of(idx, exp));
        }
        Ok(w)
    }
}

pub struct WordDisplay<'a> {
    word: &'a GroupWord,
    gens: &'a [Generator],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let name = self.gens.get(l.gen).map(|g| g.name.as_str()).unwrap_or("?");
            let exp = if l.inv { -(run as i64) } else { run as i64 };
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i += run;
        }
        Ok(())
    }
}
