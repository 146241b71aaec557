//! Finitely presented groups: words, the presentation grammar, coset
//! enumeration and the Magnus expansion.
//!
//! Notation: `a^b = b⁻¹ab` and `(a,b) = a⁻¹b⁻¹ab`.

mod magnus;
mod parse;
mod todd_coxeter;

use std::fmt;

pub use magnus::{magnus_expand, zassenhaus_depth, NcPolynomial, ZDepth, DEFAULT_MAGNUS_DEGREE};
pub use parse::{parse_presentation, parse_word};
pub use todd_coxeter::{
    permutation_closure_order, regular_group, todd_coxeter, CosetTable, EnumerationLimits,
};

/// A freely reduced word: `(generator index, nonzero exponent)` with
/// distinct neighbouring generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![(g, 1)])
    }

    /// Normalizes by merging neighbours and cancelling.
    pub fn from_syllables(syllables: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in syllables {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word(out)
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of letters.
    pub fn len(&self) -> usize {
        self.0.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        Self::from_syllables(self.0.iter().chain(&other.0).copied())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `b⁻¹ a b`.
    pub fn conjugate(&self, b: &Word) -> Self {
        b.inverse().concat(self).concat(b)
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Word, b: &Word) -> Self {
        a.inverse().concat(&b.inverse()).concat(a).concat(b)
    }

    /// Letters as signed column codes: `+(g+1)` or `-(g+1)`.
    pub fn letters(&self) -> Vec<i32> {
        let mut out = Vec::with_capacity(self.len());
        for &(g, e) in &self.0 {
            let l = g as i32 + 1;
            for _ in 0..e.unsigned_abs() {
                out.push(if e > 0 { l } else { -l });
            }
        }
        out
    }

    /// Largest generator index used, plus one.
    pub fn rank_needed(&self) -> usize {
        self.0.iter().map(|&(g, _)| g + 1).max().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .word
            .0
            .iter()
            .map(|&(g, e)| match e {
                1 => self.names[g].clone(),
                _ => format!("{}^{e}", self.names[g]),
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> crate::Result<Self> {
        if let Some(w) = relators.iter().find(|w| w.rank_needed() > generators.len()) {
            return Err(crate::Error::UndeclaredGenerator(format!(
                "relator uses generator #{} of {}",
                w.rank_needed(),
                generators.len()
            )));
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.show(r)).collect();
        write!(f, "<{} | {}>", self.generators.join(","), rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        let w = Word::from_syllables([(0, 2), (0, -2), (1, 1), (1, 2), (0, 1)]);
        assert_eq!(w.syllables(), &[(1, 3), (0, 1)]);
        assert!(w.concat(&w.inverse()).is_identity());
        assert_eq!(Word::generator(0).pow(-3).syllables(), &[(0, -3)]);
        let (x, y) = (Word::generator(0), Word::generator(1));
        assert_eq!(Word::commutator(&x, &y).letters(), vec![-1, -2, 1, 2]);
        assert_eq!(x.conjugate(&y).letters(), vec![-2, 1, 2]);
    }
}
