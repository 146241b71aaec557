//! The presentation grammar.
//!
//! ```text
//! presentation := '<' gens '|' relations '>'   |   file form
//! relation     := word ('=' word)?
//! word         := factor ('*'? factor)*
//! factor       := atom ('^' exponent)*
//! atom         := generator | '1' | '(' word ')' | '(' word ',' word ')'
//! exponent     := integer | generator | '(' integer ')' | '(' word ')' | '(' word ',' word ')'
//! ```
//!
//! Generators are a letter followed by digits. A word exponent conjugates.
//! The file form has a `gens: x,y` line, then one relation per line, with
//! `#` starting a comment.

use super::{Presentation, Word};
use crate::error::{Error, Result};

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    i: usize,
    end: usize,
    gens: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(text: &str, base: usize, gens: &'a [String]) -> Self {
        let chars: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + base, c))
            .collect();
        Parser {
            chars,
            i: 0,
            end: base + text.len(),
            gens,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.i).map_or(self.end, |&(p, _)| p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected '{c}', found '{found}'")),
                None => self.error(format!("expected '{c}' at end of input")),
            }
        }
    }

    fn name(&mut self) -> String {
        let mut s = String::new();
        if let Some(c) = self.peek().filter(|c| c.is_ascii_alphabetic()) {
            s.push(c);
            self.i += 1;
            while let Some(d) = self.peek().filter(|c| c.is_ascii_digit()) {
                s.push(d);
                self.i += 1;
            }
        }
        s
    }

    fn generator(&mut self) -> Result<Word> {
        let name = self.name();
        match self.gens.iter().position(|g| *g == name) {
            Some(i) => Ok(Word::generator(i)),
            None => Err(Error::UndeclaredGenerator(name)),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.i;
        let mut s = String::new();
        if let Some(c) = self.peek().filter(|&c| c == '-' || c == '+') {
            s.push(c);
            self.i += 1;
        }
        while let Some(d) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(d);
            self.i += 1;
        }
        s.parse().or_else(|_| {
            self.i = start;
            self.error("expected an integer")
        })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == '(' || c == '1')
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        loop {
            if self.peek() == Some('*') {
                self.i += 1;
                if !self.starts_factor() {
                    return self.error("expected a factor after '*'");
                }
            }
            if !self.starts_factor() {
                break;
            }
            w = w.concat(&self.factor()?);
        }
        Ok(w)
    }

    /// `(word)` or `(word, word)`, the opening parenthesis already consumed.
    fn parenthesized(&mut self) -> Result<Word> {
        let a = self.word()?;
        let w = if self.peek() == Some(',') {
            self.i += 1;
            let b = self.word()?;
            Word::commutator(&a, &b)
        } else {
            a
        };
        self.expect(')')?;
        Ok(w)
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                self.parenthesized()
            }
            Some('1') => {
                self.i += 1;
                Ok(Word::identity())
            }
            Some(c) if c.is_ascii_alphabetic() => self.generator(),
            Some(c) => self.error(format!("unexpected '{c}'")),
            None => self.error("unexpected end of input"),
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let mut w = self.atom()?;
        while self.peek() == Some('^') {
            self.i += 1;
            w = match self.peek() {
                Some(c) if c.is_ascii_digit() || c == '-' || c == '+' => w.pow(self.integer()?),
                Some('(') => {
                    let numeric = matches!(self.peek_at(1), Some(c) if c.is_ascii_digit() || c == '-' || c == '+');
                    self.i += 1;
                    if numeric {
                        let n = self.integer()?;
                        self.expect(')')?;
                        w.pow(n)
                    } else {
                        w.conjugate(&self.parenthesized()?)
                    }
                }
                Some(c) if c.is_ascii_alphabetic() => w.conjugate(&self.generator()?),
                _ => return self.error("expected an exponent after '^'"),
            };
        }
        Ok(w)
    }

    fn relation(&mut self) -> Result<Word> {
        let lhs = self.word()?;
        if self.peek() == Some('=') {
            self.i += 1;
            let rhs = self.word()?;
            Ok(lhs.concat(&rhs.inverse()))
        } else {
            Ok(lhs)
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected '{c}'")),
        }
    }
}

fn check_names(names: &[String], pos: usize) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        let mut cs = n.chars();
        let ok =
            cs.next().is_some_and(|c| c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_digit());
        if !ok {
            return Err(Error::Syntax {
                pos,
                msg: format!("bad generator name {n:?}"),
            });
        }
        if names[..i].contains(n) {
            return Err(Error::Syntax {
                pos,
                msg: format!("generator {n} declared twice"),
            });
        }
    }
    Ok(())
}

/// Parses one word over the given generator names.
pub fn parse_word(text: &str, gens: &[String]) -> Result<Word> {
    let mut p = Parser::new(text, 0, gens);
    let w = p.word()?;
    p.finish()?;
    Ok(w)
}

/// Either the inline form `<x,y | rel, rel>` or the file form.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('<') {
        parse_inline(text)
    } else {
        parse_file(text)
    }
}

fn parse_inline(text: &str) -> Result<Presentation> {
    let open = text.find('<').unwrap();
    let bar = text.find('|').ok_or(Error::Syntax {
        pos: text.len(),
        msg: "expected '|'".into(),
    })?;
    let gens: Vec<String> = text[open + 1..bar]
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    check_names(&gens, open + 1)?;
    let mut p = Parser::new(&text[bar + 1..], bar + 1, &gens);
    let mut relators = Vec::new();
    if p.peek() != Some('>') {
        loop {
            relators.push(p.relation()?);
            match p.peek() {
                Some(',') => p.i += 1,
                Some('>') => break,
                Some(c) => return p.error(format!("expected ',' or '>', found '{c}'")),
                None => return p.error("expected '>'"),
            }
        }
    }
    p.expect('>')?;
    p.finish()?;
    Presentation::new(gens, relators)
}

fn parse_file(text: &str) -> Result<Presentation> {
    let mut gens: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let base = offset;
        offset += line.len();
        let content = line
            .split('#')
            .next()
            .unwrap()
            .trim_end_matches(['\n', '\r']);
        if content.trim().is_empty() {
            continue;
        }
        match &gens {
            None => {
                let rest = content.trim().strip_prefix("gens:").ok_or(Error::Syntax {
                    pos: base,
                    msg: "first line must be 'gens: x,y,...'".into(),
                })?;
                let names: Vec<String> = rest
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                check_names(&names, base)?;
                gens = Some(names);
            }
            Some(names) => {
                let mut p = Parser::new(content, base, names);
                relators.push(p.relation()?);
                p.finish()?;
            }
        }
    }
    let gens = gens.ok_or(Error::Syntax {
        pos: text.len(),
        msg: "missing 'gens:' line".into(),
    })?;
    Presentation::new(gens, relators)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(p: &Presentation) -> Vec<Vec<i32>> {
        p.relators().iter().map(Word::letters).collect()
    }

    #[test]
    fn cyclic() {
        let p = parse_presentation("<x | x^3>").unwrap();
        assert_eq!(p.generators(), &["x".to_string()]);
        assert_eq!(letters(&p), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn scholz_taussky() {
        let p = parse_presentation("<x,y | y^((x,y)) = y^-2, x^3 = y^3>").unwrap();
        let (x, y) = (Word::generator(0), Word::generator(1));
        let c = Word::commutator(&x, &y);
        let r1 = c.inverse().concat(&y).concat(&c).concat(&y.pow(2));
        let r2 = x.pow(3).concat(&y.pow(-3));
        assert_eq!(p.relators(), &[r1, r2]);
        // Unparenthesized commutator exponent reads the same.
        let q = parse_presentation("<x,y | y^(x,y) = y^(-2), x^3 = y^3>").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn conjugation_and_products() {
        let gens = vec!["a".to_string(), "b".to_string(), "c1".to_string()];
        let w = parse_word("a^b * c1", &gens).unwrap();
        assert_eq!(w.letters(), vec![-2, 1, 2, 3]);
        assert_eq!(
            parse_word("(a b)^2", &gens).unwrap().letters(),
            vec![1, 2, 1, 2]
        );
        assert!(parse_word("1", &gens).unwrap().is_identity());
        assert_eq!(parse_word("((a,b),a)", &gens).unwrap().len(), 8);
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_presentation("<x | z^2>").unwrap_err(),
            Error::UndeclaredGenerator("z".into())
        );
        match parse_presentation("<x | x^>").unwrap_err() {
            Error::Syntax { pos, .. } => assert_eq!(pos, 7),
            e => panic!("{e:?}"),
        }
        assert!(matches!(
            parse_presentation("<x | (x,x>"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_presentation("<x,x | >"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn file_form() {
        let text = "# the group of order 3\ngens: x, y\nx^3   # cube\n\ny = x\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(letters(&p), vec![vec![1, 1, 1], vec![2, -1]]);
        match parse_presentation("gens: x\nx^q\n").unwrap_err() {
            Error::UndeclaredGenerator(n) => assert_eq!(n, "q"),
            e => panic!("{e:?}"),
        }
        let free = parse_presentation("<x,y | >").unwrap();
        assert!(free.relators().is_empty());
    }
}
