//! Magnus expansion `xᵢ ↦ 1 + Xᵢ` into truncated noncommutative power
//! series over `F_p`, and the Zassenhaus depth it detects.

use std::collections::BTreeMap;
use std::fmt;

use super::Word;

pub const DEFAULT_MAGNUS_DEGREE: usize = 6;

/// Noncommutative polynomial over `F_p` in `X₀, X₁, …`, truncated above
/// total degree `D`. Monomials are generator index sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPolynomial {
    p: u32,
    degree: usize,
    terms: BTreeMap<Vec<u16>, u32>,
}

impl NcPolynomial {
    pub fn one(p: u32, degree: usize) -> Self {
        NcPolynomial {
            p,
            degree,
            terms: BTreeMap::from([(Vec::new(), 1 % p)]),
        }
    }

    /// `1 + Xᵢ`.
    pub fn generator(p: u32, degree: usize, i: usize) -> Self {
        let mut f = Self::one(p, degree);
        if degree >= 1 {
            f.add_term(vec![i as u16], 1);
        }
        f
    }

    /// `(1 + Xᵢ)⁻¹ = Σ (-Xᵢ)^k`.
    pub fn generator_inverse(p: u32, degree: usize, i: usize) -> Self {
        let mut f = Self::one(p, degree);
        for k in 1..=degree {
            f.add_term(vec![i as u16; k], if k % 2 == 0 { 1 } else { p - 1 });
        }
        f
    }

    fn add_term(&mut self, mono: Vec<u16>, c: u32) {
        let e = self.terms.entry(mono).or_insert(0);
        *e = (*e + c) % self.p;
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn truncation(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, mono: &[u16]) -> u32 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], u32)> {
        self.terms.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!((self.p, self.degree), (other.p, other.degree));
        let mut terms: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
        for (u, &a) in &self.terms {
            for (v, &b) in &other.terms {
                if u.len() + v.len() > self.degree {
                    continue;
                }
                let mut m = u.clone();
                m.extend_from_slice(v);
                *terms.entry(m).or_insert(0) += a as u64 * b as u64;
            }
        }
        NcPolynomial {
            p: self.p,
            degree: self.degree,
            terms: terms
                .into_iter()
                .map(|(m, c)| (m, (c % self.p as u64) as u32))
                .filter(|&(_, c)| c != 0)
                .collect(),
        }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut out = Self::one(self.p, self.degree);
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        out
    }

    /// Least degree of a nonconstant monomial with nonzero coefficient.
    pub fn min_positive_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).filter(|&l| l > 0).min()
    }
}

impl fmt::Display for NcPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        // Lowest degree first, then lexicographic.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        for (m, &c) in terms {
            let mono: Vec<String> = m.iter().map(|g| format!("X{g}")).collect();
            parts.push(match (c, mono.is_empty()) {
                (c, true) => c.to_string(),
                (1, false) => mono.join("*"),
                (c, false) => format!("{c}*{}", mono.join("*")),
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn magnus_expand(w: &Word, p: u32, degree: usize) -> NcPolynomial {
    w.syllables()
        .iter()
        .fold(NcPolynomial::one(p, degree), |acc, &(g, e)| {
            let base = if e > 0 {
                NcPolynomial::generator(p, degree, g)
            } else {
                NcPolynomial::generator_inverse(p, degree, g)
            };
            acc.mul(&base.pow(e.unsigned_abs()))
        })
}

/// Zassenhaus depth: exact, or beyond the truncation degree examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZDepth {
    Exact(usize),
    Beyond(usize),
}

impl ZDepth {
    /// Whether the depth is at least `d` (undecided results beyond the cap
    /// count only if the cap itself reaches `d`).
    pub fn at_least(&self, d: usize) -> bool {
        match *self {
            ZDepth::Exact(k) => k >= d,
            ZDepth::Beyond(cap) => cap + 1 >= d,
        }
    }
}

impl fmt::Display for ZDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZDepth::Exact(d) => write!(f, "{d}"),
            ZDepth::Beyond(cap) => write!(f, ">{cap}"),
        }
    }
}

pub fn zassenhaus_depth(w: &Word, p: u32, cap: usize) -> ZDepth {
    match magnus_expand(w, p, cap).min_positive_degree() {
        Some(d) => ZDepth::Exact(d),
        None => ZDepth::Beyond(cap),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_presentation;
    use super::*;

    fn x() -> Word {
        Word::generator(0)
    }

    fn y() -> Word {
        Word::generator(1)
    }

    #[test]
    fn expansions() {
        assert_eq!(
            magnus_expand(&Word::identity(), 3, 4),
            NcPolynomial::one(3, 4)
        );
        for p in [2, 3, 5] {
            let f = magnus_expand(&x().pow(p as i64), p, 6);
            let mut expect = NcPolynomial::one(p, 6);
            expect.add_term(vec![0; p as usize], 1);
            assert_eq!(f, expect);
        }
        let c = magnus_expand(&Word::commutator(&x(), &y()), 7, 2);
        assert_eq!(c.to_string(), "1 + X0*X1 + 6*X1*X0");
    }

    #[test]
    fn inverse_is_inverse() {
        let w = Word::from_syllables([(0, 2), (1, -3), (0, -1)]);
        let f = magnus_expand(&w, 5, 6).mul(&magnus_expand(&w.inverse(), 5, 6));
        assert_eq!(f, NcPolynomial::one(5, 6));
    }

    #[test]
    fn depths() {
        assert_eq!(zassenhaus_depth(&x(), 3, 6), ZDepth::Exact(1));
        let c = Word::commutator(&x(), &y());
        assert_eq!(zassenhaus_depth(&c, 3, 6), ZDepth::Exact(2));
        assert_eq!(
            zassenhaus_depth(&Word::commutator(&c, &x()), 3, 6),
            ZDepth::Exact(3)
        );
        let w = x().pow(3).concat(&y().pow(-3));
        assert_eq!(zassenhaus_depth(&w, 3, 6), ZDepth::Exact(3));
        assert_eq!(zassenhaus_depth(&Word::identity(), 3, 4), ZDepth::Beyond(4));
        assert_eq!(ZDepth::Beyond(4).to_string(), ">4");
    }

    #[test]
    fn scholz_taussky_relators_are_deep() {
        let p = parse_presentation("<x,y | y^((x,y)) = y^-2, x^3 = y^3>").unwrap();
        for r in p.relators() {
            assert!(zassenhaus_depth(r, 3, 6).at_least(3), "{}", p.show(r));
        }
    }
}
