//! Congruence kernels in `SL₂(Z/p^k)` and `SL₂(F_p[T]/(T^k))`.
//!
//! Ring elements of both kinds are stored as integers below `p^k`: a
//! residue mod `p^k`, or the polynomial `Σ cᵢTⁱ` written as `Σ cᵢpⁱ`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::checks::{Filtration, SimilarityStructure};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::group::{closure, Automorphism, Elem, FiniteGroup, GroupConfig, Oracle, Subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    /// Entries in `Z/p^k`.
    Zp,
    /// Entries in `F_p[T]/(T^k)`.
    Lambda,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Zp => "sl2zp",
            MatrixKind::Lambda => "sl2lambda",
        })
    }
}

/// The coefficient ring `Z/p^k` or `F_p[T]/(T^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    pub kind: MatrixKind,
    pub p: u32,
    pub k: u32,
    size: u64,
}

impl Ring {
    pub fn new(kind: MatrixKind, p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::BadPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let size = (p as u64)
            .checked_pow(k)
            .filter(|&s| s <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidParameter(format!("{p}^{k} is too large")))?;
        Ok(Ring { kind, p, k, size })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    fn digits(&self, mut x: u64) -> Vec<u64> {
        let p = self.p as u64;
        (0..self.k)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p as u64 + c)
    }

    pub fn reduce(&self, x: i64) -> u64 {
        match self.kind {
            MatrixKind::Zp => x.rem_euclid(self.size as i64) as u64,
            MatrixKind::Lambda => {
                // Integers act through the prime field.
                let c = x.rem_euclid(self.p as i64) as u64;
                self.undigits(
                    &std::iter::once(c)
                        .chain((1..self.k).map(|_| 0))
                        .collect::<Vec<_>>(),
                )
            }
        }
    }

    /// `T` (or `p`) times `x`.
    pub fn uniformizer(&self) -> u64 {
        if self.k == 1 {
            0
        } else {
            self.p as u64
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            MatrixKind::Zp => (a + b) % self.size,
            MatrixKind::Lambda => {
                let p = self.p as u64;
                let (da, db) = (self.digits(a), self.digits(b));
                self.undigits(
                    &da.iter()
                        .zip(&db)
                        .map(|(x, y)| (x + y) % p)
                        .collect::<Vec<_>>(),
                )
            }
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        match self.kind {
            MatrixKind::Zp => (self.size - a) % self.size,
            MatrixKind::Lambda => {
                let p = self.p as u64;
                self.undigits(
                    &self
                        .digits(a)
                        .iter()
                        .map(|x| (p - x) % p)
                        .collect::<Vec<_>>(),
                )
            }
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            MatrixKind::Zp => ((a as u128 * b as u128) % self.size as u128) as u64,
            MatrixKind::Lambda => {
                let p = self.p as u64;
                let (da, db) = (self.digits(a), self.digits(b));
                let k = self.k as usize;
                let mut out = vec![0u64; k];
                for i in 0..k {
                    for j in 0..k - i {
                        out[i + j] = (out[i + j] + da[i] * db[j]) % p;
                    }
                }
                self.undigits(&out)
            }
        }
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p as u64)
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        // x ↦ x(2 - ax) doubles the number of correct digits.
        let p = self.p as u64;
        let c0 = (1..p).find(|&c| (a % p) * c % p == 1)?;
        let mut x = self.reduce(c0 as i64);
        for _ in 0..=self.k.ilog2() + 1 {
            x = self.mul(x, self.sub(self.reduce(2), self.mul(a, x)));
        }
        debug_assert_eq!(self.mul(a, x), self.reduce(1));
        Some(x)
    }

    /// Largest `i ≤ k` with `x ≡ 0 mod (uniformizer)^i`.
    pub fn valuation(&self, x: u64) -> u32 {
        let d = self.digits(x);
        match self.kind {
            MatrixKind::Lambda => d.iter().position(|&c| c != 0).map_or(self.k, |i| i as u32),
            MatrixKind::Zp => {
                let mut v = 0;
                let mut y = x;
                while v < self.k && y.is_multiple_of(self.p as u64) {
                    y /= self.p as u64;
                    v += 1;
                }
                v
            }
        }
    }

    /// Coefficient of `uniformizer^i` (the `i`-th base-`p` digit).
    pub fn digit(&self, x: u64, i: u32) -> u64 {
        x / (self.p as u64).pow(i) % self.p as u64
    }

    fn width(&self) -> usize {
        let bits = 64 - (self.size - 1).leading_zeros() as usize;
        bits.div_ceil(8).max(1)
    }
}

/// A 2×2 matrix `[[a, b], [c, d]]` over a [`Ring`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    ring: Ring,
    e: [u64; 4],
}

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e.map(|x| show_entry(self.ring, x));
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// Residues print as integers; polynomials as `1+2*T+T^2`.
fn show_entry(ring: Ring, x: u64) -> String {
    if ring.kind == MatrixKind::Zp || x < ring.p as u64 {
        return x.to_string();
    }
    let terms: Vec<String> = (0..ring.k)
        .filter_map(|i| {
            let c = ring.digit(x, i);
            let t = match i {
                0 => return (c != 0).then(|| c.to_string()),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            match c {
                0 => None,
                1 => Some(t),
                _ => Some(format!("{c}*{t}")),
            }
        })
        .collect();
    terms.join("+")
}

impl Matrix2 {
    /// Entries are reduced into the ring; the determinant must be a unit.
    pub fn new(ring: Ring, entries: [i64; 4]) -> Result<Self> {
        let m = Matrix2 {
            ring,
            e: entries.map(|x| ring.reduce(x)),
        };
        if !ring.is_unit(m.det()) {
            return Err(Error::InvalidParameter(format!("{m} is not invertible")));
        }
        Ok(m)
    }

    /// Entries given as raw ring elements (base-`p` digit packing).
    pub fn from_raw(ring: Ring, e: [u64; 4]) -> Result<Self> {
        if e.iter().any(|&x| x >= ring.size) {
            return Err(Error::InvalidParameter("entry out of range".into()));
        }
        let m = Matrix2 { ring, e };
        if !ring.is_unit(m.det()) {
            return Err(Error::InvalidParameter(format!("{m} is not invertible")));
        }
        Ok(m)
    }

    pub fn identity(ring: Ring) -> Self {
        Matrix2 {
            ring,
            e: [ring.reduce(1), 0, 0, ring.reduce(1)],
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn entries(&self) -> [u64; 4] {
        self.e
    }

    pub fn det(&self) -> u64 {
        let r = &self.ring;
        let [a, b, c, d] = self.e;
        r.sub(r.mul(a, d), r.mul(b, c))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det() == self.ring.reduce(1)
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        let r = &self.ring;
        let [a, b, c, d] = self.e;
        let [w, x, y, z] = o.e;
        Matrix2 {
            ring: self.ring,
            e: [
                r.add(r.mul(a, w), r.mul(b, y)),
                r.add(r.mul(a, x), r.mul(b, z)),
                r.add(r.mul(c, w), r.mul(d, y)),
                r.add(r.mul(c, x), r.mul(d, z)),
            ],
        }
    }

    pub fn inverse(&self) -> Matrix2 {
        let r = &self.ring;
        let u = r.inv(self.det()).expect("determinant is a unit");
        let [a, b, c, d] = self.e;
        Matrix2 {
            ring: self.ring,
            e: [
                r.mul(u, d),
                r.mul(u, r.neg(b)),
                r.mul(u, r.neg(c)),
                r.mul(u, a),
            ],
        }
    }

    /// Largest `i ≤ k` with `M ≡ I` modulo the `i`-th power of the uniformizer.
    pub fn level(&self) -> u32 {
        let r = &self.ring;
        let one = r.reduce(1);
        let [a, b, c, d] = self.e;
        [r.sub(a, one), b, c, r.sub(d, one)]
            .iter()
            .map(|&x| r.valuation(x))
            .min()
            .unwrap()
    }

    /// Digit `i` of each entry of `M - I`: the leading matrix at level `i`.
    pub fn leading(&self, i: u32) -> [u64; 4] {
        let r = &self.ring;
        let one = r.reduce(1);
        let [a, b, c, d] = self.e;
        [r.sub(a, one), b, c, r.sub(d, one)].map(|x| r.digit(x, i))
    }

    pub fn encode(&self) -> Vec<u8> {
        let w = self.ring.width();
        self.e
            .iter()
            .flat_map(|x| x.to_be_bytes()[8 - w..].to_vec())
            .collect()
    }

    pub fn decode(ring: Ring, bytes: &[u8]) -> Result<Self> {
        let w = ring.width();
        if bytes.len() != 4 * w {
            return Err(Error::Parse(format!("expected {} bytes", 4 * w)));
        }
        let mut e = [0u64; 4];
        for (i, chunk) in bytes.chunks(w).enumerate() {
            e[i] = chunk.iter().fold(0, |acc, &b| acc << 8 | b as u64);
        }
        Matrix2::from_raw(ring, e)
    }

    /// Parses `[[a,b],[c,d]]` with integer entries (read in the prime field
    /// for `Lambda`, except that `T` may appear as a bare entry or as `k*T`).
    pub fn parse(ring: Ring, text: &str) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = cleaned
            .strip_prefix("[[")
            .and_then(|s| s.strip_suffix("]]"))
            .ok_or_else(|| Error::Parse(format!("expected [[a,b],[c,d]], got {text:?}")))?;
        let parts: Vec<&str> = inner.split("],[").flat_map(|row| row.split(',')).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected four entries in {text:?}")));
        }
        let mut e = [0u64; 4];
        for (slot, part) in e.iter_mut().zip(&parts) {
            *slot = parse_entry(ring, part)?;
        }
        Matrix2::from_raw(ring, e)
    }
}

/// Sums of terms `c`, `c*T^j`, `T^j`, `T`.
fn parse_entry(ring: Ring, s: &str) -> Result<u64> {
    let bad = || Error::Parse(format!("bad matrix entry {s:?}"));
    let mut total = 0u64;
    let normalized = s.replace('-', "+-");
    for term in normalized.split('+').filter(|t| !t.is_empty()) {
        let (neg, term) = match term.strip_prefix('-') {
            Some(t) => (true, t),
            None => (false, term),
        };
        let (coeff, power) = match term.split_once('T') {
            None => (term.parse::<i64>().map_err(|_| bad())?, 0u32),
            Some((c, rest)) => {
                let c = match c.strip_suffix('*').unwrap_or(c) {
                    "" => 1,
                    c => c.parse::<i64>().map_err(|_| bad())?,
                };
                let j = match rest {
                    "" => 1,
                    r => r
                        .strip_prefix('^')
                        .ok_or_else(bad)?
                        .parse::<u32>()
                        .map_err(|_| bad())?,
                };
                if ring.kind == MatrixKind::Zp {
                    return Err(Error::Parse(format!(
                        "{s:?}: T only makes sense over F_p[T]"
                    )));
                }
                (c, j)
            }
        };
        let mut x = ring.reduce(if neg { -coeff } else { coeff });
        for _ in 0..power {
            x = ring.mul(x, ring.uniformizer());
        }
        total = ring.add(total, x);
    }
    Ok(total)
}

pub struct MatrixOracle {
    ring: Ring,
}

impl MatrixOracle {
    pub fn new(ring: Ring) -> Self {
        MatrixOracle { ring }
    }

    fn m(&self, bytes: &[u8]) -> Matrix2 {
        Matrix2::decode(self.ring, bytes).expect("encoding produced by this oracle")
    }
}

impl Oracle for MatrixOracle {
    fn identity(&self) -> Vec<u8> {
        Matrix2::identity(self.ring).encode()
    }

    fn compose(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        self.m(a).mul(&self.m(b)).encode()
    }

    fn inverse(&self, a: &[u8]) -> Vec<u8> {
        self.m(a).inverse().encode()
    }
}

/// The kernel of reduction mod the uniformizer in `SL₂` of the ring, of
/// order `p^{3(k-1)}`, generated by the two unipotent elements at level 1
/// and `diag(1+π, (1+π)⁻¹)`.
pub fn kernel_group(kind: MatrixKind, p: u32, k: u32, config: &GroupConfig) -> Result<FiniteGroup> {
    let ring = Ring::new(kind, p, k)?;
    let order = (p as u128).checked_pow(3 * (k - 1));
    if order.is_none_or(|o| o > config.table_cap as u128) {
        return Err(Error::CapExceeded {
            cap: config.table_cap,
        });
    }
    let pi = ring.uniformizer();
    let one = ring.reduce(1);
    let u = ring.add(one, pi);
    let gens = [
        [one, pi, 0, one],
        [one, 0, pi, one],
        [u, 0, 0, ring.inv(u).expect("1 + π is a unit")],
    ]
    .map(|e| Matrix2 { ring, e }.encode());
    closure(&gens, Arc::new(MatrixOracle::new(ring)), p, config)
}

pub fn kernel_group_zp(p: u32, k: u32, config: &GroupConfig) -> Result<FiniteGroup> {
    kernel_group(MatrixKind::Zp, p, k, config)
}

pub fn kernel_group_lambda(p: u32, k: u32, config: &GroupConfig) -> Result<FiniteGroup> {
    kernel_group(MatrixKind::Lambda, p, k, config)
}

fn decode_all(g: &FiniteGroup, ring: Ring) -> Vec<Matrix2> {
    g.encodings()
        .iter()
        .map(|e| Matrix2::decode(ring, e).expect("matrix encoding"))
        .collect()
}

/// `G_i = {x ≡ I}` modulo the `i`-th power of the uniformizer, `i = 1..=k`.
pub fn congruence_filtration(
    g: &Arc<FiniteGroup>,
    kind: MatrixKind,
    p: u32,
    k: u32,
) -> Result<Filtration> {
    let ring = Ring::new(kind, p, k)?;
    let levels: Vec<u32> = decode_all(g, ring).iter().map(Matrix2::level).collect();
    let chain = (1..=k)
        .map(|i| Subgroup::from_predicate(g, |x| levels[x] >= i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Filtration::new(g.clone(), chain))
}

/// `φ_i` induced by `x ↦ x^p` on the congruence filtration.
pub fn p_power_similarity(
    filtration: Filtration,
    config: &GroupConfig,
) -> Result<SimilarityStructure> {
    let g = filtration.group().clone();
    let p = g.prime() as i64;
    SimilarityStructure::from_element_map_strict(filtration, config, move |_, x| g.pow(x, p))
}

/// `φ_i` shifting the leading coefficient: `I + T^{i-1}A ↦ I + T^iA`.
pub fn t_map_similarity(
    filtration: Filtration,
    p: u32,
    k: u32,
    config: &GroupConfig,
) -> Result<SimilarityStructure> {
    if k < 3 {
        return Err(Error::InvalidParameter("the shift maps need k ≥ 3".into()));
    }
    let ring = Ring::new(MatrixKind::Lambda, p, k)?;
    let g = filtration.group().clone();
    let mats = decode_all(&g, ring);
    // One element of G_i per leading matrix at level i.
    let mut lookup: HashMap<(u32, [u64; 4]), Elem> = HashMap::new();
    for (x, m) in mats.iter().enumerate() {
        let level = m.level();
        for i in 1..k {
            if level >= i {
                lookup.entry((i, m.leading(i))).or_insert(x);
            }
        }
    }
    let missing = std::sync::Mutex::new(None);
    let s = SimilarityStructure::from_element_map_strict(filtration, config, |i, x| {
        let key = (i as u32, mats[x].leading(i as u32 - 1));
        match lookup.get(&key) {
            Some(&y) => y,
            None => {
                *missing.lock().unwrap() = Some(mats[x]);
                g.identity()
            }
        }
    });
    if let Some(m) = missing.into_inner().unwrap() {
        return Err(Error::NotWellDefined(format!(
            "no element of the next level shifts {m}"
        )));
    }
    s
}

/// `x ↦ M x M⁻¹` for `M` in `GL₂` of the ring; `M` must normalize `G`.
pub fn conjugation_automorphism(g: &Arc<FiniteGroup>, m: &Matrix2) -> Result<Automorphism> {
    let ring = m.ring();
    let m_inv = m.inverse();
    Automorphism::from_encoding_map(g, |e| {
        let x = Matrix2::decode(ring, e).expect("matrix encoding");
        m.mul(&x).mul(&m_inv).encode()
    })
}

/// `diag(1,-1)` followed by the lifts of the standard generators of
/// `SL₂(F_p)`: conjugations that preserve every congruence level.
pub fn standard_conjugators(ring: Ring) -> Vec<Matrix2> {
    [[1, 0, 0, -1], [1, 1, 0, 1], [1, 0, 1, 1]]
        .into_iter()
        .map(|e| Matrix2::new(ring, e).expect("invertible"))
        .collect()
}
