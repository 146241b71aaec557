//! Truncated Nottingham group: series `T + a₂T² + … + a_N T^N` over `F_q`
//! under substitution, modulo `T^{N+1}`.

use std::fmt;
use std::sync::Arc;

use crate::checks::Filtration;
use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::group::{closure, FiniteGroup, GroupConfig, Oracle, Subgroup};

/// Congruence depth of a series: largest `m` with `f ≡ T mod T^{m+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    Finite(usize),
    /// The identity, which is congruent to `T` at every truncation.
    Infinite,
}

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: Arc<GaloisField>,
    n: usize,
    /// Coefficients of `T², …, T^N`.
    coeffs: Vec<u8>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (GF({}), N={})", self, self.field.size(), self.n)
    }
}

impl TruncatedSeries {
    pub fn identity(field: Arc<GaloisField>, n: usize) -> Self {
        TruncatedSeries {
            field,
            n,
            coeffs: vec![0; n.saturating_sub(1)],
        }
    }

    /// `coeffs[i]` is the coefficient of `T^{i+2}`; must have length `N - 1`.
    pub fn new(field: Arc<GaloisField>, n: usize, coeffs: Vec<u8>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(
                "truncation degree must be at least 1".into(),
            ));
        }
        if coeffs.len() != n - 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                n - 1,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c as u32 >= field.size()) {
            return Err(Error::InvalidParameter(format!(
                "coefficient {c} is not an element of GF({})",
                field.size()
            )));
        }
        Ok(TruncatedSeries { field, n, coeffs })
    }

    /// `T + c·T^k`.
    pub fn monomial(field: Arc<GaloisField>, n: usize, k: usize, c: u8) -> Result<Self> {
        if !(2..=n).contains(&k) {
            return Err(Error::InvalidParameter(format!(
                "degree {k} outside 2..={n}"
            )));
        }
        let mut s = Self::identity(field, n);
        s.coeffs[k - 2] = c;
        Ok(s)
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    /// Coefficient of `T^k`.
    pub fn coeff(&self, k: usize) -> u8 {
        match k {
            1 => 1,
            k if (2..=self.n).contains(&k) => self.coeffs[k - 2],
            _ => 0,
        }
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn encode(&self) -> Vec<u8> {
        self.coeffs.clone()
    }

    pub fn decode(field: Arc<GaloisField>, n: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(field, n, bytes.to_vec())
    }

    fn dense(&self) -> Vec<u8> {
        let mut v = vec![0u8; self.n + 1];
        if self.n >= 1 {
            v[1] = 1;
        }
        v[2..].copy_from_slice(&self.coeffs);
        v
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field.size() != other.field.size() || self.n != other.n {
            return Err(Error::MixedParameters(format!(
                "GF({}) N={} vs GF({}) N={}",
                self.field.size(),
                self.n,
                other.field.size(),
                other.n
            )));
        }
        Ok(())
    }

    /// Substitution `self(other(T)) mod T^{N+1}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &Self) -> Self {
        let f = &*self.field;
        let g = other.dense();
        let mut result = g.clone();
        let mut power = g.clone();
        for k in 2..=self.n {
            power = mul_trunc(f, &power, &g);
            let a = self.coeffs[k - 2];
            if a == 0 {
                continue;
            }
            for (r, &c) in result.iter_mut().zip(&power) {
                *r = f.add(*r, f.mul(a, c));
            }
        }
        TruncatedSeries {
            field: self.field.clone(),
            n: self.n,
            coeffs: result[2..].to_vec(),
        }
    }

    /// Compositional inverse, solved one degree at a time: the degree-`k`
    /// coefficient of `f(g)` is `b_k` plus terms in `b₂, …, b_{k-1}`.
    pub fn reverse(&self) -> Self {
        let f = &*self.field;
        let mut g = Self::identity(self.field.clone(), self.n);
        for k in 2..=self.n {
            let c = self.compose_unchecked(&g).coeff(k);
            g.coeffs[k - 2] = f.neg(c);
        }
        g
    }

    /// `f⁻¹ ∘ g⁻¹ ∘ f ∘ g`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let fg = self.compose_unchecked(other);
        let gf = other.compose_unchecked(self);
        Ok(gf.reverse().compose_unchecked(&fg))
    }

    pub fn depth(&self) -> Depth {
        match self.coeffs.iter().position(|&c| c != 0) {
            Some(i) => Depth::Finite(i + 1),
            None => Depth::Infinite,
        }
    }

    /// Parses the format produced by `Display`, e.g. `T + 2*T^3` or
    /// `T + (0,1)*T^2` over a prime-power field.
    pub fn parse(field: Arc<GaloisField>, n: usize, text: &str) -> Result<Self> {
        let mut s = Self::identity(field.clone(), n);
        let mut terms = text.split('+').map(str::trim);
        if terms.next() != Some("T") {
            return Err(Error::Parse(format!(
                "series must start with `T`: {text:?}"
            )));
        }
        let mut seen = vec![false; n + 1];
        for term in terms {
            let (coef, mono) = match term.rsplit_once('*') {
                Some((c, m)) => (Some(c.trim()), m.trim()),
                None => (None, term),
            };
            let k: usize = mono
                .strip_prefix("T^")
                .and_then(|e| e.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad monomial {mono:?}")))?;
            if !(2..=n).contains(&k) || seen[k] {
                return Err(Error::Parse(format!(
                    "degree {k} repeated or outside 2..={n}"
                )));
            }
            seen[k] = true;
            let c = match coef {
                None => 1,
                Some(c) => parse_coefficient(&field, c)?,
            };
            s.coeffs[k - 2] = c;
        }
        Ok(s)
    }
}

fn parse_coefficient(field: &GaloisField, text: &str) -> Result<u8> {
    if field.is_prime_field() {
        let v: u32 = text
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient {text:?}")))?;
        if v >= field.size() {
            return Err(Error::Parse(format!("coefficient {v} out of range")));
        }
        Ok(v as u8)
    } else {
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected (c0,c1,...) but got {text:?}")))?;
        let digits = inner
            .split(',')
            .map(|d| d.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad coefficient {text:?}")))?;
        field.from_digits(&digits)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T")?;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let k = i + 2;
            if self.field.is_prime_field() {
                write!(f, " + {c}*T^{k}")?;
            } else {
                let d: Vec<String> = self.field.digits(c).iter().map(|x| x.to_string()).collect();
                write!(f, " + ({})*T^{k}", d.join(","))?;
            }
        }
        Ok(())
    }
}

fn mul_trunc(f: &GaloisField, a: &[u8], b: &[u8]) -> Vec<u8> {
    let n = a.len();
    let mut r = vec![0u8; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b[..n - i].iter().enumerate() {
            if y != 0 {
                r[i + j] = f.add(r[i + j], f.mul(x, y));
            }
        }
    }
    r
}

/// Composition oracle on coefficient encodings.
pub struct NottinghamOracle {
    field: Arc<GaloisField>,
    n: usize,
}

impl NottinghamOracle {
    pub fn new(field: Arc<GaloisField>, n: usize) -> Self {
        NottinghamOracle { field, n }
    }

    fn series(&self, bytes: &[u8]) -> TruncatedSeries {
        TruncatedSeries {
            field: self.field.clone(),
            n: self.n,
            coeffs: bytes.to_vec(),
        }
    }
}

impl Oracle for NottinghamOracle {
    fn identity(&self) -> Vec<u8> {
        vec![0; self.n - 1]
    }

    fn compose(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        self.series(a).compose_unchecked(&self.series(b)).coeffs
    }

    fn inverse(&self, a: &[u8]) -> Vec<u8> {
        self.series(a).reverse().coeffs
    }
}

/// `N₁/N_m` over `F_q`, realized at truncation `N = m`; order `q^{m-1}`.
pub fn quotient_group(q: u32, m: usize, config: &GroupConfig) -> Result<FiniteGroup> {
    if m < 2 {
        return Err(Error::InvalidParameter("m must be at least 2".into()));
    }
    let field = Arc::new(GaloisField::new(q)?);
    let order = (q as u128).checked_pow(m as u32 - 1);
    if order.is_none_or(|o| o > config.table_cap as u128) {
        return Err(Error::CapExceeded {
            cap: config.table_cap,
        });
    }
    let mut gens = Vec::new();
    for k in 2..=m {
        for b in field.basis() {
            gens.push(TruncatedSeries::monomial(field.clone(), m, k, b)?.encode());
        }
    }
    let p = field.characteristic();
    closure(&gens, Arc::new(NottinghamOracle::new(field, m)), p, config)
}

/// Whether every nonzero coefficient sits at an exponent `1 + i·q_param`
/// and lies in the prime field.
pub fn fesenko_member(f: &TruncatedSeries, q_param: usize) -> bool {
    f.coeffs.iter().enumerate().all(|(i, &c)| {
        let k = i + 2;
        c == 0 || (q_param > 0 && (k - 1) % q_param == 0 && f.field.in_prime_field(c))
    })
}

/// The image of the Fesenko group `S_q` in the Nottingham group over `F_p`
/// truncated at `T^{n+1}`.
pub fn fesenko_group(
    p: u32,
    q_param: usize,
    n: usize,
    config: &GroupConfig,
) -> Result<FiniteGroup> {
    if !crate::field::is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    if !crate::group::is_power_of(q_param, p) || q_param < p as usize {
        return Err(Error::InvalidParameter(format!(
            "{q_param} is not a power of {p}"
        )));
    }
    let field = Arc::new(GaloisField::new(p)?);
    let gens: Vec<Vec<u8>> = (1..)
        .map(|i| 1 + i * q_param)
        .take_while(|&k| k <= n)
        .map(|k| TruncatedSeries::monomial(field.clone(), n, k, 1).map(|s| s.encode()))
        .collect::<Result<_>>()?;
    closure(&gens, Arc::new(NottinghamOracle::new(field, n)), p, config)
}

/// `G = N₁ ≥ N₂ ≥ … ≥ N_m = 1` on a group built by [`quotient_group`] or
/// [`fesenko_group`], where `N_j` is the set of elements of depth at least
/// `j`. Repeated terms (possible for Fesenko groups) are dropped.
pub fn depth_filtration(g: &Arc<FiniteGroup>, q: u32, n: usize) -> Result<Filtration> {
    let field = Arc::new(GaloisField::new(q)?);
    let mut chain: Vec<Subgroup> = Vec::new();
    for j in 1..=n {
        let sub = Subgroup::from_predicate(g, |x| {
            let s =
                TruncatedSeries::decode(field.clone(), n, g.encoding(x)).expect("valid encoding");
            s.depth() >= Depth::Finite(j)
        })?;
        if chain.last().is_none_or(|last| *last != sub) {
            chain.push(sub);
        }
    }
    Ok(Filtration::new(g.clone(), chain))
}
