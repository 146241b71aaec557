//! Finite p-groups given by canonical byte encodings and a composition rule.
//!
//! A [`FiniteGroup`] is produced by [`closure`]: breadth-first enumeration
//! of everything the generators reach under right multiplication. Elements
//! are addressed by their index in that enumeration; index 0 is always the
//! identity. Small groups keep a full multiplication table, larger ones call
//! back into the oracle and memoize.

mod abelian;
mod dump;
mod hom;
mod search;
mod series;
mod subgroup;

pub use abelian::{abelian_invariants, exponent, AbelianInvariants};
pub use dump::GroupDump;
pub use hom::{
    enumerate_automorphisms, fixed_subgroup, hom_from_images, hom_from_pairs, is_characteristic,
    Automorphism, CayleyGraph, GroupHom,
};
pub use search::{subgroup_search, SearchConstraints};
pub use series::{
    derived_length, derived_series, derived_subgroup, frattini_subgroup, lower_central_series,
    nilpotency_class,
};
pub use subgroup::{normal_closure, quotient, subgroup_as_group, subgroup_generated, Subgroup};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Index of an element inside its [`FiniteGroup`].
pub type Elem = usize;

/// Default number of elements below which a full multiplication table is kept.
pub const DEFAULT_TABLE_CAP: usize = 8192;

/// Composition rule on canonical encodings.
///
/// Implementations must be total on every encoding they produce and must
/// return canonical encodings (equal elements, equal bytes).
pub trait Oracle: Send + Sync {
    fn identity(&self) -> Vec<u8>;
    fn compose(&self, a: &[u8], b: &[u8]) -> Vec<u8>;
    fn inverse(&self, a: &[u8]) -> Vec<u8>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupConfig {
    /// Hard limit on the number of elements a closure may produce.
    pub cap: usize,
    /// Groups of at most this order get a full multiplication table.
    pub table_cap: usize,
    /// Number of random associativity checks run against the oracle.
    pub spot_checks: usize,
    pub seed: u64,
}

impl Default for GroupConfig {
    fn default() -> Self {
        GroupConfig {
            cap: 1 << 20,
            table_cap: DEFAULT_TABLE_CAP,
            spot_checks: 64,
            seed: 0x5eed,
        }
    }
}

impl GroupConfig {
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_table_cap(mut self, table_cap: usize) -> Self {
        self.table_cap = table_cap;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Table,
    Oracle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Table => f.write_str("table"),
            Mode::Oracle => f.write_str("oracle"),
        }
    }
}

enum Backing {
    Table(Vec<u32>),
    Oracle {
        oracle: Arc<dyn Oracle>,
        memo: Mutex<HashMap<(u32, u32), u32>>,
    },
}

/// A finite group whose order is a power of `prime`.
pub struct FiniteGroup {
    prime: u32,
    elements: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, u32>,
    generators: Vec<Elem>,
    /// `gen_mul[x * ngens + j]` is the index of `x * generators[j]`.
    gen_mul: Vec<u32>,
    /// For `x > 0`: `x = parent.0 * generators[parent.1]`, with `parent.0 < x`.
    parent: Vec<(u32, u32)>,
    inverses: Vec<u32>,
    backing: Backing,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("prime", &self.prime)
            .field("mode", &self.mode())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Builds the group generated by `generators` under `oracle`.
///
/// Element indexing is deterministic: the identity first, then breadth-first
/// layers of right multiplication by the generators, each layer sorted by
/// encoding.
pub fn closure(
    generators: &[Vec<u8>],
    oracle: Arc<dyn Oracle>,
    prime: u32,
    config: &GroupConfig,
) -> Result<FiniteGroup> {
    if config.cap == 0 {
        return Err(Error::InvalidParameter("cap must be at least 1".into()));
    }
    let identity = oracle.identity();
    let ngens = generators.len();
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    index.insert(identity, 0);
    let mut parent = vec![(0u32, u32::MAX)];
    let mut gen_mul: Vec<u32> = Vec::new();

    let mut layer: Vec<u32> = vec![0];
    while !layer.is_empty() {
        let mut products: Vec<Vec<u8>> = Vec::with_capacity(layer.len() * ngens);
        let mut fresh: HashMap<Vec<u8>, (u32, u32)> = HashMap::new();
        for &x in &layer {
            for (j, g) in generators.iter().enumerate() {
                let y = oracle.compose(&elements[x as usize], g);
                if !index.contains_key(&y) && !fresh.contains_key(&y) {
                    fresh.insert(y.clone(), (x, j as u32));
                }
                products.push(y);
            }
        }
        if elements.len() + fresh.len() > config.cap {
            return Err(Error::CapExceeded { cap: config.cap });
        }
        let mut fresh: Vec<(Vec<u8>, (u32, u32))> = fresh.into_iter().collect();
        fresh.sort_by(|a, b| a.0.cmp(&b.0));
        let mut next = Vec::with_capacity(fresh.len());
        for (enc, par) in fresh {
            let idx = elements.len() as u32;
            index.insert(enc.clone(), idx);
            elements.push(enc);
            parent.push(par);
            next.push(idx);
        }
        // Layers are contiguous index ranges, so products can be appended in order.
        debug_assert!(layer
            .first()
            .is_none_or(|&f| f as usize * ngens == gen_mul.len()));
        gen_mul.extend(products.iter().map(|y| index[y]));
        layer = next;
    }

    let n = elements.len();
    if !is_power_of(n, prime) {
        return Err(Error::NotPGroup { order: n, prime });
    }
    let generators_idx: Vec<Elem> = generators.iter().map(|g| index[g] as usize).collect();

    let mut inverses = Vec::with_capacity(n);
    for enc in &elements {
        let inv = oracle.inverse(enc);
        match index.get(&inv) {
            Some(&i) => inverses.push(i),
            None => {
                return Err(Error::OracleInconsistent(format!(
                    "inverse of {} escapes the closure",
                    hex::encode(enc)
                )))
            }
        }
    }

    let backing = if n <= config.table_cap {
        Backing::Table(build_table(n, ngens, &gen_mul, &parent))
    } else {
        Backing::Oracle {
            oracle: oracle.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    };

    let group = FiniteGroup {
        prime,
        elements,
        index,
        generators: generators_idx,
        gen_mul,
        parent,
        inverses,
        backing,
    };
    group.spot_check(oracle.as_ref(), config)?;
    Ok(group)
}

fn build_table(n: usize, ngens: usize, gen_mul: &[u32], parent: &[(u32, u32)]) -> Vec<u32> {
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        table[a * n] = a as u32;
    }
    // a * b = (a * parent(b)) * gen(b), and parent(b) < b.
    for b in 1..n {
        let (pb, j) = parent[b];
        for a in 0..n {
            let left = table[a * n + pb as usize] as usize;
            table[a * n + b] = gen_mul[left * ngens + j as usize];
        }
    }
    table
}

pub(crate) fn is_power_of(mut n: usize, p: u32) -> bool {
    if n == 0 || p < 2 {
        return false;
    }
    while n.is_multiple_of(p as usize) {
        n /= p as usize;
    }
    n == 1
}

/// Exact base-`p` logarithm of a power of `p`.
pub(crate) fn log_p(mut n: usize, p: u32) -> u32 {
    let mut e = 0;
    while n > 1 {
        debug_assert_eq!(n % p as usize, 0);
        n /= p as usize;
        e += 1;
    }
    e
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn mode(&self) -> Mode {
        match self.backing {
            Backing::Table(_) => Mode::Table,
            Backing::Oracle { .. } => Mode::Oracle,
        }
    }

    pub fn is_table_backed(&self) -> bool {
        self.mode() == Mode::Table
    }

    pub fn encoding(&self, x: Elem) -> &[u8] {
        &self.elements[x]
    }

    pub fn encodings(&self) -> &[Vec<u8>] {
        &self.elements
    }

    pub fn index_of(&self, enc: &[u8]) -> Option<Elem> {
        self.index.get(enc).map(|&i| i as usize)
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order()
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.backing {
            Backing::Table(t) => t[a * self.order() + b] as usize,
            Backing::Oracle { oracle, memo } => {
                let key = (a as u32, b as u32);
                if let Some(&c) = memo.lock().unwrap().get(&key) {
                    return c as usize;
                }
                let enc = oracle.compose(&self.elements[a], &self.elements[b]);
                let c = self.index[&enc];
                memo.lock().unwrap().insert(key, c);
                c as usize
            }
        }
    }

    /// `x * generators[j]`, always a table lookup.
    pub fn mul_gen(&self, x: Elem, j: usize) -> Elem {
        self.gen_mul[x * self.generators.len() + j] as usize
    }

    /// Breadth-first parent of a non-identity element: `x = p * generators[j]`.
    pub fn parent(&self, x: Elem) -> Option<(Elem, usize)> {
        if x == 0 {
            None
        } else {
            let (p, j) = self.parent[x];
            Some((p as usize, j as usize))
        }
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a] as usize
    }

    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `b⁻¹ a b`.
    pub fn conjugate(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.first_noncommuting_generators().is_none()
    }

    pub(crate) fn first_noncommuting_generators(&self) -> Option<(Elem, Elem)> {
        let gens = &self.generators;
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                if self.mul(a, b) != self.mul(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Row-major multiplication table, present only in table mode.
    pub fn table(&self) -> Option<&[u32]> {
        match &self.backing {
            Backing::Table(t) => Some(t),
            Backing::Oracle { .. } => None,
        }
    }

    fn spot_check(&self, oracle: &dyn Oracle, config: &GroupConfig) -> Result<()> {
        let n = self.order();
        let e = &self.elements[0];
        for (x, enc) in self.elements.iter().enumerate().take(16) {
            if oracle.compose(e, enc) != *enc || oracle.compose(enc, e) != *enc {
                return Err(Error::OracleInconsistent(format!(
                    "identity is not neutral on element {x}"
                )));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for _ in 0..config.spot_checks {
            let (a, b, c) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            let (ea, eb, ec) = (&self.elements[a], &self.elements[b], &self.elements[c]);
            let left = oracle.compose(&oracle.compose(ea, eb), ec);
            let right = oracle.compose(ea, &oracle.compose(eb, ec));
            if left != right {
                return Err(Error::OracleInconsistent(format!(
                    "associativity fails on ({a}, {b}, {c})"
                )));
            }
        }
        Ok(())
    }
}

/// Composition through the indices of an existing group; used to build
/// subgroups as groups in their own right.
pub(crate) struct ParentOracle(pub Arc<FiniteGroup>);

impl Oracle for ParentOracle {
    fn identity(&self) -> Vec<u8> {
        self.0.encoding(0).to_vec()
    }

    fn compose(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let g = &self.0;
        let c = g.mul(g.index_of(a).unwrap(), g.index_of(b).unwrap());
        g.encoding(c).to_vec()
    }

    fn inverse(&self, a: &[u8]) -> Vec<u8> {
        let g = &self.0;
        g.encoding(g.inv(g.index_of(a).unwrap())).to_vec()
    }
}
