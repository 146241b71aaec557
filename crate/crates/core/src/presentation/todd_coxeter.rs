//! HLT coset enumeration with coincidence processing, followed by
//! standardization, and the regular representation of a closed table.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::{Presentation, Word};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::group::{closure, FiniteGroup, GroupConfig, Oracle};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Cosets that may ever be defined, live or dead.
    pub max_cosets: usize,
    /// Relator scans allowed.
    pub max_steps: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cosets: 1 << 20,
            max_steps: 1 << 24,
        }
    }
}

/// A closed, standardized coset table. Columns are `x₀, x₀⁻¹, x₁, x₁⁻¹, …`;
/// coset 0 is the subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    ngens: usize,
    rows: Vec<Vec<u32>>,
    /// Cosets defined during the enumeration, including ones later merged.
    pub total_defined: usize,
}

fn column(letter: i32) -> usize {
    let g = letter.unsigned_abs() as usize - 1;
    2 * g + usize::from(letter < 0)
}

fn inverse_column(c: usize) -> usize {
    c ^ 1
}

impl CosetTable {
    /// `[G : H]`.
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn generator_count(&self) -> usize {
        self.ngens
    }

    /// Coset reached from `c` by the generator (or inverse) in column `col`.
    pub fn act(&self, c: usize, col: usize) -> usize {
        self.rows[c][col] as usize
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// `c · w`.
    pub fn trace(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |c, &l| self.act(c, column(l)))
    }

    /// Permutation of the cosets induced by generator `g`.
    pub fn permutation(&self, g: usize) -> Vec<u32> {
        self.rows.iter().map(|r| r[2 * g]).collect()
    }
}

struct Enumerator {
    ncols: usize,
    table: Vec<Vec<u32>>,
    parent: Vec<u32>,
    queue: Vec<u32>,
    limits: EnumerationLimits,
    steps: usize,
}

impl Enumerator {
    fn new(ncols: usize, limits: EnumerationLimits) -> Self {
        Enumerator {
            ncols,
            table: vec![vec![NONE; ncols]],
            parent: vec![0],
            queue: Vec::new(),
            limits,
            steps: 0,
        }
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<()> {
        if self.table.len() >= self.limits.max_cosets {
            return Err(Error::LimitExceeded(format!(
                "more than {} cosets defined",
                self.limits.max_cosets
            )));
        }
        let d = self.table.len() as u32;
        self.table.push(vec![NONE; self.ncols]);
        self.parent.push(d);
        self.table[c as usize][x] = d;
        self.table[d as usize][inverse_column(x)] = c;
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (keep, drop) = (k.min(l), k.max(l));
        self.parent[drop as usize] = keep;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let f = self.table[e as usize][x];
                if f == NONE {
                    continue;
                }
                let xi = inverse_column(x);
                if self.table[f as usize][xi] == e {
                    self.table[f as usize][xi] = NONE;
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                let t = self.table[e1 as usize][x];
                if t != NONE {
                    self.merge(f1, t);
                } else {
                    let u = self.table[f1 as usize][xi];
                    if u != NONE {
                        self.merge(e1, u);
                    } else {
                        self.table[e1 as usize][x] = f1;
                        self.table[f1 as usize][xi] = e1;
                    }
                }
            }
        }
        self.queue.clear();
    }

    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> Result<()> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(Error::LimitExceeded(format!(
                "more than {} relator scans",
                self.limits.max_steps
            )));
        }
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f as usize][w[i]] != NONE {
                f = self.table[f as usize][w[i]];
                i += 1;
            }
            if i as isize > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b as usize][inverse_column(w[j as usize])] != NONE {
                b = self.table[b as usize][inverse_column(w[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f as usize][w[i]] = b;
                self.table[b as usize][inverse_column(w[i])] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    /// Renumbers live cosets in order of first appearance scanning rows
    /// from coset 0, column by column.
    fn standardize(mut self) -> CosetTable {
        let total = self.table.len();
        let mut order: Vec<u32> = vec![0];
        let mut new_index: HashMap<u32, u32> = HashMap::from([(0, 0)]);
        let mut k = 0;
        while k < order.len() {
            let c = order[k];
            for x in 0..self.ncols {
                let d = self.rep(self.table[c as usize][x]);
                if let std::collections::hash_map::Entry::Vacant(v) = new_index.entry(d) {
                    v.insert(order.len() as u32);
                    order.push(d);
                }
            }
            k += 1;
        }
        let rows = order
            .iter()
            .map(|&c| {
                (0..self.ncols)
                    .map(|x| {
                        let d = self.table[c as usize][x];
                        new_index[&self.rep(d)]
                    })
                    .collect()
            })
            .collect();
        CosetTable {
            ngens: self.ncols / 2,
            rows,
            total_defined: total,
        }
    }
}

/// Enumerates the cosets of `⟨subgroup⟩` in the group presented by `p`.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup: &[Word],
    limits: EnumerationLimits,
) -> Result<CosetTable> {
    if limits.max_cosets == 0 || limits.max_steps == 0 {
        return Err(Error::InvalidParameter("limits must be positive".into()));
    }
    if let Some(w) = subgroup.iter().find(|w| w.rank_needed() > p.rank()) {
        return Err(Error::UndeclaredGenerator(format!(
            "subgroup word uses generator #{}",
            w.rank_needed()
        )));
    }
    let ncols = 2 * p.rank();
    let to_cols = |w: &Word| -> Vec<usize> { w.letters().into_iter().map(column).collect() };
    let relators: Vec<Vec<usize>> = p.relators().iter().map(to_cols).collect();
    let mut e = Enumerator::new(ncols, limits);
    for w in subgroup {
        e.scan_and_fill(0, &to_cols(w))?;
    }
    let mut c = 0u32;
    while (c as usize) < e.table.len() {
        for r in &relators {
            if !e.live(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        for x in 0..ncols {
            if e.live(c) && e.table[c as usize][x] == NONE {
                e.define(c, x)?;
            }
        }
        c += 1;
    }
    let table = e.standardize();
    debug_assert!(p
        .relators()
        .iter()
        .all(|r| (0..table.index()).all(|c| table.trace(c, r) == c)));
    Ok(table)
}

/// Group law on cosets of the trivial subgroup: `c · d` traces the
/// spanning-tree word of `d` from `c`.
struct RegularOracle {
    table: CosetTable,
    words: Vec<Vec<usize>>,
    width: usize,
}

impl RegularOracle {
    fn new(table: CosetTable) -> Self {
        let n = table.index();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for x in 0..2 * table.ngens {
                let d = table.act(c, x);
                if words[d].is_none() {
                    let mut w = words[c].clone().unwrap();
                    w.push(x);
                    words[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        let bits = usize::BITS - n.saturating_sub(1).leading_zeros();
        RegularOracle {
            words: words
                .into_iter()
                .map(|w| w.expect("table is connected"))
                .collect(),
            table,
            width: (bits as usize).div_ceil(8).max(1),
        }
    }

    fn enc(&self, c: usize) -> Vec<u8> {
        c.to_be_bytes()[std::mem::size_of::<usize>() - self.width..].to_vec()
    }

    fn dec(&self, b: &[u8]) -> usize {
        b.iter().fold(0, |acc, &x| acc << 8 | x as usize)
    }
}

impl Oracle for RegularOracle {
    fn identity(&self) -> Vec<u8> {
        self.enc(0)
    }

    fn compose(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let c = self.words[self.dec(b)]
            .iter()
            .fold(self.dec(a), |c, &x| self.table.act(c, x));
        self.enc(c)
    }

    fn inverse(&self, a: &[u8]) -> Vec<u8> {
        let c = self.words[self.dec(a)]
            .iter()
            .rev()
            .fold(0, |c, &x| self.table.act(c, inverse_column(x)));
        self.enc(c)
    }
}

fn smallest_prime_factor(n: usize) -> Option<u32> {
    (2..=n).find(|&d| n.is_multiple_of(d)).map(|d| d as u32)
}

/// Realizes the group from a table over the trivial subgroup. Generator
/// images are the cosets `0·xᵢ`; every relator is evaluated on them and
/// the order is compared against an independent closure of the coset
/// permutations.
pub fn regular_group(
    p: &Presentation,
    table: &CosetTable,
    config: &GroupConfig,
) -> Result<FiniteGroup> {
    if table.generator_count() != p.rank() {
        return Err(Error::InvalidParameter(
            "table does not match the presentation".into(),
        ));
    }
    let n = table.index();
    let prime = smallest_prime_factor(n).unwrap_or(2);
    if !is_prime(prime) || !crate::group::is_power_of(n, prime) {
        return Err(Error::NotPGroup { order: n, prime });
    }
    let oracle = Arc::new(RegularOracle::new(table.clone()));
    let gens: Vec<Vec<u8>> = (0..p.rank())
        .map(|g| oracle.enc(table.act(0, 2 * g)))
        .collect();
    let g = closure(&gens, oracle.clone(), prime, config)?;
    if g.order() != n {
        return Err(Error::OracleInconsistent(format!(
            "regular closure has order {} but the table has {n} cosets",
            g.order()
        )));
    }
    for (i, r) in p.relators().iter().enumerate() {
        let value = r.syllables().iter().fold(g.identity(), |acc, &(s, e)| {
            g.mul(acc, g.pow(g.generators()[s], e))
        });
        if value != g.identity() {
            return Err(Error::RelatorViolation(i));
        }
    }
    if n <= 4096 {
        let perm_order = permutation_closure_order(table, config.cap)?;
        if perm_order != n {
            return Err(Error::OracleInconsistent(format!(
                "coset permutations generate a group of order {perm_order}, not {n}"
            )));
        }
    }
    Ok(g)
}

/// Order of the permutation group generated by the generator columns,
/// by plain closure over permutations.
pub fn permutation_closure_order(table: &CosetTable, cap: usize) -> Result<usize> {
    let gens: Vec<Vec<u32>> = (0..table.generator_count())
        .map(|g| table.permutation(g))
        .collect();
    let identity: Vec<u32> = (0..table.index() as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q: Vec<u32> = p.iter().map(|&i| g[i as usize]).collect();
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                queue.push_back(q);
            }
        }
    }
    Ok(seen.len())
}
