//! Automorphisms of the depth-`d` `p`-ary rooted tree as portraits.
//!
//! A portrait carries one label in `Z/p` per internal vertex, level by
//! level, vertices of a level in lexicographic order. The label at `v` is
//! the rotation applied to the children of `v`, so the automorphism sends
//! the word `x₁x₂…` to `(x₁+a_∅)(x₂+a_{x₁})(x₃+a_{x₁x₂})…`.
//!
//! Products follow function composition: `a∘b` applies `b` first, giving
//! `(a∘b)_v = a_{b(v)} + b_v`.

use std::fmt;
use std::sync::Arc;

use crate::checks::Filtration;
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::group::{closure, FiniteGroup, GroupConfig, Oracle, Subgroup};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TreePortrait {
    p: u32,
    d: usize,
    labels: Vec<u8>,
}

impl fmt::Debug for TreePortrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (p={})", self, self.p)
    }
}

/// Number of internal vertices, `(p^d - 1)/(p - 1)`.
pub fn vertex_count(p: u32, d: usize) -> usize {
    (0..d).map(|l| (p as usize).pow(l as u32)).sum()
}

fn level_offset(p: u32, level: usize) -> usize {
    vertex_count(p, level)
}

impl TreePortrait {
    pub fn identity(p: u32, d: usize) -> Self {
        TreePortrait {
            p,
            d,
            labels: vec![0; vertex_count(p, d)],
        }
    }

    pub fn new(p: u32, d: usize, labels: Vec<u8>) -> Result<Self> {
        if !is_prime(p) || p > 255 {
            return Err(Error::BadPrime(p));
        }
        if labels.len() != vertex_count(p, d) {
            return Err(Error::InvalidParameter(format!(
                "depth {d} needs {} labels, got {}",
                vertex_count(p, d),
                labels.len()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l as u32 >= p) {
            return Err(Error::InvalidParameter(format!(
                "label {l} is not reduced mod {p}"
            )));
        }
        Ok(TreePortrait { p, d, labels })
    }

    /// The rotation by `c` at vertex `position` of `level`, identity elsewhere.
    pub fn elementary(p: u32, d: usize, level: usize, position: usize, c: u8) -> Result<Self> {
        let mut t = Self::identity(p, d);
        if level >= d || position >= (p as usize).pow(level as u32) {
            return Err(Error::InvalidParameter(format!(
                "no vertex {position} on level {level}"
            )));
        }
        t.labels[level_offset(p, level) + position] = c % p as u8;
        Self::new(p, d, t.labels)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.d
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Labels of one level.
    pub fn level(&self, level: usize) -> &[u8] {
        let start = level_offset(self.p, level);
        &self.labels[start..start + (self.p as usize).pow(level as u32)]
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    /// Image of every vertex, level by level, as positions within the level.
    fn vertex_images(&self) -> Vec<usize> {
        let p = self.p as usize;
        let mut img = vec![0usize; vertex_count(self.p, self.d)];
        for level in 1..self.d {
            let (parent_start, start) =
                (level_offset(self.p, level - 1), level_offset(self.p, level));
            for v in 0..p.pow(level as u32) {
                let (parent, c) = (v / p, v % p);
                let a = self.labels[parent_start + parent] as usize;
                img[start + v] = img[parent_start + parent] * p + (c + a) % p;
            }
        }
        img
    }

    /// Image of a leaf-level word (digits most significant first) of length `d`.
    pub fn act(&self, leaf: usize) -> usize {
        let p = self.p as usize;
        let mut out = 0;
        let mut vertex = 0;
        for level in 0..self.d {
            let digit = leaf / p.pow((self.d - 1 - level) as u32) % p;
            let a = self.labels[level_offset(self.p, level) + vertex] as usize;
            out = out * p + (digit + a) % p;
            vertex = vertex * p + digit;
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if (self.p, self.d) != (other.p, other.d) {
            return Err(Error::MixedParameters(format!(
                "p={}, d={} against p={}, d={}",
                self.p, self.d, other.p, other.d
            )));
        }
        Ok(())
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &Self) -> Self {
        let img = other.vertex_images();
        let mut labels = vec![0u8; self.labels.len()];
        for level in 0..self.d {
            let start = level_offset(self.p, level);
            for v in 0..(self.p as usize).pow(level as u32) {
                let i = start + v;
                labels[i] =
                    ((self.labels[start + img[i]] as u32 + other.labels[i] as u32) % self.p) as u8;
            }
        }
        TreePortrait {
            p: self.p,
            d: self.d,
            labels,
        }
    }

    /// Inverse: the label at `a(v)` is `-a_v`.
    pub fn invert(&self) -> Self {
        let img = self.vertex_images();
        let mut labels = vec![0u8; self.labels.len()];
        for level in 0..self.d {
            let start = level_offset(self.p, level);
            for v in 0..(self.p as usize).pow(level as u32) {
                let i = start + v;
                labels[start + img[i]] = ((self.p - self.labels[i] as u32) % self.p) as u8;
            }
        }
        TreePortrait {
            p: self.p,
            d: self.d,
            labels,
        }
    }

    /// Per-level label sums mod `p`: the abelianization `W → C_p^d`.
    pub fn activity(&self) -> Vec<u8> {
        (0..self.d)
            .map(|l| (self.level(l).iter().map(|&x| x as u32).sum::<u32>() % self.p) as u8)
            .collect()
    }

    /// Parses `1/0,1`: levels separated by `/`, labels by `,`.
    pub fn parse(p: u32, text: &str) -> Result<Self> {
        let mut labels = Vec::new();
        let levels: Vec<&str> = text.trim().split('/').collect();
        for (l, part) in levels.iter().enumerate() {
            let row: Vec<u8> = part
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::Parse(format!("bad label {s:?} on level {l}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != (p as usize).pow(l as u32) {
                return Err(Error::Parse(format!(
                    "level {l} has {} labels, expected {}",
                    row.len(),
                    (p as usize).pow(l as u32)
                )));
            }
            labels.extend(row);
        }
        Self::new(p, levels.len(), labels)
    }
}

impl fmt::Display for TreePortrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = (0..self.d)
            .map(|l| {
                self.level(l)
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&levels.join("/"))
    }
}

/// Composition oracle on label encodings.
pub struct TreeOracle {
    p: u32,
    d: usize,
}

impl TreeOracle {
    pub fn new(p: u32, d: usize) -> Self {
        TreeOracle { p, d }
    }

    fn portrait(&self, bytes: &[u8]) -> TreePortrait {
        TreePortrait {
            p: self.p,
            d: self.d,
            labels: bytes.to_vec(),
        }
    }
}

impl Oracle for TreeOracle {
    fn identity(&self) -> Vec<u8> {
        vec![0; vertex_count(self.p, self.d)]
    }

    fn compose(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        self.portrait(a).compose_unchecked(&self.portrait(b)).labels
    }

    fn inverse(&self, a: &[u8]) -> Vec<u8> {
        self.portrait(a).invert().labels
    }
}

/// The iterated wreath product `C_p ≀ … ≀ C_p` (`d` factors), generated by
/// the rotation at the leftmost vertex of each level.
pub fn full_group(p: u32, d: usize, config: &GroupConfig) -> Result<FiniteGroup> {
    if !is_prime(p) || p > 255 {
        return Err(Error::BadPrime(p));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let order = (p as u128).checked_pow(vertex_count(p, d) as u32);
    if order.is_none_or(|o| o > config.table_cap as u128) {
        return Err(Error::CapExceeded {
            cap: config.table_cap,
        });
    }
    let gens = (0..d)
        .map(|l| TreePortrait::elementary(p, d, l, 0, 1).map(|t| t.labels))
        .collect::<Result<Vec<_>>>()?;
    closure(&gens, Arc::new(TreeOracle::new(p, d)), p, config)
}

/// `St(0) ≥ St(1) ≥ … ≥ St(d) = 1` on a group from [`full_group`], where
/// `St(i)` has zero labels on levels below `i`.
pub fn level_stabilizer_filtration(g: &Arc<FiniteGroup>, p: u32, d: usize) -> Result<Filtration> {
    let chain = (0..=d)
        .map(|i| {
            let cut = vertex_count(p, i);
            Subgroup::from_predicate(g, |x| g.encoding(x)[..cut].iter().all(|&l| l == 0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Filtration::new(g.clone(), chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{abelian_invariants, derived_length, exponent, quotient};

    fn t(p: u32, s: &str) -> TreePortrait {
        TreePortrait::parse(p, s).unwrap()
    }

    /// Leaf permutation of a portrait, computed independently of
    /// `vertex_images` by walking each word.
    fn leaf_perm(a: &TreePortrait) -> Vec<usize> {
        (0..(a.p as usize).pow(a.d as u32))
            .map(|x| a.act(x))
            .collect()
    }

    #[test]
    fn composition_matches_leaf_action() {
        let cases = [
            (2, "1/0,1", "0/1,0"),
            (2, "1/1,0/0,1,1,0", "0/1,1/1,0,0,1"),
            (3, "2/1,0,2", "1/2,2,0"),
        ];
        for (p, a, b) in cases {
            let (a, b) = (t(p, a), t(p, b));
            let ab = a.compose(&b).unwrap();
            let (pa, pb, pab) = (leaf_perm(&a), leaf_perm(&b), leaf_perm(&ab));
            for x in 0..pa.len() {
                assert_eq!(pab[x], pa[pb[x]]);
            }
            assert!(a.compose(&a.invert()).unwrap().is_identity());
            assert!(a.invert().compose(&a).unwrap().is_identity());
        }
    }

    #[test]
    fn worked_products() {
        let swap = t(2, "1");
        assert!(swap.compose(&swap).unwrap().is_identity());
        let root = t(2, "1/0,0");
        let left = t(2, "0/1,0");
        // Applying the leaf swap first, then the root swap.
        assert_eq!(root.compose(&left).unwrap(), t(2, "1/1,0"));
        assert_eq!(left.compose(&root).unwrap(), t(2, "1/0,1"));
        assert_eq!(TreePortrait::identity(2, 2).compose(&left).unwrap(), left);
        assert!(root.compose(&t(2, "1")).is_err());
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(t(2, "1/0,1").to_string(), "1/0,1");
        assert!(TreePortrait::parse(2, "1/0").is_err());
        assert!(TreePortrait::parse(2, "2").is_err());
    }

    #[test]
    fn small_wreath_products() {
        let cfg = GroupConfig::default();
        let g = full_group(2, 2, &cfg).unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        assert_eq!(exponent(&g), 4);
        assert_eq!(derived_length(&g).unwrap(), 2);
        assert_eq!(full_group(2, 3, &cfg).unwrap().order(), 128);
        assert_eq!(full_group(3, 2, &cfg).unwrap().order(), 81);
        assert!(matches!(
            full_group(2, 4, &cfg),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn stabilizer_factors_are_elementary() {
        let cfg = GroupConfig::default();
        for (p, d) in [(2, 2), (2, 3), (3, 2)] {
            let g = Arc::new(full_group(p, d, &cfg).unwrap());
            let f = level_stabilizer_filtration(&g, p, d).unwrap();
            assert!(crate::checks::check_filtration(&g, f.chain()).passed());
            for i in 1..=d {
                let factor = f.factor(i, &cfg).unwrap();
                let inv = abelian_invariants(&factor.group).unwrap();
                assert!(inv.is_elementary(p));
                assert_eq!(inv.rank(), (p as usize).pow(i as u32 - 1));
            }
        }
    }

    #[test]
    fn activity_is_the_abelianization() {
        let cfg = GroupConfig::default();
        for d in 1..=3 {
            let g = Arc::new(full_group(2, d, &cfg).unwrap());
            let decode = |x| TreePortrait::new(2, d, g.encoding(x).to_vec()).unwrap();
            let derived = crate::group::derived_subgroup(&g, &Subgroup::whole(&g));
            let kernel =
                Subgroup::from_predicate(&g, |x| decode(x).activity().iter().all(|&c| c == 0))
                    .unwrap();
            assert_eq!(kernel, derived);
            let (ab, _) = quotient(&g, &derived, &cfg).unwrap();
            assert_eq!(ab.order(), 1 << d);
        }
    }
}
