use std::collections::HashMap;
use std::sync::Arc;

use super::{closure, Elem, FiniteGroup, GroupConfig, GroupHom, Oracle, ParentOracle};
use crate::error::{Error, Result};

/// A subgroup of some [`FiniteGroup`], stored as a sorted member list plus a
/// membership mask over the parent's indices.
///
/// `gens` is a generating set; it is kept small (at most `log_p |H|`
/// elements when built greedily) because commutator-based series iterate
/// over pairs of it.
#[derive(Debug, Clone)]
pub struct Subgroup {
    members: Vec<Elem>,
    mask: Vec<bool>,
    gens: Vec<Elem>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn trivial(g: &FiniteGroup) -> Self {
        let mut mask = vec![false; g.order()];
        mask[0] = true;
        Subgroup {
            members: vec![0],
            mask,
            gens: Vec::new(),
        }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup {
            members: g.elements().collect(),
            mask: vec![true; g.order()],
            gens: g.generators().to_vec(),
        }
    }

    /// Builds a subgroup from an explicit member set, checking closure.
    pub fn from_members(g: &FiniteGroup, members: &[Elem]) -> Result<Self> {
        let mut mask = vec![false; g.order()];
        for &m in members {
            mask[m] = true;
        }
        if !mask[0] {
            return Err(Error::InvalidParameter(
                "member set lacks the identity".into(),
            ));
        }
        let gens = greedy_generators(g, members.iter().copied());
        let sub = from_gens(g, gens);
        if sub.mask != mask {
            return Err(Error::InvalidParameter(
                "member set is not closed under multiplication".into(),
            ));
        }
        Ok(sub)
    }

    /// Members satisfying `pred`; the predicate must cut out a subgroup.
    pub fn from_predicate(g: &FiniteGroup, pred: impl Fn(Elem) -> bool) -> Result<Self> {
        let members: Vec<Elem> = g.elements().filter(|&x| pred(x)).collect();
        Self::from_members(g, &members)
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.mask[x]
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        self.normality_witness(g).is_none()
    }

    /// A pair `(n, x)` with `x⁻¹ n x` outside the subgroup, if any.
    pub fn normality_witness(&self, g: &FiniteGroup) -> Option<(Elem, Elem)> {
        for &n in &self.gens {
            for &x in g.generators() {
                if !self.contains(g.conjugate(n, x)) {
                    return Some((n, x));
                }
            }
        }
        None
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        self.gens.iter().enumerate().all(|(i, &a)| {
            self.gens[i + 1..]
                .iter()
                .all(|&b| g.mul(a, b) == g.mul(b, a))
        })
    }
}

/// Mask of the subgroup generated by `gens`.
fn span(g: &FiniteGroup, gens: &[Elem]) -> (Vec<bool>, Vec<Elem>) {
    let mut mask = vec![false; g.order()];
    mask[0] = true;
    let mut members = vec![0];
    let mut head = 0;
    while head < members.len() {
        let x = members[head];
        head += 1;
        for &s in gens {
            let y = g.mul(x, s);
            if !mask[y] {
                mask[y] = true;
                members.push(y);
            }
        }
    }
    members.sort_unstable();
    (mask, members)
}

fn from_gens(g: &FiniteGroup, gens: Vec<Elem>) -> Subgroup {
    let (mask, members) = span(g, &gens);
    Subgroup {
        members,
        mask,
        gens,
    }
}

/// Walks `candidates` in order, keeping each one not already in the span of
/// those kept so far.
pub(crate) fn greedy_generators(
    g: &FiniteGroup,
    candidates: impl Iterator<Item = Elem>,
) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut mask = vec![false; g.order()];
    mask[0] = true;
    for c in candidates {
        if !mask[c] {
            gens.push(c);
            mask = span(g, &gens).0;
        }
    }
    gens
}

pub fn subgroup_generated(g: &FiniteGroup, seeds: &[Elem]) -> Subgroup {
    let gens = greedy_generators(g, seeds.iter().copied());
    from_gens(g, gens)
}

pub fn normal_closure(g: &FiniteGroup, seeds: &[Elem]) -> Subgroup {
    let mut sub = subgroup_generated(g, seeds);
    loop {
        let mut grew = false;
        let mut i = 0;
        while i < sub.gens.len() {
            let h = sub.gens[i];
            for &x in g.generators() {
                let c = g.conjugate(h, x);
                if !sub.contains(c) {
                    let mut gens = sub.gens.clone();
                    gens.push(c);
                    sub = from_gens(g, gens);
                    grew = true;
                }
            }
            i += 1;
        }
        if !grew {
            return sub;
        }
    }
}

/// Realizes `h` as a group of its own, together with the inclusion map.
pub fn subgroup_as_group(
    g: &Arc<FiniteGroup>,
    h: &Subgroup,
    config: &GroupConfig,
) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    let gens: Vec<Vec<u8>> = h.gens.iter().map(|&x| g.encoding(x).to_vec()).collect();
    let sub = Arc::new(closure(
        &gens,
        Arc::new(ParentOracle(g.clone())),
        g.prime(),
        config,
    )?);
    let images = sub
        .encodings()
        .iter()
        .map(|e| g.index_of(e).unwrap())
        .collect();
    let inclusion = GroupHom::from_images_unchecked(sub.clone(), g.clone(), images);
    Ok((sub, inclusion))
}

struct QuotientOracle {
    group: Arc<FiniteGroup>,
    coset: Vec<u32>,
    rep: Vec<Elem>,
}

impl QuotientOracle {
    fn rep_of(&self, x: Elem) -> Vec<u8> {
        self.group
            .encoding(self.rep[self.coset[x] as usize])
            .to_vec()
    }
}

impl Oracle for QuotientOracle {
    fn identity(&self) -> Vec<u8> {
        self.rep_of(0)
    }

    fn compose(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let g = &self.group;
        self.rep_of(g.mul(g.index_of(a).unwrap(), g.index_of(b).unwrap()))
    }

    fn inverse(&self, a: &[u8]) -> Vec<u8> {
        let g = &self.group;
        self.rep_of(g.inv(g.index_of(a).unwrap()))
    }
}

/// `G/N` with each coset encoded by its member of least encoding, plus the
/// projection.
pub fn quotient(
    g: &Arc<FiniteGroup>,
    n: &Subgroup,
    config: &GroupConfig,
) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if let Some((a, x)) = n.normality_witness(g) {
        return Err(Error::NotNormal(format!(
            "conjugate of {} by {} leaves the subgroup",
            hex::encode(g.encoding(a)),
            hex::encode(g.encoding(x))
        )));
    }
    let mut coset = vec![u32::MAX; g.order()];
    let mut rep = Vec::new();
    for x in g.elements() {
        if coset[x] != u32::MAX {
            continue;
        }
        let id = rep.len() as u32;
        let mut best = x;
        for &m in n.members() {
            let y = g.mul(x, m);
            coset[y] = id;
            if g.encoding(y) < g.encoding(best) {
                best = y;
            }
        }
        rep.push(best);
    }
    let oracle = QuotientOracle {
        group: g.clone(),
        coset,
        rep,
    };
    let gens: Vec<Vec<u8>> = g.generators().iter().map(|&x| oracle.rep_of(x)).collect();
    let oracle = Arc::new(oracle);
    let q = Arc::new(closure(&gens, oracle.clone(), g.prime(), config)?);
    let mut lookup: HashMap<u32, Elem> = HashMap::new();
    for (c, &r) in oracle.rep.iter().enumerate() {
        lookup.insert(c as u32, q.index_of(g.encoding(r)).unwrap());
    }
    let images = g.elements().map(|x| lookup[&oracle.coset[x]]).collect();
    let proj = GroupHom::from_images_unchecked(g.clone(), q.clone(), images);
    Ok((q, proj))
}
