use std::sync::Arc;

use super::series::frattini_subgroup;
use super::subgroup::{quotient, subgroup_generated, Subgroup};
use super::{Elem, FiniteGroup, GroupConfig};
use crate::error::{Error, Result};

/// A homomorphism stored as its full image table.
#[derive(Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<u32>,
}

impl std::fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupHom")
            .field("source_order", &self.source.order())
            .field("target_order", &self.target.order())
            .finish()
    }
}

impl GroupHom {
    pub(crate) fn from_images_unchecked(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: Vec<Elem>,
    ) -> Self {
        debug_assert_eq!(images.len(), source.order());
        GroupHom {
            source,
            target,
            images: images.into_iter().map(|x| x as u32).collect(),
        }
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        Self::from_images_unchecked(g.clone(), g.clone(), g.elements().collect())
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn image(&self, x: Elem) -> Elem {
        self.images[x] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = Elem> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_predicate(&self.source, |x| self.images[x] == 0)
            .expect("kernel of a homomorphism is a subgroup")
    }

    pub fn image_subgroup(&self) -> Subgroup {
        let seeds: Vec<Elem> = self
            .source
            .generators()
            .iter()
            .map(|&g| self.image(g))
            .collect();
        subgroup_generated(&self.target, &seeds)
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.order() != self.target.order() {
            return false;
        }
        let mut seen = vec![false; self.target.order()];
        for &y in &self.images {
            if std::mem::replace(&mut seen[y as usize], true) {
                return false;
            }
        }
        true
    }

    /// Checks `f(ab) = f(a) f(b)` on the given pairs; returns the first failure.
    pub fn check_pairs(
        &self,
        pairs: impl IntoIterator<Item = (Elem, Elem)>,
    ) -> Option<(Elem, Elem)> {
        let (s, t) = (&self.source, &self.target);
        pairs
            .into_iter()
            .find(|&(a, b)| self.image(s.mul(a, b)) != t.mul(self.image(a), self.image(b)))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert!(Arc::ptr_eq(&self.target, &other.source));
        let images = self.images().map(|y| other.image(y)).collect();
        Self::from_images_unchecked(self.source.clone(), other.target.clone(), images)
    }
}

/// Breadth-first spanning structure of the subgroup generated by `gens`,
/// used to extend generator images to homomorphisms.
pub struct CayleyGraph {
    gens: Vec<Elem>,
    bfs: Vec<Elem>,
    succ: Vec<u32>,
}

impl CayleyGraph {
    pub fn new(g: &FiniteGroup, gens: &[Elem]) -> Self {
        let n = g.order();
        let d = gens.len();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut bfs = vec![0];
        let mut succ = vec![u32::MAX; n * d];
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head];
            head += 1;
            for (j, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                succ[x * d + j] = y as u32;
                if !seen[y] {
                    seen[y] = true;
                    bfs.push(y);
                }
            }
        }
        CayleyGraph {
            gens: gens.to_vec(),
            bfs,
            succ,
        }
    }

    /// Order of the subgroup spanned by the generators.
    pub fn reach(&self) -> usize {
        self.bfs.len()
    }

    /// Extends `images[j]` (the image of `gens[j]`) along the graph,
    /// checking every edge. Returns the image table indexed by source element,
    /// or the first inconsistent element.
    pub fn try_extend(
        &self,
        source_order: usize,
        target: &FiniteGroup,
        images: &[Elem],
    ) -> std::result::Result<Vec<u32>, Elem> {
        let d = self.gens.len();
        let mut img = vec![u32::MAX; source_order];
        img[0] = 0;
        for &x in &self.bfs {
            let fx = img[x] as usize;
            for (j, &t) in images.iter().enumerate() {
                let y = self.succ[x * d + j] as usize;
                let v = target.mul(fx, t) as u32;
                if img[y] == u32::MAX {
                    img[y] = v;
                } else if img[y] != v {
                    return Err(y);
                }
            }
        }
        Ok(img)
    }
}

/// The unique homomorphism sending `source.generators()[j]` to `images[j]`.
pub fn hom_from_images(
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    images: &[Elem],
) -> Result<GroupHom> {
    if images.len() != source.generators().len() {
        return Err(Error::InvalidParameter(format!(
            "expected {} generator images, got {}",
            source.generators().len(),
            images.len()
        )));
    }
    let graph = CayleyGraph::new(source, source.generators());
    extend(source, target, &graph, images)
}

/// The homomorphism determined by `a ↦ b` for the given pairs, whose first
/// components must generate the source.
pub fn hom_from_pairs(
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    pairs: &[(Elem, Elem)],
) -> Result<GroupHom> {
    let (dom, img): (Vec<Elem>, Vec<Elem>) = pairs.iter().copied().unzip();
    let graph = CayleyGraph::new(source, &dom);
    if graph.reach() != source.order() {
        return Err(Error::InvalidParameter(format!(
            "pair sources generate a subgroup of order {} in a group of order {}",
            graph.reach(),
            source.order()
        )));
    }
    extend(source, target, &graph, &img)
}

fn extend(
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    graph: &CayleyGraph,
    images: &[Elem],
) -> Result<GroupHom> {
    match graph.try_extend(source.order(), target, images) {
        Ok(img) => Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            images: img,
        }),
        Err(y) => Err(Error::NotAHomomorphism(format!(
            "conflicting images for element {}",
            hex::encode(source.encoding(y))
        ))),
    }
}

/// A bijective endomorphism together with its order.
#[derive(Clone, Debug)]
pub struct Automorphism {
    hom: GroupHom,
    order: usize,
}

impl Automorphism {
    pub fn new(hom: GroupHom) -> Result<Self> {
        if !Arc::ptr_eq(&hom.source, &hom.target) {
            return Err(Error::InvalidParameter(
                "automorphism must map a group to itself".into(),
            ));
        }
        if !hom.is_bijective() {
            return Err(Error::NotBijective("endomorphism is not injective".into()));
        }
        let order = permutation_order(&hom.images);
        Ok(Automorphism { hom, order })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        Automorphism {
            hom: GroupHom::identity(g),
            order: 1,
        }
    }

    /// `x ↦ x⁻¹`; a homomorphism exactly when the group is abelian.
    pub fn inversion(g: &Arc<FiniteGroup>) -> Result<Self> {
        Self::from_encoding_map(g, |e| g.encoding(g.inv(g.index_of(e).unwrap())).to_vec())
    }

    /// Conjugation `x ↦ c⁻¹ x c` by an element of the group.
    pub fn inner(g: &Arc<FiniteGroup>, c: Elem) -> Self {
        let images = g.elements().map(|x| g.conjugate(x, c)).collect();
        Self::new(GroupHom::from_images_unchecked(
            g.clone(),
            g.clone(),
            images,
        ))
        .expect("inner automorphisms are bijective")
    }

    /// Builds an automorphism from a map on encodings, validating it fully.
    pub fn from_encoding_map(g: &Arc<FiniteGroup>, f: impl Fn(&[u8]) -> Vec<u8>) -> Result<Self> {
        let mut images = Vec::with_capacity(g.order());
        for x in g.elements() {
            let y = f(g.encoding(x));
            match g.index_of(&y) {
                Some(i) => images.push(i),
                None => {
                    return Err(Error::NotAHomomorphism(format!(
                        "image of {} leaves the group",
                        hex::encode(g.encoding(x))
                    )))
                }
            }
        }
        let hom = GroupHom::from_images_unchecked(g.clone(), g.clone(), images);
        let gens = g
            .generators()
            .iter()
            .map(|&s| hom.image(s))
            .collect::<Vec<_>>();
        let rebuilt = hom_from_images(g, g, &gens)?;
        if rebuilt.images != hom.images {
            return Err(Error::NotAHomomorphism(
                "map disagrees with the homomorphism determined by generator images".into(),
            ));
        }
        Self::new(hom)
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.hom.source
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.hom.image(x)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism::new(other.hom.then(&self.hom)).expect("composite of automorphisms")
    }

    /// The induced automorphism on `target` of `proj`, provided the kernel
    /// is stable. Fails with `NotWellDefined` otherwise.
    pub fn induced(&self, proj: &GroupHom) -> Result<Automorphism> {
        assert!(Arc::ptr_eq(&proj.source, &self.hom.source));
        let q = proj.target.clone();
        let mut images = vec![u32::MAX; q.order()];
        for x in self.group().elements() {
            let qx = proj.image(x);
            let v = proj.image(self.apply(x)) as u32;
            if images[qx] == u32::MAX {
                images[qx] = v;
            } else if images[qx] != v {
                return Err(Error::NotWellDefined(format!(
                    "automorphism does not preserve the kernel (element {})",
                    hex::encode(self.group().encoding(x))
                )));
            }
        }
        Automorphism::new(GroupHom {
            source: q.clone(),
            target: q,
            images,
        })
    }

    /// Pulls back along an isomorphism `iso: other → group`, giving the
    /// conjugated automorphism `iso⁻¹ ∘ self ∘ iso` on `other`.
    pub fn restrict_to(&self, inclusion: &GroupHom) -> Result<Automorphism> {
        let sub = inclusion.source.clone();
        let g = self.group();
        let mut images = Vec::with_capacity(sub.order());
        for x in sub.elements() {
            let y = self.apply(inclusion.image(x));
            match sub.index_of(g.encoding(y)) {
                Some(i) => images.push(i),
                None => {
                    return Err(Error::NotWellDefined(
                        "automorphism does not preserve the subgroup".into(),
                    ))
                }
            }
        }
        Automorphism::new(GroupHom::from_images_unchecked(sub.clone(), sub, images))
    }
}

fn permutation_order(images: &[u32]) -> usize {
    let mut seen = vec![false; images.len()];
    let mut order = 1usize;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = images[x] as usize;
            len += 1;
        }
        order = lcm(order, len);
    }
    order
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub fn fixed_subgroup(g: &FiniteGroup, sigma: &Automorphism) -> Subgroup {
    Subgroup::from_predicate(g, |x| sigma.apply(x) == x).expect("fixed points form a subgroup")
}

/// True iff every automorphism in `auts` maps `n` onto itself.
pub fn is_characteristic(n: &Subgroup, auts: &[Automorphism]) -> bool {
    auts.iter()
        .all(|s| n.members().iter().all(|&x| n.contains(s.apply(x))))
}

/// Every automorphism of a table-backed group of order at most `cap`.
///
/// Images are chosen for a minimal generating set (a lift of a basis of the
/// Frattini quotient), restricted to elements of matching order whose
/// Frattini classes stay independent, then extended and validated.
pub fn enumerate_automorphisms(g: &Arc<FiniteGroup>, cap: usize) -> Result<Vec<Automorphism>> {
    if g.order() > cap {
        return Err(Error::CapExceeded { cap });
    }
    if !g.is_table_backed() {
        return Err(Error::NotTableBacked);
    }
    let config = GroupConfig::default();
    let phi = frattini_subgroup(g);
    let (fq, proj) = quotient(g, &phi, &config)?;

    let mut basis_mask = vec![false; fq.order()];
    basis_mask[0] = true;
    let mut min_gens = Vec::new();
    for x in g.elements() {
        let px = proj.image(x);
        if !basis_mask[px] {
            min_gens.push(x);
            let seeds: Vec<Elem> = min_gens.iter().map(|&m| proj.image(m)).collect();
            basis_mask = mask_of(&fq, &seeds);
        }
    }
    debug_assert_eq!(subgroup_generated(g, &min_gens).order(), g.order());

    let orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let candidates: Vec<Vec<Elem>> = min_gens
        .iter()
        .map(|&m| g.elements().filter(|&y| orders[y] == orders[m]).collect())
        .collect();
    let graph = CayleyGraph::new(g, &min_gens);

    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(min_gens.len());
    search(g, &fq, &proj, &graph, &candidates, &mut chosen, &mut out);
    Ok(out)
}

fn mask_of(g: &FiniteGroup, seeds: &[Elem]) -> Vec<bool> {
    let sub = subgroup_generated(g, seeds);
    let mut mask = vec![false; g.order()];
    for &m in sub.members() {
        mask[m] = true;
    }
    mask
}

fn search(
    g: &Arc<FiniteGroup>,
    fq: &FiniteGroup,
    proj: &GroupHom,
    graph: &CayleyGraph,
    candidates: &[Vec<Elem>],
    chosen: &mut Vec<Elem>,
    out: &mut Vec<Automorphism>,
) {
    let depth = chosen.len();
    if depth == candidates.len() {
        if let Ok(img) = graph.try_extend(g.order(), g, chosen) {
            let hom = GroupHom {
                source: g.clone(),
                target: g.clone(),
                images: img,
            };
            out.push(Automorphism::new(hom).expect("independent images give a bijection"));
        }
        return;
    }
    let seeds: Vec<Elem> = chosen.iter().map(|&c| proj.image(c)).collect();
    let span = mask_of(fq, &seeds);
    for &y in &candidates[depth] {
        if span[proj.image(y)] {
            continue;
        }
        chosen.push(y);
        search(g, fq, proj, graph, candidates, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;

    #[test]
    fn trivial_and_inversion_homs() {
        let g = abelian(&[3, 3], 3);
        let triv = hom_from_images(&g, &g, &[0, 0]).unwrap();
        assert!(triv.images().all(|y| y == 0));
        let inv = Automorphism::inversion(&g).unwrap();
        assert_eq!(inv.order(), 2);
        for x in g.elements() {
            assert_eq!(inv.apply(x), g.inv(x));
        }
    }

    #[test]
    fn inversion_fails_on_nonabelian() {
        let g = dihedral8();
        assert!(matches!(
            Automorphism::inversion(&g),
            Err(Error::NotAHomomorphism(_))
        ));
    }

    #[test]
    fn fixed_subgroups() {
        let g = abelian(&[3, 3], 3);
        assert_eq!(fixed_subgroup(&g, &Automorphism::identity(&g)).order(), 9);
        let inv = Automorphism::inversion(&g).unwrap();
        assert_eq!(fixed_subgroup(&g, &inv).order(), 1);
        let swap = Automorphism::from_encoding_map(&g, |e| vec![e[1], e[0]]).unwrap();
        let fix = fixed_subgroup(&g, &swap);
        assert_eq!(fix.order(), 3);
        assert!(fix.members().iter().all(|&x| {
            let e = g.encoding(x);
            e[0] == e[1]
        }));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(
            enumerate_automorphisms(&abelian(&[3], 3), 512)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            enumerate_automorphisms(&abelian(&[3, 3], 3), 512)
                .unwrap()
                .len(),
            48
        );
        assert_eq!(enumerate_automorphisms(&dihedral8(), 512).unwrap().len(), 8);
        assert_eq!(
            enumerate_automorphisms(&abelian(&[9], 3), 512)
                .unwrap()
                .len(),
            6
        );
        // |Aut(C3 x C9)| = 108
        assert_eq!(
            enumerate_automorphisms(&abelian(&[3, 9], 3), 512)
                .unwrap()
                .len(),
            108
        );
        assert!(matches!(
            enumerate_automorphisms(&abelian(&[3, 3], 3), 8),
            Err(Error::CapExceeded { cap: 8 })
        ));
    }

    #[test]
    fn characteristic_checks() {
        let g = abelian(&[3, 3], 3);
        let auts = enumerate_automorphisms(&g, 512).unwrap();
        let factor = subgroup_generated(&g, &[g.generators()[0]]);
        assert!(!is_characteristic(&factor, &auts));
        let swap = Automorphism::from_encoding_map(&g, |e| vec![e[1], e[0]]).unwrap();
        assert!(!is_characteristic(&factor, &[swap]));
        assert!(is_characteristic(&Subgroup::whole(&g), &auts));
    }

    #[test]
    fn pairs_determine_homs() {
        let g = abelian(&[9], 3);
        let x = g.generators()[0];
        let x2 = g.mul(x, x);
        // Doubling map given on the generator of C9.
        let h = hom_from_pairs(&g, &g, &[(x, x2)]).unwrap();
        assert_eq!(h.image(x2), g.pow(x, 4));
        let bad = hom_from_pairs(&g, &g, &[(x, x), (x2, x)]);
        assert!(matches!(bad, Err(Error::NotAHomomorphism(_))));
    }
}
