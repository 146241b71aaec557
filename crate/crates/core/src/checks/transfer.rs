//! The transfer `V : Q/Q' → H/H'` and the kernel-order property for normal
//! subgroups with cyclic quotient.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{
    derived_subgroup, hom_from_images, quotient, subgroup_as_group, subgroup_generated, Elem,
    FiniteGroup, GroupConfig, GroupHom, Subgroup,
};

/// Subgroups of `Q/Q'` examined by [`property_v_check`] before giving up.
pub const SUBGROUP_CAP: usize = 4096;

/// Right-coset labels `Hx` for every element, and two transversals: least
/// and greatest index per coset.
fn right_cosets(q: &FiniteGroup, h: &Subgroup) -> (Vec<usize>, Vec<Elem>, Vec<Elem>) {
    let mut label = vec![usize::MAX; q.order()];
    let (mut low, mut high) = (Vec::new(), Vec::new());
    for x in q.elements() {
        if label[x] != usize::MAX {
            continue;
        }
        let c = low.len();
        let mut hi = x;
        for &k in h.members() {
            let y = q.mul(k, x);
            label[y] = c;
            hi = hi.max(y);
        }
        low.push(x);
        high.push(hi);
    }
    (label, low, high)
}

/// Transfer into `H/H'` of one element, using transversal `reps`.
fn transfer_element(
    q: &FiniteGroup,
    label: &[usize],
    reps: &[Elem],
    to_hab: &dyn Fn(Elem) -> Elem,
    hab: &FiniteGroup,
    x: Elem,
) -> Elem {
    reps.iter().fold(hab.identity(), |acc, &t| {
        let tx = q.mul(t, x);
        let h = q.mul(tx, q.inv(reps[label[tx]]));
        hab.mul(acc, to_hab(h))
    })
}

/// The transfer from `Q/Q'` to `H/H'`, computed for two transversals and
/// checked to be constant on `Q'`-cosets and a homomorphism.
pub fn transfer_map(q: &Arc<FiniteGroup>, h: &Subgroup, config: &GroupConfig) -> Result<GroupHom> {
    let q_prime = derived_subgroup(q, &Subgroup::whole(q));
    let (qab, q_proj) = quotient(q, &q_prime, config)?;
    let (hg, inclusion) = subgroup_as_group(q, h, config)?;
    let h_prime = derived_subgroup(&hg, &Subgroup::whole(&hg));
    let (hab, h_proj) = quotient(&hg, &h_prime, config)?;

    let mut into_h = vec![usize::MAX; q.order()];
    for y in hg.elements() {
        into_h[inclusion.image(y)] = y;
    }
    let to_hab = |x: Elem| h_proj.image(into_h[x]);

    let (label, low, high) = right_cosets(q, h);
    let mut images = vec![usize::MAX; qab.order()];
    for x in q.elements() {
        let v = transfer_element(q, &label, &low, &to_hab, &hab, x);
        if transfer_element(q, &label, &high, &to_hab, &hab, x) != v {
            return Err(Error::NotWellDefined(format!(
                "transfer of {} depends on the transversal",
                hex::encode(q.encoding(x))
            )));
        }
        let fx = q_proj.image(x);
        if images[fx] == usize::MAX {
            images[fx] = v;
        } else if images[fx] != v {
            return Err(Error::NotWellDefined(format!(
                "transfer is not constant on the Q'-coset of {}",
                hex::encode(q.encoding(x))
            )));
        }
    }
    let gens: Vec<Elem> = qab.generators().iter().map(|&s| images[s]).collect();
    let hom = hom_from_images(&qab, &hab, &gens)?;
    if hom.images().zip(&images).any(|(a, &b)| a != b) {
        return Err(Error::NotAHomomorphism("transfer".into()));
    }
    Ok(hom)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferReport {
    pub subgroup: Subgroup,
    /// `[Q : H]`.
    pub index: usize,
    pub kernel_order: usize,
    /// `|Q/Q'|`.
    pub abelianization_order: usize,
}

impl TransferReport {
    /// `|Ker V| = [Q : H]`.
    pub fn holds(&self) -> bool {
        self.kernel_order == self.index
    }
}

/// All subgroups of a small abelian group, by repeated one-element
/// extension from the trivial subgroup.
fn all_subgroups(a: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut out = vec![Subgroup::trivial(a)];
    seen.insert(out[0].members().to_vec());
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for x in a.elements() {
                if s.contains(x) {
                    continue;
                }
                let mut seeds = s.gens().to_vec();
                seeds.push(x);
                let t = subgroup_generated(a, &seeds);
                if seen.insert(t.members().to_vec()) {
                    if seen.len() > SUBGROUP_CAP {
                        return Err(Error::CapExceeded { cap: SUBGROUP_CAP });
                    }
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

fn cyclic_quotient(a: &FiniteGroup, s: &Subgroup) -> bool {
    let index = a.order() / s.order();
    a.elements().any(|x| {
        let mut k = 1;
        let mut y = x;
        while !s.contains(y) {
            y = a.mul(y, x);
            k += 1;
        }
        k == index
    })
}

/// One report per proper normal `H ◁ Q` with `Q/H` cyclic. Such `H`
/// contain `Q'`, so they are the preimages of the subgroups of `Q/Q'` with
/// cyclic quotient; the enumeration is exhaustive.
pub fn property_v_check(q: &Arc<FiniteGroup>, config: &GroupConfig) -> Result<Vec<TransferReport>> {
    if !q.is_table_backed() {
        return Err(Error::NotTableBacked);
    }
    let q_prime = derived_subgroup(q, &Subgroup::whole(q));
    let (qab, proj) = quotient(q, &q_prime, config)?;
    let mut reports = Vec::new();
    for s in all_subgroups(&qab)? {
        if s.order() == qab.order() || !cyclic_quotient(&qab, &s) {
            continue;
        }
        let h = Subgroup::from_predicate(q, |x| s.contains(proj.image(x)))?;
        let v = transfer_map(q, &h, config)?;
        reports.push(TransferReport {
            index: q.order() / h.order(),
            kernel_order: v.kernel().order(),
            abelianization_order: qab.order(),
            subgroup: h,
        });
    }
    reports.sort_by_key(|r| (r.index, r.subgroup.members().to_vec()));
    Ok(reports)
}
