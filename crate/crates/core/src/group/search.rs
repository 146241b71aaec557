use std::collections::BTreeSet;

use super::{Elem, FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// Largest group `subgroup_search` will scan.
pub const SEARCH_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchConstraints {
    pub abelian: Option<bool>,
    pub exponent: Option<usize>,
}

/// All subgroups of order `target_order` generated by at most two elements
/// and satisfying `constraints`, ordered by member set.
pub fn subgroup_search(
    g: &FiniteGroup,
    target_order: usize,
    constraints: SearchConstraints,
) -> Result<Vec<Subgroup>> {
    if g.order() > SEARCH_CAP {
        return Err(Error::CapExceeded { cap: SEARCH_CAP });
    }
    if !g.is_table_backed() {
        return Err(Error::NotTableBacked);
    }
    if !g.order().is_multiple_of(target_order) {
        return Ok(Vec::new());
    }
    let orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let eligible: Vec<Elem> = g
        .elements()
        .filter(|&x| target_order.is_multiple_of(orders[x]))
        .filter(|&x| constraints.exponent.is_none_or(|e| e % orders[x] == 0))
        .collect();

    let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut mask = vec![false; g.order()];
    for (i, &a) in eligible.iter().enumerate() {
        for &b in &eligible[i..] {
            if let Some(members) = bounded_span(g, &[a, b], target_order, &mut mask) {
                if members.len() == target_order {
                    found.insert(members);
                }
            }
        }
    }

    let mut out = Vec::new();
    for members in found {
        let h = Subgroup::from_members(g, &members)?;
        if let Some(want) = constraints.abelian {
            if h.is_abelian(g) != want {
                continue;
            }
        }
        if let Some(e) = constraints.exponent {
            let exp = members.iter().map(|&x| orders[x]).max().unwrap_or(1);
            if exp != e {
                continue;
            }
        }
        out.push(h);
    }
    Ok(out)
}

/// Sorted members of `⟨gens⟩`, or `None` once it grows past `bound`.
fn bounded_span(
    g: &FiniteGroup,
    gens: &[Elem],
    bound: usize,
    mask: &mut [bool],
) -> Option<Vec<Elem>> {
    let mut members = vec![0];
    mask[0] = true;
    let mut head = 0;
    let mut overflow = false;
    'outer: while head < members.len() {
        let x = members[head];
        head += 1;
        for &s in gens {
            let y = g.mul(x, s);
            if !mask[y] {
                mask[y] = true;
                members.push(y);
                if members.len() > bound {
                    overflow = true;
                    break 'outer;
                }
            }
        }
    }
    for &m in &members {
        mask[m] = false;
    }
    if overflow {
        return None;
    }
    members.sort_unstable();
    Some(members)
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;

    #[test]
    fn cyclic_subgroup_of_c9() {
        let g = abelian(&[9], 3);
        let found = subgroup_search(&g, 3, SearchConstraints::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].order(), 3);
    }

    #[test]
    fn whole_group_found() {
        let g = dihedral8();
        let found = subgroup_search(&g, 8, SearchConstraints::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].order(), 8);
    }

    #[test]
    fn constraints_filter() {
        let g = dihedral8();
        // Order-4 subgroups of D8: one cyclic, two Klein four-groups.
        let all = subgroup_search(&g, 4, SearchConstraints::default()).unwrap();
        assert_eq!(all.len(), 3);
        let cyclic = subgroup_search(
            &g,
            4,
            SearchConstraints {
                abelian: Some(true),
                exponent: Some(4),
            },
        )
        .unwrap();
        assert_eq!(cyclic.len(), 1);
        let nonabelian = subgroup_search(
            &g,
            4,
            SearchConstraints {
                abelian: Some(false),
                exponent: None,
            },
        )
        .unwrap();
        assert!(nonabelian.is_empty());
    }
}
