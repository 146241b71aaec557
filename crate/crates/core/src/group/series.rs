use super::subgroup::{normal_closure, Subgroup};
use super::FiniteGroup;
use crate::error::{Error, Result};

/// `[H, H]` for a subgroup `H` normal in `g`, as the normal closure in `g`
/// of the commutators of `H`'s generators.
pub fn derived_subgroup(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    let gens = h.gens();
    let mut seeds = Vec::new();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            seeds.push(g.commutator(a, b));
        }
    }
    normal_closure(g, &seeds)
}

/// `G = D₀ > D₁ > … > D_k = 1`.
pub fn derived_series(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let mut series = vec![Subgroup::whole(g)];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            return Ok(series);
        }
        let next = derived_subgroup(g, last);
        if next == *last {
            return Err(Error::OracleInconsistent(format!(
                "derived series stabilizes at order {} (group is not solvable)",
                next.order()
            )));
        }
        series.push(next);
    }
}

/// Number of strict steps in the derived series.
pub fn derived_length(g: &FiniteGroup) -> Result<usize> {
    Ok(derived_series(g)?.len() - 1)
}

/// `γ₁ = G`, `γᵢ₊₁ = [γᵢ, G]`, down to the trivial subgroup.
pub fn lower_central_series(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let mut series = vec![Subgroup::whole(g)];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            return Ok(series);
        }
        let mut seeds = Vec::new();
        for &h in last.gens() {
            for &x in g.generators() {
                seeds.push(g.commutator(h, x));
            }
        }
        let next = normal_closure(g, &seeds);
        if next == *last {
            return Err(Error::OracleInconsistent(format!(
                "lower central series stabilizes at order {} (group is not nilpotent)",
                next.order()
            )));
        }
        series.push(next);
    }
}

pub fn nilpotency_class(g: &FiniteGroup) -> Result<usize> {
    Ok(lower_central_series(g)?.len() - 1)
}

/// `Φ(G) = G^p [G, G]`.
pub fn frattini_subgroup(g: &FiniteGroup) -> Subgroup {
    let gens = g.generators();
    let mut seeds: Vec<_> = gens.iter().map(|&x| g.pow(x, g.prime() as i64)).collect();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            seeds.push(g.commutator(a, b));
        }
    }
    normal_closure(g, &seeds)
}
