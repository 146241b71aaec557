//! Generator rank and the Golod–Shafarevich inequality.

use crate::group::{frattini_subgroup, FiniteGroup};

/// `r > d²/4`, decided exactly as `4r > d²`.
pub fn gs_check(d: u64, r: u64) -> bool {
    4 * u128::from(r) > u128::from(d) * u128::from(d)
}

/// `d(G) = log_p |G/Φ(G)|`.
pub fn frattini_rank(g: &FiniteGroup) -> usize {
    let index = g.order() / frattini_subgroup(g).order();
    crate::group::log_p(index, g.prime()) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsReport {
    pub d: u64,
    pub r: u64,
    pub holds: bool,
    /// `r` was read off a presentation and only bounds the relation rank.
    pub r_is_upper_bound: bool,
    pub caveat: Option<String>,
}

pub fn gs_report(d: u64, r: u64, r_is_upper_bound: bool) -> GsReport {
    let holds = gs_check(d, r);
    let caveat = (holds && d == r && d > 2).then(|| {
        format!(
            "4r = {} > d² = {}: the literal inequality holds although d = r = {d} > 2; \
             the sharper bound for relators of Zassenhaus depth 3 is not applied",
            4 * r,
            d * d
        )
    });
    GsReport {
        d,
        r,
        holds,
        r_is_upper_bound,
        caveat,
    }
}
