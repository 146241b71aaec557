//! Fixed-point propagation through a similarity structure.
//!
//! Given `σ` stabilizing every `G_i`, the engine computes the fixed points
//! of `σ̄` on each `G/G_i`. Either all of them are trivial, or there is a
//! least level `i` with a nontrivial fixed coset; that coset lies in
//! `G_{i-1}/G_i`, and pulling it back along `φ_{i-1}, φ_{i-2}, …` must give
//! σ-fixed cosets all the way down to `G/G_2`. Every step is checked by
//! direct computation.

use super::similarity::SimilarityStructure;
use crate::error::{Error, Result};
use crate::group::{derived_series, Automorphism, Elem, FiniteGroup, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRecord {
    pub level: usize,
    /// `|G/G_i|`.
    pub quotient_order: usize,
    pub derived_length: usize,
    /// Order of the fixed subgroup of `σ̄` on `G/G_i`.
    pub fixed_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailEntry {
    pub level: usize,
    /// Encoding of a representative in `G` of the coset in `G_{level-1}/G_level`.
    pub representative: Vec<u8>,
    pub sigma_fixed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Theorem1Outcome {
    /// `σ̄` has no nontrivial fixed point on any `G/G_i`.
    FixedPointFree,
    /// A verified nontrivial σ-fixed element of `G/G_2`.
    FixedPointAtBase { representative: Vec<u8> },
    /// A pulled-back coset failed to be σ-fixed (or `φ` could not be
    /// inverted). This falsifies the equivariance of the similarity maps.
    PropagationFailure { level: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Report {
    pub depth: usize,
    pub sigma_order: usize,
    pub levels: Vec<LevelRecord>,
    pub minimal_fixed_level: Option<usize>,
    /// Pull-back from the minimal fixed level; empty when that level is 2.
    pub trail: Vec<TrailEntry>,
    /// Pull-back from the deepest level whose bottom factor has a nontrivial
    /// fixed coset, exercising every `φ_i` on the way down.
    pub deep_trail: Vec<TrailEntry>,
    pub outcome: Theorem1Outcome,
}

impl Theorem1Report {
    /// Either fixed-point-free throughout or a verified fixed point of
    /// `G/G_2` was produced.
    pub fn dichotomy_holds(&self) -> bool {
        !matches!(self.outcome, Theorem1Outcome::PropagationFailure { .. })
    }

    pub fn max_derived_length(&self) -> usize {
        self.levels
            .iter()
            .map(|l| l.derived_length)
            .max()
            .unwrap_or(0)
    }
}

/// `x⁻¹ σ(x) ∈ N`: `x` is σ-fixed modulo `N`.
fn fixed_mod(g: &FiniteGroup, sigma: &Automorphism, n: &Subgroup, x: Elem) -> bool {
    n.contains(g.mul(g.inv(x), sigma.apply(x)))
}

pub fn theorem1_engine(
    similarity: &SimilarityStructure,
    sigma: &Automorphism,
) -> Result<Theorem1Report> {
    let filtration = similarity.filtration();
    let g = filtration.group();
    let len = filtration.len();
    for i in 1..=len {
        let level = filtration.level(i);
        if level
            .members()
            .iter()
            .any(|&x| !level.contains(sigma.apply(x)))
        {
            return Err(Error::NotStable { level: i });
        }
    }

    let derived = derived_series(g)?;
    let mut levels = Vec::new();
    for i in 2..=len {
        let gi = filtration.level(i);
        let fixed = g.elements().filter(|&x| fixed_mod(g, sigma, gi, x)).count() / gi.order();
        // Derived length of G/N is the least k with D_k(G) ≤ N.
        let dl = derived
            .iter()
            .position(|d| d.is_subset_of(gi))
            .unwrap_or(derived.len());
        levels.push(LevelRecord {
            level: i,
            quotient_order: g.order() / gi.order(),
            derived_length: dl,
            fixed_order: fixed,
        });
    }

    let minimal = levels.iter().find(|r| r.fixed_order > 1).map(|r| r.level);
    let mut trail = Vec::new();
    let outcome = match minimal {
        None => Theorem1Outcome::FixedPointFree,
        Some(2) => {
            let g2 = filtration.level(2);
            let x = g
                .elements()
                .find(|&x| !g2.contains(x) && fixed_mod(g, sigma, g2, x))
                .expect("a nontrivial fixed coset exists at level 2");
            Theorem1Outcome::FixedPointAtBase {
                representative: g.encoding(x).to_vec(),
            }
        }
        Some(i) => {
            let (gi, below) = (filtration.level(i), filtration.level(i - 1));
            let x = g
                .elements()
                .find(|&x| !gi.contains(x) && fixed_mod(g, sigma, gi, x))
                .expect("a nontrivial fixed coset exists at the minimal level");
            if !below.contains(x) {
                Theorem1Outcome::PropagationFailure {
                    level: i,
                    reason: "fixed coset does not lie in the bottom factor".into(),
                }
            } else {
                let (entries, outcome) = propagate(similarity, sigma, i, x);
                trail = entries;
                outcome
            }
        }
    };

    // Deepest level whose bottom factor G_{i-1}/G_i carries a nontrivial fixed coset.
    let mut deep_trail = Vec::new();
    let mut deep_outcome = None;
    for i in (3..=len).rev() {
        let (gi, below) = (filtration.level(i), filtration.level(i - 1));
        if let Some(&x) = below
            .members()
            .iter()
            .find(|&&x| !gi.contains(x) && fixed_mod(g, sigma, gi, x))
        {
            let (entries, out) = propagate(similarity, sigma, i, x);
            deep_trail = entries;
            deep_outcome = Some(out);
            break;
        }
    }

    let outcome = match (outcome, deep_outcome) {
        (o @ Theorem1Outcome::PropagationFailure { .. }, _) => o,
        (_, Some(o @ Theorem1Outcome::PropagationFailure { .. })) => o,
        (o, _) => o,
    };

    Ok(Theorem1Report {
        depth: len,
        sigma_order: sigma.order(),
        levels,
        minimal_fixed_level: minimal,
        trail,
        deep_trail,
        outcome,
    })
}

/// Pulls a nontrivial σ-fixed coset `x G_i ∈ G_{i-1}/G_i` back along the
/// `φ` maps to `G_1/G_2`, verifying each step.
fn propagate(
    similarity: &SimilarityStructure,
    sigma: &Automorphism,
    start: usize,
    x: Elem,
) -> (Vec<TrailEntry>, Theorem1Outcome) {
    let filtration = similarity.filtration();
    let g = filtration.group();
    let mut trail = vec![TrailEntry {
        level: start,
        representative: g.encoding(x).to_vec(),
        sigma_fixed: fixed_mod(g, sigma, filtration.level(start), x),
    }];
    let mut current = x;
    for level in (2..start).rev() {
        // current ∈ G_level \ G_{level+1}; pull back along φ_level.
        let (src, dst) = (similarity.factor(level - 1), similarity.factor(level));
        let phi = similarity.phi(level);
        let target = dst.of(current).expect("trail element lies in the factor");
        let pre: Vec<Elem> = src
            .group
            .elements()
            .filter(|&f| phi.image(f) == target)
            .collect();
        if pre.len() != 1 {
            return (
                trail,
                Theorem1Outcome::PropagationFailure {
                    level,
                    reason: format!("φ_{level} has {} preimages of the coset", pre.len()),
                },
            );
        }
        let y = src.rep(pre[0]);
        let gl = filtration.level(level);
        let fixed = fixed_mod(g, sigma, gl, y);
        trail.push(TrailEntry {
            level,
            representative: g.encoding(y).to_vec(),
            sigma_fixed: fixed,
        });
        if !fixed || gl.contains(y) {
            return (
                trail,
                Theorem1Outcome::PropagationFailure {
                    level,
                    reason: if fixed {
                        "pulled-back coset is trivial".into()
                    } else {
                        format!("pulled-back coset is not σ-fixed in G/G_{level}")
                    },
                },
            );
        }
        current = y;
    }
    let base = trail.last().unwrap().representative.clone();
    (
        trail,
        Theorem1Outcome::FixedPointAtBase {
            representative: base,
        },
    )
}
