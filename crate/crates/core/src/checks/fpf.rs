//! Fixed-point-free automorphisms and the derived-length evidence for
//! `H(G, n)`.

use std::sync::Arc;

use super::filtration::Filtration;
use super::similarity::ENUMERATION_CAP;
use crate::error::{Error, Result};
use crate::group::{
    derived_series, derived_subgroup, enumerate_automorphisms, fixed_subgroup,
    lower_central_series, Automorphism, Elem, FiniteGroup, Subgroup,
};

pub fn fpf_check(g: &FiniteGroup, sigma: &Automorphism) -> bool {
    fixed_subgroup(g, sigma).is_trivial()
}

/// Every automorphism of exact order `n` fixing only the identity.
pub fn fpf_search(g: &Arc<FiniteGroup>, n: usize) -> Result<Vec<Automorphism>> {
    Ok(enumerate_automorphisms(g, ENUMERATION_CAP)?
        .into_iter()
        .filter(|s| s.order() == n && fpf_check(g, s))
        .collect())
}

/// Order of the fixed subgroup of the map induced by `σ` on `G/N`.
pub(crate) fn fixed_order_mod(g: &FiniteGroup, sigma: &Automorphism, n: &Subgroup) -> usize {
    let inside = |x: Elem| n.contains(g.mul(g.inv(x), sigma.apply(x)));
    g.elements().filter(|&x| inside(x)).count() / n.order()
}

/// `σ² = 1`, `σ ≠ 1`, and `σ` fixes only the identity of `G/G'`.
pub fn property_iv_check(g: &FiniteGroup, sigma: &Automorphism) -> bool {
    if sigma.is_identity() || sigma.order() != 2 {
        return false;
    }
    let commutator = derived_subgroup(g, &Subgroup::whole(g));
    fixed_order_mod(g, sigma, &commutator) == 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyLevel {
    pub level: usize,
    pub quotient_order: usize,
    pub fpf: bool,
    pub derived_length: usize,
    pub nilpotency_class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyRow {
    pub label: String,
    pub order: usize,
    pub levels: Vec<SurveyLevel>,
    pub error: Option<String>,
}

impl SurveyRow {
    fn failed(label: String, order: usize, e: Error) -> Self {
        SurveyRow {
            label,
            order,
            levels: Vec::new(),
            error: Some(e.to_string()),
        }
    }

    /// Largest derived length over the quotients on which `σ` is
    /// fixed-point-free; `None` when there are none.
    pub fn max_fpf_derived_length(&self) -> Option<usize> {
        self.levels
            .iter()
            .filter(|l| l.fpf)
            .map(|l| l.derived_length)
            .max()
    }

    pub fn max_fpf_class(&self) -> Option<usize> {
        self.levels
            .iter()
            .filter(|l| l.fpf)
            .map(|l| l.nilpotency_class)
            .max()
    }

    pub fn any_fpf(&self) -> bool {
        self.levels.iter().any(|l| l.fpf)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyTable {
    pub n: usize,
    pub rows: Vec<SurveyRow>,
}

impl SurveyTable {
    /// The empirical bound: largest derived length of any fpf quotient.
    pub fn derived_length_bound(&self) -> Option<usize> {
        self.rows
            .iter()
            .filter_map(|r| r.max_fpf_derived_length())
            .max()
    }

    pub fn class_bound(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.max_fpf_class()).max()
    }
}

/// For each `(label, filtration)` builds `σ` with `sigma_for`, requires it
/// to have order `n`, and records at every level `G/G_i` (`i ≥ 2`) whether
/// `σ̄` is fixed-point-free, together with the derived length and class of
/// `G/G_i`. Row failures are recorded and the survey moves on.
pub fn derived_length_survey<I, F>(family: I, sigma_for: F, n: usize) -> SurveyTable
where
    I: IntoIterator<Item = (String, Result<Filtration>)>,
    F: Fn(&Arc<FiniteGroup>) -> Result<Automorphism>,
{
    let rows = family
        .into_iter()
        .map(|(label, filtration)| {
            let filtration = match filtration {
                Ok(f) => f,
                Err(e) => return SurveyRow::failed(label, 0, e),
            };
            let g = filtration.group();
            match survey_row(&filtration, &sigma_for, n) {
                Ok(levels) => SurveyRow {
                    label,
                    order: g.order(),
                    levels,
                    error: None,
                },
                Err(e) => SurveyRow::failed(label, g.order(), e),
            }
        })
        .collect();
    SurveyTable { n, rows }
}

fn survey_row<F>(filtration: &Filtration, sigma_for: &F, n: usize) -> Result<Vec<SurveyLevel>>
where
    F: Fn(&Arc<FiniteGroup>) -> Result<Automorphism>,
{
    let g = filtration.group();
    let sigma = sigma_for(g)?;
    if sigma.order() != n {
        return Err(Error::InvalidParameter(format!(
            "automorphism has order {} not {n}",
            sigma.order()
        )));
    }
    for i in 1..=filtration.len() {
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
    let lower = lower_central_series(g)?;
    let below = |series: &[Subgroup], n: &Subgroup| {
        series
            .iter()
            .position(|s| s.is_subset_of(n))
            .unwrap_or(series.len())
    };
    Ok((2..=filtration.len())
        .map(|i| {
            let gi = filtration.level(i);
            SurveyLevel {
                level: i,
                quotient_order: g.order() / gi.order(),
                fpf: fixed_order_mod(g, &sigma, gi) == 1,
                derived_length: below(&derived, gi),
                nilpotency_class: below(&lower, gi),
            }
        })
        .collect())
}
