use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::group::{quotient, subgroup_as_group, Elem, FiniteGroup, GroupConfig, Subgroup};

/// Tri-state verdict of one sub-check; failures carry a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "fail",
            Verdict::Skipped(_) => "skipped",
        }
    }

    pub fn detail(&self) -> Option<&str> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) | Verdict::Skipped(w) => Some(w),
        }
    }

    fn from_witness(w: Option<String>) -> Self {
        w.map_or(Verdict::Pass, Verdict::Fail)
    }
}

/// Which automorphisms "characteristic" and "equivariant" were checked
/// against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutRegime {
    /// The full automorphism group, enumerated.
    Enumerated,
    /// Only the automorphisms handed in by the caller.
    Supplied,
}

impl fmt::Display for AutRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutRegime::Enumerated => f.write_str("enumerated"),
            AutRegime::Supplied => f.write_str("supplied"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CertificateReport {
    pub checks: Vec<(String, Verdict)>,
    pub regime: Option<AutRegime>,
    pub automorphism_count: Option<usize>,
}

impl CertificateReport {
    /// True when no sub-check failed. Skipped checks are vacuous.
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|(_, v)| v.is_fail())
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.checks.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub(crate) fn push(&mut self, name: &str, v: Verdict) {
        self.checks.push((name.to_string(), v));
    }
}

/// A descending chain `G = G₁ ≥ G₂ ≥ … ≥ G_L` of subgroups of `group`.
///
/// Nothing is validated on construction; run [`check_filtration`].
#[derive(Debug, Clone)]
pub struct Filtration {
    group: Arc<FiniteGroup>,
    chain: Vec<Subgroup>,
}

impl Filtration {
    pub fn new(group: Arc<FiniteGroup>, chain: Vec<Subgroup>) -> Self {
        Filtration { group, chain }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Number of terms `L`.
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// `G_i`, for `1 ≤ i ≤ L`.
    pub fn level(&self, i: usize) -> &Subgroup {
        &self.chain[i - 1]
    }

    pub fn chain(&self) -> &[Subgroup] {
        &self.chain
    }

    /// `G_i / G_{i+1}` for `1 ≤ i < L`.
    pub fn factor(&self, i: usize, config: &GroupConfig) -> Result<FactorGroup> {
        FactorGroup::new(&self.group, self.level(i), self.level(i + 1), config)
    }

    /// Orders `|G/G_i|` for `i = 1..=L`.
    pub fn quotient_orders(&self) -> Vec<usize> {
        self.chain
            .iter()
            .map(|s| self.group.order() / s.order())
            .collect()
    }
}

/// `upper / lower` for normal subgroups `lower ≤ upper` of `G`, with the
/// map from elements of `upper` to the factor.
#[derive(Debug, Clone)]
pub struct FactorGroup {
    pub group: Arc<FiniteGroup>,
    /// Factor element for each element of `G` in `upper`, `u32::MAX` elsewhere.
    of_elem: Vec<u32>,
    /// A representative in `G` for each factor element.
    reps: Vec<Elem>,
}

impl FactorGroup {
    pub fn new(
        g: &Arc<FiniteGroup>,
        upper: &Subgroup,
        lower: &Subgroup,
        config: &GroupConfig,
    ) -> Result<Self> {
        let (sub, inclusion) = subgroup_as_group(g, upper, config)?;
        let inner = Subgroup::from_predicate(&sub, |x| lower.contains(inclusion.image(x)))?;
        let (fq, proj) = quotient(&sub, &inner, config)?;
        let mut of_elem = vec![u32::MAX; g.order()];
        let mut reps = vec![usize::MAX; fq.order()];
        for x in sub.elements() {
            let gx = inclusion.image(x);
            let f = proj.image(x);
            of_elem[gx] = f as u32;
            if reps[f] == usize::MAX || gx < reps[f] {
                reps[f] = gx;
            }
        }
        Ok(FactorGroup {
            group: fq,
            of_elem,
            reps,
        })
    }

    pub fn of(&self, x: Elem) -> Option<Elem> {
        match self.of_elem[x] {
            u32::MAX => None,
            f => Some(f as usize),
        }
    }

    /// Least-index representative in `G` of a factor element.
    pub fn rep(&self, f: Elem) -> Elem {
        self.reps[f]
    }

    pub fn reps(&self) -> &[Elem] {
        &self.reps
    }
}

/// Descending, normal, abelian factors, trivial last term.
pub fn check_filtration(g: &FiniteGroup, chain: &[Subgroup]) -> CertificateReport {
    let mut report = CertificateReport::default();
    let enc = |x: Elem| hex::encode(g.encoding(x));

    let starts = match chain.first() {
        Some(first) if first.order() == g.order() => Verdict::Pass,
        Some(first) => Verdict::Fail(format!(
            "first term has order {} not {}",
            first.order(),
            g.order()
        )),
        None => Verdict::Fail("empty chain".into()),
    };
    report.push("starts_at_group", starts);

    let mut descending = None;
    for (i, w) in chain.windows(2).enumerate() {
        if !w[1].is_subset_of(&w[0]) {
            descending = Some(format!("G_{} is not contained in G_{}", i + 2, i + 1));
            break;
        }
        if w[1].order() == w[0].order() {
            descending = Some(format!("G_{} = G_{}", i + 2, i + 1));
            break;
        }
    }
    report.push("descending", Verdict::from_witness(descending));

    let normal = chain.iter().enumerate().find_map(|(i, s)| {
        s.normality_witness(g)
            .map(|(n, x)| format!("G_{}: conjugate of {} by {} escapes", i + 1, enc(n), enc(x)))
    });
    report.push("normal", Verdict::from_witness(normal));

    let mut abelian = None;
    'outer: for (i, w) in chain.windows(2).enumerate() {
        let gens = w[0].gens();
        for (a_idx, &a) in gens.iter().enumerate() {
            for &b in &gens[a_idx + 1..] {
                if !w[1].contains(g.commutator(a, b)) {
                    abelian = Some(format!(
                        "G_{}/G_{} is nonabelian: [{}, {}] is not in G_{}",
                        i + 1,
                        i + 2,
                        enc(a),
                        enc(b),
                        i + 2
                    ));
                    break 'outer;
                }
            }
        }
    }
    report.push("abelian_factors", Verdict::from_witness(abelian));

    let terminal = match chain.last() {
        Some(s) if s.is_trivial() => Verdict::Pass,
        Some(s) => Verdict::Fail(format!("last term has order {}", s.order())),
        None => Verdict::Fail("empty chain".into()),
    };
    report.push("terminal_trivial", terminal);
    report
}

/// `G ≥ G^p ≥ (G^p)^p ≥ …`, where each term is generated by the p-th
/// powers of the previous one. Repeated terms end the chain.
pub fn power_filtration(g: &Arc<FiniteGroup>) -> Filtration {
    let mut chain = vec![Subgroup::whole(g)];
    loop {
        let last = chain.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let seeds: Vec<Elem> = last
            .members()
            .iter()
            .map(|&x| g.pow(x, g.prime() as i64))
            .collect();
        let next = crate::group::subgroup_generated(g, &seeds);
        if next == *last {
            break;
        }
        chain.push(next);
    }
    Filtration::new(g.clone(), chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::testing::*;

    #[test]
    fn power_filtration_of_c27() {
        let g = abelian(&[27], 3);
        let f = power_filtration(&g);
        assert_eq!(f.quotient_orders(), vec![1, 3, 9, 27]);
        assert!(check_filtration(&g, f.chain()).passed());
    }

    #[test]
    fn nonabelian_factor_fails() {
        let g = dihedral8();
        let chain = vec![Subgroup::whole(&g), Subgroup::trivial(&g)];
        let r = check_filtration(&g, &chain);
        assert!(!r.passed());
        assert!(r.verdict("abelian_factors").unwrap().is_fail());
        assert_eq!(r.verdict("normal").unwrap(), &Verdict::Pass);
    }

    #[test]
    fn non_descending_fails() {
        let g = abelian(&[9], 3);
        let c3 = Subgroup::from_predicate(&g, |x| g.encoding(x)[0].is_multiple_of(3)).unwrap();
        let chain = vec![Subgroup::whole(&g), Subgroup::trivial(&g), c3];
        let r = check_filtration(&g, &chain);
        assert!(r.verdict("descending").unwrap().is_fail());
        assert!(r.verdict("terminal_trivial").unwrap().is_fail());
    }

    #[test]
    fn factor_groups() {
        let g = abelian(&[3, 9], 3);
        let f = power_filtration(&g);
        let top = f.factor(1, &GroupConfig::default()).unwrap();
        assert_eq!(top.group.order(), 9);
        for x in g.elements() {
            assert_eq!(top.of(top.rep(top.of(x).unwrap())), top.of(x));
        }
    }
}
