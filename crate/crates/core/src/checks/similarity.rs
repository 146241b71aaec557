use std::sync::Arc;

use super::filtration::{
    check_filtration, AutRegime, CertificateReport, FactorGroup, Filtration, Verdict,
};
use crate::error::{Error, Result};
use crate::group::{
    enumerate_automorphisms, hom_from_images, is_characteristic, Automorphism, Elem, FiniteGroup,
    GroupConfig, GroupHom,
};

/// Groups up to this order are checked against their full automorphism group.
pub const ENUMERATION_CAP: usize = 512;

/// A filtration with maps `φ_i : G_{i-1}/G_i → G_i/G_{i+1}`, `2 ≤ i < L`.
#[derive(Debug, Clone)]
pub struct SimilarityStructure {
    filtration: Filtration,
    /// `factors[j-1] = G_j / G_{j+1}`.
    factors: Vec<FactorGroup>,
    /// `maps[i-2] = φ_i`.
    maps: Vec<GroupHom>,
}

impl SimilarityStructure {
    /// Builds every `φ_i` from a map on elements: `level_map(i, x)` must send
    /// `x ∈ G_{i-1}` into `G_i`, compatibly with cosets. Each `φ_i` is
    /// checked to be well defined and a homomorphism, but not to be bijective.
    pub fn from_element_map(
        filtration: Filtration,
        config: &GroupConfig,
        level_map: impl Fn(usize, Elem) -> Elem,
    ) -> Result<Self> {
        let g = filtration.group().clone();
        let len = filtration.len();
        let factors = (1..len)
            .map(|j| filtration.factor(j, config))
            .collect::<Result<Vec<_>>>()?;
        let mut maps = Vec::new();
        for i in 2..len {
            let (src, dst) = (&factors[i - 2], &factors[i - 1]);
            let mut images = vec![u32::MAX; src.group.order()];
            for &x in filtration.level(i - 1).members() {
                let y = level_map(i, x);
                let fy = dst.of(y).ok_or_else(|| {
                    Error::NotWellDefined(format!(
                        "φ_{i} sends {} outside G_{i}",
                        hex::encode(g.encoding(x))
                    ))
                })? as u32;
                let fx = src.of(x).unwrap();
                if images[fx] == u32::MAX {
                    images[fx] = fy;
                } else if images[fx] != fy {
                    return Err(Error::NotWellDefined(format!(
                        "φ_{i} disagrees on the coset of {}",
                        hex::encode(g.encoding(x))
                    )));
                }
            }
            let gen_images: Vec<Elem> = src
                .group
                .generators()
                .iter()
                .map(|&s| images[s] as usize)
                .collect();
            let hom = hom_from_images(&src.group, &dst.group, &gen_images)
                .map_err(|e| Error::NotWellDefined(format!("φ_{i}: {e}")))?;
            if hom.images().zip(&images).any(|(a, &b)| a as u32 != b) {
                return Err(Error::NotWellDefined(format!(
                    "φ_{i} is not a homomorphism"
                )));
            }
            maps.push(hom);
        }
        Ok(SimilarityStructure {
            filtration,
            factors,
            maps,
        })
    }

    /// As [`Self::from_element_map`], additionally requiring every `φ_i`
    /// to be bijective.
    pub fn from_element_map_strict(
        filtration: Filtration,
        config: &GroupConfig,
        level_map: impl Fn(usize, Elem) -> Elem,
    ) -> Result<Self> {
        let s = Self::from_element_map(filtration, config, level_map)?;
        for (k, m) in s.maps.iter().enumerate() {
            if !m.is_bijective() {
                return Err(Error::NotIso(format!(
                    "φ_{} maps a group of order {} to one of order {} non-bijectively",
                    k + 2,
                    m.source().order(),
                    m.target().order()
                )));
            }
        }
        Ok(s)
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.filtration.group()
    }

    /// `G_j / G_{j+1}`.
    pub fn factor(&self, j: usize) -> &FactorGroup {
        &self.factors[j - 1]
    }

    /// `φ_i`, for `2 ≤ i < L`.
    pub fn phi(&self, i: usize) -> &GroupHom {
        &self.maps[i - 2]
    }

    pub fn phi_count(&self) -> usize {
        self.maps.len()
    }
}

/// Automorphisms to test against: the full group when small enough,
/// otherwise whatever the caller supplied.
pub fn automorphisms_for(
    g: &Arc<FiniteGroup>,
    supplied: &[Automorphism],
) -> Result<(Vec<Automorphism>, AutRegime)> {
    if g.order() <= ENUMERATION_CAP && g.is_table_backed() {
        Ok((
            enumerate_automorphisms(g, ENUMERATION_CAP)?,
            AutRegime::Enumerated,
        ))
    } else {
        Ok((supplied.to_vec(), AutRegime::Supplied))
    }
}

/// Full certificate: filtration checks, characteristic terms, `φ_i`
/// bijective and equivariant under every automorphism in `auts`, and the
/// growth law `|G/G_i| = |G/G_2|^{i-1}`.
pub fn check_self_similarity(
    similarity: &SimilarityStructure,
    auts: &[Automorphism],
    regime: AutRegime,
) -> CertificateReport {
    let filtration = similarity.filtration();
    let g = filtration.group();
    let mut report = check_filtration(g, filtration.chain());
    report.regime = Some(regime);
    report.automorphism_count = Some(auts.len());

    let characteristic = filtration.chain().iter().enumerate().find_map(|(i, s)| {
        (!is_characteristic(s, auts)).then(|| format!("G_{} is moved by an automorphism", i + 1))
    });
    report.push(
        "characteristic",
        characteristic.map_or(Verdict::Pass, Verdict::Fail),
    );

    if similarity.phi_count() == 0 {
        report.push(
            "phi_isomorphism",
            Verdict::Skipped("no φ maps (L ≤ 2)".into()),
        );
        report.push(
            "phi_equivariance",
            Verdict::Skipped("no φ maps (L ≤ 2)".into()),
        );
    } else {
        let noniso = (2..filtration.len()).find_map(|i| {
            let phi = similarity.phi(i);
            (!phi.is_bijective()).then(|| {
                format!(
                    "φ_{i}: |G_{}/G_{i}| = {} but |G_{i}/G_{}| = {}",
                    i - 1,
                    phi.source().order(),
                    i + 1,
                    phi.target().order()
                )
            })
        });
        report.push(
            "phi_isomorphism",
            noniso.map_or(Verdict::Pass, Verdict::Fail),
        );

        let equivariance = if report.verdict("characteristic").unwrap().is_fail() {
            Verdict::Skipped("filtration is not stable under the automorphisms".into())
        } else {
            match equivariance_witness(similarity, auts) {
                Some(w) => Verdict::Fail(w),
                None => Verdict::Pass,
            }
        };
        report.push("phi_equivariance", equivariance);
    }

    let orders = filtration.quotient_orders();
    let growth = if orders.len() < 2 {
        Verdict::Skipped("chain has a single term".into())
    } else {
        let base = orders[1] as u128;
        let bad = (2..=orders.len())
            .find(|&i| Some(orders[i - 1] as u128) != base.checked_pow(i as u32 - 1));
        match bad {
            Some(i) => Verdict::Fail(format!(
                "|G/G_{i}| = {} but |G/G_2|^{} = {}",
                orders[i - 1],
                i - 1,
                base.checked_pow(i as u32 - 1)
                    .map_or("overflow".into(), |v| v.to_string())
            )),
            None => Verdict::Pass,
        }
    };
    report.push("growth_law", growth);
    report
}

/// First `(σ, i, coset)` with `φ_i(σ̄ x) ≠ σ̄(φ_i x)`.
fn equivariance_witness(similarity: &SimilarityStructure, auts: &[Automorphism]) -> Option<String> {
    let g = similarity.group();
    let len = similarity.filtration().len();
    for (k, sigma) in auts.iter().enumerate() {
        for i in 2..len {
            let (src, dst) = (similarity.factor(i - 1), similarity.factor(i));
            let phi = similarity.phi(i);
            for f in src.group.elements() {
                let x = src.rep(f);
                let lhs = phi.image(src.of(sigma.apply(x)).unwrap());
                let rhs = dst.of(sigma.apply(dst.rep(phi.image(f)))).unwrap();
                if lhs != rhs {
                    return Some(format!(
                        "automorphism #{k} does not commute with φ_{i} on the coset of {}",
                        hex::encode(g.encoding(x))
                    ));
                }
            }
        }
    }
    None
}
